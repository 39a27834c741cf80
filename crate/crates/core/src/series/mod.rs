//! Truncated power series over F_{p^n}.
//!
//! A [`TruncSeries`] at precision `N` stores `a_0 .. a_N` and stands for the
//! class of a power series modulo `X^{N+1}`. Binary operations return the
//! smaller of the two precisions; identity checks compare up to the smaller
//! precision of both sides ([`TruncSeries::agrees_with`]).

mod additive;
mod artin_hasse;
mod json;
mod random;
mod reduction;

pub use additive::{apply_additive, gamma_inverse, AdditiveSeries, GammaSeries};
pub use artin_hasse::{artin_hasse, artin_hasse_rational};
pub use json::{AdditiveSeriesJson, SeriesJson};
pub use random::{
    random_gamma, random_gamma_from, random_unit, random_unit_from, series_rng, SeriesRng,
};
pub use reduction::{m_series, m_series_definitional, nuff_closed_form, w_series};

use std::fmt;
use std::ops::Deref;

use crate::digits::{is_critical, PrimePower};
use crate::error::{Error, Result};
use crate::field::{Fe, Field, FieldElement};

#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    field: Field,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| format!("{:?}X^{i}", self.field.coords(c)))
            .collect();
        write!(f, "{} + O(X^{})", terms.join(" + "), self.prec() + 1)
    }
}

impl TruncSeries {
    pub fn zero(field: &Field, prec: usize) -> Self {
        TruncSeries {
            field: field.clone(),
            coeffs: vec![Fe::ZERO; prec + 1],
        }
    }

    pub fn one(field: &Field, prec: usize) -> Self {
        Self::monomial(field, prec, 0, Fe::ONE)
    }

    /// The series `X`.
    pub fn x(field: &Field, prec: usize) -> Self {
        Self::monomial(field, prec, 1, Fe::ONE)
    }

    /// `c X^e`; the zero series when `e` exceeds the precision.
    pub fn monomial(field: &Field, prec: usize, e: usize, c: Fe) -> Self {
        let mut s = Self::zero(field, prec);
        if e <= prec {
            s.coeffs[e] = c;
        }
        s
    }

    /// Takes `a_0 .. a_N`; the precision is `coeffs.len() - 1`.
    pub fn from_coeffs(field: &Field, coeffs: Vec<Fe>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| c.index() >= field.order()) {
            return Err(Error::BadCoordinates);
        }
        Ok(TruncSeries {
            field: field.clone(),
            coeffs,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn coeff_element(&self, i: usize) -> FieldElement {
        self.field.element(self.coeff(i))
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, i: usize, c: Fe) {
        if i <= self.prec() {
            self.coeffs[i] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Exponents with nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        self.nonzero_terms().map(|(i, _)| i).collect()
    }

    fn nonzero_terms(&self) -> impl Iterator<Item = (usize, Fe)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (i, c))
    }

    pub fn truncate(&self, prec: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(prec.min(self.prec()) + 1, Fe::ZERO);
        TruncSeries {
            field: self.field.clone(),
            coeffs,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Equality of the classes modulo `X^{min(N_a, N_b) + 1}`.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    /// First exponent (up to the common precision) where the two differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        if self.field != other.field {
            return Some(0);
        }
        let n = self.prec().min(other.prec());
        (0..=n).find(|&i| self.coeffs[i] != other.coeffs[i])
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.prec().min(other.prec());
        let f = &self.field;
        let coeffs = (0..=n)
            .map(|i| f.add(self.coeffs[i], other.coeffs[i]))
            .collect();
        Ok(TruncSeries {
            field: f.clone(),
            coeffs,
        })
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        TruncSeries {
            field: f.clone(),
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fe) -> Self {
        let f = &self.field;
        TruncSeries {
            field: f.clone(),
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// Cauchy product at precision `min(N_F, N_G)`. Iterates over the
    /// nonzero terms of the sparser factor.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.prec().min(other.prec());
        Ok(mul_truncated(&self.field, &self.coeffs, &other.coeffs, n))
    }

    /// Multiplicative inverse of a unit.
    pub fn inv_mult(&self) -> Result<Self> {
        let f = &self.field;
        let a0_inv = f.inv(self.coeffs[0]).map_err(|_| Error::NotUnit)?;
        let n = self.prec();
        let mut g = vec![Fe::ZERO; n + 1];
        g[0] = a0_inv;
        let support: Vec<(usize, Fe)> = self.nonzero_terms().filter(|&(i, _)| i > 0).collect();
        for m in 1..=n {
            let mut acc = Fe::ZERO;
            for &(j, a) in support.iter().take_while(|(j, _)| *j <= m) {
                acc = f.add(acc, f.mul(a, g[m - j]));
            }
            g[m] = f.neg(f.mul(acc, a0_inv));
        }
        Ok(TruncSeries {
            field: f.clone(),
            coeffs: g,
        })
    }

    /// Formal derivative. The top coefficient is lost, so the result has
    /// precision `N - 1` (or 0 for constants).
    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let n = self.prec();
        let coeffs = if n == 0 {
            vec![Fe::ZERO]
        } else {
            (1..=n)
                .map(|i| f.mul(f.from_int((i as u64 % f.p()) as i64), self.coeffs[i]))
                .collect()
        };
        TruncSeries {
            field: f.clone(),
            coeffs,
        }
    }

    /// `X F'(X)` at the same precision as `F`.
    pub fn x_derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| f.mul(f.from_int((i as u64 % f.p()) as i64), c))
            .collect();
        TruncSeries {
            field: f.clone(),
            coeffs,
        }
    }

    /// `F(G(X))` for `G(0) = 0`, at precision `min(N_F, N_G)`, by Horner's
    /// rule. Terms of `F` above `N / val(G)` cannot contribute and are skipped.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let f = &self.field;
        let n = self.prec().min(inner.prec());
        let Some(v) = inner.truncate(n).valuation() else {
            return Ok(TruncSeries::monomial(f, n, 0, self.coeffs[0]));
        };
        let top = (n / v).min(self.prec());
        let mut acc = vec![Fe::ZERO; n + 1];
        acc[0] = self.coeffs[top];
        for i in (0..top).rev() {
            acc = mul_truncated(f, &acc, &inner.coeffs, n).coeffs;
            acc[0] = f.add(acc[0], self.coeffs[i]);
        }
        Ok(TruncSeries {
            field: f.clone(),
            coeffs: acc,
        })
    }

    /// Compositional inverse of `G = a_1 X + ..` with `a_1 != 0`, by Newton
    /// iteration `h <- h - (G(h) - X) / G'(h)` with doubling precision.
    pub fn revert(&self) -> Result<Self> {
        let f = &self.field;
        let n = self.prec();
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant);
        }
        if n == 0 {
            return Ok(TruncSeries::zero(f, 0));
        }
        let a1 = self.coeffs[1];
        let a1_inv = f.inv(a1).map_err(|_| Error::NotRevertible)?;
        let mut h = TruncSeries::monomial(f, 1, 1, a1_inv);
        let mut prec = 1;
        let deriv = self.derivative_same_prec();
        while prec < n {
            prec = (2 * prec).min(n);
            let h_ext = h.extend(prec);
            let g = self.truncate(prec);
            let resid = g.compose(&h_ext)?.sub(&TruncSeries::x(f, prec))?;
            let d = deriv.truncate(prec).compose(&h_ext)?.inv_mult()?;
            h = h_ext.sub(&resid.mul(&d)?)?;
        }
        Ok(h)
    }

    fn derivative_same_prec(&self) -> Self {
        let mut d = self.derivative();
        d.coeffs.resize(self.prec() + 1, Fe::ZERO);
        d
    }

    /// Zero-pads to a higher precision. Only sound when the caller knows the
    /// missing coefficients are to be recomputed.
    fn extend(&self, prec: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(prec + 1, Fe::ZERO);
        TruncSeries {
            field: self.field.clone(),
            coeffs,
        }
    }

    /// `F(alpha X)`.
    pub fn scale_arg(&self, alpha: Fe) -> Self {
        let f = &self.field;
        let mut pw = Fe::ONE;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let out = f.mul(c, pw);
                pw = f.mul(pw, alpha);
                out
            })
            .collect();
        TruncSeries {
            field: f.clone(),
            coeffs,
        }
    }

    /// Applies `a -> a^{p^i}` to every coefficient.
    pub fn frobenius_coeffs(&self, i: u64) -> Self {
        let f = &self.field;
        TruncSeries {
            field: f.clone(),
            coeffs: self.coeffs.iter().map(|&c| f.frobenius(c, i)).collect(),
        }
    }
}

fn mul_truncated(f: &Field, a: &[Fe], b: &[Fe], n: usize) -> TruncSeries {
    let nz = |s: &[Fe]| -> Vec<(usize, Fe)> {
        s.iter()
            .take(n + 1)
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (i, c))
            .collect()
    };
    let (ta, tb) = (nz(a), nz(b));
    let (dense, sparse) = if ta.len() >= tb.len() {
        (ta, tb)
    } else {
        (tb, ta)
    };
    let mut out = vec![Fe::ZERO; n + 1];
    for &(j, y) in &sparse {
        for &(i, x) in dense.iter().take_while(|(i, _)| i + j <= n) {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    TruncSeries {
        field: f.clone(),
        coeffs: out,
    }
}

/// An element of `K[[X]]^×` (nonzero constant term).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitSeries(TruncSeries);

impl UnitSeries {
    pub fn new(s: TruncSeries) -> Result<Self> {
        if s.is_unit() {
            Ok(UnitSeries(s))
        } else {
            Err(Error::NotUnit)
        }
    }

    pub fn into_inner(self) -> TruncSeries {
        self.0
    }
}

impl Deref for UnitSeries {
    type Target = TruncSeries;

    fn deref(&self) -> &TruncSeries {
        &self.0
    }
}

impl TryFrom<TruncSeries> for UnitSeries {
    type Error = Error;

    fn try_from(s: TruncSeries) -> Result<Self> {
        UnitSeries::new(s)
    }
}

pub fn ps_mul(a: &TruncSeries, b: &TruncSeries) -> Result<TruncSeries> {
    a.mul(b)
}

pub fn ps_inv_mult(a: &TruncSeries) -> Result<UnitSeries> {
    UnitSeries::new(a.inv_mult()?)
}

pub fn ps_derivative(a: &TruncSeries) -> TruncSeries {
    a.derivative()
}

pub fn ps_compose(outer: &TruncSeries, inner: &TruncSeries) -> Result<TruncSeries> {
    outer.compose(inner)
}

pub fn scale_arg(s: &TruncSeries, alpha: Fe) -> TruncSeries {
    s.scale_arg(alpha)
}

/// The logarithmic derivative `X F'/F` of a unit, at the precision of `F`.
///
/// Solves `F T = X F'` term by term:
/// `t_m = (m f_m - sum_{j=1}^{m-1} f_j t_{m-j}) / f_0`.
pub fn log_deriv(s: &TruncSeries) -> Result<TruncSeries> {
    let f = s.field();
    let f0_inv = f.inv(s.coeff(0)).map_err(|_| Error::NotUnit)?;
    let n = s.prec();
    let xd = s.x_derivative();
    let support: Vec<(usize, Fe)> = s.nonzero_terms().filter(|&(j, _)| j > 0).collect();
    let mut t = vec![Fe::ZERO; n + 1];
    for m in 1..=n {
        let mut acc = xd.coeffs[m];
        for &(j, fj) in support.iter().take_while(|(j, _)| *j < m) {
            acc = f.sub(acc, f.mul(fj, t[m - j]));
        }
        t[m] = f.mul(acc, f0_inv);
    }
    TruncSeries::from_coeffs(f, t)
}

/// Checks `a_0 = 0` and `a_{p i} = a_i^p` for `p i <= N`, the image of the
/// logarithmic derivative. Returns the first violating index.
pub fn image_violation(t: &TruncSeries) -> Option<usize> {
    let f = t.field();
    if !t.coeff(0).is_zero() {
        return Some(0);
    }
    let p = f.p() as usize;
    (1..=t.prec() / p).find(|&i| t.coeff(p * i) != f.frobenius(t.coeff(i), 1))
}

/// A unit `F` with `log_deriv(F) = T`, normalized by `F(0) = 1` and
/// `f_m = 0` whenever `p | m` (those coefficients are free).
pub fn solve_log_deriv(t: &TruncSeries) -> Result<UnitSeries> {
    if let Some(i) = image_violation(t) {
        return Err(Error::NotInImage(format!("constraint fails at index {i}")));
    }
    let f = t.field();
    let p = f.p() as usize;
    let n = t.prec();
    let support: Vec<(usize, Fe)> = t.nonzero_terms().collect();
    let mut out = vec![Fe::ZERO; n + 1];
    out[0] = Fe::ONE;
    for m in 1..=n {
        // m f_m = sum_{j < m} f_j t_{m-j}
        let mut acc = Fe::ZERO;
        for &(i, ti) in support.iter().take_while(|(i, _)| *i <= m) {
            acc = f.add(acc, f.mul(out[m - i], ti));
        }
        if m % p == 0 {
            if !acc.is_zero() {
                return Err(Error::Internal(format!(
                    "consistency condition fails at degree {m}"
                )));
            }
        } else {
            let m_inv = f.inv(f.from_int((m % p) as i64))?;
            out[m] = f.mul(acc, m_inv);
        }
    }
    UnitSeries::new(TruncSeries::from_coeffs(f, out)?)
}

/// `X * sum_{k in C_q, k <= N} a_k X^k`, at precision `N + 1`.
pub fn psi_q(t: &TruncSeries, pq: PrimePower) -> TruncSeries {
    let n = t.prec();
    let mut out = TruncSeries::zero(t.field(), n + 1);
    for (k, c) in t.nonzero_terms() {
        if k > 0 && is_critical(k as u64, pq) {
            out.coeffs[k + 1] = c;
        }
    }
    out
}
