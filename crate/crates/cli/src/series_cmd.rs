use std::path::{Path, PathBuf};

use clap::{Subcommand, ValueEnum};
use qcrit::series::{
    artin_hasse, gamma_inverse, log_deriv, m_series, m_series_definitional, nuff_closed_form,
    psi_q, random_gamma, random_unit, w_series,
};
use qcrit::{AdditiveSeries, Fe, Field, GammaSeries, TruncSeries};
use serde_json::Value;

use crate::config::CliConfig;
use crate::render::{series_text, Output};
use crate::{CmdResult, UsageError};

#[derive(Subcommand, Debug)]
pub enum SeriesCmd {
    /// Build a named series over F_{p^n} at precision --prec.
    Eval {
        what: Construction,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, default_value_t = 1)]
        ell: u32,
        /// Coordinates of alpha, comma separated (default 1).
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<u64>>,
        /// Coordinates of beta, comma separated (default 1).
        #[arg(long, value_delimiter = ',')]
        beta: Option<Vec<u64>>,
        /// Number of random generators composed by `random-gamma`.
        #[arg(long, default_value_t = 3)]
        factors: usize,
    },
    /// outer(inner(X)); two additive series compose in R_{q,K}.
    Compose { outer: PathBuf, inner: PathBuf },
    /// Inverse in Gamma_{q,K} for additive input; otherwise the
    /// multiplicative inverse, or with --reversion the compositional one.
    Invert {
        input: PathBuf,
        #[arg(long)]
        reversion: bool,
    },
    /// X F'/F.
    Logderiv { input: PathBuf },
    /// Keep the coefficients at exponents in C_q, shifted up by one degree.
    Psi { input: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    /// E_p(X) reduced mod p.
    ArtinHasse,
    /// W_{k,alpha}.
    W,
    /// M_{k,alpha,ell,beta} from its binomial expansion.
    M,
    /// M_{k,alpha,ell,beta} as k^{-1} D[E_p(alpha (X + beta X^{q^ell})^k)].
    MDefinitional,
    /// The closed form of psi_q[M_{k,alpha,ell,beta}].
    Nuff,
    /// X + beta X^{q^ell}.
    Generator,
    RandomUnit,
    RandomGamma,
}

enum AnySeries {
    Dense(TruncSeries),
    Additive(AdditiveSeries),
}

impl AnySeries {
    fn dense(self) -> TruncSeries {
        match self {
            AnySeries::Dense(s) => s,
            AnySeries::Additive(a) => a.to_series(),
        }
    }
}

fn read_series(path: &Path) -> Result<AnySeries, UsageError> {
    let raw = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?
    };
    let v: Value = serde_json::from_str(&raw)?;
    if v.get("terms").is_some() {
        Ok(AnySeries::Additive(serde_json::from_value(v)?))
    } else {
        Ok(AnySeries::Dense(serde_json::from_value(v)?))
    }
}

fn dense_out(s: &TruncSeries) -> CmdResult {
    Ok(Output::new(serde_json::to_value(s)?, series_text(s)))
}

fn additive_out(s: &AdditiveSeries) -> CmdResult {
    Ok(Output::new(
        serde_json::to_value(s)?,
        series_text(&s.to_series()),
    ))
}

fn element(field: &Field, coords: &Option<Vec<u64>>) -> Result<Fe, UsageError> {
    match coords {
        None => Ok(Fe::ONE),
        Some(c) => {
            let mut c = c.clone();
            c.resize(field.n() as usize, 0);
            Ok(field.from_coords(&c)?)
        }
    }
}

pub fn run(cfg: &CliConfig, cmd: SeriesCmd) -> CmdResult {
    let v = cfg.validate_all()?;
    let (pq, field, prec) = (v.pq, &v.field, v.global.prec);
    match cmd {
        SeriesCmd::Eval {
            what,
            k,
            ell,
            alpha,
            beta,
            factors,
        } => {
            let a = element(field, &alpha)?;
            let b = element(field, &beta)?;
            let s = match what {
                Construction::ArtinHasse => artin_hasse(pq.p(), prec, field)?.into_inner(),
                Construction::W => w_series(k, a, field, prec)?,
                Construction::M => m_series(k, a, ell, b, pq, field, prec)?,
                Construction::MDefinitional => {
                    m_series_definitional(k, a, ell, b, pq, field, prec)?
                }
                Construction::Nuff => nuff_closed_form(k, a, ell, b, pq, field, prec)?,
                Construction::Generator => {
                    return additive_out(&AdditiveSeries::generator(field, pq, prec, ell, b)?)
                }
                Construction::RandomUnit => random_unit(field, prec, v.global.seed).into_inner(),
                Construction::RandomGamma => {
                    let g = random_gamma(pq, field, prec, v.global.seed, factors)?;
                    return additive_out(g.additive());
                }
            };
            dense_out(&s)
        }
        SeriesCmd::Compose { outer, inner } => match (read_series(&outer)?, read_series(&inner)?) {
            (AnySeries::Additive(a), AnySeries::Additive(b)) => additive_out(&a.compose(&b)?),
            (a, b) => dense_out(&a.dense().compose(&b.dense())?),
        },
        SeriesCmd::Invert { input, reversion } => match read_series(&input)? {
            AnySeries::Additive(a) if !reversion => {
                let g = GammaSeries::new(a)?;
                let prec = g.additive().prec();
                additive_out(gamma_inverse(&g, prec)?.additive())
            }
            s if reversion => dense_out(&s.dense().revert()?),
            s => dense_out(&s.dense().inv_mult()?),
        },
        SeriesCmd::Logderiv { input } => dense_out(&log_deriv(&read_series(&input)?.dense())?),
        SeriesCmd::Psi { input } => {
            let s = read_series(&input)?.dense();
            if s.field().p() != pq.p() {
                return Err(UsageError(format!(
                    "series has characteristic {}, but --p is {}",
                    s.field().p(),
                    pq.p()
                )));
            }
            dense_out(&psi_q(&s, pq))
        }
    }
}
