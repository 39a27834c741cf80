//! JSON forms of dense and additive series.
//!
//! Dense: `{"field": {...}, "prec": N, "coeffs": [[c_0..c_{n-1}]; N+1]}`.
//! Additive: `{"field": {...}, "q": q, "prec": N, "terms": {"i": [..]}}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{AdditiveSeries, TruncSeries};
use crate::digits::PrimePower;
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub field: FieldSpec,
    pub prec: usize,
    pub coeffs: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditiveSeriesJson {
    pub field: FieldSpec,
    pub q: u64,
    pub prec: usize,
    pub terms: BTreeMap<String, Vec<u64>>,
}

impl From<&TruncSeries> for SeriesJson {
    fn from(s: &TruncSeries) -> Self {
        SeriesJson {
            field: s.field().spec().clone(),
            prec: s.prec(),
            coeffs: s.coeffs().iter().map(|&c| s.field().coords(c)).collect(),
        }
    }
}

impl SeriesJson {
    pub fn into_series(self) -> Result<TruncSeries> {
        let field = Field::from_spec(self.field.clone());
        self.into_series_in(&field)
    }

    /// Decodes into an existing field handle (which must match the spec).
    pub fn into_series_in(self, field: &Field) -> Result<TruncSeries> {
        if field.spec() != &self.field {
            return Err(Error::FieldMismatch);
        }
        if self.coeffs.len() != self.prec + 1 {
            return Err(Error::Format(format!(
                "expected {} coefficients, found {}",
                self.prec + 1,
                self.coeffs.len()
            )));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| field.from_coords(c))
            .collect::<Result<Vec<_>>>()?;
        TruncSeries::from_coeffs(field, coeffs)
    }
}

impl From<&AdditiveSeries> for AdditiveSeriesJson {
    fn from(s: &AdditiveSeries) -> Self {
        AdditiveSeriesJson {
            field: s.field().spec().clone(),
            q: s.pq().q(),
            prec: s.prec(),
            terms: s
                .terms()
                .iter()
                .map(|(i, &c)| (i.to_string(), s.field().coords(c)))
                .collect(),
        }
    }
}

impl AdditiveSeriesJson {
    pub fn into_series(self) -> Result<AdditiveSeries> {
        let field = Field::from_spec(self.field.clone());
        let pq = PrimePower::from_q(field.p(), self.q)?;
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            let i: u32 = k
                .parse()
                .map_err(|_| Error::Format(format!("term index {k:?} is not an integer")))?;
            let c = field.from_coords(v)?;
            if c.is_zero() {
                return Err(Error::Format(format!("term {i} has a zero coefficient")));
            }
            terms.insert(i, c);
        }
        let s = AdditiveSeries::new(&field, pq, self.prec, terms)?;
        if s.terms().len() != self.terms.len() {
            return Err(Error::Format("term index exceeds the precision".into()));
        }
        Ok(s)
    }
}

impl Serialize for TruncSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SeriesJson::deserialize(d)?
            .into_series()
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for AdditiveSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AdditiveSeriesJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for AdditiveSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        AdditiveSeriesJson::deserialize(d)?
            .into_series()
            .map_err(serde::de::Error::custom)
    }
}
