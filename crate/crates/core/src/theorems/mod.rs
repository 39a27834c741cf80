//! Bounded verification suites. Each suite returns a [`VerifyReport`];
//! failed checks become counterexample payloads rather than errors.

pub mod analytic;
pub mod digital;
pub mod generators;
mod report;

use std::fmt;
use std::str::FromStr;

pub use analytic::{
    psi_d, teichmuller_set, trial_rng, verify_coleman_equivariance, verify_factoid,
    verify_homogeneity, verify_main,
};
pub use digital::{
    oracle_scan_bound, verify_digitgames, verify_digitmadness, verify_digitmadness2,
    verify_necklace,
};
pub use generators::{explore_generators, verify_nuff, GeneratorRow, NuffGrid};
pub use report::{Tally, VerifyReport, MAX_COUNTEREXAMPLES};

use crate::digits::{max_useful_ell, PrimePower};
use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Main,
    Factoid,
    Homogeneity,
    DigitMadness,
    DigitGames,
    DigitMadness2,
    Necklace,
    Nuff,
    Coleman,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Main,
        Suite::Factoid,
        Suite::Homogeneity,
        Suite::DigitMadness,
        Suite::DigitGames,
        Suite::DigitMadness2,
        Suite::Necklace,
        Suite::Nuff,
        Suite::Coleman,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Main => "main",
            Suite::Factoid => "factoid",
            Suite::Homogeneity => "homogeneity",
            Suite::DigitMadness => "digitmadness",
            Suite::DigitGames => "digitgames",
            Suite::DigitMadness2 => "digitmadness2",
            Suite::Necklace => "necklace",
            Suite::Nuff => "nuff",
            Suite::Coleman => "coleman",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Format(format!("unknown statement {s:?}")))
    }
}

/// Parameters shared by all suites.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub pq: PrimePower,
    pub field: Field,
    pub prec: usize,
    pub seed: u64,
    pub trials: usize,
    pub factoid_trials: usize,
    pub m_bound: u64,
    pub ell_bound: u32,
    pub c_bound: u64,
    pub oracle_bound: u64,
    pub necklace_bound: u64,
    pub k_bound: u64,
    pub nuff_ell_bound: u32,
    pub ext_degree: u32,
    pub coleman_trials: usize,
}

impl SuiteConfig {
    /// Desk-scale defaults for `q = p^lambda` and `K = F_{p^n}`.
    pub fn new(p: u64, lambda: u32, n: u32) -> Result<Self> {
        let pq = PrimePower::new(p, lambda)?;
        let field = Field::new(p, n, None)?;
        Ok(Self::with_field(pq, field))
    }

    pub fn with_field(pq: PrimePower, field: Field) -> Self {
        let m_bound = 4096;
        SuiteConfig {
            pq,
            field,
            prec: 128,
            seed: 0,
            trials: 50,
            factoid_trials: 100,
            m_bound,
            ell_bound: max_useful_ell(pq.p(), m_bound),
            c_bound: 1000,
            oracle_bound: 10_000,
            necklace_bound: 10_000,
            k_bound: 31,
            nuff_ell_bound: 3,
            ext_degree: 2,
            coleman_trials: 25,
        }
    }

    pub fn run(&self, suite: Suite) -> Result<VerifyReport> {
        if self.field.p() != self.pq.p() {
            return Err(Error::Characteristic {
                expected: self.pq.p(),
                got: self.field.p(),
            });
        }
        let p = self.pq.p();
        Ok(match suite {
            Suite::Main => verify_main(self.pq, &self.field, self.prec, self.trials, self.seed),
            Suite::Factoid => {
                verify_factoid(&self.field, self.prec, self.factoid_trials, self.seed)
            }
            Suite::Homogeneity => {
                verify_homogeneity(&self.field, self.prec, self.factoid_trials, self.seed)
            }
            Suite::DigitMadness => verify_digitmadness(p, self.m_bound, self.ell_bound),
            Suite::DigitGames => verify_digitgames(p, self.m_bound, self.ell_bound),
            Suite::DigitMadness2 => verify_digitmadness2(self.pq, self.c_bound, self.oracle_bound),
            Suite::Necklace => verify_necklace(self.pq, self.necklace_bound),
            Suite::Nuff => {
                let grid = NuffGrid::standard(&self.field, self.k_bound, self.nuff_ell_bound);
                verify_nuff(self.pq, &self.field, self.prec, &grid)
            }
            Suite::Coleman => verify_coleman_equivariance(
                self.pq,
                self.ext_degree,
                self.prec,
                self.coleman_trials,
                self.seed,
            ),
        })
    }

    pub fn run_all(&self) -> Result<Vec<VerifyReport>> {
        Suite::ALL.into_iter().map(|s| self.run(s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let mut cfg = SuiteConfig::new(2, 2, 2).unwrap();
        cfg.prec = 48;
        cfg.trials = 5;
        cfg.seed = 7;
        let a = cfg.run(Suite::Main).unwrap().without_timing();
        let b = cfg.run(Suite::Main).unwrap().without_timing();
        assert!(a.pass);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn characteristic_mismatch() {
        let cfg = SuiteConfig::with_field(PrimePower::new(3, 1).unwrap(), Field::prime(2).unwrap());
        assert!(cfg.run(Suite::Main).is_err());
    }
}
