use qcrit::digits::{max_useful_ell, PrimePower};
use qcrit::field::is_prime;
use qcrit::theorems::SuiteConfig;
use qcrit::Field;

use crate::{GlobalArgs, UsageError};

/// Raw flags; nothing is trusted until one of the `validate_*` methods runs.
pub struct CliConfig<'a> {
    pub global: &'a GlobalArgs,
}

/// Flags after validation. `q` is always recomputed from `(p, lambda)`.
pub struct Validated<'a> {
    pub global: &'a GlobalArgs,
    pub pq: PrimePower,
    pub field: Field,
}

impl<'a> CliConfig<'a> {
    pub fn from_args(global: &'a GlobalArgs) -> Self {
        CliConfig { global }
    }

    pub fn validate_prime(&self) -> Result<u64, UsageError> {
        let p = self.global.p;
        if !is_prime(p) {
            return Err(UsageError(format!("--p {p} is not prime")));
        }
        Ok(p)
    }

    pub fn validate_digits(&self) -> Result<Validated<'a>, UsageError> {
        self.validate_all()
    }

    pub fn validate_all(&self) -> Result<Validated<'a>, UsageError> {
        let p = self.validate_prime()?;
        let pq = PrimePower::new(p, self.global.lambda)?;
        let field = Field::new(p, self.global.n, self.global.modulus.clone())?;
        if self.global.prec == 0 {
            return Err(UsageError("--prec must be positive".into()));
        }
        if self.global.ext_degree == 0 {
            return Err(UsageError("--ext-degree must be positive".into()));
        }
        Ok(Validated {
            global: self.global,
            pq,
            field,
        })
    }

    pub fn ell_bound(&self, p: u64) -> u32 {
        self.global
            .ell_bound
            .unwrap_or_else(|| max_useful_ell(p, self.global.m_bound))
    }
}

impl Validated<'_> {
    pub fn suite_config(&self) -> SuiteConfig {
        let g = self.global;
        let mut cfg = SuiteConfig::with_field(self.pq, self.field.clone());
        cfg.prec = g.prec;
        cfg.seed = g.seed;
        cfg.trials = g.trials;
        cfg.m_bound = g.m_bound;
        cfg.ell_bound = g
            .ell_bound
            .unwrap_or_else(|| max_useful_ell(self.pq.p(), g.m_bound));
        cfg.c_bound = g.c_bound;
        cfg.oracle_bound = g.oracle_bound;
        cfg.necklace_bound = g.bound;
        if let Some(k) = g.k_bound {
            cfg.k_bound = k;
        }
        cfg.ext_degree = g.ext_degree;
        cfg
    }
}
