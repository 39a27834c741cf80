//! `qcrit`: queries on q-critical integers and p-digital combinatorics,
//! power-series tools, and the verification suites.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 invalid usage.

mod config;
mod render;
mod series_cmd;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcrit::digits::{
    admissible_enumerate, bracket_q, critical_base_set, digit_games_witness, digital_cmp,
    is_admissible, is_critical, lucas_binom, mu_q, necklace_table, p_core, p_defect,
    strip_q_blocks, to_digits, AdmissibleQuadruple,
};
use qcrit::theorems::{explore_generators, Suite};
use serde_json::{json, Value};

use config::{CliConfig, Validated};
use render::Output;

#[derive(Parser, Debug)]
#[command(
    name = "qcrit",
    version,
    about = "q-critical integers, p-digital order and power series over F_{p^n}"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// The prime p.
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u64,
    /// q = p^lambda.
    #[arg(long, global = true, default_value_t = 1)]
    pub lambda: u32,
    /// Coefficient field F_{p^n}.
    #[arg(long, global = true, default_value_t = 1)]
    pub n: u32,
    /// Monic modulus for F_{p^n}, coefficients in ascending degree, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub modulus: Option<Vec<u64>>,
    /// Series precision N (coefficients of degree 0..=N).
    #[arg(long, global = true, default_value_t = 128)]
    pub prec: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, global = true, value_enum, env = "QCRIT_FORMAT", default_value_t = Format::Text)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    #[arg(long, global = true, default_value_t = 4096)]
    pub m_bound: u64,
    /// Defaults to the largest useful value for --m-bound.
    #[arg(long, global = true)]
    pub ell_bound: Option<u32>,
    #[arg(long, global = true, default_value_t = 1000)]
    pub c_bound: u64,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub oracle_bound: u64,
    /// Range bound for necklace checks and for listing C_q.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub bound: u64,
    /// Largest k for the generator grid (verify nuff) or the exploration table.
    #[arg(long, global = true)]
    pub k_bound: Option<u64>,
    /// m in K = F_{q^m} for the Coleman suite.
    #[arg(long, global = true, default_value_t = 2)]
    pub ext_degree: u32,
    /// Zero `elapsed_ms` so that reports are byte-identical across runs.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List C_q up to --bound, or C_q^0 with --base.
    Criticals {
        #[arg(long)]
        base: bool,
    },
    /// Decide k in C_q, with the table of cyclic rotations of <k>_q.
    IsCritical { k: u64 },
    /// The p-digitally least element of O_q(c).
    Mu { c: u64 },
    /// The p-core of an integer.
    Core {
        #[arg(value_name = "N")]
        value: u64,
    },
    /// The p-defect of an integer.
    Defect {
        #[arg(value_name = "N")]
        value: u64,
    },
    /// Compare two integers in the p-digital order.
    Cmp {
        #[arg(value_name = "M")]
        left: u64,
        #[arg(value_name = "N")]
        right: u64,
    },
    /// binomial(m, k) mod p.
    Lucas { m: u64, k: u64 },
    /// Test (j, k, ell, m) for p-admissibility, or enumerate up to --m-bound.
    Admissible {
        #[arg(num_args = 0..=4)]
        quad: Vec<u64>,
    },
    /// The digit-games witness (e, f, g, r) of an admissible quadruple.
    Witness { j: u64, k: u64, ell: u32, m: u64 },
    /// Run a verification suite, or all of them.
    Verify {
        /// main, factoid, homogeneity, digitmadness, digitgames,
        /// digitmadness2, necklace, nuff, coleman, or all.
        statement: String,
    },
    /// Leading p-digital exponents of D[E_p(alpha X^k)].
    Explore,
    /// Power-series tools on JSON series files.
    Series {
        #[command(subcommand)]
        cmd: series_cmd::SeriesCmd,
    },
}

/// Failures that map to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

pub type CmdResult = Result<Output, UsageError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.global.format;
    let target = cli.global.output.clone();
    match run(cli) {
        Ok(out) => match out.emit(format, target.as_deref()) {
            Ok(()) => ExitCode::from(out.code),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            eprintln!();
            eprintln!(
                "{}",
                <Cli as clap::CommandFactory>::command().render_usage()
            );
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let cfg = CliConfig::from_args(&cli.global);
    match cli.command {
        Command::Criticals { base } => criticals(&cfg.validate_digits()?, base),
        Command::IsCritical { k } => is_critical_cmd(&cfg.validate_digits()?, k),
        Command::Mu { c } => {
            let v = cfg.validate_digits()?;
            positive(c, "c")?;
            let mu = mu_q(c, v.pq);
            Ok(Output::new(
                json!({"c": c, "p": v.pq.p(), "q": v.pq.q(), "mu": mu}),
                format!("mu_{}({c}) = {mu}", v.pq.q()),
            ))
        }
        Command::Core { value: n } => {
            let v = cfg.validate_prime()?;
            positive(n, "n")?;
            let k = p_core(n, v)?;
            Ok(Output::new(
                json!({"n": n, "p": v, "core": k, "digits": digits_of(k, v)}),
                format!("kappa_{v}({n}) = {k} [{}]", digits_of(k, v)),
            ))
        }
        Command::Defect { value: n } => {
            let v = cfg.validate_prime()?;
            positive(n, "n")?;
            let d = p_defect(n, v)?;
            Ok(Output::new(
                json!({"n": n, "p": v, "defect": d}),
                format!("delta_{v}({n}) = {d}"),
            ))
        }
        Command::Cmp { left: m, right: n } => {
            let p = cfg.validate_prime()?;
            positive(m, "m")?;
            positive(n, "n")?;
            let ord = digital_cmp(m, n, p)?;
            let (sym, name) = match ord {
                std::cmp::Ordering::Less => ("<", "less"),
                std::cmp::Ordering::Equal => ("=", "equal"),
                std::cmp::Ordering::Greater => (">", "greater"),
            };
            Ok(Output::new(
                json!({"m": m, "n": n, "p": p, "order": name}),
                format!("{m} {sym}_{p} {n}"),
            ))
        }
        Command::Lucas { m, k } => {
            let p = cfg.validate_prime()?;
            let b = lucas_binom(m, k, p);
            Ok(Output::new(
                json!({"m": m, "k": k, "p": p, "value": b}),
                format!("binomial({m}, {k}) = {b} mod {p}"),
            ))
        }
        Command::Admissible { quad } => admissible(&cfg, &quad),
        Command::Witness { j, k, ell, m } => {
            let p = cfg.validate_prime()?;
            let quad = AdmissibleQuadruple::new(j, k, ell, m, p)?;
            match digit_games_witness(&quad, p) {
                Ok(w) => Ok(Output::new(
                    json!({"quad": quad.as_array(), "witness": w}),
                    format!(
                        "({j},{k},{ell},{m}): e={} f={} g={} r={}",
                        w.e, w.f, w.g, w.r
                    ),
                )),
                Err(fail) => Ok(Output::new(
                    json!({"quad": quad.as_array(), "witness": Value::Null, "failure": fail}),
                    format!("({j},{k},{ell},{m}): no witness: {fail:?}"),
                )
                .with_code(1)),
            }
        }
        Command::Verify { statement } => {
            verify(&cfg.validate_all()?, &statement, cli.global.no_timing)
        }
        Command::Explore => explore(&cfg.validate_all()?),
        Command::Series { cmd } => series_cmd::run(&cfg, cmd),
    }
}

fn positive(v: u64, name: &str) -> Result<(), UsageError> {
    if v == 0 {
        return Err(UsageError(format!("{name} must be positive")));
    }
    Ok(())
}

fn digits_of(n: u64, p: u64) -> String {
    to_digits(n, p, None)
        .map(|d| d.to_string())
        .unwrap_or_default()
}

fn criticals(v: &Validated, base: bool) -> CmdResult {
    let pq = v.pq;
    let (set, label): (Vec<u64>, String) = if base {
        (critical_base_set(pq), format!("C_{}^0", pq.q()))
    } else {
        (
            (1..=v.global.bound)
                .filter(|&k| is_critical(k, pq))
                .collect(),
            format!("C_{} up to {}", pq.q(), v.global.bound),
        )
    };
    let text = format!(
        "{label} ({} elements): {}",
        set.len(),
        set.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
    );
    Ok(Output::new(
        json!({"p": pq.p(), "q": pq.q(), "set": set}),
        text,
    ))
}

fn is_critical_cmd(v: &Validated, k: u64) -> CmdResult {
    positive(k, "k")?;
    let pq = v.pq;
    let p = pq.p();
    let crit = is_critical(k, pq);
    let mu = mu_q(k, pq);
    let rows = necklace_table(k, pq);
    let (c, i) = strip_q_blocks(k, pq);
    let decomposition = (crit && critical_base_set(pq).contains(&c)).then_some((c, i));
    let mut text = vec![format!("{k} in C_{}: {crit}", pq.q())];
    text.push(format!(
        "<{k}>_{} = {} [{}], mu = {mu}, core(k) = {}, core(mu) = {}",
        pq.q(),
        bracket_q(k, pq),
        digits_of(bracket_q(k, pq), p),
        p_core(k, p)?,
        p_core(mu, p)?
    ));
    text.push("shift  digits  value  core".into());
    for r in &rows {
        let core = match (&r.core, &r.core_digits) {
            (Some(c), Some(d)) => format!("{c} [{d}]"),
            _ => "-".into(),
        };
        text.push(format!(
            "{:>5}  {}  {}  {}",
            r.shift, r.digits, r.value, core
        ));
    }
    if let Some((c, i)) = decomposition {
        text.push(format!(
            "{k} = {}^{i} ({c} + 1) - 1 with {c} in C_{}^0",
            pq.q(),
            pq.q()
        ));
    }
    Ok(Output::new(
        json!({
            "k": k, "p": p, "q": pq.q(), "critical": crit, "mu": mu,
            "core": p_core(k, p)?, "mu_core": p_core(mu, p)?,
            "necklace": rows,
            "decomposition": decomposition.map(|(c, i)| json!({"c": c, "i": i})),
        }),
        text.join("\n"),
    ))
}

fn admissible(cfg: &CliConfig, quad: &[u64]) -> CmdResult {
    let p = cfg.validate_prime()?;
    match quad.len() {
        0 => {
            let ell_bound = cfg.ell_bound(p);
            let all = admissible_enumerate(p, cfg.global.m_bound, ell_bound);
            let arrays: Vec<[u64; 4]> = all.iter().map(|q| q.as_array()).collect();
            let mut text = vec![format!(
                "{} admissible quadruples (j,k,ell,m) with m <= {}, ell <= {ell_bound}",
                arrays.len(),
                cfg.global.m_bound
            )];
            text.extend(
                arrays
                    .iter()
                    .map(|a| format!("{} {} {} {}", a[0], a[1], a[2], a[3])),
            );
            Ok(Output::new(
                json!({"p": p, "m_bound": cfg.global.m_bound, "ell_bound": ell_bound, "quadruples": arrays}),
                text.join("\n"),
            ))
        }
        4 => {
            let ell = u32::try_from(quad[2]).map_err(|_| UsageError("ell out of range".into()))?;
            let ok = is_admissible(quad[0], quad[1], ell, quad[3], p);
            Ok(Output::new(
                json!({"quad": quad, "p": p, "admissible": ok}),
                format!(
                    "({},{},{},{}) admissible for p = {p}: {ok}",
                    quad[0], quad[1], quad[2], quad[3]
                ),
            ))
        }
        n => Err(UsageError(format!(
            "admissible takes 0 or 4 integers, got {n}"
        ))),
    }
}

fn verify(v: &Validated, statement: &str, no_timing: bool) -> CmdResult {
    let suites: Vec<Suite> = if statement == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![statement.parse::<Suite>()?]
    };
    let cfg = v.suite_config();
    let mut reports = Vec::new();
    for s in suites {
        let r = cfg.run(s)?;
        reports.push(if no_timing { r.without_timing() } else { r });
    }
    let pass = reports.iter().all(|r| r.pass);
    let text = reports
        .iter()
        .map(render::report_text)
        .collect::<Vec<_>>()
        .join("\n");
    let json = if statement == "all" {
        json!({"reports": reports, "pass": pass})
    } else {
        serde_json::to_value(&reports[0])?
    };
    Ok(Output::new(json, text).with_code(if pass { 0 } else { 1 }))
}

fn explore(v: &Validated) -> CmdResult {
    let k_bound = v.global.k_bound.unwrap_or(63);
    let rows = explore_generators(v.pq, &v.field, k_bound, v.global.prec)?;
    let mut text = vec![format!(
        "D[E_{}(alpha X^k)] over F_{}^{}, N = {}: p-digital leading exponent",
        v.pq.p(),
        v.field.p(),
        v.field.n(),
        v.global.prec
    )];
    text.push("k  alpha  leading  kappa  delta  critical".into());
    for r in &rows {
        let show = |x: Option<String>| x.unwrap_or_else(|| "-".into());
        text.push(format!(
            "{}  {:?}  {}  {}  {}  {}",
            r.k,
            r.alpha,
            show(r.leading.map(|x| x.to_string())),
            show(r.kappa.map(|x| x.to_string())),
            show(r.delta.map(|x| x.to_string())),
            show(r.critical.map(|x| x.to_string())),
        ));
    }
    Ok(Output::new(
        json!({"p": v.pq.p(), "q": v.pq.q(), "field": v.field.spec(), "prec": v.global.prec,
               "k_bound": k_bound, "rows": rows}),
        text.join("\n"),
    ))
}
