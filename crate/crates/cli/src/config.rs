use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dwork_core::arith::{is_prime, prime_factors};
use dwork_core::dwork::verify::{check_info, CHECKS};

#[derive(Parser, Debug)]
#[command(name = "dwork", version, about = "Point counts and hypergeometric checks for Dwork hypersurfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count points by one or more methods and compare them.
    Count(CountArgs),
    /// Run theorem, congruence and identity checks over a grid.
    Verify(VerifyArgs),
    /// Time brute force against the character-sum formula as q grows.
    Scan(ScanArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Prime powers q (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u64>,
    /// Primes p (comma separated); merged with --q.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<u64>,
    /// Degree d of the hypersurface.
    #[arg(long)]
    pub d: Option<u32>,
    /// λ selection: "all", "singular-only" (λ^d = 1) or a comma-separated
    /// list of element indices.
    #[arg(long, default_value = "all")]
    pub lambda: String,
    /// p-adic precision k.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Complex working precision in bits (default: chosen per field).
    #[arg(long)]
    pub prec: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Directory for cached discrete-log tables.
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Methods: naive, koblitz, greene, padic.
    #[arg(long, value_delimiter = ',', default_value = "naive,greene")]
    pub methods: Vec<Method>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Check ids or numeric aliases (comma separated), or "all".
    #[arg(long, value_delimiter = ',', required = true)]
    pub theorems: Vec<String>,
    /// Let failing conjecture checks affect the exit status.
    #[arg(long)]
    pub strict_conjectures: bool,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    Koblitz,
    Greene,
    Padic,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Naive => "naive",
            Method::Koblitz => "koblitz",
            Method::Greene => "greene",
            Method::Padic => "padic",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "mode", content = "values")]
pub enum LambdaSelection {
    All,
    SingularOnly,
    List(Vec<u32>),
}

/// A field in the grid, q = p^e.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FieldSpec {
    pub q: u64,
    pub p: u64,
    pub e: u32,
}

/// Everything that determines a run, validated up front and embedded in
/// every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub fields: Vec<FieldSpec>,
    pub d: Option<u32>,
    pub lambda: LambdaSelection,
    pub k: u32,
    pub prec: Option<u32>,
    pub methods: Vec<Method>,
    pub theorems: Vec<String>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub strict_conjectures: bool,
    pub jobs: Option<usize>,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn field_spec(q: u64) -> Result<FieldSpec, ConfigError> {
    let f = prime_factors(q);
    if q < 3 || f.len() != 1 {
        return Err(ConfigError(format!("{q} is not a prime power")));
    }
    let p = f[0];
    if p == 2 {
        return Err(ConfigError(format!("{q} is a power of 2; only odd characteristic is supported")));
    }
    let mut e = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        e += 1;
    }
    Ok(FieldSpec { q, p, e })
}

fn parse_lambda(s: &str) -> Result<LambdaSelection, ConfigError> {
    match s {
        "all" => Ok(LambdaSelection::All),
        "singular-only" => Ok(LambdaSelection::SingularOnly),
        list => list
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|_| ConfigError(format!("bad λ value {x:?}"))))
            .collect::<Result<Vec<_>, _>>()
            .map(LambdaSelection::List),
    }
}

/// Numeric aliases accepted by `verify --theorems`.
const ALIASES: &[(&str, &[&str])] = &[
    ("1.1", &["k3-greene-count"]),
    ("1.2", &["k3-padic-count"]),
    ("1.3", &["k3-padic-count", "k3-padic-vs-greene"]),
    ("1.4", &["k3-period-trace"]),
    ("2.6", &["gauss-product"]),
    ("2.8", &["pochhammer-gamma"]),
    ("3.1", &["trunc-2f1"]),
    ("3.2", &["trunc-2f1-legendre"]),
    ("3.3", &["trunc-dfd"]),
    ("3.4", &["trunc-3f2"]),
    ("4.1", &["koblitz-count"]),
    ("4.2", &["n0-closed-form"]),
    ("4.3", &["coset-0000"]),
    ("4.4", &["coset-0112"]),
    ("4.5", &["coset-0112-unit"]),
    ("4.6", &["coset-0022"]),
    ("4.7", &["coset-0022-unit"]),
    ("7.1", &["k3-2f1-vanishes"]),
    ("8.1", &["dwork-greene-count"]),
    ("8.2", &["dwork-padic-count"]),
    ("conj8.2", &["dwork-padic-count"]),
    ("8.4", &["dwork-period-trace"]),
    ("conj8.4", &["dwork-period-trace"]),
];

pub fn resolve_theorems(names: &[String]) -> Result<Vec<String>, ConfigError> {
    let mut out: Vec<String> = Vec::new();
    let mut push = |id: &str| {
        if !out.iter().any(|x| x == id) {
            out.push(id.to_string());
        }
    };
    for name in names {
        let name = name.trim();
        if name == "all" {
            CHECKS.iter().for_each(|c| push(c.id));
        } else if let Some((_, ids)) = ALIASES.iter().find(|(a, _)| *a == name) {
            ids.iter().for_each(|id| push(id));
        } else if check_info(name).is_some() {
            push(name);
        } else {
            return Err(ConfigError(format!("unknown theorem {name:?}")));
        }
    }
    Ok(out)
}

impl RunConfig {
    fn from_grid(command: &str, grid: &GridArgs) -> Result<Self, ConfigError> {
        let mut qs: Vec<u64> = grid.q.clone();
        for &p in &grid.p {
            if !is_prime(p) {
                return Err(ConfigError(format!("--p {p} is not prime")));
            }
            qs.push(p);
        }
        let mut fields = qs.into_iter().map(field_spec).collect::<Result<Vec<_>, _>>()?;
        fields.sort();
        fields.dedup();
        if fields.is_empty() {
            return Err(ConfigError("give at least one field with --q or --p".into()));
        }
        if let Some(d) = grid.d {
            if d < 2 {
                return Err(ConfigError(format!("--d {d} must be at least 2")));
            }
        }
        if grid.k == 0 {
            return Err(ConfigError("--k must be positive".into()));
        }
        if grid.jobs == Some(0) {
            return Err(ConfigError("--jobs must be positive".into()));
        }
        if let Some(prec) = grid.prec {
            if prec < 53 {
                return Err(ConfigError("--prec must be at least 53 bits".into()));
            }
        }
        Ok(RunConfig {
            command: command.to_string(),
            fields,
            d: grid.d,
            lambda: parse_lambda(&grid.lambda)?,
            k: grid.k,
            prec: grid.prec,
            methods: Vec::new(),
            theorems: Vec::new(),
            format: grid.format,
            output: grid.output.clone(),
            cache_dir: grid.cache_dir.clone(),
            strict_conjectures: false,
            jobs: grid.jobs,
        })
    }

    pub fn for_count(args: &CountArgs) -> Result<Self, ConfigError> {
        let mut cfg = Self::from_grid("count", &args.grid)?;
        let mut methods = args.methods.clone();
        methods.sort();
        methods.dedup();
        if methods.is_empty() {
            return Err(ConfigError("--methods is empty".into()));
        }
        cfg.methods = methods;
        Ok(cfg)
    }

    pub fn for_verify(args: &VerifyArgs) -> Result<Self, ConfigError> {
        let mut cfg = Self::from_grid("verify", &args.grid)?;
        cfg.theorems = resolve_theorems(&args.theorems)?;
        cfg.strict_conjectures = args.strict_conjectures;
        Ok(cfg)
    }

    pub fn for_scan(args: &ScanArgs) -> Result<Self, ConfigError> {
        let mut cfg = Self::from_grid("scan", &args.grid)?;
        cfg.format = Format::Csv;
        Ok(cfg)
    }

    /// Element indices of λ in F_q selected by this config, zero excluded.
    /// `singular` decides λ^d = 1 in the field at hand.
    pub fn lambdas(&self, q: u64, singular: impl Fn(u32) -> bool) -> Vec<u32> {
        match &self.lambda {
            LambdaSelection::All => (1..q as u32).collect(),
            LambdaSelection::SingularOnly => (1..q as u32).filter(|&l| singular(l)).collect(),
            LambdaSelection::List(v) => v.iter().copied().filter(|&l| l != 0 && (l as u64) < q).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(field_spec(25).unwrap(), FieldSpec { q: 25, p: 5, e: 2 });
        assert_eq!(field_spec(13).unwrap().e, 1);
        assert!(field_spec(12).is_err());
        assert!(field_spec(8).is_err());
        assert!(field_spec(1).is_err());
    }

    #[test]
    fn lambda_parsing() {
        assert_eq!(parse_lambda("all").unwrap(), LambdaSelection::All);
        assert_eq!(parse_lambda("1,2, 5").unwrap(), LambdaSelection::List(vec![1, 2, 5]));
        assert!(parse_lambda("x").is_err());
    }

    #[test]
    fn aliases_resolve() {
        let ids = resolve_theorems(&["3.1".into(), "conj8.2".into(), "trunc-2f1".into()]).unwrap();
        assert_eq!(ids, vec!["trunc-2f1", "dwork-padic-count"]);
        assert!(resolve_theorems(&["9.9".into()]).is_err());
        for (_, ids) in ALIASES {
            for id in *ids {
                assert!(check_info(id).is_some(), "{id}");
            }
        }
    }
}
