use std::time::Instant;

use serde::Serialize;

use dwork_core::complex::{default_precision, DEFAULT_ROUNDING_THRESHOLD};
use dwork_core::dwork::{count_naive_with_budget, K3Greene, KoblitzEvaluator, DEFAULT_NAIVE_BUDGET};
use dwork_core::Error;

use crate::config::RunConfig;
use crate::output::{emit, Tabular};
use crate::{build_fields, CliError};

#[derive(Serialize)]
pub struct ScanRow {
    pub q: u64,
    pub lambda_count: usize,
    pub naive_ns: u128,
    /// Empty when no character-sum formula applies (q ≢ 1 mod d).
    pub formula_ns: Option<u128>,
    pub speedup: Option<f64>,
}

impl Tabular for ScanRow {
    fn header() -> Vec<&'static str> {
        vec!["q", "lambda_count", "naive_ns", "formula_ns", "speedup"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.q.to_string(),
            self.lambda_count.to_string(),
            self.naive_ns.to_string(),
            self.formula_ns.map(|n| n.to_string()).unwrap_or_default(),
            self.speedup.map(|s| format!("{s:.2}")).unwrap_or_default(),
        ]
    }
}

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let fields = build_fields(cfg)?;
    let d = cfg.d.unwrap_or(4);
    let mut rows = Vec::new();
    for ctx in &fields {
        let lambdas = cfg.lambdas(ctx.q(), |l| ctx.pow_idx(l, d as u64) == 1);
        let start = Instant::now();
        let naive = lambdas
            .iter()
            .map(|&l| count_naive_with_budget(ctx, d, l, DEFAULT_NAIVE_BUDGET))
            .collect::<Result<Vec<_>, _>>()?;
        let naive_ns = start.elapsed().as_nanos();

        // Setup is timed along with the evaluations.
        let start = Instant::now();
        let formula: Option<Vec<u64>> = if d == 4 {
            match K3Greene::new(ctx) {
                Ok(g) => Some(lambdas.iter().map(|&l| g.count(l).map(|c| c as u64)).collect::<Result<_, _>>()?),
                Err(Error::Domain(_)) => None,
                Err(e) => return Err(e.into()),
            }
        } else {
            match KoblitzEvaluator::new(ctx, d, cfg.prec.unwrap_or_else(|| default_precision(ctx.q(), d))) {
                Ok(k) => Some(
                    lambdas
                        .iter()
                        .map(|&l| k.total(l).round_to_integer(DEFAULT_ROUNDING_THRESHOLD).map(|c| u64::try_from(c).unwrap_or(u64::MAX)))
                        .collect::<Result<_, _>>()?,
                ),
                Err(Error::Domain(_)) => None,
                Err(e) => return Err(e.into()),
            }
        };
        let formula_ns = formula.as_ref().map(|_| start.elapsed().as_nanos());
        if let Some(f) = &formula {
            if *f != naive {
                return Err(CliError::Failed(format!("formula and enumeration disagree at q = {}", ctx.q())));
            }
        }
        rows.push(ScanRow {
            q: ctx.q(),
            lambda_count: lambdas.len(),
            naive_ns,
            formula_ns,
            speedup: formula_ns.map(|f| naive_ns as f64 / f.max(1) as f64),
        });
    }
    emit(cfg, &rows, &[], None)
}
