use rayon::prelude::*;
use serde::Serialize;

use dwork_core::dwork::verify::{check_info, run_check, CheckKind, VerifyOptions};
use dwork_core::{Status, VerificationReport};

use crate::config::{LambdaSelection, RunConfig};
use crate::output::{emit, Tabular};
use crate::{build_fields, CliError};

#[derive(Serialize)]
pub struct VerifyRow {
    pub theorem: String,
    pub q: u64,
    pub params: String,
    pub lhs: String,
    pub rhs: String,
    /// pass, fail, vacuous, or conjecture for conjectural rows.
    pub status: String,
    /// The pass/fail outcome of a conjecture row.
    pub outcome: Option<String>,
    pub discrepancy: String,
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Vacuous => "vacuous",
    }
}

impl VerifyRow {
    fn new(q: u64, r: VerificationReport) -> Self {
        let params = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
        let (status, outcome) = if r.conjecture {
            ("conjecture".to_string(), Some(status_name(r.status).to_string()))
        } else {
            (status_name(r.status).to_string(), None)
        };
        VerifyRow { theorem: r.theorem, q, params, lhs: r.lhs, rhs: r.rhs, status, outcome, discrepancy: r.discrepancy }
    }
}

impl Tabular for VerifyRow {
    fn header() -> Vec<&'static str> {
        vec!["theorem", "q", "params", "lhs", "rhs", "status", "outcome", "discrepancy"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.theorem.clone(),
            self.q.to_string(),
            self.params.clone(),
            self.lhs.clone(),
            self.rhs.clone(),
            self.status.clone(),
            self.outcome.clone().unwrap_or_else(|| "-".into()),
            self.discrepancy.clone(),
        ]
    }
}

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let fields = build_fields(cfg)?;
    let base = VerifyOptions { d: cfg.d, k: cfg.k, prec: cfg.prec, ..VerifyOptions::default() };
    let jobs: Vec<(&str, usize)> = cfg
        .theorems
        .iter()
        .flat_map(|t| (0..fields.len()).map(move |i| (t.as_str(), i)))
        .collect();
    let results: Vec<Vec<VerificationReport>> = jobs
        .par_iter()
        .map(|&(id, i)| {
            let ctx = &fields[i];
            let lambdas = match &cfg.lambda {
                LambdaSelection::All => None,
                _ => {
                    let d = cfg.d.unwrap_or(4) as u64;
                    Some(cfg.lambdas(ctx.q(), |l| ctx.pow_idx(l, d) == 1))
                }
            };
            let opts = VerifyOptions { lambdas, ..base.clone() };
            run_check(id, ctx, &opts).map_err(CliError::from)
        })
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::new();
    let mut summary = Vec::new();
    let mut hard = 0usize;
    for id in &cfg.theorems {
        let (mut pass, mut fail, mut vacuous) = (0, 0, 0);
        for ((t, i), reports) in jobs.iter().zip(&results) {
            if t != id {
                continue;
            }
            for r in reports {
                match r.status {
                    Status::Pass => pass += 1,
                    Status::Fail => fail += 1,
                    Status::Vacuous => vacuous += 1,
                }
                if r.is_hard_failure(cfg.strict_conjectures) {
                    hard += 1;
                }
                rows.push(VerifyRow::new(fields[*i].q(), r.clone()));
            }
        }
        let tag = match check_info(id).map(|c| c.kind) {
            Some(CheckKind::Conjecture) => " (conjecture)",
            _ => "",
        };
        summary.push(format!("{id}{tag}: {pass} pass, {fail} fail, {vacuous} vacuous"));
    }
    emit(cfg, &rows, &summary, None)?;
    if hard > 0 {
        return Err(CliError::Failed(format!("{hard} checks failed")));
    }
    Ok(())
}
