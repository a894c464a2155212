use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use dwork_core::complex::{default_precision, DEFAULT_ROUNDING_THRESHOLD};
use dwork_core::dwork::{count_naive_with_budget, GeneralGreene, K3Greene, K3Padic, KoblitzEvaluator, DEFAULT_NAIVE_BUDGET};
use dwork_core::{Error, FieldContext};

use crate::config::{Method, RunConfig};
use crate::output::{emit, Tabular};
use crate::{build_fields, CliError};

#[derive(Serialize)]
pub struct CountRow {
    pub method: String,
    pub q: u64,
    pub d: u32,
    pub lambda: u32,
    /// The count, or its residue when `modulus` is set.
    pub value: Option<String>,
    pub modulus: Option<u64>,
    /// Complex working precision in bits, for the approximate methods.
    pub precision: Option<u32>,
    /// reference, match, mismatch or inapplicable.
    pub status: String,
    pub note: String,
    #[serde(skip)]
    pub micros: u128,
}

impl Tabular for CountRow {
    fn header() -> Vec<&'static str> {
        vec!["method", "q", "d", "lambda", "value", "modulus", "precision", "status", "note"]
    }

    fn cells(&self) -> Vec<String> {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        vec![
            self.method.clone(),
            self.q.to_string(),
            self.d.to_string(),
            self.lambda.to_string(),
            opt(self.value.clone()),
            opt(self.modulus.map(|m| m.to_string())),
            opt(self.precision.map(|b| b.to_string())),
            self.status.clone(),
            self.note.clone(),
        ]
    }
}

enum Outcome {
    Exact(u64),
    Residue(u64, u64),
    Inapplicable(String),
}

/// Per-field state shared by every λ.
enum Evaluator<'a> {
    Naive,
    K3(K3Greene<'a>),
    General(GeneralGreene<'a>, u32),
    Koblitz(KoblitzEvaluator<'a>, u32),
    Padic(K3Padic),
    None(String),
}

fn precision(cfg: &RunConfig, ctx: &FieldContext, d: u32) -> u32 {
    cfg.prec.unwrap_or_else(|| default_precision(ctx.q(), d))
}

fn inapplicable<'a>(e: Error) -> Result<Evaluator<'a>, CliError> {
    match e {
        Error::Domain(m) => Ok(Evaluator::None(m)),
        e => Err(e.into()),
    }
}

fn evaluator<'a>(m: Method, ctx: &'a FieldContext, d: u32, cfg: &RunConfig) -> Result<Evaluator<'a>, CliError> {
    let prec = precision(cfg, ctx, d);
    match m {
        Method::Naive => Ok(Evaluator::Naive),
        Method::Greene if d == 4 => K3Greene::new(ctx).map(Evaluator::K3).or_else(inapplicable),
        Method::Greene => GeneralGreene::new(ctx, d, prec).map(|g| Evaluator::General(g, prec)).or_else(inapplicable),
        Method::Koblitz => KoblitzEvaluator::new(ctx, d, prec).map(|k| Evaluator::Koblitz(k, prec)).or_else(inapplicable),
        Method::Padic if d != 4 => Ok(Evaluator::None("the p-adic count is implemented for d = 4".into())),
        Method::Padic if ctx.e() != 1 => Ok(Evaluator::None("the p-adic count needs q prime".into())),
        Method::Padic => K3Padic::new(ctx.p(), cfg.k).map(Evaluator::Padic).or_else(inapplicable),
    }
}

fn to_count<T: TryInto<u64>>(v: T) -> Result<u64, CliError> {
    v.try_into().map_err(|_| CliError::Failed("negative point count".into()))
}

fn evaluate(ev: &Evaluator, ctx: &FieldContext, d: u32, lambda: u32) -> Result<(Outcome, Option<u32>), CliError> {
    Ok(match ev {
        Evaluator::None(why) => (Outcome::Inapplicable(why.clone()), None),
        Evaluator::Naive => (Outcome::Exact(count_naive_with_budget(ctx, d, lambda, DEFAULT_NAIVE_BUDGET)?), None),
        Evaluator::K3(g) => {
            let c = g.count(lambda)?;
            (Outcome::Exact(to_count(c)?), None)
        }
        Evaluator::General(g, prec) => {
            let c = g.total(lambda)?.round_to_integer(DEFAULT_ROUNDING_THRESHOLD)?;
            (Outcome::Exact(to_count(c)?), Some(*prec))
        }
        Evaluator::Koblitz(k, prec) => {
            let c = k.total(lambda).round_to_integer(DEFAULT_ROUNDING_THRESHOLD)?;
            (Outcome::Exact(to_count(c)?), Some(*prec))
        }
        Evaluator::Padic(k3) => {
            let r = k3.count(ctx.element(lambda).coeffs()[0] as u64)?;
            (Outcome::Residue(r.residue(), r.modulus()), None)
        }
    })
}

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let fields = build_fields(cfg)?;
    let d = cfg.d.unwrap_or(4);
    let mut rows = Vec::new();
    for ctx in &fields {
        let lambdas = cfg.lambdas(ctx.q(), |l| ctx.pow_idx(l, d as u64) == 1);
        let evs = cfg
            .methods
            .iter()
            .map(|&m| evaluator(m, ctx, d, cfg).map(|e| (m, e)))
            .collect::<Result<Vec<_>, _>>()?;
        let per_lambda: Vec<Vec<CountRow>> = lambdas
            .par_iter()
            .map(|&lambda| {
                let mut out = Vec::new();
                let mut reference: Option<u64> = None;
                for (m, ev) in &evs {
                    let start = Instant::now();
                    let (outcome, precision) = evaluate(ev, ctx, d, lambda)?;
                    let micros = start.elapsed().as_micros();
                    let (value, modulus, status, note) = match outcome {
                        Outcome::Inapplicable(why) => (None, None, "inapplicable".to_string(), why),
                        Outcome::Exact(c) => {
                            let status = match reference {
                                None => {
                                    reference = Some(c);
                                    "reference"
                                }
                                Some(r) if r == c => "match",
                                Some(_) => "mismatch",
                            };
                            (Some(c.to_string()), None, status.to_string(), String::new())
                        }
                        Outcome::Residue(r, m) => {
                            let status = match reference {
                                None => "unchecked",
                                Some(c) if c % m == r => "match",
                                Some(_) => "mismatch",
                            };
                            (Some(r.to_string()), Some(m), status.to_string(), String::new())
                        }
                    };
                    out.push(CountRow {
                        method: m.to_string(),
                        q: ctx.q(),
                        d,
                        lambda,
                        value,
                        modulus,
                        precision,
                        status,
                        note,
                        micros,
                    });
                }
                Ok(out)
            })
            .collect::<Result<_, CliError>>()?;
        // Rows grouped by method, then λ.
        let mut columns: Vec<Vec<CountRow>> = evs.iter().map(|_| Vec::new()).collect();
        for per in per_lambda {
            for (col, row) in columns.iter_mut().zip(per) {
                col.push(row);
            }
        }
        rows.extend(columns.into_iter().flatten());
    }
    let mismatches = rows.iter().filter(|r| r.status == "mismatch").count();
    let summary = vec![format!(
        "{} rows, {} mismatch, {} inapplicable",
        rows.len(),
        mismatches,
        rows.iter().filter(|r| r.status == "inapplicable").count()
    )];
    let table = rows
        .iter()
        .map(|r| {
            let mut c = r.cells();
            c.push(format!("{:.3}", r.micros as f64 / 1000.0));
            c
        })
        .collect();
    emit(cfg, &rows, &summary, Some(("ms", table)))?;
    if mismatches > 0 {
        return Err(CliError::Failed(format!("{mismatches} methods disagree")));
    }
    Ok(())
}
