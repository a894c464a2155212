use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{projective_count, require_nonzero, require_split, DworkParams};
use crate::char_sums::{sign_at_minus_one, GaussTable};
use crate::complex::{default_precision, ComplexApprox, DEFAULT_ROUNDING_THRESHOLD};
use crate::error::{Error, Result};
use crate::finite_field::FieldContext;

/// Retries at doubled precision after a rounding-gate failure.
pub const MAX_PRECISION_RETRIES: u32 = 2;

/// Exponent tuples w ∈ [0, d)^d with Σw ≡ 0 (mod d), up to permutation and
/// shifts by (1, …, 1).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CosetLabel {
    /// Lexicographically smallest sorted member of the orbit, so the class
    /// of (0, 1, 1, 2) is labelled (0, 0, 1, 3).
    pub w: Vec<u32>,
    /// Number of shift classes (elements of W/∼) carrying this label.
    pub classes: u64,
    /// Number of tuples in W carrying this label; totals d^{d-1}.
    pub members: u64,
}

fn canonical(w: &[u32], d: u32) -> Vec<u32> {
    (0..d)
        .map(|s| {
            let mut v: Vec<u32> = w.iter().map(|&x| (x + s) % d).collect();
            v.sort_unstable();
            v
        })
        .min()
        .unwrap()
}

impl CosetLabel {
    /// The label whose orbit contains `w`.
    pub fn of(w: &[u32]) -> Result<CosetLabel> {
        let d = w.len() as u32;
        if d < 2 || w.iter().any(|&x| x >= d) || w.iter().sum::<u32>() % d != 0 {
            return Err(Error::Domain(format!("{w:?} is not in W")));
        }
        let canon = canonical(w, d);
        Ok(coset_labels(d).into_iter().find(|l| l.w == canon).unwrap())
    }

    pub fn is_zero(&self) -> bool {
        self.w.iter().all(|&x| x == 0)
    }
}

pub fn coset_labels(d: u32) -> Vec<CosetLabel> {
    let mut members: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    let total = (d as u64).pow(d);
    for mut code in 0..total {
        let w: Vec<u32> = (0..d)
            .map(|_| {
                let x = (code % d as u64) as u32;
                code /= d as u64;
                x
            })
            .collect();
        if w.iter().sum::<u32>() % d != 0 {
            continue;
        }
        let canon = canonical(&w, d);
        *members.entry(canon).or_default() += 1;
    }
    // Shifting changes every coordinate, so each shift class has d members.
    members
        .into_iter()
        .map(|(w, m)| CosetLabel { w, classes: m / d as u64, members: m })
        .collect()
}

/// Σ_j ∏ g(T^{w_i t + j}) / g(T^{dj}), kept per j so λ can vary cheaply.
fn coset_ratios(gauss: &GaussTable, d: u32, t: u64, n: u64, w: &[u32]) -> Vec<ComplexApprox> {
    (0..n as i64)
        .map(|j| {
            let mut num = ComplexApprox::from_int(1, gauss.prec());
            for &wi in w {
                num = num.mul(gauss.get(wi as i64 * t as i64 + j));
            }
            num.div(gauss.get(d as i64 * j)).expect("Gauss sums are nonzero")
        })
        .collect()
}

fn coset_sum(ctx: &FieldContext, gauss: &GaussTable, d: u32, ratios: &[ComplexApprox], classes: u64, lambda: u32) -> ComplexApprox {
    let d_lambda = ctx.mul_idx(ctx.int_idx(d as i64), lambda);
    let mut acc = ComplexApprox::zero(gauss.prec());
    for (j, r) in ratios.iter().enumerate() {
        acc = acc.add(&r.mul(&gauss.char_at(ctx, d as i64 * j as i64, d_lambda)));
    }
    acc.mul_int(classes as i64).div_int(ctx.n() as i64)
}

/// S_[w] = (classes/(q-1)) Σ_j ∏ g(T^{w_i t + j})/g(T^{dj}) · T^{dj}(dλ).
pub fn coset_term(ctx: &FieldContext, gauss: &GaussTable, d: u32, label: &CosetLabel, lambda: u32) -> Result<ComplexApprox> {
    let t = require_split(ctx, d)?;
    let ratios = coset_ratios(gauss, d, t, ctx.n(), &label.w);
    Ok(coset_sum(ctx, gauss, d, &ratios, label.classes, lambda))
}

#[derive(Clone, Debug)]
pub struct N0Term {
    /// Σ_{w ∈ W} N_q(0, w) by the case table.
    pub definitional: ComplexApprox,
    /// The d = 4 closed form q² + 7q + 1 + (1/q)Σ g(T^{it})⁴ + 12q T^t(-1).
    pub closed_form: Option<ComplexApprox>,
}

/// The λ-independent part N_q(0) of Koblitz's formula.
pub fn n0_term(ctx: &FieldContext, gauss: &GaussTable, d: u32) -> Result<N0Term> {
    let t = require_split(ctx, d)? as i64;
    let q = ctx.q() as i64;
    let prec = gauss.prec();
    let mut sum = ComplexApprox::zero(prec);
    // Case "all w_i ≠ 0": (1/q) ∏ g(T^{w_i t}); "w = 0": (q^{d-1}-1)/(q-1).
    let total = (d as u64).pow(d - 1);
    for mut code in 0..total {
        let mut w: Vec<i64> = (0..d - 1)
            .map(|_| {
                let x = (code % d as u64) as i64;
                code /= d as u64;
                x
            })
            .collect();
        let last = (-w.iter().sum::<i64>()).rem_euclid(d as i64);
        w.push(last);
        if w.iter().all(|&x| x != 0) {
            let mut prod = ComplexApprox::from_int(1, prec);
            for &x in &w {
                prod = prod.mul(gauss.get(x * t));
            }
            sum = sum.add(&prod);
        }
    }
    let definitional = sum
        .div_int(q)
        .add(&ComplexApprox::from_big(&BigInt::from(projective_count(q as u64, d - 1)), prec));
    let closed_form = (d == 4).then(|| {
        let mut s = ComplexApprox::zero(prec);
        for i in 1..4 {
            let g = gauss.get(i * t);
            s = s.add(&g.mul(g).mul(g).mul(g));
        }
        s.div_int(q).add(&ComplexApprox::from_int(q * q + 7 * q + 1 + 12 * q * sign_at_minus_one(t) as i64, prec))
    });
    Ok(N0Term { definitional, closed_form })
}

/// Koblitz's formula for one (q, d) at a fixed precision.
pub struct KoblitzEvaluator<'a> {
    ctx: &'a FieldContext,
    d: u32,
    gauss: GaussTable,
    n0: ComplexApprox,
    labels: Vec<(CosetLabel, Vec<ComplexApprox>)>,
}

impl<'a> KoblitzEvaluator<'a> {
    pub fn new(ctx: &'a FieldContext, d: u32, prec: u32) -> Result<Self> {
        let t = require_split(ctx, d)?;
        let gauss = GaussTable::new(ctx, prec);
        Self::with_gauss(ctx, d, gauss, t)
    }

    fn with_gauss(ctx: &'a FieldContext, d: u32, gauss: GaussTable, t: u64) -> Result<Self> {
        let n0 = n0_term(ctx, &gauss, d)?.definitional;
        let labels = coset_labels(d)
            .into_iter()
            .map(|l| {
                let r = coset_ratios(&gauss, d, t, ctx.n(), &l.w);
                (l, r)
            })
            .collect();
        Ok(KoblitzEvaluator { ctx, d, gauss, n0, labels })
    }

    pub fn gauss(&self) -> &GaussTable {
        &self.gauss
    }

    pub fn n0(&self) -> &ComplexApprox {
        &self.n0
    }

    pub fn labels(&self) -> impl Iterator<Item = &CosetLabel> {
        self.labels.iter().map(|(l, _)| l)
    }

    pub fn coset(&self, label: &CosetLabel, lambda: u32) -> ComplexApprox {
        let (l, r) = self.labels.iter().find(|(l, _)| l == label).expect("label of this degree");
        coset_sum(self.ctx, &self.gauss, self.d, r, l.classes, lambda)
    }

    /// Σ over all coset labels.
    pub fn coset_total(&self, lambda: u32) -> ComplexApprox {
        let mut acc = ComplexApprox::zero(self.gauss.prec());
        for (l, r) in &self.labels {
            acc = acc.add(&coset_sum(self.ctx, &self.gauss, self.d, r, l.classes, lambda));
        }
        acc
    }

    pub fn total(&self, lambda: u32) -> ComplexApprox {
        self.n0.add(&self.coset_total(lambda))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KoblitzCount {
    pub count: u64,
    /// Precision at which the rounding gate accepted the total.
    pub prec: u32,
    /// Certified |total - count|.
    pub residual: f64,
}

/// Koblitz's count, retrying at doubled precision when the gate rejects.
pub fn count_koblitz(params: &DworkParams) -> Result<KoblitzCount> {
    let (ctx, d) = (params.ctx, params.d);
    let lambda = params.lambda_idx();
    require_nonzero(lambda)?;
    require_split(ctx, d)?;
    let mut prec = default_precision(ctx.q(), d);
    let mut last = None;
    for _ in 0..=MAX_PRECISION_RETRIES {
        let ev = KoblitzEvaluator::new(ctx, d, prec)?;
        let total = ev.total(lambda);
        match total.round_to_integer(DEFAULT_ROUNDING_THRESHOLD) {
            Ok(c) => {
                let count = u64::try_from(c).map_err(|_| Error::Inconsistent("negative point count".into()))?;
                let residual = total.distance_upper(&ComplexApprox::from_int(count as i64, prec));
                return Ok(KoblitzCount { count, prec, residual });
            }
            Err(e) => last = Some(e),
        }
        prec *= 2;
    }
    Err(last.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::build_field;

    #[test]
    fn quartic_labels() {
        let labels = coset_labels(4);
        let summary: Vec<(Vec<u32>, u64)> = labels.iter().map(|l| (l.w.clone(), l.classes)).collect();
        assert_eq!(summary, vec![(vec![0, 0, 0, 0], 1), (vec![0, 0, 1, 3], 12), (vec![0, 0, 2, 2], 3)]);
        assert_eq!(CosetLabel::of(&[0, 1, 1, 2]).unwrap().w, vec![0, 0, 1, 3]);
        assert_eq!(CosetLabel::of(&[3, 1, 3, 1]).unwrap().classes, 3);
        assert!(CosetLabel::of(&[0, 1, 1, 1]).is_err());
        assert_eq!(labels.iter().map(|l| l.members).sum::<u64>(), 64);
    }

    #[test]
    fn member_totals() {
        for d in 2..=6u32 {
            let labels = coset_labels(d);
            assert_eq!(labels.iter().map(|l| l.members).sum::<u64>(), (d as u64).pow(d - 1));
            assert_eq!(labels.iter().map(|l| l.classes).sum::<u64>(), (d as u64).pow(d - 2));
        }
    }

    #[test]
    fn n0_closed_form_agrees_at_q5() {
        let f5 = build_field(5, 1).unwrap();
        let gauss = GaussTable::new(&f5, 100);
        let n0 = n0_term(&f5, &gauss, 4).unwrap();
        assert!(n0.definitional.distance_upper(n0.closed_form.as_ref().unwrap()) < 1e-20);
    }

    #[test]
    fn rejects_bad_domain() {
        let f7 = build_field(7, 1).unwrap();
        let lam = f7.one();
        let params = DworkParams::new(&f7, 4, &lam).unwrap();
        assert!(count_koblitz(&params).is_err());
        let zero = f7.zero();
        let params = DworkParams::new(&f7, 3, &zero).unwrap();
        assert!(count_koblitz(&params).is_err());
    }
}
