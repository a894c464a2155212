use num_bigint::BigInt;

use super::koblitz::{coset_labels, KoblitzEvaluator};
use super::{projective_count, require_nonzero, require_split, DworkParams};
use crate::char_sums::HgfKernel;
use crate::complex::{default_precision, ComplexApprox, DEFAULT_ROUNDING_THRESHOLD};
use crate::error::{Error, Result};
use crate::finite_field::{CharacterIndex, FieldContext};

/// The general-degree count: (q^{d-1}-1)/(q-1) + q^{d-2}·F(1/λ^d) (exact)
/// + (1/q)Σ_{W**} ∏ g(T^{w_i t}) + Σ over nonzero shift classes of the
/// Gauss-sum ratio (approximate).
pub struct GeneralGreene<'a> {
    ctx: &'a FieldContext,
    d: u32,
    kernel: HgfKernel,
    koblitz: KoblitzEvaluator<'a>,
    constant: ComplexApprox,
}

impl<'a> GeneralGreene<'a> {
    pub fn new(ctx: &'a FieldContext, d: u32, prec: u32) -> Result<Self> {
        if d < 3 {
            return Err(Error::Domain("the general formula needs d >= 3".into()));
        }
        let t = require_split(ctx, d)?;
        let upper: Vec<_> = (1..d as u64).map(|i| CharacterIndex(i * t)).collect();
        let lower = vec![CharacterIndex(0); d as usize - 2];
        let kernel = HgfKernel::new(ctx, &upper, &lower)?;
        let koblitz = KoblitzEvaluator::new(ctx, d, prec)?;
        let gauss = koblitz.gauss();
        // W**: every w_i nonzero and not all equal.
        let mut wss = ComplexApprox::zero(prec);
        let total = (d as u64).pow(d - 1);
        for mut code in 0..total {
            let mut w: Vec<i64> = (0..d - 1)
                .map(|_| {
                    let x = (code % d as u64) as i64;
                    code /= d as u64;
                    x
                })
                .collect();
            w.push((-w.iter().sum::<i64>()).rem_euclid(d as i64));
            if w.iter().all(|&x| x != 0) && w.iter().any(|&x| x != w[0]) {
                let mut prod = ComplexApprox::from_int(1, prec);
                for &x in &w {
                    prod = prod.mul(gauss.get(x * t as i64));
                }
                wss = wss.add(&prod);
            }
        }
        let constant = wss
            .div_int(ctx.q() as i64)
            .add(&ComplexApprox::from_big(&BigInt::from(projective_count(ctx.q(), d - 1)), prec));
        Ok(GeneralGreene { ctx, d, kernel, koblitz, constant })
    }

    pub fn total(&self, lambda: u32) -> Result<ComplexApprox> {
        require_nonzero(lambda)?;
        let ctx = self.ctx;
        let x = ctx.inv_idx(ctx.pow_idx(lambda, self.d as u64)).unwrap();
        let f = self.kernel.evaluate_idx(ctx, x)?;
        let scale = BigInt::from(ctx.q()).pow(self.d - 2);
        let exact = f.to_complex(self.koblitz.gauss().roots()).mul_big(&scale);
        let mut total = self.constant.add(&exact);
        for label in coset_labels(self.d).iter().filter(|l| !l.is_zero()) {
            total = total.add(&self.koblitz.coset(label, lambda));
        }
        Ok(total)
    }
}

/// Rounded value of the general formula, retrying at doubled precision.
pub fn count_general_greene(params: &DworkParams) -> Result<u64> {
    let (ctx, d) = (params.ctx, params.d);
    let lambda = params.lambda_idx();
    let mut prec = default_precision(ctx.q(), d);
    let mut last = None;
    for _ in 0..=super::koblitz::MAX_PRECISION_RETRIES {
        let total = GeneralGreene::new(ctx, d, prec)?.total(lambda)?;
        match total.round_to_integer(DEFAULT_ROUNDING_THRESHOLD) {
            Ok(c) => return u64::try_from(c).map_err(|_| Error::Inconsistent("negative point count".into())),
            Err(e) => last = Some(e),
        }
        prec *= 2;
    }
    Err(last.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dwork::count_naive_with_budget;
    use crate::finite_field::build_field;

    #[test]
    fn cubic_over_f7() {
        let ctx = build_field(7, 1).unwrap();
        let ev = GeneralGreene::new(&ctx, 3, 100).unwrap();
        for lambda in 1..7u32 {
            let v = ev.total(lambda).unwrap().round_to_integer(1e-6).unwrap();
            assert_eq!(v, BigInt::from(count_naive_with_budget(&ctx, 3, lambda, u128::MAX).unwrap()));
        }
    }

    #[test]
    fn quartic_reproduces_k3_greene() {
        let ctx = build_field(13, 1).unwrap();
        let k3 = crate::dwork::K3Greene::new(&ctx).unwrap();
        let ev = GeneralGreene::new(&ctx, 4, 120).unwrap();
        for lambda in 1..13u32 {
            let v = ev.total(lambda).unwrap().round_to_integer(1e-6).unwrap();
            assert_eq!(v, BigInt::from(k3.count(lambda).unwrap()));
        }
    }
}
