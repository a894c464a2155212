use rayon::prelude::*;

use super::DworkParams;
use crate::error::{Error, Result};
use crate::finite_field::FieldContext;

pub const DEFAULT_NAIVE_BUDGET: u128 = 100_000_000;

/// Largest q for which the (c, v) ↦ #{x : x^d - cx = v} table is built.
const TABLE_MAX_Q: u64 = 2048;

pub fn count_naive(params: &DworkParams) -> Result<u64> {
    count_naive_with_budget(params.ctx, params.d, params.lambda_idx(), DEFAULT_NAIVE_BUDGET)
}

/// Projective points by enumeration of the last d-1 coordinates; the first
/// is resolved by a table of #{x : x^d - c·x = v}.
pub fn count_naive_with_budget(ctx: &FieldContext, d: u32, lambda: u32, budget: u128) -> Result<u64> {
    let q = ctx.q();
    let tabled = q <= TABLE_MAX_Q;
    let steps = (q as u128).pow(if tabled { d - 1 } else { d });
    if steps > budget {
        return Err(Error::BudgetExceeded { steps, budget });
    }
    let pow_d: Vec<u32> = (0..q as u32).map(|x| ctx.pow_idx(x, d as u64)).collect();
    let d_lambda = ctx.mul_idx(ctx.int_idx(d as i64), lambda);
    let hist: Vec<u16> = if tabled {
        let mut h = vec![0u16; (q * q) as usize];
        for c in 0..q as u32 {
            for x in 0..q as u32 {
                let v = ctx.sub_idx(pow_d[x as usize], ctx.mul_idx(c, x));
                h[(c as u64 * q + v as u64) as usize] += 1;
            }
        }
        h
    } else {
        Vec::new()
    };
    let first = |s: u32, prod: u32| -> u64 {
        let c = ctx.mul_idx(d_lambda, prod);
        let target = ctx.neg_idx(s);
        if tabled {
            hist[(c as u64 * q + target as u64) as usize] as u64
        } else {
            (0..q as u32)
                .filter(|&x| ctx.sub_idx(pow_d[x as usize], ctx.mul_idx(c, x)) == target)
                .count() as u64
        }
    };
    fn walk(ctx: &FieldContext, pow_d: &[u32], depth: u32, s: u32, prod: u32, first: &dyn Fn(u32, u32) -> u64) -> u64 {
        if depth == 0 {
            return first(s, prod);
        }
        (0..ctx.q() as u32)
            .map(|x| walk(ctx, pow_d, depth - 1, ctx.add_idx(s, pow_d[x as usize]), ctx.mul_idx(prod, x), first))
            .sum()
    }
    let affine: u64 = (0..q as u32)
        .into_par_iter()
        .map(|x| walk(ctx, &pow_d, d - 2, pow_d[x as usize], x, &first))
        .sum();
    if (affine - 1) % (q - 1) != 0 {
        return Err(Error::Inconsistent(format!("affine count {affine} is not 1 mod q - 1")));
    }
    Ok((affine - 1) / (q - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::build_field;

    fn brute(ctx: &FieldContext, d: u32, lambda: u32) -> u64 {
        // Plain enumeration of F_q^d, no tables.
        let q = ctx.q() as u32;
        let dl = ctx.mul_idx(ctx.int_idx(d as i64), lambda);
        let mut count = 0u64;
        let total = (q as u64).pow(d);
        for mut code in 0..total {
            let (mut s, mut prod) = (0u32, dl);
            for _ in 0..d {
                let x = (code % q as u64) as u32;
                code /= q as u64;
                s = ctx.add_idx(s, ctx.pow_idx(x, d as u64));
                prod = ctx.mul_idx(prod, x);
            }
            if s == prod {
                count += 1;
            }
        }
        (count - 1) / (ctx.n())
    }

    #[test]
    fn quartic_over_f5_at_zero_is_empty() {
        let f5 = build_field(5, 1).unwrap();
        assert_eq!(count_naive_with_budget(&f5, 4, 0, DEFAULT_NAIVE_BUDGET).unwrap(), 0);
    }

    #[test]
    fn table_walk_matches_plain_enumeration() {
        for (p, e, d) in [(5u64, 1u32, 4u32), (7, 1, 3), (3, 2, 4), (11, 1, 3), (13, 1, 4)] {
            let ctx = build_field(p, e).unwrap();
            for lambda in 0..ctx.q() as u32 {
                assert_eq!(
                    count_naive_with_budget(&ctx, d, lambda, DEFAULT_NAIVE_BUDGET).unwrap(),
                    brute(&ctx, d, lambda),
                    "d = {d}, q = {}, λ = {lambda}",
                    ctx.q()
                );
            }
        }
    }

    #[test]
    fn golden_values() {
        // Frozen from an independent full enumeration over F_p^d.
        for (p, d, lambda, expect) in [(5u64, 4u32, 1u32, 16u64), (7, 3, 2, 21), (11, 5, 1, 3300), (13, 4, 2, 320)] {
            let ctx = build_field(p, 1).unwrap();
            assert_eq!(count_naive_with_budget(&ctx, d, lambda, u128::MAX).unwrap(), expect, "p = {p}, d = {d}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let ctx = build_field(101, 1).unwrap();
        assert!(matches!(count_naive_with_budget(&ctx, 5, 1, 1_000_000), Err(Error::BudgetExceeded { .. })));
    }
}
