use std::sync::OnceLock;

use num_bigint::BigInt;
use proptest::prelude::*;

use dwork_core::char_sums::{greene_2f1_alt, jacobi_sum, GaussTable, HgfKernel};
use dwork_core::complex::{ComplexApprox, RootTable};
use dwork_core::cyclotomic::reduce_mod_p;
use dwork_core::dwork::{count_k3_greene, count_koblitz, count_naive_with_budget, n0_term, DworkParams};
use dwork_core::finite_field::{teichmuller, trace};
use dwork_core::padic::{gamma_p, McCarthyKernel, PadicRational};
use dwork_core::{build_field, CharacterIndex, FieldContext};

const FIELDS: [(u64, u32); 8] = [(3, 1), (5, 1), (7, 1), (13, 1), (17, 1), (3, 2), (5, 2), (3, 3)];

fn field(i: usize) -> &'static FieldContext {
    static CACHE: OnceLock<Vec<FieldContext>> = OnceLock::new();
    &CACHE.get_or_init(|| FIELDS.iter().map(|&(p, e)| build_field(p, e).unwrap()).collect())[i]
}

fn prime_field(p: u64) -> &'static FieldContext {
    field(FIELDS.iter().position(|&f| f == (p, 1)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dlog_is_a_homomorphism(i in 0usize..FIELDS.len(), a in 1u32..1000, b in 1u32..1000) {
        let ctx = field(i);
        let (x, y) = (a % (ctx.q() as u32 - 1) + 1, b % (ctx.q() as u32 - 1) + 1);
        let n = ctx.n();
        let l = ctx.dlog_idx(ctx.mul_idx(x, y)).unwrap() as u64;
        prop_assert_eq!(l, (ctx.dlog_idx(x).unwrap() as u64 + ctx.dlog_idx(y).unwrap() as u64) % n);
    }

    #[test]
    fn frobenius_and_fermat(i in 0usize..FIELDS.len(), a in 0u32..1000) {
        let ctx = field(i);
        let x = a % ctx.q() as u32;
        prop_assert_eq!(ctx.pow_idx(x, ctx.q()), x);
        if x != 0 {
            prop_assert_eq!(ctx.pow_idx(x, ctx.q() - 1), 1);
        }
    }

    #[test]
    fn trace_is_additive(i in 0usize..FIELDS.len(), a in 0u32..1000, b in 0u32..1000, c in 0u64..7) {
        let ctx = field(i);
        let (x, y) = (a % ctx.q() as u32, b % ctx.q() as u32);
        let (ex, ey) = (ctx.element(x), ctx.element(y));
        let lhs = trace(ctx, &ctx.add(&ex, &ey));
        prop_assert_eq!(lhs, (trace(ctx, &ex) + trace(ctx, &ey)) % ctx.p());
        let cx = ctx.mul(&ctx.from_int(c as i64), &ex);
        prop_assert_eq!(trace(ctx, &cx), c % ctx.p() * trace(ctx, &ex) % ctx.p());
    }

    #[test]
    fn teichmuller_lifts(pi in 0usize..3, x in 1u64..100, k in 1u32..5) {
        let p = [5u64, 7, 13][pi];
        let x = x % (p - 1) + 1;
        let w = teichmuller(x, p, k);
        prop_assert_eq!(w.residue() % p, x);
        prop_assert_eq!(w.pow(p - 1).residue(), 1);
    }

    #[test]
    fn reduction_is_a_ring_map(
        pi in 0usize..3,
        a in prop::collection::vec(-20i128..20, 16),
        b in prop::collection::vec(-20i128..20, 16),
        da in 1i64..5,
    ) {
        let ctx = prime_field([5u64, 13, 17][pi]);
        let cyc = ctx.cyclo().unwrap();
        let n = ctx.n() as usize;
        let x = cyc.from_group_ring(&a[..n], BigInt::from(da));
        let y = cyc.from_group_ring(&b[..n], BigInt::from(1));
        let p = ctx.p();
        let (rx, ry) = (reduce_mod_p(&x, ctx).unwrap(), reduce_mod_p(&y, ctx).unwrap());
        prop_assert_eq!(reduce_mod_p(&x.mul(&y), ctx).unwrap(), rx * ry % p);
        prop_assert_eq!(reduce_mod_p(&x.add(&y), ctx).unwrap(), (rx + ry) % p);
    }

    #[test]
    fn complex_embedding_matches_exact_arithmetic(
        a in prop::collection::vec(-50i128..50, 12),
        b in prop::collection::vec(-50i128..50, 12),
    ) {
        let ctx = prime_field(13);
        let cyc = ctx.cyclo().unwrap();
        let roots = RootTable::new(12, 120);
        let x = cyc.from_group_ring(&a, BigInt::from(1));
        let y = cyc.from_group_ring(&b, BigInt::from(3));
        let exact = x.mul(&y).to_complex(&roots);
        let approx = x.to_complex(&roots).mul(&y.to_complex(&roots));
        prop_assert!(exact.distance_upper(&approx) < 1e-20);
    }

    #[test]
    fn multiplication_error_is_conservative(a in -1000i64..1000, b in -1000i64..1000, c in 1i64..1000, d in 1i64..1000) {
        // (a/c)(b/d) computed from rounded quotients must stay within the bound.
        let x = ComplexApprox::from_int(a, 80).div_int(c);
        let y = ComplexApprox::from_int(b, 80).div_int(d);
        let exact = ComplexApprox::from_int(a * b, 200).div_int(c * d);
        let prod = x.mul(&y);
        prop_assert!(exact.with_precision(80).distance_upper(&prod) <= prod.err() + exact.err() + 1e-22);
    }

    #[test]
    fn gauss_sums_have_absolute_value_sqrt_q(i in 0usize..FIELDS.len(), k in 1i64..1000) {
        let ctx = field(i);
        let gauss = GaussTable::new(ctx, 100);
        let k = k % ctx.n() as i64;
        prop_assume!(k != 0);
        let g = gauss.get(k);
        let norm = g.mul(&g.conj());
        prop_assert!(norm.distance_upper(&ComplexApprox::from_int(ctx.q() as i64, 100)) < 1e-15);
    }

    #[test]
    fn jacobi_sums_are_integral(i in 0usize..FIELDS.len(), ks in prop::collection::vec(0u64..64, 2..5)) {
        let ctx = field(i);
        let chis: Vec<_> = ks.iter().map(|&k| CharacterIndex(k % ctx.n())).collect();
        prop_assert!(jacobi_sum(ctx, &chis).unwrap().is_integral());
    }

    #[test]
    fn greene_2f1_definitions_agree(fi in 0usize..3, a in 0u64..16, b in 0u64..16, c in 0u64..16, x in 0u32..17) {
        let ctx = prime_field([5u64, 13, 17][fi]);
        let n = ctx.n();
        let (a, b, c) = (CharacterIndex(a % n), CharacterIndex(b % n), CharacterIndex(c % n));
        let x = x % ctx.q() as u32;
        let kernel = HgfKernel::new(ctx, &[a, b], &[c]).unwrap();
        prop_assert_eq!(kernel.evaluate_idx(ctx, x).unwrap(), greene_2f1_alt(ctx, a, b, c, &ctx.element(x)).unwrap());
    }

    #[test]
    fn greene_denominators_divide_q_power(i in 0usize..FIELDS.len(), ks in prop::collection::vec(0u64..64, 3..6), x in 0u32..1000) {
        let ctx = field(i);
        let n = ctx.n();
        let m = ks.len() / 2 + 1;
        let upper: Vec<_> = ks[..m].iter().map(|&k| CharacterIndex(k % n)).collect();
        let lower: Vec<_> = ks[m..].iter().map(|&k| CharacterIndex(k % n)).collect();
        prop_assume!(upper.len() == lower.len() + 1);
        let kernel = HgfKernel::new(ctx, &upper, &lower).unwrap();
        let v = kernel.evaluate_idx(ctx, x % ctx.q() as u32).unwrap();
        let bound = BigInt::from(ctx.q()).pow(lower.len() as u32 + 1) * BigInt::from(n);
        prop_assert_eq!(&bound % v.denominator(), BigInt::from(0));
    }

    #[test]
    fn gamma_reflection(pi in 0usize..3, a in -200i64..200, b in 1i64..40, k in 1u32..4) {
        let p = [5u64, 7, 13][pi];
        prop_assume!(b as u64 % p != 0);
        let x = PadicRational::new(a, b);
        let one_minus = PadicRational::integer(1).sub(&x);
        let prod = gamma_p(&x, p, k).unwrap().mul(&gamma_p(&one_minus, p, k).unwrap());
        let x0 = match x.to_padic(p, 1).unwrap().residue() { 0 => p, r => r };
        let expect = if x0 % 2 == 0 { 1 } else { p.pow(k) - 1 };
        prop_assert_eq!(prod.residue(), expect);
    }

    #[test]
    fn gamma_continuity(pi in 0usize..3, a in -200i64..200, b in 1i64..40, c in -5i64..5, k in 1u32..4) {
        let p = [5u64, 7, 13][pi];
        prop_assume!(b as u64 % p != 0);
        let x = PadicRational::new(a, b);
        let y = x.add(&PadicRational::new(c * p.pow(k) as i64, b));
        prop_assert_eq!(gamma_p(&x, p, k).unwrap(), gamma_p(&y, p, k).unwrap());
    }

    #[test]
    fn mccarthy_precision_is_sound(pi in 0usize..4, t in 1u64..100, k in 1u32..3, fam in 0usize..2) {
        let p = [5u64, 7, 11, 13][pi];
        let t = t % (p - 1) + 1;
        let r = PadicRational::new;
        let (upper, lower) = if fam == 0 {
            (vec![r(1, 4), r(2, 4), r(3, 4)], vec![r(0, 1); 3])
        } else {
            (vec![r(1, 3), r(2, 3)], vec![r(0, 1), r(1, 2)])
        };
        let lo = McCarthyKernel::new(&upper, &lower, p, k).unwrap();
        let hi = McCarthyKernel::new(&upper, &lower, p, k + 1).unwrap();
        let s = lo.working_precision() - k;
        prop_assert_eq!(lo.evaluate_scaled(t, s).unwrap(), hi.evaluate_scaled(t, s).unwrap().reduce(k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quartic_oracles_agree(qi in 0usize..5, l in 1u32..100) {
        let (p, e) = [(5u64, 1u32), (13, 1), (17, 1), (29, 1), (3, 2)][qi];
        let ctx = build_field(p, e).unwrap();
        let l = l % (ctx.q() as u32 - 1) + 1;
        let lambda = ctx.element(l);
        let naive = count_naive_with_budget(&ctx, 4, l, u128::MAX).unwrap() as i64;
        prop_assert_eq!(count_k3_greene(&ctx, &lambda).unwrap(), naive);
        let kob = count_koblitz(&DworkParams::new(&ctx, 4, &lambda).unwrap()).unwrap();
        prop_assert_eq!(kob.count as i64, naive);
        prop_assert!(kob.residual < 1e-6);
    }
}

#[test]
fn lambda_zero_is_rejected_and_matches_n0() {
    for (p, e) in [(5u64, 1u32), (13, 1), (3, 2)] {
        let ctx = build_field(p, e).unwrap();
        let zero = ctx.zero();
        assert!(count_k3_greene(&ctx, &zero).is_err());
        assert!(count_koblitz(&DworkParams::new(&ctx, 4, &zero).unwrap()).is_err());
        let gauss = GaussTable::new(&ctx, 120);
        let n0 = n0_term(&ctx, &gauss, 4).unwrap().definitional.round_to_integer(1e-6).unwrap();
        assert_eq!(n0, BigInt::from(count_naive_with_budget(&ctx, 4, 0, u128::MAX).unwrap()));
    }
}
