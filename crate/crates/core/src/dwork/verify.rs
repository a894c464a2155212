//! Checks of point-count formulas, congruences, conjectures and supporting
//! identities. Each check returns one report per instance (usually per λ or
//! per x); domain mismatches become a single vacuous report.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::koblitz::{n0_term, CosetLabel, KoblitzEvaluator};
use super::{count_koblitz, count_naive_with_budget, projective_count, DworkParams, GeneralGreene, K3Greene, K3Padic};
use crate::arith::{gcd, is_prime, pow_mod};
use crate::char_sums::{
    greene_2f1_alt, greene_binomial, identity_suite, sign_at_minus_one, GaussTable, HgfKernel, IdentityOptions,
};
use crate::complex::{default_precision, ComplexApprox, DEFAULT_ROUNDING_THRESHOLD};
use crate::cyclotomic::{reduce_mod_p, CycloNumber};
use crate::error::{Error, Result};
use crate::finite_field::{irreducible_moduli, CharacterIndex, FieldContext, FieldElement};
use crate::padic::{gamma_p, pochhammer_identity_check, truncated_hgf_mod_p, McCarthyKernel, PadicInt, PadicRational};
use crate::report::VerificationReport;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Degree for the checks that take one; each check has its own default.
    pub d: Option<u32>,
    /// p-adic precision for residue comparisons.
    pub k: u32,
    /// Tolerance for approximate comparisons.
    pub tolerance: f64,
    /// Largest d used when a check sweeps degrees.
    pub max_degree: u32,
    /// Restrict λ (or x) to these element indices; `None` means all nonzero.
    pub lambdas: Option<Vec<u32>>,
    /// Complex working precision; `None` uses the default policy.
    pub prec: Option<u32>,
    pub naive_budget: u128,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            d: None,
            k: 2,
            tolerance: 1e-10,
            max_degree: 6,
            lambdas: None,
            prec: None,
            naive_budget: super::DEFAULT_NAIVE_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    /// A proved statement.
    Theorem,
    Conjecture,
    /// An identity or property of the underlying machinery.
    Identity,
}

#[derive(Clone, Copy, Debug)]
pub struct CheckInfo {
    pub id: &'static str,
    pub kind: CheckKind,
    pub summary: &'static str,
}

const fn info(id: &'static str, kind: CheckKind, summary: &'static str) -> CheckInfo {
    CheckInfo { id, kind, summary }
}

use CheckKind::{Conjecture, Identity, Theorem};

pub const CHECKS: &[CheckInfo] = &[
    info("k3-greene-count", Theorem, "quartic count via Greene 3F2 and 2F1 equals brute force"),
    info("k3-padic-count", Theorem, "quartic count via McCarthy 3G3 and 2G2 is congruent to brute force mod p^k"),
    info("k3-padic-vs-greene", Theorem, "p-adic and Greene quartic counts agree mod p^k"),
    info("k3-period-trace", Theorem, "quartic trace is congruent to the truncated period 3F2 mod p"),
    info("k3-2f1-vanishes", Theorem, "3p^2 binom 2F1 term of the quartic count vanishes mod p"),
    info("trunc-2f1", Theorem, "truncated 2F1(m/d, 1-m/d; 1) against -p 2F1(T^mt, conj) mod p"),
    info("trunc-2f1-legendre", Theorem, "truncated 2F1(1/2, 1/2; 1) against the quadratic-character 2F1 mod p"),
    info("trunc-dfd", Theorem, "p^(d-2) d-1Fd-2 against (-1)^d times the truncated series mod p"),
    info("trunc-3f2", Theorem, "p^2 3F2(T^t, T^2t, T^3t) against truncated 3F2(1/4, 1/2, 3/4; 1, 1) mod p"),
    info("koblitz-count", Theorem, "Gauss-sum count summed over shift classes equals brute force"),
    info("n0-closed-form", Theorem, "closed form of the lambda-free part at d = 4, and lambda = 0 brute force"),
    info("coset-0000", Theorem, "S[0000] against its 3F2 closed form"),
    info("coset-0112", Theorem, "S[0112] against 12q T^t(-1)(T^2t(1-l^4) - 1)"),
    info("coset-0112-unit", Theorem, "S[0112] at l^4 = 1"),
    info("coset-0022", Theorem, "S[0022] against -6q + 3q^2 binom 2F1"),
    info("coset-0022-unit", Theorem, "S[0022] at l^4 = 1"),
    info("coset-completeness", Identity, "sum over labels equals the full sum over W"),
    info("dwork-greene-count", Theorem, "general-degree Greene count equals brute force"),
    info("dwork-padic-count", Conjecture, "degree-d count against (p^(d-1)-1)/(p-1) - d-1Gd-1 mod p^k"),
    info("dwork-period-trace", Conjecture, "degree-d trace against the truncated period mod p"),
    info("pochhammer-gamma", Theorem, "Gamma_p quotient against Pochhammer quotient mod p"),
    info("gauss-norm", Identity, "|g(chi)|^2 = q"),
    info("gauss-conjugate", Identity, "g(chi) g(conj chi) = chi(-1) q"),
    info("hasse-davenport", Identity, "Hasse-Davenport product relation"),
    info("hasse-davenport-quartic", Identity, "quartic Hasse-Davenport corollary"),
    info("hasse-davenport-general", Identity, "degree-d Hasse-Davenport corollary"),
    info("helversen-pasotto", Identity, "Helversen-Pasotto four-Gauss-sum relation"),
    info("gauss-product", Identity, "Gauss-sum product sum against q(q-1)T^b(-1)T^2t(1-l^4)"),
    info("gamma-reflection", Identity, "Gamma_p(x)Gamma_p(1-x) = (-1)^x0"),
    info("gamma-continuity", Identity, "Gamma_p(x) = Gamma_p(y) mod p^k when x = y mod p^k"),
    info("nGn-precision", Identity, "McCarthy G at precision k+1 reduces to precision k"),
    info("greene-2f1-dual", Identity, "Greene 2F1 by Jacobi sums equals the direct character sum"),
    info("greene-mccarthy-bridge", Identity, "p^2 3F2 reduced mod p equals 3G3 mod p"),
    info("generator-invariance", Identity, "point counts do not depend on the chosen generator"),
    info("modulus-invariance", Identity, "point counts do not depend on the defining polynomial"),
];

pub fn check_info(id: &str) -> Option<&'static CheckInfo> {
    CHECKS.iter().find(|c| c.id == id)
}

/// Run one check over one field.
pub fn run_check(id: &str, ctx: &FieldContext, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    let info = check_info(id).ok_or_else(|| Error::Domain(format!("unknown check {id:?}")))?;
    let d = opts.d;
    let mut out = match info.id {
        "k3-greene-count" => check_k3_greene(ctx, opts)?,
        "k3-padic-count" => check_k3_padic(ctx, opts.k, opts)?,
        "k3-padic-vs-greene" => check_k3_padic_vs_greene(ctx, opts.k, opts)?,
        "k3-period-trace" => check_k3_period_trace(ctx, opts)?,
        "k3-2f1-vanishes" => check_k3_2f1_vanishes(ctx, opts)?,
        "trunc-2f1" => check_trunc_2f1(ctx, opts)?,
        "trunc-2f1-legendre" => check_trunc_2f1_legendre(ctx, opts)?,
        "trunc-dfd" => check_trunc_dfd(ctx, opts)?,
        "trunc-3f2" => check_trunc_3f2(ctx, opts)?,
        "koblitz-count" => check_koblitz(ctx, d.unwrap_or(4), opts)?,
        "dwork-greene-count" => check_general_greene(ctx, d.unwrap_or(3), opts)?,
        "dwork-padic-count" => check_dwork_padic(ctx, d.unwrap_or(5), opts)?,
        "dwork-period-trace" => check_dwork_period_trace(ctx, d.unwrap_or(5), opts)?,
        "pochhammer-gamma" => check_pochhammer(ctx, opts)?,
        "n0-closed-form" | "coset-0000" | "coset-0112" | "coset-0112-unit" | "coset-0022" | "coset-0022-unit"
        | "coset-completeness" => coset_suite(ctx, opts)?.into_iter().filter(|r| r.theorem == info.id).collect(),
        "gauss-norm" | "gauss-conjugate" | "hasse-davenport" | "hasse-davenport-quartic" | "hasse-davenport-general"
        | "helversen-pasotto" | "gauss-product" => {
            let gauss = GaussTable::new(ctx, opts.prec.unwrap_or_else(|| default_precision(ctx.q(), 4)));
            let iopts = IdentityOptions { tolerance: opts.tolerance, ..IdentityOptions::default() };
            identity_suite(ctx, &gauss, &iopts).into_iter().filter(|r| r.theorem == info.id).collect()
        }
        "gamma-reflection" => check_gamma_reflection(ctx, opts)?,
        "gamma-continuity" => check_gamma_continuity(ctx, opts)?,
        "nGn-precision" => check_ngn_precision(ctx, opts)?,
        "greene-2f1-dual" => check_greene_2f1_dual(ctx, opts)?,
        "greene-mccarthy-bridge" => check_greene_mccarthy_bridge(ctx, opts)?,
        "generator-invariance" => check_generator_invariance(ctx, opts)?,
        "modulus-invariance" => check_modulus_invariance(ctx.p(), ctx.e(), opts)?,
        _ => unreachable!("every registered check is dispatched"),
    };
    if out.is_empty() {
        out.push(inapplicable(info.id, ctx, "no admissible parameters"));
    }
    if info.kind == Conjecture {
        out = out.into_iter().map(|r| r.conjecture()).collect();
    }
    Ok(out)
}

fn base(id: &str, ctx: &FieldContext) -> VerificationReport {
    VerificationReport::new(id).param("q", ctx.q())
}

fn inapplicable(id: &str, ctx: &FieldContext, why: impl std::fmt::Display) -> VerificationReport {
    base(id, ctx).vacuous(format!("inapplicable: {why}"))
}

fn lambdas(ctx: &FieldContext, opts: &VerifyOptions) -> Vec<u32> {
    match &opts.lambdas {
        Some(v) => v.iter().copied().filter(|&l| l != 0 && (l as u64) < ctx.q()).collect(),
        None => (1..ctx.q() as u32).collect(),
    }
}

fn split(ctx: &FieldContext, d: u32) -> Option<u64> {
    (d >= 2 && ctx.n() % d as u64 == 0).then(|| ctx.n() / d as u64)
}

fn naive(ctx: &FieldContext, d: u32, lambda: u32, opts: &VerifyOptions) -> Result<u64> {
    count_naive_with_budget(ctx, d, lambda, opts.naive_budget)
}

fn r(a: i64, b: i64) -> PadicRational {
    PadicRational::new(a, b)
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn chars(ks: impl IntoIterator<Item = u64>) -> Vec<CharacterIndex> {
    ks.into_iter().map(CharacterIndex).collect()
}

fn modulus_of(p: u64, k: u32) -> u64 {
    p.pow(k)
}

fn residue(v: i128, m: u64) -> u64 {
    v.rem_euclid(m as i128) as u64
}

/// Residue comparison where the finite-field side may fail to be p-integral.
fn residue_report(r: VerificationReport, lhs: Result<u64>, rhs: Result<u64>, m: u64) -> VerificationReport {
    match (lhs, rhs) {
        (Ok(a), Ok(b)) => r.residues(a, b, m),
        (a, b) => {
            let show = |v: &Result<u64>| match v {
                Ok(x) => x.to_string(),
                Err(e) => format!("<{e}>"),
            };
            r.exact(show(&a), show(&b), false, "not comparable mod p").param("modulus", m)
        }
    }
}

fn require_prime_field(id: &str, ctx: &FieldContext) -> Option<VerificationReport> {
    (ctx.e() != 1).then(|| inapplicable(id, ctx, "needs a prime field"))
}

/// (1/d, …, (d-1)/d; 1, …, 1) as p-adic rationals.
fn period_params(d: u32) -> (Vec<PadicRational>, Vec<PadicRational>) {
    ((1..d as i64).map(|i| r(i, d as i64)).collect(), vec![r(1, 1); d as usize - 2])
}

fn par_lambdas<F>(ctx: &FieldContext, opts: &VerifyOptions, f: F) -> Result<Vec<VerificationReport>>
where
    F: Fn(u32) -> Result<Vec<VerificationReport>> + Sync + Send,
{
    let ls = lambdas(ctx, opts);
    let parts: Vec<Vec<VerificationReport>> = ls.par_iter().map(|&l| f(l)).collect::<Result<_>>()?;
    Ok(parts.into_iter().flatten().collect())
}

pub fn check_k3_greene(ctx: &FieldContext, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "k3-greene-count";
    if split(ctx, 4).is_none() {
        return Ok(vec![inapplicable(ID, ctx, "q is not 1 mod 4")]);
    }
    let k3 = K3Greene::new(ctx)?;
    par_lambdas(ctx, opts, |l| {
        let lhs = k3.count(l)?;
        let rhs = naive(ctx, 4, l, opts)?;
        Ok(vec![base(ID, ctx).param("lambda", l).integers(lhs as i128, rhs as i128)])
    })
}

pub fn check_k3_padic(ctx: &FieldContext, k: u32, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "k3-padic-count";
    if let Some(r) = require_prime_field(ID, ctx) {
        return Ok(vec![r]);
    }
    let p = ctx.p();
    let padic = K3Padic::new(p, k)?;
    par_lambdas(ctx, opts, |l| {
        let lhs = padic.count(l as u64)?;
        let rhs = naive(ctx, 4, l, opts)?;
        let m = modulus_of(p, k);
        Ok(vec![base(ID, ctx).param("lambda", l).param("k", k).residues(lhs.residue(), rhs % m, m)])
    })
}

pub fn check_k3_padic_vs_greene(ctx: &FieldContext, k: u32, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "k3-padic-vs-greene";
    if let Some(r) = require_prime_field(ID, ctx) {
        return Ok(vec![r]);
    }
    if split(ctx, 4).is_none() {
        return Ok(vec![inapplicable(ID, ctx, "p is not 1 mod 4")]);
    }
    let p = ctx.p();
    let padic = K3Padic::new(p, k)?;
    let k3 = K3Greene::new(ctx)?;
    par_lambdas(ctx, opts, |l| {
        let m = modulus_of(p, k);
        let lhs = padic.count(l as u64)?;
        let rhs = residue(k3.count(l)? as i128, m);
        Ok(vec![base(ID, ctx).param("lambda", l).param("k", k).residues(lhs.residue(), rhs, m)])
    })
}

pub fn check_k3_period_trace(ctx: &FieldContext, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "k3-period-trace";
    if let Some(r) = require_prime_field(ID, ctx) {
        return Ok(vec![r]);
    }
    if split(ctx, 4).is_none() {
        return Ok(vec![inapplicable(ID, ctx, "p is not 1 mod 4")]);
    }
    let p = ctx.p();
    let k3 = K3Greene::new(ctx)?;
    let (upper, lower) = period_params(4);
    par_lambdas(ctx, opts, |l| {
        let trace = k3.count(l)? as i128 - (p * p + 1) as i128;
        let z = ctx.inv_idx(ctx.pow_idx(l, 4)).unwrap() as u64;
        let rhs = truncated_hgf_mod_p(&upper, &lower, z, p, p);
        Ok(vec![residue_report(base(ID, ctx).param("lambda", l).param("trace", trace), Ok(residue(trace, p)), rhs, p)])
    })
}

pub fn check_k3_2f1_vanishes(ctx: &FieldContext, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "k3-2f1-vanishes";
    if let Some(r) = require_prime_field(ID, ctx) {
        return Ok(vec![r]);
    }
    let Some(t) = split(ctx, 4) else {
        return Ok(vec![inapplicable(ID, ctx, "p is not 1 mod 4")]);
    };
    let p = ctx.p();
    let binom = greene_binomial(ctx, CharacterIndex(3 * t), CharacterIndex(t))?;
    let kernel = HgfKernel::new(ctx, &chars([3 * t, t]), &chars([2 * t]))?;
    par_lambdas(ctx, opts, |l| {
        let x = ctx.inv_idx(ctx.pow_idx(l, 4)).unwrap();
        let term = binom.mul(&kernel.evaluate_idx(ctx, x)?).scale(&int(3 * (p * p) as i64));
        Ok(vec![residue_report(base(ID, ctx).param("lambda", l), reduce_mod_p(&term, ctx), Ok(0), p)])
    })
}

pub fn check_trunc_2f1(ctx: &FieldContext, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "trunc-2f1";
    if let Some(r) = require_prime_field(ID, ctx) {
        return Ok(vec![r]);
    }
    let (p, n) = (ctx.p(), ctx.n());
    let mut out = Vec::new();
    let degrees: Vec<u32> = match opts.d {
        Some(d) => vec![d],
        None => (2..=opts.max_degree).collect(),
    };
    for d in degrees {
        let Some(t) = split(ctx, d) else { continue };
        for m in 1..d as u64 {
            let kernel = HgfKernel::new(ctx, &chars([m * t, n - m * t]), &chars([0]))?;
            let upper = [r(m as i64, d as i64), r((d as u64 - m) as i64, d as i64)];
            out.extend(par_lambdas(ctx, opts, |x| {
                let lhs = truncated_hgf_mod_p(&upper, &[r(1, 1)], x as u64, p, p);
                let rhs = kernel.evaluate_idx(ctx, x)?.scale(&int(-(p as i64)));
                Ok(vec![residue_report(
                    base(ID, ctx).param("d", d).param("m", m).param("x", x),
                    lhs,
                    reduce_mod_p(&rhs, ctx),
                    p,
                )])
            })?);
        }
    }
    Ok(out)
}

pub fn check_trunc_2f1_legendre(ctx: &FieldContext, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "trunc-2f1-legendre";
    if let Some(r) = require_prime_field(ID, ctx) {
        return Ok(vec![r]);
    }
    let p = ctx.p();
    let half = ctx.n() / 2;
    let sign = sign_at_minus_one(half as i64) as i64;
    let kernel = HgfKernel::new(ctx, &chars([half, half]), &chars([0]))?;
    par_lambdas(ctx, opts, |l| {
        let lhs = truncated_hgf_mod_p(&[r(1, 2), r(1, 2)], &[r(1, 1)], l as u64, p, p)
            .map(|v| residue(sign as i128 * v as i128, p));
        let rhs = kernel.evaluate_idx(ctx, l)?.scale(&int(-sign * p as i64));
        Ok(vec![residue_report(base(ID, ctx).param("lambda", l), lhs, reduce_mod_p(&rhs, ctx), p)])
    })
}

fn trunc_dfd(id: &str, ctx: &FieldContext, d: u32, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    let p = ctx.p();
    let Some(t) = split(ctx, d) else {
        return Ok(vec![inapplicable(id, ctx, format!("p is not 1 mod {d}")).param("d", d)]);
    };
    let kernel = HgfKernel::new(ctx, &chars((1..d as u64).map(|i| i * t)), &chars(vec![0; d as usize - 2]))?;
    let (upper, lower) = period_params(d);
    let scale = BigRational::from_integer(BigInt::from(p).pow(d - 2));
    let sign: i128 = if d % 2 == 0 { 1 } else { -1 };
    par_lambdas(ctx, opts, |x| {
        let lhs = kernel.evaluate_idx(ctx, x)?.scale(&scale);
        let rhs = truncated_hgf_mod_p(&upper, &lower, x as u64, p, p).map(|v| residue(sign * v as i128, p));
        Ok(vec![residue_report(base(id, ctx).param("d", d).param("x", x), reduce_mod_p(&lhs, ctx), rhs, p)])
    })
}

pub fn check_trunc_dfd(ctx: &FieldContext, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "trunc-dfd";
    if let Some(r) = require_prime_field(ID, ctx) {
        return Ok(vec![r]);
    }
    let degrees: Vec<u32> = match opts.d {
        Some(d) => vec![d],
        None => (3..=opts.max_degree).filter(|&d| split(ctx, d).is_some()).collect(),
    };
    let mut out = Vec::new();
    for d in degrees {
        if d < 3 {
            out.push(inapplicable(ID, ctx, "needs d >= 3").param("d", d));
            continue;
        }
        out.extend(trunc_dfd(ID, ctx, d, opts)?);
    }
    Ok(out)
}

pub fn check_trunc_3f2(ctx: &FieldContext, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "trunc-3f2";
    if let Some(r) = require_prime_field(ID, ctx) {
        return Ok(vec![r]);
    }
    trunc_dfd(ID, ctx, 4, opts)
}

pub fn check_koblitz(ctx: &FieldContext, d: u32, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "koblitz-count";
    if split(ctx, d).is_none() {
        return Ok(vec![inapplicable(ID, ctx, format!("q is not 1 mod {d}")).param("d", d)]);
    }
    let prec = opts.prec.unwrap_or_else(|| default_precision(ctx.q(), d));
    let ev = KoblitzEvaluator::new(ctx, d, prec)?;
    par_lambdas(ctx, opts, |l| {
        let total = ev.total(l);
        let (count, prec, residual) = match total.round_to_integer(DEFAULT_ROUNDING_THRESHOLD) {
            Ok(c) => {
                let residual = total.distance_upper(&ComplexApprox::from_big(&c, prec));
                (c, prec, residual)
            }
            Err(_) => {
                let lambda = ctx.element(l);
                let kc = count_koblitz(&DworkParams::new(ctx, d, &lambda)?)?;
                (BigInt::from(kc.count), kc.prec, kc.residual)
            }
        };
        let rhs = naive(ctx, d, l, opts)?;
        let count: i128 = count.try_into().map_err(|_| Error::Inconsistent("count overflow".into()))?;
        Ok(vec![base(ID, ctx)
            .param("d", d)
            .param("lambda", l)
            .param("prec", prec)
            .param("residual", format!("{residual:.3e}"))
            .integers(count, rhs as i128)])
    })
}

pub fn check_general_greene(ctx: &FieldContext, d: u32, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "dwork-greene-count";
    if d < 3 || split(ctx, d).is_none() {
        return Ok(vec![inapplicable(ID, ctx, format!("needs d >= 3 and q = 1 mod d (d = {d})")).param("d", d)]);
    }
    let mut prec = opts.prec.unwrap_or_else(|| default_precision(ctx.q(), d));
    let mut ev = GeneralGreene::new(ctx, d, prec)?;
    let mut out = Vec::new();
    // Sequential so a precision retry can replace the evaluator for the rest of the sweep.
    for l in lambdas(ctx, opts) {
        let mut tries = 0;
        let count = loop {
            let total = ev.total(l)?;
            match total.round_to_integer(DEFAULT_ROUNDING_THRESHOLD) {
                Ok(c) => break c,
                Err(e) if tries == super::koblitz::MAX_PRECISION_RETRIES => return Err(e),
                Err(_) => {
                    tries += 1;
                    prec *= 2;
                    ev = GeneralGreene::new(ctx, d, prec)?;
                }
            }
        };
        let rhs = naive(ctx, d, l, opts)?;
        let count: i128 = count.try_into().map_err(|_| Error::Inconsistent("count overflow".into()))?;
        out.push(base(ID, ctx).param("d", d).param("lambda", l).param("prec", prec).integers(count, rhs as i128));
    }
    Ok(out)
}

pub fn check_dwork_padic(ctx: &FieldContext, d: u32, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "dwork-padic-count";
    if let Some(r) = require_prime_field(ID, ctx) {
        return Ok(vec![r.param("d", d)]);
    }
    let p = ctx.p();
    if d < 3 || !is_prime(d as u64) || p % d as u64 == 1 || p == d as u64 {
        return Ok(vec![inapplicable(ID, ctx, "needs d an odd prime, p != d and p != 1 mod d").param("d", d)]);
    }
    let k = opts.k;
    let upper: Vec<_> = (1..d as i64).map(|i| r(i, d as i64)).collect();
    let lower = vec![r(0, 1); d as usize - 1];
    let kernel = McCarthyKernel::new(&upper, &lower, p, k)?;
    let constant = PadicInt::from_i128(projective_count(p, d - 1), p, k);
    par_lambdas(ctx, opts, |l| {
        let m = modulus_of(p, k);
        let lhs = naive(ctx, d, l, opts)? % m;
        let g = kernel.evaluate(pow_mod(l as u64, d as u64, p))?;
        let rhs = constant.sub(&g);
        Ok(vec![base(ID, ctx)
            .param("d", d)
            .param("lambda", l)
            .param("k", k)
            .param("sign", "-")
            .residues(lhs, rhs.residue(), m)])
    })
}

/// The trace paired with the period: #X - p² - 1 for d = 4,
/// p³ + 25p² - 100p + 1 - #X for d = 5, and (-1)^d(#X - 1) mod p otherwise.
pub fn dwork_trace(d: u32, p: u64, count: u64) -> i128 {
    let (p, c) = (p as i128, count as i128);
    match d {
        4 => c - p * p - 1,
        5 => p * p * p + 25 * p * p - 100 * p + 1 - c,
        _ if d % 2 == 0 => c - 1,
        _ => 1 - c,
    }
}

pub fn check_dwork_period_trace(ctx: &FieldContext, d: u32, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "dwork-period-trace";
    if let Some(r) = require_prime_field(ID, ctx) {
        return Ok(vec![r.param("d", d)]);
    }
    let p = ctx.p();
    if d < 3 || split(ctx, d).is_none() {
        return Ok(vec![inapplicable(ID, ctx, format!("needs d >= 3 and p = 1 mod d (d = {d})")).param("d", d)]);
    }
    let (upper, lower) = period_params(d);
    par_lambdas(ctx, opts, |l| {
        let trace = dwork_trace(d, p, naive(ctx, d, l, opts)?);
        let z = ctx.inv_idx(ctx.pow_idx(l, d as u64)).unwrap() as u64;
        let rhs = truncated_hgf_mod_p(&upper, &lower, z, p, p);
        Ok(vec![residue_report(
            base(ID, ctx).param("d", d).param("lambda", l).param("trace", trace),
            Ok(residue(trace, p)),
            rhs,
            p,
        )])
    })
}

/// Every (m, d, j) with d | p - 1, d ≤ max_degree and 0 ≤ j ≤ mt.
pub fn check_pochhammer(ctx: &FieldContext, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "pochhammer-gamma";
    if let Some(r) = require_prime_field(ID, ctx) {
        return Ok(vec![r]);
    }
    let p = ctx.p();
    let mut out = Vec::new();
    for d in 2..=opts.max_degree as u64 {
        if (p - 1) % d != 0 || opts.d.is_some_and(|x| x as u64 != d) {
            continue;
        }
        let t = (p - 1) / d;
        for m in 1..d {
            for j in 0..=m * t {
                out.push(pochhammer_identity_check(m, d, p, j)?.param("q", p));
            }
        }
    }
    Ok(out)
}

/// Prop-level closed forms for the quartic coset sums, compared with the
/// definitional sums in the approximate backend.
pub fn coset_suite(ctx: &FieldContext, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    let Some(t) = split(ctx, 4) else {
        return Ok(["n0-closed-form", "coset-0000", "coset-0112", "coset-0022", "coset-completeness"]
            .iter()
            .map(|id| inapplicable(id, ctx, "q is not 1 mod 4"))
            .collect());
    };
    let tol = opts.tolerance;
    let q = ctx.q() as i64;
    let n = ctx.n() as i64;
    let ti = t as i64;
    let prec = opts.prec.unwrap_or_else(|| default_precision(ctx.q(), 4));
    let ev = KoblitzEvaluator::new(ctx, 4, prec)?;
    let gauss = ev.gauss();
    let cint = |v: i64| ComplexApprox::from_int(v, prec);
    let exact = |v: &CycloNumber| v.to_complex(gauss.roots());
    let within = |id: &str, l: u32, lhs: &ComplexApprox, rhs: &ComplexApprox| {
        base(id, ctx).param("lambda", l).within(lhs, rhs, lhs.distance_upper(rhs), tol)
    };
    let mut out = Vec::new();

    let n0 = n0_term(ctx, gauss, 4)?;
    let closed = n0.closed_form.clone().expect("closed form at d = 4");
    out.push(base("n0-closed-form", ctx).within(&closed, &n0.definitional, closed.distance_upper(&n0.definitional), tol));
    let at_zero = naive(ctx, 4, 0, opts)?;
    let rounded = n0.definitional.round_to_integer(DEFAULT_ROUNDING_THRESHOLD)?;
    out.push(
        base("n0-closed-form", ctx)
            .param("lambda", 0)
            .integers(rounded.try_into().unwrap_or(i128::MAX), at_zero as i128),
    );

    let l0 = CosetLabel::of(&[0, 0, 0, 0])?;
    let l1 = CosetLabel::of(&[0, 1, 1, 2])?;
    let l2 = CosetLabel::of(&[0, 0, 2, 2])?;
    let f32 = HgfKernel::new(ctx, &chars([t, 2 * t, 3 * t]), &chars([0, 0]))?;
    let f21 = HgfKernel::new(ctx, &chars([3 * t, t]), &chars([2 * t]))?;
    let binom = greene_binomial(ctx, CharacterIndex(3 * t), CharacterIndex(t))?;
    let mut fourth = ComplexApprox::zero(prec);
    for i in 1..4 {
        let g = gauss.get(i * ti);
        fourth = fourth.add(&g.mul(g).mul(g).mul(g));
    }
    let fourth = fourth.div_int(q);
    let sign_t = sign_at_minus_one(ti) as i64;
    // Full sum over W, each tuple weighted 1/d since shift classes have d members.
    let w_all: Vec<Vec<i64>> = (0..64u32)
        .map(|c| vec![(c % 4) as i64, (c / 4 % 4) as i64, (c / 16) as i64, (-(((c % 4) + (c / 4 % 4) + c / 16) as i64)).rem_euclid(4)])
        .collect();
    let w_ratios: Vec<ComplexApprox> = (0..n)
        .map(|j| {
            let mut s = ComplexApprox::zero(prec);
            for w in &w_all {
                let mut prod = cint(1);
                for &wi in w {
                    prod = prod.mul(gauss.get(wi * ti + j));
                }
                s = s.add(&prod);
            }
            s.div(gauss.get(4 * j)).expect("Gauss sums are nonzero")
        })
        .collect();
    let four = ctx.int_idx(4);

    let per_lambda: Vec<Vec<VerificationReport>> = lambdas(ctx, opts)
        .par_iter()
        .map(|&l| -> Result<Vec<VerificationReport>> {
            let mut rs = Vec::new();
            let lam4 = ctx.pow_idx(l, 4);
            let x = ctx.inv_idx(lam4).unwrap();
            let unit = lam4 == 1;

            let s0 = ev.coset(&l0, l);
            let rhs0 = exact(&f32.evaluate_idx(ctx, x)?).mul_int(q * q).sub(&fourth);
            rs.push(within("coset-0000", l, &s0, &rhs0));

            let s1 = ev.coset(&l1, l);
            let quad = gauss.char_at(ctx, 2 * ti, ctx.sub_idx(1, lam4));
            let rhs1 = quad.sub(&cint(1)).mul_int(12 * q * sign_t);
            rs.push(within("coset-0112", l, &s1, &rhs1));
            if unit {
                rs.push(within("coset-0112-unit", l, &s1, &cint(-12 * q * sign_t)));
            }

            let s2 = ev.coset(&l2, l);
            let b21 = exact(&binom.mul(&f21.evaluate_idx(ctx, x)?));
            let rhs2 = b21.mul_int(3 * q * q).add(&cint(-6 * q));
            rs.push(within("coset-0022", l, &s2, &rhs2));
            if unit {
                rs.push(within("coset-0022-unit", l, &s2, &cint(-6 * q + 3 * q * sign_t)));
            }

            let d_lambda = ctx.mul_idx(four, l);
            let mut full = ComplexApprox::zero(prec);
            for (j, w) in w_ratios.iter().enumerate() {
                full = full.add(&w.mul(&gauss.char_at(ctx, 4 * j as i64, d_lambda)));
            }
            let full = full.div_int(4 * n);
            rs.push(within("coset-completeness", l, &ev.coset_total(l), &full));
            Ok(rs)
        })
        .collect::<Result<_>>()?;
    out.extend(per_lambda.into_iter().flatten());
    Ok(out)
}

/// Rationals a/b with b ≤ 12 and p ∤ b, plus a few negative and large ones.
fn rational_grid(p: u64) -> Vec<PadicRational> {
    let mut v = Vec::new();
    for b in 1..=12i64 {
        if b as u64 % p == 0 {
            continue;
        }
        for a in -b..=2 * b {
            if gcd(a.unsigned_abs(), b as u64) == 1 {
                v.push(r(a, b));
            }
        }
    }
    v.extend([r(1000, 7), r(-999, 11), r(12345, 1)].into_iter().filter(|x| x.den() as u64 % p != 0));
    v
}

pub fn check_gamma_reflection(ctx: &FieldContext, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "gamma-reflection";
    if let Some(r) = require_prime_field(ID, ctx) {
        return Ok(vec![r]);
    }
    let (p, k) = (ctx.p(), opts.k);
    let m = modulus_of(p, k);
    let mut out = Vec::new();
    for x in rational_grid(p) {
        let lhs = gamma_p(&x, p, k)?.mul(&gamma_p(&r(1, 1).sub(&x), p, k)?);
        // x_0 ∈ {1, …, p} with x_0 ≡ x (mod p).
        let x0 = match x.to_padic(p, 1)?.residue() {
            0 => p,
            v => v,
        };
        let rhs = if x0 % 2 == 0 { 1 } else { m - 1 };
        out.push(base(ID, ctx).param("x", x).param("k", k).residues(lhs.residue(), rhs, m));
    }
    Ok(out)
}

pub fn check_gamma_continuity(ctx: &FieldContext, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "gamma-continuity";
    if let Some(r) = require_prime_field(ID, ctx) {
        return Ok(vec![r]);
    }
    let (p, k) = (ctx.p(), opts.k);
    let shift = modulus_of(p, k) as i64;
    let mut out = Vec::new();
    for x in rational_grid(p).into_iter().step_by(3) {
        for c in [1i64, -2, 5] {
            // y = x + c p^k/b keeps y ≡ x (mod p^k) while changing the numerator.
            let y = x.add(&r(c * shift, x.den()));
            let a = gamma_p(&x, p, k)?;
            let b = gamma_p(&y, p, k)?;
            out.push(
                base(ID, ctx).param("x", x).param("y", y).param("k", k).residues(a.residue(), b.residue(), a.modulus()),
            );
        }
    }
    Ok(out)
}

pub fn check_ngn_precision(ctx: &FieldContext, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "nGn-precision";
    if let Some(r) = require_prime_field(ID, ctx) {
        return Ok(vec![r]);
    }
    let (p, k) = (ctx.p(), opts.k);
    let families: [(&str, Vec<PadicRational>, Vec<PadicRational>); 3] = [
        ("3G3[1/4,2/4,3/4;0,0,0]", vec![r(1, 4), r(2, 4), r(3, 4)], vec![r(0, 1); 3]),
        ("2G2[3/4,1/4;0,1/2]", vec![r(3, 4), r(1, 4)], vec![r(0, 1), r(1, 2)]),
        ("1G1[3/4;1/2]", vec![r(3, 4)], vec![r(1, 2)]),
    ];
    let mut out = Vec::new();
    for (name, upper, lower) in families {
        let lo = McCarthyKernel::new(&upper, &lower, p, k)?;
        let hi = McCarthyKernel::new(&upper, &lower, p, k + 1)?;
        // Families with negative exponents need not be p-integral; compare p^s G.
        let shift = lo.working_precision() - k;
        for t in lambdas(ctx, opts) {
            let a = lo.evaluate_scaled(t as u64, shift)?;
            let b = hi.evaluate_scaled(t as u64, shift)?.reduce(k);
            out.push(
                base(ID, ctx)
                    .param("family", name)
                    .param("t", t)
                    .param("k", k)
                    .param("scale", format!("p^{shift}"))
                    .residues(a.residue(), b.residue(), a.modulus()),
            );
        }
    }
    Ok(out)
}

/// Exhaustive over (A, B, C, x) when q ≤ 13, otherwise every fifth character triple.
pub fn check_greene_2f1_dual(ctx: &FieldContext, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "greene-2f1-dual";
    let n = ctx.n();
    let triples: Vec<(u64, u64, u64)> = (0..n * n * n)
        .filter(|i| ctx.q() <= 13 || i % 5 == 0)
        .map(|i| (i % n, i / n % n, i / (n * n)))
        .collect();
    let xs = lambdas(ctx, opts);
    let parts: Vec<Vec<VerificationReport>> = triples
        .par_iter()
        .map(|&(a, b, c)| -> Result<Vec<VerificationReport>> {
            let kernel = HgfKernel::new(ctx, &chars([a, b]), &chars([c]))?;
            let mut worst: Option<VerificationReport> = None;
            let mut count = 0usize;
            for &x in &xs {
                let lhs = kernel.evaluate_idx(ctx, x)?;
                let rhs = greene_2f1_alt(ctx, CharacterIndex(a), CharacterIndex(b), CharacterIndex(c), &ctx.element(x))?;
                count += 1;
                if lhs != rhs {
                    let diff = lhs.sub(&rhs);
                    worst = Some(base(ID, ctx).param("chars", format!("{a},{b};{c}")).param("x", x).exact(lhs, rhs, false, diff));
                    break;
                }
            }
            Ok(vec![worst.unwrap_or_else(|| {
                base(ID, ctx).param("chars", format!("{a},{b};{c}")).param("instances", count).exact("equal", "equal", true, 0)
            })])
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().flatten().collect())
}

pub fn check_greene_mccarthy_bridge(ctx: &FieldContext, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "greene-mccarthy-bridge";
    if let Some(r) = require_prime_field(ID, ctx) {
        return Ok(vec![r]);
    }
    let Some(t) = split(ctx, 4) else {
        return Ok(vec![inapplicable(ID, ctx, "p is not 1 mod 4")]);
    };
    let p = ctx.p();
    let f32 = HgfKernel::new(ctx, &chars([t, 2 * t, 3 * t]), &chars([0, 0]))?;
    let g33 = McCarthyKernel::new(&[r(1, 4), r(2, 4), r(3, 4)], &[r(0, 1); 3], p, 1)?;
    par_lambdas(ctx, opts, |l| {
        let lam4 = ctx.pow_idx(l, 4);
        let x = ctx.inv_idx(lam4).unwrap();
        let lhs = f32.evaluate_idx(ctx, x)?.scale(&int((p * p) as i64));
        let rhs = g33.evaluate(lam4 as u64)?;
        Ok(vec![residue_report(base(ID, ctx).param("lambda", l), reduce_mod_p(&lhs, ctx), Ok(rhs.residue()), p)])
    })
}

fn generators(ctx: &FieldContext) -> Vec<FieldElement> {
    let n = ctx.n();
    (1..n).filter(|&j| gcd(j, n) == 1).map(|j| ctx.element(ctx.exp_idx(j))).collect()
}

/// Rebuild the field with every other generator and compare point counts at
/// each λ (same polynomial basis, so λ keeps its meaning).
pub fn check_generator_invariance(ctx: &FieldContext, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "generator-invariance";
    let mut out = Vec::new();
    let ls = lambdas(ctx, opts);
    let quartic = split(ctx, 4).is_some();
    let cubic = split(ctx, 3).is_some();
    if !quartic && !cubic {
        return Ok(vec![inapplicable(ID, ctx, "q is neither 1 mod 3 nor 1 mod 4")]);
    }
    let reference_k3 = if quartic { Some(K3Greene::new(ctx)?) } else { None };
    let reference_cubic = if cubic {
        Some(GeneralGreene::new(ctx, 3, opts.prec.unwrap_or_else(|| default_precision(ctx.q(), 3)))?)
    } else {
        None
    };
    let round = |c: ComplexApprox| -> Result<i128> {
        c.round_to_integer(DEFAULT_ROUNDING_THRESHOLD)?
            .try_into()
            .map_err(|_| Error::Inconsistent("count overflow".into()))
    };
    for g in generators(ctx).into_iter().skip(1) {
        let other = FieldContext::with_modulus_and_generator(ctx.p(), ctx.e(), ctx.modulus(), &g)?;
        let gi = ctx.index(&g);
        if let Some(k3) = &reference_k3 {
            let k3b = K3Greene::new(&other)?;
            for &l in &ls {
                let a = k3.count(l)?;
                let b = k3b.count(l)?;
                out.push(base(ID, ctx).param("method", "k3-greene").param("generator", gi).param("lambda", l).integers(a as i128, b as i128));
            }
        }
        if let Some(cub) = &reference_cubic {
            let cubb = GeneralGreene::new(&other, 3, opts.prec.unwrap_or_else(|| default_precision(ctx.q(), 3)))?;
            for &l in &ls {
                let a = round(cub.total(l)?)?;
                let b = round(cubb.total(l)?)?;
                out.push(base(ID, ctx).param("method", "dwork-greene-d3").param("generator", gi).param("lambda", l).integers(a, b));
            }
        }
    }
    Ok(out)
}

/// Point counts over every defining polynomial of F_{p^e}. λ in the prime
/// field is fixed by every isomorphism, so those counts must agree exactly;
/// over the whole field the sorted multisets of counts must agree.
pub fn check_modulus_invariance(p: u64, e: u32, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    const ID: &str = "modulus-invariance";
    let moduli = irreducible_moduli(p, e)?;
    let q = p.pow(e);
    let d = opts.d.unwrap_or(if (q - 1) % 4 == 0 { 4 } else { 3 });
    let mut profiles: Vec<(Vec<u32>, Vec<u64>, Vec<u64>)> = Vec::new();
    for m in &moduli {
        let base_ctx = FieldContext::with_modulus(p, e, m)?;
        let counts: Vec<u64> = (1..q as u32)
            .into_par_iter()
            .map(|l| count_naive_with_budget(&base_ctx, d, l, opts.naive_budget))
            .collect::<Result<_>>()?;
        let prime_field: Vec<u64> = (1..p as u32).map(|c| counts[c as usize - 1]).collect();
        let mut sorted = counts.clone();
        sorted.sort_unstable();
        profiles.push((m.clone(), prime_field, sorted));
    }
    let (m0, pf0, s0) = &profiles[0];
    let mut out = Vec::new();
    for (m, pf, s) in profiles.iter().skip(1) {
        let r = VerificationReport::new(ID).param("q", q).param("d", d).param("modulus", format!("{m:?}")).param("reference", format!("{m0:?}"));
        out.push(r.clone().param("scope", "prime-field").exact(format!("{pf:?}"), format!("{pf0:?}"), pf == pf0, ""));
        out.push(r.param("scope", "multiset").exact(format!("{s:?}"), format!("{s0:?}"), s == s0, ""));
    }
    if out.is_empty() {
        out.push(VerificationReport::new(ID).param("q", q).vacuous("only one defining polynomial"));
    }
    Ok(out)
}

/// Every check applicable at a prime power, in registry order.
pub fn all_checks(ctx: &FieldContext, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for c in CHECKS {
        out.extend(run_check(c.id, ctx, opts)?);
    }
    Ok(out)
}
