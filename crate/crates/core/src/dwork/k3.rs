use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{projective_count, require_nonzero, require_split};
use crate::arith::legendre;
use crate::char_sums::{char_value, greene_binomial, sign_at_minus_one, HgfKernel};
use crate::cyclotomic::CycloNumber;
use crate::error::{Error, Result};
use crate::finite_field::{CharacterIndex, FieldContext, FieldElement};
use crate::padic::{McCarthyKernel, PadicInt, PadicRational};

/// The K3 point count through Greene functions, with the 3F2 and 2F1
/// kernels built once per field.
pub struct K3Greene<'a> {
    ctx: &'a FieldContext,
    t: u64,
    f32: HgfKernel,
    f21: HgfKernel,
    binom: CycloNumber,
}

/// The summands of the general formula at one λ.
#[derive(Clone, Debug)]
pub struct K3Terms {
    /// 12q T^t(-1) T^{2t}(1 - λ⁴).
    pub character: CycloNumber,
    /// q² 3F2(T^t, T^{2t}, T^{3t}; ε, ε | 1/λ⁴).
    pub f32: CycloNumber,
    /// 3F2 value itself.
    pub f32_raw: CycloNumber,
    /// binom(T^{3t}, T^t) 2F1(T^{3t}, T^t; T^{2t} | 1/λ⁴), unscaled.
    pub binom_f21: CycloNumber,
}

impl<'a> K3Greene<'a> {
    pub fn new(ctx: &'a FieldContext) -> Result<Self> {
        let t = require_split(ctx, 4)?;
        let c = |k: u64| CharacterIndex(k);
        let f32 = HgfKernel::new(ctx, &[c(t), c(2 * t), c(3 * t)], &[c(0), c(0)])?;
        let f21 = HgfKernel::new(ctx, &[c(3 * t), c(t)], &[c(2 * t)])?;
        let binom = greene_binomial(ctx, c(3 * t), c(t))?;
        Ok(K3Greene { ctx, t, f32, f21, binom })
    }

    pub fn terms(&self, lambda: u32) -> Result<K3Terms> {
        require_nonzero(lambda)?;
        let ctx = self.ctx;
        let cyclo = ctx.cyclo()?;
        let q = ctx.q() as i64;
        let lam4 = ctx.pow_idx(lambda, 4);
        let x = ctx.inv_idx(lam4).unwrap();
        let one_minus = ctx.element(ctx.sub_idx(1, lam4));
        let quad = char_value(ctx, CharacterIndex(2 * self.t), &one_minus)?;
        let character = quad.scale(&int(12 * q * sign_at_minus_one(self.t as i64) as i64));
        let f32_raw = self.f32.evaluate_idx(ctx, x)?;
        let f32 = f32_raw.scale(&int(q * q));
        let binom_f21 = self.binom.mul(&self.f21.evaluate_idx(ctx, x)?);
        debug_assert!(cyclo.n() == ctx.n());
        Ok(K3Terms { character, f32, f32_raw, binom_f21 })
    }

    pub fn count(&self, lambda: u32) -> Result<i64> {
        let ctx = self.ctx;
        let cyclo = ctx.cyclo()?;
        let q = ctx.q() as i64;
        let terms = self.terms(lambda)?;
        let base = CycloNumber::from_integer(&cyclo, projective_count(ctx.q(), 3) as i64);
        let total = base
            .add(&terms.character)
            .add(&terms.f32)
            .add(&terms.binom_f21.scale(&int(3 * q * q)));
        let count = to_i64(&total)?;
        if ctx.pow_idx(lambda, 4) == 1 {
            // The specialised formula for λ⁴ = 1 must agree.
            let unit = base
                .add(&CycloNumber::from_integer(&cyclo, 3 * q * sign_at_minus_one(self.t as i64) as i64))
                .add(&terms.f32);
            let unit = to_i64(&unit)?;
            if unit != count {
                return Err(Error::Inconsistent(format!("λ⁴ = 1 formulas disagree: {count} vs {unit}")));
            }
        }
        Ok(count)
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn to_i64(v: &CycloNumber) -> Result<i64> {
    v.as_integer()
        .and_then(|b: BigInt| b.to_i64())
        .ok_or_else(|| Error::Inconsistent(format!("point-count formula is not a rational integer: {v}")))
}

pub fn count_k3_greene(ctx: &FieldContext, lambda: &FieldElement) -> Result<i64> {
    K3Greene::new(ctx)?.count(ctx.index(lambda))
}

/// #X_λ⁴(F_p) - p² - 1 from the Greene formula.
pub fn trace_frobenius_k3(ctx: &FieldContext, lambda: &FieldElement) -> Result<i64> {
    if ctx.e() != 1 {
        return Err(Error::Domain("the trace relation is stated over F_p".into()));
    }
    let p = ctx.p() as i64;
    Ok(count_k3_greene(ctx, lambda)? - p * p - 1)
}

/// The K3 count through McCarthy's functions, at one prime and precision.
pub struct K3Padic {
    p: u64,
    k: u32,
    g3: McCarthyKernel,
    g2: McCarthyKernel,
}

impl K3Padic {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if p % 2 == 0 || !crate::arith::is_prime(p) {
            return Err(Error::Domain(format!("{p} is not an odd prime")));
        }
        let r = PadicRational::new;
        let g3 = McCarthyKernel::new(&[r(1, 4), r(2, 4), r(3, 4)], &[r(0, 1), r(0, 1), r(0, 1)], p, k)?;
        let g2 = McCarthyKernel::new(&[r(3, 4), r(1, 4)], &[r(0, 1), r(1, 2)], p, k)?;
        Ok(K3Padic { p, k, g3, g2 })
    }

    pub fn count(&self, lambda: u64) -> Result<PadicInt> {
        let (p, k) = (self.p, self.k);
        if lambda % p == 0 {
            return Err(Error::Domain("λ = 0 is excluded".into()));
        }
        let lam4 = crate::arith::pow_mod(lambda % p, 4, p);
        let mut total = PadicInt::from_i128(projective_count(p, 3), p, k);
        total = total.add(&self.g3.evaluate(lam4)?);
        let three_p_g2 = self.g2.evaluate_scaled(lam4, 1)?.mul(&PadicInt::new(3, p, k));
        if p % 4 == 3 {
            total = total.sub(&three_p_g2);
        } else {
            let t = (p - 1) / 4;
            let chi = legendre(1 - lam4 as i64, p) * sign_at_minus_one(t as i64) as i64;
            total = total.add(&PadicInt::from_i128(12 * p as i128 * chi as i128, p, k)).add(&three_p_g2);
        }
        Ok(total)
    }
}

pub fn count_k3_padic(lambda: u64, p: u64, k: u32) -> Result<PadicInt> {
    K3Padic::new(p, k)?.count(lambda)
}
