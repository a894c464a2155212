//! Exact arithmetic in Q(ζ_n), stored densely modulo Φ_n.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{euler_phi, inv_mod, pow_mod};
use crate::complex::{ComplexApprox, RootTable};
use crate::error::{Error, Result};
use crate::finite_field::FieldContext;

pub const DEFAULT_PHI_BOUND: u64 = 4096;

#[derive(Debug, PartialEq, Eq)]
pub struct CycloContext {
    n: u64,
    /// Coefficients of Φ_n from the constant term up; monic.
    phi: Vec<i64>,
}

pub fn cyclo_context(n: u64) -> Result<Arc<CycloContext>> {
    cyclo_context_bounded(n, DEFAULT_PHI_BOUND)
}

pub fn cyclo_context_bounded(n: u64, bound: u64) -> Result<Arc<CycloContext>> {
    if n == 0 || euler_phi(n) > bound {
        return Err(Error::ConductorTooLarge { n, bound });
    }
    Ok(Arc::new(CycloContext { n, phi: cyclotomic_poly(n) }))
}

/// Φ_n as (x^n - 1) divided exactly by Φ_d for every proper divisor d of n.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_div_monic(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn exact_div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let dq = a.len() - b.len();
    let mut quot = vec![0i64; dq + 1];
    for i in (0..=dq).rev() {
        let c = rem[i + db];
        quot[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            rem[i + j] -= c * bj;
        }
    }
    assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

impl CycloContext {
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn phi(&self) -> &[i64] {
        &self.phi
    }
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Reduces an integer polynomial of any degree modulo Φ_n in place and
    /// returns the low `degree()` coefficients.
    fn reduce_big(&self, mut a: Vec<BigInt>) -> Vec<BigInt> {
        let deg = self.degree();
        for i in (deg..a.len()).rev() {
            if a[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut a[i]);
            for (j, &pj) in self.phi[..deg].iter().enumerate() {
                if pj != 0 {
                    a[i - deg + j] -= &c * pj;
                }
            }
        }
        a.truncate(deg);
        a.resize(deg, BigInt::zero());
        a
    }

    /// Σ_r a_r ζ^r / den, for a vector `a` indexed by exponent mod n.
    pub fn from_group_ring(self: &Arc<Self>, a: &[i128], den: BigInt) -> CycloNumber {
        assert_eq!(a.len() as u64, self.n);
        let deg = self.degree();
        // Fold in i128 while it is safe; Φ_n coefficients are small.
        let mut acc: Vec<i128> = a.to_vec();
        let mut ok = true;
        'outer: for i in (deg..acc.len()).rev() {
            let c = acc[i];
            if c == 0 {
                continue;
            }
            acc[i] = 0;
            for (j, &pj) in self.phi[..deg].iter().enumerate() {
                match acc[i - deg + j].checked_sub(c * pj as i128) {
                    Some(v) => acc[i - deg + j] = v,
                    None => {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        let num = if ok {
            acc.truncate(deg);
            acc.into_iter().map(BigInt::from).collect()
        } else {
            self.reduce_big(a.iter().map(|&x| BigInt::from(x)).collect())
        };
        CycloNumber::normalized(self.clone(), num, den)
    }

    pub fn zero(self: &Arc<Self>) -> CycloNumber {
        CycloNumber::from_integer(self, 0)
    }
    pub fn one(self: &Arc<Self>) -> CycloNumber {
        CycloNumber::from_integer(self, 1)
    }

    /// ζ_n^k.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> CycloNumber {
        let mut a = vec![0i128; self.n as usize];
        a[k.rem_euclid(self.n as i64) as usize] = 1;
        self.from_group_ring(&a, BigInt::one())
    }
}

/// An element of Q(ζ_n) as integer numerators over one positive denominator,
/// kept in lowest terms.
#[derive(Clone, PartialEq, Eq)]
pub struct CycloNumber {
    ctx: Arc<CycloContext>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            });
        }
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ").replace("+ -", "- ") };
        if self.den.is_one() {
            write!(f, "{body}")
        } else if terms.len() <= 1 {
            write!(f, "{body}/{}", self.den)
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

impl CycloNumber {
    fn normalized(ctx: Arc<CycloContext>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -&*c);
        }
        let g = num.iter().fold(den.clone(), |g, c| g.gcd(c));
        if !g.is_one() {
            num.iter_mut().for_each(|c| *c /= &g);
            den /= &g;
        }
        CycloNumber { ctx, num, den }
    }

    pub fn from_integer(ctx: &Arc<CycloContext>, v: i64) -> Self {
        Self::from_rational(ctx, &BigRational::from_integer(v.into()))
    }

    pub fn from_rational(ctx: &Arc<CycloContext>, v: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); ctx.degree()];
        num[0] = v.numer().clone();
        Self::normalized(ctx.clone(), num, v.denom().clone())
    }

    pub fn context(&self) -> &Arc<CycloContext> {
        &self.ctx
    }

    /// Coordinates in the basis 1, ζ, …, ζ^{φ(n)-1}.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.num[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    fn same_ctx(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx,
            "mixing Q(ζ_{}) with Q(ζ_{})",
            self.ctx.n,
            other.ctx.n
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_ctx(other);
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den + b * &self.den)
            .collect();
        Self::normalized(self.ctx.clone(), num, &self.den * &other.den)
    }

    pub fn neg(&self) -> Self {
        CycloNumber { ctx: self.ctx.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_ctx(other);
        let deg = self.ctx.degree();
        let mut prod = vec![BigInt::zero(); 2 * deg];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let num = self.ctx.reduce_big(prod);
        Self::normalized(self.ctx.clone(), num, &self.den * &other.den)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Self::normalized(self.ctx.clone(), num, &self.den * r.denom())
    }

    pub fn div_rational(&self, r: &BigRational) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.scale(&r.recip()))
    }

    /// Image under ζ_n ↦ exp(2πi/n).
    pub fn to_complex(&self, roots: &RootTable) -> ComplexApprox {
        assert_eq!(roots.n(), self.ctx.n, "root table for the wrong conductor");
        let mut acc = ComplexApprox::zero(roots.prec());
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&roots.get(i as u64).mul_big(c));
            }
        }
        acc.div_big(&self.den)
    }
}

/// Reduction through the prime above p fixed by ζ_n ↦ g^{(p-1)/n} mod p,
/// where g is the generator of `field` (so ζ_{p-1} ↦ g).
pub fn reduce_mod_p(v: &CycloNumber, field: &FieldContext) -> Result<u64> {
    let p = field.p();
    let n = v.ctx.n;
    if field.e() != 1 || (p - 1) % n != 0 {
        return Err(Error::Domain(format!("reduction needs a prime field with n | p - 1 (n = {n}, q = {})", field.q())));
    }
    let den = (&v.den % p).to_u64().unwrap();
    let den_inv = inv_mod(den as i128, p).ok_or(Error::NotPIntegral(p))?;
    let g = field.generator().coeffs()[0] as u64;
    let z = pow_mod(g, (p - 1) / n, p);
    let pb = BigInt::from(p);
    let mut acc = 0u64;
    let mut zi = 1u64;
    for c in &v.num {
        let c = c.mod_floor(&pb).to_u64().unwrap();
        acc = (acc + c * zi) % p;
        zi = zi * z % p;
    }
    Ok(acc * den_inv % p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::build_field;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of absolute value 2.
        assert_eq!(cyclotomic_poly(105).iter().map(|c| c.abs()).max(), Some(2));
    }

    #[test]
    fn phi_n_has_totient_degree_and_divides() {
        for n in 1..80u64 {
            let phi = cyclotomic_poly(n);
            assert_eq!(phi.len() as u64 - 1, euler_phi(n));
            let mut xn = vec![0i64; n as usize + 1];
            xn[0] = -1;
            xn[n as usize] = 1;
            exact_div_monic(&xn, &phi);
        }
    }

    #[test]
    fn conductor_bound() {
        assert!(matches!(cyclo_context_bounded(9000, 100), Err(Error::ConductorTooLarge { .. })));
    }

    #[test]
    fn ring_examples() {
        let c4 = cyclo_context(4).unwrap();
        let i = c4.zeta_pow(1);
        assert_eq!(i.mul(&i), CycloNumber::from_integer(&c4, -1));
        assert_eq!(i.add(&c4.zero()), i);
        let c3 = cyclo_context(3).unwrap();
        let s = c3.one().add(&c3.zeta_pow(1)).add(&c3.zeta_pow(2));
        assert!(s.is_zero());
        assert_eq!(c3.zeta_pow(3), c3.one());
        let half = c3.zeta_pow(1).scale(&q(1, 2));
        assert_eq!(half.coeffs()[1], q(1, 2));
        assert_eq!(half.div_rational(&q(0, 1)).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn reduction_examples() {
        let f5 = build_field(5, 1).unwrap();
        let c4 = cyclo_context(4).unwrap();
        assert_eq!(reduce_mod_p(&c4.one(), &f5).unwrap(), 1);
        assert_eq!(reduce_mod_p(&c4.zeta_pow(1), &f5).unwrap(), 2);
        let v = c4.one().add(&c4.zeta_pow(1)).scale(&q(1, 3));
        assert_eq!(reduce_mod_p(&v, &f5).unwrap(), 1);
        let bad = c4.one().scale(&q(1, 5));
        assert_eq!(reduce_mod_p(&bad, &f5).unwrap_err(), Error::NotPIntegral(5));
    }

    #[test]
    fn group_ring_reduction_matches_multiplication() {
        let c12 = cyclo_context(12).unwrap();
        let mut a = vec![0i128; 12];
        a[5] = 3;
        a[11] = -2;
        let direct = c12.zeta_pow(5).scale(&q(3, 1)).add(&c12.zeta_pow(11).scale(&q(-2, 1)));
        assert_eq!(c12.from_group_ring(&a, BigInt::one()), direct);
        assert_eq!(c12.zeta_pow(7).mul(&c12.zeta_pow(9)), c12.zeta_pow(4));
    }
}
