//! p-adic integers to fixed precision, Γ_p, McCarthy's nGn, and truncated
//! and classical hypergeometric series.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{gcd, inv_mod, mul_mod, pow_mod};
use crate::error::{Error, Result};
use crate::finite_field::teichmuller;
use crate::report::VerificationReport;

/// Largest p^k accepted for a Γ_p prefix table.
pub const GAMMA_TABLE_LIMIT: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PadicInt {
    p: u64,
    k: u32,
    residue: u64,
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.residue, self.p, self.k)
    }
}

impl PadicInt {
    pub fn new(residue: u64, p: u64, k: u32) -> Self {
        let m = p.checked_pow(k).filter(|&m| m < 1 << 62).expect("p^k too large");
        PadicInt { p, k, residue: residue % m }
    }

    pub fn from_i128(v: i128, p: u64, k: u32) -> Self {
        let m = p.pow(k) as i128;
        PadicInt::new(v.rem_euclid(m) as u64, p, k)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn residue(&self) -> u64 {
        self.residue
    }
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.k)
    }

    pub fn is_unit(&self) -> bool {
        self.residue % self.p != 0
    }

    fn check(&self, o: &Self) {
        assert!(self.p == o.p && self.k == o.k, "mixing p-adic precisions");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        PadicInt::new((self.residue + o.residue) % self.modulus(), self.p, self.k)
    }
    pub fn neg(&self) -> Self {
        PadicInt::new(self.modulus() - self.residue, self.p, self.k)
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        PadicInt::new(mul_mod(self.residue, o.residue, self.modulus()), self.p, self.k)
    }
    pub fn pow(&self, e: u64) -> Self {
        PadicInt::new(pow_mod(self.residue, e, self.modulus()), self.p, self.k)
    }
    pub fn inv(&self) -> Option<Self> {
        inv_mod(self.residue as i128, self.modulus()).map(|r| PadicInt::new(r, self.p, self.k))
    }

    /// Reduction to a lower precision.
    pub fn reduce(&self, k: u32) -> Self {
        assert!(k <= self.k);
        PadicInt::new(self.residue, self.p, k)
    }
}

/// A rational number `num/den` with `den > 0`, in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PadicRational {
    num: i64,
    den: i64,
}

impl fmt::Display for PadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl PadicRational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = num.gcd(&den);
        let s = if den < 0 { -1 } else { 1 };
        PadicRational { num: s * num / g, den: s * den / g }
    }

    pub fn integer(n: i64) -> Self {
        PadicRational { num: n, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }
    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn floor(&self) -> i64 {
        num_integer::Integer::div_floor(&self.num, &self.den)
    }

    /// Fractional part ⟨x⟩ = x - ⌊x⌋ in [0, 1).
    pub fn fract(&self) -> Self {
        PadicRational::new(self.num.mod_floor(&self.den), self.den)
    }

    pub fn add(&self, o: &Self) -> Self {
        PadicRational::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }
    pub fn neg(&self) -> Self {
        PadicRational { num: -self.num, den: self.den }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn to_big(&self) -> BigRational {
        BigRational::new(self.num.into(), self.den.into())
    }

    /// The image in Z/p^k; fails when p divides the denominator.
    pub fn to_padic(&self, p: u64, k: u32) -> Result<PadicInt> {
        let m = p.pow(k);
        let inv = inv_mod(self.den as i128, m).ok_or(Error::NotPIntegral(p))?;
        let n = (self.num as i128).rem_euclid(m as i128) as u64;
        Ok(PadicInt::new(mul_mod(n, inv, m), p, k))
    }
}

/// Γ_p(n) = (-1)^n ∏_{1 ≤ j < n, p ∤ j} j for a nonnegative integer n.
fn gamma_int(n: u64, p: u64, m: u64) -> u64 {
    let mut r = 1u64;
    for j in 1..n {
        if j % p != 0 {
            r = mul_mod(r, j, m);
        }
    }
    if n % 2 == 1 {
        (m - r) % m
    } else {
        r
    }
}

/// Γ_p(a) mod p^k, evaluated at the integer in [0, p^k) congruent to `a`.
pub fn gamma_p(a: &PadicRational, p: u64, k: u32) -> Result<PadicInt> {
    let n = a.to_padic(p, k)?;
    Ok(PadicInt::new(gamma_int(n.residue(), p, n.modulus()), p, k))
}

/// Prefix products for Γ_p on [0, p^k].
pub struct GammaTable {
    p: u64,
    k: u32,
    prefix: Vec<u64>,
}

impl GammaTable {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        let m = p.checked_pow(k).filter(|&m| m <= GAMMA_TABLE_LIMIT).ok_or_else(|| {
            Error::Domain(format!("Γ_p table for {p}^{k} exceeds {GAMMA_TABLE_LIMIT} entries"))
        })?;
        let mut prefix = Vec::with_capacity(m as usize + 1);
        prefix.push(1); // n = 0
        let mut r = 1u64;
        for j in 1..=m {
            prefix.push(r);
            if j % p != 0 {
                r = mul_mod(r, j, m);
            }
        }
        Ok(GammaTable { p, k, prefix })
    }

    pub fn gamma(&self, a: &PadicRational) -> Result<PadicInt> {
        let n = a.to_padic(self.p, self.k)?.residue();
        let m = self.p.pow(self.k);
        let r = self.prefix[n as usize];
        Ok(PadicInt::new(if n % 2 == 1 { (m - r) % m } else { r }, self.p, self.k))
    }
}

fn pochhammer_mod(a: &PadicRational, j: u64, p: u64) -> Result<u64> {
    let mut r = 1u64;
    for i in 0..j {
        let v = a.add(&PadicRational::integer(i as i64)).to_padic(p, 1)?;
        r = mul_mod(r, v.residue(), p);
    }
    Ok(r)
}

/// Γ_p(m/d + j)Γ_p(1 - m/d + j)/Γ_p(1 + j)² against
/// (-1)^{mt+1}(m/d)_j((d-m)/d)_j/j!², compared modulo p.
pub fn pochhammer_identity_check(m: u64, d: u64, p: u64, j: u64) -> Result<VerificationReport> {
    if !(1 <= m && m < d) || (p - 1) % d != 0 {
        return Err(Error::Domain(format!("need 1 <= m < d and d | p - 1 (m = {m}, d = {d}, p = {p})")));
    }
    let t = (p - 1) / d;
    if j > m * t {
        return Err(Error::Domain(format!("j = {j} exceeds mt = {}", m * t)));
    }
    let md = PadicRational::new(m as i64, d as i64);
    let ji = PadicRational::integer(j as i64);
    let one = PadicRational::integer(1);
    let lhs_num = gamma_p(&md.add(&ji), p, 1)?.mul(&gamma_p(&one.sub(&md).add(&ji), p, 1)?);
    let den = gamma_p(&one.add(&ji), p, 1)?.pow(2);
    let lhs = lhs_num.mul(&den.inv().expect("Γ_p values are units"));
    let num = mul_mod(pochhammer_mod(&md, j, p)?, pochhammer_mod(&PadicRational::new((d - m) as i64, d as i64), j, p)?, p);
    let fact = pochhammer_mod(&one, j, p)?;
    let fact_inv = inv_mod(mul_mod(fact, fact, p) as i128, p).ok_or(Error::NotPIntegral(p))?;
    let mut rhs = mul_mod(num, fact_inv, p);
    if (m * t + 1) % 2 == 1 {
        rhs = (p - rhs) % p;
    }
    Ok(VerificationReport::new("pochhammer-gamma")
        .param("m", m)
        .param("d", d)
        .param("p", p)
        .param("j", j)
        .residues(lhs.residue(), rhs, p))
}

/// McCarthy's nGn for fixed parameters at one prime and precision, with the
/// Γ_p ratios and powers of -p precomputed for every j.
pub struct McCarthyKernel {
    p: u64,
    k: u32,
    /// Working precision k + s, where p^{-s} is the most negative power of p.
    work: u32,
    n: usize,
    /// Γ_p-ratio product for each j, modulo p^work.
    ratios: Vec<u64>,
    /// Exponent of (-p) for each j.
    exps: Vec<i64>,
}

impl McCarthyKernel {
    pub fn new(upper: &[PadicRational], lower: &[PadicRational], p: u64, k: u32) -> Result<Self> {
        if upper.len() != lower.len() || upper.is_empty() {
            return Err(Error::Domain("nGn needs n upper and n lower parameters, n >= 1".into()));
        }
        if k == 0 {
            return Err(Error::Domain("precision k must be positive".into()));
        }
        for a in upper.iter().chain(lower) {
            if gcd(a.den().unsigned_abs(), p) != 1 {
                return Err(Error::NotPIntegral(p));
            }
        }
        let pm1 = (p - 1) as i64;
        let exps: Vec<i64> = (0..p - 1)
            .map(|j| {
                let x = PadicRational::new(j as i64, pm1);
                upper
                    .iter()
                    .zip(lower)
                    .map(|(a, b)| -a.fract().sub(&x).floor() - b.neg().fract().add(&x).floor())
                    .sum()
            })
            .collect();
        let s = (-exps.iter().copied().min().unwrap()).max(0) as u32;
        let work = k + s;
        let table = GammaTable::new(p, work)?;
        let mut ratios = Vec::with_capacity(exps.len());
        for j in 0..p - 1 {
            let x = PadicRational::new(j as i64, pm1);
            let mut r = PadicInt::new(1, p, work);
            for (a, b) in upper.iter().zip(lower) {
                let fa = a.fract();
                let fb = b.neg().fract();
                r = r.mul(&table.gamma(&fa.sub(&x).fract())?);
                r = r.mul(&table.gamma(&fb.add(&x).fract())?);
                let den = table.gamma(&fa)?.mul(&table.gamma(&fb)?);
                r = r.mul(&den.inv().expect("Γ_p values are units"));
            }
            ratios.push(r.residue());
        }
        Ok(McCarthyKernel { p, k, work, n: upper.len(), ratios, exps })
    }

    pub fn working_precision(&self) -> u32 {
        self.work
    }

    pub fn evaluate(&self, t: u64) -> Result<PadicInt> {
        self.evaluate_scaled(t, 0)
    }

    /// p^shift · nGn(t) modulo p^k; fails if that is not p-integral.
    pub fn evaluate_scaled(&self, t: u64, shift: u32) -> Result<PadicInt> {
        let p = self.p;
        if t % p == 0 {
            return Err(Error::Domain("nGn is only evaluated at t ≠ 0 mod p".into()));
        }
        let min_e = self.exps.iter().copied().min().unwrap() + shift as i64;
        let s = (-min_e).max(0) as u32;
        let kk = self.k + s;
        debug_assert!(kk <= self.work);
        let m = p.pow(kk);
        let w_inv = teichmuller(t % p, p, kk).inv().expect("Teichmüller lifts are units");
        let mut acc = 0u64;
        let mut wj = 1u64;
        for (j, (&ratio, &e)) in self.ratios.iter().zip(&self.exps).enumerate() {
            let e = e + shift as i64 + s as i64;
            if e < kk as i64 {
                let mut term = mul_mod(wj, ratio % m, m);
                term = mul_mod(term, p.pow(e as u32), m);
                // (-1)^{jn} from the sign and (-1)^{e - s - shift} from (-p)^e.
                let neg = (j as u64 * self.n as u64 + (e - s as i64 - shift as i64).unsigned_abs()) % 2 == 1;
                acc = if neg { (acc + m - term) % m } else { (acc + term) % m };
            }
            wj = mul_mod(wj, w_inv.residue(), m);
        }
        if acc % p.pow(s) != 0 {
            return Err(Error::NegativeValuation { p, valuation: crate::arith::valuation(acc as i128, p) as i64 - s as i64 });
        }
        let reduced = acc / p.pow(s);
        // -1/(p-1) = 1/(1-p).
        let mk = p.pow(self.k);
        let c = inv_mod(1 - p as i128, mk).unwrap();
        Ok(PadicInt::new(mul_mod(reduced % mk, c, mk), p, self.k))
    }
}

/// McCarthy's nGn[a; b | t] modulo p^k.
pub fn mccarthy_g(upper: &[PadicRational], lower: &[PadicRational], t: u64, p: u64, k: u32) -> Result<PadicInt> {
    McCarthyKernel::new(upper, lower, p, k)?.evaluate(t)
}

/// Σ_{k<m} ∏(a_i)_k / (k! ∏(b_j)_k) x^k mod p, term by term.
pub fn truncated_hgf_mod_p(
    upper: &[PadicRational],
    lower: &[PadicRational],
    x: u64,
    m: u64,
    p: u64,
) -> Result<u64> {
    if m > p {
        return Err(Error::Domain(format!("truncation m = {m} exceeds p = {p}")));
    }
    let x = x % p;
    let mut term = 1u64;
    let mut sum = 0u64;
    for k in 0..m {
        sum = (sum + term) % p;
        if k + 1 == m {
            break;
        }
        let ki = PadicRational::integer(k as i64);
        let mut num = x;
        for a in upper {
            num = mul_mod(num, a.add(&ki).to_padic(p, 1)?.residue(), p);
        }
        let mut den = (k + 1) % p;
        for b in lower {
            den = mul_mod(den, b.add(&ki).to_padic(p, 1)?.residue(), p);
        }
        let den_inv = inv_mod(den as i128, p)
            .ok_or_else(|| Error::Domain(format!("Pochhammer pole mod {p} at term {}", k + 1)))?;
        term = mul_mod(mul_mod(term, num, p), den_inv, p);
    }
    Ok(sum)
}

/// Exact partial sum of the classical hypergeometric series, `terms` terms.
pub fn classical_hgf_partial(
    upper: &[BigRational],
    lower: &[BigRational],
    x: &BigRational,
    terms: usize,
) -> Result<BigRational> {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for k in 0..terms {
        sum += &term;
        if k + 1 == terms {
            break;
        }
        let kk = BigRational::from_integer(BigInt::from(k));
        let mut den = &kk + BigRational::one();
        for b in lower {
            den *= b + &kk;
        }
        if den.is_zero() {
            return Err(Error::Domain(format!("Pochhammer pole at term {}", k + 1)));
        }
        let mut num = x.clone();
        for a in upper {
            num *= a + &kk;
        }
        term = term * num / den;
    }
    Ok(sum)
}
