//! Fixed-point complex numbers with a rigorous absolute error bound.
//!
//! A value is `(re + i·im) / 2^prec` and the true quantity lies within `err`
//! of it. Bounds are kept in f64 and every update rounds them upward.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_ROUNDING_THRESHOLD: f64 = 1e-6;

/// Inflation applied to every f64 bound computation to absorb its own rounding.
const UP: f64 = 1.0 + 1e-12;

/// Default working precision for a degree-`d` evaluation over F_q.
pub fn default_precision(q: u64, d: u32) -> u32 {
    let bits = ((q as f64).log2() * (d as f64 + 3.0) + 40.0).ceil() as u32;
    bits.max(100)
}

#[derive(Clone)]
pub struct ComplexApprox {
    re: BigInt,
    im: BigInt,
    prec: u32,
    err: f64,
}

impl fmt::Debug for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:e}", self, self.err)
    }
}

impl fmt::Display for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = (self.re_f64(), self.im_f64());
        if im.abs() <= self.err.max(1e-300) {
            write!(f, "{re:.12}")
        } else {
            write!(f, "{re:.12}{:+.12}i", im)
        }
    }
}

/// `x / 2^prec` as an f64, exact up to f64 rounding.
fn scaled(x: &BigInt, prec: u32) -> f64 {
    let bits = x.bits();
    if bits <= 900 {
        x.to_f64().unwrap() * (-(prec as f64)).exp2()
    } else {
        let shift = bits - 900;
        (x >> shift).to_f64().unwrap() * (shift as f64 - prec as f64).exp2()
    }
}

impl ComplexApprox {
    pub fn zero(prec: u32) -> Self {
        ComplexApprox { re: BigInt::zero(), im: BigInt::zero(), prec, err: 0.0 }
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        Self::from_big(&BigInt::from(v), prec)
    }

    pub fn from_big(v: &BigInt, prec: u32) -> Self {
        ComplexApprox { re: v << prec, im: BigInt::zero(), prec, err: 0.0 }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }
    pub fn err(&self) -> f64 {
        self.err
    }
    fn ulp(&self) -> f64 {
        (-(self.prec as f64)).exp2()
    }
    pub fn re_f64(&self) -> f64 {
        scaled(&self.re, self.prec)
    }
    pub fn im_f64(&self) -> f64 {
        scaled(&self.im, self.prec)
    }

    /// Upper bound on the modulus of the stored value.
    pub fn abs_upper(&self) -> f64 {
        (self.re_f64().abs() + self.im_f64().abs()).min(self.re_f64().hypot(self.im_f64()) * UP + self.ulp()) * UP
    }

    /// Adds `extra` to the error bound, e.g. for a known truncation error.
    pub fn widen(mut self, extra: f64) -> Self {
        self.err = (self.err + extra) * UP;
        self
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.prec, other.prec, "precision mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        ComplexApprox {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
            prec: self.prec,
            err: (self.err + other.err) * UP,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ComplexApprox { re: -&self.re, im: -&self.im, prec: self.prec, err: self.err }
    }

    pub fn conj(&self) -> Self {
        ComplexApprox { re: self.re.clone(), im: -&self.im, prec: self.prec, err: self.err }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.prec;
        let re = (&self.re * &other.re - &self.im * &other.im) >> p;
        let im = (&self.re * &other.im + &self.im * &other.re) >> p;
        let (a, b) = (self.abs_upper(), other.abs_upper());
        // Two floor operations contribute at most one ulp per component.
        let err = (a * other.err + b * self.err + self.err * other.err + 2.0 * self.ulp()) * UP;
        ComplexApprox { re, im, prec: p, err }
    }

    pub fn mul_big(&self, k: &BigInt) -> Self {
        let kf = k.to_f64().unwrap_or(f64::INFINITY).abs();
        ComplexApprox { re: &self.re * k, im: &self.im * k, prec: self.prec, err: self.err * kf * UP }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.mul_big(&BigInt::from(k))
    }

    pub fn div_big(&self, k: &BigInt) -> Self {
        assert!(!k.is_zero(), "division by zero");
        let kf = k.to_f64().unwrap().abs();
        ComplexApprox {
            re: &self.re / k,
            im: &self.im / k,
            prec: self.prec,
            err: (self.err / kf + 2.0 * self.ulp()) * UP,
        }
    }

    pub fn div_int(&self, k: i64) -> Self {
        self.div_big(&BigInt::from(k))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check(other);
        let b = other.re_f64().hypot(other.im_f64());
        let b_low = b / UP - other.ulp();
        if b_low <= other.err {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec;
        let norm = &other.re * &other.re + &other.im * &other.im;
        let re = ((&self.re * &other.re + &self.im * &other.im) << p) / &norm;
        let im = ((&self.im * &other.re - &self.re * &other.im) << p) / &norm;
        let a = self.abs_upper();
        let prop = (a * other.err / b_low + self.err) / (b_low - other.err);
        Ok(ComplexApprox { re, im, prec: p, err: (prop + 2.0 * self.ulp()) * UP })
    }

    /// Rounds the stored value to a coarser precision.
    pub fn with_precision(&self, prec: u32) -> Self {
        if prec >= self.prec {
            let s = prec - self.prec;
            return ComplexApprox { re: &self.re << s, im: &self.im << s, prec, err: self.err };
        }
        let s = self.prec - prec;
        ComplexApprox {
            re: &self.re >> s,
            im: &self.im >> s,
            prec,
            err: (self.err + 2.0 * (-(prec as f64)).exp2()) * UP,
        }
    }

    /// Bound on the distance from the true value to `other`'s true value.
    pub fn distance_upper(&self, other: &Self) -> f64 {
        let d = self.sub(other);
        d.abs_upper() + d.err
    }

    /// The nearest Gaussian-free integer, if the rounding gate accepts it:
    /// residual distance plus error bound must stay below `threshold`.
    pub fn round_to_integer(&self, threshold: f64) -> Result<BigInt> {
        let half = BigInt::one() << (self.prec - 1);
        let r = (&self.re + &half) >> self.prec;
        let res_re = scaled(&(&self.re - (&r << self.prec)), self.prec).abs();
        let bound = (res_re + self.im_f64().abs() + self.err) * UP;
        if bound < threshold {
            Ok(r)
        } else {
            Err(Error::RoundingGate { bound, bits: self.prec })
        }
    }

    /// Real part rounded to the nearest integer, without any gate.
    pub fn nearest_integer(&self) -> BigInt {
        let half = BigInt::one() << (self.prec - 1);
        (&self.re + &half) >> self.prec
    }

    pub fn is_real_within(&self, tol: f64) -> bool {
        self.im_f64().abs() + self.err < tol
    }
}

fn atan_inv(x: u64, prec: u32) -> (BigInt, f64) {
    // Σ (-1)^k / ((2k+1) x^{2k+1}) in fixed point; each step truncates.
    let x2 = BigInt::from(x * x);
    let mut power = (BigInt::one() << prec) / x;
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power /= &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / (2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    // Per term: two truncations of `power` history plus one division; one more
    // ulp for the discarded tail.
    (sum, (3 * k + 2) as f64)
}

/// π to `prec` bits via Machin's formula.
pub fn pi(prec: u32) -> ComplexApprox {
    let guard = prec + 32;
    let (a, ea) = atan_inv(5, guard);
    let (b, eb) = atan_inv(239, guard);
    let v = a * 16 - b * 4;
    let err_ulps = 16.0 * ea + 4.0 * eb;
    ComplexApprox { re: v, im: BigInt::zero(), prec: guard, err: err_ulps * (-(guard as f64)).exp2() * UP }
        .with_precision(prec)
}

/// exp(iθ) for a real `theta` with |θ| ≤ 1, by Taylor series.
fn exp_i(theta: &ComplexApprox) -> ComplexApprox {
    let prec = theta.prec;
    let i_theta = ComplexApprox { re: -&theta.im, im: theta.re.clone(), prec, err: theta.err };
    let mut sum = ComplexApprox::from_int(1, prec);
    let mut term = sum.clone();
    let tiny = (-(prec as f64)).exp2();
    let mut k = 1i64;
    loop {
        term = term.mul(&i_theta).div_int(k);
        sum = sum.add(&term);
        k += 1;
        if term.abs_upper() < tiny {
            break;
        }
    }
    // With |θ| ≤ 1 and k ≥ 2 the tail is dominated by twice the next term.
    sum.widen(2.0 * tiny)
}

/// ζ_n^k = exp(2πik/n) for 0 ≤ k < n.
#[derive(Clone, Debug)]
pub struct RootTable {
    n: u64,
    prec: u32,
    roots: Vec<ComplexApprox>,
}

impl RootTable {
    pub fn new(n: u64, prec: u32) -> Self {
        assert!(n >= 1);
        let guard = prec + 24 + 64 - (n.leading_zeros());
        let two_pi = pi(guard).mul_int(2);
        // Split 2π/n into m steps of size ≤ 1 so the Taylor series behaves.
        let steps = if n >= 7 { 1 } else { 7 };
        let theta = two_pi.div_int((n * steps) as i64);
        let mut base = exp_i(&theta);
        for _ in 1..steps {
            base = base.mul(&exp_i(&theta));
        }
        let mut roots = Vec::with_capacity(n as usize);
        let mut cur = ComplexApprox::from_int(1, guard);
        for _ in 0..n {
            roots.push(cur.with_precision(prec));
            cur = cur.mul(&base);
        }
        RootTable { n, prec, roots }
    }

    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn prec(&self) -> u32 {
        self.prec
    }
    pub fn get(&self, k: u64) -> &ComplexApprox {
        &self.roots[(k % self.n) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let v = pi(200);
        assert!((v.re_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!(v.err() < 1e-55);
        // 1e50·π rounded, checked against the known expansion.
        let scaled = (v.re.clone() * BigInt::from(10).pow(50)) >> 200u32;
        assert_eq!(scaled.to_string(), "314159265358979323846264338327950288419716939937510");
    }

    #[test]
    fn roots_of_unity_close_up() {
        for n in [1u64, 2, 3, 4, 5, 12, 48, 97] {
            let t = RootTable::new(n, 128);
            let one = ComplexApprox::from_int(1, 128);
            let last = t.get(n - 1).mul(t.get(1));
            assert!(last.distance_upper(&one) < 1e-30, "n = {n}");
            let mut s = ComplexApprox::zero(128);
            for k in 0..n {
                s = s.add(t.get(k));
            }
            let expect = if n == 1 { 1.0 } else { 0.0 };
            assert!((s.re_f64() - expect).abs() <= s.err() + 1e-30);
            assert!(s.err() < 1e-25);
        }
        let t4 = RootTable::new(4, 100);
        assert!(t4.get(1).distance_upper(&ComplexApprox { re: BigInt::zero(), im: BigInt::one() << 100, prec: 100, err: 0.0 }) < 1e-25);
    }

    #[test]
    fn multiplication_bound_is_conservative() {
        let t = RootTable::new(7, 100);
        let a = t.get(3).mul_int(5);
        let b = t.get(2).mul_int(-3);
        let c = a.mul(&b);
        assert!(c.err() >= a.abs_upper() * b.err() + b.abs_upper() * a.err());
        let expect = t.get(5).mul_int(-15);
        assert!(c.distance_upper(&expect) < 1e-25);
    }

    #[test]
    fn division_inverts_multiplication() {
        let t = RootTable::new(12, 120);
        let a = t.get(5).mul_int(7).add(&ComplexApprox::from_int(2, 120));
        let b = t.get(1).mul_int(3);
        let back = a.mul(&b).div(&b).unwrap();
        assert!(back.distance_upper(&a) < 1e-30);
        assert!(a.div(&ComplexApprox::zero(120)).is_err());
    }

    #[test]
    fn rounding_gate() {
        let v = ComplexApprox::from_int(42, 100).widen(1e-9);
        assert_eq!(v.round_to_integer(1e-6).unwrap(), BigInt::from(42));
        let fuzzy = ComplexApprox::from_int(42, 100).widen(1e-3);
        assert!(matches!(fuzzy.round_to_integer(1e-6), Err(Error::RoundingGate { .. })));
        let neg = ComplexApprox::from_int(-7, 100);
        assert_eq!(neg.round_to_integer(1e-6).unwrap(), BigInt::from(-7));
    }

    #[test]
    fn default_precision_policy() {
        assert_eq!(default_precision(5, 4), 100);
        assert_eq!(default_precision(10_000, 5), ((10_000f64).log2() * 8.0 + 40.0).ceil() as u32);
    }
}
