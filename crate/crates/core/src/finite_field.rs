//! F_q = F_p[x]/(f) with a fixed generator and a full discrete-log table.
//!
//! Elements are addressed internally by their index `Σ c_i p^i`, where `c_i` is
//! the coefficient of `x^i` in the power basis. Hot loops work on indices.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::arith::{inv_mod, is_prime, mul_mod, pow_mod, prime_factors};
use crate::cyclotomic::{cyclo_context, CycloContext};
use crate::error::{Error, Result};
use crate::padic::PadicInt;

pub const DEFAULT_FIELD_BOUND: u64 = 10_000;

const CACHE_MAGIC: &[u8; 4] = b"DWFF";
const ADD_TABLE_MAX_Q: u64 = 1024;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FieldElement {
    coeffs: Vec<u32>,
}

impl FieldElement {
    /// Coefficients c_0, …, c_{e-1} of c_0 + c_1 x + ….
    pub fn from_coeffs(coeffs: Vec<u32>) -> Self {
        FieldElement { coeffs }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }
}

/// The character `T^k`, where `T(g) = ζ_{q-1}` for the context generator `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CharacterIndex(pub u64);

#[derive(Clone, Debug, Default)]
pub struct FieldOptions {
    pub bound: Option<u64>,
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug)]
pub struct FieldContext {
    p: u64,
    e: u32,
    q: u64,
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    dlog: Vec<u32>,
    add_table: OnceLock<Vec<u16>>,
    cyclo: OnceLock<Result<Arc<CycloContext>>>,
}

/// Builds F_{p^e} with the smallest irreducible modulus and smallest generator.
///
/// Both minima are taken in index order, i.e. lexicographically on the
/// coefficient sequence read from the top degree down.
pub fn build_field(p: u64, e: u32) -> Result<FieldContext> {
    build_field_with(p, e, &FieldOptions::default())
}

pub fn build_field_with(p: u64, e: u32, opts: &FieldOptions) -> Result<FieldContext> {
    let q = check_params(p, e, opts.bound.unwrap_or(DEFAULT_FIELD_BOUND))?;
    let modulus = irreducible_moduli(p, e)?
        .into_iter()
        .next()
        .expect("an irreducible polynomial of every degree exists");
    let generator = (1..q as u32)
        .find(|&g| has_full_order(p, e, &modulus, g))
        .expect("F_q^x is cyclic");
    if let Some(dir) = &opts.cache_dir {
        if let Some(ctx) = load_cached(dir, p, e, &modulus, generator) {
            return Ok(ctx);
        }
    }
    let ctx = FieldContext::assemble(p, e, q, modulus, generator);
    if let Some(dir) = &opts.cache_dir {
        // A cache that cannot be written is not an error.
        let _ = ctx.store_cache(dir);
    }
    Ok(ctx)
}

fn check_params(p: u64, e: u32, bound: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if e == 0 {
        return Err(Error::InvalidField("extension degree must be positive".into()));
    }
    let q = p
        .checked_pow(e)
        .filter(|&q| q <= bound)
        .ok_or(Error::FieldTooLarge { p, e, bound })?;
    Ok(q)
}

/// All monic irreducible polynomials of degree `e` over F_p, in index order.
/// Coefficients are listed from the constant term up; the last entry is 1.
pub fn irreducible_moduli(p: u64, e: u32) -> Result<Vec<Vec<u32>>> {
    let q = check_params(p, e, u64::MAX)?;
    let mut out = Vec::new();
    for idx in 0..q {
        let mut f = digits(idx, p, e);
        f.push(1);
        if poly::is_irreducible(&f, p) {
            out.push(f);
        }
    }
    Ok(out)
}

fn digits(mut idx: u64, p: u64, e: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(e as usize);
    for _ in 0..e {
        out.push((idx % p) as u32);
        idx /= p;
    }
    out
}

fn undigits(c: &[u32], p: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &d| acc * p + d as u64)
}

fn has_full_order(p: u64, e: u32, modulus: &[u32], g: u32) -> bool {
    let q = p.pow(e);
    let f = to_u64(modulus);
    let gx = to_u64(&digits(g as u64, p, e));
    let one = {
        let mut v = vec![0u64; e as usize];
        v[0] = 1;
        v
    };
    if poly::pow_mod_poly(&gx, q - 1, &f, p) != one {
        return false;
    }
    prime_factors(q - 1)
        .into_iter()
        .all(|r| poly::pow_mod_poly(&gx, (q - 1) / r, &f, p) != one)
}

fn to_u64(c: &[u32]) -> Vec<u64> {
    c.iter().map(|&x| x as u64).collect()
}

impl FieldContext {
    /// A context with an explicit modulus and the smallest generator for it.
    pub fn with_modulus(p: u64, e: u32, modulus: &[u32]) -> Result<Self> {
        let q = check_params(p, e, DEFAULT_FIELD_BOUND)?;
        let g = (1..q as u32)
            .find(|&g| modulus.len() == e as usize + 1 && has_full_order(p, e, modulus, g))
            .ok_or_else(|| Error::InvalidField(format!("{modulus:?} does not define F_{q}")))?;
        Self::with_modulus_and_generator(p, e, modulus, &FieldElement { coeffs: digits(g as u64, p, e) })
    }

    /// A context with an explicit modulus and generator, both validated.
    pub fn with_modulus_and_generator(
        p: u64,
        e: u32,
        modulus: &[u32],
        generator: &FieldElement,
    ) -> Result<Self> {
        let q = check_params(p, e, DEFAULT_FIELD_BOUND)?;
        if modulus.len() != e as usize + 1
            || modulus[e as usize] != 1
            || modulus.iter().any(|&c| c as u64 >= p)
            || !poly::is_irreducible(modulus, p)
        {
            return Err(Error::InvalidField(format!("{modulus:?} is not a monic irreducible of degree {e}")));
        }
        if generator.coeffs.len() != e as usize || generator.coeffs.iter().any(|&c| c as u64 >= p) {
            return Err(Error::InvalidField("generator is not an element of this field".into()));
        }
        let g = undigits(&generator.coeffs, p) as u32;
        if !has_full_order(p, e, modulus, g) {
            return Err(Error::InvalidField(format!("{:?} does not have order q - 1", generator.coeffs)));
        }
        Ok(Self::assemble(p, e, q, modulus.to_vec(), g))
    }

    fn assemble(p: u64, e: u32, q: u64, modulus: Vec<u32>, generator: u32) -> Self {
        let f = to_u64(&modulus);
        let g = to_u64(&digits(generator as u64, p, e));
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut dlog = vec![u32::MAX; q as usize];
        let mut cur = {
            let mut v = vec![0u64; e as usize];
            v[0] = 1;
            v
        };
        for k in 0..q - 1 {
            let idx = cur.iter().rev().fold(0u64, |acc, &d| acc * p + d) as u32;
            exp.push(idx);
            dlog[idx as usize] = k as u32;
            cur = poly::mul_mod_poly(&cur, &g, &f, p);
        }
        FieldContext { p, e, q, modulus, generator, exp, dlog, add_table: OnceLock::new(), cyclo: OnceLock::new() }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    /// Order of the multiplicative group, q - 1.
    pub fn n(&self) -> u64 {
        self.q - 1
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// Q(ζ_{q-1}), the home of character values over this field.
    pub fn cyclo(&self) -> Result<Arc<CycloContext>> {
        self.cyclo.get_or_init(|| cyclo_context(self.n())).clone()
    }

    pub fn generator(&self) -> FieldElement {
        self.element(self.generator)
    }

    pub fn element(&self, idx: u32) -> FieldElement {
        assert!((idx as u64) < self.q, "index {idx} outside F_{}", self.q);
        FieldElement { coeffs: digits(idx as u64, self.p, self.e) }
    }

    pub fn index(&self, x: &FieldElement) -> u32 {
        assert_eq!(x.coeffs.len(), self.e as usize, "element of a different field");
        undigits(&x.coeffs, self.p) as u32
    }

    /// Reduces an integer into the prime field.
    pub fn from_int(&self, n: i64) -> FieldElement {
        self.element(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }
    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q as u32).map(|i| self.element(i))
    }

    pub fn dlog(&self, x: &FieldElement) -> Option<u64> {
        self.dlog_idx(self.index(x))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.element(self.add_idx(self.index(a), self.index(b)))
    }
    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.element(self.sub_idx(self.index(a), self.index(b)))
    }
    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.element(self.neg_idx(self.index(a)))
    }
    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.element(self.mul_idx(self.index(a), self.index(b)))
    }
    pub fn pow(&self, a: &FieldElement, k: u64) -> FieldElement {
        self.element(self.pow_idx(self.index(a), k))
    }
    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        self.inv_idx(self.index(a)).map(|i| self.element(i))
    }

    // Index-level arithmetic.

    pub fn dlog_idx(&self, x: u32) -> Option<u64> {
        match self.dlog[x as usize] {
            u32::MAX => None,
            k => Some(k as u64),
        }
    }

    /// `g^k` as an index.
    pub fn exp_idx(&self, k: u64) -> u32 {
        self.exp[(k % self.n()) as usize]
    }

    pub fn add_idx(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            let s = a + b;
            return if s as u64 >= self.p { s - self.p as u32 } else { s };
        }
        if self.q <= ADD_TABLE_MAX_Q {
            let t = self.add_table.get_or_init(|| {
                let q = self.q as u32;
                let mut t = Vec::with_capacity((q * q) as usize);
                for x in 0..q {
                    for y in 0..q {
                        t.push(self.add_digits(x, y) as u16);
                    }
                }
                t
            });
            return t[(a as u64 * self.q + b as u64) as usize] as u32;
        }
        self.add_digits(a, b)
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.p as u32;
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.e {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg_idx(&self, a: u32) -> u32 {
        let p = self.p as u32;
        let (mut a, mut out, mut place) = (a, 0u32, 1u32);
        for _ in 0..self.e {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub_idx(&self, a: u32, b: u32) -> u32 {
        self.add_idx(a, self.neg_idx(b))
    }

    pub fn mul_idx(&self, a: u32, b: u32) -> u32 {
        match (self.dlog_idx(a), self.dlog_idx(b)) {
            (Some(x), Some(y)) => self.exp_idx(x + y),
            _ => 0,
        }
    }

    pub fn pow_idx(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        match self.dlog_idx(a) {
            Some(x) => self.exp_idx(((x as u128 * k as u128) % self.n() as u128) as u64),
            None => 0,
        }
    }

    pub fn inv_idx(&self, a: u32) -> Option<u32> {
        self.dlog_idx(a).map(|x| self.exp_idx(self.n() - x))
    }

    /// Index of `-1`.
    pub fn minus_one_idx(&self) -> u32 {
        self.neg_idx(1)
    }

    /// Index of the prime-field element `n mod p`.
    pub fn int_idx(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn trace_idx(&self, x: u32) -> u64 {
        let mut acc = 0u32;
        let mut cur = x;
        for _ in 0..self.e {
            acc = self.add_idx(acc, cur);
            cur = self.pow_idx(cur, self.p);
        }
        debug_assert!((acc as u64) < self.p, "trace left the prime field");
        acc as u64
    }

    fn cache_path(&self, dir: &Path) -> PathBuf {
        cache_file(dir, self.p, self.e, &self.modulus)
    }

    fn store_cache(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        let mut buf = Vec::with_capacity(16 + 4 * self.q as usize);
        buf.extend_from_slice(CACHE_MAGIC);
        buf.extend_from_slice(&(self.p as u32).to_le_bytes());
        buf.extend_from_slice(&self.e.to_le_bytes());
        for &c in &self.modulus {
            buf.extend_from_slice(&c.to_le_bytes());
        }
        for &k in &self.dlog[1..] {
            buf.extend_from_slice(&k.to_le_bytes());
        }
        let path = self.cache_path(dir);
        let tmp = path.with_extension("tmp");
        fs::File::create(&tmp)?.write_all(&buf)?;
        fs::rename(tmp, path)
    }
}

fn cache_file(dir: &Path, p: u64, e: u32, modulus: &[u32]) -> PathBuf {
    let m = undigits(&modulus[..e as usize], p);
    dir.join(format!("dlog-p{p}-e{e}-m{m}.bin"))
}

/// Reads a cached dlog table. Anything unexpected means "no cache".
fn load_cached(dir: &Path, p: u64, e: u32, modulus: &[u32], generator: u32) -> Option<FieldContext> {
    let bytes = fs::read(cache_file(dir, p, e, modulus)).ok()?;
    let q = p.pow(e);
    let words = 2 + modulus.len() + (q - 1) as usize;
    if bytes.len() != 4 + 4 * words || &bytes[..4] != CACHE_MAGIC {
        return None;
    }
    let mut it = bytes[4..].chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap()));
    if it.next()? as u64 != p || it.next()? != e {
        return None;
    }
    for &c in modulus {
        if it.next()? != c {
            return None;
        }
    }
    let mut dlog = vec![u32::MAX; q as usize];
    let mut exp = vec![u32::MAX; (q - 1) as usize];
    for (x, k) in (1..q as u32).zip(it) {
        let slot = exp.get_mut(k as usize)?;
        if *slot != u32::MAX {
            return None;
        }
        *slot = x;
        dlog[x as usize] = k;
    }
    if exp[0] != 1 || (q > 2 && exp[1] != generator) {
        return None;
    }
    let ctx = FieldContext { p, e, q, modulus: modulus.to_vec(), generator, exp, dlog, add_table: OnceLock::new(), cyclo: OnceLock::new() };
    // Spot-check the table against real multiplication by g.
    let f = to_u64(modulus);
    let g = to_u64(&digits(generator as u64, p, e));
    let stride = ((q - 1) / 64).max(1);
    let mut k = 0;
    while k + 1 < q - 1 {
        let x = to_u64(&digits(ctx.exp[k as usize] as u64, p, e));
        let y = poly::mul_mod_poly(&x, &g, &f, p);
        if y.iter().rev().fold(0u64, |acc, &d| acc * p + d) != ctx.exp[k as usize + 1] as u64 {
            return None;
        }
        k += stride;
    }
    Some(ctx)
}

pub fn trace(ctx: &FieldContext, x: &FieldElement) -> u64 {
    ctx.trace_idx(ctx.index(x))
}

/// The Teichmüller lift of `x` modulo `p^k`.
pub fn teichmuller(x: u64, p: u64, k: u32) -> PadicInt {
    let modulus = p.pow(k);
    let mut w = x % p;
    // Each step x -> x^p gains one digit of precision.
    for _ in 0..k {
        w = pow_mod(w, p, modulus);
    }
    PadicInt::new(w, p, k)
}

mod poly {
    //! Dense polynomials over F_p, coefficients from the constant term up.
    use super::*;

    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let f = trim(f.to_vec());
        let mut a = trim(a.to_vec());
        let lead_inv = inv_mod(*f.last().unwrap() as i128, p).unwrap();
        while a.len() >= f.len() {
            let shift = a.len() - f.len();
            let c = mul_mod(*a.last().unwrap(), lead_inv, p);
            for (i, &fi) in f.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - mul_mod(c, fi, p)) % p;
            }
            a = trim(a);
        }
        a
    }

    /// Product of `a` and `b` reduced modulo monic `f`, padded to deg f.
    pub fn mul_mod_poly(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let mut prod = vec![0u64; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let mut r = rem(&prod, f, p);
        r.resize(f.len() - 1, 0);
        r
    }

    pub fn pow_mod_poly(a: &[u64], mut k: u64, f: &[u64], p: u64) -> Vec<u64> {
        let deg = f.len() - 1;
        let mut r = vec![0u64; deg];
        r[0] = 1;
        let mut b = a.to_vec();
        b.resize(deg, 0);
        while k > 0 {
            if k & 1 == 1 {
                r = mul_mod_poly(&r, &b, f, p);
            }
            b = mul_mod_poly(&b, &b, f, p);
            k >>= 1;
        }
        r
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or: f of degree e is irreducible iff gcd(f, x^{p^i} - x) = 1 for i <= e/2.
    pub fn is_irreducible(f: &[u32], p: u64) -> bool {
        let f = to_u64(f);
        let e = f.len() - 1;
        if e == 1 {
            return true;
        }
        let mut xp = vec![0u64; e];
        xp[1] = 1;
        for _ in 0..e / 2 {
            xp = pow_mod_poly(&xp, p, &f, p);
            let mut h = xp.clone();
            h[1] = (h[1] + p - 1) % p;
            if gcd(&f, &h, p).len() != 1 {
                return false;
            }
        }
        true
    }
}
