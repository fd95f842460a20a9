//! Finite fields `F_q`, `q = p^e`, with elements packed into `u32`.
//!
//! An element of `F_{p^e}` is a polynomial `c_0 + c_1 x + ... + c_{e-1} x^{e-1}`
//! reduced modulo a fixed monic irreducible, stored as the integer
//! `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`. Prime fields use the same encoding
//! with `e = 1`, so base-field elements embed into every extension unchanged.
//!
//! Fields are interned: [`Field::get`] hands out `&'static Field` so matrices
//! can carry a cheap field reference.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported characteristic. Products of two reduced elements must fit
/// in a `u32` for the Barrett reduction below.
pub const MAX_CHARACTERISTIC: u32 = 1 << 15;
/// Largest supported extension-field order (log/exp tables are dense).
pub const MAX_EXTENSION_ORDER: u32 = 1 << 20;

pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    barrett: u64,
    /// Low coefficients `c_0..c_{e-1}` of the monic defining polynomial.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.e)
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e
    }
}
impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

static REGISTRY: OnceLock<Mutex<HashMap<(u32, u32), &'static Field>>> = OnceLock::new();

impl Field {
    /// The interned field `F_{p^e}`.
    pub fn get(p: u32, e: u32) -> Result<&'static Field> {
        let registry = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
        {
            let map = registry.lock().expect("field registry poisoned");
            if let Some(f) = map.get(&(p, e)) {
                return Ok(f);
            }
        }
        let field = Field::build(p, e)?;
        let mut map = registry.lock().expect("field registry poisoned");
        // A concurrent builder may have won; both values are identical.
        let entry = map.entry((p, e)).or_insert_with(|| Box::leak(Box::new(field)));
        Ok(*entry)
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<&'static Field> {
        Field::get(p, 1)
    }

    fn build(p: u32, e: u32) -> Result<Field> {
        if !is_prime(p as u64) || p >= MAX_CHARACTERISTIC {
            return Err(Error::Precondition(format!("characteristic {p} is not a supported prime")));
        }
        if e == 0 {
            return Err(Error::Precondition("extension degree must be positive".into()));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| e == 1 || q <= MAX_EXTENSION_ORDER as u64);
        let q = q.ok_or_else(|| Error::Precondition(format!("field order {p}^{e} too large")))? as u32;
        let barrett = (1u64 << 32) / p as u64;
        let mut field = Field { p, e, q, barrett, modulus: Vec::new(), exp: Vec::new(), log: Vec::new() };
        if e > 1 {
            field.modulus = lowest_irreducible(p, e);
            field.build_tables();
        }
        Ok(field)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        // The element `x` (encoded as p) need not be primitive; search upward.
        for g in 2..self.q {
            let mut exp = Vec::with_capacity(q - 1);
            let mut cur = 1u32;
            let mut ok = true;
            for k in 0..q - 1 {
                if k > 0 && cur == 1 {
                    ok = false;
                    break;
                }
                exp.push(cur);
                cur = self.poly_mul(cur, g);
            }
            if ok && cur == 1 {
                let mut log = vec![0u32; q];
                for (k, &v) in exp.iter().enumerate() {
                    log[v as usize] = k as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic");
    }

    /// Schoolbook product modulo the defining polynomial; only used to build tables.
    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let e = self.e as usize;
        let p = self.p as u64;
        let da = digits(a, self.p, e);
        let db = digits(b, self.p, e);
        let mut prod = vec![0u64; 2 * e];
        for i in 0..e {
            for j in 0..e {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        for k in (e..2 * e).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            // x^e = -(c_0 + ... + c_{e-1} x^{e-1})
            for (i, &m) in self.modulus.iter().enumerate() {
                let idx = k - e + i;
                prod[idx] = (prod[idx] + (p - m as u64) * c) % p;
            }
        }
        undigits(&prod[..e].iter().map(|&c| c as u32).collect::<Vec<_>>(), self.p)
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.e == 1
    }

    /// Defining polynomial coefficients `c_0..c_{e-1}` (monic, leading term implied).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Reduces `x < 2^32` modulo `p`.
    #[inline(always)]
    pub fn reduce(&self, x: u32) -> u32 {
        let q = ((x as u64 * self.barrett) >> 32) as u32;
        let r = x - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline(always)]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            self.digitwise(a, b, |x, y, p| (x + y) % p)
        }
    }

    #[inline(always)]
    pub fn neg(&self, a: u32) -> u32 {
        if self.e == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            self.digitwise(a, 0, |x, _, p| (p - x) % p)
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline(always)]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            self.reduce(a * b)
        } else if a == 0 || b == 0 {
            0
        } else {
            let s = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
            self.exp[s as usize]
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if self.e == 1 {
            Some(pow_mod(a as u64, (self.p - 2) as u64, self.p as u64) as u32)
        } else {
            let l = self.log[a as usize];
            Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
        }
    }

    pub fn pow(&self, a: u32, mut n: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.q)
    }

    /// `dst += c * src`, elementwise.
    #[inline]
    pub fn axpy(&self, dst: &mut [u32], src: &[u32], c: u32) {
        debug_assert_eq!(dst.len(), src.len());
        if c == 0 {
            return;
        }
        if self.e == 1 {
            let p = self.p;
            for (d, &s) in dst.iter_mut().zip(src) {
                let v = *d + self.reduce(c * s);
                *d = if v >= p { v - p } else { v };
            }
        } else {
            for (d, &s) in dst.iter_mut().zip(src) {
                if s != 0 {
                    *d = self.add(*d, self.mul(c, s));
                }
            }
        }
    }

    /// `dst *= c`, elementwise.
    pub fn scale_slice(&self, dst: &mut [u32], c: u32) {
        for d in dst.iter_mut() {
            *d = self.mul(*d, c);
        }
    }

    fn digitwise(&self, mut a: u32, mut b: u32, op: impl Fn(u32, u32, u32) -> u32) -> u32 {
        let p = self.p;
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.e {
            out += op(a % p, b % p, p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        out
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn digits(mut a: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(a % p);
        a /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo monic `b` over `F_p` (coefficient vectors, low first).
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &c) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * lead) % p;
            }
        }
        r.pop();
    }
    r
}

/// Lowest monic irreducible of degree `e` over `F_p`, ordering candidates
/// `x^e + c_{e-1} x^{e-1} + ... + c_0` lexicographically by `(c_{e-1}, ..., c_0)`.
pub(crate) fn lowest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let pu = p as u64;
    let count = pu.pow(e);
    for t in 0..count {
        // c_0 is the least significant digit, so increasing t is lexicographic
        // from the top coefficient down.
        let low: Vec<u64> = digits(t as u32, p, e as usize).into_iter().map(u64::from).collect();
        let mut poly = low.clone();
        poly.push(1);
        let mut reducible = false;
        'deg: for d in 1..=e / 2 {
            for s in 0..pu.pow(d) {
                let mut cand: Vec<u64> = digits(s as u32, p, d as usize).into_iter().map(u64::from).collect();
                cand.push(1);
                if poly_rem(&poly, &cand, pu).iter().all(|&c| c == 0) {
                    reducible = true;
                    break 'deg;
                }
            }
        }
        if !reducible {
            return low.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.add(3, 4), 2);
        assert_eq!(f.mul(3, 4), 2);
        assert_eq!(f.inv(2), Some(3));
        assert_eq!(f.neg(0), 0);
        assert_eq!(f.from_i64(-1), 4);
        for x in 0..u32::from(u16::MAX) {
            assert_eq!(f.reduce(x), x % 5);
        }
    }

    #[test]
    fn extension_field_is_a_field() {
        for (p, e) in [(3, 2), (3, 4), (5, 2)] {
            let f = Field::get(p, e).unwrap();
            let q = f.order();
            for a in 1..q {
                let ai = f.inv(a).unwrap();
                assert_eq!(f.mul(a, ai), 1, "{p}^{e}: {a}");
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
            // distributivity on a sample
            for a in (0..q).step_by(7) {
                for b in (0..q).step_by(5) {
                    for c in (0..q).step_by(11) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn lowest_irreducibles() {
        // x^2 + 1 is the first irreducible quadratic over F_3.
        assert_eq!(lowest_irreducible(3, 2), vec![1, 0]);
        // x^2 + 2 over F_5.
        assert_eq!(lowest_irreducible(5, 2), vec![2, 0]);
    }

    #[test]
    fn interning_returns_same_instance() {
        let a = Field::get(7, 2).unwrap() as *const Field;
        let b = Field::get(7, 2).unwrap() as *const Field;
        assert_eq!(a, b);
        assert!(Field::prime(9).is_err());
    }
}
