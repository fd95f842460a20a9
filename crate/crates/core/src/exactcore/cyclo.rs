//! The ring `Z[ω]` for `ω` a primitive `p^s`-th root of unity, as integer
//! polynomials reduced modulo `Φ_{p^s}(x) = Σ_{k<p} x^{k p^{s-1}}`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::laurent::LaurentPoly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloElement {
    p: u32,
    s: u32,
    coeffs: Vec<BigInt>,
}

fn order(p: u32, s: u32) -> usize {
    (p as usize).pow(s)
}

fn phi(p: u32, s: u32) -> usize {
    (p as usize - 1) * (p as usize).pow(s - 1)
}

impl CycloElement {
    pub fn zero(p: u32, s: u32) -> Self {
        assert!(s >= 1);
        CycloElement { p, s, coeffs: vec![BigInt::zero(); phi(p, s)] }
    }

    pub fn one(p: u32, s: u32) -> Self {
        let mut z = Self::zero(p, s);
        z.coeffs[0] = BigInt::from(1);
        z
    }

    /// Reduces an integer polynomial given by coefficients of `x^0, x^1, ...`.
    pub fn from_poly(p: u32, s: u32, poly: &[BigInt]) -> Self {
        let n = order(p, s);
        let mut folded = vec![BigInt::zero(); n];
        // x^n = 1 holds in Z[ω] since Φ_{p^s} divides x^n - 1.
        for (e, c) in poly.iter().enumerate() {
            if !c.is_zero() {
                folded[e % n] += c;
            }
        }
        Self::reduce_folded(p, s, folded)
    }

    /// Folded input has length `p^s`; one sparse substitution pass suffices
    /// because `e - φ < p^{s-1}` for every exponent `e < p^s`.
    fn reduce_folded(p: u32, s: u32, mut folded: Vec<BigInt>) -> Self {
        let ph = phi(p, s);
        let step = (p as usize).pow(s - 1);
        for e in (ph..folded.len()).rev() {
            let c = std::mem::take(&mut folded[e]);
            if c.is_zero() {
                continue;
            }
            // x^φ = -(1 + x^{step} + ... + x^{(p-2) step})
            let base = e - ph;
            for k in 0..(p as usize - 1) {
                folded[base + k * step] -= &c;
            }
        }
        folded.truncate(ph);
        CycloElement { p, s, coeffs: folded }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.p, self.s), (rhs.p, rhs.s));
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        CycloElement { p: self.p, s: self.s, coeffs }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!((self.p, self.s), (rhs.p, rhs.s));
        let n = order(self.p, self.s);
        let mut folded = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    folded[(i + j) % n] += a * b;
                }
            }
        }
        Self::reduce_folded(self.p, self.s, folded)
    }
}

/// Value of `f` at a fixed primitive `p^s`-th root of unity.
pub fn lp_eval_cyclotomic(f: &LaurentPoly, p: u32, s: u32) -> CycloElement {
    assert!(s >= 1, "root of unity order p^s needs s >= 1");
    let n = order(p, s) as i64;
    let mut folded = vec![BigInt::zero(); n as usize];
    for (e, c) in f.terms() {
        folded[e.rem_euclid(n) as usize] += c;
    }
    CycloElement::reduce_folded(p, s, folded)
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly = LaurentPoly::from_terms(self.coeffs.iter().enumerate().map(|(e, c)| (e as i64, c.clone())));
        write!(f, "{poly} (mod Φ_{}^{})", self.p, self.s)
    }
}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    p: u32,
    s: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycloElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloRepr { p: self.p, s: self.s, coeffs: self.coeffs.iter().map(ToString::to_string).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CycloRepr::deserialize(d)?;
        if r.s == 0 || r.coeffs.len() != phi(r.p, r.s) {
            return Err(D::Error::custom("cyclotomic coefficient vector has the wrong length"));
        }
        let coeffs = r.coeffs.iter().map(|c| c.parse::<BigInt>().map_err(D::Error::custom)).collect::<Result<_, _>>()?;
        Ok(CycloElement { p: r.p, s: r.s, coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cube_root_kills_weyl_two() {
        let f = LaurentPoly::from_terms([(2, 1), (0, 1), (-2, 1)]);
        assert!(lp_eval_cyclotomic(&f, 3, 1).is_zero());
    }

    #[test]
    fn constants_evaluate_to_themselves() {
        for (p, s) in [(3, 1), (3, 2), (5, 3)] {
            assert_eq!(lp_eval_cyclotomic(&LaurentPoly::one(), p, s), CycloElement::one(p, s));
        }
    }

    #[test]
    fn ninth_root_value() {
        let f = LaurentPoly::from_terms([(2, 1), (0, 1), (-2, 1)]);
        let v = lp_eval_cyclotomic(&f, 3, 2);
        // -x^4 + x^2 - x + 1
        assert_eq!(v.coeffs(), &ints(&[1, -1, 1, 0, -1, 0])[..]);
        assert!(!v.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let v = lp_eval_cyclotomic(&LaurentPoly::from_terms([(5, 3), (-1, -2)]), 5, 2);
        let s = serde_json::to_string(&v).unwrap();
        let w: CycloElement = serde_json::from_str(&s).unwrap();
        assert_eq!(v, w);
    }
}
