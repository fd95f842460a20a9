//! Laurent polynomials in one variable with arbitrary-precision integer
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{internal, Result};

/// Sparse Laurent polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff.into());
        p
    }

    /// `x + x^{-1}`-style sums from `(exponent, coefficient)` pairs.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Value at `x = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Image under `x -> x^{-1}`.
    pub fn bar(&self) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, c)| (-e, c.clone())).collect() }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.coeffs.iter().all(|(&e, c)| self.coeffs.get(&-e) == Some(c))
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Substitution `x -> x^k`.
    pub fn substitute_power(&self, k: i64) -> Self {
        assert!(k != 0, "x -> x^0 is not a ring map on Laurent polynomials");
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, c)| (e * k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, v)| (e, v * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `self / divisor`; a nonzero remainder is an error.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        let (Some(dmin), Some(dmax)) = (divisor.min_exp(), divisor.max_exp()) else {
            return Err(internal("division by the zero Laurent polynomial"));
        };
        let lead = divisor.coeff(dmax);
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while let Some(rmax) = rem.max_exp() {
            if rmax - dmax < rem.min_exp().unwrap() - dmin {
                break;
            }
            let c = rem.coeff(rmax);
            let (q, r) = c.div_rem(&lead);
            if !r.is_zero() {
                break;
            }
            let shift = rmax - dmax;
            for (e, dc) in divisor.terms() {
                rem.add_term(e + shift, -(dc * &q));
            }
            quot.add_term(shift, q);
        }
        if !rem.is_zero() {
            return Err(internal(format!("Laurent division left remainder {rem}")));
        }
        Ok(quot)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.coeffs {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.coeffs {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c.clone())).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (&e1, c1) in &self.coeffs {
            for (&e2, c2) in &rhs.coeffs {
                *acc.entry(e1 + e2).or_default() += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        LaurentPoly { coeffs: acc }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in self.coeffs.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !abs.is_one() || e == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// `{"exponent": "coefficient"}` with exponents in descending order.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.coeffs.len()))?;
        for (e, c) in self.coeffs.iter().rev() {
            map.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: BTreeMap<String, String> = BTreeMap::deserialize(d)?;
        let mut p = LaurentPoly::zero();
        for (e, c) in raw {
            let e: i64 = e.parse().map_err(D::Error::custom)?;
            let c: BigInt = c.parse().map_err(D::Error::custom)?;
            if c.is_zero() {
                return Err(D::Error::custom("zero coefficients are not stored"));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(m: i64) -> LaurentPoly {
        LaurentPoly::from_terms((0..=m).map(|k| (m - 2 * k, 1)))
    }

    #[test]
    fn binomial_square() {
        let f = LaurentPoly::from_terms([(1, 1), (-1, 1)]);
        assert_eq!(&f * &f, LaurentPoly::from_terms([(2, 1), (0, 2), (-2, 1)]));
    }

    #[test]
    fn zero_annihilates() {
        let f = LaurentPoly::from_terms([(3, 5), (-7, -2)]);
        assert!((&LaurentPoly::zero() * &f).is_zero());
    }

    #[test]
    fn product_of_twisted_weyl_characters() {
        let a = LaurentPoly::from_terms([(2, 1), (0, 1), (-2, 1)]);
        let b = LaurentPoly::from_terms([(6, 1), (0, 1), (-6, 1)]);
        assert_eq!(&a * &b, chi(8));
    }

    #[test]
    fn exact_division_and_failure() {
        let num = LaurentPoly::from_terms([(3, 1), (-3, -1)]);
        let den = LaurentPoly::from_terms([(1, 1), (-1, -1)]);
        assert_eq!(num.div_exact(&den).unwrap(), chi(2));
        assert!(chi(2).div_exact(&den).is_err());
    }

    #[test]
    fn display_and_json() {
        let f = LaurentPoly::from_terms([(2, 1), (0, -2), (-2, 1)]);
        assert_eq!(f.to_string(), "x^2 - 2 + x^-2");
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"2":"1","0":"-2","-2":"1"}"#);
        let g: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }
}
