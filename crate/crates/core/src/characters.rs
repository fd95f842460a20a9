//! Characters of SL2 in characteristic p: Weyl, simple and tilting characters,
//! greedy tilting decomposition, cells of tensor ideals, exterior and
//! symmetric powers, and truncated p-adic dimensions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{internal, Error, Result};
use crate::exactcore::{lp_eval_cyclotomic, lucas_binomial, LaurentPoly};
use crate::exactcore::lucas::base_digits;

/// A bar-invariant Laurent polynomial read as an SL2 character.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character(LaurentPoly);

impl Character {
    pub fn new(poly: LaurentPoly) -> Result<Self> {
        if !poly.is_bar_invariant() {
            return Err(Error::NotBarInvariant);
        }
        Ok(Character(poly))
    }

    pub(crate) fn from_trusted(poly: LaurentPoly) -> Self {
        debug_assert!(poly.is_bar_invariant());
        Character(poly)
    }

    pub fn zero() -> Self {
        Character(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Character(LaurentPoly::one())
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.0
    }

    pub fn into_poly(self) -> LaurentPoly {
        self.0
    }

    pub fn dim(&self) -> BigInt {
        self.0.eval_one()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn mul(&self, rhs: &Character) -> Character {
        Character(&self.0 * &rhs.0)
    }

    pub fn add(&self, rhs: &Character) -> Character {
        Character(&self.0 + &rhs.0)
    }

    pub fn scale(&self, c: u64) -> Character {
        Character(self.0.scale(&BigInt::from(c)))
    }

    /// `x -> x^p`, the character of a Frobenius twist.
    pub fn frobenius(&self, p: u32) -> Character {
        Character(self.0.substitute_power(p as i64))
    }

    /// Rewrites the character in the Weyl basis `χ_m`; always exact for
    /// bar-invariant input.
    pub fn weyl_coordinates(&self) -> BTreeMap<u64, BigInt> {
        let mut rest = self.0.clone();
        let mut out = BTreeMap::new();
        while let Some(top) = rest.max_exp() {
            if top < 0 {
                break;
            }
            let c = rest.coeff(top);
            rest = &rest - &weyl_char(top as u64).0.scale(&c);
            out.insert(top as u64, c);
        }
        out
    }

    /// Human rendering in the Weyl basis, e.g. `χ3 + 2·χ1`.
    pub fn weyl_string(&self) -> String {
        let coords = self.weyl_coordinates();
        if coords.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in coords.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !c.abs().is_one() {
                s.push_str(&format!("{}·", c.abs()));
            }
            s.push_str(&format!("χ{m}"));
        }
        s
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Character({})", self.0)
    }
}

/// Multiset of indecomposable tilting summands `T_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TiltingMultiset {
    pub p: u32,
    #[serde(with = "summand_map")]
    pub summands: BTreeMap<u64, u64>,
}

mod summand_map {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::ser::SerializeMap;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<u64, u64>, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(m.len()))?;
        for (k, v) in m.iter().rev() {
            map.serialize_entry(&k.to_string(), v)?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u64, u64>, D::Error> {
        let raw: BTreeMap<String, u64> = BTreeMap::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (k, v) in raw {
            if v == 0 {
                return Err(D::Error::custom("multiplicities must be positive"));
            }
            out.insert(k.parse().map_err(D::Error::custom)?, v);
        }
        Ok(out)
    }
}

impl TiltingMultiset {
    pub fn new(p: u32) -> Self {
        TiltingMultiset { p, summands: BTreeMap::new() }
    }

    pub fn insert(&mut self, m: u64, mult: u64) {
        if mult > 0 {
            *self.summands.entry(m).or_insert(0) += mult;
        }
    }

    /// `Σ mult · ch T_m`.
    pub fn character(&self) -> Character {
        self.summands
            .iter()
            .fold(Character::zero(), |acc, (&m, &c)| acc.add(&tilting_char(self.p, m).scale(c)))
    }

    pub fn total(&self) -> u64 {
        self.summands.values().sum()
    }
}

impl fmt::Display for TiltingMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .summands
            .iter()
            .rev()
            .map(|(m, c)| if *c == 1 { format!("T{m}") } else { format!("{c}·T{m}") })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Largest `n` with the object in the tensor ideal `I_n` (0 = only the whole category).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellIndex {
    pub cell: u32,
}

/// Label of the simple object `V_i` of the level-`n` Verlinde category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerObjectLabel {
    pub p: u32,
    pub n: u32,
    pub i: u64,
}

impl VerObjectLabel {
    pub fn new(p: u32, n: u32, i: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("level n must be at least 1".into()));
        }
        let bound = (p as u64).pow(n - 1) * (p as u64 - 1);
        if i >= bound {
            return Err(Error::Precondition(format!("label {i} outside 0..{bound} for p={p}, n={n}")));
        }
        Ok(VerObjectLabel { p, n, i })
    }

    /// The simple projective generator `V_{p^{n-1}-1}`.
    pub fn projective_generator(p: u32, n: u32) -> Result<Self> {
        Self::new(p, n, (p as u64).pow(n.saturating_sub(1)) - 1)
    }

    /// The odd line `V_{p^{n-1}(p-2)}`.
    pub fn odd_line(p: u32, n: u32) -> Result<Self> {
        Self::new(p, n, (p as u64).pow(n.saturating_sub(1)) * (p as u64 - 2))
    }
}

/// Truncated p-adic integer, digits least significant first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicDigits {
    pub p: u32,
    pub digits: Vec<u32>,
}

impl PadicDigits {
    /// Value of the truncation as an ordinary integer.
    pub fn value(&self) -> BigInt {
        self.digits.iter().rev().fold(BigInt::zero(), |acc, &d| acc * self.p + d)
    }
}

fn require_odd(p: u32) -> Result<()> {
    if p < 3 || !crate::exactcore::field::is_prime(p as u64) {
        return Err(Error::Precondition(format!("p = {p} must be an odd prime")));
    }
    Ok(())
}

/// `χ_m = x^m + x^{m-2} + ... + x^{-m}`.
pub fn weyl_char(m: u64) -> Character {
    let m = m as i64;
    Character(LaurentPoly::from_terms((0..=m).map(|k| (m - 2 * k, 1))))
}

/// Steinberg tensor product formula over base-p digits.
pub fn simple_char(p: u32, m: u64) -> Result<Character> {
    require_odd(p)?;
    let mut acc = Character::one();
    let mut scale = 1i64;
    for d in base_digits(m, p) {
        acc = acc.mul(&Character(weyl_char(d as u64).0.substitute_power(scale)));
        scale *= p as i64;
    }
    Ok(acc)
}

static TILTING_CACHE: OnceLock<Mutex<HashMap<(u32, u64), Character>>> = OnceLock::new();

/// Character of the indecomposable tilting module `T_m` (Donkin's recursion).
pub fn tilting_char(p: u32, m: u64) -> Character {
    assert!(p >= 3, "tilting characters are implemented for odd p");
    let cache = TILTING_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().unwrap().get(&(p, m)) {
        return c.clone();
    }
    let p64 = p as u64;
    let ch = if m < p64 {
        weyl_char(m)
    } else if m <= 2 * p64 - 2 {
        let a = m - (p64 - 1);
        weyl_char(m).add(&weyl_char(p64 - 1 - a))
    } else {
        let a = (m - p64 + 1) % p64;
        let b = (m - p64 + 1 - a) / p64;
        tilting_char(p, p64 - 1 + a).mul(&tilting_char(p, b).frobenius(p))
    };
    // Either racing value is identical.
    cache.lock().unwrap().insert((p, m), ch.clone());
    ch
}

/// Greedy peeling at the top weight; the result is the unique tilting
/// decomposition when one exists.
pub fn decompose_tilting(p: u32, f: &Character) -> Result<TiltingMultiset> {
    require_odd(p)?;
    if !f.0.is_bar_invariant() {
        return Err(Error::NotBarInvariant);
    }
    let mut rest = f.0.clone();
    let mut out = TiltingMultiset::new(p);
    while let Some(top) = rest.max_exp() {
        let c = rest.coeff(top);
        if top < 0 || c.is_negative() {
            return Err(Error::NotTilting);
        }
        let mult = c.to_u64().ok_or(Error::NotTilting)?;
        rest = &rest - &tilting_char(p, top as u64).0.scale(&c);
        if !rest.has_nonnegative_coeffs() {
            return Err(Error::NotTilting);
        }
        out.insert(top as u64, mult);
    }
    Ok(out)
}

/// Weight multiset of a character with nonnegative coefficients.
fn weight_multiset(f: &Character) -> Result<Vec<(i64, u64)>> {
    f.0.terms()
        .map(|(e, c)| {
            if c.is_negative() {
                Err(Error::NegativeCoefficients)
            } else {
                Ok((e, c.to_u64().ok_or(Error::NegativeCoefficients)?))
            }
        })
        .collect()
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Truncated power series in `t` with Laurent coefficients.
fn series_product(f: &Character, degree: usize, term: impl Fn(u64, u64) -> BigInt) -> Result<Vec<LaurentPoly>> {
    let mut series = vec![LaurentPoly::zero(); degree + 1];
    series[0] = LaurentPoly::one();
    for (w, mult) in weight_multiset(f)? {
        // factor Σ_k term(mult, k) t^k x^{k w}
        let mut next = vec![LaurentPoly::zero(); degree + 1];
        for (i, s) in series.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            for k in 0..=(degree - i) as u64 {
                let c = term(mult, k);
                if c.is_zero() {
                    continue;
                }
                let shifted = s * &LaurentPoly::monomial(k as i64 * w, c);
                next[i + k as usize] = &next[i + k as usize] + &shifted;
            }
        }
        series = next;
    }
    Ok(series)
}

/// `e_i` of the weight multiset: the character of the `i`-th exterior power.
pub fn exterior_char(f: &Character, i: u64) -> Result<Character> {
    let dim = f.dim();
    if dim < BigInt::from(i) {
        weight_multiset(f)?;
        return Ok(Character::zero());
    }
    let s = series_product(f, i as usize, binomial)?;
    Ok(Character::from_trusted(s[i as usize].clone()))
}

/// `h_i` of the weight multiset: the character of the `i`-th symmetric power.
pub fn symmetric_char(f: &Character, i: u64) -> Result<Character> {
    let s = series_product(f, i as usize, |mult, k| if mult == 0 { BigInt::from(u8::from(k == 0)) } else { binomial(mult + k - 1, k) })?;
    Ok(Character::from_trusted(s[i as usize].clone()))
}

/// `g(x^p) / g(x)` with `g(x) = Π_{i<m} (x^i - x^{-i})^{m-i}`.
pub fn gl_restriction_char(p: u32, m: u64) -> Result<Character> {
    require_odd(p)?;
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    let g = gl_g(m);
    let q = g.substitute_power(p as i64).div_exact(&g)?;
    let expected = BigInt::from(p).pow((m * (m - 1) / 2) as u32);
    if q.eval_one() != expected {
        return Err(internal(format!("dimension {} of the restricted Steinberg character, expected {expected}", q.eval_one())));
    }
    Character::new(q)
}

/// `g(x) = Π_{i=1}^{m-1} (x^i - x^{-i})^{m-i}`.
pub fn gl_g(m: u64) -> LaurentPoly {
    let mut g = LaurentPoly::one();
    for i in 1..m {
        let f = LaurentPoly::from_terms([(i as i64, 1), (-(i as i64), -1)]);
        g = &g * &f.pow((m - i) as u32);
    }
    g
}

/// Largest `n` with `m >= p^n - 1`.
pub fn threshold_cell(p: u32, m: u64) -> u32 {
    let mut n = 0u32;
    let mut pn = p as u64;
    while m + 1 >= pn {
        n += 1;
        pn *= p as u64;
    }
    n
}

/// Cell of `T_m` from vanishing of its character at primitive `p^s`-th roots
/// of unity, cross-checked against the threshold rule.
pub fn cell_index(p: u32, m: u64) -> Result<CellIndex> {
    require_odd(p)?;
    let ch = tilting_char(p, m);
    let limit = threshold_cell(p, m) + 2;
    let mut n = 0u32;
    while lp_eval_cyclotomic(ch.poly(), p, n + 1).is_zero() {
        n += 1;
        if n > limit {
            return Err(internal(format!("character of T_{m} vanishes at too many roots of unity")));
        }
    }
    let fast = threshold_cell(p, m);
    if fast != n {
        return Err(internal(format!("cell of T_{m} at p={p}: cyclotomic method gives {n}, threshold rule {fast}")));
    }
    Ok(CellIndex { cell: n })
}

/// Digits `D` with `C(D, s) ≡ dims[s] (mod p)` for every supplied `s`.
///
/// Only digits `k` with `p^k < dims.len()` are determined by the data, so the
/// precision is the number of such `k`.
pub fn padic_dim_minus(p: u32, dims: &[u32]) -> Result<PadicDigits> {
    require_odd(p)?;
    if dims.first() != Some(&1) {
        return Err(Error::Precondition("dims[0] must be 1".into()));
    }
    let mut digits = Vec::new();
    let mut pk = 1usize;
    while pk < dims.len() {
        let d = dims[pk];
        if d >= p {
            return Err(Error::NoConsistentPadicDim(format!("dims[{pk}] = {d} is not a residue mod {p}")));
        }
        digits.push(d);
        pk *= p as usize;
    }
    let value: u64 = digits.iter().rev().fold(0u64, |acc, &d| acc * p as u64 + d as u64);
    for (s, &d) in dims.iter().enumerate() {
        if lucas_binomial(value, s as u64, p) != d % p {
            return Err(Error::NoConsistentPadicDim(format!("C(D, {s}) ≢ {d} mod {p}")));
        }
    }
    Ok(PadicDigits { p, digits })
}
