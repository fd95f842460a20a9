//! Simple, Steinberg and indecomposable tilting modules as concrete modules.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::characters::{decompose_tilting, tilting_char};
use crate::error::{internal, Error, Result};
use crate::exactcore::{base_digits, Field};

use super::constructors::{frobenius_twist, natural_module, tensor_many};
use super::module::{Module, WeightModule};
use super::powers::sym_power;

fn check_odd(p: u32) -> Result<()> {
    if p < 3 || !crate::exactcore::is_prime(p as u64) {
        return Err(Error::Precondition(format!("p = {p} must be an odd prime")));
    }
    Ok(())
}

/// `L_m` as the tensor product of Frobenius twists of restricted symmetric
/// powers of the natural module, one per nonzero base-p digit of `m`.
pub fn simple_module(p: u32, m: u64) -> Result<Module> {
    check_odd(p)?;
    let field = Field::prime(p)?;
    let v = natural_module(p)?;
    let mut factors = Vec::new();
    for (k, &d) in base_digits(m, p).iter().enumerate() {
        if d == 0 {
            continue;
        }
        let mut f = sym_power(&v, d as usize)?;
        for _ in 0..k {
            f = frobenius_twist(&f)?;
        }
        factors.push(f);
    }
    let out = match factors.len() {
        0 => WeightModule::trivial(field),
        1 => factors.pop().unwrap(),
        _ => tensor_many(&factors)?.module,
    };
    Ok(out.relabel(format!("L({m})")))
}

/// `St_r = L_{p^r - 1}`.
pub fn steinberg(p: u32, r: u32) -> Result<Module> {
    check_odd(p)?;
    let m = (p as u64).checked_pow(r).ok_or_else(|| Error::Precondition("Steinberg index too large".into()))? - 1;
    Ok(simple_module(p, m)?.relabel(format!("St({r})")))
}

/// The simple tilting module of dimension `a·p^k` (`1 <= a <= p-1`), which is
/// `L_{a·p^k - 1}`.
pub fn simple_tilting(p: u32, dim: u64) -> Result<Module> {
    check_odd(p)?;
    let mut a = dim;
    while a > 0 && a.is_multiple_of(p as u64) {
        a /= p as u64;
    }
    if dim == 0 || a >= p as u64 {
        return Err(Error::Precondition(format!("{dim} is not of the form a·{p}^k with a < {p}")));
    }
    simple_module(p, dim - 1)
}

fn tilting_cache() -> &'static Mutex<HashMap<(u32, u64), Module>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u64), Module>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Seed used when splitting off `T_m` during its construction.
pub(crate) fn construction_seed(p: u32, m: u64) -> u64 {
    crate::decompose::DEFAULT_SEED ^ ((p as u64) << 40) ^ m
}

/// The indecomposable tilting module `T_m`.
pub fn tilting_module(p: u32, m: u64) -> Result<Module> {
    check_odd(p)?;
    if let Some(t) = tilting_cache().lock().unwrap().get(&(p, m)) {
        return Ok(t.clone());
    }
    let t = build_tilting(p, m)?.relabel(format!("T({m})"));
    if t.character() != tilting_char(p, m) {
        return Err(internal(format!("constructed T({m}) has the wrong character")));
    }
    tilting_cache().lock().unwrap().insert((p, m), t.clone());
    Ok(t)
}

fn build_tilting(p: u32, m: u64) -> Result<Module> {
    let pu = p as u64;
    let field = Field::prime(p)?;
    if m == 0 {
        return Ok(WeightModule::trivial(field));
    }
    if m < pu {
        return sym_power(&natural_module(p)?, m as usize);
    }
    if m <= 2 * pu - 2 {
        // T_{m-1} ⊗ V = T_m ⊕ (lower summands); peel the lower ones off
        let prev = tilting_module(p, m - 1)?;
        let mut cur = tensor_many(&[prev, natural_module(p)?])?.module;
        let rest = cur.character().poly() - tilting_char(p, m).poly();
        let lower = decompose_tilting(p, &crate::characters::Character::new(rest)?)?;
        let mut rng = ChaCha8Rng::seed_from_u64(construction_seed(p, m));
        for (&k, &mult) in lower.summands.iter().rev() {
            let t = tilting_module(p, k)?;
            for _ in 0..mult {
                let pair = match crate::decompose::split_summand(&cur, &t, &mut rng)? {
                    crate::decompose::SplitOutcome::Found { pair, .. } => pair,
                    other => return Err(internal(format!("could not split T({k}) off while building T({m}): {other}"))),
                };
                cur = crate::decompose::peel(&cur, &pair)?.complement;
            }
        }
        return Ok(cur);
    }
    let a = (m - (pu - 1)) % pu;
    let b = (m - (pu - 1)) / pu;
    let head = tilting_module(p, pu - 1 + a)?;
    let tail = frobenius_twist(&tilting_module(p, b)?)?;
    Ok(tensor_many(&[head, tail])?.module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::simple_char;
    use crate::slmod::hom::hom_space;

    #[test]
    fn simple_modules_match_characters() {
        for m in 0..=10 {
            assert_eq!(simple_module(3, m).unwrap().character(), simple_char(3, m).unwrap(), "m = {m}");
        }
        assert_eq!(simple_module(3, 2).unwrap().dim(), 3);
        let st = steinberg(3, 1).unwrap();
        assert_eq!(st.weights(), vec![2, 0, -2]);
        assert_eq!(simple_tilting(3, 6).unwrap().dim(), 6);
        assert!(simple_tilting(3, 4).is_err());
    }

    #[test]
    fn small_tilting_modules() {
        assert_eq!(tilting_module(3, 1).unwrap(), natural_module(3).unwrap());
        let t3 = tilting_module(3, 3).unwrap();
        assert_eq!(t3.dim(), 6);
        assert_eq!(hom_space(&t3, &t3).unwrap().len(), 2);
        let t2 = tilting_module(3, 2).unwrap();
        assert_eq!(hom_space(&t2, &steinberg(3, 1).unwrap()).unwrap().len(), 1);
        for m in 0..=12 {
            assert_eq!(tilting_module(3, m).unwrap().character(), tilting_char(3, m));
        }
        for m in 0..=10 {
            assert_eq!(tilting_module(5, m).unwrap().character(), tilting_char(5, m));
        }
    }
}
