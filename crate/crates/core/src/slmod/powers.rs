//! Symmetric and exterior powers through their defining presentations.

use crate::error::{Error, Result};
use crate::exactcore::FFMatrix;

use super::constructors::{braiding, direct_sum, regroup, tensor_many, tensor_maps, tensor_power, DirectSum, Tensor};
use super::hom::PresentationSequence;
use super::module::{Module, ModuleMap, WeightModule};
use super::sub::{cokernel, cokernel_of_sum, empty_spaces, image, quotient_by_spaces, Quotient};

/// A direct summand of `M ⊗ M` cut out by `(1 ± s)/2`.
#[derive(Clone, Debug)]
pub struct SquarePart {
    pub square: Tensor,
    pub module: Module,
    pub inclusion: ModuleMap,
    /// Equivariant projection `M ⊗ M -> part` with `projection ∘ inclusion = id`.
    pub projection: ModuleMap,
}

fn square_part(m: &Module, sign: u32) -> Result<SquarePart> {
    let f = m.field();
    if f.characteristic() == 2 {
        return Err(Error::Precondition("symmetric and exterior squares need odd characteristic".into()));
    }
    let sq = tensor_many(&[m.clone(), m.clone()])?;
    let s = braiding(&sq, &sq)?;
    let half = f.inv(2).unwrap();
    // (1 ± s)/2
    let id = FFMatrix::identity(f, sq.module.dim());
    let proj = id.add(&s.matrix.scale(sign)).scale(half);
    let p = ModuleMap::trusted(sq.module.clone(), sq.module.clone(), proj);
    let im = image(&p)?;
    let name = if sign == 1 { format!("sym({},2)", m.provenance()) } else { format!("wedge({},2)", m.provenance()) };
    let module = im.module.relabel(name);
    let inclusion = ModuleMap::trusted(module.clone(), sq.module.clone(), im.inclusion.matrix.clone());
    let projection = ModuleMap::trusted(sq.module.clone(), module.clone(), im.retraction.mul(&p.matrix));
    Ok(SquarePart { square: sq, module, inclusion, projection })
}

pub fn sym2(m: &Module) -> Result<SquarePart> {
    square_part(m, 1)
}

pub fn wedge2(m: &Module) -> Result<SquarePart> {
    let minus_one = m.field().neg(1);
    square_part(m, minus_one)
}

/// Exterior powers `∧^0 .. ∧^top` of a module, each `∧^j` (`j >= 2`) built as
/// the cokernel of `S²M ⊗ ∧^{j-2} M -> M ⊗ ∧^{j-1} M`.
#[derive(Clone, Debug)]
pub struct ExteriorTower {
    pub base: Module,
    pub powers: Vec<Module>,
    /// `π_j : M ⊗ ∧^{j-1} -> ∧^j`, with its binary tensor, for `j >= 1`.
    quotients: Vec<Option<(Tensor, ModuleMap)>>,
    presentations: Vec<Option<PresentationSequence>>,
    sym2: SquarePart,
}

impl ExteriorTower {
    pub fn new(m: &Module) -> Result<Self> {
        let one = WeightModule::trivial(m.field());
        let s2 = sym2(m)?;
        let t1 = tensor_many(&[m.clone(), one.clone()])?;
        let mut unit = FFMatrix::zeros(m.field(), m.dim(), t1.module.dim());
        for a in 0..m.dim() {
            unit.set(a, t1.layout.position(&[a, 0]), 1);
        }
        let pi1 = ModuleMap::trusted(t1.module.clone(), m.clone(), unit);
        Ok(ExteriorTower {
            base: m.clone(),
            powers: vec![one.relabel(format!("wedge({},0)", m.provenance())), m.clone()],
            quotients: vec![None, Some((t1, pi1))],
            presentations: vec![None, None],
            sym2: s2,
        })
    }

    /// Extends the tower up to `∧^j`.
    pub fn extend_to(&mut self, j: usize) -> Result<()> {
        while self.powers.len() <= j {
            let i = self.powers.len();
            let m = &self.base;
            if self.powers[i - 1].dim() == 0 {
                let z = WeightModule::zero(m.field());
                self.powers.push(z.clone());
                self.quotients.push(None);
                self.presentations.push(None);
                continue;
            }
            let w2 = self.powers[i - 2].clone();
            let (t_prev, pi_prev) = self.quotients[i - 1].clone().expect("previous quotient map");
            // S² ⊗ ∧^{i-2} -> (M⊗M) ⊗ ∧^{i-2} -> M ⊗ (M ⊗ ∧^{i-2}) -> M ⊗ ∧^{i-1}
            let src = tensor_many(&[self.sym2.module.clone(), w2.clone()])?;
            let mid = tensor_many(&[self.sym2.square.module.clone(), w2.clone()])?;
            let x1 = tensor_many(&[m.clone(), self.powers[i - 1].clone()])?;
            let inc = tensor_maps(&[&self.sym2.inclusion, &ModuleMap::identity(&w2)], &src, &mid)?;
            let right_nested = tensor_many(&[m.clone(), t_prev.module.clone()])?;
            let sq = &self.sym2.square;
            let assoc = regroup(
                &mid.module,
                &right_nested.module,
                &[m.dim(), m.dim(), w2.dim()],
                |x| mid.layout.position(&[sq.layout.position(&x[..2]), x[2]]),
                |x| right_nested.layout.position(&[x[0], t_prev.layout.position(&x[1..])]),
            );
            let push = tensor_maps(&[&ModuleMap::identity(m), &pi_prev], &right_nested, &x1)?;
            let left = push.compose(&assoc)?.compose(&inc)?;
            let q = cokernel(&left)?;
            let wi = q.module.relabel(format!("wedge({},{})", m.provenance(), i));
            let proj = ModuleMap::trusted(x1.module.clone(), wi.clone(), q.projection.matrix.clone());
            let seq = PresentationSequence::new(left, proj.clone())?;
            self.powers.push(wi);
            self.quotients.push(Some((x1, proj)));
            self.presentations.push(Some(seq));
        }
        Ok(())
    }

    pub fn power(&mut self, j: usize) -> Result<Module> {
        self.extend_to(j)?;
        Ok(self.powers[j].clone())
    }

    /// The presentation `S²M ⊗ ∧^{j-2} -> M ⊗ ∧^{j-1} -> ∧^j -> 0` (`j >= 2`).
    pub fn presentation(&mut self, j: usize) -> Result<Option<PresentationSequence>> {
        if j < 2 {
            return Err(Error::Precondition("the exterior presentation starts at j = 2".into()));
        }
        self.extend_to(j)?;
        Ok(self.presentations[j].clone())
    }
}

/// `∧^i M` with its presentation (for `i >= 2` and `∧^{i-1} M ≠ 0`).
pub fn wedge_power(m: &Module, i: usize) -> Result<(Module, Option<PresentationSequence>)> {
    let mut tower = ExteriorTower::new(m)?;
    let w = tower.power(i)?;
    let pres = if i >= 2 { tower.presentation(i)? } else { None };
    Ok((w, pres))
}

/// `S^i M` as the quotient of `M^{⊗i}` by the images of `1 - s_k` for all
/// adjacent transpositions `s_k`, together with the quotient map.
pub fn sym_power_quotient(m: &Module, i: usize) -> Result<(Tensor, Quotient)> {
    let t = tensor_power(m, i)?;
    let mut spaces = empty_spaces(&t.module);
    let blocks = t.module.block_of_basis();
    let f = m.field();
    if i >= 2 {
        for pos in 0..t.module.dim() {
            let tuple = t.layout.tuple(pos);
            let b = blocks[pos];
            let start = t.module.blocks()[b].start;
            for k in 0..i - 1 {
                if tuple[k] == tuple[k + 1] {
                    continue;
                }
                let mut sw = tuple.clone();
                sw.swap(k, k + 1);
                let other = t.layout.position(&sw);
                let len = t.module.blocks()[b].len;
                let mut v = vec![0u32; len];
                v[pos - start] = 1;
                v[other - start] = f.neg(1);
                if !spaces[b].is_full() {
                    spaces[b].insert(v);
                }
            }
        }
    }
    let q = quotient_by_spaces(&t.module, &spaces, format!("sym({},{})", m.provenance(), i))?;
    Ok((t, q))
}

pub fn sym_power(m: &Module, i: usize) -> Result<Module> {
    if i == 0 {
        return Ok(WeightModule::trivial(m.field()).relabel(format!("sym({},0)", m.provenance())));
    }
    if i == 1 {
        return Ok(m.clone());
    }
    Ok(sym_power_quotient(m, i)?.1.module)
}

/// Inserts a square part between tensor factors: the map
/// `prefix ⊗ part ⊗ suffix -> target`, where the flat factors of `target` are
/// `prefix, M, M, suffix`.
pub fn insert_square(prefix: &[Module], part: &SquarePart, suffix: &[Module], target: &Tensor) -> Result<(Tensor, ModuleMap)> {
    let base = &part.square.factors[0];
    let mut fs = prefix.to_vec();
    fs.push(part.module.clone());
    fs.extend_from_slice(suffix);
    let piece = tensor_many(&fs)?;
    let mut gs = prefix.to_vec();
    gs.push(part.square.module.clone());
    gs.extend_from_slice(suffix);
    let grouped = tensor_many(&gs)?;
    let ids: Vec<ModuleMap> = prefix.iter().chain(suffix).map(ModuleMap::identity).collect();
    let mut maps: Vec<&ModuleMap> = ids[..prefix.len()].iter().collect();
    maps.push(&part.inclusion);
    maps.extend(ids[prefix.len()..].iter());
    let inc = tensor_maps(&maps, &piece, &grouped)?;
    let i = prefix.len();
    let mut atomic: Vec<usize> = prefix.iter().map(|m| m.dim()).collect();
    atomic.extend([base.dim(), base.dim()]);
    atomic.extend(suffix.iter().map(|m| m.dim()));
    if atomic.len() != target.factors.len() {
        return Err(Error::ShapeMismatch("square insertion does not match the target factors".into()));
    }
    let sq = &part.square;
    let flat = regroup(
        &grouped.module,
        &target.module,
        &atomic,
        |x| {
            let mut g: Vec<usize> = x[..i].to_vec();
            g.push(sq.layout.position(&x[i..i + 2]));
            g.extend_from_slice(&x[i + 2..]);
            grouped.layout.position(&g)
        },
        |x| target.layout.position(x),
    );
    let map = flat.compose(&inc)?;
    Ok((piece, map))
}

/// The full presentation `PS^j(M) -> M^{⊗j} -> S^j M -> 0` with
/// `PS^j = ⊕_i M^{⊗i} ⊗ ∧²M ⊗ M^{⊗(j-i-2)}`.
#[derive(Clone, Debug)]
pub struct PsPresentation {
    pub power: Tensor,
    pub pieces: Vec<Tensor>,
    pub sum: DirectSum,
    /// Inclusion of each piece into `M^{⊗j}`.
    pub insertions: Vec<ModuleMap>,
    pub sequence: PresentationSequence,
    pub quotient: Quotient,
    pub wedge2: SquarePart,
}

pub fn ps_presentation(m: &Module, j: usize) -> Result<PsPresentation> {
    if j < 2 {
        return Err(Error::Precondition("PS presentation needs j >= 2".into()));
    }
    let power = tensor_power(m, j)?;
    let w2 = wedge2(m)?;
    let mut pieces = Vec::new();
    let mut insertions = Vec::new();
    for i in 0..=j - 2 {
        let (piece, ins) = insert_square(&vec![m.clone(); i], &w2, &vec![m.clone(); j - i - 2], &power)?;
        pieces.push(piece);
        insertions.push(ins);
    }
    let sum = direct_sum(&pieces.iter().map(|t| t.module.clone()).collect::<Vec<_>>())?;
    let refs: Vec<&ModuleMap> = insertions.iter().collect();
    let left = sum.copair(&refs)?;
    let quotient = cokernel_of_sum(&refs, &power.module, format!("sym({},{})", m.provenance(), j))?;
    let sequence = PresentationSequence::new(left, quotient.projection.clone())?;
    Ok(PsPresentation { power, pieces, sum, insertions, sequence, quotient, wedge2: w2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{exterior_char, symmetric_char, weyl_char};
    use crate::slmod::constructors::natural_module;
    use crate::slmod::hom::check_exact;

    #[test]
    fn squares_of_natural() {
        let v = natural_module(3).unwrap();
        let w = wedge2(&v).unwrap();
        assert_eq!(w.module.dim(), 1);
        assert_eq!(w.module.weight_table().into_iter().collect::<Vec<_>>(), vec![(0, 1)]);
        let s = sym2(&v).unwrap();
        assert_eq!(s.module.character(), weyl_char(2));
        assert!(s.projection.compose(&s.inclusion).unwrap().matrix.is_identity());
        assert!(s.projection.is_intertwiner() && s.inclusion.is_intertwiner());
    }

    #[test]
    fn wedge_tower_characters() {
        let v = natural_module(3).unwrap();
        let st = sym_power(&v, 2).unwrap();
        let mut tower = ExteriorTower::new(&st).unwrap();
        for i in 0..=4 {
            let w = tower.power(i).unwrap();
            assert_eq!(w.character(), exterior_char(&st.character(), i as u64).unwrap(), "i = {i}");
        }
        assert_eq!(tower.power(3).unwrap().dim(), 1);
        assert_eq!(tower.power(4).unwrap().dim(), 0);
        let seq = tower.presentation(2).unwrap().unwrap();
        assert!(check_exact(&seq).unwrap().exact);
        let seq = tower.presentation(3).unwrap().unwrap();
        assert!(check_exact(&seq).unwrap().exact);
    }

    #[test]
    fn symmetric_powers() {
        let v = natural_module(3).unwrap();
        assert_eq!(sym_power(&v, 2).unwrap().character(), weyl_char(2));
        assert_eq!(sym_power(&v, 0).unwrap().dim(), 1);
        assert_eq!(sym_power(&v, 1).unwrap(), v);
        let s3 = sym_power(&v, 3).unwrap();
        assert_eq!(s3.character(), symmetric_char(&weyl_char(1), 3).unwrap());
    }

    #[test]
    fn ps_presentation_is_exact() {
        let v = natural_module(3).unwrap();
        let ps = ps_presentation(&v, 3).unwrap();
        let ex = check_exact(&ps.sequence).unwrap();
        assert!(ex.exact);
        assert_eq!(ps.sequence.x0.dim(), 4);
    }
}
