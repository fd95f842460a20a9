//! Basic constructors: natural module, tensor products, duals, Frobenius
//! twists, direct sums, and the structural maps between them.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactcore::{FFMatrix, Field};
use crate::limits::check_dim;

use super::module::{Module, ModuleMap, WeightModule};

fn require_odd(p: u32) -> Result<&'static Field> {
    if p < 3 {
        return Err(Error::Precondition(format!("p = {p} must be an odd prime")));
    }
    Field::prime(p)
}

/// `V1`: weights `1, -1`, `e` raising the lower vector, `f` lowering the upper.
pub fn natural_module(p: u32) -> Result<Module> {
    let f = require_odd(p)?;
    WeightModule::build(f, &[(1, 1), (-1, 1)], "V".into(), |_, k, _| (k == 0).then(|| FFMatrix::identity(f, 1)))
}

/// Mixed-radix position table of a tensor product of several factors.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    dims: Vec<usize>,
    pos: Vec<usize>,
    tuple_of: Vec<usize>,
}

impl TensorLayout {
    fn new(dims: Vec<usize>, pos: Vec<usize>) -> Self {
        let mut tuple_of = vec![0; pos.len()];
        for (flat, &p) in pos.iter().enumerate() {
            tuple_of[p] = flat;
        }
        TensorLayout { dims, pos, tuple_of }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty()
    }

    /// Lexicographic index of a tuple of factor indices.
    pub fn flat(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.dims.len());
        tuple.iter().zip(&self.dims).fold(0, |acc, (&t, &d)| acc * d + t)
    }

    /// Basis position of the pure tensor of factor basis vectors `tuple`.
    pub fn position(&self, tuple: &[usize]) -> usize {
        self.pos[self.flat(tuple)]
    }

    /// Position of the lexicographic index `flat`.
    pub fn position_flat(&self, flat: usize) -> usize {
        self.pos[flat]
    }

    /// Factor indices of a basis position.
    pub fn tuple(&self, position: usize) -> Vec<usize> {
        let mut flat = self.tuple_of[position];
        let mut out = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            out[k] = flat % self.dims[k];
            flat /= self.dims[k];
        }
        out
    }
}

/// A tensor product together with its factors and layout.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub module: Module,
    pub factors: Vec<Module>,
    pub layout: TensorLayout,
}

fn binary_tensor(m: &Module, n: &Module) -> Result<(Module, TensorLayout)> {
    if m.field() != n.field() {
        return Err(Error::FieldMismatch {
            p1: m.p(),
            e1: m.field().degree(),
            p2: n.p(),
            e2: n.field().degree(),
        });
    }
    let what = format!("({}*{})", m.provenance(), n.provenance());
    check_dim(&what, m.dim().saturating_mul(n.dim()))?;
    // sub-blocks of each product weight, in descending order of the left weight
    let mut by_weight: std::collections::BTreeMap<i64, Vec<(usize, usize)>> = Default::default();
    for (i, bm) in m.blocks().iter().enumerate() {
        for (j, bn) in n.blocks().iter().enumerate() {
            by_weight.entry(bm.weight + bn.weight).or_default().push((i, j));
        }
    }
    let weight_dims: Vec<(i64, usize)> = by_weight
        .iter()
        .rev()
        .map(|(&w, subs)| (w, subs.iter().map(|&(i, j)| m.blocks()[i].len * n.blocks()[j].len).sum()))
        .collect();
    // (i, j) -> (product block, offset)
    let mut place: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for (b, (_, subs)) in by_weight.iter().rev().enumerate() {
        let mut off = 0;
        for &(i, j) in subs {
            place.insert((i, j), (b, off));
            off += m.blocks()[i].len * n.blocks()[j].len;
        }
    }
    let sub_lists: Vec<Vec<(usize, usize)>> = by_weight.values().rev().cloned().collect();
    let p = m.p() as u64;
    let module = WeightModule::build(m.field(), &weight_dims, what, |letter, k, b| {
        let r = p.pow(k as u32);
        let rows = {
            let tw = weight_dims[b].0 + 2 * r as i64 * letter.sign();
            weight_dims.iter().find(|x| x.0 == tw)?.1
        };
        let mut out = FFMatrix::zeros(m.field(), rows, weight_dims[b].1);
        let mut any = false;
        for &(i, j) in &sub_lists[b] {
            let (_, src_off) = place[&(i, j)];
            for a in 0..=r {
                let c = r - a;
                let (Some(ma), Some(tm)) = (m.divided_power_blocks(letter, a)[i].clone(), m.dp_target(letter, a, i)) else {
                    continue;
                };
                let (Some(nc), Some(tn)) = (n.divided_power_blocks(letter, c)[j].clone(), n.dp_target(letter, c, j)) else {
                    continue;
                };
                let (_, tgt_off) = place[&(tm, tn)];
                out.set_block(tgt_off, src_off, &ma.kron(&nc));
                any = true;
            }
        }
        any.then_some(out)
    })?;
    let mut pos = vec![0; m.dim() * n.dim()];
    for (i, bm) in m.blocks().iter().enumerate() {
        for (j, bn) in n.blocks().iter().enumerate() {
            let (b, off) = place[&(i, j)];
            let base = module.blocks()[b].start + off;
            for a in 0..bm.len {
                for c in 0..bn.len {
                    pos[(bm.start + a) * n.dim() + bn.start + c] = base + a * bn.len + c;
                }
            }
        }
    }
    Ok((module, TensorLayout::new(vec![m.dim(), n.dim()], pos)))
}

/// `M ⊗ N` with basis ordered by descending weight, then lexicographically.
pub fn tensor(m: &Module, n: &Module) -> Result<Module> {
    Ok(binary_tensor(m, n)?.0)
}

/// Tensor product of several factors; within each weight space the pure
/// tensors are ordered lexicographically.
pub fn tensor_many(factors: &[Module]) -> Result<Tensor> {
    match factors.len() {
        0 => Err(Error::Precondition("tensor product of no factors; use the trivial module".into())),
        1 => {
            let m = factors[0].clone();
            let dim = m.dim();
            Ok(Tensor { module: m, factors: factors.to_vec(), layout: TensorLayout::new(vec![dim], (0..dim).collect()) })
        }
        2 => {
            let (module, layout) = binary_tensor(&factors[0], &factors[1])?;
            Ok(Tensor { module, factors: factors.to_vec(), layout })
        }
        _ => {
            let total: usize = factors.iter().map(|f| f.dim()).try_fold(1usize, |a, d| a.checked_mul(d)).unwrap_or(usize::MAX);
            let name = format!("({})", factors.iter().map(|f| f.provenance().to_string()).collect::<Vec<_>>().join("*"));
            check_dim(&name, total)?;
            let dims: Vec<usize> = factors.iter().map(|f| f.dim()).collect();
            // left fold, tracking the fold position of each lexicographic index
            let (mut acc, mut layout) = binary_tensor(&factors[0], &factors[1])?;
            let mut fold_pos: Vec<usize> = (0..dims[0] * dims[1]).map(|x| layout.position_flat(x)).collect();
            for f in &factors[2..] {
                let (next, lay) = binary_tensor(&acc, f)?;
                let d = f.dim();
                let mut np = vec![0; fold_pos.len() * d];
                for (x, &px) in fold_pos.iter().enumerate() {
                    for c in 0..d {
                        np[x * d + c] = lay.position(&[px, c]);
                    }
                }
                fold_pos = np;
                acc = next;
                layout = lay;
            }
            let _ = layout;
            // canonical position: lexicographic order inside each weight space
            let weights: Vec<Vec<i64>> = factors.iter().map(|f| f.weights()).collect();
            let mut counters: HashMap<i64, usize> = HashMap::new();
            let mut canon = vec![0; total];
            let mut tuple = vec![0usize; dims.len()];
            for (flat, slot) in canon.iter_mut().enumerate() {
                let w: i64 = tuple.iter().enumerate().map(|(k, &t)| weights[k][t]).sum();
                let blk = acc.block_of_weight(w).expect("weight present");
                let c = counters.entry(w).or_insert(0);
                *slot = blk.start + *c;
                *c += 1;
                let _ = flat;
                for k in (0..dims.len()).rev() {
                    tuple[k] += 1;
                    if tuple[k] < dims[k] {
                        break;
                    }
                    tuple[k] = 0;
                }
            }
            let mut perm = vec![0; total];
            for x in 0..total {
                perm[canon[x]] = fold_pos[x];
            }
            let module = acc.reorder(&perm, name)?;
            Ok(Tensor { module, factors: factors.to_vec(), layout: TensorLayout::new(dims, canon) })
        }
    }
}

/// `M^{⊗n}` (the trivial module for `n = 0`).
pub fn tensor_power(m: &Module, n: usize) -> Result<Tensor> {
    if n == 0 {
        let t = WeightModule::trivial(m.field());
        return Ok(Tensor { module: t.clone(), factors: vec![t], layout: TensorLayout::new(vec![1], vec![0]) });
    }
    tensor_many(&vec![m.clone(); n])
}

/// `f_1 ⊗ ... ⊗ f_n` between two tensor products with matching factors.
pub fn tensor_maps(maps: &[&ModuleMap], source: &Tensor, target: &Tensor) -> Result<ModuleMap> {
    if maps.len() != source.factors.len() || maps.len() != target.factors.len() {
        return Err(Error::ShapeMismatch("number of maps differs from number of tensor factors".into()));
    }
    for (k, f) in maps.iter().enumerate() {
        if f.source != source.factors[k] || f.target != target.factors[k] {
            return Err(Error::ShapeMismatch(format!("tensor factor {k} does not match the map")));
        }
    }
    let field = source.module.field();
    check_dim("tensor map", source.module.dim().max(target.module.dim()))?;
    let mut out = FFMatrix::zeros(field, target.module.dim(), source.module.dim());
    // iterate over nonzero entries factor by factor
    let entries: Vec<Vec<(usize, usize, u32)>> = maps
        .iter()
        .map(|f| {
            let m = &f.matrix;
            let mut v = Vec::new();
            for i in 0..m.rows() {
                for (j, &x) in m.row(i).iter().enumerate() {
                    if x != 0 {
                        v.push((i, j, x));
                    }
                }
            }
            v
        })
        .collect();
    let n = maps.len();
    let mut idx = vec![0usize; n];
    if entries.iter().any(|e| e.is_empty()) {
        return Ok(ModuleMap::trusted(source.module.clone(), target.module.clone(), out));
    }
    let mut t = vec![0; n];
    let mut s = vec![0; n];
    loop {
        let mut c = 1u32;
        for k in 0..n {
            let (i, j, x) = entries[k][idx[k]];
            t[k] = i;
            s[k] = j;
            c = field.mul(c, x);
        }
        let (r, col) = (target.layout.position(&t), source.layout.position(&s));
        out.set(r, col, field.add(out.get(r, col), c));
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(ModuleMap::trusted(source.module.clone(), target.module.clone(), out));
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < entries[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// `f ⊗ g` on binary tensor products built here.
pub fn tensor_map(f: &ModuleMap, g: &ModuleMap) -> Result<ModuleMap> {
    let s = tensor_many(&[f.source.clone(), g.source.clone()])?;
    let t = tensor_many(&[f.target.clone(), g.target.clone()])?;
    tensor_maps(&[f, g], &s, &t)
}

/// Permutation map `source -> target` sending basis vector `i` to `image(i)`.
/// Callers guarantee it is a module map.
pub(crate) fn permutation_map(source: &Module, target: &Module, image: impl Fn(usize) -> usize) -> ModuleMap {
    let mut m = FFMatrix::zeros(source.field(), target.dim(), source.dim());
    for i in 0..source.dim() {
        m.set(image(i), i, 1);
    }
    ModuleMap::trusted(source.clone(), target.clone(), m)
}

/// The symmetry `M ⊗ N -> N ⊗ M`.
pub fn braiding(mn: &Tensor, nm: &Tensor) -> Result<ModuleMap> {
    if mn.factors.len() != 2 || nm.factors.len() != 2 || mn.factors[0] != nm.factors[1] || mn.factors[1] != nm.factors[0] {
        return Err(Error::ShapeMismatch("braiding needs M⊗N and N⊗M".into()));
    }
    Ok(permutation_map(&mn.module, &nm.module, |i| {
        let t = mn.layout.tuple(i);
        nm.layout.position(&[t[1], t[0]])
    }))
}

/// Regrouping isomorphism between two bracketings of the same atomic factors.
/// `src_pos` / `tgt_pos` give the basis position of an atomic tuple.
pub(crate) fn regroup(
    source: &Module,
    target: &Module,
    atomic_dims: &[usize],
    src_pos: impl Fn(&[usize]) -> usize,
    tgt_pos: impl Fn(&[usize]) -> usize,
) -> ModuleMap {
    let mut m = FFMatrix::zeros(source.field(), target.dim(), source.dim());
    let n = atomic_dims.len();
    let mut t = vec![0usize; n];
    let total: usize = atomic_dims.iter().product();
    for _ in 0..total {
        m.set(tgt_pos(&t), src_pos(&t), 1);
        for k in (0..n).rev() {
            t[k] += 1;
            if t[k] < atomic_dims[k] {
                break;
            }
            t[k] = 0;
        }
    }
    ModuleMap::trusted(source.clone(), target.clone(), m)
}

/// A dual module together with the position of the dual basis vector `α_a`.
#[derive(Clone, Debug)]
pub struct Dual {
    pub module: Module,
    pub base: Module,
    pub position: Vec<usize>,
}

/// `M*`: weights negated, `e^{(r)}` acting by `(-1)^r` times the transpose.
pub fn dual(m: &Module) -> Result<Dual> {
    let nb = m.blocks().len();
    let weight_dims: Vec<(i64, usize)> = m.blocks().iter().rev().map(|b| (-b.weight, b.len)).collect();
    let f = m.field();
    let module = WeightModule::build(f, &weight_dims, format!("dual({})", m.provenance()), |letter, k, db| {
        let mu = weight_dims[db].0;
        let shift = m.shift(letter, k);
        let src = m.block_index(-mu - shift)?;
        let (t, g) = m.gen_block(letter, k, src)?;
        debug_assert_eq!(m.blocks()[t].weight, -mu);
        // p^k is odd
        Some(g.transpose().neg())
    })?;
    let mut position = vec![0; m.dim()];
    for (b, blk) in m.blocks().iter().enumerate() {
        let d = &module.blocks()[nb - 1 - b];
        for a in 0..blk.len {
            position[blk.start + a] = d.start + a;
        }
    }
    Ok(Dual { module, base: m.clone(), position })
}

/// `Fr(M)`: weights times `p`, generators shifted up one level.
pub fn frobenius_twist(m: &Module) -> Result<Module> {
    let p = m.p() as i64;
    let weight_dims: Vec<(i64, usize)> = m.blocks().iter().map(|b| (b.weight * p, b.len)).collect();
    WeightModule::build(m.field(), &weight_dims, format!("fr({})", m.provenance()), |letter, k, b| {
        if k == 0 {
            return None;
        }
        m.gen_block(letter, k - 1, b).map(|(_, g)| g.clone())
    })
}

/// A direct sum with the positions of each summand's basis.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Module,
    pub summands: Vec<Module>,
    pub positions: Vec<Vec<usize>>,
}

impl DirectSum {
    pub fn inclusion(&self, k: usize) -> ModuleMap {
        let pos = &self.positions[k];
        permutation_map(&self.summands[k], &self.module, |i| pos[i])
    }

    pub fn projection(&self, k: usize) -> ModuleMap {
        let s = &self.summands[k];
        let mut m = FFMatrix::zeros(s.field(), s.dim(), self.module.dim());
        for (i, &p) in self.positions[k].iter().enumerate() {
            m.set(i, p, 1);
        }
        ModuleMap::trusted(self.module.clone(), s.clone(), m)
    }

    /// The map out of the sum restricting to `maps[k]` on summand `k`.
    pub fn copair(&self, maps: &[&ModuleMap]) -> Result<ModuleMap> {
        let target = maps.first().map(|f| f.target.clone()).ok_or_else(|| Error::Precondition("empty copairing".into()))?;
        let mut m = FFMatrix::zeros(self.module.field(), target.dim(), self.module.dim());
        for (k, f) in maps.iter().enumerate() {
            if f.source != self.summands[k] || f.target != target {
                return Err(Error::ShapeMismatch(format!("copairing component {k} does not match")));
            }
            for (j, &p) in self.positions[k].iter().enumerate() {
                for i in 0..target.dim() {
                    m.set(i, p, f.matrix.get(i, j));
                }
            }
        }
        Ok(ModuleMap::trusted(self.module.clone(), target, m))
    }
}

/// Direct sum; within each weight space summand bases appear in order.
pub fn direct_sum(summands: &[Module]) -> Result<DirectSum> {
    let field = summands.first().map(|m| m.field()).ok_or_else(|| Error::Precondition("empty direct sum".into()))?;
    if summands.iter().any(|m| m.field() != field) {
        return Err(Error::Precondition("direct sum of modules over different fields".into()));
    }
    let mut table: std::collections::BTreeMap<i64, usize> = Default::default();
    for m in summands {
        for b in m.blocks() {
            *table.entry(b.weight).or_insert(0) += b.len;
        }
    }
    let weight_dims: Vec<(i64, usize)> = table.iter().rev().map(|(&w, &d)| (w, d)).collect();
    // offset of summand s inside weight block w
    let mut offsets: HashMap<(usize, i64), usize> = HashMap::new();
    let mut fill: HashMap<i64, usize> = HashMap::new();
    for (s, m) in summands.iter().enumerate() {
        for b in m.blocks() {
            let f = fill.entry(b.weight).or_insert(0);
            offsets.insert((s, b.weight), *f);
            *f += b.len;
        }
    }
    let name = format!("({})", summands.iter().map(|m| m.provenance().to_string()).collect::<Vec<_>>().join("+"));
    let module = WeightModule::build(field, &weight_dims, name, |letter, k, b| {
        let w = weight_dims[b].0;
        let shift = 2 * (field.characteristic() as i64).pow(k as u32) * letter.sign();
        let rows = weight_dims.iter().find(|x| x.0 == w + shift)?.1;
        let mut out = FFMatrix::zeros(field, rows, weight_dims[b].1);
        for (s, m) in summands.iter().enumerate() {
            let Some(mb) = m.block_index(w) else { continue };
            if let Some((t, g)) = m.gen_block(letter, k, mb) {
                out.set_block(offsets[&(s, m.blocks()[t].weight)], offsets[&(s, w)], g);
            }
        }
        Some(out)
    })?;
    let positions = summands
        .iter()
        .enumerate()
        .map(|(s, m)| {
            let mut v = Vec::with_capacity(m.dim());
            for b in m.blocks() {
                let start = module.block_of_weight(b.weight).unwrap().start + offsets[&(s, b.weight)];
                v.extend(start..start + b.len);
            }
            v
        })
        .collect();
    Ok(DirectSum { module, summands: summands.to_vec(), positions })
}

/// The canonical pairing `M* ⊗ M -> 1`, `α_a ⊗ v_b ↦ δ_ab`.
pub fn evaluation_morphism(m: &Module) -> Result<ModuleMap> {
    let d = dual(m)?;
    let t = tensor_many(&[d.module.clone(), m.clone()])?;
    let one = WeightModule::trivial(m.field());
    let mut mat = FFMatrix::zeros(m.field(), 1, t.module.dim());
    for a in 0..m.dim() {
        mat.set(0, t.layout.position(&[d.position[a], a]), 1);
    }
    let ev = ModuleMap::trusted(t.module.clone(), one, mat);
    if !ev.is_intertwiner() {
        return Err(crate::error::internal("evaluation pairing is not an intertwiner"));
    }
    Ok(ev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::weyl_char;
    use crate::slmod::module::Letter;

    fn v(p: u32) -> Module {
        natural_module(p).unwrap()
    }

    #[test]
    fn natural_module_examples() {
        let m = v(3);
        assert_eq!(m.weight_table().into_iter().collect::<Vec<_>>(), vec![(-1, 1), (1, 1)]);
        assert_eq!(m.gen_matrix(Letter::E, 0).rank(), 1);
        assert_eq!(m.levels(), 1);
        assert!(m.divided_power_action(Letter::E, 3).is_zero());
        let fe = m.gen_matrix(Letter::F, 0).mul(&m.gen_matrix(Letter::E, 0));
        // lowest vector is basis index 1
        assert_eq!(fe.col(1), vec![0, 1]);
    }

    #[test]
    fn tensor_square_of_natural() {
        let m = v(3);
        let t = tensor(&m, &m).unwrap();
        assert_eq!(t.dim(), 4);
        assert_eq!(t.character(), weyl_char(1).mul(&weyl_char(1)));
        assert_eq!(t.gen_matrix(Letter::E, 0).rank(), 2);
        assert!(t.check_grading());
    }

    #[test]
    fn divided_square_on_tensor_square() {
        let m = v(3);
        let t = tensor_many(&[m.clone(), m.clone()]).unwrap();
        let e2 = t.module.divided_power_action(Letter::E, 2);
        let lo = t.layout.position(&[1, 1]);
        let hi = t.layout.position(&[0, 0]);
        assert_eq!(e2.get(hi, lo), 1);
        assert_eq!(e2.nonzero_count(), 1);
    }

    #[test]
    fn fourth_divided_power_uses_digits() {
        let m = v(3);
        let t = tensor_power(&m, 4).unwrap().module;
        let e4 = t.divided_power_action(Letter::E, 4);
        let e1 = t.gen_matrix(Letter::E, 0);
        let e3 = t.gen_matrix(Letter::E, 1);
        assert_eq!(e4, e1.mul(&e3));
        assert!(!e4.is_zero());
    }

    #[test]
    fn dual_and_twist_characters() {
        let m = v(3);
        let d = dual(&m).unwrap().module;
        assert_eq!(d.character(), weyl_char(1));
        let fr = frobenius_twist(&m).unwrap();
        assert_eq!(fr.character().poly(), &crate::exactcore::LaurentPoly::from_terms([(3, 1), (-3, 1)]));
        assert!(fr.gen_matrix(Letter::E, 0).is_zero());
        assert!(!fr.gen_matrix(Letter::E, 1).is_zero());
    }

    #[test]
    fn evaluation_is_intertwiner() {
        let ev = evaluation_morphism(&v(3)).unwrap();
        assert!(ev.is_intertwiner());
        assert_eq!(ev.rank(), 1);
        let t = tensor_power(&v(5), 3).unwrap().module;
        let ev = evaluation_morphism(&t).unwrap();
        assert!(!ev.is_zero());
    }

    #[test]
    fn triple_tensor_layout_is_lexicographic_within_weights() {
        let m = v(3);
        let t = tensor_power(&m, 3).unwrap();
        assert!(t.module.check_grading());
        // weight 1 vectors: (0,0,1), (0,1,0), (1,0,0) in that order
        let blk = *t.module.block_of_weight(1).unwrap();
        assert_eq!(t.layout.position(&[0, 0, 1]), blk.start);
        assert_eq!(t.layout.position(&[0, 1, 0]), blk.start + 1);
        assert_eq!(t.layout.position(&[1, 0, 0]), blk.start + 2);
        // associativity: regrouped binary folds agree with the flat product
        let mm = tensor_many(&[m.clone(), m.clone()]).unwrap();
        let left = tensor_many(&[mm.module.clone(), m.clone()]).unwrap();
        let re = regroup(&left.module, &t.module, &[2, 2, 2], |x| left.layout.position(&[mm.layout.position(&x[..2]), x[2]]), |x| t.layout.position(x));
        assert!(re.is_intertwiner());
    }

    #[test]
    fn direct_sum_maps() {
        let m = v(3);
        let one = WeightModule::trivial(m.field());
        let s = direct_sum(&[m.clone(), one.clone()]).unwrap();
        assert_eq!(s.module.dim(), 3);
        for k in 0..2 {
            assert!(s.inclusion(k).is_intertwiner());
            assert!(s.projection(k).compose(&s.inclusion(k)).unwrap().matrix.is_identity());
        }
    }
}
