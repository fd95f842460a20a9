//! Submodules, quotients, images, kernels and cokernels, computed one weight
//! space at a time.

use crate::error::Result;
use crate::exactcore::{FFMatrix, RowEchelon};

use super::module::{Module, ModuleMap, WeightModule};

/// A submodule with its inclusion and a linear left inverse of the inclusion.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub module: Module,
    pub inclusion: ModuleMap,
    /// Linear (not necessarily equivariant) retraction: reads pivot coordinates.
    pub retraction: FFMatrix,
}

/// A quotient with its projection and a linear section of the projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: Module,
    pub projection: ModuleMap,
    /// Linear (not necessarily equivariant) section.
    pub section: FFMatrix,
}

/// Per weight space, a row-echelon basis of a subspace (block coordinates).
pub(crate) type BlockSpaces = Vec<RowEchelon>;

pub(crate) fn empty_spaces(m: &WeightModule) -> BlockSpaces {
    m.blocks().iter().map(|b| RowEchelon::new(m.field(), b.len)).collect()
}

/// Submodule spanned blockwise by `spaces`; the spaces must be stable under
/// the generators.
pub(crate) fn submodule_from_spaces(m: &Module, spaces: &BlockSpaces, provenance: String) -> Result<Submodule> {
    let f = m.field();
    let weight_dims: Vec<(i64, usize)> = m.blocks().iter().zip(spaces).map(|(b, s)| (b.weight, s.rank())).collect();
    // basis (columns) and retraction per block
    let basis: Vec<FFMatrix> = spaces
        .iter()
        .map(|s| {
            let rows = s.basis_rows();
            let mut b = FFMatrix::zeros(f, s.width(), rows.len());
            for (j, r) in rows.iter().enumerate() {
                for (i, &x) in r.iter().enumerate() {
                    b.set(i, j, x);
                }
            }
            b
        })
        .collect();
    let retr: Vec<FFMatrix> = spaces
        .iter()
        .map(|s| {
            let mut r = FFMatrix::zeros(f, s.rank(), s.width());
            for (i, &pc) in s.pivots().iter().enumerate() {
                r.set(i, pc, 1);
            }
            r
        })
        .collect();
    let nonzero: Vec<usize> = (0..m.blocks().len()).filter(|&b| spaces[b].rank() > 0).collect();
    let sub = WeightModule::build(f, &weight_dims.iter().copied().filter(|x| x.1 > 0).collect::<Vec<_>>(), provenance, |letter, k, b| {
        let mb = nonzero[b];
        let (t, g) = m.gen_block(letter, k, mb)?;
        Some(retr[t].mul(&g.mul(&basis[mb])))
    })?;
    let mut incl = FFMatrix::zeros(f, m.dim(), sub.dim());
    let mut retraction = FFMatrix::zeros(f, sub.dim(), m.dim());
    for &mb in &nonzero {
        let w = m.blocks()[mb].weight;
        let sb = sub.block_of_weight(w).unwrap();
        incl.set_block(m.blocks()[mb].start, sb.start, &basis[mb]);
        retraction.set_block(sb.start, m.blocks()[mb].start, &retr[mb]);
    }
    let inclusion = ModuleMap::trusted(sub.clone(), m.clone(), incl);
    debug_assert!(inclusion.is_intertwiner(), "subspace is not a submodule");
    Ok(Submodule { module: sub, inclusion, retraction })
}

/// Quotient by the blockwise subspaces `spaces` (which must form a submodule).
pub(crate) fn quotient_by_spaces(m: &Module, spaces: &BlockSpaces, provenance: String) -> Result<Quotient> {
    let f = m.field();
    // complement coordinates: non-pivot positions
    let free: Vec<Vec<usize>> = spaces
        .iter()
        .map(|s| {
            let mut is_piv = vec![false; s.width()];
            for &c in s.pivots() {
                is_piv[c] = true;
            }
            (0..s.width()).filter(|&c| !is_piv[c]).collect()
        })
        .collect();
    let proj: Vec<FFMatrix> = spaces
        .iter()
        .zip(&free)
        .map(|(s, fr)| {
            let mut pm = FFMatrix::zeros(f, fr.len(), s.width());
            for (q, &j) in fr.iter().enumerate() {
                pm.set(q, j, 1);
                for (row, &pc) in s.basis_rows().iter().zip(s.pivots()) {
                    if row[j] != 0 {
                        pm.set(q, pc, f.neg(row[j]));
                    }
                }
            }
            pm
        })
        .collect();
    let sect: Vec<FFMatrix> = spaces
        .iter()
        .zip(&free)
        .map(|(s, fr)| {
            let mut sm = FFMatrix::zeros(f, s.width(), fr.len());
            for (q, &j) in fr.iter().enumerate() {
                sm.set(j, q, 1);
            }
            sm
        })
        .collect();
    let nonzero: Vec<usize> = (0..m.blocks().len()).filter(|&b| !free[b].is_empty()).collect();
    let weight_dims: Vec<(i64, usize)> = nonzero.iter().map(|&b| (m.blocks()[b].weight, free[b].len())).collect();
    let q = WeightModule::build(f, &weight_dims, provenance, |letter, k, b| {
        let mb = nonzero[b];
        let (t, g) = m.gen_block(letter, k, mb)?;
        Some(proj[t].mul(&g.mul(&sect[mb])))
    })?;
    let mut pmat = FFMatrix::zeros(f, q.dim(), m.dim());
    let mut smat = FFMatrix::zeros(f, m.dim(), q.dim());
    for &mb in &nonzero {
        let qb = q.block_of_weight(m.blocks()[mb].weight).unwrap();
        pmat.set_block(qb.start, m.blocks()[mb].start, &proj[mb]);
        smat.set_block(m.blocks()[mb].start, qb.start, &sect[mb]);
    }
    let projection = ModuleMap::trusted(m.clone(), q.clone(), pmat);
    debug_assert!(projection.is_intertwiner(), "quotient by a non-submodule");
    Ok(Quotient { module: q, projection, section: smat })
}

/// Blockwise column spaces of a module map inside its target.
pub(crate) fn image_spaces(f: &ModuleMap) -> BlockSpaces {
    let mut spaces = empty_spaces(&f.target);
    for (tb, blk) in f.target.blocks().iter().enumerate() {
        let Some(sb) = f.source.block_of_weight(blk.weight) else { continue };
        let sub = f.matrix.submatrix(blk.range(), sb.range());
        for j in 0..sub.cols() {
            if spaces[tb].is_full() {
                break;
            }
            let c = sub.col(j);
            if c.iter().any(|&x| x != 0) {
                spaces[tb].insert(c);
            }
        }
    }
    spaces
}

pub fn image(f: &ModuleMap) -> Result<Submodule> {
    submodule_from_spaces(&f.target, &image_spaces(f), format!("im[{}]", f.source.provenance()))
}

pub fn kernel(f: &ModuleMap) -> Result<Submodule> {
    let mut spaces = empty_spaces(&f.source);
    for (sb, blk) in f.source.blocks().iter().enumerate() {
        match f.block(blk.weight) {
            None => {
                for i in 0..blk.len {
                    let mut e = vec![0; blk.len];
                    e[i] = 1;
                    spaces[sb].insert(e);
                }
            }
            Some(m) => {
                let k = m.kernel();
                for j in 0..k.cols() {
                    spaces[sb].insert(k.col(j));
                }
            }
        }
    }
    submodule_from_spaces(&f.source, &spaces, format!("ker[{}]", f.source.provenance()))
}

pub fn cokernel(f: &ModuleMap) -> Result<Quotient> {
    quotient_by_spaces(&f.target, &image_spaces(f), format!("coker[{}]", f.target.provenance()))
}

/// Sum of the images of several maps into a common target, as a quotient.
pub fn cokernel_of_sum(maps: &[&ModuleMap], target: &Module, provenance: String) -> Result<Quotient> {
    let mut spaces = empty_spaces(target);
    for f in maps {
        for (tb, sp) in image_spaces(f).into_iter().enumerate() {
            for r in sp.basis_rows() {
                if !spaces[tb].is_full() {
                    spaces[tb].insert(r.clone());
                }
            }
        }
    }
    quotient_by_spaces(target, &spaces, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slmod::constructors::{natural_module, tensor_many};

    #[test]
    fn kernel_and_image_of_a_projection() {
        let v = natural_module(3).unwrap();
        let t = tensor_many(&[v.clone(), v.clone()]).unwrap();
        let m = &t.module;
        // 1 - s has image the exterior square and kernel the symmetric square
        let mut s = FFMatrix::zeros(m.field(), 4, 4);
        for i in 0..4 {
            let x = t.layout.tuple(i);
            s.set(t.layout.position(&[x[1], x[0]]), i, 1);
        }
        let one_minus_s = ModuleMap::new(m.clone(), m.clone(), FFMatrix::identity(m.field(), 4).sub(&s)).unwrap();
        let im = image(&one_minus_s).unwrap();
        let ker = kernel(&one_minus_s).unwrap();
        assert_eq!(im.module.dim(), 1);
        assert_eq!(ker.module.dim(), 3);
        let q = cokernel(&one_minus_s).unwrap();
        assert_eq!(q.module.dim(), 3);
        assert!(q.projection.is_intertwiner());
        assert!(ker.inclusion.is_intertwiner());
        assert!(q.projection.compose(&one_minus_s).unwrap().is_zero());
    }
}
