//! The commutative diagram comparing the symmetric-power presentation of
//! `(V* ⊗ V)^{⊗m}` with the tensor square of the exterior presentation, and
//! the section `1 -> S^m(V* ⊗ V)` it produces, for `V = St_{n-1}`, `m = p^{n-1}`.

use serde_json::json;

use crate::error::{internal, Error, Result};
use crate::exactcore::FFMatrix;
use crate::limits::check_dim;
use crate::slmod::{
    check_exact, cokernel, direct_sum, dual, evaluation_morphism, insert_square, ps_presentation, steinberg, sym2,
    tensor_many, Module, ModuleMap, PresentationSequence, WeightModule,
};

use super::{Status, VerificationReport, VerifyOptions};

/// Permutations of `0..m` with their signs, in lexicographic order.
pub(crate) fn signed_permutations(m: usize) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..m).collect();
    loop {
        let inversions = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        out.push((perm.clone(), inversions % 2 == 0));
        // next permutation
        let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..m).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    out
}

/// A left inverse of an injective matrix, supported on a set of independent rows.
fn left_inverse(a: &FFMatrix) -> Option<FFMatrix> {
    let (_, pivots) = a.transpose().rref();
    if pivots.len() != a.cols() {
        return None;
    }
    let inv = a.select_rows(&pivots).inverse()?;
    let mut out = FFMatrix::zeros(a.field(), a.cols(), a.rows());
    for (k, &r) in pivots.iter().enumerate() {
        for i in 0..a.cols() {
            out.set(i, r, inv.get(i, k));
        }
    }
    Some(out)
}

/// The explicit data of a successful run.
#[derive(Clone, Debug)]
pub struct DiagramWitness {
    /// Composite `S^m(ev) ∘ section` before normalization.
    pub raw_scalar: u32,
    /// Normalized section `1 -> S^m(V* ⊗ V)`.
    pub section: ModuleMap,
    /// The induced epimorphism `S^m(V* ⊗ V) -> 1`.
    pub epimorphism: ModuleMap,
}

pub fn verify_diagram_split(p: u32, n: u32, opts: &VerifyOptions) -> Result<VerificationReport> {
    Ok(diagram_split_with_witness(p, n, opts)?.0)
}

/// The report together with the section as a module map (absent when the
/// composite scalar is zero).
pub fn diagram_split_with_witness(p: u32, n: u32, opts: &VerifyOptions) -> Result<(VerificationReport, Option<DiagramWitness>)> {
    if n < 2 {
        return Err(Error::Precondition("the diagram needs n >= 2".into()));
    }
    let m = (p as u64).checked_pow(n - 1).ok_or_else(|| Error::Precondition("p^(n-1) overflows".into()))? as usize;
    let big = (m as u128 * m as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    check_dim("diagram tensor space", usize::try_from(big).unwrap_or(usize::MAX))?;
    let params = json!({ "p": p, "n": n });

    let v = steinberg(p, n - 1)?;
    let vd = dual(&v)?.module;
    let f = v.field();
    let one = WeightModule::trivial(f);
    let w = tensor_many(&[vd.clone(), v.clone()])?;
    let mut y_factors = vec![vd.clone(); m];
    y_factors.extend(vec![v.clone(); m]);
    let y = tensor_many(&y_factors)?;
    let ps = ps_presentation(&w.module, m)?;
    let wm = &ps.power;
    let ev = evaluation_morphism(&v)?;
    let ev_at = |a: usize, b: usize| ev.matrix.get(0, w.layout.position(&[a, b]));
    let perms = signed_permutations(m);

    // signed shuffle U and the pairing det
    let mut u = FFMatrix::zeros(f, wm.module.dim(), y.module.dim());
    let mut det = FFMatrix::zeros(f, 1, y.module.dim());
    let mut wpos = vec![0usize; m];
    for col in 0..y.module.dim() {
        let t = y.layout.tuple(col);
        let (alphas, vs) = t.split_at(m);
        let mut d = 0u32;
        for (perm, even) in &perms {
            let mut prod = 1u32;
            for k in 0..m {
                wpos[k] = w.layout.position(&[alphas[k], vs[perm[k]]]);
                prod = f.mul(prod, ev_at(alphas[k], vs[perm[k]]));
            }
            let row = wm.layout.position(&wpos);
            let c = if *even { 1 } else { f.neg(1) };
            u.set(row, col, f.add(u.get(row, col), c));
            d = f.add(d, f.mul(c, prod));
        }
        det.set(0, col, d);
    }
    let u = ModuleMap::new(y.module.clone(), wm.module.clone(), u)?;
    let det = ModuleMap::new(y.module.clone(), one.clone(), det)?;

    // ev^{⊗m} on (V* ⊗ V)^{⊗m}
    let mut evm = FFMatrix::zeros(f, 1, wm.module.dim());
    for col in 0..wm.module.dim() {
        let t = wm.layout.tuple(col);
        let val = t.iter().fold(1u32, |acc, &x| f.mul(acc, ev.matrix.get(0, x)));
        evm.set(0, col, val);
    }
    let evm = ModuleMap::new(wm.module.clone(), one.clone(), evm)?;
    let triangle = evm.compose(&u)?.matrix == det.matrix;

    // bottom-left: symmetric-square insertions on either side
    let s2d = sym2(&vd)?;
    let s2v = sym2(&v)?;
    let mut pieces: Vec<Module> = Vec::new();
    let mut inserts: Vec<ModuleMap> = Vec::new();
    let mut dual_side = Vec::new();
    for i in 0..=m - 2 {
        let mut suffix = vec![vd.clone(); m - i - 2];
        suffix.extend(vec![v.clone(); m]);
        let (piece, ins) = insert_square(&vec![vd.clone(); i], &s2d, &suffix, &y)?;
        dual_side.push(pieces.len());
        pieces.push(piece.module);
        inserts.push(ins);
    }
    for i in 0..=m - 2 {
        let mut prefix = vec![vd.clone(); m];
        prefix.extend(vec![v.clone(); i]);
        let (piece, ins) = insert_square(&prefix, &s2v, &vec![v.clone(); m - i - 2], &y)?;
        pieces.push(piece.module);
        inserts.push(ins);
    }
    let x2 = direct_sum(&pieces)?;
    let bl = x2.copair(&inserts.iter().collect::<Vec<_>>())?;

    // left upward map: factor U ∘ (insertion) through the ∧²-insertions
    let mut lifts = Vec::new();
    let mut lifts_intertwine = true;
    let mut lifts_exact = true;
    let mut module_side_zero = true;
    for (k, ins) in inserts.iter().enumerate() {
        let comp = u.compose(ins)?;
        if let Some(i) = dual_side.iter().position(|&d| d == k) {
            let a = &ps.insertions[i];
            let linv = left_inverse(&a.matrix).ok_or_else(|| internal("wedge insertion is not injective"))?;
            let lift = ModuleMap::trusted(ins.source.clone(), a.source.clone(), linv.mul(&comp.matrix));
            lifts_exact &= a.matrix.mul(&lift.matrix) == comp.matrix;
            lifts_intertwine &= lift.is_intertwiner();
            lifts.push(ps.sum.inclusion(i).compose(&lift)?);
        } else {
            module_side_zero &= comp.is_zero();
            lifts.push(ModuleMap::zero(&ins.source, &ps.sum.module));
        }
    }
    let left_up = x2.copair(&lifts.iter().collect::<Vec<_>>())?;
    let square = ps.sequence.left.compose(&left_up)?.matrix == u.compose(&bl)?.matrix;

    // bottom row exactness and its cokernel
    let bottom = PresentationSequence::new(bl.clone(), det.clone())?;
    let bottom_exact = check_exact(&bottom)?;
    let coker = cokernel(&bl)?;
    let coker_trivial = coker.module.dim() == 1 && coker.module.weights() == vec![0];

    // the induced epimorphism S^m(V*⊗V) -> 1
    let q = &ps.quotient;
    let e_mat = evm.matrix.mul(&q.section);
    let e = ModuleMap::new(q.module.clone(), one.clone(), e_mat)?;
    let e_factors = e.compose(&q.projection)?.matrix == evm.matrix;

    // D = q ∘ U kills the bottom-left image, hence factors through det
    let d = q.projection.compose(&u)?;
    let d_kills = d.compose(&bl)?.is_zero();
    let pivot = (0..y.module.dim()).find(|&j| det.matrix.get(0, j) != 0).ok_or_else(|| internal("pairing is zero"))?;
    let scale = f.inv(det.matrix.get(0, pivot)).unwrap();
    let s_col = FFMatrix::column(f, d.matrix.col(pivot)).scale(scale);
    let factors = s_col.mul(&det.matrix) == d.matrix;
    let section = ModuleMap::new(one.clone(), q.module.clone(), s_col)?;
    let raw = e.compose(&section)?.matrix.get(0, 0);

    let mut witness = None;
    let mut normalized_ok = false;
    if raw != 0 {
        let normalized = section.scale(f.inv(raw).unwrap());
        normalized_ok = e.compose(&normalized)?.matrix.is_identity();
        witness = Some(DiagramWitness { raw_scalar: raw, section: normalized, epimorphism: e.clone() });
    }

    let commute = triangle && square && lifts_exact && lifts_intertwine && module_side_zero;
    let ok = commute && bottom_exact.exact && coker_trivial && e_factors && d_kills && factors && normalized_ok;
    let mut wit = json!({
        "dims": {
            "tensor_space": y.module.dim(),
            "bottom_left": x2.module.dim(),
            "ps": ps.sum.module.dim(),
            "symmetric_power": q.module.dim(),
        },
        "triangle_commutes": triangle,
        "square_commutes": square,
        "left_map_factors": lifts_exact,
        "left_map_is_module_map": lifts_intertwine,
        "second_block_maps_to_zero": module_side_zero,
        "bottom_row": bottom_exact,
        "cokernel_dim": coker.module.dim(),
        "cokernel_trivial": coker_trivial,
        "epimorphism_factors": e_factors,
        "diagonal_kills_bottom_left": d_kills,
        "diagonal_factors_through_unit": factors,
        "raw_scalar": raw,
        "zero_scalar": raw == 0,
        "normalized": normalized_ok,
    });
    if let (true, Some(wt)) = (opts.witness, &witness) {
        wit["section"] = json!(wt.section.matrix.col(0));
    }
    Ok((VerificationReport::new("diagram", params, Status::from_bool(ok), wit), witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_and_signs() {
        let ps = signed_permutations(3);
        assert_eq!(ps.len(), 6);
        assert_eq!(ps.iter().filter(|x| x.1).count(), 3);
        assert_eq!(ps[0], (vec![0, 1, 2], true));
        assert_eq!(ps[1], (vec![0, 2, 1], false));
        assert_eq!(signed_permutations(1), vec![(vec![0], true)]);
    }

    #[test]
    fn left_inverse_of_injection() {
        let f = crate::exactcore::Field::prime(5).unwrap();
        let a = FFMatrix::from_i64_rows(f, &[vec![1, 2], vec![2, 4], vec![0, 1]]);
        let l = left_inverse(&a).unwrap();
        assert!(l.mul(&a).is_identity());
    }

    #[test]
    fn flagship_instance() {
        let (r, w) = diagram_split_with_witness(3, 2, &VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{}", r.to_json_string());
        assert_eq!(r.witnesses["dims"]["symmetric_power"], 165);
        assert_eq!(r.witnesses["bottom_row"]["rank_left"], 728);
        assert_eq!(w.unwrap().section.source.dim(), 1);
        assert!(super::super::recheck_report(&r.to_json_string()).unwrap());
    }

    #[test]
    fn out_of_budget_instance() {
        let e = verify_diagram_split(5, 2, &VerifyOptions::default()).unwrap_err();
        assert!(e.is_resource());
    }
}
