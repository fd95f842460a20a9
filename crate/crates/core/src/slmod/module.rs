//! Weight-graded modules for the divided-power hyperalgebra of SL2.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::characters::Character;
use crate::error::{internal, Error, Result};
use crate::exactcore::lucas::base_digits;
use crate::exactcore::{FFMatrix, Field, LaurentPoly};
use crate::limits::check_dim;

/// Shared handle; modules are immutable once built.
pub type Module = Arc<WeightModule>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Letter {
    E,
    F,
}

impl Letter {
    /// Direction of the weight shift.
    pub fn sign(self) -> i64 {
        match self {
            Letter::E => 1,
            Letter::F => -1,
        }
    }

    pub const BOTH: [Letter; 2] = [Letter::E, Letter::F];
}

/// A weight space inside the flat basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub weight: i64,
    pub start: usize,
    pub len: usize,
}

impl Block {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

/// Per source block: the matrix to the shifted block, `None` when zero.
pub(crate) type BlockMaps = Vec<Option<FFMatrix>>;

pub struct WeightModule {
    field: &'static Field,
    blocks: Vec<Block>,
    dim: usize,
    gens_e: Vec<BlockMaps>,
    gens_f: Vec<BlockMaps>,
    provenance: String,
    dp_cache: Mutex<HashMap<(Letter, u64), Arc<BlockMaps>>>,
}

impl Clone for WeightModule {
    fn clone(&self) -> Self {
        WeightModule {
            field: self.field,
            blocks: self.blocks.clone(),
            dim: self.dim,
            gens_e: self.gens_e.clone(),
            gens_f: self.gens_f.clone(),
            provenance: self.provenance.clone(),
            dp_cache: Mutex::new(HashMap::new()),
        }
    }
}

/// Structural equality; provenance is ignored.
impl PartialEq for WeightModule {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.field == other.field && self.blocks == other.blocks && self.gens_e == other.gens_e && self.gens_f == other.gens_f)
    }
}
impl Eq for WeightModule {}

impl fmt::Debug for WeightModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightModule({}, dim {}, {:?})", self.provenance, self.dim, self.field)
    }
}

/// Number of stored generator levels `K + 1`, `K` minimal with `2 p^{K+1} > span`.
pub fn level_count(p: u32, span: i64) -> usize {
    let mut k = 0usize;
    let mut pk1 = p as i64;
    while 2 * pk1 <= span {
        k += 1;
        pk1 *= p as i64;
    }
    k + 1
}

impl WeightModule {
    /// Builds a module from weight spaces (descending, distinct weights) and a
    /// callback giving the generator block maps.
    pub(crate) fn build(
        field: &'static Field,
        weight_dims: &[(i64, usize)],
        provenance: String,
        mut gen: impl FnMut(Letter, usize, usize) -> Option<FFMatrix>,
    ) -> Result<Module> {
        let mut blocks = Vec::with_capacity(weight_dims.len());
        let mut start = 0;
        for &(w, len) in weight_dims {
            if len == 0 {
                continue;
            }
            if let Some(last) = blocks.last() {
                let last: &Block = last;
                if last.weight <= w {
                    return Err(internal("weight spaces must be listed in strictly descending order"));
                }
            }
            blocks.push(Block { weight: w, start, len });
            start += len;
        }
        check_dim(&provenance, start)?;
        let span = match (blocks.first(), blocks.last()) {
            (Some(a), Some(b)) => a.weight - b.weight,
            _ => 0,
        };
        let levels = level_count(field.characteristic(), span);
        let p = field.characteristic() as i64;
        let mut m = WeightModule {
            field,
            blocks,
            dim: start,
            gens_e: Vec::new(),
            gens_f: Vec::new(),
            provenance,
            dp_cache: Mutex::new(HashMap::new()),
        };
        for letter in Letter::BOTH {
            let mut all = Vec::with_capacity(levels);
            for k in 0..levels {
                let shift = 2 * p.pow(k as u32) * letter.sign();
                let mut per_block = Vec::with_capacity(m.blocks.len());
                for b in 0..m.blocks.len() {
                    let src = m.blocks[b];
                    let tgt = m.block_index(src.weight + shift);
                    let mat = match tgt {
                        None => None,
                        Some(_) => gen(letter, k, b).filter(|x| !x.is_zero()),
                    };
                    if let (Some(mat), Some(t)) = (&mat, tgt) {
                        if mat.shape() != (m.blocks[t].len, src.len) || mat.field() != field {
                            return Err(internal(format!(
                                "generator block has shape {:?}, expected {:?}",
                                mat.shape(),
                                (m.blocks[t].len, src.len)
                            )));
                        }
                    }
                    per_block.push(mat);
                }
                all.push(per_block);
            }
            match letter {
                Letter::E => m.gens_e = all,
                Letter::F => m.gens_f = all,
            }
        }
        Ok(Arc::new(m))
    }

    /// The one-dimensional trivial module.
    pub fn trivial(field: &'static Field) -> Module {
        WeightModule::build(field, &[(0, 1)], "1".into(), |_, _, _| None).expect("trivial module")
    }

    /// The zero module.
    pub fn zero(field: &'static Field) -> Module {
        WeightModule::build(field, &[], "0".into(), |_, _, _| None).expect("zero module")
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Copy of the module with a new provenance label.
    pub fn relabel(&self, provenance: impl Into<String>) -> Module {
        let mut m = self.clone();
        m.provenance = provenance.into();
        Arc::new(m)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_index(&self, weight: i64) -> Option<usize> {
        self.blocks.binary_search_by(|b| weight.cmp(&b.weight)).ok()
    }

    pub fn block_of_weight(&self, weight: i64) -> Option<&Block> {
        self.block_index(weight).map(|b| &self.blocks[b])
    }

    /// Weight of every basis vector, in basis order.
    pub fn weights(&self) -> Vec<i64> {
        self.blocks.iter().flat_map(|b| std::iter::repeat_n(b.weight, b.len)).collect()
    }

    /// Block index of every basis vector.
    pub fn block_of_basis(&self) -> Vec<usize> {
        self.blocks.iter().enumerate().flat_map(|(i, b)| std::iter::repeat_n(i, b.len)).collect()
    }

    pub fn weight_table(&self) -> BTreeMap<i64, usize> {
        self.blocks.iter().map(|b| (b.weight, b.len)).collect()
    }

    pub fn span(&self) -> i64 {
        match (self.blocks.first(), self.blocks.last()) {
            (Some(a), Some(b)) => a.weight - b.weight,
            _ => 0,
        }
    }

    pub fn levels(&self) -> usize {
        self.gens_e.len()
    }

    pub fn character(&self) -> Character {
        Character::from_trusted(LaurentPoly::from_terms(self.blocks.iter().map(|b| (b.weight, BigInt::from(b.len)))))
    }

    fn gens(&self, letter: Letter) -> &[BlockMaps] {
        match letter {
            Letter::E => &self.gens_e,
            Letter::F => &self.gens_f,
        }
    }

    /// Shift of `letter^{(p^k)}`.
    pub fn shift(&self, letter: Letter, k: usize) -> i64 {
        2 * (self.p() as i64).pow(k as u32) * letter.sign()
    }

    /// Block map of `letter^{(p^k)}` out of block `b`, with the target block.
    pub fn gen_block(&self, letter: Letter, k: usize, b: usize) -> Option<(usize, &FFMatrix)> {
        let mat = self.gens(letter).get(k)?.get(b)?.as_ref()?;
        let t = self.block_index(self.blocks[b].weight + self.shift(letter, k))?;
        Some((t, mat))
    }

    /// Dense matrix of the generator `letter^{(p^k)}`; zero above the stored levels.
    pub fn gen_matrix(&self, letter: Letter, k: usize) -> FFMatrix {
        let mut out = FFMatrix::zeros(self.field, self.dim, self.dim);
        for b in 0..self.blocks.len() {
            if let Some((t, mat)) = self.gen_block(letter, k, b) {
                out.set_block(self.blocks[t].start, self.blocks[b].start, mat);
            }
        }
        out
    }

    /// Block maps of the divided power `letter^{(r)}`, via the base-p digit
    /// factorisation into stored generators.
    pub fn divided_power_blocks(&self, letter: Letter, r: u64) -> Arc<BlockMaps> {
        if let Some(hit) = self.dp_cache.lock().unwrap().get(&(letter, r)) {
            return hit.clone();
        }
        let f = self.field;
        let nb = self.blocks.len();
        let mut out: BlockMaps = Vec::with_capacity(nb);
        let digits = base_digits(r, self.p());
        for b in 0..nb {
            if r == 0 {
                out.push(Some(FFMatrix::identity(f, self.blocks[b].len)));
                continue;
            }
            if 2 * r as i128 > self.span() as i128 {
                out.push(None);
                continue;
            }
            let mut cur: Option<(usize, FFMatrix)> = Some((b, FFMatrix::identity(f, self.blocks[b].len)));
            'digits: for (k, &d) in digits.iter().enumerate() {
                for _ in 0..d {
                    let Some((blk, acc)) = cur.take() else { break 'digits };
                    match self.gen_block(letter, k, blk) {
                        Some((t, g)) => cur = Some((t, g.mul(&acc))),
                        None => break 'digits,
                    }
                }
                if let Some((_, acc)) = cur.as_mut() {
                    // divide by d!, invertible since d < p
                    let fact = (1..=d as u64).fold(1u32, |a, x| f.mul(a, f.from_i64(x as i64)));
                    *acc = acc.scale(f.inv(fact).unwrap());
                }
            }
            out.push(cur.map(|(_, m)| m).filter(|m| !m.is_zero()));
        }
        let out = Arc::new(out);
        self.dp_cache.lock().unwrap().insert((letter, r), out.clone());
        out
    }

    /// Target block index of `letter^{(r)}` out of block `b`.
    pub fn dp_target(&self, letter: Letter, r: u64, b: usize) -> Option<usize> {
        self.block_index(self.blocks[b].weight + 2 * r as i64 * letter.sign())
    }

    /// Dense matrix of `letter^{(r)}`.
    pub fn divided_power_action(&self, letter: Letter, r: u64) -> FFMatrix {
        let blocks = self.divided_power_blocks(letter, r);
        let mut out = FFMatrix::zeros(self.field, self.dim, self.dim);
        for (b, mat) in blocks.iter().enumerate() {
            if let (Some(mat), Some(t)) = (mat, self.dp_target(letter, r, b)) {
                out.set_block(self.blocks[t].start, self.blocks[b].start, mat);
            }
        }
        out
    }

    /// Checks that every stored generator respects the grading.
    pub fn check_grading(&self) -> bool {
        for letter in Letter::BOTH {
            for k in 0..self.levels() {
                let g = self.gen_matrix(letter, k);
                let w = self.weights();
                let shift = self.shift(letter, k);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        if g.get(i, j) != 0 && w[i] != w[j] + shift {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// The same module with each block's basis reordered: new vector `i` of
    /// block `b` is old vector `perm[start + i]` (an index into the flat basis).
    pub(crate) fn reorder(self: &Module, perm: &[usize], provenance: String) -> Result<Module> {
        let blocks = self.blocks.clone();
        let local_perm = |b: usize| -> Vec<usize> { blocks[b].range().map(|i| perm[i] - blocks[b].start).collect() };
        WeightModule::build(self.field, &self.weight_dims(), provenance, |letter, k, b| {
            let (t, g) = self.gen_block(letter, k, b)?;
            Some(g.select_rows(&local_perm(t)).select_cols(&local_perm(b)))
        })
    }

    pub fn weight_dims(&self) -> Vec<(i64, usize)> {
        self.blocks.iter().map(|b| (b.weight, b.len)).collect()
    }

    /// Matrices over `F_{p^e}` with the same entries.
    pub fn extend_scalars(self: &Module, e: u32) -> Result<Module> {
        let big = Field::get(self.p(), e)?;
        if big == self.field {
            return Ok(self.clone());
        }
        WeightModule::build(big, &self.weight_dims(), format!("ext({},{})", self.provenance, e), |letter, k, b| {
            self.gen_block(letter, k, b).map(|(_, g)| g.embed(big))
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ModuleRepr {
    p: u32,
    ext_degree: u32,
    weights: Vec<(i64, usize)>,
    gens_e: Vec<FFMatrix>,
    gens_f: Vec<FFMatrix>,
    provenance: String,
}

impl Serialize for WeightModule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModuleRepr {
            p: self.p(),
            ext_degree: self.field.degree(),
            weights: self.weight_dims(),
            gens_e: (0..self.levels()).map(|k| self.gen_matrix(Letter::E, k)).collect(),
            gens_f: (0..self.levels()).map(|k| self.gen_matrix(Letter::F, k)).collect(),
            provenance: self.provenance.clone(),
        }
        .serialize(s)
    }
}

impl WeightModule {
    fn from_repr(r: ModuleRepr) -> Result<Module> {
        let field = Field::get(r.p, r.ext_degree)?;
        let dim: usize = r.weights.iter().map(|w| w.1).sum();
        let probe = WeightModule::build(field, &r.weights, r.provenance.clone(), |_, _, _| None)?;
        if r.gens_e.len() != probe.levels() || r.gens_f.len() != probe.levels() {
            return Err(Error::Parse(format!("expected {} generator levels", probe.levels())));
        }
        for g in r.gens_e.iter().chain(&r.gens_f) {
            if g.shape() != (dim, dim) || g.field() != field {
                return Err(Error::Parse("generator matrix has the wrong shape or field".into()));
            }
        }
        let m = WeightModule::build(field, &r.weights, r.provenance, |letter, k, b| {
            let g = match letter {
                Letter::E => &r.gens_e[k],
                Letter::F => &r.gens_f[k],
            };
            let src = probe.blocks[b];
            let t = probe.block_index(src.weight + probe.shift(letter, k))?;
            Some(g.submatrix(probe.blocks[t].range(), src.range()))
        })?;
        for letter in Letter::BOTH {
            for k in 0..m.levels() {
                let g = match letter {
                    Letter::E => &r.gens_e[k],
                    Letter::F => &r.gens_f[k],
                };
                if &m.gen_matrix(letter, k) != g {
                    return Err(Error::Parse("generator matrix does not respect the grading".into()));
                }
            }
        }
        Ok(m)
    }
}

/// Deserialises into a shared module handle.
pub fn module_from_json(s: &str) -> Result<Module> {
    let r: ModuleRepr = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    WeightModule::from_repr(r)
}

impl<'de> Deserialize<'de> for WeightModule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ModuleRepr::deserialize(d)?;
        let m = WeightModule::from_repr(r).map_err(D::Error::custom)?;
        Ok((*m).clone())
    }
}

/// A weight-preserving intertwiner `source -> target` (matrix is `dim target x dim source`).
#[derive(Clone)]
pub struct ModuleMap {
    pub source: Module,
    pub target: Module,
    pub matrix: FFMatrix,
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleMap({} -> {}, {:?})", self.source.provenance(), self.target.provenance(), self.matrix.shape())
    }
}

impl PartialEq for ModuleMap {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.matrix == other.matrix
    }
}

impl ModuleMap {
    /// Checked constructor: shape, field, grading and intertwining.
    pub fn new(source: Module, target: Module, matrix: FFMatrix) -> Result<Self> {
        if matrix.shape() != (target.dim(), source.dim()) {
            return Err(Error::ShapeMismatch(format!(
                "map matrix {:?} between modules of dimensions {} and {}",
                matrix.shape(),
                source.dim(),
                target.dim()
            )));
        }
        if matrix.field() != source.field() || source.field() != target.field() {
            return Err(Error::FieldMismatch {
                p1: source.p(),
                e1: source.field().degree(),
                p2: matrix.field().characteristic(),
                e2: matrix.field().degree(),
            });
        }
        let f = ModuleMap { source, target, matrix };
        if !f.preserves_weights() {
            return Err(internal("matrix does not preserve weights"));
        }
        if !f.is_intertwiner() {
            return Err(internal("matrix does not commute with the generators"));
        }
        Ok(f)
    }

    /// Constructor for maps that are intertwiners by construction.
    pub(crate) fn trusted(source: Module, target: Module, matrix: FFMatrix) -> Self {
        debug_assert_eq!(matrix.shape(), (target.dim(), source.dim()));
        ModuleMap { source, target, matrix }
    }

    pub fn identity(m: &Module) -> Self {
        ModuleMap::trusted(m.clone(), m.clone(), FFMatrix::identity(m.field(), m.dim()))
    }

    pub fn zero(source: &Module, target: &Module) -> Self {
        ModuleMap::trusted(source.clone(), target.clone(), FFMatrix::zeros(source.field(), target.dim(), source.dim()))
    }

    pub fn field(&self) -> &'static Field {
        self.matrix.field()
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &ModuleMap) -> Result<ModuleMap> {
        if rhs.target != self.source {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source.provenance(),
                self.target.provenance(),
                rhs.source.provenance(),
                rhs.target.provenance()
            )));
        }
        Ok(ModuleMap::trusted(rhs.source.clone(), self.target.clone(), self.matrix.mul(&rhs.matrix)))
    }

    pub fn add(&self, rhs: &ModuleMap) -> Result<ModuleMap> {
        self.same_ends(rhs)?;
        Ok(ModuleMap::trusted(self.source.clone(), self.target.clone(), self.matrix.add(&rhs.matrix)))
    }

    pub fn sub(&self, rhs: &ModuleMap) -> Result<ModuleMap> {
        self.same_ends(rhs)?;
        Ok(ModuleMap::trusted(self.source.clone(), self.target.clone(), self.matrix.sub(&rhs.matrix)))
    }

    pub fn scale(&self, c: u32) -> ModuleMap {
        ModuleMap::trusted(self.source.clone(), self.target.clone(), self.matrix.scale(c))
    }

    fn same_ends(&self, rhs: &ModuleMap) -> Result<()> {
        if self.source != rhs.source || self.target != rhs.target {
            return Err(Error::ShapeMismatch("maps have different source or target".into()));
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        // block diagonal, so blockwise ranks add up
        self.source
            .blocks()
            .iter()
            .filter_map(|b| self.block(b.weight))
            .map(|m| m.rank())
            .sum()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// The weight-`w` block of the matrix, `None` if either side lacks weight `w`.
    pub fn block(&self, w: i64) -> Option<FFMatrix> {
        let s = self.source.block_of_weight(w)?;
        let t = self.target.block_of_weight(w)?;
        Some(self.matrix.submatrix(t.range(), s.range()))
    }

    pub fn preserves_weights(&self) -> bool {
        let ws = self.source.weights();
        let wt = self.target.weights();
        for (i, &w) in wt.iter().enumerate() {
            for (j, &x) in self.matrix.row(i).iter().enumerate() {
                if x != 0 && w != ws[j] {
                    return false;
                }
            }
        }
        true
    }

    /// Exact check of `f ∘ g_M = g_N ∘ f` for every stored generator.
    pub fn is_intertwiner(&self) -> bool {
        let (m, n) = (&self.source, &self.target);
        if !self.preserves_weights() {
            return false;
        }
        let levels = m.levels().max(n.levels());
        for letter in Letter::BOTH {
            for k in 0..levels {
                let shift = m.shift(letter, k);
                for b in m.blocks() {
                    let lhs = match (m.gen_block(letter, k, m.block_index(b.weight).unwrap()), n.block_of_weight(b.weight + shift)) {
                        (Some((t, g)), Some(nt)) => {
                            Some(self.matrix.submatrix(nt.range(), m.blocks()[t].range()).mul(g))
                        }
                        _ => None,
                    };
                    let rhs = match (self.block(b.weight), n.block_index(b.weight).and_then(|nb| n.gen_block(letter, k, nb))) {
                        (Some(fb), Some((_, g))) => Some(g.mul(&fb)),
                        _ => None,
                    };
                    let zero = |x: &Option<FFMatrix>| x.as_ref().is_none_or(|x| x.is_zero());
                    match (&lhs, &rhs) {
                        (Some(a), Some(b)) if a != b => return false,
                        (Some(_), None) if !zero(&lhs) => return false,
                        (None, Some(_)) if !zero(&rhs) => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    source: String,
    target: String,
    matrix: FFMatrix,
}

impl Serialize for ModuleMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MapRepr { source: self.source.provenance().into(), target: self.target.provenance().into(), matrix: self.matrix.clone() }
            .serialize(s)
    }
}
