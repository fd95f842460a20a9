//! Certified direct-sum decompositions into indecomposable tilting modules.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::characters::{cell_index, decompose_tilting, CellIndex, TiltingMultiset};
use crate::error::{internal, Error, Result};
use crate::exactcore::{FFMatrix, Field};
use crate::slmod::hom::{hom_space, solve_combination, weight_entries};
use crate::slmod::sub::{image, kernel};
use crate::slmod::{module_from_json, tilting_module, Module, ModuleMap};

pub const DEFAULT_SEED: u64 = 0x7417_1e5e_ed00_0001;
/// Random samples per summand and per extension degree.
pub const TRIAL_BUDGET: usize = 200;
pub const EXTENSION_DEGREES: [u32; 3] = [1, 2, 4];

/// `End(M)` with a basis and structure constants `b_i ∘ b_j = Σ_k c[i][j][k] b_k`.
#[derive(Clone, Debug)]
pub struct EndRing {
    pub basis: Vec<ModuleMap>,
    pub table: Vec<Vec<Vec<u32>>>,
}

impl EndRing {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of the Jacobson radical, read off a certified tilting
    /// decomposition: an endomorphism lies in the radical iff every component
    /// between summands of equal highest weight acts by zero on the highest
    /// weight vector.
    pub fn radical_dim(&self, cert: &DecompositionCertificate) -> Result<usize> {
        if !cert.certified {
            return Err(Error::Precondition("radical needs a certified tilting decomposition".into()));
        }
        let f = cert.module.field();
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for sk in &cert.summands {
            for sl in cert.summands.iter().filter(|s| s.m == sk.m) {
                // the highest weight vector is the first basis vector
                rows.push(
                    self.basis
                        .iter()
                        .map(|b| sk.projection.matrix.mul(&b.matrix).mul(&sl.inclusion.matrix).get(0, 0))
                        .collect(),
                );
            }
        }
        if rows.is_empty() {
            return Ok(self.dim());
        }
        Ok(self.dim() - FFMatrix::from_rows(f, &rows).rank())
    }
}

pub fn end_ring(m: &Module) -> Result<EndRing> {
    let basis = hom_space(m, m)?;
    let entries = weight_entries(m, m);
    let mats: Vec<FFMatrix> = basis.iter().map(|b| b.matrix.clone()).collect();
    let mut table = Vec::with_capacity(basis.len());
    for bi in &basis {
        let mut row = Vec::with_capacity(basis.len());
        for bj in &basis {
            let prod = bi.matrix.mul(&bj.matrix);
            let c = solve_combination(&mats, &prod, &entries)?
                .ok_or_else(|| internal("endomorphisms are not closed under composition"))?;
            row.push(c);
        }
        table.push(row);
    }
    Ok(EndRing { basis, table })
}

/// A summand `ι: T -> M`, `π: M -> T` with `π ∘ ι = id`.
#[derive(Clone, Debug)]
pub struct SummandPair {
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

#[derive(Clone, Debug)]
pub enum SplitOutcome {
    Found { pair: SummandPair, trials: usize },
    /// `Hom(T, M) = 0` or `Hom(M, T) = 0`.
    ProvablyNone { hom_in: usize, hom_out: usize },
    /// A splitting exists over `F_{p^degree}` but none was sampled over `F_p`.
    ExtensionOnly { degree: u32, trials: usize },
    NotFound { trials: usize },
}

impl SplitOutcome {
    pub fn trials(&self) -> usize {
        match self {
            SplitOutcome::Found { trials, .. } | SplitOutcome::ExtensionOnly { trials, .. } | SplitOutcome::NotFound { trials } => *trials,
            SplitOutcome::ProvablyNone { .. } => 0,
        }
    }
}

impl fmt::Display for SplitOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitOutcome::Found { trials, .. } => write!(f, "found after {trials} trials"),
            SplitOutcome::ProvablyNone { hom_in, hom_out } => {
                write!(f, "provably none (dim Hom in = {hom_in}, dim Hom out = {hom_out})")
            }
            SplitOutcome::ExtensionOnly { degree, trials } => {
                write!(f, "found only over an extension of degree {degree} after {trials} trials")
            }
            SplitOutcome::NotFound { trials } => write!(f, "not found after {trials} trials"),
        }
    }
}

fn random_combination(basis: &[FFMatrix], field: &'static Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> FFMatrix {
    let mut out = FFMatrix::zeros(field, rows, cols);
    for b in basis {
        let c = field.random(rng);
        if c != 0 {
            out.axpy(c, b);
        }
    }
    out
}

/// Searches for `T` as a direct summand of `M` by sampling `ι ∈ Hom(T, M)` and
/// `π ∈ Hom(M, T)` until `π ∘ ι` is invertible.
pub fn split_summand(m: &Module, t: &Module, rng: &mut ChaCha8Rng) -> Result<SplitOutcome> {
    if t.dim() == 0 {
        return Err(Error::Precondition("cannot split off the zero module".into()));
    }
    let into = hom_space(t, m)?;
    let out = hom_space(m, t)?;
    if into.is_empty() || out.is_empty() {
        return Ok(SplitOutcome::ProvablyNone { hom_in: into.len(), hom_out: out.len() });
    }
    let base = m.field();
    let into_m: Vec<FFMatrix> = into.iter().map(|h| h.matrix.clone()).collect();
    let out_m: Vec<FFMatrix> = out.iter().map(|h| h.matrix.clone()).collect();
    let mut trials = 0;
    for &e in &EXTENSION_DEGREES {
        let field = Field::get(base.characteristic(), base.degree() * e)?;
        let (ins, outs) = if e == 1 {
            (into_m.clone(), out_m.clone())
        } else {
            (into_m.iter().map(|x| x.embed(field)).collect(), out_m.iter().map(|x| x.embed(field)).collect())
        };
        for _ in 0..TRIAL_BUDGET {
            trials += 1;
            let iota = random_combination(&ins, field, m.dim(), t.dim(), rng);
            let pi = random_combination(&outs, field, t.dim(), m.dim(), rng);
            let Some(inv) = pi.mul(&iota).inverse() else { continue };
            if e > 1 {
                return Ok(SplitOutcome::ExtensionOnly { degree: e, trials });
            }
            let pair = SummandPair {
                inclusion: ModuleMap::trusted(t.clone(), m.clone(), iota),
                projection: ModuleMap::trusted(m.clone(), t.clone(), inv.mul(&pi)),
            };
            return Ok(SplitOutcome::Found { pair, trials });
        }
    }
    Ok(SplitOutcome::NotFound { trials })
}

/// The complement `C = ker π` of a split summand with the inclusion
/// `C -> M` and the projection `M -> C` along `im ι`.
#[derive(Clone, Debug)]
pub struct Peel {
    pub complement: Module,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

pub fn peel(m: &Module, pair: &SummandPair) -> Result<Peel> {
    let k = kernel(&pair.projection)?;
    let idem = pair.inclusion.matrix.mul(&pair.projection.matrix);
    let r = k.retraction.mul(&FFMatrix::identity(m.field(), m.dim()).sub(&idem));
    let complement = k.module.relabel(format!("{}-", m.provenance()));
    Ok(Peel {
        inclusion: ModuleMap::trusted(complement.clone(), m.clone(), k.inclusion.matrix),
        projection: ModuleMap::trusted(m.clone(), complement.clone(), r),
        complement,
    })
}

#[derive(Clone, Debug)]
pub struct CertifiedSummand {
    /// Highest weight of the summand.
    pub m: u64,
    pub module: Module,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

#[derive(Clone, Debug)]
pub struct DecompositionCertificate {
    pub p: u32,
    pub module: Module,
    pub summands: Vec<CertifiedSummand>,
    pub residual: usize,
    pub seed: u64,
    pub trials: usize,
    /// False for the Fitting fallback, whose summands are not identified
    /// with tilting modules.
    pub certified: bool,
}

/// Outcome of re-checking a certificate.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CertificateCheck {
    pub retractions: bool,
    pub orthogonal: bool,
    pub resolves_identity: bool,
    pub intertwiners: bool,
    pub summand_modules: bool,
    pub characters: bool,
    pub residual_zero: bool,
}

impl CertificateCheck {
    pub fn ok(&self) -> bool {
        self.retractions
            && self.orthogonal
            && self.resolves_identity
            && self.intertwiners
            && self.summand_modules
            && self.characters
            && self.residual_zero
    }
}

impl DecompositionCertificate {
    pub fn multiset(&self) -> TiltingMultiset {
        let mut t = TiltingMultiset::new(self.p);
        for s in &self.summands {
            t.insert(s.m, 1);
        }
        t
    }

    pub fn validate(&self) -> Result<CertificateCheck> {
        let f = self.module.field();
        let d = self.module.dim();
        let mut retractions = true;
        let mut orthogonal = true;
        let mut intertwiners = true;
        let mut summand_modules = true;
        let mut sum = FFMatrix::zeros(f, d, d);
        let mut chars = crate::characters::Character::zero();
        for (j, s) in self.summands.iter().enumerate() {
            if s.inclusion.target != self.module || s.projection.source != self.module {
                return Ok(CertificateCheck {
                    retractions: false,
                    orthogonal: false,
                    resolves_identity: false,
                    intertwiners: false,
                    summand_modules: false,
                    characters: false,
                    residual_zero: self.residual == 0,
                });
            }
            intertwiners &= s.inclusion.is_intertwiner() && s.projection.is_intertwiner();
            if self.certified {
                summand_modules &= tilting_module(self.p, s.m)? == s.module;
            }
            summand_modules &= s.inclusion.source == s.module && s.projection.target == s.module;
            for (k, o) in self.summands.iter().enumerate() {
                let c = s.projection.matrix.mul(&o.inclusion.matrix);
                if j == k {
                    retractions &= c.is_identity();
                } else {
                    orthogonal &= c.is_zero();
                }
            }
            sum.add_assign(&s.inclusion.matrix.mul(&s.projection.matrix));
            chars = chars.add(&s.module.character());
        }
        Ok(CertificateCheck {
            retractions,
            orthogonal,
            resolves_identity: sum.is_identity(),
            intertwiners,
            summand_modules,
            characters: chars == self.module.character(),
            residual_zero: self.residual == 0,
        })
    }

    /// JSON rendering; `witness = false` elides all matrices.
    pub fn to_json(&self, witness: bool) -> Value {
        let summands: Vec<Value> = self
            .summands
            .iter()
            .map(|s| {
                let mut v = json!({ "m": s.m, "dim": s.module.dim() });
                if witness {
                    v["inclusion"] = serde_json::to_value(&s.inclusion.matrix).unwrap();
                    v["projection"] = serde_json::to_value(&s.projection.matrix).unwrap();
                    if !self.certified {
                        v["module"] = serde_json::to_value(&*s.module).unwrap();
                    }
                }
                v
            })
            .collect();
        let mut out = json!({
            "p": self.p,
            "provenance": self.module.provenance(),
            "certified": self.certified,
            "seed": self.seed,
            "trials": self.trials,
            "residual": self.residual,
            "multiset": self.multiset(),
            "summands": summands,
        });
        if witness {
            out["module"] = serde_json::to_value(&*self.module).unwrap();
        }
        out
    }

    /// Rebuilds a certificate from its full JSON rendering.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("certificate: missing or malformed {what}"));
        let p = v["p"].as_u64().ok_or_else(|| bad("p"))? as u32;
        let module = module_from_json(&v.get("module").ok_or_else(|| bad("module"))?.to_string())?;
        let certified = v["certified"].as_bool().ok_or_else(|| bad("certified"))?;
        let mut summands = Vec::new();
        for s in v["summands"].as_array().ok_or_else(|| bad("summands"))? {
            let m = s["m"].as_u64().ok_or_else(|| bad("m"))?;
            let sm = if certified {
                tilting_module(p, m)?
            } else {
                module_from_json(&s.get("module").ok_or_else(|| bad("summand module"))?.to_string())?
            };
            let mat = |key: &str| -> Result<FFMatrix> {
                serde_json::from_value(s.get(key).cloned().ok_or_else(|| bad(key))?).map_err(|e| Error::Parse(e.to_string()))
            };
            summands.push(CertifiedSummand {
                m,
                inclusion: ModuleMap::new(sm.clone(), module.clone(), mat("inclusion")?)?,
                projection: ModuleMap::new(module.clone(), sm.clone(), mat("projection")?)?,
                module: sm,
            });
        }
        Ok(DecompositionCertificate {
            p,
            module,
            summands,
            residual: v["residual"].as_u64().ok_or_else(|| bad("residual"))? as usize,
            seed: v["seed"].as_u64().ok_or_else(|| bad("seed"))?,
            trials: v["trials"].as_u64().ok_or_else(|| bad("trials"))? as usize,
            certified,
        })
    }
}

/// Splits `M` into indecomposable tilting summands in the order predicted by
/// its character (highest weight first).
pub fn decompose_module(m: &Module, seed: u64) -> Result<DecompositionCertificate> {
    if !m.field().is_prime_field() {
        return Err(Error::Precondition("decomposition runs over the prime field".into()));
    }
    let p = m.p();
    let predicted = decompose_tilting(p, &m.character())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = m.clone();
    let mut to_m = ModuleMap::identity(m);
    let mut from_m = ModuleMap::identity(m);
    let mut summands = Vec::new();
    let mut trials = 0;
    let mut log = Vec::new();
    for (&k, &mult) in predicted.summands.iter().rev() {
        let t = tilting_module(p, k)?;
        for _ in 0..mult {
            let outcome = split_summand(&cur, &t, &mut rng)?;
            trials += outcome.trials();
            log.push(format!("T({k}): {outcome}"));
            let pair = match outcome {
                SplitOutcome::Found { pair, .. } => pair,
                SplitOutcome::ProvablyNone { .. } => return Err(Error::NotTilting),
                _ => return Err(Error::SplittingNotFound(log.join("; "))),
            };
            summands.push(CertifiedSummand {
                m: k,
                module: t.clone(),
                inclusion: to_m.compose(&pair.inclusion)?,
                projection: pair.projection.compose(&from_m)?,
            });
            let pl = peel(&cur, &pair)?;
            to_m = to_m.compose(&pl.inclusion)?;
            from_m = pl.projection.compose(&from_m)?;
            cur = pl.complement;
        }
    }
    Ok(DecompositionCertificate { p, module: m.clone(), summands, residual: cur.dim(), seed, trials, certified: true })
}

/// Decomposes by random endomorphisms and Fitting's lemma. Pieces whose
/// sampled endomorphisms are all nilpotent or invertible are kept whole.
pub fn fitting_decomposition(m: &Module, seed: u64) -> Result<DecompositionCertificate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = m.field();
    let mut stack = vec![(m.clone(), ModuleMap::identity(m), ModuleMap::identity(m))];
    let mut done = Vec::new();
    let mut trials = 0;
    while let Some((piece, to_m, from_m)) = stack.pop() {
        if piece.dim() == 0 {
            continue;
        }
        let basis: Vec<FFMatrix> = hom_space(&piece, &piece)?.into_iter().map(|h| h.matrix).collect();
        let mut split = None;
        if basis.len() > 1 {
            for _ in 0..TRIAL_BUDGET {
                trials += 1;
                let mut phi = random_combination(&basis, f, piece.dim(), piece.dim(), &mut rng);
                let mut e = 1;
                while e < piece.dim() {
                    phi = phi.mul(&phi);
                    e *= 2;
                }
                if phi.is_zero() || phi.inverse().is_some() {
                    continue;
                }
                split = Some(ModuleMap::trusted(piece.clone(), piece.clone(), phi));
                break;
            }
        }
        let Some(phi) = split else {
            let top = piece.weights()[0].max(0) as u64;
            done.push(CertifiedSummand { m: top, module: piece, inclusion: to_m, projection: from_m });
            continue;
        };
        let k = kernel(&phi)?;
        let i = image(&phi)?;
        let both = FFMatrix::hstack(&[&k.inclusion.matrix, &i.inclusion.matrix]);
        let inv = both.inverse().ok_or_else(|| internal("Fitting pieces do not span"))?;
        let kd = k.module.dim();
        let pk = inv.submatrix(0..kd, 0..piece.dim());
        let pi = inv.submatrix(kd..piece.dim(), 0..piece.dim());
        for (sub, proj) in [(k, pk), (i, pi)] {
            let proj = ModuleMap::trusted(piece.clone(), sub.module.clone(), proj);
            stack.push((sub.module.clone(), to_m.compose(&sub.inclusion)?, proj.compose(&from_m)?));
        }
    }
    done.sort_by_key(|s| std::cmp::Reverse(s.m));
    Ok(DecompositionCertificate { p: m.p(), module: m.clone(), summands: done, residual: 0, seed, trials, certified: false })
}

/// Character-guided decomposition, falling back to Fitting pieces when the
/// module is evidently not tilting.
pub fn decompose_or_fallback(m: &Module, seed: u64) -> Result<DecompositionCertificate> {
    match decompose_module(m, seed) {
        Err(Error::NotTilting) | Err(Error::NegativeCoefficients) => fitting_decomposition(m, seed),
        other => other,
    }
}

/// Result of an isomorphism search.
#[derive(Clone, Debug)]
pub enum IsoOutcome {
    /// An invertible module map, possibly over `F_{p^degree}`.
    Isomorphic { degree: u32, witness: FFMatrix },
    NotIsomorphic { reason: String },
}

impl IsoOutcome {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic { .. })
    }
}

pub fn is_isomorphic(m: &Module, n: &Module, seed: u64) -> Result<IsoOutcome> {
    if m.field() != n.field() {
        return Err(Error::FieldMismatch { p1: m.p(), e1: m.field().degree(), p2: n.p(), e2: n.field().degree() });
    }
    if m.character() != n.character() {
        return Ok(IsoOutcome::NotIsomorphic { reason: "characters differ".into() });
    }
    if m.dim() == 0 {
        return Ok(IsoOutcome::Isomorphic { degree: 1, witness: FFMatrix::zeros(m.field(), 0, 0) });
    }
    let basis: Vec<FFMatrix> = hom_space(m, n)?.into_iter().map(|h| h.matrix).collect();
    if basis.is_empty() {
        return Ok(IsoOutcome::NotIsomorphic { reason: "no nonzero module maps".into() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = m.field();
    for &e in &EXTENSION_DEGREES {
        let field = Field::get(base.characteristic(), base.degree() * e)?;
        let b: Vec<FFMatrix> = if e == 1 { basis.clone() } else { basis.iter().map(|x| x.embed(field)).collect() };
        for _ in 0..TRIAL_BUDGET {
            let h = random_combination(&b, field, n.dim(), m.dim(), &mut rng);
            if h.inverse().is_some() {
                return Ok(IsoOutcome::Isomorphic { degree: e, witness: h });
            }
        }
    }
    Err(Error::Inconclusive(format!(
        "no invertible map among {} samples per extension degree",
        TRIAL_BUDGET
    )))
}

/// The least cell containing every summand of `M`.
pub fn object_cell(m: &Module, seed: u64) -> Result<CellIndex> {
    let cert = decompose_module(m, seed)?;
    let mut best: Option<CellIndex> = None;
    for s in &cert.summands {
        let c = cell_index(cert.p, s.m)?;
        if best.is_none_or(|b| c.cell < b.cell) {
            best = Some(c);
        }
    }
    best.ok_or_else(|| Error::Precondition("the zero module has no cell".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slmod::{frobenius_twist, natural_module, simple_module, steinberg, tensor_power, WeightModule};

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(DEFAULT_SEED)
    }

    #[test]
    fn end_rings() {
        let v = natural_module(3).unwrap();
        assert_eq!(end_ring(&v).unwrap().dim(), 1);
        let vv = tensor_power(&v, 2).unwrap().module;
        assert_eq!(end_ring(&vv).unwrap().dim(), 2);
        let t3 = tilting_module(3, 3).unwrap();
        let e = end_ring(&t3).unwrap();
        assert_eq!(e.dim(), 2);
        let cert = decompose_module(&t3, DEFAULT_SEED).unwrap();
        assert_eq!(e.radical_dim(&cert).unwrap(), 1);
    }

    #[test]
    fn split_examples() {
        let v = natural_module(3).unwrap();
        let vv = tensor_power(&v, 2).unwrap().module;
        let t2 = tilting_module(3, 2).unwrap();
        assert!(matches!(split_summand(&vv, &t2, &mut rng()).unwrap(), SplitOutcome::Found { .. }));
        assert!(matches!(split_summand(&vv, &v, &mut rng()).unwrap(), SplitOutcome::ProvablyNone { .. }));
        let t3 = tilting_module(3, 3).unwrap();
        match split_summand(&t3, &t3, &mut rng()).unwrap() {
            SplitOutcome::Found { pair, .. } => {
                assert!(pair.projection.compose(&pair.inclusion).unwrap().matrix.is_identity())
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn decompositions() {
        let v = natural_module(3).unwrap();
        let v3 = tensor_power(&v, 3).unwrap().module;
        let cert = decompose_module(&v3, DEFAULT_SEED).unwrap();
        assert_eq!(cert.multiset().summands.into_iter().collect::<Vec<_>>(), vec![(1, 1), (3, 1)]);
        assert!(cert.validate().unwrap().ok());
        let one = WeightModule::trivial(v.field());
        assert_eq!(decompose_module(&one, 1).unwrap().multiset().summands.into_iter().collect::<Vec<_>>(), vec![(0, 1)]);
        let st = steinberg(3, 1).unwrap();
        let stst = crate::slmod::tensor(&st, &st).unwrap();
        let c = decompose_module(&stst, 5).unwrap();
        assert_eq!(c.multiset().summands.into_iter().collect::<Vec<_>>(), vec![(2, 1), (4, 1)]);
        assert!(c.validate().unwrap().ok());
    }

    #[test]
    fn certificate_json_round_trip() {
        let v = natural_module(3).unwrap();
        let v4 = tensor_power(&v, 4).unwrap().module;
        let cert = decompose_module(&v4, 9).unwrap();
        let back = DecompositionCertificate::from_json(&cert.to_json(true)).unwrap();
        assert!(back.validate().unwrap().ok());
        assert!(cert.to_json(false).get("module").is_none());
    }

    #[test]
    fn isomorphism_and_cells() {
        let v = natural_module(3).unwrap();
        let fv = frobenius_twist(&v).unwrap();
        assert!(is_isomorphic(&fv, &simple_module(3, 3).unwrap(), 1).unwrap().is_isomorphic());
        let one = WeightModule::trivial(v.field());
        let two = crate::slmod::direct_sum(&[one.clone(), one.clone()]).unwrap().module;
        assert!(!is_isomorphic(&v, &two, 1).unwrap().is_isomorphic());
        let vv = tensor_power(&v, 2).unwrap().module;
        assert_eq!(object_cell(&vv, 1).unwrap().cell, 0);
        assert_eq!(object_cell(&steinberg(3, 1).unwrap(), 1).unwrap().cell, 1);
        assert_eq!(object_cell(&one, 1).unwrap().cell, 0);
    }

    #[test]
    fn fitting_fallback_splits_a_sum() {
        let v = natural_module(3).unwrap();
        let fv = frobenius_twist(&v).unwrap();
        let s = crate::slmod::direct_sum(&[v.clone(), fv]).unwrap().module;
        let cert = fitting_decomposition(&s, 3).unwrap();
        assert_eq!(cert.summands.len(), 2);
        let chk = cert.validate().unwrap();
        assert!(chk.ok(), "{chk:?}");
    }
}
