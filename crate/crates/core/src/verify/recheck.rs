//! Re-validation of serialized reports: witnesses are parsed back and checked
//! against freshly constructed modules; witness-free claims are recomputed.

use serde_json::Value;

use crate::decompose::DecompositionCertificate;
use crate::error::{Error, Result};
use crate::exactcore::FFMatrix;
use crate::slmod::{
    evaluation_morphism, ps_presentation, simple_tilting, steinberg, tensor_many, dual, ExteriorTower, ModuleMap,
    SequenceSplitting, WeightModule,
};

use super::claims;
use super::{Status, VerificationReport};

fn param(r: &VerificationReport, key: &str) -> Result<u64> {
    r.params.get(key).and_then(Value::as_u64).ok_or_else(|| Error::Parse(format!("report parameter '{key}' missing")))
}

fn matrix(v: &Value) -> Result<FFMatrix> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))
}

/// True when the report passed and its witnesses re-check.
pub fn recheck_report(json: &str) -> Result<bool> {
    let r: VerificationReport = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    recheck(&r)
}

fn recheck(r: &VerificationReport) -> Result<bool> {
    if r.status != Status::Pass {
        return Ok(false);
    }
    let p = param(r, "p")? as u32;
    match r.claim.as_str() {
        "splitpres" => recheck_splitpres(r, p),
        "thm-w" => recheck_thm_w(r),
        "diagram" => recheck_diagram(r, p),
        "gr" => {
            let sub = |k: &str| -> Result<bool> {
                let v: VerificationReport =
                    serde_json::from_value(r.witnesses[k].clone()).map_err(|e| Error::Parse(e.to_string()))?;
                recheck(&v)
            };
            Ok(sub("thm_w")? && sub("diagram")?)
        }
        "gl-vanishing" => {
            let again = claims::verify_gl_vanishing(p, param(r, "m")?, param(r, "smax")? as u32)?;
            Ok(again.passed() && again.witnesses == r.witnesses)
        }
        "example-w" => {
            let again = claims::verify_example_w(p, param(r, "n")? as u32)?;
            Ok(again.passed() && again.witnesses == r.witnesses)
        }
        "rem-mn" => {
            let again = claims::verify_rem_mn(p, param(r, "n")? as u32)?;
            Ok(again.passed() && again.witnesses == r.witnesses)
        }
        "staysl2" => {
            let modules = r.params.get("modules").and_then(Value::as_bool).unwrap_or(false);
            let again = claims::verify_staysl2_bound(p, param(r, "s")?, param(r, "j")? as u32, param(r, "imax")?, modules)?;
            Ok(again.passed() && again.witnesses == r.witnesses)
        }
        other => Err(Error::Parse(format!("unknown claim '{other}'"))),
    }
}

fn recheck_splitpres(r: &VerificationReport, p: u32) -> Result<bool> {
    let l = simple_tilting(p, param(r, "m")?)?;
    let st = steinberg(p, param(r, "j")? as u32)?;
    let mut tower = ExteriorTower::new(&l)?;
    let rows = r.witnesses["sequences"].as_array().ok_or_else(|| Error::Parse("sequences missing".into()))?;
    for row in rows {
        let i = row["i"].as_u64().ok_or_else(|| Error::Parse("row index missing".into()))? as usize;
        let Some(seq) = tower.presentation(i)? else {
            if row.get("vanishing") != Some(&Value::Bool(true)) {
                return Ok(false);
            }
            continue;
        };
        let t = seq.tensor_left(&st)?;
        let (Some(sigma), Some(tau)) = (row.get("sigma"), row.get("tau")) else {
            return Err(Error::Parse(format!("row {i} carries no splitting witness")));
        };
        let s = SequenceSplitting {
            sigma: ModuleMap::new(t.x0.clone(), t.x1.clone(), matrix(sigma)?)?,
            tau: ModuleMap::new(t.x1.clone(), t.x2.clone(), matrix(tau)?)?,
        };
        if !s.verify(&t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn recheck_thm_w(r: &VerificationReport) -> Result<bool> {
    let rows = r.witnesses["powers"].as_array().ok_or_else(|| Error::Parse("powers missing".into()))?;
    for row in rows {
        if let Some(c) = row.get("certificate") {
            let cert = DecompositionCertificate::from_json(c)?;
            if !cert.validate()?.ok() || serde_json::to_value(cert.multiset()).unwrap() != row["multiset"] {
                return Ok(false);
            }
        } else if row["dim"].as_u64() != Some(0) {
            return Err(Error::Parse("nonzero power without certificate".into()));
        }
    }
    Ok(true)
}

fn recheck_diagram(r: &VerificationReport, p: u32) -> Result<bool> {
    let n = param(r, "n")? as u32;
    let m = (p as usize).pow(n - 1);
    let section = r.witnesses["section"].as_array().ok_or_else(|| Error::Parse("section missing".into()))?;
    let v = steinberg(p, n - 1)?;
    let w = tensor_many(&[dual(&v)?.module, v.clone()])?;
    let ps = ps_presentation(&w.module, m)?;
    let f = v.field();
    let one = WeightModule::trivial(f);
    let ev = evaluation_morphism(&v)?;
    let mut evm = FFMatrix::zeros(f, 1, ps.power.module.dim());
    for col in 0..ps.power.module.dim() {
        let val = ps.power.layout.tuple(col).iter().fold(1u32, |acc, &x| f.mul(acc, ev.matrix.get(0, x)));
        evm.set(0, col, val);
    }
    let q = &ps.quotient;
    let e = ModuleMap::new(q.module.clone(), one.clone(), evm.mul(&q.section))?;
    if e.compose(&q.projection)?.matrix != evm {
        return Ok(false);
    }
    let entries: Vec<u32> = section.iter().map(|x| x.as_u64().map(|v| v as u32)).collect::<Option<_>>().ok_or_else(|| Error::Parse("section entries".into()))?;
    if entries.len() != q.module.dim() {
        return Ok(false);
    }
    let s = ModuleMap::new(one, q.module.clone(), FFMatrix::column(f, entries))?;
    Ok(e.compose(&s)?.matrix.is_identity())
}
