use serde_json::{json, Map, Value};

use crate::characters::{exterior_char, gl_g, gl_restriction_char, padic_dim_minus, Character};
use crate::decompose::{decompose_module, is_isomorphic};
use crate::error::{Error, Result};
use crate::exactcore::{lp_eval_cyclotomic, Field};
use crate::slmod::{
    check_exact, simple_tilting, split_sequence, steinberg, tensor, tilting_module, ExteriorTower, WeightModule,
};

use super::{diagram::verify_diagram_split, Status, VerificationReport, VerifyOptions};

fn pow(p: u32, k: u32) -> Result<u64> {
    (p as u64).checked_pow(k).ok_or_else(|| Error::Precondition(format!("{p}^{k} overflows")))
}

fn require_odd(p: u32) -> Result<()> {
    if p < 3 || !crate::exactcore::is_prime(p as u64) {
        return Err(Error::Precondition(format!("p = {p} must be an odd prime")));
    }
    Ok(())
}

fn matrix_json(m: &crate::exactcore::FFMatrix) -> Value {
    serde_json::to_value(m).expect("matrices serialize")
}

/// Splitting of the exterior presentations of the simple tilting module of
/// dimension `m` after tensoring with `St_j`, for `2 <= i <= i_max`.
pub fn verify_splitpres(p: u32, j: u32, m: u64, i_max: usize, opts: &VerifyOptions) -> Result<VerificationReport> {
    require_odd(p)?;
    if m > pow(p, j)? {
        return Err(Error::Precondition(format!("dimension {m} exceeds {p}^{j}")));
    }
    let params = json!({ "p": p, "j": j, "m": m, "imax": i_max });
    let l = simple_tilting(p, m)?;
    let st = steinberg(p, j)?;
    let mut tower = ExteriorTower::new(&l)?;
    let mut status = Status::Pass;
    let mut rows = Vec::new();
    for i in 2..=i_max {
        let Some(seq) = tower.presentation(i)? else {
            rows.push(json!({ "i": i, "vanishing": true, "split": true }));
            continue;
        };
        let plain = check_exact(&seq)?;
        let tensored = seq.tensor_left(&st)?;
        let ex = check_exact(&tensored)?;
        let mut row = json!({
            "i": i,
            "dims": ex.dims,
            "exact": plain.exact,
            "tensored_exact": ex.exact,
            "rank_left": ex.rank_left,
            "rank_right": ex.rank_right,
        });
        let ok = if !plain.exact || !ex.exact {
            false
        } else {
            match split_sequence(&tensored) {
                Ok(Some(s)) => {
                    let verified = s.verify(&tensored)?;
                    row["split"] = json!(verified);
                    if opts.witness {
                        row["sigma"] = matrix_json(&s.sigma.matrix);
                        row["tau"] = matrix_json(&s.tau.matrix);
                    }
                    verified
                }
                Ok(None) => {
                    row["split"] = json!(false);
                    false
                }
                Err(e) if matches!(Status::from_error(&e), Status::Inconclusive) => {
                    row["split"] = Value::Null;
                    row["note"] = json!(e.to_string());
                    status = status.combine(Status::Inconclusive);
                    true
                }
                Err(e) => return Err(e),
            }
        };
        status = status.combine(Status::from_bool(ok));
        rows.push(row);
    }
    Ok(VerificationReport::new("splitpres", params, status, json!({ "steinberg_dim": st.dim(), "sequences": rows })))
}

/// Exterior powers of the simple tilting module `L` of dimension `m`: each
/// `∧^i L ⊗ St_{n-1}` is certified tilting, `∧^m L` is trivial, `∧^{m+1} L = 0`,
/// and the module characters match the character engine.
pub fn verify_thm_w(p: u32, n: u32, m: u64, i_max: usize, opts: &VerifyOptions) -> Result<VerificationReport> {
    require_odd(p)?;
    if n < 1 || m > pow(p, n - 1)? || m == 0 {
        return Err(Error::Precondition(format!("need 1 <= m <= {p}^{}", n.saturating_sub(1))));
    }
    let params = json!({ "p": p, "n": n, "m": m, "imax": i_max });
    let l = simple_tilting(p, m)?;
    let st = steinberg(p, n - 1)?;
    let lc = l.character();
    let mut tower = ExteriorTower::new(&l)?;
    let mut status = Status::Pass;
    let mut rows = Vec::new();
    for i in 0..=i_max {
        let w = tower.power(i)?;
        let char_ok = w.character() == exterior_char(&lc, i as u64)?;
        let mut row = json!({ "i": i, "dim": w.dim(), "character_matches": char_ok });
        let mut ok = char_ok;
        if w.dim() > 0 {
            let x = tensor(&w, &st)?;
            match decompose_module(&x, opts.seed) {
                Ok(cert) => {
                    let check = cert.validate()?;
                    row["tilting"] = json!(check.ok());
                    row["multiset"] = serde_json::to_value(cert.multiset()).unwrap();
                    if opts.witness {
                        row["certificate"] = cert.to_json(true);
                    }
                    ok &= check.ok();
                }
                Err(e) => {
                    row["tilting"] = json!(false);
                    row["error"] = json!(e.to_string());
                    let s = Status::from_error(&e);
                    status = status.combine(if s == Status::Inconclusive { s } else { Status::Fail });
                }
            }
        } else {
            row["tilting"] = json!(true);
        }
        status = status.combine(Status::from_bool(ok));
        rows.push(row);
    }
    let top = tower.power(m as usize)?;
    let one = WeightModule::trivial(Field::prime(p)?);
    let top_trivial = is_isomorphic(&top, &one, opts.seed)?.is_isomorphic();
    let above_zero = tower.power(m as usize + 1)?.dim() == 0;
    status = status.combine(Status::from_bool(top_trivial && above_zero));
    Ok(VerificationReport::new(
        "thm-w",
        params,
        status,
        json!({
            "steinberg_dim": st.dim(),
            "top_power_trivial": top_trivial,
            "next_power_zero": above_zero,
            "powers": rows,
        }),
    ))
}

/// `g(ω_{p^s}) = 0` exactly when `p^s <= m - 1`, and the restricted character
/// `g(x^p)/g(x)` does not vanish at `ω_{p^{j+1}}` whenever `p^j >= m`.
pub fn verify_gl_vanishing(p: u32, m: u64, s_max: u32) -> Result<VerificationReport> {
    require_odd(p)?;
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    let params = json!({ "p": p, "m": m, "smax": s_max });
    let g = gl_g(m);
    let mut ok = true;
    let mut rows = Vec::new();
    for s in 1..=s_max {
        let vanishes = lp_eval_cyclotomic(&g, p, s).is_zero();
        let predicted = pow(p, s)? < m;
        ok &= vanishes == predicted;
        rows.push(json!({ "s": s, "vanishes": vanishes, "predicted": predicted }));
    }
    let q = gl_restriction_char(p, m)?;
    let mut j0 = 0u32;
    while pow(p, j0)? < m {
        j0 += 1;
    }
    let mut nonvanishing = Vec::new();
    for j in j0..=j0 + 1 {
        let nonzero = !lp_eval_cyclotomic(q.poly(), p, j + 1).is_zero();
        ok &= nonzero;
        nonvanishing.push(json!({ "j": j, "root_order": pow(p, j + 1)?, "nonzero": nonzero }));
    }
    Ok(VerificationReport::new(
        "gl-vanishing",
        params,
        Status::from_bool(ok),
        json!({ "g_at_roots": rows, "restricted_character": nonvanishing }),
    ))
}

/// Dimensions of all exterior powers of a character, reduced mod `p`, for
/// `0 <= s < len`.
fn exterior_dims_mod(c: &Character, p: u32, len: usize) -> Result<Vec<u32>> {
    (0..len)
        .map(|s| {
            let d = exterior_char(c, s as u64)?.dim() % p;
            Ok(u32::try_from(d).expect("residue fits"))
        })
        .collect()
}

struct WedgeCase {
    label: u64,
    i: u64,
    j: u32,
    dim: u64,
}

fn wedge_cases(p: u32, n: u32) -> Result<Vec<WedgeCase>> {
    let mut out = Vec::new();
    for j in 0..=n - 2 {
        for i in 1..p as u64 {
            let d = i * pow(p, j)?;
            out.push(WedgeCase { label: d - 1, i, j, dim: d });
        }
    }
    let d = pow(p, n - 1)?;
    out.push(WedgeCase { label: d - 1, i: 1, j: n - 1, dim: d });
    out.sort_by_key(|c| c.label);
    Ok(out)
}

/// For the simple objects `V_{ip^j - 1}` and `V_{p^{n-1} - 1}`: the top exterior
/// power is trivial, higher ones vanish, and the p-adic dimension equals the
/// ordinary dimension.
pub fn verify_example_w(p: u32, n: u32) -> Result<VerificationReport> {
    require_odd(p)?;
    if n < 2 {
        return Err(Error::Precondition("n must be at least 2".into()));
    }
    let params = json!({ "p": p, "n": n });
    let len = pow(p, n)? as usize;
    let mut ok = true;
    let mut dims_minus = Map::new();
    let mut rows = Vec::new();
    for c in wedge_cases(p, n)? {
        let l = simple_tilting(p, c.dim)?;
        let lc = l.character();
        let top_is_one = exterior_char(&lc, c.dim)? == Character::one();
        let above_zero = (c.dim + 1..=c.dim + 2).all(|s| exterior_char(&lc, s).map(|x| x.is_zero()).unwrap_or(false));
        let dims = exterior_dims_mod(&lc, p, len)?;
        let digits = padic_dim_minus(p, &dims)?;
        let value = digits.value();
        let matches = value == c.dim.into();
        // module-level exterior powers where they are small
        let mut module_agrees = Value::Null;
        if c.dim <= 9 {
            let mut tower = ExteriorTower::new(&l)?;
            let mut agree = true;
            for s in 0..=c.dim as usize + 1 {
                agree &= tower.power(s)?.character() == exterior_char(&lc, s as u64)?;
            }
            module_agrees = json!(agree);
            ok &= agree;
        }
        ok &= top_is_one && above_zero && matches;
        dims_minus.insert(format!("V{}", c.label), value.to_string().parse::<serde_json::Number>().map(Value::Number).unwrap_or(Value::Null));
        rows.push(json!({
            "object": format!("V{}", c.label),
            "i": c.i,
            "j": c.j,
            "top_power_trivial": top_is_one,
            "higher_powers_zero": above_zero,
            "digits": digits,
            "module_level_agrees": module_agrees,
        }));
    }
    Ok(VerificationReport::new(
        "example-w",
        params,
        Status::from_bool(ok),
        json!({ "dim_minus": dims_minus, "objects": rows }),
    ))
}

/// Symmetric powers of `odd line ⊗ V_{ip^j-1}` through
/// `S^k(odd ⊗ X) ≅ odd^{⊗k} ⊗ ∧^k X`: nonzero at `k = ip^j`, zero at `k = ip^j + 1`.
pub fn verify_rem_mn(p: u32, n: u32) -> Result<VerificationReport> {
    require_odd(p)?;
    if n < 2 {
        return Err(Error::Precondition("n must be at least 2".into()));
    }
    let params = json!({ "p": p, "n": n });
    let shift = (p as u64 - 2) * pow(p, n - 1)?;
    let mut ok = true;
    let mut rows = Vec::new();
    for c in wedge_cases(p, n)? {
        let lc = simple_tilting(p, c.dim)?.character();
        let object = format!("V{}", shift + c.label);
        for (k, expect_nonzero) in [(0, true), (c.dim, true), (c.dim + 1, false)] {
            let nonzero = !exterior_char(&lc, k)?.is_zero();
            ok &= nonzero == expect_nonzero;
            rows.push(json!({
                "object": object,
                "k": k,
                "symmetric_power_nonzero": nonzero,
                "expected_nonzero": expect_nonzero,
                "via": format!("wedge^{k} V{}", c.label),
            }));
        }
    }
    Ok(VerificationReport::new("rem-mn", params, Status::from_bool(ok), json!({ "powers": rows })))
}

/// Tabulates `2s + (i-2)(s+3-i) < p^{j+1}` for `2 <= i <= i_max` and the
/// fixed-s bound `s² + 10s + 1 < 4p^{j+1}`, which must imply every row. With
/// `module_check`, the presentations of `T_s` are split after `St_j ⊗ -` for
/// the rows where the bound holds.
pub fn verify_staysl2_bound(p: u32, s: u64, j: u32, i_max: u64, module_check: bool) -> Result<VerificationReport> {
    require_odd(p)?;
    let params = json!({ "p": p, "s": s, "j": j, "imax": i_max, "modules": module_check });
    let bound = pow(p, j + 1)? as i128;
    let si = s as i128;
    let fixed = si * si + 10 * si + 1 < 4 * bound;
    let mut failing = Vec::new();
    let mut rows = Vec::new();
    let mut status = Status::Pass;
    let mut tower = if module_check { Some((ExteriorTower::new(&tilting_module(p, s)?)?, steinberg(p, j)?)) } else { None };
    for i in 2..=i_max {
        let ii = i as i128;
        let value = 2 * si + (ii - 2) * (si + 3 - ii);
        let holds = value < bound;
        if !holds {
            failing.push(i);
        }
        let mut row = json!({ "i": i, "value": value.to_string(), "bound": bound.to_string(), "holds": holds });
        if let (true, Some((tw, st))) = (holds, tower.as_mut()) {
            let split = match tw.presentation(i as usize)? {
                None => true,
                Some(seq) => {
                    let t = seq.tensor_left(st)?;
                    match split_sequence(&t)? {
                        Some(sp) => sp.verify(&t)?,
                        None => false,
                    }
                }
            };
            row["module_split"] = json!(split);
            status = status.combine(Status::from_bool(split));
        }
        rows.push(row);
    }
    status = status.combine(Status::from_bool(!fixed || failing.is_empty()));
    Ok(VerificationReport::new(
        "staysl2",
        params,
        status,
        json!({ "fixed_s_bound_holds": fixed, "failing_i": failing, "rows": rows }),
    ))
}

/// The instance-level splitting: exterior powers of `St_{n-1}` plus the
/// diagram section.
pub fn verify_gr_instance(p: u32, n: u32, opts: &VerifyOptions) -> Result<VerificationReport> {
    require_odd(p)?;
    if n < 2 {
        return Err(Error::Precondition("n must be at least 2".into()));
    }
    let m = pow(p, n - 1)?;
    let params = json!({ "p": p, "n": n });
    let thm = verify_thm_w(p, n, m, m as usize + 1, opts)?;
    let (diag_status, diag) = match verify_diagram_split(p, n, opts) {
        Ok(r) => (r.status, serde_json::to_value(&r).unwrap()),
        Err(e) => {
            let s = Status::from_error(&e);
            if s == Status::Fail {
                return Err(e);
            }
            (s, json!({ "status": s, "error": e.to_string() }))
        }
    };
    let status = match (thm.status, diag_status) {
        (Status::Pass, Status::Pass) => Status::Pass,
        (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
        _ => Status::Inconclusive,
    };
    Ok(VerificationReport::new(
        "gr",
        params,
        status,
        json!({ "thm_w": serde_json::to_value(&thm).unwrap(), "diagram": diag }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::recheck_report;

    fn opts() -> VerifyOptions {
        VerifyOptions::default()
    }

    #[test]
    fn splitpres_examples() {
        for (m, imax) in [(3, 4), (2, 3)] {
            let r = verify_splitpres(3, 1, m, imax, &opts()).unwrap();
            assert!(r.passed(), "{}", r.to_json_string());
            assert!(recheck_report(&r.to_json_string()).unwrap());
        }
        let r = verify_splitpres(3, 1, 3, 1, &opts()).unwrap();
        assert!(r.passed());
        assert_eq!(r.witnesses["sequences"].as_array().unwrap().len(), 0);
        assert!(verify_splitpres(3, 1, 4, 3, &opts()).is_err());
    }

    #[test]
    fn thm_w_examples() {
        let r = verify_thm_w(3, 2, 3, 4, &opts()).unwrap();
        assert!(r.passed(), "{}", r.to_json_string());
        assert_eq!(r.witnesses["top_power_trivial"], true);
        assert!(recheck_report(&r.to_json_string()).unwrap());
        let r = verify_thm_w(3, 2, 1, 3, &opts()).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn gl_vanishing_examples() {
        let r = verify_gl_vanishing(3, 3, 2).unwrap();
        assert!(r.passed());
        assert!(r.witnesses["g_at_roots"].as_array().unwrap().iter().all(|x| x["vanishes"] == false));
        let r = verify_gl_vanishing(3, 4, 1).unwrap();
        assert!(r.passed());
        assert_eq!(r.witnesses["g_at_roots"][0]["vanishes"], true);
        let r = verify_gl_vanishing(5, 1, 3).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn example_w_and_rem_mn() {
        let r = verify_example_w(3, 2).unwrap();
        assert!(r.passed());
        assert_eq!(r.witnesses["dim_minus"], json!({ "V0": 1, "V1": 2, "V2": 3 }));
        let r = verify_example_w(5, 2).unwrap();
        assert_eq!(r.witnesses["dim_minus"]["V3"], 4);
        let r = verify_rem_mn(3, 2).unwrap();
        assert!(r.passed());
        let objects: Vec<&str> = r.witnesses["powers"].as_array().unwrap().iter().map(|x| x["object"].as_str().unwrap()).collect();
        assert!(objects.contains(&"V3") && objects.contains(&"V4") && objects.contains(&"V5"));
        assert!(verify_rem_mn(5, 2).unwrap().passed());
    }

    #[test]
    fn staysl2_examples() {
        let r = verify_staysl2_bound(5, 1, 0, 6, false).unwrap();
        assert!(r.passed());
        assert_eq!(r.witnesses["failing_i"], json!([]));
        let r = verify_staysl2_bound(3, 1, 0, 5, true).unwrap();
        assert!(r.passed(), "{}", r.to_json_string());
        assert_eq!(r.witnesses["failing_i"], json!([3]));
        assert_eq!(r.witnesses["fixed_s_bound_holds"], false);
    }

    #[test]
    fn gr_instances() {
        let r = verify_gr_instance(3, 2, &opts()).unwrap();
        assert!(r.passed());
        assert!(recheck_report(&r.to_json_string()).unwrap());
        let r = verify_gr_instance(5, 2, &opts()).unwrap();
        assert_eq!(r.status, Status::Inconclusive);
        assert_eq!(r.witnesses["thm_w"]["status"], "pass");
        assert_eq!(r.witnesses["diagram"]["status"], "out-of-budget");
    }
}
