use std::time::Instant;

use clap::{Args, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;

use verlinde_core::characters::{
    cell_index, exterior_char, gl_restriction_char, padic_dim_minus, simple_char, tilting_char, weyl_char, Character,
};
use verlinde_core::decompose::{decompose_or_fallback, object_cell, DecompositionCertificate};
use verlinde_core::slmod::{parse_module_expr, Module};
use verlinde_core::verify::{
    recheck_report, verify_diagram_split, verify_example_w, verify_gl_vanishing, verify_gr_instance, verify_rem_mn,
    verify_splitpres, verify_staysl2_bound, verify_thm_w, Status, VerificationReport, VerifyOptions,
};
use verlinde_core::Error;

use crate::Command;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cache: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(Error::Precondition(_) | Error::Parse(_)) => 2,
            CliError::Core(Error::Resource { .. }) => 3,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CharKind {
    Weyl,
    Simple,
    Tilting,
    GlRestriction,
}

impl CharKind {
    pub fn name(self) -> &'static str {
        match self {
            CharKind::Weyl => "weyl",
            CharKind::Simple => "simple",
            CharKind::Tilting => "tilting",
            CharKind::GlRestriction => "gl-restriction",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    Splitpres,
    ThmW,
    GlVanishing,
    Diagram,
    ExampleW,
    RemMn,
    Staysl2,
    Gr,
}

impl Claim {
    pub fn name(self) -> &'static str {
        match self {
            Claim::Splitpres => "splitpres",
            Claim::ThmW => "thm-w",
            Claim::GlVanishing => "gl-vanishing",
            Claim::Diagram => "diagram",
            Claim::ExampleW => "example-w",
            Claim::RemMn => "rem-mn",
            Claim::Staysl2 => "staysl2",
            Claim::Gr => "gr",
        }
    }
}

#[derive(Args, Debug, Default)]
pub struct Params {
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub j: Option<u32>,
    #[arg(long)]
    pub s: Option<u64>,
    #[arg(long)]
    pub imax: Option<u64>,
    #[arg(long)]
    pub smax: Option<u32>,
    /// Module expression such as `T(3)*fr(V)^2 + sym(St(1),2)`.
    #[arg(long)]
    pub module: Option<String>,
    /// Exterior dimensions mod p, comma separated, starting at s = 0.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<u32>>,
    /// Omit matrices from certificates and reports.
    #[arg(long)]
    pub no_witness: bool,
    /// Run the module-level splitting check as well (staysl2).
    #[arg(long)]
    pub modules: bool,
}

impl Params {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        let mut put = |k: &str, v: Option<Value>| {
            if let Some(v) = v {
                m.insert(k.into(), v);
            }
        };
        put("p", self.p.map(|x| json!(x)));
        put("n", self.n.map(|x| json!(x)));
        put("m", self.m.map(|x| json!(x)));
        put("j", self.j.map(|x| json!(x)));
        put("s", self.s.map(|x| json!(x)));
        put("imax", self.imax.map(|x| json!(x)));
        put("smax", self.smax.map(|x| json!(x)));
        put("module", self.module.as_ref().map(|x| json!(x)));
        put("dims", self.dims.as_ref().map(|x| json!(x)));
        put("no_witness", self.no_witness.then_some(json!(true)));
        put("modules", self.modules.then_some(json!(true)));
        Value::Object(m)
    }

    fn witness(&self) -> bool {
        !self.no_witness
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("{what} needs --{flag}")))
}

fn usize_of(v: u64) -> Result<usize, CliError> {
    usize::try_from(v).map_err(|_| CliError::Usage(format!("{v} is too large")))
}

/// Exponent -> integer coefficient, highest exponent first.
pub fn character_json(ch: &Character) -> Value {
    let mut m = Map::new();
    for (e, c) in ch.poly().terms().rev() {
        m.insert(e.to_string(), Value::Number(c.to_string().parse().expect("integers are JSON numbers")));
    }
    Value::Object(m)
}

fn module_of(params: &Params, p: u32, what: &str) -> Result<Module, CliError> {
    let expr = match (&params.module, params.m) {
        (Some(e), _) => parse_module_expr(e)?,
        (None, Some(m)) => parse_module_expr(&format!("V^{m}"))?,
        (None, None) => return Err(CliError::Usage(format!("{what} needs --module or --m"))),
    };
    Ok(expr.build(p)?)
}

pub fn compute(command: &Command, seed: u64, timing: bool) -> Result<Value, CliError> {
    match command {
        Command::Char { kind, params } => {
            let m = need(params.m, "m", "char")?;
            let ch = match kind {
                CharKind::Weyl => weyl_char(m),
                CharKind::Simple => simple_char(need(params.p, "p", "char simple")?, m)?,
                CharKind::Tilting => {
                    let p = need(params.p, "p", "char tilting")?;
                    if p < 3 || !verlinde_core::exactcore::is_prime(p as u64) {
                        return Err(CliError::Usage(format!("p = {p} must be an odd prime")));
                    }
                    tilting_char(p, m)
                }
                CharKind::GlRestriction => gl_restriction_char(need(params.p, "p", "char gl-restriction")?, m)?,
            };
            Ok(character_json(&ch))
        }
        Command::Decompose { params } => {
            let p = need(params.p, "p", "decompose")?;
            let module = module_of(params, p, "decompose")?;
            Ok(decompose_or_fallback(&module, seed)?.to_json(params.witness()))
        }
        Command::Cell { params } => {
            let p = need(params.p, "p", "cell")?;
            let cell = match (&params.module, params.m) {
                (Some(_), _) => object_cell(&module_of(params, p, "cell")?, seed)?,
                (None, Some(m)) => cell_index(p, m)?,
                (None, None) => return Err(CliError::Usage("cell needs --m or --module".into())),
            };
            Ok(json!({ "cell": cell.cell }))
        }
        Command::PadicDim { params } => {
            let p = need(params.p, "p", "padic-dim")?;
            let dims = match (&params.dims, params.m) {
                (Some(d), _) => d.clone(),
                (None, Some(m)) => {
                    let n = params.n.unwrap_or(2);
                    let len = (p as u64).checked_pow(n).ok_or_else(|| CliError::Usage("p^n overflows".into()))?;
                    let ch = simple_char(p, m)?;
                    (0..len)
                        .map(|s| {
                            let d = exterior_char(&ch, s)?.dim() % p;
                            Ok(u32::try_from(d).expect("residues fit"))
                        })
                        .collect::<Result<Vec<u32>, Error>>()?
                }
                (None, None) => return Err(CliError::Usage("padic-dim needs --dims or --m".into())),
            };
            Ok(serde_json::to_value(padic_dim_minus(p, &dims)?).expect("digits serialize"))
        }
        Command::Verify { claim, params } => {
            let start = Instant::now();
            let mut report = verify(*claim, params, seed)?;
            if timing {
                report.timing_ms = Some(start.elapsed().as_millis() as u64);
            }
            Ok(serde_json::to_value(&report).expect("reports serialize"))
        }
        Command::Cache { .. } => unreachable!("cache commands do not compute"),
    }
}

fn verify(claim: Claim, params: &Params, seed: u64) -> Result<VerificationReport, CliError> {
    let what = claim.name();
    let p = need(params.p, "p", what)?;
    let opts = VerifyOptions { seed, witness: params.witness() };
    let report = match claim {
        Claim::Splitpres => verify_splitpres(
            p,
            params.j.unwrap_or(1),
            need(params.m, "m", what)?,
            usize_of(need(params.imax, "imax", what)?)?,
            &opts,
        )?,
        Claim::ThmW => verify_thm_w(
            p,
            need(params.n, "n", what)?,
            need(params.m, "m", what)?,
            usize_of(need(params.imax, "imax", what)?)?,
            &opts,
        )?,
        Claim::GlVanishing => verify_gl_vanishing(p, need(params.m, "m", what)?, need(params.smax, "smax", what)?)?,
        Claim::Diagram => verify_diagram_split(p, need(params.n, "n", what)?, &opts)?,
        Claim::ExampleW => verify_example_w(p, need(params.n, "n", what)?)?,
        Claim::RemMn => verify_rem_mn(p, need(params.n, "n", what)?)?,
        Claim::Staysl2 => verify_staysl2_bound(
            p,
            need(params.s, "s", what)?,
            params.j.unwrap_or(0),
            need(params.imax, "imax", what)?,
            params.modules,
        )?,
        Claim::Gr => verify_gr_instance(p, need(params.n, "n", what)?, &opts)?,
    };
    Ok(report)
}

/// Checks a cached payload before it is trusted.
pub fn revalidate(command: &str, params: &Params, payload: &Value) -> Result<(), String> {
    match command {
        "verify" => {
            let report: VerificationReport = serde_json::from_value(payload.clone()).map_err(|e| e.to_string())?;
            if report.passed() && params.witness() && !recheck_report(&report.to_json_string()).map_err(|e| e.to_string())? {
                return Err("report witnesses do not re-check".into());
            }
            Ok(())
        }
        "decompose" if params.witness() => {
            let cert = DecompositionCertificate::from_json(payload).map_err(|e| e.to_string())?;
            if !cert.validate().map_err(|e| e.to_string())?.ok() {
                return Err("certificate does not validate".into());
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

pub fn exit_code(command: &str, payload: &Value) -> u8 {
    if command != "verify" {
        return 0;
    }
    match serde_json::from_value::<Status>(payload["status"].clone()) {
        Ok(Status::Pass) => 0,
        Ok(Status::OutOfBudget) => 3,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tilting_character_as_integers() {
        assert_eq!(character_json(&tilting_char(3, 3)).to_string(), r#"{"3":1,"1":2,"-1":2,"-3":1}"#);
    }

    #[test]
    fn params_omit_unset_flags() {
        let p = Params { p: Some(3), m: Some(8), ..Params::default() };
        assert_eq!(p.to_json().to_string(), r#"{"p":3,"m":8}"#);
    }

    #[test]
    fn exit_codes_follow_status() {
        assert_eq!(exit_code("verify", &json!({ "status": "pass" })), 0);
        assert_eq!(exit_code("verify", &json!({ "status": "fail" })), 1);
        assert_eq!(exit_code("verify", &json!({ "status": "inconclusive" })), 1);
        assert_eq!(exit_code("verify", &json!({ "status": "out-of-budget" })), 3);
        assert_eq!(exit_code("cell", &json!({ "cell": 2 })), 0);
        assert_eq!(CliError::Core(Error::Resource { what: "x".into(), dim: 2, cap: 1 }).exit_code(), 3);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(Error::NotTilting).exit_code(), 1);
    }
}
