//! Human-readable rendering of response documents.

use serde_json::Value;

use verlinde_core::characters::{Character, TiltingMultiset};
use verlinde_core::exactcore::LaurentPoly;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("-".into()),
        _ => None,
    }
}

fn params_line(params: &Value) -> String {
    params
        .as_object()
        .map(|m| m.iter().filter_map(|(k, v)| scalar(v).map(|s| format!("{k}={s}"))).collect::<Vec<_>>().join(" "))
        .unwrap_or_default()
}

fn character_text(v: &Value) -> String {
    let terms: Option<Vec<(i64, i64)>> = v
        .as_object()
        .map(|m| m.iter().map(|(k, c)| Some((k.parse().ok()?, c.as_i64()?))).collect())
        .unwrap_or(None);
    match terms.map(LaurentPoly::from_terms).map(Character::new) {
        Some(Ok(ch)) => ch.weyl_string(),
        _ => v.to_string(),
    }
}

fn report_text(v: &Value) -> String {
    let mut out = format!(
        "{} ({}): {}",
        v["claim"].as_str().unwrap_or("?"),
        params_line(&v["params"]),
        v["status"].as_str().unwrap_or("?")
    );
    if let Some(ms) = v["timing_ms"].as_u64() {
        out.push_str(&format!(" in {ms} ms"));
    }
    if let Some(w) = v["witnesses"].as_object() {
        for (k, x) in w {
            if let Some(s) = scalar(x) {
                out.push_str(&format!("\n  {k}: {s}"));
            } else if k == "dim_minus" || k == "dims" {
                out.push_str(&format!("\n  {k}: {x}"));
            }
        }
    }
    out
}

pub fn text(command: &str, v: &Value) -> String {
    match command {
        "char" => character_text(v),
        "decompose" => {
            let multiset = serde_json::from_value::<TiltingMultiset>(v["multiset"].clone())
                .map(|m| m.to_string())
                .unwrap_or_else(|_| v["multiset"].to_string());
            let certified = if v["certified"] == true { "certified" } else { "not certified" };
            format!("{} = {multiset} ({certified})", v["provenance"].as_str().unwrap_or("M"))
        }
        "cell" => format!("cell {}", v["cell"]),
        "padic-dim" => {
            let p = v["p"].as_u64().unwrap_or(0);
            let digits: Vec<u64> = v["digits"].as_array().map(|a| a.iter().filter_map(Value::as_u64).collect()).unwrap_or_default();
            let value = digits.iter().rev().fold(0u128, |acc, &d| acc * p as u128 + d as u128);
            let shown: Vec<String> = digits.iter().map(u64::to_string).collect();
            format!("{value} (digits {} in base {p}, least significant first)", shown.join(" "))
        }
        "verify" => report_text(v),
        _ => v.to_string(),
    }
}

pub fn cache_text(v: &Value) -> String {
    if let Some(entries) = v["entries"].as_array() {
        let mut out = format!("{} ({} entries)", v["root"].as_str().unwrap_or(""), entries.len());
        for e in entries {
            match e["key"].as_str() {
                Some(key) => out.push_str(&format!("\n{}  {}  {}", &key[..12.min(key.len())], e["created"], e["request"].as_str().unwrap_or(""))),
                None => out.push_str(&format!("\nbad  {}  {}", e["path"].as_str().unwrap_or(""), e["error"].as_str().unwrap_or(""))),
            }
        }
        out
    } else {
        format!("kept {}, removed {}", v["kept"], v["removed"])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn characters_in_weyl_basis() {
        assert_eq!(text("char", &json!({ "3": 1, "1": 2, "-1": 2, "-3": 1 })), "χ3 + χ1");
        assert_eq!(text("char", &json!({ "1": 1, "-1": 1 })), "χ1");
    }

    #[test]
    fn padic_value() {
        assert_eq!(text("padic-dim", &json!({ "p": 3, "digits": [0, 1] })), "3 (digits 0 1 in base 3, least significant first)");
    }

    #[test]
    fn report_lines() {
        let r = json!({ "claim": "gl-vanishing", "params": { "p": 3, "m": 3 }, "status": "pass", "witnesses": { "ok": true }, "timing_ms": null });
        assert_eq!(text("verify", &r), "gl-vanishing (p=3 m=3): pass\n  ok: true");
    }
}
