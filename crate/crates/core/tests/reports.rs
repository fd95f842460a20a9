use serde_json::Value;

use verlinde_core::verify::{
    recheck_report, verify_diagram_split, verify_gl_vanishing, verify_splitpres, verify_staysl2_bound, verify_thm_w,
    Status, VerificationReport, VerifyOptions,
};

fn opts(seed: u64) -> VerifyOptions {
    VerifyOptions { seed, witness: true }
}

#[test]
fn reports_are_reproducible() {
    let runs: Vec<String> = (0..2)
        .map(|_| {
            [
                verify_splitpres(5, 1, 3, 4, &opts(1)).unwrap(),
                verify_thm_w(3, 2, 3, 5, &opts(1)).unwrap(),
                verify_gl_vanishing(5, 6, 3).unwrap(),
            ]
            .iter()
            .map(VerificationReport::to_json_string)
            .collect::<Vec<_>>()
            .join("\n")
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn other_seeds_still_pass() {
    for seed in [2, 3, 0xdead_beef] {
        let r = verify_splitpres(3, 1, 3, 5, &opts(seed)).unwrap();
        assert!(r.passed());
        assert!(recheck_report(&r.to_json_string()).unwrap());
    }
}

#[test]
fn reports_round_trip_through_json() {
    let r = verify_thm_w(5, 2, 4, 6, &opts(7)).unwrap();
    let back: VerificationReport = serde_json::from_str(&r.to_json_string()).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.timing_ms, None);
}

#[test]
fn tampered_splitting_is_rejected() {
    let r = verify_splitpres(3, 1, 2, 3, &opts(1)).unwrap();
    let mut v: Value = serde_json::from_str(&r.to_json_string()).unwrap();
    let rows = v["witnesses"]["sequences"].as_array_mut().unwrap();
    let row = rows.iter_mut().find(|row| row.get("sigma").is_some()).expect("a split row");
    // zero out the section
    for entry in row["sigma"]["entries"].as_array_mut().unwrap() {
        for x in entry.as_array_mut().unwrap() {
            *x = Value::from(0);
        }
    }
    let verdict = recheck_report(&v.to_string());
    assert!(!matches!(verdict, Ok(true)));
}

#[test]
fn tampered_diagram_section_is_rejected() {
    let r = verify_diagram_split(3, 2, &opts(1)).unwrap();
    assert_eq!(r.status, Status::Pass);
    let mut v: Value = serde_json::from_str(&r.to_json_string()).unwrap();
    for x in v["witnesses"]["section"].as_array_mut().unwrap() {
        *x = Value::from(0);
    }
    assert!(!recheck_report(&v.to_string()).unwrap());
}

#[test]
fn staysl2_rows_follow_the_inequality() {
    for (p, s, j) in [(3u32, 0u64, 0u32), (3, 2, 1), (5, 3, 1), (7, 4, 0)] {
        let r = verify_staysl2_bound(p, s, j, 8, false).unwrap();
        let bound = (p as i64).pow(j + 1);
        for row in r.witnesses["rows"].as_array().unwrap() {
            let i = row["i"].as_i64().unwrap();
            let value = 2 * s as i64 + (i - 2) * (s as i64 + 3 - i);
            assert_eq!(row["holds"], value < bound, "p={p} s={s} j={j} i={i}");
        }
        let fixed = s * s + 10 * s + 1 < 4 * bound as u64;
        assert_eq!(r.witnesses["fixed_s_bound_holds"], fixed);
    }
}
