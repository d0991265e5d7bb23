use serde_json::Value;
use toroidal_demo::{analyze, cone_summary, sl2_f, weyl_orbit};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

fn sorted(v: &Value) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = serde_json::from_value(v.clone()).unwrap();
    out.sort();
    out
}

#[test]
fn cone_summary_of_index_two_cone() {
    let v = parse(cone_summary("[[1,0],[1,2]]"));
    assert_eq!(sorted(&v["dual"]), vec![vec![0, 1], vec![2, -1]]);
    assert_eq!(sorted(&v["hilbert_basis"]), vec![vec![0, 1], vec![1, 0], vec![2, -1]]);
    assert_eq!(v["index"], 2);
    assert_eq!(v["smooth"], false);
    assert!(parse(cone_summary("[[1,0],[-1,0]]"))["error"].is_string());
    assert!(parse(cone_summary("nope"))["error"].is_string());
}

#[test]
fn a2_chamber_orbit_is_proper() {
    let v = parse(weyl_orbit(r#"{"type": "A", "rank": 2}"#, r#"{"cones": [{"rays": [[-2,-1],[-1,-2]]}]}"#));
    assert_eq!(v["proper"], true);
    assert_eq!(v["maximal_cones"].as_array().unwrap().len(), 6);
    let walls = parse(weyl_orbit(r#"{"type": "A", "rank": 2}"#, r#"{"cones": [{"rays": [[-2,-1]]}]}"#));
    assert_eq!(walls["proper"], false);
}

#[test]
fn analyze_matches_cli_report() {
    let v = parse(analyze(r#"{"type": "A", "rank": 1}"#, r#"{"cones": [{"rays": [[-1]]}]}"#));
    assert_eq!(v["chart_count"], 2);
    assert_eq!(v["proper"], true);
}

#[test]
fn sl2_f_on_torus_and_boundary() {
    let v = parse(sl2_f("1", "1", "1"));
    assert_eq!(v["x"], "-1/2");
    assert_eq!(v["y"], "-1/2");
    assert_eq!(v["group_element"], serde_json::json!([["2", "-1"], ["-1", "1"]]));
    let b = parse(sl2_f("2", "boundary", "3"));
    // at the boundary D = xy, so the slots become -1/x and -1/y
    assert_eq!(b["x"], "-1/2");
    assert_eq!(b["y"], "-1/3");
    assert_eq!(b["closed_orbit"], true);
    assert!(parse(sl2_f("0", "boundary", "3"))["outside_domain"].is_string());
    assert!(parse(sl2_f("a", "1", "1"))["error"].is_string());
}
