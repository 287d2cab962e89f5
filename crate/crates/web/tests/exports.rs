use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn interval_script_tracks_union_and_probes() {
    let v = parse(diu_web::interval_union(16, "+ 0 4\n+ 2 6\n?\n- 0 4\n?  # after delete\n"));
    assert!(v.get("error").is_none(), "{v}");
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 5);
    assert_eq!(steps[2]["answer"], 6);
    assert_eq!(steps[4]["answer"], 4);
    assert_eq!(steps[1]["union"], serde_json::json!([[0, 6]]));
    assert!(steps[0]["tree_reads"].as_u64().unwrap() > 0);
    assert_eq!(steps[4]["line"], 5);
}

#[test]
fn interval_script_errors_name_the_line() {
    let v = parse(diu_web::interval_union(8, "+ 0 1\n+ 0\n"));
    assert!(v["error"].as_str().unwrap().starts_with("line 2"));
    let v = parse(diu_web::interval_union(8, "?\n- 1 2\n"));
    assert!(v["error"].as_str().unwrap().starts_with("line 2"));
}

#[test]
fn klee_matches_the_grid() {
    let v = parse(diu_web::klee("x1,x2,y1,y2\n0,4,0,4\n2,6,2,6\n10,11,0,1\n"));
    assert_eq!(v["area"], "29");
    assert_eq!(v["oracle"], 29);
    let csv = diu_web::random_rects_csv(30, 100, 4);
    let v = parse(diu_web::klee(&csv));
    assert_eq!(v["area"].as_str().unwrap(), v["oracle"].to_string());
}

#[test]
fn comm_game_verdicts() {
    let v = parse(diu_web::comm_game(2, 8, 11, 1, "0", ""));
    assert_eq!(v["outcome"]["verdict"], "accept", "{v}");
    assert_eq!(v["labels"].as_array().unwrap().len(), 7);
    let v = parse(diu_web::comm_game(2, 8, 11, 1, "0", "flip:0"));
    assert_eq!(v["outcome"]["verdict"], "reject");
    let v = parse(diu_web::comm_game(2, 6, 11, 1, "0", ""));
    assert!(v.get("error").is_some());
}
