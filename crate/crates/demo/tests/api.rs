use serde_json::Value;

use pubmarket_demo::{habermann, replicator, solve_game, MAX_DEMO_STEPS};

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn solves_a_coordination_game_exactly() {
    let out = json(
        &solve_game(
            r#"{"row_strategies": ["a", "b"], "col_strategies": ["x", "y"],
                "payoffs": [[[3, 2], [0, 0]], [["1/2", -1], [2, "5/2"]]]}"#,
        )
        .unwrap(),
    );
    let pure = out["pure_nash"].as_array().unwrap();
    assert_eq!(pure.len(), 2);
    assert_eq!(pure[1]["payoffs"], serde_json::json!(["2", "5/2"]));
    let mixed: Vec<&Value> = out["mixed"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|m| m["kind"] == "mixed")
        .collect();
    assert_eq!(mixed.len(), 1);
    // 3q = q/2 + 2(1 - q) and 3p - 1 = 5/2 (1 - p).
    assert_eq!(mixed[0]["row"], serde_json::json!(["7/11", "4/11"]));
    assert_eq!(mixed[0]["col"], serde_json::json!(["4/9", "5/9"]));
}

#[test]
fn rejects_malformed_games() {
    assert!(solve_game("not json").is_err());
    assert!(solve_game(
        r#"{"row_strategies": ["a"], "col_strategies": ["x", "y"], "payoffs": [[[1, 1]]]}"#
    )
    .is_err());
}

#[test]
fn large_games_skip_mixed_enumeration() {
    let n = 6;
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let payoffs: Vec<Vec<[i64; 2]>> = (0..n)
        .map(|i| (0..n).map(|j| [(i * j) as i64, (i + j) as i64]).collect())
        .collect();
    let input =
        serde_json::json!({"row_strategies": names, "col_strategies": names, "payoffs": payoffs});
    let out = json(&solve_game(&input.to_string()).unwrap());
    assert_eq!(out["mixed_skipped"], true);
    assert!(!out["pure_nash"].as_array().unwrap().is_empty());
}

#[test]
fn replicator_trajectory_stays_on_the_simplex_and_reaches_oa() {
    let out = json(&replicator(r#"{"init": [0.2, 0.5, 0.3], "steps": 800}"#).unwrap());
    let states = out["states"].as_array().unwrap();
    assert_eq!(states.len(), 801);
    for s in states {
        let sum: f64 = s
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }
    assert_eq!(out["converged_to"], "OA");
    assert_eq!(out["labels"], serde_json::json!(["OA", "C", "H"]));
}

#[test]
fn replicator_accepts_custom_payoffs_and_bounds_steps() {
    // C pays most against everything.
    let input =
        r#"{"payoffs": [[1, 1, 1], [3, 3, 3], [2, 2, 2]], "init": [0.4, 0.3, 0.3], "steps": 400}"#;
    let out = json(&replicator(input).unwrap());
    assert_eq!(out["converged_to"], "C");
    let too_many = format!(
        r#"{{"init": [0.4, 0.3, 0.3], "steps": {}}}"#,
        MAX_DEMO_STEPS + 1
    );
    assert!(replicator(&too_many).is_err());
    assert!(replicator(r#"{"init": [0.5, 0.6, 0.2], "steps": 10}"#).is_err());
}

#[test]
fn habermann_default_cycles_and_has_one_mixed_equilibrium() {
    let out =
        json(&habermann(r#"{"R": 10, "r": 2, "I": 5, "tau": 1, "L": 2, "G": 3, "P": 4}"#).unwrap());
    assert_eq!(
        out["br_path"],
        "Cycle period 4: (s1,p1)→(s2,p1)→(s2,p2)→(s1,p2)→…"
    );
    assert_eq!(out["cycles"], true);
    assert!(out["equilibria"]["pure_nash"]
        .as_array()
        .unwrap()
        .is_empty());
    let mixed = &out["equilibria"]["mixed"][0];
    assert_eq!(mixed["row"], serde_json::json!(["6/13", "7/13"]));
    assert_eq!(mixed["col"], serde_json::json!(["2/3", "1/3"]));
    for key in [
        "author_leaves_open",
        "author_returns_to_open",
        "publisher_returns_to_open",
    ] {
        assert_eq!(out["conditions"][key], true, "{key}");
    }
}

#[test]
fn habermann_without_the_cycle() {
    // tau > r + L/2: the author never leaves (s1, p1).
    let out =
        json(&habermann(r#"{"R": 10, "r": 1, "I": 5, "tau": 3, "L": 2, "G": 3, "P": 4}"#).unwrap());
    assert_eq!(out["conditions"]["author_leaves_open"], false);
    assert_eq!(out["cycles"], false);
    assert!(out["br_path"]
        .as_str()
        .unwrap()
        .starts_with("Fixed point (s1,p1)"));
    assert!(habermann(r#"{"R": 10, "r": 2, "I": 5, "tau": 1, "L": 0, "G": 3, "P": 4}"#).is_err());
}
