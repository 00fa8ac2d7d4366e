use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use pubmarket::audit::StatusKind;
use pubmarket::game::{ParetoStatus, StrategyProfile};
use pubmarket::models::{
    canonical_publishing_instantiation, hanauske_game, publishing_game_3x3, HanauskeParams,
};
use pubmarket::rat;
use pubmarket_cli::builtins::{builtin, BUILTIN_NAMES};
use pubmarket_cli::report::ReportDocument;
use pubmarket_cli::scenario::{GameSpec, ScenarioFile};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn pubmarket(args: &[&str], stdin: Option<&str>) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pubmarket"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn examples_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("docs/examples")
}

fn machine(args: &[&str], stdin: Option<&str>) -> ReportDocument {
    let mut full = args.to_vec();
    full.extend(["--format", "machine"]);
    let run = pubmarket(&full, stdin);
    assert_eq!(run.code, 0, "{}", run.stderr);
    ReportDocument::from_machine(&run.stdout).expect("machine output parses")
}

#[test]
fn canonical_publishing_has_a_unique_pareto_dominated_equilibrium() {
    let doc = machine(&["solve", "publishing_canonical"], None);
    let eq = doc.equilibria.expect("equilibria section").pure_nash;
    assert_eq!(eq.len(), 1);
    assert_eq!(eq[0].profile, ["OA".to_string(), "OA".to_string()]);
    assert!(!eq[0].pareto_optimal);
    assert_eq!(
        eq[0].pareto_dominated_by,
        vec![["C".to_string(), "OA".to_string()]]
    );

    // Same answer straight from the library.
    let g = publishing_game_3x3(&canonical_publishing_instantiation()).unwrap();
    assert_eq!(g.pure_nash(), vec![StrategyProfile::new(0, 0)]);
    assert_eq!(
        g.pareto_status(StrategyProfile::new(0, 0)).unwrap(),
        ParetoStatus::DominatedBy(vec![StrategyProfile::new(1, 0)])
    );

    let text = pubmarket(&["solve", "publishing_canonical"], None).stdout;
    assert!(
        text.contains("(OA, OA) payoffs (6, 3); Pareto-dominated by {(C, OA)}"),
        "{text}"
    );
}

#[test]
fn habermann_default_has_only_the_mixed_equilibrium() {
    let run = pubmarket(&["solve", "habermann_default"], None);
    assert_eq!(run.code, 0);
    assert!(
        run.stdout.contains("no pure Nash equilibrium"),
        "{}",
        run.stdout
    );
    assert!(run.stdout.contains("p = 6/13, q = 2/3"), "{}", run.stdout);
}

#[test]
fn empty_or_malformed_scenarios_are_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, "").unwrap();
    let run = pubmarket(&["solve", empty.to_str().unwrap()], None);
    assert_eq!(run.code, 1);
    assert!(
        run.stderr.contains("parse error at line 1, column 1"),
        "{}",
        run.stderr
    );

    let broken = dir.path().join("broken.json");
    std::fs::write(
        &broken,
        "{\n  \"schema_version\": 1,\n  \"name\": oops\n}\n",
    )
    .unwrap();
    let run = pubmarket(&["solve", broken.to_str().unwrap()], None);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("line 3"), "{}", run.stderr);

    let run = pubmarket(&["solve", "-"], Some(""));
    assert_eq!(run.code, 1);
}

#[test]
fn ragged_matrix_is_rejected() {
    let text = r#"{"schema_version": 1, "name": "x", "game": {"kind": "concrete",
        "row_player": "r", "col_player": "c", "row_strategies": ["a", "b"], "col_strategies": ["x", "y"],
        "payoffs": [[[1, 1], [0, 0]], [[0, 0]]]}}"#;
    let run = pubmarket(&["solve", "-"], Some(text));
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("shape"), "{}", run.stderr);
}

#[test]
fn too_many_rankings_exits_with_two() {
    let text = r#"{"schema_version": 1, "name": "wide", "game": {"kind": "symbolic",
        "row_player": "r", "col_player": "c", "row_strategies": ["a", "b", "c"], "col_strategies": ["x", "y", "z"],
        "cells": [[["a1", "0"], ["a2", "0"], ["a3", "0"]],
                  [["a4", "0"], ["a5", "0"], ["a6", "0"]],
                  [["a7", "0"], ["a8", "0"], ["a9", "0"]]],
        "constraints": []}}"#;
    let run = pubmarket(&["solve", "-"], Some(text));
    assert_eq!(run.code, 2, "{}", run.stderr);
    assert!(run.stderr.contains("limit"), "{}", run.stderr);
}

#[test]
fn audit_reports_nine_claims_with_documented_statuses() {
    for flag in ["true", "false"] {
        let doc = machine(&["audit", "--nonnegativity", flag], None);
        let report = doc.audit.expect("audit section");
        assert_eq!(report.records.len(), 9);
        assert!(report.matches_documentation(), "flag {flag}");
    }
    let report = machine(&["audit"], None).audit.unwrap();
    assert!(report.nonnegativity);
    let kinds: Vec<StatusKind> = report.records.iter().map(|r| r.status.kind()).collect();
    use StatusKind::*;
    assert_eq!(
        kinds,
        vec![
            HoldsConditionally,
            FailsWithCounterexample,
            FailsWithCounterexample,
            FailsWithCounterexample,
            HoldsForAll,
            FailsWithCounterexample,
            FailsWithCounterexample,
            TextualInconsistency,
            HoldsForAll
        ]
    );
}

#[test]
fn audit_machine_output_round_trips_and_is_deterministic() {
    let a = pubmarket(&["audit", "--format", "machine"], None);
    let b = pubmarket(&["audit", "--format", "machine"], None);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let doc = ReportDocument::from_machine(&a.stdout).unwrap();
    assert_eq!(doc.schema_version, 1);
    assert_eq!(doc.to_machine(), a.stdout);

    let t1 = pubmarket(&["audit"], None);
    let t2 = pubmarket(&["audit"], None);
    assert_eq!(t1.stdout, t2.stdout);
    assert_eq!(
        t1.stdout.lines().filter(|l| l.starts_with("  C")).count(),
        9
    );
}

#[test]
fn solve_reports_are_deterministic_and_round_trip() {
    for name in BUILTIN_NAMES {
        let a = pubmarket(&["solve", name, "--format", "machine"], None);
        let b = pubmarket(&["solve", name, "--format", "machine"], None);
        assert_eq!(a.code, 0, "{name}: {}", a.stderr);
        assert_eq!(a.stdout, b.stdout, "{name}");
        let doc = ReportDocument::from_machine(&a.stdout).unwrap();
        assert_eq!(doc.to_machine(), a.stdout, "{name}");
    }
}

#[test]
fn best_response_cycle_in_habermann_default() {
    let run = pubmarket(
        &["dynamics", "br", "habermann_default", "--start", "s1,p1"],
        None,
    );
    assert_eq!(run.code, 0);
    assert!(
        run.stdout
            .contains("Cycle period 4: (s1,p1)→(s2,p1)→(s2,p2)→(s1,p2)→…"),
        "{}",
        run.stdout
    );
    let run = pubmarket(
        &["dynamics", "br", "habermann_default", "--start", "s9,p1"],
        None,
    );
    assert_eq!(run.code, 1);
}

#[test]
fn shares_converge_to_open_access_and_export_the_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let run = pubmarket(
        &[
            "dynamics",
            "shares",
            "publishing_canonical",
            "--init",
            "1/3,1/3,1/3",
            "--h",
            "0",
            "--steps",
            "500",
            "--out",
            out.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.contains("converged_to=OA"), "{}", run.stdout);
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "step,x_oa,x_c,x_h");
    assert_eq!(lines.len(), 502);
    for line in &lines[1..] {
        let fields: Vec<f64> = line
            .split(',')
            .skip(1)
            .map(|f| f.parse().unwrap())
            .collect();
        assert!((fields.iter().sum::<f64>() - 1.0).abs() < 1e-9, "{line}");
    }
}

#[test]
fn off_simplex_initial_shares_are_domain_errors() {
    let run = pubmarket(
        &[
            "dynamics",
            "shares",
            "publishing_canonical",
            "--init",
            "0.5,0.6,0.2",
        ],
        None,
    );
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("simplex"), "{}", run.stderr);
    let run = pubmarket(
        &[
            "dynamics",
            "shares",
            "publishing_canonical",
            "--init",
            "1/2,1/2",
        ],
        None,
    );
    assert_eq!(run.code, 1);
}

#[test]
fn hanauske_model_pipes_into_solve() {
    let model = pubmarket(
        &[
            "model", "hanauske", "--r", "4", "--alpha", "1", "--beta", "2", "--delta", "1",
        ],
        None,
    );
    assert_eq!(model.code, 0);
    let doc = machine(&["solve", "-"], Some(&model.stdout));
    let eq = doc.equilibria.unwrap().pure_nash;
    let profiles: Vec<[String; 2]> = eq.into_iter().map(|e| e.profile).collect();
    assert_eq!(profiles, vec![["∅".to_string(), "∅".to_string()]]);

    let params = HanauskeParams::new(rat(4, 1), rat(1, 1), rat(2, 1), rat(1, 1));
    let direct = hanauske_game(&params).unwrap();
    let piped = ScenarioFile::parse(&model.stdout)
        .unwrap()
        .concrete_game()
        .unwrap();
    assert_eq!(piped, direct);
}

#[test]
fn canonical_publishing_model_matches_the_bundled_scenario() {
    let run = pubmarket(&["model", "publishing", "--canonical"], None);
    assert_eq!(run.code, 0);
    let emitted = ScenarioFile::parse(&run.stdout)
        .unwrap()
        .concrete_game()
        .unwrap();
    let bundled = builtin("publishing_canonical")
        .unwrap()
        .concrete_game()
        .unwrap();
    assert_eq!(emitted, bundled);
}

#[test]
fn model_domain_errors() {
    let run = pubmarket(&["model", "habermann", "--L", "0"], None);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("L > 0"), "{}", run.stderr);
    let run = pubmarket(&["model", "besancenot", "--mu", "3/4"], None);
    assert_eq!(run.code, 1);
    let run = pubmarket(
        &[
            "model", "hanauske", "--r", "4", "--alpha", "1", "--beta", "x", "--delta", "1",
        ],
        None,
    );
    assert_eq!(run.code, 1);
}

#[test]
fn usage_errors_exit_with_one_and_help_with_zero() {
    assert_eq!(pubmarket(&["frobnicate"], None).code, 1);
    assert_eq!(pubmarket(&["solve"], None).code, 1);
    assert_eq!(pubmarket(&["solve", "no_such_scenario"], None).code, 1);
    let help = pubmarket(&["--help"], None);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("solve"));
}

#[test]
fn builtins_round_trip_through_the_scenario_format() {
    let listed = pubmarket(&["builtins"], None).stdout;
    assert_eq!(listed.lines().collect::<Vec<_>>(), BUILTIN_NAMES.to_vec());
    for name in BUILTIN_NAMES {
        let s = builtin(name).unwrap();
        assert_eq!(ScenarioFile::parse(&s.emit()).unwrap(), s, "{name}");
    }
}

#[test]
fn documented_examples_parse_and_solve() {
    let mut names = Vec::new();
    for entry in std::fs::read_dir(examples_dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let s = ScenarioFile::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(ScenarioFile::parse(&s.emit()).unwrap(), s);
        let run = pubmarket(&["solve", path.to_str().unwrap()], None);
        assert_eq!(run.code, 0, "{}: {}", path.display(), run.stderr);
        names.push(match s.game {
            GameSpec::Concrete { .. } => "concrete",
            GameSpec::Symbolic { .. } => "symbolic",
            GameSpec::Besancenot { .. } => "besancenot",
        });
    }
    names.sort();
    assert_eq!(names, ["besancenot", "concrete", "symbolic"]);
}

#[test]
fn coordination_example_matches_hand_computed_equilibria() {
    let path = examples_dir().join("coordination.json");
    let doc = machine(&["solve", path.to_str().unwrap()], None);
    let pure: Vec<[String; 2]> = doc
        .equilibria
        .unwrap()
        .pure_nash
        .into_iter()
        .map(|e| e.profile)
        .collect();
    assert_eq!(pure.len(), 2);
    // Author indifferent at q: 3q = q/2 + 2(1 - q); journal at p: 3p - 1 = 5/2 (1 - p).
    let text = pubmarket(&["solve", path.to_str().unwrap()], None).stdout;
    assert!(text.contains("p = 7/11, q = 4/9"), "{text}");
}

#[test]
fn ordinal_example_counts_four_rankings() {
    let path = examples_dir().join("ordinal_dilemma.json");
    let doc = machine(&["solve", path.to_str().unwrap()], None);
    let sym = doc.symbolic.unwrap();
    assert_eq!(sym.rankings, 4);
    assert_eq!(sym.profiles.len(), 4);
}

#[test]
fn decimal_and_integer_payoffs_are_accepted() {
    let text = r#"{"schema_version": 1, "name": "d", "game": {"kind": "concrete",
        "row_player": "r", "col_player": "c", "row_strategies": ["a"], "col_strategies": ["x"],
        "payoffs": [[["0.25", 3]]]}}"#;
    let s = ScenarioFile::parse(text).unwrap();
    let g = s.concrete_game().unwrap();
    assert_eq!(g.cell(StrategyProfile::new(0, 0)), &(rat(1, 4), rat(3, 1)));
}
