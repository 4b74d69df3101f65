use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fptclust"))
}

fn temp_file(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("fptclust-cli-{}-{name}", std::process::id()))
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = temp_file(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

const LINE_INSTANCE: &str = r#"{
    "n": 6,
    "coords": [[0,0],[1,0],[5,0],[6,0],[0.5,0],[5.5,0]],
    "metric": "euclidean",
    "clients": [
        {"id": 0, "weight": 1.0}, {"id": 1, "weight": 2.0},
        {"id": 2, "weight": 1.0}, {"id": 3, "weight": 1.0}
    ],
    "facilities": [4, 5],
    "k": 2,
    "objective": "median"
}"#;

#[test]
fn solve_emits_schema_complete_json_and_exits_zero() {
    let input = write_temp("solve.json", LINE_INSTANCE);
    let output = bin()
        .args(["solve", "--input"])
        .arg(&input)
        .args(["--epsilon", "0.2", "--with-oracle"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    for field in
        ["facilities", "cost", "objective", "assignment", "guesses_evaluated", "ratio_vs_oracle"]
    {
        assert!(json.get(field).is_some(), "missing field {field}");
    }
    assert_eq!(json["objective"], "median");
    assert_eq!(json["ratio_vs_oracle"], 1.0);
    assert_eq!(json["facilities"], serde_json::json!([4, 5]));
}

#[test]
fn malformed_input_exits_one() {
    let input = write_temp("malformed.json", "not json at all");
    let output = bin().args(["solve", "--input"]).arg(&input).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn exhausted_guess_budget_exits_two_with_count() {
    let input = write_temp("budget.json", LINE_INSTANCE);
    let output = bin()
        .args(["solve", "--input"])
        .arg(&input)
        .args(["--budget", "10"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("budget"), "stderr was: {stderr}");
}

#[test]
fn verify_passes_on_a_clean_instance_and_lists_every_check() {
    let input = write_temp("verify-ok.json", LINE_INSTANCE);
    let output = bin()
        .args(["verify", "--input"])
        .arg(&input)
        .args(["--epsilon", "0.2"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = stdout_of(&output);
    for name in [
        "metric-axioms",
        "extended-metricity",
        "improvement-submodularity",
        "valid-solution-cost-equality",
        "fictitious-cost-bound",
    ] {
        assert!(text.contains(name), "report is missing {name}:\n{text}");
    }
}

#[test]
fn verify_names_the_broken_axiom_and_exits_nonzero() {
    let broken = r#"{
        "n": 3,
        "distances": [[0, 1, 9], [1, 0, 1], [9, 1, 0]],
        "clients": [{"id": 0, "weight": 1.0}, {"id": 1, "weight": 1.0}],
        "facilities": [1, 2],
        "k": 1,
        "objective": "median"
    }"#;
    let input = write_temp("verify-broken.json", broken);
    let output = bin().args(["verify", "--input"]).arg(&input).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let text = stdout_of(&output);
    assert!(text.contains("FAIL metric-axioms"), "report was:\n{text}");
}

#[test]
fn verify_refuses_oversized_instances_with_exit_three() {
    let n = 70;
    let coords: Vec<String> = (0..n).map(|i| format!("[{i}, 0]")).collect();
    let clients: Vec<String> =
        (0..n / 2).map(|i| format!("{{\"id\": {i}, \"weight\": 1.0}}")).collect();
    let facilities: Vec<String> = (n / 2..n).map(|i| i.to_string()).collect();
    let instance = format!(
        "{{\"n\": {n}, \"coords\": [{}], \"metric\": \"euclidean\", \"clients\": [{}], \
         \"facilities\": [{}], \"k\": 2, \"objective\": \"median\"}}",
        coords.join(","),
        clients.join(","),
        facilities.join(",")
    );
    let input = write_temp("verify-big.json", &instance);
    let output = bin().args(["verify", "--input"]).arg(&input).output().unwrap();
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn bench_emits_reproducible_rows_with_ratio_at_least_one() {
    let run = || {
        let output = bin()
            .args([
                "bench", "--count", "5", "--n", "8", "--k", "2", "--maximizer", "greedy",
                "--seed", "11",
            ])
            .output()
            .unwrap();
        assert!(output.status.success());
        stdout_of(&output)
    };
    let first = run();
    let second = run();
    let lines: Vec<&str> = first.trim_end().lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(
        lines[0],
        "instance_id,n,k,epsilon,variant,maximizer,cost,opt,ratio,guesses,wall_ms"
    );
    for row in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 11);
        let ratio: f64 = fields[8].parse().unwrap();
        assert!(ratio >= 1.0);
    }
    let strip_wall = |text: &str| {
        text.trim_end()
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(strip_wall(&first), strip_wall(&second));
}

#[test]
fn oracle_matches_the_solver_on_an_easy_instance() {
    let input = write_temp("oracle.json", LINE_INSTANCE);
    let oracle = bin().args(["oracle", "--input"]).arg(&input).output().unwrap();
    assert!(oracle.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&oracle)).unwrap();
    assert_eq!(json["cost"], 2.5);
    assert_eq!(json["guesses_evaluated"], 0);
}

#[test]
fn generated_gadget_instances_are_deterministic_and_well_formed() {
    let args = ["gen", "kmedian-gadget", "--vars", "2", "--clauses", "2", "--seed", "3",
        "--planted", "--a", "2"];
    let first = bin().args(args).output().unwrap();
    let second = bin().args(args).output().unwrap();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&first)).unwrap();
    let n = json["n"].as_u64().unwrap();
    assert_eq!(json["distances"].as_array().unwrap().len() as u64, n);
    assert!(json["k"].as_u64().unwrap() >= 1);
}

#[test]
fn coreset_output_is_an_instance_compatible_client_list() {
    let input = write_temp("coreset.json", LINE_INSTANCE);
    let output = bin()
        .args(["coreset", "--input"])
        .arg(&input)
        .args(["--epsilon", "0.4"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    let clients = json["clients"].as_array().unwrap();
    assert!(!clients.is_empty() && clients.len() <= 4);
    for c in clients {
        assert!(c["id"].is_u64());
        assert!(c["weight"].as_f64().unwrap() > 0.0);
    }
}

#[test]
fn environment_variables_configure_flags_with_lower_precedence() {
    let input = write_temp("env.json", LINE_INSTANCE);
    let from_env = bin()
        .args(["solve", "--input"])
        .arg(&input)
        .env("FPTC_EPSILON", "0.2")
        .output()
        .unwrap();
    let from_flag = bin()
        .args(["solve", "--input"])
        .arg(&input)
        .args(["--epsilon", "0.2"])
        .env("FPTC_EPSILON", "0.9")
        .output()
        .unwrap();
    assert!(from_env.status.success());
    assert!(from_flag.status.success());
    assert_eq!(stdout_of(&from_env), stdout_of(&from_flag));
}
