use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_descpuzzle")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn multiply_table() {
    let o = run(&["multiply", "--pi", "1362547", "--rho", "7321456"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for w in ["7461325", "7561234", "7631425", "7641235"] {
        assert!(s.contains(w), "{s}");
    }
}

#[test]
fn multiply_kt_both_methods_agree() {
    let o = run(&["multiply", "--pi", "2431", "--rho", "2134", "--theory", "KT", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("1 - y2/y1"), "{s}");
    assert!(s.contains("-y2/y1"), "{s}");
}

#[test]
fn multiply_json_schema() {
    let o = run(&["--json", "multiply", "--pi", "2543167", "--rho", "4132567"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rule"], "almostsep");
    let cs = v["constants"].as_array().unwrap();
    assert_eq!(cs.len(), 7);
    for c in cs {
        assert_eq!(c["coefficient"], "1");
        assert_eq!(c["puzzle_count"], 1);
        assert!(c["sigma"].is_string() && c["nu"].is_string());
    }
    assert!(v["request"].is_object());
    assert!(v["version"].is_string());
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(run(&["multiply", "--pi", "2143", "--rho", "2143", "--rule", "sepdesc"]).status.code(), Some(2));
    assert_eq!(run(&["multiply", "--pi", "2431", "--rho", "2134", "--theory", "HT", "--rule", "almostsep"]).status.code(), Some(2));
    assert_eq!(run(&["multiply", "--pi", "1123", "--rho", "21"]).status.code(), Some(2));
    assert_eq!(run(&["puzzles", "--lambda", "_3_", "--mu", "0_", "--rule", "sepdesc"]).status.code(), Some(2));
}

#[test]
fn puzzles_grouping_and_render() {
    let dir = std::env::temp_dir().join(format!("descpuzzle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("p.svg");
    let o = run(&["puzzles", "--lambda", "_3_43_4", "--mu", "2_1___0", "--rule", "sepdesc", "--render", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("4 puzzles"), "{s}");
    let svg = std::fs::read_to_string(dir.join("p-1.svg")).unwrap();
    assert!(svg.contains("<svg"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn encode_lists_choices() {
    let s = stdout(&run(&["encode", "--pi", "2431", "--rho", "2134", "--rule", "sepdesc"]));
    assert!(s.contains("k=0") && s.contains("k=1"), "{s}");
}

#[test]
fn euler_examples() {
    let s = stdout(&run(&["euler", "--lambda", "_2_2", "--mu", "10__", "--nu", "2120", "--rule", "sepdesc"]));
    assert!(s.contains("chi = 3"), "{s}");
    let s = stdout(&run(&["euler", "--lambda", "10_2_", "--mu", "_423_", "--nu", "^3 ^4 v1 odd v0", "--rule", "almostsep"]));
    assert!(s.contains("chi = -3") && s.contains("3 puzzles"), "{s}");
}

#[test]
fn verify_is_deterministic() {
    let args = ["--json", "verify", "--n", "4", "--samples", "15", "--rule", "almostsep", "--theory", "K", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["failed"], 0);
}

#[test]
fn sequential_jobs_give_same_output() {
    let a = run(&["--json", "multiply", "--pi", "1362547", "--rho", "7321456"]);
    let b = run(&["--jobs", "1", "--json", "multiply", "--pi", "1362547", "--rho", "7321456"]);
    let strip = |o: &Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("request");
        v
    };
    assert_eq!(strip(&a), strip(&b));
}
