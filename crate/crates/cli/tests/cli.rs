use std::process::{Command, Output};

fn invseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invseq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn eval_examples() {
    let o = invseq(&["eval", "45"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "+1");
    assert_eq!(stdout(&invseq(&["eval", "2", "--method", "rec4"])).trim(), "-1");
    assert_eq!(
        stdout(&invseq(&["eval", "3", "--sequence", "r", "--method", "morphism"])).trim(),
        "-1"
    );
    assert_eq!(
        stdout(&invseq(&["eval", "7", "--sequence", "t", "--method", "dfao"])).trim(),
        "-1"
    );
}

#[test]
fn eval_all_methods_agree() {
    let o = invseq(&["eval", "1000000", "--all-methods"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 6);
    assert!(out.lines().take(5).all(|l| l.ends_with("+1")));
    assert_eq!(out.lines().last(), Some("consistent"));
}

#[test]
fn eval_rejects_unsupported_pairs_and_range() {
    assert_eq!(
        invseq(&["eval", "3", "--sequence", "t", "--method", "rec2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        invseq(&["eval", "3", "--sequence", "r", "--method", "dfao"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(invseq(&["eval", "4611686018427387905"]).status.code(), Some(3));
    assert_eq!(invseq(&["eval", "-1"]).status.code(), Some(2));
}

#[test]
fn sum_values_and_series() {
    assert_eq!(stdout(&invseq(&["sum", "23"])).trim(), "4");
    assert_eq!(stdout(&invseq(&["sum", "31", "--method", "stream"])).trim(), "8");
    let csv = stdout(&invseq(&["sum", "7", "--series", "--emit", "csv"]));
    let values: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(csv.lines().next(), Some("N,S"));
    assert_eq!(values, ["1", "2", "1", "2", "3", "2", "3", "4"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&invseq(&["sum", "15", "--emit", "json"]))).unwrap();
    assert_eq!(json[0]["N"], 15);
    assert_eq!(json[0]["S"], 4);
}

#[test]
fn sum_limits_map_to_exit_three() {
    assert_eq!(invseq(&["sum", "4611686018427387904"]).status.code(), Some(0));
    assert_eq!(invseq(&["sum", "4611686018427387905"]).status.code(), Some(3));
    assert_eq!(
        invseq(&["sum", "1099511627776", "--method", "stream"]).status.code(),
        Some(3)
    );
    assert_eq!(invseq(&["sum", "1099511627776", "--series"]).status.code(), Some(3));
}

#[test]
fn verify_single_suites() {
    let o = invseq(&["verify", "extrema", "--kmax", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("k=2: max 8 at [31], min 2 at [11]"));
    let o = invseq(&["verify", "parity", "--emit", "json", "--nmax", "65536"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json[0]["suite"], "parity");
    assert_eq!(json[0]["failure_count"], 0);
}

#[test]
fn verify_argument_errors() {
    assert_eq!(invseq(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(invseq(&["verify", "limits", "--kmax", "0"]).status.code(), Some(2));
    assert_eq!(invseq(&["verify", "limits", "--kmax", "30"]).status.code(), Some(3));
    assert_eq!(
        invseq(&["verify", "words", "--corrupt-gamma", "4,0,0,1"]).status.code(),
        Some(2)
    );
}

#[test]
fn corrupted_gamma_names_failing_suite() {
    let o = invseq(&["verify", "fastsum", "--corrupt-gamma", "3,0,0,-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("failed suites: fastsum"));
    // suites that never touch the matrices are unaffected
    let o = invseq(&["verify", "parity", "--corrupt-gamma", "3,0,0,-1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn sample_g_csv() {
    let o = invseq(&["sample-g", "--octave", "2", "--count", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("x,y,N"));
    assert_eq!(out.lines().count(), 9);
    let xs: Vec<f64> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(xs.windows(2).all(|w| w[0] <= w[1]));
    assert!(String::from_utf8_lossy(&o.stderr).contains("y in ["));
}

#[test]
fn ratio_table_csv() {
    let out = stdout(&invseq(&["ratio-table", "--kmax", "2"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "k,max_ratio,min_ratio");
    assert!(lines[1].starts_with("1,1.51185789"));
}

#[test]
fn scan_commands() {
    let o = invseq(&["scan", "powers", "--power", "3", "--prefix-len", "4096"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        json["periods"],
        serde_json::json!([{ "period": 3, "first_position": 0 }])
    );

    let o = invseq(&["scan", "powers", "--power", "2", "--prefix-len", "2048"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let periods: Vec<u64> = json["periods"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["period"].as_u64().unwrap())
        .collect();
    assert_eq!(periods, [1, 2, 3, 6, 12, 24, 48, 96, 192]);

    let o = invseq(&["scan", "palindromes", "--prefix-len", "64"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["max_length"], 32);

    assert_eq!(
        invseq(&["scan", "powers", "--prefix-len", "1000000"]).status.code(),
        Some(3)
    );
    assert_eq!(invseq(&["scan", "powers", "--power", "1"]).status.code(), Some(2));
}
