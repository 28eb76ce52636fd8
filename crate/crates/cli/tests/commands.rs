use std::path::PathBuf;
use std::process::Command;

fn lindiff(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_lindiff")).args(args).output().expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

fn scratch(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lindiff-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p
}

#[test]
fn airy_exponential_parts() {
    let (out, _, code) = lindiff(&["exp-parts", "D^2 - z"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"{"parts":[{"poly":"(2/3)*z^(3/2)"},{"poly":"-(2/3)*z^(3/2)"}],"ram":2}"#);
}

#[test]
fn right_division() {
    let (out, _, code) = lindiff(&["rdivide", "D^2", "D"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"{"q":"D","r":"0"}"#);
    let (out, _, _) = lindiff(&["rdivide", "D^3 + z*D + 1", "D - z"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    // N = Q o P + R, recomputed through the CLI
    let q = v["q"].as_str().unwrap();
    let r = v["r"].as_str().unwrap();
    let lhs = format!("({q}) @ (D - z) + ({r}) - (D^3 + z*D + 1)");
    let (out, _, code) = lindiff(&["compose", &lhs, "D"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"{"op":"0"}"#);
}

#[test]
fn example2_verifies() {
    let (out, _, code) = lindiff(&["verify", "example2", "--P", "z"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["scenario"], "example2");
    let (text, _, code) = lindiff(&["--format", "text", "verify", "example2", "--P", "z^2 - 3", "--target", "B1"]);
    assert_eq!(code, 0);
    assert!(text.contains("EXACT-PASS") && text.ends_with("verdict: PASS\n"), "{text}");
}

#[test]
fn other_scenarios_verify() {
    for args in [
        &["verify", "example1", "--delta", "z + 1", "--k", "2", "--m", "2"][..],
        &["verify", "example3", "--P", "Y^2 - 3", "--m", "1"],
        &["verify", "theorem-reps", "--delta", "1", "--alpha", "1/(z+1)"],
        &["verify", "elimination-chain", "--k", "3", "--seed", "5"],
    ] {
        let (out, err, code) = lindiff(args);
        assert_eq!(code, 0, "{args:?}: {out}{err}");
    }
}

#[test]
fn exit_codes_for_bad_input() {
    let (_, err, code) = lindiff(&["compose", "D^2 +", "D"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1, column 6"), "{err}");
    let (_, err, code) = lindiff(&["exp-parts", "z + 1"]);
    assert_eq!(code, 2);
    assert!(err.contains("type error") && err.contains("found a scalar"), "{err}");
    let (_, err, code) = lindiff(&["exp-parts", "D - 0.5"]);
    assert_eq!(code, 2);
    assert!(err.contains("decimal"), "{err}");
    let (_, err, code) = lindiff(&["gauge", "D^2 + H*D"]);
    assert_eq!(code, 2);
    assert!(err.contains("undeclared name `H`"), "{err}");
    assert_eq!(lindiff(&["frobnicate"]).2, 2);
    assert_eq!(lindiff(&["verify", "example9"]).2, 2);
    assert_eq!(lindiff(&["changevar", "D^2", "1"]).2, 2);
    assert_eq!(lindiff(&["--help"]).2, 0);
}

#[test]
fn failed_verdict_exits_one() {
    // G = e^z, Phi = e^z with all coefficients zero violates the top relation
    let tower = scratch("g.tower", "gen G : exp = 1;\n");
    let t = tower.to_str().unwrap();
    let (out, _, code) = lindiff(&["--tower", t, "frank-check", "3", "--g", "G", "--phi", "G"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains(r#""verdict":"FAIL""#));
    let (out, _, code) = lindiff(&["frank-check", "4", "--nu", "1"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn tower_file_generators() {
    let tower = scratch(
        "h.tower",
        "# Example I tower\nlet delta = z\ngen H' : logderiv = delta;\ngen H : prim = H';\ngen EH : exp = H';\n",
    );
    let t = tower.to_str().unwrap();
    // (D + delta) o (D + 2 delta) as in the composition example
    let (out, err, code) = lindiff(&["--tower", t, "compose", "D + delta", "D + 2*delta"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.trim(), r#"{"op":"D^2 + 3*z*D + (2*z^2 + 2)"}"#);
    // e^H and H have Wronskian e^H (H' - H H')
    let (out, _, code) = lindiff(&["--tower", t, "wronskian", "EH", "H"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"{"wronskian":"-H'*H*EH + H'*EH"}"#);
    let bad = scratch("bad.tower", "gen t : exp = 1;\ngen Y : root = 2;\n");
    let (_, err, code) = lindiff(&["--tower", bad.to_str().unwrap(), "gauge", "D^2"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn operator_commands() {
    let cases: &[(&[&str], &str)] = &[
        (&["gcrd", "D^2", "D"], r#"{"gcrd":"D","order":1}"#),
        (&["gcrd", "D - 1", "D + 1"], r#"{"gcrd":"1","order":0}"#),
        (&["gauge", "D^2 + 2*a*D + a^2".replace('a', "3").leak()], r#"{"op":"D^2","x_logderiv":"-3"}"#),
        (&["changevar", "D^2", "2"], r#"{"n":2,"op":"D^2 - (1/z)*D"}"#),
        (&["wronskian", "1", "z"], r#"{"wronskian":"1"}"#),
        (&["compose", "D", "D"], r#"{"op":"D^2"}"#),
        (&["compose", "D + 1", "D + 2"], r#"{"op":"D^2 + 3*D + 2"}"#),
    ];
    for (args, want) in cases {
        let (out, err, code) = lindiff(args);
        assert_eq!(code, 0, "{args:?}: {err}");
        assert_eq!(out.trim(), *want, "{args:?}");
    }
}

#[test]
fn formal_solutions_and_rays() {
    let (out, _, code) = lindiff(&["formal-solve", "D^2 - z", "--trunc", "4"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 2);
    assert!(sols.iter().all(|s| s["gamma"] == "-1/4" && s["residual_ok"] == true));
    let (out, _, _) = lindiff(&["formal-solve", "z*D + 1", "--part", "0"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["solutions"][0]["gamma"], "-1");
    let (out, _, code) = lindiff(&["exp-parts", "D^2 - 1", "--theta", "0"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ray_order"], serde_json::json!(["z", "-z"]));
    let (out, _, _) = lindiff(&["exp-parts", "D^2 - 1", "--theta", "3.14159265358979"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ray_order"], serde_json::json!(["-z", "z"]));
}

#[test]
fn frank_generation() {
    let (out, _, code) = lindiff(&["frank-gen", "5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["relations"].as_array().unwrap().len(), 5);
    assert_eq!(v["u"], "-2*D^2");
    // k(k^2-1)/12 = 10 for k = 5
    assert!(v["low_relations"]["y"]["g"].as_str().unwrap().starts_with("10*D^3"), "{v}");
}

#[test]
fn report_is_deterministic() {
    let cfg = scratch("casebook.toml", "scenarios = [\"example2\"]\ntrials = 1\n");
    let c = cfg.to_str().unwrap();
    let a = lindiff(&["report", "--config", c, "--seed", "7"]);
    let b = lindiff(&["report", "--config", c, "--seed", "7"]);
    assert_eq!(a.2, 0, "{}", a.1);
    assert_eq!(a.0, b.0);
    let v: serde_json::Value = serde_json::from_str(&a.0).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["verdict"], "PASS");
    let bad = scratch("bad.toml", "seeds = 3\n");
    assert_eq!(lindiff(&["report", "--config", bad.to_str().unwrap()]).2, 2);
}
