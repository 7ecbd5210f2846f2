use std::path::Path;
use std::process::{Command, Output};

fn ptsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptsym")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = ptsym(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

#[test]
fn golden_outputs() {
    for (args, file) in [
        (&["perturb", "--model", "ix3", "--n", "0", "--order", "2"][..], "perturb_ix3_n0_order2.json"),
        (&["perturb", "--model", "ix2y", "--index", "1,2"][..], "perturb_ix2y_1_2.json"),
        (&["coperator", "--model", "ixyz", "--order", "1"][..], "coperator_ixyz_order1.json"),
        (&["coperator", "--model", "ix3", "--order", "2"][..], "coperator_ix3_order2.json"),
        (&["degenerate", "--level", "4"][..], "degenerate_level4.json"),
    ] {
        assert_eq!(stdout(args), golden(file), "{args:?}");
    }
}

#[test]
fn ground_state_second_order() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["perturb", "--model", "ix3", "--n", "0", "--order", "2"])).unwrap();
    assert_eq!(v["B"], "11/8");
    assert_eq!(v["a_eps2"], "29/48");
    let q: Vec<(u64, String)> = v["Q"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["idx"][0].as_u64().unwrap(), t["re"].as_str().unwrap().to_string()))
        .collect();
    assert_eq!(q, [(2, "-27/32".to_string()), (4, "-7/128".to_string()), (6, "-1/1152".to_string())]);
}

#[test]
fn xyz_kernel_text() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["coperator", "--model", "ixyz", "--order", "1"])).unwrap();
    assert_eq!(v["text"], "1 - i*eps*(4/3*Dx*Dy*Dz - 2/3*y*z*Dx - 2/3*x*z*Dy - 2/3*x*y*Dz)");
    assert_eq!(v["c_squared_is_identity"], true);
}

#[test]
fn sweep_csv_is_deterministic() {
    let args = ["spectrum", "--family", "eps", "--sweep", "0:1:0.25", "--levels", "5", "--basis", "80", "--format", "csv", "--threads", "2"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("epsilon,n,re_E,im_E,pt_sign,converged"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!((16..=20).contains(&rows.len()));
    assert_eq!(rows.iter().map(|r| r[0]).collect::<std::collections::BTreeSet<_>>().len(), 4);
    for r in &rows {
        let n: i32 = r[1].parse().unwrap();
        assert_eq!(r[4], if n % 2 == 0 { "1" } else { "-1" });
        assert_eq!(r[3], "0");
        assert_eq!(r[5], "true");
    }
    assert_eq!(rows[0][2].parse::<f64>().unwrap().round(), 1.0);
}

#[test]
fn negative_eps_reports_complex_pairs() {
    let out = stdout(&["spectrum", "--param", "-0.7", "--levels", "3", "--basis", "120", "--format", "csv"]);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0][4], "1");
    assert_eq!(rows[1][4], "0");
    let (a, b): (f64, f64) = (rows[1][3].parse().unwrap(), rows[2][3].parse().unwrap());
    assert!((a + b).abs() < 1e-8 && a.abs() > 0.5);
}

#[test]
fn zeta_and_bindings() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["zeta", "--epsilon", "1"])).unwrap();
    assert!((v["closed_form"].as_f64().unwrap() - 2.835_094_933_971_79).abs() < 1e-10);
    let csv = stdout(&["bindings", "--g", "0.04", "--k", "3", "--format", "csv"]);
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().nth(1).unwrap().ends_with(",true"));
    let conv = stdout(&["bindings", "--g", "0.04", "--model", "conventional", "--format", "csv"]);
    assert!(conv.lines().nth(1).unwrap().ends_with(",false"));
}

#[test]
fn matrix_model_json() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["matrix2x2", "--r", "1", "--s", "2", "--theta", "0.9", "--psi0", "1,0,0,1", "--t", "3"])).unwrap();
    assert_eq!(v["phase"], "unbroken");
    let n = &v["evolution"]["cpt_norm"];
    assert!((n[0][0].as_f64().unwrap() - n[1][0].as_f64().unwrap()).abs() < 1e-10);
    let v: serde_json::Value = serde_json::from_str(&stdout(&["matrix2x2", "--r", "1", "--s", "0.5", "--theta", "1.5"])).unwrap();
    assert_eq!(v["phase"], "broken");
    assert!(v["c_matrix"].is_null());
}

#[test]
fn writes_to_out_path() {
    let dir = std::env::temp_dir().join(format!("ptsym-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k.json");
    let out = ptsym(&["coperator", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("\"model\": \"ix3\""));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(ptsym(&["bogus"]).status.code(), Some(2));
    assert_eq!(ptsym(&["spectrum", "--param", "2.5"]).status.code(), Some(2));
    assert_eq!(ptsym(&["zeta", "--epsilon", "-1"]).status.code(), Some(2));
    assert_eq!(ptsym(&["coperator", "--model", "ixyz", "--order", "2"]).status.code(), Some(2));
    assert_eq!(ptsym(&["perturb", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(ptsym(&["spectrum", "--basis", "2"]).status.code(), Some(1));
    assert_eq!(ptsym(&["--help"]).status.code(), Some(0));
}
