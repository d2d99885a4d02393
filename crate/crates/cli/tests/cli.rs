use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn eqkr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqkr")).args(args).env_remove("TW_SEED").output().unwrap()
}

fn eqkr_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_eqkr"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn decompose_torsion_fixture() {
    let v = json(&eqkr(&["decompose", &fixture("torsion_1_2_0.json")]));
    assert_eq!(v["format"], "tw/1");
    assert_eq!(v["torsion"], serde_json::json!([[1, 2, 0]]));
    assert_eq!(v["free"], serde_json::json!([]));
}

#[test]
fn decompose_twobraid_fixture() {
    let v = json(&eqkr(&["decompose", &fixture("twobraid_n2_i1.json")]));
    assert_eq!(v["free"], serde_json::json!([[0, -4], [0, -2], [4, -12], [4, -10]]));
    assert_eq!(v["torsion"], serde_json::json!([[3, 1, -10]]));
}

#[test]
fn bad_square_exits_two() {
    let o = eqkr(&["decompose", &fixture("bad_square.json")]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("C^0 → C^1 → C^2"), "{err}");
}

#[test]
fn inconsistent_pages_exit_three() {
    let pages = br#"{"format":"tw/1","type":"page_sequence","k":1,"pages":[[[1,0,1],[0,6,1]],[[1,0,1],[0,6,1]],[]]}"#;
    let o = eqkr_stdin(&["recover", "-"], pages);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("inconsistent pages"));
}

#[test]
fn unknot_pages_recover() {
    let complex = eqkr(&["link", "--braid", "", "--emit", "complex"]);
    let pages = eqkr_stdin(&["couple", "-"], stdout(&complex).as_bytes());
    let d = json(&eqkr_stdin(&["recover", "-"], stdout(&pages).as_bytes()));
    assert_eq!(d["free"], serde_json::json!([[0, -1], [0, 1]]));
    assert_eq!(d["torsion"], serde_json::json!([]));
}

#[test]
fn couple_pages_in_both_indexings_recover() {
    for index in ["tilde", "hat"] {
        let pages = eqkr(&["couple", &fixture("twobraid_n2_i1.json"), "--index", index]);
        let d = json(&eqkr_stdin(&["recover", "-"], stdout(&pages).as_bytes()));
        assert_eq!(d["torsion"], serde_json::json!([[3, 1, -10]]));
    }
}

#[test]
fn decomposition_output_is_accepted_back() {
    let out = stdout(&eqkr(&["decompose", &fixture("twobraid_n2_i1.json")]));
    eqkr::json::decomposition_from_json(&out).unwrap();
    let report = json(&eqkr(&["twobraid", "--N", "2", "--i", "1"]));
    let inner = serde_json::to_string(&report["decomposition"]).unwrap();
    assert_eq!(eqkr::json::decomposition_from_json(&inner).unwrap().to_string(), "k=2 F(0,-4) + F(0,-2) + F(4,-12) + F(4,-10) + T(3,1,-10)");
}

#[test]
fn twobraid_matches_closed_form() {
    let v = json(&eqkr(&["twobraid", "--N", "3", "--i", "2"]));
    assert_eq!(v["input"]["matches_closed_form"], true);
    assert_eq!(v["torsion_width"], 1);
    assert_eq!(v["collapse_page"], 5);
    let lambda = json(&eqkr(&["twobraid", "--N", "4", "--k", "2", "--lambda", "2=1"]));
    assert!(lambda["decomposition"]["torsion"].as_array().unwrap().iter().all(|t| t[1].as_u64().unwrap() >= 2));
}

#[test]
fn delta_report() {
    let v = json(&eqkr(&["delta", "--N", "3"]));
    assert_eq!(v["support_ok"], true);
    assert_eq!(v["anticommute"], true);
    assert_eq!(v["rank_matches_torsion"], true);
    assert!(v["scaling"].as_array().unwrap().iter().all(|s| s["holds"] == true));
}

#[test]
fn verify_summary_and_seed_override() {
    assert_eq!(stdout(&eqkr(&["verify", "--seed", "0", "--count", "100"])), "100/100 pass\n");
    let a = stdout(&eqkr(&["verify", "--seed", "9", "--count", "5", "--format", "json"]));
    let b = Command::new(env!("CARGO_BIN_EXE_eqkr"))
        .args(["verify", "--seed", "1", "--count", "5", "--format", "json"])
        .env("TW_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(a, String::from_utf8(b.stdout).unwrap());
}

#[test]
fn output_is_byte_identical() {
    for args in [
        vec!["link", "--braid", "s1 -s2 s1 -s2"],
        vec!["twobraid", "--N", "4", "--i", "2"],
        vec!["pages", "--modules"],
    ] {
        let mut args = args.clone();
        let f = fixture("twobraid_n2_i1.json");
        if args[0] == "pages" {
            args.insert(1, &f);
        }
        assert_eq!(eqkr(&args).stdout, eqkr(&args).stdout);
    }
}

#[test]
fn link_from_pd_file() {
    let dir = std::env::temp_dir().join(format!("eqkr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trefoil.json");
    std::fs::write(&path, r#"{"format":"tw/1","type":"pd","crossings":[[1,4,2,5],[3,6,4,1],[5,2,6,3]]}"#).unwrap();
    let v = json(&eqkr(&["link", path.to_str().unwrap()]));
    assert_eq!(v["torsion_width"], 1);
    assert_eq!(v["decomposition"]["free"].as_array().unwrap().len(), 2);
    let bad = eqkr(&["link", "--braid", "s1 x2"]);
    assert_eq!(bad.status.code(), Some(2));
}
