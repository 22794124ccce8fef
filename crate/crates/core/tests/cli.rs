use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conic-bundle")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn certificate_text_is_valid() {
    let o = run(&["certificate", "--m", "3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("# conic-bundle certificate m=3"));
    assert!(s.trim_end().lines().last().unwrap().starts_with("result: VALID"));
}

#[test]
fn certificate_json_fields() {
    let o = run(&["certificate", "--m", "2", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["valid"], true);
    assert_eq!(v["antiK_Z"], "3xi+0D-3H");
    assert_eq!(v["X_class"], "2xi+0D-4H");
    assert_eq!(v["discriminant"], "6D-8H");
    assert_eq!(v["dims"]["dim_X"], 9);
}

#[test]
fn h0_matches_hand_count() {
    // y1 and y2 times quadrics in 7 variables
    let o = run(&["h0", "--m", "2", "--class", "1D-2H", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["h0"], 56);
}

#[test]
fn baselocus_and_classify() {
    let s = stdout(&run(&["baselocus", "--m", "2", "--class", "2D-4H"]));
    assert!(s.contains("Bs|2D-4H| = V"));
    let s = stdout(&run(&["classify", "--m", "2", "--class=3D-1H"]));
    assert!(s.contains("big") && s.contains("not nef"));
}

#[test]
fn cones_lists_two_chambers() {
    let s = stdout(&run(&["cones", "--m", "4"]));
    assert!(s.contains("chambers: 2"));
    assert!(s.contains("FLIP_CHAMBER") && s.contains("NEF_Y"));
}

#[test]
fn small_verify_passes() {
    let o = run(&["verify", "--m", "2", "--seed", "7", "--samples", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("result: PASS"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [&["certificate", "--m", "1"][..], &["classify", "--m", "2", "--class", "foo"], &["bogus"]] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn help_exits_0() {
    assert!(run(&["--help"]).status.success());
}
