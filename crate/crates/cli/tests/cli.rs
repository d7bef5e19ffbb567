use std::process::{Command, Output};

fn pentagram(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pentagram")).args(args).env("PENTAGRAM_LOG", "off").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().expect("header").split(',').collect();
    let k = header.iter().position(|h| *h == name).expect("column present");
    lines.map(|l| l.split(',').nth(k).expect("cell").to_string()).collect()
}

#[test]
fn lax_example_has_zero_defects() {
    let o = pentagram(&["verify", "lax", "--d", "3", "--n", "7", "--backend", "exact", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let defects = column(&stdout(&o), "defect");
    assert_eq!(defects.len(), 10);
    assert!(defects.iter().all(|d| d == "0"));
}

#[test]
fn genus_example() {
    let o = pentagram(&["genus", "--n", "6", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(column(&out, "nu_fin"), vec!["18"]);
    assert_eq!(column(&out, "genus"), vec!["6"]);
}

#[test]
fn continuum_example() {
    let o = pentagram(&["continuum", "--d", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("C_d estimate")).expect("estimate line");
    let c: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!((0.165..=0.168).contains(&c), "C_3 = {c}");
}

#[test]
fn identical_flags_give_identical_output() {
    for args in [
        &["gen", "--d", "3", "--n", "7", "--seed", "9"][..],
        &["verify", "duality", "--d", "2", "--p", "1", "--r", "2", "--n", "8", "--trials", "3", "--seed", "4"][..],
        &["map", "--d", "3", "--n", "7", "--steps", "3", "--backend", "float", "--seed", "5"][..],
    ] {
        let (a, b) = (pentagram(args), pentagram(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    assert_ne!(stdout(&pentagram(&["gen", "--seed", "1"])), stdout(&pentagram(&["gen", "--seed", "2"])));
}

#[test]
fn generated_polygon_feeds_the_map() {
    let dir = std::env::temp_dir().join(format!("pentagram-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("poly.json");
    let p = path.to_str().unwrap();
    assert_eq!(pentagram(&["gen", "--d", "3", "--n", "7", "--seed", "3", "--out", p]).status.code(), Some(0));
    let o = pentagram(&["map", "--input", p, "--steps", "2", "--centered", "--xyz"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("step,i,x,y,z\n"));
    assert_eq!(out.lines().count(), 1 + 3 * 7);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    // Configuration errors.
    assert_eq!(pentagram(&["verify", "lax", "--d", "2"]).status.code(), Some(4));
    assert_eq!(pentagram(&["verify", "lax", "--bogus"]).status.code(), Some(4));
    assert_eq!(pentagram(&["genus", "--backend", "float"]).status.code(), Some(4));
    assert_eq!(pentagram(&["map", "--input", "/nonexistent/poly.json"]).status.code(), Some(4));
    // A tolerance no float computation can meet is an invariant violation.
    let o = pentagram(&["verify", "lax", "--backend", "float", "--tol", "0", "--trials", "3", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Lax equation"));
    // This float orbit loses general position numerically at step 15.
    let o = pentagram(&["map", "--d", "3", "--n", "9", "--backend", "float", "--steps", "15"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("index"));
}

#[test]
fn every_check_passes_on_defaults() {
    for check in ["integrals", "duality", "scaling", "codes", "closed"] {
        let o = pentagram(&["verify", check, "--trials", "2"]);
        assert_eq!(o.status.code(), Some(0), "{check}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = pentagram(&["verify", "integrals", "--backend", "float", "--trials", "2", "--steps", "20"]);
    assert_eq!(o.status.code(), Some(0));
}
