use std::process::{Command, Output};

use grpinv::report::ResultDocument;
use grpinv::{parse_spec, Analyzed, ExtNat, InvariantKind, Limits};

fn grpinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grpinv"))
        .args(args)
        .env("GRPINV_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn an(s: &str) -> Analyzed {
    Analyzed::from_spec(&parse_spec(s).unwrap(), &Limits::default()).unwrap()
}

#[test]
fn invariant_values() {
    let o = grpinv(&["ic", "C3^3", "C3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "13\n");
    assert_eq!(stdout(&grpinv(&["sigma", "C2^2"])), "3\n");
    assert_eq!(stdout(&grpinv(&["sigmac", "C2^3"])), "7\n");
    assert_eq!(
        stdout(&grpinv(&["ic", "C4", "C2"])),
        "infinite (spectrum gap: order 4)\n"
    );
    assert_eq!(stdout(&grpinv(&["sigma", "C7"])), "infinite (cyclic group)\n");
}

#[test]
fn exit_codes() {
    assert_eq!(grpinv(&["ic", "C3^3"]).status.code(), Some(1));
    assert_eq!(grpinv(&["ic", "C3^", "C3"]).status.code(), Some(1));
    assert_eq!(grpinv(&["sigma", "Q12"]).status.code(), Some(1));
    assert_eq!(grpinv(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(grpinv(&["--help"]).status.code(), Some(0));
    let o = grpinv(&["sigma", "C2^8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("256"));
    assert!(o.stdout.is_empty());
    assert_eq!(grpinv(&["sigma", "C2^3 x C17"]).status.code(), Some(2));
    assert_eq!(stdout(&grpinv(&["sigma", "C2^3 x C17", "--max-order", "256"])), "3\n");
    // 417199 subgroups: over the default subgroup budget
    assert_eq!(grpinv(&["sigma", "C2^8", "--max-order", "256"]).status.code(), Some(2));
    assert_eq!(grpinv(&["ic", "C3^3", "C3", "--budget", "1"]).status.code(), Some(2));
}

#[test]
fn json_is_stable_and_round_trips() {
    let strip = |o: &Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let args = ["ic", "D5", "C10", "--json", "--certificate"];
    let (a, b) = (grpinv(&args), grpinv(&args));
    assert_eq!(strip(&a), strip(&b));
    let doc: ResultDocument = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc.kind, InvariantKind::Ic);
    assert_eq!(doc.operands, ["D5", "C10"]);
    assert_eq!(doc.value.value(), ExtNat::Finite(6));
    assert_eq!(doc.max_order, 128);
    assert_eq!(doc.engine_version, grpinv::ENGINE_VERSION);
    assert_eq!(
        serde_json::to_value(&doc).unwrap(),
        serde_json::from_slice::<serde_json::Value>(&a.stdout).unwrap()
    );

    let plain: ResultDocument = serde_json::from_slice(&grpinv(&["ic", "D5", "C10", "--json"]).stdout).unwrap();
    assert!(plain.certificate.is_none());
    let inf: serde_json::Value =
        serde_json::from_slice(&grpinv(&["ic", "C4", "C2", "--json", "--certificate"]).stdout).unwrap();
    assert_eq!(
        inf["value"],
        serde_json::json!({"infinite": true, "reason": "spectrum_gap", "gap_order": 4})
    );
    assert!(inf.get("certificate").is_none());
}

#[test]
fn printed_certificates_revalidate() {
    for (g, h) in [
        ("C2^2", "C2"),
        ("C3^2", "C9"),
        ("D5", "C10"),
        ("C2^3", "C2^2"),
        ("D3", "C3 x C2"),
        ("Q8", "C8"),
    ] {
        let o = grpinv(&["ic", g, h, "--json", "--certificate"]);
        let doc: ResultDocument = serde_json::from_slice(&o.stdout).unwrap();
        assert!(doc.revalidate(&an(g), Some(&an(h))), "IC({g};{h})");

        let mut tampered = doc.clone();
        let cert = tampered.certificate.as_mut().unwrap();
        cert[0] = cert[1].clone();
        assert!(!tampered.revalidate(&an(g), Some(&an(h))), "IC({g};{h}) tampered");
    }
    for g in ["C2^2", "Q8", "D4", "C3^3"] {
        for kind in ["sigma", "sigmac"] {
            let doc: ResultDocument =
                serde_json::from_slice(&grpinv(&[kind, g, "--json", "--certificate"]).stdout).unwrap();
            assert!(doc.revalidate(&an(g), None), "{kind}({g})");
        }
    }
    let one: ResultDocument =
        serde_json::from_slice(&grpinv(&["ic", "C2", "Q8", "--json", "--certificate"]).stdout).unwrap();
    assert_eq!(one.value.value(), ExtNat::Finite(1));
    assert!(one.revalidate(&an("C2"), Some(&an("Q8"))));
}

#[test]
fn lattice_listings() {
    assert_eq!(stdout(&grpinv(&["lattice", "C2^2"])).lines().count(), 5);
    let q8 = stdout(&grpinv(&["lattice", "Q8", "--cyclic", "--maximal"]));
    assert_eq!(q8.lines().count(), 3);
    assert!(q8.lines().all(|l| l.starts_with("4 ")));
    let c12 = stdout(&grpinv(&["lattice", "C12", "--maximal"]));
    let orders: Vec<&str> = c12.lines().map(|l| l.split(' ').next().unwrap()).collect();
    assert_eq!(orders, ["4", "6"]);
    let json: serde_json::Value = serde_json::from_slice(&grpinv(&["lattice", "D5", "--json"]).stdout).unwrap();
    assert_eq!(json["subgroups"].as_array().unwrap().len(), 8);
}

#[test]
fn embeds_command() {
    assert_eq!(stdout(&grpinv(&["embeds", "C2^2", "D4"])), "yes\n");
    assert_eq!(stdout(&grpinv(&["embeds", "C2^2", "Q8"])), "no\n");
}

#[test]
fn verify_suites() {
    let o = grpinv(&["verify", "--suite", "examples", "--max-order", "32"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = grpinv(&["verify", "--suite", "tozp", "--max-order", "16"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = grpinv(&[
        "verify",
        "--suite",
        "miller_moreno,subadd",
        "--max-order",
        "16",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["suites"].as_array().unwrap().len(), 2);
    assert_eq!(grpinv(&["verify", "--suite", "nonsense"]).status.code(), Some(1));
}

#[test]
fn injected_fault_fails_verification() {
    let o = grpinv(&["verify", "--suite", "examples", "--max-order", "32", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert!(out.contains("fail: IC(C2^2; C2)"), "{out}");
}

#[test]
fn verify_budget_exhaustion_skips_and_continues() {
    let o = grpinv(&[
        "verify",
        "--suite",
        "bounds,miller_moreno",
        "--max-order",
        "8",
        "--budget",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("skipped:"));
    assert!(out.contains("miller_moreno (bound 8): PASS"));
}

#[test]
fn output_is_independent_of_worker_count() {
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_grpinv"))
            .args(["verify", "--suite", "triangle", "--max-order", "8", "--json"])
            .env("GRPINV_THREADS", threads)
            .output()
            .unwrap();
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        for s in v["suites"].as_array_mut().unwrap() {
            s.as_object_mut().unwrap().remove("elapsed_ms");
        }
        v
    };
    assert_eq!(run("1"), run("3"));
}
