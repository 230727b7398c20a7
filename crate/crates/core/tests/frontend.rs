use ncforms::check::Status;
use ncforms::frontend::suites::run_text;
use ncforms::frontend::{load_source, parse_hom, run, Command, LoadError, Options, PresentationFile, PRESETS};
use ncforms::integrals::haar_value;

fn text(name: &str) -> String {
    load_source(&format!("preset:{name}")).unwrap().1
}

#[test]
fn presets_round_trip_through_canonical_text() {
    for p in &PRESETS {
        let a = PresentationFile::parse(p.source).unwrap();
        let canon = a.to_canonical();
        let b = PresentationFile::parse(&canon).unwrap_or_else(|e| panic!("{}: {e}\n{canon}", p.name));
        assert_eq!(a, b, "{}", p.name);
        assert_eq!(canon, b.to_canonical(), "{} canonical text is not a fixed point", p.name);
    }
}

#[test]
fn parse_errors_carry_positions() {
    let src = "[algebra]\nname = t\ngenerators = x, y\nrelation: y*x = q^-1 *\n";
    let e = PresentationFile::parse(src).unwrap_err();
    assert_eq!((e.line, e.col), (4, 23));

    let e = PresentationFile::parse("[algebra]\nname = t\ngenerators = x\n[nosuch]\n").unwrap_err();
    assert_eq!(e.line, 4);

    let e = PresentationFile::parse("[algebra]\nname = t\ngenerators = x\nrelation: x*z = x\n").unwrap_err();
    assert_eq!(e.line, 4);
}

#[test]
fn hom_literals_parse_against_the_file() {
    let pf = PresentationFile::parse(&text("qplane")).unwrap();
    let f = parse_hom(&pf, "dx.dy := x*y").unwrap();
    assert_eq!(f.degree(), 2);
    assert!(parse_hom(&pf, "dx := x; dx.dy := 1").is_err());
    assert!(parse_hom(&pf, "dz := x").is_err());
}

#[test]
fn missing_inputs_are_load_errors() {
    let o = Options::default();
    assert!(matches!(run(Command::Verify, "nosuchfile", &o), Err(LoadError::Io(..))));
    assert!(matches!(run(Command::Verify, "preset:nosuch", &o), Err(LoadError::UnknownPreset(_))));
    assert!(matches!(run(Command::Nabla, "preset:matrix-m2", &o), Err(LoadError::Missing(_))));
    let bad_hom = Options { hom: Some("dx := ".into()), ..Options::default() };
    assert!(matches!(run(Command::Nabla, "preset:qplane", &bad_hom), Err(LoadError::Parse(_))));
}

#[test]
fn reports_are_deterministic() {
    let o = Options { cases: 30, ..Options::default() };
    let a = run_text(Command::Verify, "sl2-3d", &text("sl2-3d"), &o).unwrap().to_json();
    let b = run_text(Command::Verify, "sl2-3d", &text("sl2-3d"), &o).unwrap().to_json();
    assert_eq!(a, b);
    assert!(!a.contains("elapsed_ms"));
    let timed = Options { timings: true, ..o };
    assert!(run_text(Command::Density, "sl2-3d", &text("sl2-3d"), &timed).unwrap().to_json().contains("elapsed_ms"));
}

#[test]
fn report_json_shape() {
    let r = run(Command::InvertSigma, "preset:qplane", &Options::default()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "invert-sigma");
    assert_eq!(v["input_sha256"].as_str().unwrap().len(), 64);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["name"].is_string() && c["status"].is_string() && c["reference"].is_string()));
    assert_eq!(v["summary"]["fail"], 0);
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn degree_zero_integral_matches_the_haar_table() {
    let o = Options { max_len: Some(6), degree: Some(0), ..Options::default() };
    let r = run(Command::Integral, "preset:sl2", &o).unwrap();
    let c = r.get("integral.lambda[1]").unwrap();
    assert_eq!(c.status, Status::Pass);
    let w = c.witness.as_deref().unwrap();
    assert!(w.contains(&format!("= {};", haar_value(1))), "{w}");
    // only the requested block is reported
    let blocks: Vec<_> = r.checks.iter().filter(|e| e.check.name.starts_with("integral.block")).collect();
    assert_eq!(blocks.len(), 1);
}

#[test]
fn sweedler_fixture_agrees_with_the_coproduct() {
    let r = run(Command::SphereVerify, "preset:podles-sphere", &Options::default()).unwrap();
    assert_eq!(r.get("sphere.sweedler").unwrap().status, Status::Pass);
    assert!(r.all_passed());
}

#[test]
fn edited_presets_fail_with_witnesses() {
    // a wrong sign in one σ entry breaks the free-ness identities
    let src = text("qplane").replace("sigma y = [q*y, (p - 1)*x;", "sigma y = [q*y, (1 - p)*x;");
    let r = run_text(Command::InvertSigma, "edited", &src, &Options::default()).unwrap();
    assert!(r.get("derivation.closed_form").is_some_and(|c| c.status == Status::Fail && c.witness.is_some()));
    assert_eq!(r.exit_code(), 1);
}
