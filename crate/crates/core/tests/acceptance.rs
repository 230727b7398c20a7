//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Everything is exact, so there is no numeric tolerance; the only pinned
//! limits are wall-clock budgets per criterion.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use ncforms::check::Status;
use ncforms::frontend::{load_source, run, Command, Options, PresentationFile, Report};
use ncforms::integrals::integral_class;
use ncforms::ncalg::AlgElement;
use ncforms::scalars::ScalarRF;

type Outcome = Result<String, String>;

/// Number, label, body and wall-clock budget.
type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

fn report(cmd: Command, source: &str, opts: &Options) -> Result<Report, String> {
    run(cmd, source, opts).map_err(|e| format!("{source}: {e}"))
}

fn file(source: &str) -> Result<PresentationFile, String> {
    let (_, text) = load_source(source).map_err(|e| e.to_string())?;
    PresentationFile::parse(&text).map_err(|e| e.to_string())
}

/// Each named check must be present with status Pass (skipped does not count).
fn require(r: &Report, names: &[&str]) -> Result<(), String> {
    for n in names {
        match r.get(n) {
            None => return Err(format!("{}: no check {n}", r.input)),
            Some(c) if c.status != Status::Pass => {
                return Err(format!("{}: {n} {:?}: {}", r.input, c.status, c.witness.clone().unwrap_or_default()))
            }
            Some(_) => {}
        }
    }
    Ok(())
}

/// Every check whose name starts with `prefix` passes, and there is at least one.
fn require_prefix(r: &Report, prefix: &str) -> Result<usize, String> {
    let hits: Vec<_> = r.checks.iter().map(|e| &e.check).filter(|c| c.name.starts_with(prefix)).collect();
    if hits.is_empty() {
        return Err(format!("{}: no checks under {prefix}", r.input));
    }
    if let Some(c) = hits.iter().find(|c| c.status != Status::Pass) {
        return Err(format!("{}: {} {:?}: {}", r.input, c.name, c.status, c.witness.clone().unwrap_or_default()));
    }
    Ok(hits.len())
}

fn opts(max_len: Option<usize>) -> Options {
    Options { max_len, ..Options::default() }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

// σ, σ̄, σ̂ on x^r y^s against the displayed closed forms, entry by entry.
fn c1() -> Outcome {
    let tmd = file("preset:qplane")?.derivation().map_err(|e| e.to_string())?;
    let pres = tmd.pres();
    let (x, y) = (pres.gen("x"), pres.gen("y"));
    let mono = |r: u32, s: u32| pres.mul(&pres.pow(&x, r), &pres.pow(&y, s));
    let p = |e: i64| ScalarRF::param("p").pow(e as i32);
    let q = |e: i64| ScalarRF::q_pow(e as i32);
    let one = ScalarRF::one();
    let mut n = 0;
    for r in 0..=4u32 {
        for s in 0..=4u32 {
            let a = mono(r, s);
            let (ri, si) = (r as i64, s as i64);
            let low = if s == 0 { AlgElement::zero() } else { mono(r + 1, s - 1) };
            let z = AlgElement::zero();
            let bar = [
                [a.scale(&(&p(-ri) * &q(-si))), z.clone()],
                [low.scale(&(&(&p(-ri) * &q(ri - si + 1)) * &(&p(-si) - &one))), a.scale(&(&p(-ri - si) * &q(ri)))],
            ];
            let hat = [
                [a.scale(&(&p(ri) * &q(si))), low.scale(&(&p(ri + 1) * &(&p(si) - &one)))],
                [z.clone(), a.scale(&(&p(ri + si) * &q(-ri)))],
            ];
            for i in 0..2 {
                for j in 0..2 {
                    let got_bar = tmd.sigma_bar_entry(i, j, &a);
                    let got_hat = tmd.sigma_hat_entry(i, j, &a);
                    if got_bar != bar[i][j] {
                        return Err(format!("σ̄_{}{}(x^{r}y^{s}) = {}", i + 1, j + 1, pres.render(&got_bar)));
                    }
                    if got_hat != hat[i][j] {
                        return Err(format!("σ̂_{}{}(x^{r}y^{s}) = {}", i + 1, j + 1, pres.render(&got_hat)));
                    }
                    n += 2;
                }
            }
        }
    }
    Ok(format!("{n} entries on x^r y^s, r, s ≤ 4"))
}

fn c2() -> Outcome {
    let mut n = 0;
    for p in ["preset:qplane", "preset:sl2-3d"] {
        let r = report(Command::InvertSigma, p, &opts(Some(6)))?;
        n += require_prefix(&r, "derivation.words.free.")?;
        n += require_prefix(&r, "derivation.free.")?;
    }
    Ok(format!("{n} identity checks, words of length ≤ 6"))
}

fn c3() -> Outcome {
    for p in ["preset:qplane", "preset:sl2-3d"] {
        let o = Options { max_len: Some(4), cases: 100, seed: 0, ..Options::default() };
        let r = report(Command::Nabla, p, &o)?;
        require(&r, &["nabla.xi", "nabla.leibniz"])?;
    }
    Ok("100 seeded cases per preset, lengths ≤ 4".into())
}

fn c4() -> Outcome {
    let r = report(Command::Flatness, "preset:sl2-3d", &opts(None))?;
    require(&r, &["flatness.integral_forms", "flatness.dual_basis", "flatness.probes", "flatness.right_linear"])?;
    let r = report(Command::IsoCheck, "preset:sl2-3d", &opts(Some(4)))?;
    require(&r, &["iso.squares", "iso.bijective"])?;
    Ok("∇_1 on φ_i, F = 0, ∇_2 = 0, ladder at length ≤ 4".into())
}

fn c5() -> Outcome {
    let o = Options { max_len: Some(6), degree: Some(0), ..Options::default() };
    let r = report(Command::Integral, "preset:sl2-3d", &o)?;
    require(&r, &["integral.lambda_annihilates", "integral.lambda[1]", "integral.lambda[2]"])?;

    // independent evaluation of the closed form at q = 2 and q = 3
    let conn = file("preset:sl2-3d")?.connection().map_err(|e| e.to_string())?;
    let pres = conn.calc().pres();
    let bg = pres.mul(&pres.gen("beta"), &pres.gen("gamma"));
    let expect = [(1, [rat(-2, 5), rat(-3, 10)]), (2, [rat(4, 21), rat(9, 91)])];
    for (l, vals) in expect {
        let a = pres.pow(&bg, l);
        let cls = integral_class(&conn, &a, 6).map_err(|e| e.to_string())?;
        for (qv, want) in [rat(2, 1), rat(3, 1)].into_iter().zip(vals) {
            let got = cls.c.eval(&[qv.clone(), rat(1, 1)]).map_err(|e| e.to_string())?;
            if got != want {
                return Err(format!("l = {l}: c(q = {qv}) = {got}, expected {want}"));
            }
        }
        let back = conn.nabla(&cls.preimage).map_err(|e| e.to_string())?.plus(&AlgElement::scalar(cls.c.clone()));
        if back != a {
            return Err(format!("l = {l}: preimage does not reproduce (beta*gamma)^{l}"));
        }
    }
    Ok("Λ((βγ)^l) for l = 1, 2 with verified preimages, L = 6".into())
}

fn c6() -> Outcome {
    let r = report(Command::Integral, "preset:qplane", &opts(Some(6)))?;
    require(&r, &["integral.cokernel_zero", "integral.coefficient_formula"])?;
    let r = report(Command::IsoCheck, "preset:qplane", &opts(None))?;
    require(&r, &["iso.squares", "iso.bijective"])?;
    Ok("surjectivity witnesses up to length 6, ladder commutes".into())
}

fn c7() -> Outcome {
    let r = report(Command::SphereVerify, "preset:podles-sphere", &opts(None))?;
    require(
        &r,
        &[
            "sphere.sweedler",
            "sphere.qdet",
            "sphere.dual_basis",
            "sphere.hom_dual",
            "sphere.fhat_crosscheck",
            "sphere.flatness",
            "sphere.integral",
            "sphere.ladder.left_square",
            "sphere.ladder.right_square",
            "sphere.ladder.psi_bijective",
        ],
    )?;
    Ok(format!("{} sphere checks", r.summary.pass))
}

fn c8() -> Outcome {
    let r = report(Command::MatrixVerify, "preset:matrix-m2", &opts(None))?;
    require(
        &r,
        &["matrix.antisymmetry", "matrix.flat", "matrix.trace_kills_image", "matrix.cokernel", "matrix.ladder", "matrix.phi_bijective"],
    )?;
    Ok(r.get("matrix.cokernel").and_then(|c| c.witness.clone()).unwrap_or_default())
}

fn c9() -> Outcome {
    let mut seen = Vec::new();
    for p in ["preset:qplane", "preset:sl2-3d", "preset:podles-sphere"] {
        let pf = file(p)?;
        let calc = pf.calculus().map_err(|e| e.to_string())?;
        if let Some(w) = calc.check_d_squared(5) {
            return Err(format!("{p}: d² ≠ 0: {w}"));
        }
        let conf = pf.presentation().map_err(|e| e.to_string())?.check_local_confluence(6);
        if let Some(a) = conf.failures().next() {
            return Err(format!("{p}: unresolved overlap {:?}", a.word));
        }
        seen.push(p.trim_start_matches("preset:"));
    }
    let r = report(Command::MatrixVerify, "preset:matrix-m2", &opts(None))?;
    require(&r, &["matrix.d_squared"])?;
    seen.push("matrix-m2");
    Ok(format!("d² = 0 (length ≤ 5) and confluence (degree ≤ 6) on {}", seen.join(", ")))
}

fn c10() -> Outcome {
    let runs = [
        (Command::Verify, "preset:qplane"),
        (Command::Verify, "preset:sl2-3d"),
        (Command::Verify, "preset:podles-sphere"),
        (Command::Verify, "preset:matrix-m2"),
    ];
    // suite -> (checks seen, controls that caught their corruption)
    let mut suites: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for (cmd, p) in runs {
        let r = report(cmd, p, &opts(None))?;
        for c in r.checks.iter().map(|e| &e.check) {
            let suite = c.name.split(['.', '[']).next().unwrap_or_default().to_string();
            let e = suites.entry(suite).or_default();
            e.0 += 1;
            let caught = c.status == Status::Pass && c.witness.as_deref().is_some_and(|w| w.starts_with("corruption detected"));
            if c.name.contains("control") {
                if !caught {
                    return Err(format!("{p}: {} did not catch its corrupted fixture", c.name));
                }
                e.1 += 1;
            }
        }
    }
    let expected = ["algebra", "derivation", "dga", "nabla", "flatness", "integral", "iso", "density", "sphere", "matrix"];
    for s in expected {
        match suites.get(s) {
            None => return Err(format!("suite {s} never ran")),
            Some((_, 0)) => return Err(format!("suite {s} has no failing negative control")),
            Some(_) => {}
        }
    }
    let total: usize = suites.values().map(|v| v.1).sum();
    Ok(format!("{total} corrupted fixtures caught across {} suites", suites.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "triangular inversion", c1, Duration::from_secs(5)),
        (2, "free-ness identities", c2, Duration::from_secs(30)),
        (3, "hom-connection law", c3, Duration::from_secs(30)),
        (4, "3D flatness and ladder", c4, Duration::from_secs(60)),
        (5, "Haar integral recovery", c5, Duration::from_secs(60)),
        (6, "quantum plane", c6, Duration::from_secs(30)),
        (7, "Podleś sphere", c7, Duration::from_secs(60)),
        (8, "matrix calculus", c8, Duration::from_secs(10)),
        (9, "DGA axioms", c9, Duration::from_secs(30)),
        (10, "negative controls", c10, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (k, label, f, limit) in criteria {
        let t = Instant::now();
        let out = f();
        let dt = t.elapsed();
        let out = match out {
            Ok(_) if dt > limit => Err(format!("took {dt:.1?}, limit {limit:?}")),
            o => o,
        };
        match out {
            Ok(note) => println!("PASS {k:>2} {label} ({dt:.2?}): {note}"),
            Err(e) => {
                failed += 1;
                println!("FAIL {k:>2} {label} ({dt:.2?}): {e}");
            }
        }
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
