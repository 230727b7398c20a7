//! Verification suites behind the command line.
//!
//! Each suite is a list of independent jobs. Jobs run on the worker pool; the
//! report is assembled afterwards in job order, so output does not depend on
//! scheduling.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::check::CheckResult;
use crate::dga::{Calculus, FormElement};
use crate::descent::Sphere;
use crate::exec::par_map;
use crate::homconn::{hom_mul_form, hom_right_act, HomConnection, HomForm};
use crate::integrals::{self, haar_value, BlockKey, LadderDiagram};
use crate::linmap::MapMatrix;
use crate::matrixcalc::{MatElement, MatrixCalculus};
use crate::multider::TwistedMultiDerivation;
use crate::ncalg::{AlgElement, Presentation, Rule, Word};
use crate::sample;
use crate::scalars::ScalarRF;

use super::file::{parse_hom, PresentationFile};
use super::presets::load_source;
use super::report::Report;
use super::LoadError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Verify,
    InvertSigma,
    Nabla,
    Flatness,
    Integral,
    IsoCheck,
    Density,
    SphereVerify,
    MatrixVerify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::InvertSigma => "invert-sigma",
            Command::Nabla => "nabla",
            Command::Flatness => "flatness",
            Command::Integral => "integral",
            Command::IsoCheck => "iso-check",
            Command::Density => "density",
            Command::SphereVerify => "sphere verify",
            Command::MatrixVerify => "matrix verify",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub max_len: Option<usize>,
    pub max_degree: Option<usize>,
    pub seed: u64,
    pub cases: usize,
    /// ℤ-degree block for `integral`.
    pub degree: Option<i64>,
    /// Hom-form literal for `nabla` and `flatness`.
    pub hom: Option<String>,
    pub timings: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_len: None, max_degree: None, seed: 0, cases: 100, degree: None, hom: None, timings: false }
    }
}

impl Options {
    fn len_or(&self, default: usize) -> usize {
        self.max_len.unwrap_or(default)
    }

    fn record(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        if let Some(l) = self.max_len {
            m.insert("max_len".into(), l.to_string());
        }
        if let Some(d) = self.max_degree {
            m.insert("max_degree".into(), d.to_string());
        }
        if let Some(d) = self.degree {
            m.insert("degree".into(), d.to_string());
        }
        if let Some(h) = &self.hom {
            m.insert("hom".into(), h.clone());
        }
        m.insert("seed".into(), self.seed.to_string());
        m.insert("cases".into(), self.cases.to_string());
        m
    }
}

type Outcome = Result<Vec<CheckResult>, String>;

struct Job<'a> {
    name: String,
    run: Box<dyn Fn() -> Outcome + Send + Sync + 'a>,
}

fn job<'a>(name: &str, f: impl Fn() -> Outcome + Send + Sync + 'a) -> Job<'a> {
    Job { name: name.to_string(), run: Box::new(f) }
}

fn one(c: CheckResult) -> Outcome {
    Ok(vec![c])
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Loads `source` (`preset:NAME` or a path) and runs `cmd` on it.
pub fn run(cmd: Command, source: &str, opts: &Options) -> Result<Report, LoadError> {
    let (label, text) = load_source(source)?;
    run_text(cmd, &label, &text, opts)
}

/// Everything a file can be turned into, built once up front.
struct Loaded {
    pf: PresentationFile,
    pres: Option<Arc<Presentation>>,
    tmd: Option<Arc<TwistedMultiDerivation>>,
    conn: Option<HomConnection>,
    sphere: Option<Sphere>,
    matrix: Option<MatrixCalculus>,
}

impl Loaded {
    fn new(pf: PresentationFile, cmd: Command) -> Result<Self, LoadError> {
        let wants = |c: &[Command]| cmd == Command::Verify || c.contains(&cmd);
        let pres = match &pf.algebra {
            Some(_) => Some(pf.presentation()?),
            None => None,
        };
        let tmd = match (&pres, &pf.derivation) {
            (Some(p), Some(d)) => Some(Arc::new(pf.derivation_with(p.clone(), d)?)),
            _ => None,
        };
        let conn = match (&tmd, &pf.calculus) {
            (Some(_), Some(_)) => Some(pf.connection()?),
            _ => None,
        };
        let sphere = match &pf.sphere {
            Some(_) if wants(&[Command::SphereVerify, Command::IsoCheck]) => Some(pf.sphere()?),
            _ => None,
        };
        let matrix = match &pf.matrix {
            Some(_) => Some(pf.matrix()?),
            None => None,
        };
        Ok(Loaded { pf, pres, tmd, conn, sphere, matrix })
    }

    fn pres(&self) -> Result<&Arc<Presentation>, LoadError> {
        self.pres.as_ref().ok_or(LoadError::Missing("[algebra]"))
    }

    fn tmd(&self) -> Result<&Arc<TwistedMultiDerivation>, LoadError> {
        self.pres()?;
        self.tmd.as_ref().ok_or(LoadError::Missing("[derivation]"))
    }

    fn conn(&self) -> Result<&HomConnection, LoadError> {
        self.tmd()?;
        self.conn.as_ref().ok_or(LoadError::Missing("[calculus]"))
    }

    fn algebra_name(&self) -> &str {
        self.pf.algebra.as_ref().map_or("", |a| a.name.as_str())
    }
}

/// Runs `cmd` on already loaded text; `label` names the input in the report.
pub fn run_text(cmd: Command, label: &str, text: &str, opts: &Options) -> Result<Report, LoadError> {
    let pf = PresentationFile::parse(text)?;
    let hom = match &opts.hom {
        Some(h) => Some(parse_hom(&pf, h)?),
        None => None,
    };
    let ld = Loaded::new(pf, cmd)?;
    let name = ld.algebra_name().to_string();
    let mut jobs: Vec<Job> = Vec::new();
    match cmd {
        Command::Verify => {
            if let Some(p) = &ld.pres {
                jobs.extend(algebra_suite(p, opts));
            }
            if let Some(t) = &ld.tmd {
                jobs.extend(derivation_suite(t, opts, &name));
            }
            if let Some(c) = &ld.conn {
                jobs.extend(dga_suite(c.calc(), opts));
                jobs.extend(nabla_suite(c, opts, None));
                jobs.extend(flatness_suite(c, opts, &name, None));
                jobs.extend(integral_suite(c, opts, &name));
                if let Some(l) = &ld.pf.ladder {
                    jobs.extend(iso_suite(c, l, opts));
                }
                jobs.extend(density_suite(c.calc(), opts));
            }
            if let Some(s) = &ld.sphere {
                jobs.extend(sphere_suite(s, opts));
            }
            if let Some(m) = &ld.matrix {
                jobs.extend(matrix_suite(m));
            }
            if jobs.is_empty() {
                return Err(LoadError::Missing("[algebra] or [matrix]"));
            }
        }
        Command::InvertSigma => jobs.extend(derivation_suite(ld.tmd()?, opts, &name)),
        Command::Nabla => jobs.extend(nabla_suite(ld.conn()?, opts, hom.as_ref())),
        Command::Flatness => jobs.extend(flatness_suite(ld.conn()?, opts, &name, hom.as_ref())),
        Command::Integral => jobs.extend(integral_suite(ld.conn()?, opts, &name)),
        Command::IsoCheck => {
            if let Some(m) = &ld.matrix {
                jobs.extend(matrix_ladder_jobs(m));
            }
            if let Some(s) = &ld.sphere {
                jobs.extend(sphere_ladder_jobs(s, opts));
            }
            if let Some(l) = &ld.pf.ladder {
                jobs.extend(iso_suite(ld.conn()?, l, opts));
            }
            if jobs.is_empty() {
                return Err(LoadError::Missing("[ladder]"));
            }
        }
        Command::Density => jobs.extend(density_suite(ld.conn()?.calc(), opts)),
        Command::SphereVerify => jobs.extend(sphere_suite(ld.sphere.as_ref().ok_or(LoadError::Missing("[sphere]"))?, opts)),
        Command::MatrixVerify => jobs.extend(matrix_suite(ld.matrix.as_ref().ok_or(LoadError::Missing("[matrix]"))?)),
    }

    let results: Vec<(Outcome, Duration)> = par_map(&jobs, |j| {
        let t = Instant::now();
        let r = (j.run)();
        (r, t.elapsed())
    });
    let mut report = Report::new(cmd.name(), label, text, opts.record());
    for (j, (r, t)) in jobs.iter().zip(results) {
        let elapsed = opts.timings.then_some(t);
        match r {
            Ok(checks) => {
                for c in checks {
                    report.push(c, elapsed);
                }
            }
            Err(e) => report.push(CheckResult::fail(&j.name, "job aborted", e), elapsed),
        }
    }
    Ok(report)
}

fn power(pres: &Presentation, a: &AlgElement, l: u32) -> AlgElement {
    pres.pow(a, l)
}

fn monomial(x: usize, y: usize, r: usize, s: usize) -> Word {
    Word::from_letters(std::iter::repeat_n(x, r).chain(std::iter::repeat_n(y, s)))
}

fn random_hom<R: rand::Rng>(rng: &mut R, calc: &Calculus, degree: usize, words: &[Word], terms: usize) -> HomForm {
    let mut f = HomForm::zero(degree);
    for e in calc.basis(degree) {
        f.set(e.clone(), sample::element(rng, words, terms));
    }
    f
}

// ---------------------------------------------------------------- algebra

fn algebra_suite<'a>(pres: &'a Presentation, opts: &Options) -> Vec<Job<'a>> {
    let deg = opts.max_degree.unwrap_or(6);
    let mut jobs = vec![job("algebra.confluence", move || {
        let rep = pres.check_local_confluence(deg);
        let w = rep.failures().next().map(|a| {
            format!("{}: {} vs {}", pres.render_word(&a.word), pres.render(&a.left), pres.render(&a.right))
        });
        let c = CheckResult::from_witness("algebra.confluence", "overlaps of the rewriting rules resolve", w);
        Ok(vec![c.with_note(format!("{} ambiguities up to degree {deg}, all resolved", rep.ambiguities.len()))])
    })];
    if pres.hopf().is_some() {
        jobs.push(job("algebra.hopf", move || Ok(pres.check_hopf().into_iter().map(|c| c.with_name_prefix("algebra")).collect())));
    }
    jobs.push(job("algebra.control", move || {
        let mut out = Vec::new();
        // a second rule with the same left side and rescaled right side
        let r0 = &pres.rules()[0];
        let dup = Rule::new(r0.lhs.clone(), r0.rhs.iter().map(|(w, c)| (w.clone(), c * &ScalarRF::q_pow(1))).collect());
        let mut rules = pres.rules().to_vec();
        rules.push(dup);
        let bad = Presentation::new(pres.name(), pres.gens().to_vec(), rules, pres.grading().map(<[i64]>::to_vec)).map_err(err)?;
        let caught = bad.check_local_confluence(deg).failures().next().map(|a| format!("unresolved at {}", bad.render_word(&a.word)));
        out.push(CheckResult::negative_control("algebra.confluence.control", "rescaled duplicate rule", caught));
        if let Some(h) = pres.hopf() {
            let mut h = h.clone();
            h.antipode[0] = h.antipode[0].scale(&ScalarRF::q_pow(1));
            let bad = Presentation::new(pres.name(), pres.gens().to_vec(), pres.rules().to_vec(), pres.grading().map(<[i64]>::to_vec))
                .map_err(err)?
                .with_hopf(h);
            let caught = bad.check_hopf().into_iter().find(|c| !c.passed()).map(|c| c.name);
            out.push(CheckResult::negative_control("algebra.hopf.control", "antipode of the first generator rescaled by q", caught));
        }
        Ok(out)
    }));
    jobs
}

// ---------------------------------------------------------------- derivation

/// Compares σ, σ̄ and σ̂ on x^r y^s, 0 ≤ r, s ≤ max, with the closed forms of
/// the two-parameter quantum plane.
pub fn qplane_sigma_witness(tmd: &TwistedMultiDerivation, max: usize) -> Option<String> {
    let pres = tmd.pres();
    let (Some(x), Some(y)) = (pres.gen_index("x"), pres.gen_index("y")) else {
        return Some("the algebra has no generators x, y".into());
    };
    let p = |e: i32| ScalarRF::param("p").pow(e);
    let q = ScalarRF::q_pow;
    let one = ScalarRF::one();
    let zero = AlgElement::zero();
    for r in 0..=max {
        for s in 0..=max {
            let a = AlgElement::word(monomial(x, y, r, s));
            let (ri, si) = (r as i32, s as i32);
            let lower = if s == 0 { AlgElement::zero() } else { AlgElement::word(monomial(x, y, r + 1, s - 1)) };
            let sigma = [
                [a.scale(&(&p(ri) * &q(si))), lower.scale(&(&p(ri) * &(&p(si) - &one)))],
                [zero.clone(), a.scale(&(&p(ri + si) * &q(-ri)))],
            ];
            let bar = [
                [a.scale(&(&p(-ri) * &q(-si))), zero.clone()],
                [lower.scale(&(&(&p(-ri) * &q(ri - si + 1)) * &(&p(-si) - &one))), a.scale(&(&p(-ri - si) * &q(ri)))],
            ];
            let hat = [
                [a.scale(&(&p(ri) * &q(si))), lower.scale(&(&p(ri + 1) * &(&p(si) - &one)))],
                [zero.clone(), a.scale(&(&p(ri + si) * &q(-ri)))],
            ];
            for i in 0..2 {
                for j in 0..2 {
                    let got = [tmd.sigma_entry(i, j, &a), tmd.sigma_bar_entry(i, j, &a), tmd.sigma_hat_entry(i, j, &a)];
                    for ((g, want), label) in got.iter().zip([&sigma[i][j], &bar[i][j], &hat[i][j]]).zip(["σ", "σ̄", "σ̂"]) {
                        if g != want {
                            return Some(format!(
                                "{label}_{}{}({}) = {}, closed form {}",
                                i + 1,
                                j + 1,
                                pres.render(&a),
                                pres.render(g),
                                pres.render(want)
                            ));
                        }
                    }
                }
            }
        }
    }
    None
}

fn corrupted_bar(tmd: &TwistedMultiDerivation) -> Result<TwistedMultiDerivation, String> {
    let mut e = tmd.sigma_bar().entries().to_vec();
    e[0] = e[0].neg();
    Ok(tmd.with_sigma_bar(MapMatrix::new(tmd.n(), e).map_err(err)?))
}

fn derivation_suite<'a>(tmd: &'a TwistedMultiDerivation, opts: &Options, name: &str) -> Vec<Job<'a>> {
    let len = opts.len_or(6);
    let qplane = name == "qplane";
    let mut jobs = vec![
        job("derivation.free", move || Ok(tmd.verify_free().into_iter().map(|c| c.with_name_prefix("derivation")).collect())),
        job("derivation.words", move || {
            let words = tmd.pres().normal_words(len);
            let note = format!("on {} normal words of length ≤ {len}", words.len());
            Ok(tmd
                .check_bar_hat(&words)
                .into_iter()
                .map(|c| c.with_name_prefix("derivation.words").with_note(note.clone()))
                .collect())
        }),
    ];
    if let Ok(qs) = tmd.detect_q_skew() {
        jobs.push(job("derivation.q_skew", move || {
            let c = CheckResult::pass("derivation.q_skew", "σ_i^{-1} ∂_i σ_i = q_i ∂_i");
            Ok(vec![match &qs {
                Some(v) => c.with_witness(format!("q_i = {}", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))),
                None => c.with_witness("not q-skew"),
            }])
        }));
    }
    if qplane {
        jobs.push(job("derivation.closed_form", move || {
            one(CheckResult::from_witness("derivation.closed_form", "σ, σ̄, σ̂ on x^r y^s for r, s ≤ 4", qplane_sigma_witness(tmd, 4)))
        }));
    }
    jobs.push(job("derivation.control", move || {
        let bad = corrupted_bar(tmd)?;
        let caught = bad.verify_free().into_iter().find(|c| !c.passed()).and_then(|c| c.witness);
        let mut out = vec![CheckResult::negative_control("derivation.control", "σ̄_11 with flipped sign", caught)];
        if qplane {
            let caught = qplane_sigma_witness(&bad, 4);
            out.push(CheckResult::negative_control("derivation.closed_form.control", "σ̄_11 with flipped sign", caught));
        }
        Ok(out)
    }));
    jobs
}

// ---------------------------------------------------------------- dga

fn dga_suite<'a>(calc: &'a Calculus, opts: &Options) -> Vec<Job<'a>> {
    let len = opts.len_or(5);
    vec![
        job("dga.validate", move || Ok(calc.validate().into_iter().map(|c| c.with_name_prefix("dga")).collect())),
        job("dga.d_squared", move || {
            let c = CheckResult::from_witness("dga.d_squared", "d² = 0 on normal words", calc.check_d_squared(len));
            Ok(vec![c.with_note(format!("all normal words of length ≤ {len}"))])
        }),
        job("dga.control", move || {
            // d(ω_1) shifted by a basis 2-form
            let mut d: Vec<FormElement> = (0..calc.n()).map(|i| calc.d_on_form(i).clone()).collect();
            let Some(e) = calc.basis(2).first() else {
                return one(CheckResult::skipped("dga.control", "no 2-forms"));
            };
            d[0] = d[0].plus(&FormElement::basis(e.clone(), AlgElement::one()));
            let bad = calc.with_d_forms(d);
            one(CheckResult::negative_control("dga.control", "d(ω_1) shifted by a basis 2-form", bad.check_d_squared(len.min(2))))
        }),
    ]
}

// ---------------------------------------------------------------- nabla

/// Same connection with σ̂_11 negated; ∇ is the only consumer of σ̂.
fn corrupted_hat(conn: &HomConnection) -> Result<HomConnection, String> {
    let calc = conn.calc();
    let tmd = calc.tmd();
    let mut e = tmd.sigma_hat().entries().to_vec();
    e[0] = e[0].neg();
    let hat = MapMatrix::new(tmd.n(), e).map_err(err)?;
    let partials = (0..tmd.pres().num_gens()).map(|g| tmd.partial_on_generator(g).to_vec()).collect();
    let bad = TwistedMultiDerivation::new(tmd.pres_arc().clone(), partials, tmd.sigma().clone(), Some(tmd.sigma_bar().clone()), Some(hat), None)
        .map_err(err)?;
    Ok(HomConnection::new(Arc::new(calc.with_tmd(Arc::new(bad)))))
}

/// First seeded (f, a) with ∇(fa) ≠ ∇(f)a + f(da).
pub fn leibniz_witness(conn: &HomConnection, seed: u64, cases: usize, max_len: usize) -> Result<Option<String>, String> {
    let calc = conn.calc();
    let pres = calc.pres();
    let words = pres.normal_words(max_len);
    let mut rng = sample::rng(seed);
    let inputs: Vec<(HomForm, AlgElement)> =
        (0..cases).map(|_| (random_hom(&mut rng, calc, 1, &words, 2), sample::element(&mut rng, &words, 2))).collect();
    let res = par_map(&inputs, |(f, a)| -> Result<Option<String>, String> {
        let defect = conn.leibniz_defect(f, a).map_err(err)?;
        Ok((!defect.is_zero()).then(|| format!("f = {}, a = {}: defect {}", f.render(calc), pres.render(a), pres.render(&defect))))
    });
    for r in res {
        if let Some(w) = r? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn xi_witness(conn: &HomConnection) -> Result<Option<String>, String> {
    let calc = conn.calc();
    for i in 0..calc.n() {
        let v = conn.nabla(&HomForm::dual(Word::letter(i))).map_err(err)?;
        if !v.is_zero() {
            return Ok(Some(format!("∇(ξ_{}) = {}", calc.form_names()[i], calc.pres().render(&v))));
        }
    }
    Ok(None)
}

fn nabla_suite<'a>(conn: &'a HomConnection, opts: &Options, hom: Option<&'a HomForm>) -> Vec<Job<'a>> {
    let len = opts.len_or(4);
    let (seed, cases) = (opts.seed, opts.cases);
    let mut jobs = vec![
        job("nabla.xi", move || one(CheckResult::from_witness("nabla.xi", "∇(ξ_i) = 0", xi_witness(conn)?))),
        job("nabla.leibniz", move || {
            let c = CheckResult::from_witness("nabla.leibniz", "∇(fa) = ∇(f)a + f(da)", leibniz_witness(conn, seed, cases, len)?);
            Ok(vec![c.with_note(format!("{cases} seeded cases, seed {seed}, lengths ≤ {len}"))])
        }),
    ];
    if let Some(f) = hom {
        jobs.push(job("nabla.value", move || {
            let calc = conn.calc();
            let shown = if f.degree() == 1 {
                calc.pres().render(&conn.nabla(f).map_err(err)?)
            } else {
                conn.nabla_n(f.degree() - 1, f).map_err(err)?.render(calc)
            };
            one(CheckResult::pass("nabla.value", "∇ of the given hom-form").with_witness(format!("∇({}) = {shown}", f.render(calc))))
        }));
    }
    jobs.push(job("nabla.control", move || {
        let bad = corrupted_hat(conn)?;
        one(CheckResult::negative_control("nabla.control", "σ̂_11 with flipped sign", leibniz_witness(&bad, seed, cases.min(20), len)?))
    }));
    jobs
}

// ---------------------------------------------------------------- flatness

/// The integral-form identities of the 3D calculus on O_q(SL(2)).
pub fn sl2_nabla1_witness(conn: &HomConnection) -> Result<Option<String>, String> {
    let calc = conn.calc();
    let idx = |n: &str| calc.form_index(n).ok_or_else(|| format!("no form {n}"));
    let (m, z, p) = (idx("w-")?, idx("w0")?, idx("w+")?);
    let q = ScalarRF::q_pow;
    let qq = &q(2) * &(&q(2) + &ScalarRF::one());
    let w = |l: &[usize]| Word::from_letters(l.iter().copied());
    let cases = [
        ("φ_0", w(&[m, p]), HomForm::dual(w(&[z])).scale(&q(1))),
        ("φ_+", w(&[m, z]), HomForm::dual(w(&[m])).scale(&qq)),
        ("φ_-", w(&[z, p]), HomForm::dual(w(&[p])).scale(&qq)),
    ];
    for (label, e, want) in cases {
        let got = conn.nabla_n(1, &HomForm::dual(e)).map_err(err)?;
        if got != want {
            return Ok(Some(format!("∇_1({label}) = {}, expected {}", got.render(calc), want.render(calc))));
        }
    }
    let top = conn.nabla_n(2, &HomForm::dual(w(&[m, z, p]))).map_err(err)?;
    if !top.is_zero() {
        return Ok(Some(format!("∇_2(φ) = {}", top.render(calc))));
    }
    Ok(None)
}

/// ∇_1(ξ) = 0, ξdx = ξ_y and ξdy = −pq^{-1}ξ_x on the quantum plane.
pub fn qplane_nabla1_witness(conn: &HomConnection) -> Result<Option<String>, String> {
    let calc = conn.calc();
    let (x, y) = (calc.form_index("dx").ok_or("no form dx")?, calc.form_index("dy").ok_or("no form dy")?);
    let xi = HomForm::dual(Word::from_letters([x, y]));
    let n1 = conn.nabla_n(1, &xi).map_err(err)?;
    if !n1.is_zero() {
        return Ok(Some(format!("∇_1(ξ) = {}", n1.render(calc))));
    }
    let pq = &ScalarRF::param("p") * &ScalarRF::q_pow(-1);
    let xdx = hom_mul_form(calc, &xi, &calc.one_form(x)).map_err(err)?;
    let xdy = hom_mul_form(calc, &xi, &calc.one_form(y)).map_err(err)?;
    if xdx != HomForm::dual(Word::letter(y)) {
        return Ok(Some(format!("ξ dx = {}", xdx.render(calc))));
    }
    if xdy != HomForm::dual(Word::letter(x)).scale(&-pq) {
        return Ok(Some(format!("ξ dy = {}", xdy.render(calc))));
    }
    Ok(None)
}

/// F(f·a) = F(f)·a on seeded degree-2 hom-forms.
fn right_linear_witness(conn: &HomConnection, seed: u64, cases: usize, max_len: usize) -> Result<Option<String>, String> {
    let calc = conn.calc();
    if calc.top() < 2 {
        return Ok(None);
    }
    let pres = calc.pres();
    let words = pres.normal_words(max_len);
    let mut rng = sample::rng(seed ^ 0x5eed);
    let inputs: Vec<(HomForm, AlgElement)> =
        (0..cases).map(|_| (random_hom(&mut rng, calc, 2, &words, 2), sample::element(&mut rng, &words, 2))).collect();
    let res = par_map(&inputs, |(f, a)| -> Result<Option<String>, String> {
        let lhs = conn.curvature(&hom_right_act(calc, f, a)).map_err(err)?;
        let rhs = pres.mul(&conn.curvature(f).map_err(err)?, a);
        Ok((lhs != rhs).then(|| format!("f = {}, a = {}", f.render(calc), pres.render(a))))
    });
    for r in res {
        if let Some(w) = r? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// First φ·a with F(φ·a) ≠ 0, φ a basis dual 2-form and a a normal word.
fn curvature_probe_witness(conn: &HomConnection, max_len: usize) -> Result<Option<String>, String> {
    let calc = conn.calc();
    if calc.top() < 2 {
        return Ok(None);
    }
    let pres = calc.pres();
    let probes: Vec<(Word, Word)> =
        calc.basis(2).iter().flat_map(|e| pres.normal_words(max_len).into_iter().map(move |w| (e.clone(), w))).collect();
    let res = par_map(&probes, |(e, w)| -> Result<Option<String>, String> {
        let f = hom_right_act(calc, &HomForm::dual(e.clone()), &AlgElement::word(w.clone()));
        let v = conn.curvature(&f).map_err(err)?;
        Ok((!v.is_zero()).then(|| format!("F(ξ_{}·{}) = {}", calc.render_form_word(e), pres.render_word(w), pres.render(&v))))
    });
    for r in res {
        if let Some(w) = r? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Rebuilds the calculus with the first non-trivial form relation rescaled by q.
fn corrupted_form_rule(conn: &HomConnection) -> Result<HomConnection, String> {
    let calc = conn.calc();
    let mut rules = calc.form_presentation().rules().to_vec();
    let r = rules.iter_mut().find(|r| !r.rhs.is_empty()).ok_or("no form relation with a nonzero right side")?;
    for (_, c) in r.rhs.iter_mut() {
        *c = &*c * &ScalarRF::q_pow(1);
    }
    let basis: Vec<Vec<Word>> = (1..=calc.top()).map(|k| calc.basis(k).to_vec()).collect();
    let d: Vec<FormElement> = (0..calc.n()).map(|i| calc.d_on_form(i).clone()).collect();
    let bad = Calculus::new(calc.tmd_arc().clone(), calc.form_names().to_vec(), rules, basis, calc.top(), d).map_err(err)?;
    Ok(HomConnection::new(Arc::new(bad)))
}

fn flatness_suite<'a>(conn: &'a HomConnection, opts: &Options, name: &str, hom: Option<&'a HomForm>) -> Vec<Job<'a>> {
    let len = opts.len_or(2);
    let (seed, cases) = (opts.seed, opts.cases);
    let mut jobs = vec![
        job("flatness.dual_basis", move || {
            one(CheckResult::from_witness("flatness.dual_basis", "F = ∇∘∇_1 vanishes on the dual basis", conn.flatness_witness().map_err(err)?))
        }),
        job("flatness.right_linear", move || {
            let c = CheckResult::from_witness("flatness.right_linear", "F(fa) = F(f)a", right_linear_witness(conn, seed, cases, len)?);
            Ok(vec![c.with_note(format!("{cases} seeded cases, seed {seed}, lengths ≤ {len}"))])
        }),
        job("flatness.probes", move || {
            let c = CheckResult::from_witness("flatness.probes", "F(φa) = 0 for basis φ and normal words a", curvature_probe_witness(conn, len)?);
            Ok(vec![c.with_note(format!("lengths ≤ {len}"))])
        }),
    ];
    match name {
        "sl2" => jobs.push(job("flatness.integral_forms", move || {
            one(CheckResult::from_witness("flatness.integral_forms", "∇_1(φ_0) = qξ_0, ∇_1(φ_±) = q²(q²+1)ξ_∓, ∇_2(φ) = 0", sl2_nabla1_witness(conn)?))
        })),
        "qplane" => jobs.push(job("flatness.integral_forms", move || {
            one(CheckResult::from_witness("flatness.integral_forms", "∇_1(ξ) = 0, ξdx = ξ_y, ξdy = −pq^{-1}ξ_x", qplane_nabla1_witness(conn)?))
        })),
        _ => {}
    }
    if let Some(f) = hom {
        jobs.push(job("flatness.curvature", move || {
            if f.degree() != 2 {
                return one(CheckResult::skipped("flatness.curvature", "curvature needs a hom-form of degree 2"));
            }
            let v = conn.curvature(f).map_err(err)?;
            let calc = conn.calc();
            one(CheckResult::from_witness("flatness.curvature", "F of the given hom-form", (!v.is_zero()).then(|| format!("F = {}", calc.pres().render(&v))))
                .with_witness(format!("F({}) = {}", f.render(calc), calc.pres().render(&v))))
        }));
    }
    let sl2 = name == "sl2";
    jobs.push(job("flatness.control", move || {
        if sl2 {
            // the diagonal formula with one wrong exponent
            let q = ScalarRF::q_pow;
            let bad = HomConnection::diagonal(conn.calc_arc().clone(), vec![q(2), ScalarRF::one(), q(-1)]);
            return one(CheckResult::negative_control("flatness.control", "diagonal twist q^{-1} in place of q^{-2}", bad.flatness_witness().map_err(err)?));
        }
        let bad = corrupted_form_rule(conn)?;
        one(CheckResult::negative_control("flatness.control", "coefficient of one 2-form relation rescaled by q", curvature_probe_witness(&bad, 2)?))
    }));
    jobs
}

// ---------------------------------------------------------------- integral

/// ∇(ξ_y·x^r y^{s+1}) rescaled by p^{r+s}q^{-r}(p−1)/(p^{s+1+bump}−1) must give
/// x^r y^s, for r + s ≤ max_len. `bump` ≠ 0 plants an exponent error.
pub fn qplane_surjectivity_witness(conn: &HomConnection, max_len: usize, bump: i32) -> Result<Option<String>, String> {
    let calc = conn.calc();
    let pres = calc.pres();
    let (x, y) = (pres.gen_index("x").ok_or("no generator x")?, pres.gen_index("y").ok_or("no generator y")?);
    let dy = calc.form_index("dy").ok_or("no form dy")?;
    let p = |e: i32| ScalarRF::param("p").pow(e);
    let one = ScalarRF::one();
    let pairs: Vec<(usize, usize)> = (0..=max_len).flat_map(|r| (0..=max_len - r).map(move |s| (r, s))).collect();
    let res = par_map(&pairs, |&(r, s)| -> Result<Option<String>, String> {
        let f = hom_right_act(calc, &HomForm::dual(Word::letter(dy)), &AlgElement::word(monomial(x, y, r, s + 1)));
        let img = conn.nabla(&f).map_err(err)?;
        let (ri, si) = (r as i32, s as i32);
        let k = (&(&p(ri + si) * &ScalarRF::q_pow(-ri)) * &(&p(1) - &one)).checked_div(&(&p(si + 1 + bump) - &one)).map_err(err)?;
        let want = AlgElement::word(monomial(x, y, r, s));
        Ok((img.scale(&k) != want).then(|| format!("r = {r}, s = {s}: ∇(ξ_y x^r y^(s+1)) = {}", pres.render(&img))))
    });
    for r in res {
        if let Some(w) = r? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn integral_suite<'a>(conn: &'a HomConnection, opts: &Options, name: &str) -> Vec<Job<'a>> {
    let len = opts.len_or(6);
    let only = opts.degree.map(BlockKey::Degree);
    let mut jobs = vec![job("integral.blocks", move || {
        let calc = conn.calc();
        let blocks = integrals::image_rank(conn, len, only.as_ref()).map_err(err)?;
        Ok(blocks
            .iter()
            .map(|b| {
                let reps: Vec<String> = b.cokernel.iter().take(4).map(|w| calc.pres().render_word(w)).collect();
                CheckResult::pass(&format!("integral.block[{}]", b.key), "rank of ∇ within the truncation").with_witness(format!(
                    "rows {}, rank {}, cokernel {} within L = {len}{}",
                    b.rows,
                    b.rank,
                    b.cokernel_dim(),
                    if reps.is_empty() { String::new() } else { format!(", spanned mod image by {}", reps.join(", ")) }
                ))
            })
            .collect())
    })];
    match name {
        "qplane" => {
            jobs.push(job("integral.surjective", move || {
                let blocks = integrals::image_rank(conn, len, None).map_err(err)?;
                let w = blocks.iter().find(|b| b.cokernel_dim() != 0).map(|b| format!("block {} has cokernel {}", b.key, b.cokernel_dim()));
                Ok(vec![
                    CheckResult::from_witness("integral.cokernel_zero", "coker ∇ = 0 in every block", w),
                    CheckResult::from_witness(
                        "integral.coefficient_formula",
                        "x^r y^s = p^{r+s}q^{-r}(p−1)/(p^{s+1}−1) ∇(ξ_y x^r y^{s+1})",
                        qplane_surjectivity_witness(conn, len, 0)?,
                    ),
                ])
            }));
            jobs.push(job("integral.control", move || {
                one(CheckResult::negative_control("integral.control", "exponent of p^{s+1} raised by one", qplane_surjectivity_witness(conn, len.min(3), 1)?))
            }));
        }
        "sl2" => {
            jobs.push(job("integral.lambda_annihilates", move || {
                one(CheckResult::from_witness(
                    "integral.lambda_annihilates",
                    "Λ vanishes on the image of ∇",
                    integrals::check_lambda_annihilates(conn, len, &haar_value).map_err(err)?,
                ))
            }));
            for l in 0..=2u32 {
                jobs.push(job(&format!("integral.lambda[{l}]"), move || one(lambda_check(conn, l, len))));
            }
            jobs.push(job("integral.control", move || {
                let flipped = |l: u32| if l == 1 { -haar_value(1) } else { haar_value(l) };
                let caught = integrals::check_lambda_annihilates(conn, len.min(4), &flipped).map_err(err)?;
                one(CheckResult::negative_control("integral.control", "sign of Λ((βγ)) flipped", caught))
            }));
        }
        _ => {}
    }
    jobs
}

/// Λ((βγ)^l) read off as the class of (βγ)^l modulo the image of ∇.
fn lambda_check(conn: &HomConnection, l: u32, len: usize) -> CheckResult {
    let pres = conn.calc().pres();
    let name = format!("integral.lambda[{l}]");
    let bg = pres.mul(&pres.gen("beta"), &pres.gen("gamma"));
    let a = power(pres, &bg, l);
    let shown = match l {
        0 => "1".to_string(),
        1 => "beta*gamma".to_string(),
        _ => format!("(beta*gamma)^{l}"),
    };
    match integrals::integral_class(conn, &a, len) {
        Ok(cls) => {
            let want = haar_value(l);
            let text = format!("Λ({shown}) = {}; preimage {}", cls.c, cls.preimage.render(conn.calc()));
            if cls.c == want {
                CheckResult::pass(&name, "(−1)^l (q−q^{-1})/(q^{l+1}−q^{-l-1})").with_witness(text)
            } else {
                CheckResult::fail(&name, "(−1)^l (q−q^{-1})/(q^{l+1}−q^{-l-1})", format!("{text}; expected {want}"))
            }
        }
        Err(e) => CheckResult::fail(&name, "(−1)^l (q−q^{-1})/(q^{l+1}−q^{-l-1})", e.to_string()),
    }
}

// ---------------------------------------------------------------- ladders

fn iso_suite<'a>(conn: &'a HomConnection, ladder: &'a LadderDiagram, opts: &Options) -> Vec<Job<'a>> {
    let len = opts.len_or(4);
    vec![
        job("iso.ladder", move || {
            let r = integrals::check_ladder(conn, ladder, len).map_err(err)?;
            let squares = r.squares.iter().flatten().next().cloned();
            let bij = r.bijective.iter().flatten().next().cloned();
            Ok(vec![
                CheckResult::from_witness("iso.squares", "every square of the ladder commutes", squares),
                CheckResult::from_witness("iso.bijective", "vertical maps are bijective on the truncation", bij),
            ])
        }),
        job("iso.control", move || {
            let mut bad = ladder.clone();
            let last = bad.verticals.len() - 1;
            if let Some((e, v)) = bad.verticals[last].iter().next().map(|(e, v)| (e.clone(), v.scale(&ScalarRF::q_pow(1)))) {
                bad.verticals[last].insert(e, v);
            }
            let r = integrals::check_ladder(conn, &bad, len.min(2)).map_err(err)?;
            one(CheckResult::negative_control("iso.control", "one vertical entry rescaled by q", r.squares.iter().flatten().next().cloned()))
        }),
    ]
}

// ---------------------------------------------------------------- density

fn density_suite<'a>(calc: &'a Calculus, opts: &Options) -> Vec<Job<'a>> {
    let len = opts.len_or(2);
    vec![
        job("density.witness", move || {
            let c = match calc.check_density(len) {
                Some(w) => {
                    let pres = calc.pres();
                    let shown: Vec<String> = w
                        .iter()
                        .enumerate()
                        .map(|(k, pairs)| {
                            let terms: Vec<String> = pairs.iter().map(|(a, b)| format!("({})d({})", pres.render(a), pres.render(b))).collect();
                            format!("{} = {}", calc.form_names()[k], terms.join(" + "))
                        })
                        .collect();
                    CheckResult::pass("density.witness", "Ω¹ = A dA").with_witness(shown.join("; "))
                }
                None => CheckResult::fail("density.witness", "Ω¹ = A dA", format!("no witness with lengths ≤ {len}")),
            };
            one(c)
        }),
        job("density.control", move || {
            let zero = calc.tmd().with_partials(vec![vec![AlgElement::zero(); calc.n()]; calc.pres().num_gens()]);
            let bad = calc.with_tmd(Arc::new(zero));
            let caught = bad.check_density(len.min(1)).is_none().then(|| "no a, b with Σ a d(b) = ω".to_string());
            one(CheckResult::negative_control("density.control", "all partial derivatives set to zero", caught))
        }),
    ]
}

// ---------------------------------------------------------------- sphere

fn sphere_ladder_jobs<'a>(s: &'a Sphere, opts: &Options) -> Vec<Job<'a>> {
    let len = opts.len_or(4);
    vec![
        job("sphere.ladder", move || {
            let r = s.ladder(len).map_err(err)?;
            let labels = ["sphere.ladder.left_square", "sphere.ladder.right_square", "sphere.ladder.psi_bijective"];
            Ok(labels.iter().zip(r).map(|(n, w)| CheckResult::from_witness(n, "ladder over the sphere", w)).collect())
        }),
        job("sphere.ladder.control", move || {
            let q = ScalarRF::q_pow;
            let bad = s.clone().with_q_constants([ScalarRF::one(), q(-3), q(-2)]);
            let caught = bad.ladder(len.min(2)).map_err(err)?.into_iter().flatten().next();
            one(CheckResult::negative_control("sphere.ladder.control", "q_2 = q^{-3}", caught))
        }),
    ]
}

fn sphere_suite<'a>(s: &'a Sphere, opts: &Options) -> Vec<Job<'a>> {
    let len = opts.len_or(4);
    let (seed, cases) = (opts.seed, opts.cases);
    let mut jobs = vec![
        job("sphere.algebraic", move || {
            Ok(vec![
                CheckResult::from_witness("sphere.sweedler", "hand-expanded Δ(α²), Δ(δ²)", s.check_sweedler().err().map(|e| e.to_string())),
                CheckResult::from_witness("sphere.qdet", "Σ a_i b_i = 1 and Σ q_i b_i a_i = 1", s.check_qdet()),
                CheckResult::from_witness("sphere.dual_basis", "dual basis of the B-module", s.check_dual_basis()),
            ])
        }),
        job("sphere.hom_dual", move || {
            Ok(vec![
                CheckResult::from_witness("sphere.hom_dual", "∇(w_i*) = q_i q^{-2} ∂_+(b_i), ∇(u_i*) = q² ∂_-(a_i)", s.check_hom_dual().map_err(err)?),
                CheckResult::from_witness("sphere.fhat_crosscheck", "translation route agrees with the expanded formula", s.fhat_crosscheck().map_err(err)?),
            ])
        }),
        job("sphere.flatness", move || {
            let probes: Vec<AlgElement> = s.base_words(len.min(2)).into_iter().map(AlgElement::word).collect();
            one(CheckResult::from_witness("sphere.flatness", "∇_1(φ) = 0 and F(φb) = 0", s.flatness_witness(&probes).map_err(err)?))
        }),
        job("sphere.integral", move || {
            one(CheckResult::from_witness("sphere.integral", "Λ restricted to B-monomials", s.integral_restriction(len, &haar_value).map_err(err)?))
        }),
        job("sphere.leibniz", move || {
            one(CheckResult::from_witness("sphere.leibniz", "∇(fb) = ∇(f)b + f(db)", s.leibniz_witness(seed, cases.min(20), len.min(2)).map_err(err)?))
        }),
        job("sphere.control", move || {
            let q = ScalarRF::q_pow;
            let bad = s.clone().with_q_constants([ScalarRF::one(), q(-3), q(-2)]);
            let inverted = |l: u32| haar_value(l).inv().expect("nonzero");
            Ok(vec![
                CheckResult::negative_control("sphere.qdet.control", "q_2 = q^{-3}", bad.check_qdet()),
                CheckResult::negative_control("sphere.integral.control", "inverted Haar table", s.integral_restriction(len.min(4), &inverted).map_err(err)?),
            ])
        }),
    ];
    jobs.extend(sphere_ladder_jobs(s, opts));
    jobs
}

// ---------------------------------------------------------------- matrix

fn matrix_ladder_jobs(m: &MatrixCalculus) -> Vec<Job<'_>> {
    vec![
        job("matrix.ladder", move || {
            let out = m.phi_ladder().map_err(err)?;
            Ok(vec![
                CheckResult::from_witness("matrix.ladder", "Φ_k ladder commutes", out.first_failure().map(str::to_string)),
                CheckResult::from_witness("matrix.phi_bijective", "Φ_k are bijective", (!out.bijective.iter().all(|b| *b)).then(|| "some Φ_k is singular".to_string())),
            ])
        }),
        job("matrix.ladder.control", move || {
            let bad = m.clone().with_flipped_phi().phi_ladder().map_err(err)?;
            one(CheckResult::negative_control("matrix.ladder.control", "sign of Φ flipped", bad.first_failure().map(str::to_string)))
        }),
    ]
}

fn matrix_d_squared(m: &MatrixCalculus) -> Result<Option<String>, String> {
    for k in 0..m.top().saturating_sub(1) {
        for w in m.full_basis(k) {
            let dd = m.d(&m.d(&w).map_err(err)?).map_err(err)?;
            if !dd.is_zero() {
                return Ok(Some(format!("d²({w}) = {dd}")));
            }
        }
    }
    Ok(None)
}

fn matrix_suite(m: &MatrixCalculus) -> Vec<Job<'_>> {
    let mut jobs = vec![
        job("matrix.structure", move || {
            let w = m.basis().antisymmetry_witness().map(|(i, j, l)| format!("c_{{{i}{j}{l}}} breaks antisymmetry"));
            one(CheckResult::from_witness("matrix.antisymmetry", "c_ijl totally antisymmetric", w))
        }),
        job("matrix.d_squared", move || one(CheckResult::from_witness("matrix.d_squared", "d² = 0 on basis forms", matrix_d_squared(m)?))),
        job("matrix.connection", move || {
            let mut law = None;
            let probe = MatElement::unit(m.n(), 1, 0).plus(m.basis().element(m.basis().dim() - 1));
            for f in m.full_basis(1) {
                let lhs = m.nabla(&f.right_mul(&probe));
                let rhs = m.nabla(&f).mul(&probe).plus(&m.apply(&f, &m.d_function(&probe)));
                if lhs != rhs {
                    law = Some(format!("f = {f}"));
                    break;
                }
            }
            let mut flat = None;
            for f in m.full_basis(2) {
                let c = m.curvature(&f).map_err(err)?;
                if !c.is_zero() {
                    flat = Some(format!("F({f}) = {c}"));
                    break;
                }
            }
            let trace = m.full_basis(1).into_iter().find(|f| !m.trace_integral(&m.nabla(f)).is_zero()).map(|f| format!("tr ∇({f}) ≠ 0"));
            let (rank, coker) = m.nabla_rank();
            let dim = (coker != 1).then(|| format!("rank {rank}, cokernel {coker}"));
            Ok(vec![
                CheckResult::from_witness("matrix.hom_connection", "∇(fa) = ∇(f)a + f(da)", law),
                CheckResult::from_witness("matrix.flat", "F ≡ 0 on basis 2-forms", flat),
                CheckResult::from_witness("matrix.trace_kills_image", "tr ∘ ∇ = 0 on basis inputs", trace),
                CheckResult::from_witness("matrix.cokernel", "dim coker ∇ = 1", dim).with_note(format!("rank {rank}, cokernel {coker}")),
            ])
        }),
        job("matrix.control", move || {
            let bad = m.clone().with_bracket_sign(crate::scalars::GaussRat::from_ints(-1, 0));
            one(CheckResult::negative_control("matrix.control", "bracket sign flipped in d", matrix_d_squared(&bad)?))
        }),
    ];
    jobs.extend(matrix_ladder_jobs(m));
    jobs
}

