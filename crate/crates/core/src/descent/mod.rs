//! Descent of the 3D hom-connection on O_q(SL(2)) to its ℤ-degree-zero part,
//! the Podleś sphere B.
//!
//! One-forms on B are ω_+y + ω_−x (right coefficients) with |y| = −2 and
//! |x| = 2. A right B-linear f: Ω¹(B) → B is stored as the pair (z_+, z_−)
//! with f(ω_+y + ω_−x) = z_+y + z_−x; the quantum determinant identities make
//! this equivalent to dual-basis coordinates.

use std::collections::HashMap;

use thiserror::Error;

use crate::dga::FormElement;
use crate::exec::par_map;
use crate::homconn::HomConnection;
use crate::integrals::{lambda_with, IntegralError};
use crate::linalg::{Echelon, SparseVec};
use crate::ncalg::{AlgElement, AlgError, Presentation, Word, ZDegree};
use crate::sample;
use crate::scalars::ScalarRF;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescentError {
    #[error("missing {0}")]
    Missing(String),
    #[error("expected ℤ-degree {expected}: {element}")]
    DegreeMismatch { expected: i64, element: String },
    #[error("form is not in Ω¹(B): {0}")]
    NotBaseForm(String),
    #[error("values are not the restriction of a right B-linear map: {0}")]
    Inconsistent(String),
    #[error("Sweedler fixture disagrees with the coproduct of {0}")]
    SweedlerMismatch(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Integral(#[from] IntegralError),
}

/// Keeps the ℤ-degree-zero terms.
pub fn project_degree0(pres: &Presentation, a: &AlgElement) -> AlgElement {
    a.filter(|w| pres.word_degree(w) == Some(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BHomForm {
    /// f(ω_+ y) = plus·y, |plus| = 2
    pub plus: AlgElement,
    /// f(ω_− x) = minus·x, |minus| = −2
    pub minus: AlgElement,
}

impl BHomForm {
    pub fn is_zero(&self) -> bool {
        self.plus.is_zero() && self.minus.is_zero()
    }

    pub fn add_scaled(&mut self, o: &BHomForm, c: &ScalarRF) {
        self.plus.add_scaled(&o.plus, c);
        self.minus.add_scaled(&o.minus, c);
    }
}

/// Which summand a one-form lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// A Sweedler expansion Σ x_(1) ⊗ x_(2).
pub type Sweedler = Vec<(AlgElement, AlgElement)>;

pub fn sweedler_from_coproduct(pres: &Presentation, a: &AlgElement) -> Result<Sweedler, AlgError> {
    Ok(pres
        .coproduct(a)?
        .terms()
        .map(|((u, v), c)| (AlgElement::term(u.clone(), c.clone()), AlgElement::word(v.clone())))
        .collect())
}

/// The six standard generators of Ω¹(B), as (left coefficient, form index).
fn generator_specs() -> [(&'static [&'static str], Side); 6] {
    [
        (&["alpha", "alpha"], Side::Minus),
        (&["alpha", "gamma"], Side::Minus),
        (&["gamma", "gamma"], Side::Minus),
        (&["beta", "beta"], Side::Plus),
        (&["beta", "delta"], Side::Plus),
        (&["delta", "delta"], Side::Plus),
    ]
}

#[derive(Clone)]
pub struct Sphere {
    conn: HomConnection,
    minus: usize,
    zero: usize,
    plus: usize,
    b: [AlgElement; 3],
    a: [AlgElement; 3],
    qs: [ScalarRF; 3],
    sweedler_plus: Sweedler,
    sweedler_minus: Sweedler,
}

impl Sphere {
    /// `sweedler_plus` expands Δ(α²), `sweedler_minus` expands Δ(δ²).
    pub fn new(conn: HomConnection, sweedler_plus: Sweedler, sweedler_minus: Sweedler) -> Result<Self, DescentError> {
        let calc = conn.calc();
        let form = |n: &str| calc.form_index(n).ok_or_else(|| DescentError::Missing(format!("one-form {n}")));
        let (minus, zero, plus) = (form("w-")?, form("w0")?, form("w+")?);
        let pres = calc.pres();
        for g in ["alpha", "beta", "gamma", "delta"] {
            pres.gen_index(g).ok_or_else(|| DescentError::Missing(format!("generator {g}")))?;
        }
        pres.grading().ok_or(AlgError::GradingAbsent)?;
        let g = |n: &str| pres.gen(n);
        let m = |x: &str, y: &str| pres.mul(&g(x), &g(y));
        let q = ScalarRF::q_pow;
        let b = [m("alpha", "alpha"), m("gamma", "gamma"), m("alpha", "gamma")];
        let a = [m("delta", "delta"), m("beta", "beta").scale(&q(2)), m("beta", "delta").scale(&-(&q(1) + &q(-1)))];
        let qs = [ScalarRF::one(), q(-4), q(-2)];
        Ok(Sphere { conn, minus, zero, plus, b, a, qs, sweedler_plus, sweedler_minus })
    }

    pub fn with_q_constants(mut self, qs: [ScalarRF; 3]) -> Self {
        self.qs = qs;
        self
    }

    pub fn conn(&self) -> &HomConnection {
        &self.conn
    }

    pub fn pres(&self) -> &Presentation {
        self.conn.calc().pres()
    }

    fn mul(&self, x: &AlgElement, y: &AlgElement) -> AlgElement {
        self.pres().mul(x, y)
    }

    pub fn b(&self, i: usize) -> &AlgElement {
        &self.b[i]
    }

    pub fn a(&self, i: usize) -> &AlgElement {
        &self.a[i]
    }

    pub fn q_const(&self, i: usize) -> &ScalarRF {
        &self.qs[i]
    }

    /// Σ b_i a_i = Σ q_i a_i b_i = 1.
    pub fn check_qdet(&self) -> Option<String> {
        let mut s1 = AlgElement::zero();
        let mut s2 = AlgElement::zero();
        for i in 0..3 {
            s1.add_scaled(&self.mul(&self.b[i], &self.a[i]), &ScalarRF::one());
            s2.add_scaled(&self.mul(&self.a[i], &self.b[i]), &self.qs[i]);
        }
        let one = AlgElement::one();
        if s1 != one {
            return Some(format!("Σ b_i a_i = {}", self.pres().render(&s1)));
        }
        (s2 != one).then(|| format!("Σ q_i a_i b_i = {}", self.pres().render(&s2)))
    }

    /// Σ_i w_i w_i*(w_j) = w_j and Σ_i u_i u_i*(u_j) = u_j.
    pub fn check_dual_basis(&self) -> Option<String> {
        for j in 0..3 {
            let mut w = AlgElement::zero();
            let mut u = AlgElement::zero();
            for i in 0..3 {
                w.add_scaled(&self.mul(&self.a[i], &self.mul(&self.b[i], &self.a[j])), &self.qs[i]);
                u.add_scaled(&self.mul(&self.b[i], &self.mul(&self.a[i], &self.b[j])), &ScalarRF::one());
            }
            if w != self.a[j] {
                return Some(format!("w_{} not reproduced", j + 1));
            }
            if u != self.b[j] {
                return Some(format!("u_{} not reproduced", j + 1));
            }
        }
        None
    }

    /// Compares each Sweedler fixture with the coproduct computed from the Hopf data.
    pub fn check_sweedler(&self) -> Result<(), DescentError> {
        let pres = self.pres();
        for (name, gen, pairs) in [("alpha^2", "alpha", &self.sweedler_plus), ("delta^2", "delta", &self.sweedler_minus)] {
            let x = pres.pow(&pres.gen(gen), 2);
            let mut want = pres.coproduct(&x)?;
            for (u, v) in pairs {
                let mut neg = crate::ncalg::TensorElement::zero();
                neg.add_product(u, v, &-ScalarRF::one());
                want = add_tensor(&want, &neg);
            }
            if !want.is_zero() {
                return Err(DescentError::SweedlerMismatch(name.into()));
            }
        }
        Ok(())
    }

    pub fn w_star(&self, i: usize) -> BHomForm {
        // w_i*(ω_+ y) = q_i b_i y
        BHomForm { plus: self.b[i].scale(&self.qs[i]), minus: AlgElement::zero() }
    }

    pub fn u_star(&self, i: usize) -> BHomForm {
        // u_i*(ω_− x) = a_i x
        BHomForm { plus: AlgElement::zero(), minus: self.a[i].clone() }
    }

    /// f from dual-basis coordinates: Σ w_i* v_i + Σ u_i* v'_i.
    pub fn from_dual_coords(&self, v: &[AlgElement; 3], vp: &[AlgElement; 3]) -> BHomForm {
        let mut f = BHomForm::default();
        for i in 0..3 {
            f.add_scaled(&self.act(&self.w_star(i), &v[i]), &ScalarRF::one());
            f.add_scaled(&self.act(&self.u_star(i), &vp[i]), &ScalarRF::one());
        }
        f
    }

    /// Builds f from any right B-linear rule given on ω_+y and ω_−x.
    pub fn from_fn(&self, h: impl Fn(Side, &AlgElement) -> AlgElement) -> BHomForm {
        self.try_from_fn(|s, c| Ok::<_, DescentError>(h(s, c))).expect("infallible")
    }

    pub fn try_from_fn<E>(&self, mut h: impl FnMut(Side, &AlgElement) -> Result<AlgElement, E>) -> Result<BHomForm, E> {
        let mut f = BHomForm::default();
        for j in 0..3 {
            f.plus.add_scaled(&self.mul(&h(Side::Plus, &self.a[j])?, &self.b[j]), &self.qs[j]);
            f.minus.add_scaled(&self.mul(&h(Side::Minus, &self.b[j])?, &self.a[j]), &ScalarRF::one());
        }
        Ok(f)
    }

    /// (f c)(ω) = f(c ω); degree-zero c commutes with ω_±.
    pub fn act(&self, f: &BHomForm, c: &AlgElement) -> BHomForm {
        BHomForm { plus: self.mul(&f.plus, c), minus: self.mul(&f.minus, c) }
    }

    pub fn eval_side(&self, f: &BHomForm, side: Side, coeff: &AlgElement) -> AlgElement {
        match side {
            Side::Plus => self.mul(&f.plus, coeff),
            Side::Minus => self.mul(&f.minus, coeff),
        }
    }

    /// Right coefficients (y, x) of a form ω_+y + ω_−x in Ω¹(B).
    pub fn split(&self, w: &FormElement) -> Result<(AlgElement, AlgElement), DescentError> {
        let calc = self.conn.calc();
        let r = calc.to_right(w);
        let get = |k: usize| r.get(&Word::letter(k)).cloned().unwrap_or_default();
        let (y, z, x) = (get(self.plus), get(self.zero), get(self.minus));
        let pres = self.pres();
        let deg_ok = |e: &AlgElement, d: i64| e.is_zero() || pres.zdegree(e) == Ok(ZDegree::Degree(d));
        if !z.is_zero() || !deg_ok(&y, -2) || !deg_ok(&x, 2) {
            return Err(DescentError::NotBaseForm(calc.render(w)));
        }
        Ok((y, x))
    }

    pub fn eval(&self, f: &BHomForm, w: &FormElement) -> Result<AlgElement, DescentError> {
        let (y, x) = self.split(w)?;
        Ok(self.eval_side(f, Side::Plus, &y).plus(&self.eval_side(f, Side::Minus, &x)))
    }

    fn generator_form(&self, coeff: &[&str], side: Side) -> FormElement {
        let pres = self.pres();
        let c = pres.mul_all(coeff.iter().map(|g| pres.gen(g)).collect::<Vec<_>>().iter());
        let k = if side == Side::Plus { self.plus } else { self.minus };
        FormElement::basis(Word::letter(k), c)
    }

    /// Values on α²ω_−, αγω_−, γ²ω_−, β²ω_+, βδω_+, δ²ω_+.
    pub fn generator_values(&self, f: &BHomForm) -> Result<Vec<AlgElement>, DescentError> {
        generator_specs().iter().map(|(c, s)| self.eval(f, &self.generator_form(c, *s))).collect()
    }

    /// Admits six candidate values after checking they extend to a right B-linear map.
    pub fn from_generator_values(&self, values: &[AlgElement]) -> Result<BHomForm, DescentError> {
        let specs = generator_specs();
        if values.len() != specs.len() {
            return Err(DescentError::Inconsistent(format!("expected 6 values, got {}", values.len())));
        }
        // each generator is ω_± times a scalar multiple of a_i or b_i
        let mut coeffs = Vec::new();
        for (c, s) in &specs {
            let (y, x) = self.split(&self.generator_form(c, *s))?;
            coeffs.push(if *s == Side::Plus { y } else { x });
        }
        let pres = self.pres();
        let ratio = |x: &AlgElement, base: &AlgElement| -> Option<ScalarRF> {
            let (w, c) = base.leading()?;
            let k = x.coeff(w).checked_div(c).ok()?;
            (&base.scale(&k) == x).then_some(k)
        };
        // plus from ω_+ a_j values, minus from ω_− b_j values
        let mut f = BHomForm::default();
        for (j, bj) in self.b.iter().enumerate() {
            let (k, v) = (0..3).find_map(|t| ratio(&coeffs[t], bj).map(|k| (k, &values[t]))).ok_or_else(|| DescentError::Missing(format!("b_{}", j + 1)))?;
            f.minus.add_scaled(&pres.mul(v, &self.a[j]), &k.inv().expect("nonzero"));
        }
        for (j, aj) in self.a.iter().enumerate() {
            let (k, v) = (3..6).find_map(|t| ratio(&coeffs[t], aj).map(|k| (k, &values[t]))).ok_or_else(|| DescentError::Missing(format!("a_{}", j + 1)))?;
            f.plus.add_scaled(&pres.mul(v, &self.b[j]), &(&self.qs[j] * &k.inv().expect("nonzero")));
        }
        let back = self.generator_values(&f)?;
        if let Some(t) = (0..6).find(|&t| back[t] != values[t]) {
            return Err(DescentError::Inconsistent(format!("generator {} would take {}", t + 1, pres.render(&back[t]))));
        }
        Ok(f)
    }

    fn partial(&self, k: usize, a: &AlgElement) -> AlgElement {
        self.conn.calc().tmd().partial(k, a)
    }

    /// f̂(ω_±) = Σ f(ω_± S(x_(1))) x_(2) with x = α² for ω_+ and δ² for ω_−.
    pub fn fhat(&self, f: &BHomForm, side: Side) -> Result<AlgElement, DescentError> {
        let pres = self.pres();
        let pairs = if side == Side::Plus { &self.sweedler_plus } else { &self.sweedler_minus };
        let mut out = AlgElement::zero();
        for (x1, x2) in pairs {
            let s = pres.antipode(x1, 1)?;
            out.add_scaled(&pres.mul(&self.eval_side(f, side, &s), x2), &ScalarRF::one());
        }
        Ok(out)
    }

    /// ∇^{coH}(f) = q^{-2}∂_+(f̂(ω_+)) + q²∂_−(f̂(ω_−)), through the translation map.
    pub fn nabla_coh(&self, f: &BHomForm) -> Result<AlgElement, DescentError> {
        let q = ScalarRF::q_pow;
        let mut out = self.partial(self.plus, &self.fhat(f, Side::Plus)?).scale(&q(-2));
        out.add_scaled(&self.partial(self.minus, &self.fhat(f, Side::Minus)?), &q(2));
        Ok(out)
    }

    /// The expanded formula in terms of the values on the six generators.
    pub fn nabla_coh_explicit(&self, f: &BHomForm) -> Result<AlgElement, DescentError> {
        let pres = self.pres();
        let q = ScalarRF::q_pow;
        let v = self.generator_values(f)?;
        let (a2m, agm, g2m, b2p, bdp, d2p) = (&v[0], &v[1], &v[2], &v[3], &v[4], &v[5]);
        let g = |n: &str| pres.gen(n);
        let m = |x: &str, y: &str| pres.mul(&g(x), &g(y));
        let (dm, dp) = (self.minus, self.plus);
        let mut out = AlgElement::zero();
        let mut add = |x: AlgElement, c: ScalarRF| out.add_scaled(&x, &c);
        add(pres.mul(&self.partial(dm, a2m), &m("delta", "delta")), q(2));
        add(pres.mul(&self.partial(dm, agm), &m("beta", "delta")), -(&q(3) + &q(1)));
        add(pres.mul(&self.partial(dm, g2m), &m("beta", "beta")), q(4));
        add(pres.mul(&self.partial(dp, b2p), &m("gamma", "gamma")), q(-4));
        add(pres.mul(&self.partial(dp, bdp), &m("alpha", "gamma")), -(&q(-3) + &q(-5)));
        add(pres.mul(&self.partial(dp, d2p), &m("alpha", "alpha")), q(-2));
        let s = &q(1) + &q(-1);
        let t1 = g2m.scale(&q(2)).minus(d2p);
        let t2 = a2m.minus(&b2p.scale(&q(-2)));
        let t3 = agm.scale(&q(1)).minus(&bdp.scale(&q(-1)));
        let ad = m("alpha", "delta").plus(&m("beta", "gamma").scale(&q(-1)));
        add(pres.mul(&t1, &m("alpha", "beta")), s.clone());
        add(pres.mul(&t2, &m("gamma", "delta")), s.clone());
        add(pres.mul(&t3, &ad), -s);
        Ok(out)
    }

    /// ∇^{coH}(w_i*) = q_i q^{-2}∂_+(b_i) and ∇^{coH}(u_i*) = q²∂_−(a_i).
    pub fn check_hom_dual(&self) -> Result<Option<String>, DescentError> {
        let q = ScalarRF::q_pow;
        for i in 0..3 {
            let got = self.nabla_coh(&self.w_star(i))?;
            let want = self.partial(self.plus, &self.b[i]).scale(&(&self.qs[i] * &q(-2)));
            if got != want {
                return Ok(Some(format!("∇(w_{}*) = {}", i + 1, self.pres().render(&got))));
            }
            let got = self.nabla_coh(&self.u_star(i))?;
            let want = self.partial(self.minus, &self.a[i]).scale(&q(2));
            if got != want {
                return Ok(Some(format!("∇(u_{}*) = {}", i + 1, self.pres().render(&got))));
            }
        }
        Ok(None)
    }

    /// Translation-map route against the expanded formula on the six dual generators.
    pub fn fhat_crosscheck(&self) -> Result<Option<String>, DescentError> {
        let duals = (0..3).map(|i| (format!("w_{}*", i + 1), self.w_star(i))).chain((0..3).map(|i| (format!("u_{}*", i + 1), self.u_star(i))));
        for (name, f) in duals {
            let x = self.nabla_coh(&f)?;
            let y = self.nabla_coh_explicit(&f)?;
            if x != y {
                let pres = self.pres();
                return Ok(Some(format!("{name}: translation map gives {}, expanded formula gives {}", pres.render(&x), pres.render(&y))));
            }
        }
        Ok(None)
    }

    /// The coefficient of ω_+ω_− in dω for ω = xω_− + yω_+ (left coefficients).
    pub fn sphere_d(&self, x: &AlgElement, y: &AlgElement) -> Result<AlgElement, DescentError> {
        let pres = self.pres();
        for (e, d) in [(x, 2), (y, -2)] {
            if !e.is_zero() && pres.zdegree(e)? != ZDegree::Degree(d) {
                return Err(DescentError::DegreeMismatch { expected: d, element: pres.render(e) });
            }
        }
        Ok(self.partial(self.plus, x).minus(&self.partial(self.minus, y).scale(&ScalarRF::q_pow(-2))))
    }

    fn right_form(&self, k: usize, c: &AlgElement) -> FormElement {
        self.conn.calc().right_mul(&FormElement::basis(Word::letter(k), AlgElement::one()), c)
    }

    fn side_form(&self, side: Side, c: &AlgElement) -> FormElement {
        self.right_form(if side == Side::Plus { self.plus } else { self.minus }, c)
    }

    /// Right coefficient of ω_−ω_+ in a 2-form of B.
    fn top_coeff(&self, w: &FormElement) -> Result<AlgElement, DescentError> {
        let calc = self.conn.calc();
        let r = calc.to_right(w);
        let key = Word::from_letters([self.minus, self.plus]);
        if r.keys().any(|k| *k != key) {
            return Err(DescentError::NotBaseForm(calc.render(w)));
        }
        Ok(r.get(&key).cloned().unwrap_or_default())
    }

    /// ∇_1(φc)(ω) = ∇^{coH}((φc)ω) + (φc)(dω), with φ dual to ω_−ω_+.
    pub fn nabla1_coh(&self, c: &AlgElement) -> Result<BHomForm, DescentError> {
        let calc = self.conn.calc();
        let pres = self.pres();
        let phi = |w: &FormElement| -> Result<AlgElement, DescentError> { Ok(pres.mul(c, &self.top_coeff(w)?)) };
        self.try_from_fn(|side, coeff| {
            let omega = self.side_form(side, coeff);
            let g = self.try_from_fn(|s2, c2| phi(&calc.wedge(&omega, &self.side_form(s2, c2))))?;
            let d = calc.d(&omega).map_err(|e| DescentError::NotBaseForm(e.to_string()))?;
            Ok(self.nabla_coh(&g)?.plus(&phi(&d)?))
        })
    }

    /// Ψ = Ψ_+ − q²Ψ_− with Ψ_+(w) = Σ u_i* w_i*(w) and Ψ_−(u) = Σ q_i^{-1} w_i* u_i*(u).
    pub fn psi(&self, y: &AlgElement, x: &AlgElement) -> BHomForm {
        let mut out = BHomForm::default();
        for i in 0..3 {
            // w_i*(ω_+ y) = q_i b_i y, u_i*(ω_− x) = a_i x
            let wy = self.mul(&self.b[i], y).scale(&self.qs[i]);
            out.add_scaled(&self.act(&self.u_star(i), &wy), &ScalarRF::one());
            let ux = self.mul(&self.a[i], x);
            let k = &self.qs[i].inv().expect("nonzero") * &-ScalarRF::q_pow(2);
            out.add_scaled(&self.act(&self.w_star(i), &ux), &k);
        }
        out
    }

    /// ∇^{coH}_1(φ) = 0 and F(φb) = ∇^{coH}(∇^{coH}_1(φb)) = 0 for the given B elements.
    pub fn flatness_witness(&self, probes: &[AlgElement]) -> Result<Option<String>, DescentError> {
        let n = self.nabla1_coh(&AlgElement::one())?;
        if !n.is_zero() {
            return Ok(Some(format!("∇_1(φ) ≠ 0: plus {}, minus {}", self.pres().render(&n.plus), self.pres().render(&n.minus))));
        }
        for b in probes {
            let f = self.nabla_coh(&self.nabla1_coh(b)?)?;
            if !f.is_zero() {
                return Ok(Some(format!("F(φ·{}) = {}", self.pres().render(b), self.pres().render(&f))));
            }
        }
        Ok(None)
    }

    /// Degree-zero normal words of length ≤ L.
    pub fn base_words(&self, max_len: usize) -> Vec<Word> {
        let pres = self.pres();
        pres.normal_words(max_len).into_iter().filter(|w| pres.word_degree(w) == Some(0)).collect()
    }

    fn words_of_degree(&self, max_len: usize, d: i64) -> Vec<Word> {
        let pres = self.pres();
        pres.normal_words(max_len).into_iter().filter(|w| pres.word_degree(w) == Some(d)).collect()
    }

    /// Ψ∘d = ∇_1∘Θ* on B-monomials and d = Θ∘∇∘Ψ on ω_+y, ω_−x with |y|, |x| ≤ L,
    /// plus bijectivity of Ψ on that truncation.
    pub fn ladder(&self, max_len: usize) -> Result<Vec<Option<String>>, DescentError> {
        let calc = self.conn.calc();
        let pres = self.pres();
        let base = self.base_words(max_len);
        let sq1 = par_map(&base, |w| -> Result<Option<String>, DescentError> {
            let b = AlgElement::word(w.clone());
            let (y, x) = self.split(&calc.d_function(&b))?;
            let lhs = self.psi(&y, &x);
            let rhs = self.nabla1_coh(&b)?;
            Ok((lhs != rhs).then(|| format!("Ψ(d {}) ≠ ∇_1(φ {})", pres.render_word(w), pres.render_word(w))))
        });
        let mut inputs: Vec<(Side, Word)> = self.words_of_degree(max_len, -2).into_iter().map(|w| (Side::Plus, w)).collect();
        inputs.extend(self.words_of_degree(max_len, 2).into_iter().map(|w| (Side::Minus, w)));
        let sq2 = par_map(&inputs, |(side, w)| -> Result<Option<String>, DescentError> {
            let c = AlgElement::word(w.clone());
            let omega = self.side_form(*side, &c);
            let d = calc.d(&omega).map_err(|e| DescentError::NotBaseForm(e.to_string()))?;
            let lhs = self.top_coeff(&d)?;
            let (y, x) = if *side == Side::Plus { (c, AlgElement::zero()) } else { (AlgElement::zero(), c) };
            let rhs = self.nabla_coh(&self.psi(&y, &x))?;
            Ok((lhs != rhs).then(|| format!("d(ω·{}) ≠ Θ∇Ψ", pres.render_word(w))))
        });
        let first = |v: Vec<Result<Option<String>, DescentError>>| -> Result<Option<String>, DescentError> {
            let mut out = None;
            for r in v {
                if let Some(w) = r? {
                    out.get_or_insert(w);
                }
            }
            Ok(out)
        };
        let mut report = vec![first(sq1)?, first(sq2)?];
        // Ψ bijective on the truncation: inputs map to independent pairs (z_+, z_−)
        let mut index: HashMap<(bool, Word), usize> = HashMap::new();
        let mut ech: Echelon<ScalarRF> = Echelon::new();
        for (side, w) in &inputs {
            let c = AlgElement::word(w.clone());
            let f = if *side == Side::Plus { self.psi(&c, &AlgElement::zero()) } else { self.psi(&AlgElement::zero(), &c) };
            let mut v = SparseVec::new();
            for (tag, e) in [(true, &f.plus), (false, &f.minus)] {
                for (u, k) in e.terms() {
                    let n = index.len();
                    v.insert(*index.entry((tag, u.clone())).or_insert(n), k.clone());
                }
            }
            ech.push(v);
        }
        report.push((ech.rank() != inputs.len() || index.len() != inputs.len()).then(|| format!("Ψ has rank {} on {} inputs", ech.rank(), inputs.len())));
        Ok(report)
    }

    /// Every B-monomial m of length ≤ L is ∇^{coH}(f) + λ(m)·1 for some f, with λ the
    /// restricted Haar functional, and λ∘∇^{coH} vanishes on the sampled hom-forms.
    pub fn integral_restriction(&self, max_len: usize, table: &dyn Fn(u32) -> ScalarRF) -> Result<Option<String>, DescentError> {
        let pres = self.pres();
        let src_plus = self.words_of_degree(max_len, 2);
        let src_minus = self.words_of_degree(max_len, -2);
        let mut sources: Vec<BHomForm> = src_plus.iter().map(|w| BHomForm { plus: AlgElement::word(w.clone()), minus: AlgElement::zero() }).collect();
        sources.extend(src_minus.iter().map(|w| BHomForm { plus: AlgElement::zero(), minus: AlgElement::word(w.clone()) }));
        let images = par_map(&sources, |f| self.nabla_coh(f));
        let mut rows: HashMap<Word, usize> = HashMap::new();
        let mut row = |w: &Word| {
            let k = rows.len();
            *rows.entry(w.clone()).or_insert(k)
        };
        let mut ech: Echelon<ScalarRF> = Echelon::new();
        for (img, f) in images.into_iter().zip(&sources) {
            let img = img?;
            let l = lambda_with(pres, &img, table)?;
            if !l.is_zero() {
                return Ok(Some(format!("λ(∇^coH(f)) = {l} for f with plus {}, minus {}", pres.render(&f.plus), pres.render(&f.minus))));
            }
            ech.push(img.terms().map(|(w, c)| (row(w), c.clone())).collect());
        }
        for w in self.base_words(max_len) {
            let m = AlgElement::word(w.clone());
            let l = lambda_with(pres, &m, table)?;
            let target: SparseVec<ScalarRF> = m.minus(&AlgElement::scalar(l)).terms().map(|(u, c)| (row(u), c.clone())).collect();
            if !target.is_empty() && !ech.contains(&target) {
                return Ok(Some(format!("{} − λ({}) is not in the image of ∇^coH within the truncation", pres.render_word(&w), pres.render_word(&w))));
            }
        }
        Ok(None)
    }

    /// ∇^{coH}(f b) = ∇^{coH}(f) b + f(db) and |∇^{coH}(f)| = 0 on seeded random inputs.
    pub fn leibniz_witness(&self, seed: u64, cases: usize, max_len: usize) -> Result<Option<String>, DescentError> {
        let pres = self.pres();
        let calc = self.conn.calc();
        let mut rng = sample::rng(seed);
        let p = self.words_of_degree(max_len, 2);
        let m = self.words_of_degree(max_len, -2);
        let gens = [pres.mul(&pres.gen("alpha"), &pres.gen("beta")), pres.mul(&pres.gen("gamma"), &pres.gen("delta")), pres.mul(&pres.gen("beta"), &pres.gen("gamma"))];
        for case in 0..cases {
            let f = BHomForm { plus: sample::element(&mut rng, &p, 2), minus: sample::element(&mut rng, &m, 2) };
            let b = &gens[case % 3];
            let nf = self.nabla_coh(&f)?;
            if !nf.is_zero() && pres.zdegree(&nf)? != ZDegree::Degree(0) {
                return Ok(Some(format!("∇^coH(f) left B: {}", pres.render(&nf))));
            }
            let lhs = self.nabla_coh(&self.act(&f, b))?;
            let rhs = pres.mul(&nf, b).plus(&self.eval(&f, &calc.d_function(b))?);
            if lhs != rhs {
                return Ok(Some(format!("Leibniz fails for b = {}", pres.render(b))));
            }
        }
        Ok(None)
    }
}

fn add_tensor(x: &crate::ncalg::TensorElement, y: &crate::ncalg::TensorElement) -> crate::ncalg::TensorElement {
    let mut out = x.clone();
    for ((a, b), c) in y.terms() {
        out.add_term(a.clone(), b.clone(), c.clone());
    }
    out
}

#[cfg(test)]
pub(crate) mod fixtures {
    use std::sync::Arc;

    use super::*;
    use crate::dga::fixtures::sl2_calculus;

    pub fn sphere() -> Sphere {
        let conn = HomConnection::new(Arc::new(sl2_calculus()));
        let pres = conn.calc().pres();
        let sp = sweedler_from_coproduct(pres, &pres.pow(&pres.gen("alpha"), 2)).unwrap();
        let sm = sweedler_from_coproduct(pres, &pres.pow(&pres.gen("delta"), 2)).unwrap();
        Sphere::new(conn, sp, sm).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::sphere;
    use super::*;
    use crate::integrals::haar_value;

    #[test]
    fn projection() {
        let s = sphere();
        let pres = s.pres();
        let ab = pres.mul(&pres.gen("alpha"), &pres.gen("beta"));
        assert_eq!(project_degree0(pres, &ab), ab);
        assert!(project_degree0(pres, &pres.gen("alpha")).is_zero());
        let bg = pres.mul(&pres.gen("beta"), &pres.gen("gamma"));
        let x = AlgElement::one().plus(&pres.gen("alpha")).plus(&bg);
        assert_eq!(project_degree0(pres, &x), AlgElement::one().plus(&bg));
    }

    #[test]
    fn determinant_and_dual_basis() {
        let s = sphere();
        assert_eq!(s.check_qdet(), None);
        assert_eq!(s.check_dual_basis(), None);
        s.check_sweedler().unwrap();
        let bad = sphere().with_q_constants([ScalarRF::one(), ScalarRF::q_pow(-3), ScalarRF::q_pow(-2)]);
        assert!(bad.check_qdet().is_some());
    }

    #[test]
    fn hom_dual_and_crosscheck() {
        let s = sphere();
        assert_eq!(s.check_hom_dual().unwrap(), None);
        assert_eq!(s.fhat_crosscheck().unwrap(), None);
        assert!(s.nabla_coh(&BHomForm::default()).unwrap().is_zero());
    }

    #[test]
    fn generator_values_roundtrip() {
        let s = sphere();
        let f = s.w_star(1);
        let v = s.generator_values(&f).unwrap();
        assert_eq!(s.from_generator_values(&v).unwrap(), f);
        let mut bad = v.clone();
        bad[0] = AlgElement::one();
        assert!(s.from_generator_values(&bad).is_err());
    }

    #[test]
    fn sphere_differential() {
        let s = sphere();
        let pres = s.pres();
        let calc = s.conn().calc();
        let ab = pres.mul(&pres.gen("alpha"), &pres.gen("beta"));
        let d = calc.d_function(&ab);
        let x = d.coeff(&Word::letter(0));
        let y = d.coeff(&Word::letter(2));
        assert!(s.sphere_d(&x, &y).unwrap().is_zero());
        let a2 = pres.pow(&pres.gen("alpha"), 2);
        assert_eq!(s.sphere_d(&a2, &AlgElement::zero()).unwrap(), calc.tmd().partial(2, &a2));
        assert!(s.sphere_d(&AlgElement::zero(), &AlgElement::zero()).unwrap().is_zero());
        assert!(matches!(s.sphere_d(&pres.gen("alpha"), &AlgElement::zero()), Err(DescentError::DegreeMismatch { .. })));
        // agrees with d in Ω(A), using ω_+ω_− = −q² ω_−ω_+
        let g2 = pres.pow(&pres.gen("gamma"), 2);
        let b2 = pres.pow(&pres.gen("beta"), 2);
        let mut w = FormElement::basis(Word::letter(0), a2.clone());
        w.add(Word::letter(2), &b2);
        let dw = calc.d(&w).unwrap();
        let want = s.sphere_d(&a2, &b2).unwrap().scale(&-ScalarRF::q_pow(2));
        assert_eq!(dw.coords().count(), 1);
        assert_eq!(dw.coeff(&Word::from_letters([0, 2])), want);
        let _ = g2;
    }

    #[test]
    fn flat_and_ladder() {
        let s = sphere();
        let base: Vec<AlgElement> = s.base_words(2).into_iter().map(AlgElement::word).collect();
        assert_eq!(s.flatness_witness(&base).unwrap(), None);
        let r = s.ladder(2).unwrap();
        assert!(r.iter().all(Option::is_none), "{r:?}");
    }

    #[test]
    fn restriction_and_leibniz() {
        let s = sphere();
        assert_eq!(s.integral_restriction(4, &haar_value).unwrap(), None);
        assert_eq!(s.leibniz_witness(0, 6, 2).unwrap(), None);
    }

    #[test]
    fn psi_closed_form_and_controls() {
        let s = sphere();
        let pres = s.pres();
        let y = pres.pow(&pres.gen("beta"), 2);
        let x = pres.mul(&pres.gen("alpha"), &pres.gen("gamma"));
        let f = s.psi(&y, &x);
        assert_eq!(f.plus, x.scale(&-ScalarRF::q_pow(2)));
        assert_eq!(f.minus, y);
        let flipped = |l: u32| haar_value(l).inv().unwrap();
        assert!(s.integral_restriction(4, &flipped).unwrap().is_some());
        let bad = sphere().with_q_constants([ScalarRF::one(), ScalarRF::q_pow(-3), ScalarRF::q_pow(-2)]);
        assert!(bad.ladder(2).unwrap().iter().any(Option::is_some));
    }
}
