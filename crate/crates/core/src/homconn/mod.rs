//! Right-linear hom-forms and the hom-connection of a free twisted multi-derivation.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::dga::{Calculus, DgaError, FormElement};
use crate::ncalg::{AlgElement, Word};
use crate::scalars::ScalarRF;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("hom-form degree {found} does not fit (expected {expected})")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("element is not a unit: {0}")]
    NotAUnit(String),
    #[error(transparent)]
    Dga(#[from] DgaError),
}

/// A right A-linear map Ω^n → A, stored by its values on the basis n-forms.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HomForm {
    degree: usize,
    values: BTreeMap<Word, AlgElement>,
}

impl HomForm {
    pub fn zero(degree: usize) -> Self {
        HomForm { degree, values: BTreeMap::new() }
    }

    /// The dual of a basis word: e ↦ 1, other basis words ↦ 0.
    pub fn dual(e: Word) -> Self {
        let mut f = Self::zero(e.len());
        f.set(e, AlgElement::one());
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn value(&self, e: &Word) -> AlgElement {
        self.values.get(e).cloned().unwrap_or_default()
    }

    pub fn values(&self) -> impl Iterator<Item = (&Word, &AlgElement)> {
        self.values.iter()
    }

    pub fn set(&mut self, e: Word, a: AlgElement) {
        if a.is_zero() {
            self.values.remove(&e);
        } else {
            self.values.insert(e, a);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add_scaled(&mut self, o: &HomForm, c: &ScalarRF) {
        for (e, a) in &o.values {
            let mut v = self.value(e);
            v.add_scaled(a, c);
            self.set(e.clone(), v);
        }
    }

    pub fn plus(&self, o: &HomForm) -> HomForm {
        let mut out = self.clone();
        out.add_scaled(o, &ScalarRF::one());
        out
    }

    pub fn scale(&self, c: &ScalarRF) -> HomForm {
        let mut out = HomForm::zero(self.degree);
        out.add_scaled(self, c);
        out
    }

    pub fn render(&self, calc: &Calculus) -> String {
        if self.values.is_empty() {
            return "0".into();
        }
        self.values
            .iter()
            .map(|(e, a)| format!("{} := {}", calc.render_form_word(e), calc.pres().render(a)))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// f(ω) for a form of the same degree, via the right-coefficient expansion.
pub fn hom_apply(calc: &Calculus, f: &HomForm, w: &FormElement) -> Result<AlgElement, HomError> {
    if f.degree != w.degree() {
        return Err(HomError::DegreeMismatch { expected: f.degree, found: w.degree() });
    }
    if f.degree == 0 {
        return Ok(calc.pres().mul(&f.value(&Word::empty()), &w.coeff(&Word::empty())));
    }
    let pres = calc.pres();
    let mut out = AlgElement::zero();
    for (e, r) in calc.to_right(w) {
        let v = f.value(&e);
        if !v.is_zero() {
            out.add_scaled(&pres.mul(&v, &r), &ScalarRF::one());
        }
    }
    Ok(out)
}

/// (f a)(e) = f(a e).
pub fn hom_right_act(calc: &Calculus, f: &HomForm, a: &AlgElement) -> HomForm {
    let mut out = HomForm::zero(f.degree);
    for e in calc.basis(f.degree) {
        let v = hom_apply(calc, f, &FormElement::basis(e.clone(), a.clone())).expect("degrees agree");
        out.set(e.clone(), v);
    }
    out
}

/// (f ω)(e) = f(ω e).
pub fn hom_mul_form(calc: &Calculus, f: &HomForm, w: &FormElement) -> Result<HomForm, HomError> {
    if w.degree() == 0 || w.degree() >= f.degree {
        return Err(HomError::DegreeMismatch { expected: f.degree.saturating_sub(1), found: w.degree() });
    }
    let n = f.degree - w.degree();
    let mut out = HomForm::zero(n);
    for e in calc.basis(n) {
        let we = calc.wedge(w, &FormElement::basis(e.clone(), AlgElement::one()));
        out.set(e.clone(), hom_apply(calc, f, &we)?);
    }
    Ok(out)
}

/// The hom-connection ∇(f) = Σ_i ∂^σ_i(f(ω_i)), optionally overridden by a
/// diagonal form Σ_i c_i ∂_i(f(ω_i)) (used for negative controls).
#[derive(Clone)]
pub struct HomConnection {
    calc: Arc<Calculus>,
    diagonal: Option<Vec<ScalarRF>>,
}

impl HomConnection {
    pub fn new(calc: Arc<Calculus>) -> Self {
        HomConnection { calc, diagonal: None }
    }

    pub fn diagonal(calc: Arc<Calculus>, coeffs: Vec<ScalarRF>) -> Self {
        HomConnection { calc, diagonal: Some(coeffs) }
    }

    pub fn calc(&self) -> &Calculus {
        &self.calc
    }

    pub fn calc_arc(&self) -> &Arc<Calculus> {
        &self.calc
    }

    /// ∂^σ_i = Σ_{j,k} σ̄_kj ∘ ∂_j ∘ σ̂_ki.
    pub fn twisted_partial(&self, i: usize, a: &AlgElement) -> AlgElement {
        let tmd = self.calc.tmd();
        if let Some(c) = &self.diagonal {
            return tmd.partial(i, a).scale(&c[i]);
        }
        let n = tmd.n();
        let mut out = AlgElement::zero();
        for k in 0..n {
            let h = tmd.sigma_hat_entry(k, i, a);
            if h.is_zero() {
                continue;
            }
            for (j, dj) in tmd.extend_partial(&h).into_iter().enumerate() {
                if !dj.is_zero() {
                    out.add_scaled(&tmd.sigma_bar_entry(k, j, &dj), &ScalarRF::one());
                }
            }
        }
        out
    }

    pub fn nabla(&self, f: &HomForm) -> Result<AlgElement, HomError> {
        if f.degree != 1 {
            return Err(HomError::DegreeMismatch { expected: 1, found: f.degree });
        }
        let mut out = AlgElement::zero();
        for i in 0..self.calc.n() {
            let v = f.value(&Word::letter(i));
            if !v.is_zero() {
                out.add_scaled(&self.twisted_partial(i, &v), &ScalarRF::one());
            }
        }
        Ok(out)
    }

    /// ∇_n(f)(e) = ∇(f e) + (−1)^{n+1} f(de) on basis n-forms e.
    pub fn nabla_n(&self, n: usize, f: &HomForm) -> Result<HomForm, HomError> {
        if n == 0 || n >= self.calc.top() || f.degree != n + 1 {
            return Err(HomError::DegreeMismatch { expected: n + 1, found: f.degree });
        }
        let sign = if n.is_multiple_of(2) { -ScalarRF::one() } else { ScalarRF::one() };
        let mut out = HomForm::zero(n);
        for e in self.calc.basis(n) {
            let ef = FormElement::basis(e.clone(), AlgElement::one());
            let mut v = self.nabla(&hom_mul_form(&self.calc, f, &ef)?)?;
            let de = self.calc.d(&ef)?;
            v.add_scaled(&hom_apply(&self.calc, f, &de)?, &sign);
            out.set(e.clone(), v);
        }
        Ok(out)
    }

    /// ∇ on degree-1 hom-forms, ∇_k above.
    fn nabla_deg(&self, f: &HomForm) -> Result<HomForm, HomError> {
        if f.degree == 1 {
            Ok(HomForm { degree: 0, values: [(Word::empty(), self.nabla(f)?)].into_iter().filter(|(_, a)| !a.is_zero()).collect() })
        } else {
            self.nabla_n(f.degree - 1, f)
        }
    }

    /// Any degree: ∇ for 1-forms (as a degree-0 hom-form), ∇_{k} for k+1-forms.
    pub fn nabla_any(&self, f: &HomForm) -> Result<HomForm, HomError> {
        self.nabla_deg(f)
    }

    /// F(f) = ∇(∇_1(f)).
    pub fn curvature(&self, f: &HomForm) -> Result<AlgElement, HomError> {
        self.nabla(&self.nabla_n(1, f)?)
    }

    /// Curvature on the dual basis of Ω² and on its products with the
    /// generators (right-linearity of F is certified, not assumed); None when flat.
    pub fn flatness_witness(&self) -> Result<Option<String>, HomError> {
        let calc = &self.calc;
        let pres = calc.pres();
        let mut probes = vec![AlgElement::one()];
        probes.extend((0..pres.num_gens()).map(|g| AlgElement::word(Word::letter(g))));
        for e in calc.basis(2) {
            let phi = HomForm::dual(e.clone());
            for a in &probes {
                let fe = self.curvature(&hom_right_act(calc, &phi, a))?;
                if !fe.is_zero() {
                    return Ok(Some(format!("F(dual of {} times {}) = {}", calc.render_form_word(e), pres.render(a), pres.render(&fe))));
                }
            }
        }
        Ok(None)
    }

    /// Φ(∇(f ⊣ Φ)) for Φ = left multiplication by the unit u with inverse u_inv.
    pub fn gauge_transform(&self, u: &AlgElement, u_inv: &AlgElement, f: &HomForm) -> Result<AlgElement, HomError> {
        let pres = self.calc.pres();
        if pres.mul(u, u_inv) != AlgElement::one() || pres.mul(u_inv, u) != AlgElement::one() {
            return Err(HomError::NotAUnit(pres.render(u)));
        }
        let mut g = HomForm::zero(f.degree);
        for (e, v) in f.values() {
            g.set(e.clone(), pres.mul(u_inv, v));
        }
        Ok(pres.mul(u, &self.nabla(&g)?))
    }

    /// ∇(fa) − ∇(f)a − f(da); zero for a hom-connection.
    pub fn leibniz_defect(&self, f: &HomForm, a: &AlgElement) -> Result<AlgElement, HomError> {
        let calc = &self.calc;
        let lhs = self.nabla(&hom_right_act(calc, f, a))?;
        let rhs = calc.pres().mul(&self.nabla(f)?, a).plus(&hom_apply(calc, f, &calc.d_function(a))?);
        Ok(lhs.minus(&rhs))
    }

    /// Σ_{i,k} ξ_i σ̂_ik(f(ω_k)), which reproduces f.
    pub fn xi_expansion(&self, f: &HomForm) -> HomForm {
        let calc = &self.calc;
        let n = calc.n();
        let mut out = HomForm::zero(1);
        for i in 0..n {
            let mut coeff = AlgElement::zero();
            for k in 0..n {
                coeff.add_scaled(&calc.tmd().sigma_hat_entry(i, k, &f.value(&Word::letter(k))), &ScalarRF::one());
            }
            out.add_scaled(&hom_right_act(calc, &HomForm::dual(Word::letter(i)), &coeff), &ScalarRF::one());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::fixtures::{qplane_calculus, sl2_calculus};
    use crate::multider::fixtures::{p, q};
    use crate::ncalg::presets::{ALPHA, BETA, DELTA, GAMMA};
    use crate::sample;

    fn sl2() -> HomConnection {
        HomConnection::new(Arc::new(sl2_calculus()))
    }

    fn qp() -> HomConnection {
        HomConnection::new(Arc::new(qplane_calculus()))
    }

    fn fw(l: &[usize]) -> Word {
        Word::from_letters(l.iter().copied())
    }

    #[test]
    fn xi_are_killed() {
        for h in [sl2(), qp()] {
            for i in 0..h.calc().n() {
                assert!(h.nabla(&HomForm::dual(Word::letter(i))).unwrap().is_zero());
                let xi = HomForm::dual(Word::letter(i));
                for j in 0..h.calc().n() {
                    let want = if i == j { AlgElement::one() } else { AlgElement::zero() };
                    assert_eq!(hom_apply(h.calc(), &xi, &h.calc().one_form(j)).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn sl2_matches_diagonal_formula() {
        let h = sl2();
        let diag = HomConnection::diagonal(h.calc_arc().clone(), vec![q(2), ScalarRF::one(), q(-2)]);
        let words = h.calc().pres().normal_words(3);
        let mut rng = sample::rng(3);
        for _ in 0..10 {
            let mut f = HomForm::zero(1);
            for i in 0..3 {
                f.set(Word::letter(i), sample::element(&mut rng, &words, 3));
            }
            assert_eq!(h.nabla(&f).unwrap(), diag.nabla(&f).unwrap());
        }
    }

    #[test]
    fn right_action_example() {
        let h = sl2();
        let a = h.calc().pres().gen("alpha");
        let g = hom_right_act(h.calc(), &HomForm::dual(Word::letter(1)), &a);
        assert_eq!(g.value(&Word::letter(1)), a.scale(&q(2)));
        assert!(g.value(&Word::letter(0)).is_zero());
    }

    #[test]
    fn qplane_xi_times_forms() {
        let h = qp();
        let c = h.calc();
        let xi = HomForm::dual(fw(&[0, 1]));
        let xdx = hom_mul_form(c, &xi, &c.one_form(0)).unwrap();
        assert_eq!(xdx, HomForm::dual(Word::letter(1)));
        let xdy = hom_mul_form(c, &xi, &c.one_form(1)).unwrap();
        assert_eq!(xdy, HomForm::dual(Word::letter(0)).scale(&-(&p(1) * &q(-1))));
        assert!(matches!(hom_mul_form(c, &xi, &FormElement::function(AlgElement::one())), Err(HomError::DegreeMismatch { .. })));
        // ∇_1(ξ) = 0
        assert!(h.nabla_n(1, &xi).unwrap().is_zero());
    }

    #[test]
    fn qplane_coefficient_formula() {
        let h = qp();
        let c = h.calc();
        for r in 0..3usize {
            for s in 0..3usize {
                let w = Word::from_letters(std::iter::repeat_n(0, r).chain(std::iter::repeat_n(1, s + 1)));
                let f = hom_right_act(c, &HomForm::dual(Word::letter(1)), &AlgElement::word(w));
                let got = h.nabla(&f).unwrap();
                let coef = (&(&p(-((r + s) as i32)) * &q(r as i32)) * &(&p(s as i32 + 1) - &ScalarRF::one())).checked_div(&(&p(1) - &ScalarRF::one())).unwrap();
                let mono = Word::from_letters(std::iter::repeat_n(0, r).chain(std::iter::repeat_n(1, s)));
                assert_eq!(got, AlgElement::term(mono, coef), "r={r} s={s}");
            }
        }
    }

    #[test]
    fn sl2_integral_forms() {
        let h = sl2();
        let (m, z, pl) = (0, 1, 2);
        let phi0 = HomForm::dual(fw(&[m, pl]));
        let phip = HomForm::dual(fw(&[m, z]));
        let phim = HomForm::dual(fw(&[z, pl]));
        let qq = &q(2) * &(&q(2) + &ScalarRF::one());
        assert_eq!(h.nabla_n(1, &phi0).unwrap(), HomForm::dual(Word::letter(z)).scale(&q(1)));
        assert_eq!(h.nabla_n(1, &phip).unwrap(), HomForm::dual(Word::letter(m)).scale(&qq));
        assert_eq!(h.nabla_n(1, &phim).unwrap(), HomForm::dual(Word::letter(pl)).scale(&qq));
        assert!(h.nabla_n(2, &HomForm::dual(fw(&[m, z, pl]))).unwrap().is_zero());
        assert_eq!(h.flatness_witness().unwrap(), None);
        assert_eq!(qp().flatness_witness().unwrap(), None);
        // (φ ω_−)(ω_0 ω_+) = 1
        let phi = HomForm::dual(fw(&[m, z, pl]));
        let pm = hom_mul_form(h.calc(), &phi, &h.calc().one_form(m)).unwrap();
        assert_eq!(pm, HomForm::dual(fw(&[z, pl])));
    }

    #[test]
    fn corrupted_connection_is_not_flat() {
        let h = sl2();
        let bad = HomConnection::diagonal(h.calc_arc().clone(), vec![q(2), ScalarRF::one(), q(-1)]);
        let phi0 = HomForm::dual(fw(&[0, 2]));
        // a diagonal rescaling still kills every scalar multiple of ξ_i
        assert!(bad.curvature(&phi0).unwrap().is_zero());
        let a = bad.calc().pres().gen("beta");
        assert!(!bad.curvature(&hom_right_act(bad.calc(), &phi0, &a)).unwrap().is_zero());
        let w = bad.flatness_witness().unwrap().expect("caught");
        assert!(w.contains("w-.w+"), "{w}");
    }

    #[test]
    fn leibniz_and_expansion() {
        for h in [sl2(), qp()] {
            let words = h.calc().pres().normal_words(2);
            let mut rng = sample::rng(11);
            for _ in 0..8 {
                let mut f = HomForm::zero(1);
                for i in 0..h.calc().n() {
                    f.set(Word::letter(i), sample::element(&mut rng, &words, 2));
                }
                let a = sample::element(&mut rng, &words, 2);
                assert!(h.leibniz_defect(&f, &a).unwrap().is_zero());
                assert_eq!(h.xi_expansion(&f), f);
            }
        }
    }

    #[test]
    fn gauge_by_scalar() {
        let h = sl2();
        let f = HomForm::dual(Word::letter(0));
        let f = hom_right_act(h.calc(), &f, &AlgElement::word(fw(&[BETA, GAMMA, DELTA])));
        let lam = AlgElement::scalar(ScalarRF::from_int(3));
        let inv = AlgElement::scalar(ScalarRF::from_ratio(1, 3));
        assert_eq!(h.gauge_transform(&lam, &inv, &f).unwrap(), h.nabla(&f).unwrap());
        let a = AlgElement::word(fw(&[ALPHA]));
        assert!(matches!(h.gauge_transform(&a, &a, &f), Err(HomError::NotAUnit(_))));
    }
}
