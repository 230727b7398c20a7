//! The differential graded algebra induced by a free twisted multi-derivation:
//! forms with left coefficients, the σ right action, wedge products and d.

mod form;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use parking_lot::RwLock;
use thiserror::Error;

use crate::check::CheckResult;
use crate::linalg::{Echelon, SparseVec};
use crate::multider::TwistedMultiDerivation;
use crate::ncalg::{AlgElement, AlgError, Presentation, Rule, Word};
use crate::scalars::ScalarRF;

pub use form::FormElement;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DgaError {
    #[error("expected {expected} one-form names, got {found}")]
    FormCount { expected: usize, found: usize },
    #[error("declared basis in degree {degree} does not match the normal form words: {detail}")]
    BasisMismatch { degree: usize, detail: String },
    #[error("form degree {found} does not match {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("d is not defined on degree {0} (top degree reached)")]
    DegreeOverflow(usize),
    #[error("d of one-form {0} must be a 2-form")]
    BadDifferential(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// Declared higher-form data on top of a twisted multi-derivation.
pub struct Calculus {
    tmd: Arc<TwistedMultiDerivation>,
    form_names: Vec<String>,
    forms: Presentation,
    basis: Vec<Vec<Word>>,
    top: usize,
    d_forms: Vec<FormElement>,
    right_cache: RwLock<HashMap<(Word, Word), Arc<FormElement>>>,
    d_cache: RwLock<HashMap<Word, Arc<FormElement>>>,
}

impl std::fmt::Debug for Calculus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Calculus").field("forms", &self.form_names).field("top", &self.top).finish()
    }
}


impl Calculus {
    /// `basis[k]` lists the basis k-form words for 1 ≤ k ≤ top; `form_rules`
    /// reduce products of one-forms with scalar coefficients.
    pub fn new(
        tmd: Arc<TwistedMultiDerivation>,
        form_names: Vec<String>,
        form_rules: Vec<Rule>,
        basis: Vec<Vec<Word>>,
        top: usize,
        d_forms: Vec<FormElement>,
    ) -> Result<Self, DgaError> {
        let n = tmd.n();
        if form_names.len() != n || d_forms.len() != n {
            return Err(DgaError::FormCount { expected: n, found: form_names.len().min(d_forms.len()) });
        }
        let forms = Presentation::new(format!("{}-forms", tmd.pres().name()), form_names.clone(), form_rules, None)?;
        let mut full = vec![vec![Word::empty()]];
        full.extend(basis.into_iter().skip_while(|b| b.iter().all(Word::is_empty)));
        if full.len() != top + 1 {
            return Err(DgaError::BasisMismatch { degree: full.len().saturating_sub(1), detail: format!("expected degrees up to {top}") });
        }
        let normal = forms.normal_words(top + 1);
        for (k, declared) in full.iter().enumerate() {
            let want: BTreeSet<&Word> = normal.iter().filter(|w| w.len() == k).collect();
            let got: BTreeSet<&Word> = declared.iter().collect();
            if want != got || declared.iter().any(|w| w.len() != k) {
                let show = |s: &BTreeSet<&Word>| s.iter().map(|w| w.render(&form_names, ".")).collect::<Vec<_>>().join(", ");
                return Err(DgaError::BasisMismatch { degree: k, detail: format!("declared [{}], normal [{}]", show(&got), show(&want)) });
            }
        }
        if let Some(w) = normal.iter().find(|w| w.len() == top + 1) {
            return Err(DgaError::BasisMismatch { degree: top + 1, detail: format!("{} survives above the top degree", w.render(&form_names, ".")) });
        }
        for (i, f) in d_forms.iter().enumerate() {
            if f.degree() != 2 && !f.is_zero() {
                return Err(DgaError::BadDifferential(form_names[i].clone()));
            }
        }
        let d_forms = d_forms.into_iter().map(|f| if f.is_zero() { FormElement::zero(2) } else { f }).collect();
        Ok(Calculus {
            tmd,
            form_names,
            forms,
            basis: full,
            top,
            d_forms,
            right_cache: Default::default(),
            d_cache: Default::default(),
        })
    }

    /// Same calculus with different values of d on one-forms (for negative controls).
    pub fn with_d_forms(&self, d_forms: Vec<FormElement>) -> Self {
        Calculus {
            tmd: self.tmd.clone(),
            form_names: self.form_names.clone(),
            forms: Presentation::new(self.forms.name(), self.form_names.clone(), self.forms.rules().to_vec(), None).expect("validated"),
            basis: self.basis.clone(),
            top: self.top,
            d_forms,
            right_cache: Default::default(),
            d_cache: Default::default(),
        }
    }

    pub fn with_tmd(&self, tmd: Arc<TwistedMultiDerivation>) -> Self {
        Calculus {
            tmd,
            form_names: self.form_names.clone(),
            forms: Presentation::new(self.forms.name(), self.form_names.clone(), self.forms.rules().to_vec(), None).expect("validated"),
            basis: self.basis.clone(),
            top: self.top,
            d_forms: self.d_forms.clone(),
            right_cache: Default::default(),
            d_cache: Default::default(),
        }
    }

    pub fn tmd(&self) -> &TwistedMultiDerivation {
        &self.tmd
    }

    pub fn tmd_arc(&self) -> &Arc<TwistedMultiDerivation> {
        &self.tmd
    }

    pub fn pres(&self) -> &Presentation {
        self.tmd.pres()
    }

    pub fn n(&self) -> usize {
        self.tmd.n()
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn form_names(&self) -> &[String] {
        &self.form_names
    }

    pub fn form_presentation(&self) -> &Presentation {
        &self.forms
    }

    pub fn basis(&self, k: usize) -> &[Word] {
        self.basis.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn d_on_form(&self, i: usize) -> &FormElement {
        &self.d_forms[i]
    }

    pub fn one_form(&self, i: usize) -> FormElement {
        FormElement::basis(Word::letter(i), AlgElement::one())
    }

    pub fn form_index(&self, name: &str) -> Option<usize> {
        self.form_names.iter().position(|f| f == name)
    }

    pub fn render(&self, f: &FormElement) -> String {
        f.render(self.pres().gens(), &self.form_names)
    }

    pub fn render_form_word(&self, e: &Word) -> String {
        e.render(&self.form_names, ".")
    }

    /// A product of one-forms as a scalar combination of basis words.
    pub fn reduce_form_word(&self, w: &Word) -> Arc<AlgElement> {
        self.forms.word_nf(w)
    }

    /// `e · w` for any form word e and normal word w, with left coefficients.
    pub fn right_mul_word(&self, e: &Word, w: &Word) -> Arc<FormElement> {
        let key = (e.clone(), w.clone());
        if let Some(hit) = self.right_cache.read().get(&key) {
            return hit.clone();
        }
        let n = self.n();
        let mut state: BTreeMap<Word, AlgElement> = BTreeMap::new();
        state.insert(Word::empty(), AlgElement::word(w.clone()));
        for i in e.as_slice().iter().rev().map(|&x| x as usize) {
            let mut next: BTreeMap<Word, AlgElement> = BTreeMap::new();
            for (suffix, c) in &state {
                // ω_i c = Σ_j σ_ij(c) ω_j
                for j in 0..n {
                    let s = self.tmd.sigma_entry(i, j, c);
                    if !s.is_zero() {
                        next.entry(Word::letter(j).concat(suffix)).or_default().add_scaled(&s, &ScalarRF::one());
                    }
                }
            }
            next.retain(|_, c| !c.is_zero());
            state = next;
        }
        let mut out = FormElement::zero(e.len());
        for (u, c) in state {
            for (v, s) in self.reduce_form_word(&u).terms() {
                out.add_scaled(v.clone(), &c, s);
            }
        }
        let out = Arc::new(out);
        self.right_cache.write().insert(key, out.clone());
        out
    }

    pub fn right_mul(&self, f: &FormElement, a: &AlgElement) -> FormElement {
        let pres = self.pres();
        let mut out = FormElement::zero(f.degree());
        for (e, coef) in f.coords() {
            for (w, c) in a.terms() {
                for (v, b) in self.right_mul_word(e, w).coords() {
                    out.add_scaled(v.clone(), &pres.mul(coef, b), c);
                }
            }
        }
        out
    }

    pub fn left_mul(&self, a: &AlgElement, f: &FormElement) -> FormElement {
        let pres = self.pres();
        let mut out = FormElement::zero(f.degree());
        for (e, coef) in f.coords() {
            out.add(e.clone(), &pres.mul(a, coef));
        }
        out
    }

    /// Wedge product; vanishes above the top degree.
    pub fn wedge(&self, x: &FormElement, y: &FormElement) -> FormElement {
        let pres = self.pres();
        let mut out = FormElement::zero(x.degree() + y.degree());
        if x.degree() + y.degree() > self.top {
            return out;
        }
        for (e, a) in x.coords() {
            for (f, b) in y.coords() {
                // a e b f = a (e b) f
                let eb = self.right_mul(&FormElement::basis(e.clone(), AlgElement::one()), b);
                for (v, c) in eb.coords() {
                    let ac = pres.mul(a, c);
                    for (u, s) in self.reduce_form_word(&v.concat(f)).terms() {
                        out.add_scaled(u.clone(), &ac, s);
                    }
                }
            }
        }
        out
    }

    /// Right-coefficient representation Σ e_u r_u of a form.
    pub fn to_right(&self, f: &FormElement) -> BTreeMap<Word, AlgElement> {
        let n = self.n();
        let mut out: BTreeMap<Word, AlgElement> = BTreeMap::new();
        for (e, a) in f.coords() {
            let mut state: BTreeMap<Word, AlgElement> = BTreeMap::new();
            state.insert(Word::empty(), a.clone());
            for i in e.letters() {
                let mut next: BTreeMap<Word, AlgElement> = BTreeMap::new();
                for (prefix, c) in &state {
                    // c ω_i = Σ_j ω_j σ̄_ji(c)
                    for j in 0..n {
                        let s = self.tmd.sigma_bar_entry(j, i, c);
                        if !s.is_zero() {
                            let mut p = prefix.clone();
                            p.push(j);
                            next.entry(p).or_default().add_scaled(&s, &ScalarRF::one());
                        }
                    }
                }
                next.retain(|_, c| !c.is_zero());
                state = next;
            }
            for (u, c) in state {
                for (v, s) in self.reduce_form_word(&u).terms() {
                    out.entry(v.clone()).or_default().add_scaled(&c, s);
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Σ e_u r_u back to left coefficients.
    pub fn from_right(&self, degree: usize, right: &BTreeMap<Word, AlgElement>) -> FormElement {
        let mut out = FormElement::zero(degree);
        for (e, r) in right {
            out.add_form(&self.right_mul(&FormElement::basis(e.clone(), AlgElement::one()), r), &ScalarRF::one());
        }
        out
    }

    /// a ω_i as right coefficients, i.e. the map j -> σ̄_ji(a).
    pub fn left_from_right(&self, a: &AlgElement, i: usize) -> BTreeMap<Word, AlgElement> {
        self.to_right(&FormElement::basis(Word::letter(i), a.clone()))
    }

    pub fn d_function(&self, a: &AlgElement) -> FormElement {
        let mut out = FormElement::zero(1);
        for (i, x) in self.tmd.extend_partial(a).into_iter().enumerate() {
            out.add(Word::letter(i), &x);
        }
        out
    }

    /// d on a product of one-forms, by the graded Leibniz rule.
    fn d_word(&self, e: &Word) -> Arc<FormElement> {
        if let Some(hit) = self.d_cache.read().get(e) {
            return hit.clone();
        }
        let out = match e.first() {
            None => FormElement::zero(1),
            Some(i) if e.len() == 1 => self.d_forms[i].clone(),
            Some(i) => {
                let rest = e.tail();
                let head = FormElement::basis(Word::letter(i), AlgElement::one());
                let tail_form = FormElement::basis(rest.clone(), AlgElement::one());
                let a = self.wedge(&self.d_forms[i], &tail_form);
                let b = self.wedge(&head, &self.d_word(&rest));
                a.minus(&b)
            }
        };
        let out = Arc::new(out);
        self.d_cache.write().insert(e.clone(), out.clone());
        out
    }

    pub fn d(&self, f: &FormElement) -> Result<FormElement, DgaError> {
        if f.degree() >= self.top {
            return Err(DgaError::DegreeOverflow(f.degree()));
        }
        if f.degree() == 0 {
            return Ok(self.d_function(&f.coeff(&Word::empty())));
        }
        let mut out = FormElement::zero(f.degree() + 1);
        for (e, a) in f.coords() {
            // d(a e) = da ∧ e + a de
            let e_form = FormElement::basis(e.clone(), AlgElement::one());
            out.add_form(&self.wedge(&self.d_function(a), &e_form), &ScalarRF::one());
            out.add_form(&self.left_mul(a, &self.d_word(e)), &ScalarRF::one());
        }
        Ok(out)
    }

    /// Load-time consistency checks of the declared higher-form data.
    pub fn validate(&self) -> Vec<CheckResult> {
        let mut out = Vec::new();
        let conf = self.forms.check_local_confluence(self.top + 2);
        let w = conf.failures().next().map(|a| format!("ambiguity at {}", self.render_form_word(&a.word)));
        out.push(CheckResult::from_witness("forms.confluent", "form reduction rules are confluent", w));

        let gens: Vec<Word> = (0..self.pres().num_gens()).map(Word::letter).collect();
        let mut bad = None;
        'rules: for r in self.forms.rules() {
            for g in &gens {
                let lhs = self.right_mul_word(&r.lhs, g);
                let mut rhs = FormElement::zero(r.lhs.len());
                for (u, c) in &r.rhs {
                    rhs.add_form(&self.right_mul_word(u, g), c);
                }
                if *lhs != rhs {
                    bad = Some(format!("({})·{}: {} vs {}", self.render_form_word(&r.lhs), self.pres().render_word(g), self.render(&lhs), self.render(&rhs)));
                    break 'rules;
                }
            }
        }
        out.push(CheckResult::from_witness("forms.right_action_respects_relations", "σ right action is compatible with form relations", bad));

        let mut bad = None;
        if self.top >= 3 {
            for r in self.forms.rules().iter().filter(|r| r.lhs.len() < self.top) {
                let lhs = self.d_word(&r.lhs);
                let mut rhs = FormElement::zero(r.lhs.len() + 1);
                for (u, c) in &r.rhs {
                    rhs.add_form(&self.d_word(u), c);
                }
                if *lhs != rhs {
                    bad = Some(format!("d({})", self.render_form_word(&r.lhs)));
                    break;
                }
            }
        }
        out.push(CheckResult::from_witness("forms.d_respects_relations", "d is well defined on forms", bad));

        let mut bad = None;
        if self.top >= 2 {
            'outer: for i in 0..self.n() {
                for g in &gens {
                    let a = AlgElement::word(g.clone());
                    let om = self.one_form(i);
                    // d(ω_i a) = dω_i a - ω_i da
                    let lhs = self.d(&self.right_mul(&om, &a)).expect("degree 1");
                    let rhs = self.right_mul(&self.d_forms[i], &a).minus(&self.wedge(&om, &self.d_function(&a)));
                    if lhs != rhs {
                        bad = Some(format!("d({}·{})", self.form_names[i], self.pres().render_word(g)));
                        break 'outer;
                    }
                }
            }
        }
        out.push(CheckResult::from_witness("forms.d_respects_bimodule", "d(ω a) = dω a - ω da", bad));

        let mut bad = None;
        if self.top >= 3 {
            for i in 0..self.n() {
                let dd = self.d(&self.d_forms[i]).expect("degree 2 below top");
                if !dd.is_zero() {
                    bad = Some(format!("d(d({})) = {}", self.form_names[i], self.render(&dd)));
                    break;
                }
            }
        }
        out.push(CheckResult::from_witness("forms.d_squared_on_one_forms", "d² = 0 on ω_i", bad));
        out
    }

    /// First normal word of length ≤ bound with d(d(a)) ≠ 0.
    pub fn check_d_squared(&self, length_bound: usize) -> Option<String> {
        if self.top < 2 {
            return None;
        }
        let words = self.pres().normal_words(length_bound);
        let res = crate::exec::par_map(&words, |w| {
            let a = AlgElement::word(w.clone());
            let dd = self.d(&self.d_function(&a)).expect("degree 1 below top");
            (!dd.is_zero()).then(|| format!("d(d({})) = {}", self.pres().render_word(w), self.render(&dd)))
        });
        if let Some(w) = res.into_iter().flatten().next() {
            return Some(w);
        }
        if self.top >= 3 {
            for i in 0..self.n() {
                let dd = self.d(&self.d_forms[i]).expect("degree 2 below top");
                if !dd.is_zero() {
                    return Some(format!("d(d({}))", self.form_names[i]));
                }
            }
        }
        None
    }

    /// Searches a_t, b_t of length ≤ bound with Σ_t a_t ∂_i(b_t) = δ_ik for every k.
    pub fn check_density(&self, length_bound: usize) -> Option<Vec<Vec<(AlgElement, AlgElement)>>> {
        let pres = self.pres();
        let words = pres.normal_words(length_bound);
        let n = self.n();
        let bs: Vec<&Word> = words.iter().filter(|w| !w.is_empty()).collect();
        let mut witness = Vec::with_capacity(n);
        for k in 0..n {
            let mut rows: HashMap<(usize, Word), usize> = HashMap::new();
            let mut row_of = |key: (usize, Word)| {
                let next = rows.len();
                *rows.entry(key).or_insert(next)
            };
            let mut ech: Echelon<ScalarRF> = Echelon::new();
            let mut cols = Vec::new();
            for b in &bs {
                let db = self.tmd.partial_word(b);
                if db.iter().all(AlgElement::is_zero) {
                    continue;
                }
                for a in &words {
                    let mut col = SparseVec::new();
                    for (i, x) in db.iter().enumerate() {
                        for (w, c) in pres.mul(&AlgElement::word((*a).clone()), x).terms() {
                            col.insert(row_of((i, w.clone())), c.clone());
                        }
                    }
                    if !col.is_empty() {
                        ech.push(col);
                        cols.push(((*a).clone(), (*b).clone()));
                    }
                }
            }
            let mut target = SparseVec::new();
            target.insert(row_of((k, Word::empty())), ScalarRF::one());
            let sol = ech.solve(&target)?;
            let mut pairs: BTreeMap<Word, AlgElement> = BTreeMap::new();
            for (idx, c) in sol {
                let (a, b) = &cols[idx];
                pairs.entry(b.clone()).or_default().add_term(a.clone(), c);
            }
            witness.push(pairs.into_iter().filter(|(_, a)| !a.is_zero()).map(|(b, a)| (a, AlgElement::word(b))).collect());
        }
        Some(witness)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::multider::fixtures::{p, q, qplane, sl2_3d};

    fn fw(letters: &[usize]) -> Word {
        Word::from_letters(letters.iter().copied())
    }

    fn scalar_form(terms: &[(&[usize], ScalarRF)]) -> FormElement {
        let mut f = FormElement::zero(terms.first().map(|(w, _)| w.len()).unwrap_or(2));
        for (w, c) in terms {
            f.add(fw(w), &AlgElement::scalar(c.clone()));
        }
        f
    }

    pub fn qplane_calculus() -> Calculus {
        let tmd = Arc::new(qplane());
        let rules = vec![
            Rule::new(fw(&[0, 0]), vec![]),
            Rule::new(fw(&[1, 1]), vec![]),
            Rule::new(fw(&[1, 0]), vec![(fw(&[0, 1]), -(&p(1) * &q(-1)))]),
        ];
        let basis = vec![vec![fw(&[0]), fw(&[1])], vec![fw(&[0, 1])]];
        let names = vec!["dx".to_string(), "dy".to_string()];
        Calculus::new(tmd, names, rules, basis, 2, vec![FormElement::zero(2), FormElement::zero(2)]).unwrap()
    }

    /// Form letters 0 = ω_−, 1 = ω_0, 2 = ω_+.
    pub fn sl2_calculus() -> Calculus {
        let tmd = Arc::new(sl2_3d());
        let (m, z, pl) = (0, 1, 2);
        let rules = vec![
            Rule::new(fw(&[m, m]), vec![]),
            Rule::new(fw(&[z, z]), vec![]),
            Rule::new(fw(&[pl, pl]), vec![]),
            Rule::new(fw(&[z, m]), vec![(fw(&[m, z]), -q(4))]),
            Rule::new(fw(&[pl, m]), vec![(fw(&[m, pl]), -q(2))]),
            Rule::new(fw(&[pl, z]), vec![(fw(&[z, pl]), -q(4))]),
        ];
        let basis = vec![vec![fw(&[m]), fw(&[z]), fw(&[pl])], vec![fw(&[m, z]), fw(&[m, pl]), fw(&[z, pl])], vec![fw(&[m, z, pl])]];
        let names = vec!["w-".to_string(), "w0".to_string(), "w+".to_string()];
        let qq = &q(2) * &(&q(2) + &ScalarRF::one());
        let d_forms = vec![
            scalar_form(&[(&[m, z], qq.clone())]),
            scalar_form(&[(&[m, pl], q(1))]),
            scalar_form(&[(&[z, pl], qq)]),
        ];
        Calculus::new(tmd, names, rules, basis, 3, d_forms).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::multider::fixtures::{p, q};
    use crate::ncalg::presets::{ALPHA, BETA};

    #[test]
    fn right_action_examples() {
        let c = qplane_calculus();
        let x = c.pres().gen("x");
        let dx_x = c.right_mul(&c.one_form(0), &x);
        assert_eq!(dx_x, FormElement::basis(Word::letter(0), x.scale(&p(1))));
        let s = sl2_calculus();
        let a = s.pres().gen("alpha");
        assert_eq!(s.right_mul(&s.one_form(1), &a), FormElement::basis(Word::letter(1), a.scale(&q(-2))));
        assert_eq!(s.right_mul(&s.one_form(1), &AlgElement::one()), s.one_form(1));
    }

    #[test]
    fn left_from_right_examples() {
        let c = qplane_calculus();
        let x = c.pres().gen("x");
        let r = c.left_from_right(&x, 0);
        assert_eq!(r.get(&Word::letter(0)), Some(&x.scale(&p(-1))));
        let s = sl2_calculus();
        let a = s.pres().gen("alpha");
        let r = s.left_from_right(&a, 1);
        assert_eq!(r.get(&Word::letter(1)), Some(&a.scale(&q(2))));
        assert_eq!(s.from_right(1, &r), FormElement::basis(Word::letter(1), a));
    }

    #[test]
    fn differential_examples() {
        let s = sl2_calculus();
        let pres = s.pres();
        let a = pres.gen("alpha");
        let da = s.d_function(&a);
        let mut want = FormElement::zero(1);
        want.add(Word::letter(1), &a);
        want.add(Word::letter(2), &pres.gen("beta").scale(&-q(1)));
        assert_eq!(da, want);
        let ab = pres.mul(&a, &pres.gen("beta"));
        // d(αβ) = α²ω_− − q²β²ω_+ with left coefficients
        let mut want = FormElement::zero(1);
        want.add(Word::letter(0), &AlgElement::word(Word::from_letters([ALPHA, ALPHA])));
        want.add(Word::letter(2), &AlgElement::term(Word::from_letters([BETA, BETA]), -q(2)));
        assert_eq!(s.d_function(&ab), want);
        assert!(s.d_function(&AlgElement::one()).is_zero());
        assert_eq!(s.d(&FormElement::basis(Word::from_letters([0, 1, 2]), a)).unwrap_err(), DgaError::DegreeOverflow(3));
    }

    #[test]
    fn presets_validate() {
        for c in [qplane_calculus(), sl2_calculus()] {
            for r in c.validate() {
                assert!(r.passed(), "{r:?}");
            }
            assert_eq!(c.check_d_squared(3), None);
        }
    }

    #[test]
    fn corrupted_d_is_caught() {
        let s = sl2_calculus();
        let mut d = (0..3).map(|i| s.d_on_form(i).clone()).collect::<Vec<_>>();
        d[1] = d[1].scale(&q(-1));
        let bad = s.with_d_forms(d);
        assert!(bad.check_d_squared(1).is_some());
    }

    #[test]
    fn density_witness() {
        let c = qplane_calculus();
        let w = c.check_density(1).unwrap();
        assert_eq!(w.len(), 2);
        let s = sl2_calculus();
        let w = s.check_density(2).expect("3D calculus is dense");
        for (k, pairs) in w.iter().enumerate() {
            for i in 0..3 {
                let mut acc = AlgElement::zero();
                for (a, b) in pairs {
                    acc.add_scaled(&s.pres().mul(a, &s.tmd().partial(i, b)), &ScalarRF::one());
                }
                let want = if i == k { AlgElement::one() } else { AlgElement::zero() };
                assert_eq!(acc, want);
            }
        }
    }
}
