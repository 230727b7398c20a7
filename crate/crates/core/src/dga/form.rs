use std::collections::BTreeMap;

use crate::ncalg::{render_terms, AlgElement, Word};
use crate::scalars::ScalarRF;

/// A k-form Σ a_t e_t with left coefficients on basis k-form words.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FormElement {
    degree: usize,
    coords: BTreeMap<Word, AlgElement>,
}

impl FormElement {
    pub fn zero(degree: usize) -> Self {
        FormElement { degree, coords: BTreeMap::new() }
    }

    pub fn function(a: AlgElement) -> Self {
        let mut f = Self::zero(0);
        f.add(Word::empty(), &a);
        f
    }

    /// `a · e`; the caller guarantees e is a basis word of the given degree.
    pub fn basis(e: Word, a: AlgElement) -> Self {
        let mut f = Self::zero(e.len());
        f.add(e, &a);
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> impl Iterator<Item = (&Word, &AlgElement)> {
        self.coords.iter()
    }

    pub fn coeff(&self, e: &Word) -> AlgElement {
        self.coords.get(e).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add(&mut self, e: Word, a: &AlgElement) {
        self.add_scaled(e, a, &ScalarRF::one());
    }

    pub fn add_scaled(&mut self, e: Word, a: &AlgElement, c: &ScalarRF) {
        if a.is_zero() || c.is_zero() {
            return;
        }
        let slot = self.coords.entry(e.clone()).or_default();
        slot.add_scaled(a, c);
        if slot.is_zero() {
            self.coords.remove(&e);
        }
    }

    pub fn add_form(&mut self, o: &FormElement, c: &ScalarRF) {
        debug_assert_eq!(self.degree, o.degree);
        for (e, a) in &o.coords {
            self.add_scaled(e.clone(), a, c);
        }
    }

    pub fn plus(&self, o: &FormElement) -> FormElement {
        let mut out = self.clone();
        out.add_form(o, &ScalarRF::one());
        out
    }

    pub fn minus(&self, o: &FormElement) -> FormElement {
        let mut out = self.clone();
        out.add_form(o, &ScalarRF::from_int(-1));
        out
    }

    pub fn scale(&self, c: &ScalarRF) -> FormElement {
        let mut out = Self::zero(self.degree);
        out.add_form(self, c);
        out
    }

    pub fn render(&self, gens: &[String], forms: &[String]) -> String {
        if self.degree == 0 {
            return self.coeff(&Word::empty()).render(gens);
        }
        let mut parts = Vec::new();
        for (e, a) in &self.coords {
            let label = e.render(forms, ".");
            for (w, c) in a.terms() {
                let lw = if w.is_empty() { label.clone() } else { format!("{}*{}", w.render(gens, "*"), label) };
                parts.push((lw, c.clone()));
            }
        }
        render_terms(parts.iter().map(|(l, c)| (l.clone(), c)))
    }
}
