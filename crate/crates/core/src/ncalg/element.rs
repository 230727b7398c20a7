use std::collections::BTreeMap;

use crate::scalars::ScalarRF;

use super::Word;

/// Finite combination of normal words with nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct AlgElement {
    terms: BTreeMap<Word, ScalarRF>,
}

impl AlgElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(ScalarRF::one())
    }

    pub fn scalar(c: ScalarRF) -> Self {
        Self::term(Word::empty(), c)
    }

    /// A single term; the caller guarantees the word is normal.
    pub fn term(w: Word, c: ScalarRF) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, ScalarRF::one())
    }

    pub fn add_term(&mut self, w: Word, c: ScalarRF) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, o: &AlgElement, c: &ScalarRF) {
        if c.is_zero() {
            return;
        }
        for (w, k) in &o.terms {
            self.add_term(w.clone(), if c.is_one() { k.clone() } else { k * c });
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &ScalarRF)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, ScalarRF)> {
        self.terms.into_iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> ScalarRF {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient when the element is a multiple of 1.
    pub fn as_scalar(&self) -> Option<ScalarRF> {
        match self.terms.len() {
            0 => Some(ScalarRF::zero()),
            1 => self.terms.get(&Word::empty()).cloned(),
            _ => None,
        }
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Word, &ScalarRF)> {
        self.terms.iter().next_back()
    }

    pub fn plus(&self, o: &AlgElement) -> AlgElement {
        let mut out = self.clone();
        out.add_scaled(o, &ScalarRF::one());
        out
    }

    pub fn minus(&self, o: &AlgElement) -> AlgElement {
        let mut out = self.clone();
        out.add_scaled(o, &ScalarRF::from_int(-1));
        out
    }

    pub fn scale(&self, c: &ScalarRF) -> AlgElement {
        if c.is_zero() {
            return Self::zero();
        }
        AlgElement { terms: self.terms.iter().map(|(w, k)| (w.clone(), k * c)).collect() }
    }

    pub fn neg(&self) -> AlgElement {
        AlgElement { terms: self.terms.iter().map(|(w, k)| (w.clone(), -k)).collect() }
    }

    pub fn filter<F: Fn(&Word) -> bool>(&self, keep: F) -> AlgElement {
        AlgElement { terms: self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    /// Canonical text form `c1*w1 + c2*w2`, words ascending.
    pub fn render(&self, names: &[String]) -> String {
        render_terms(self.terms.iter().map(|(w, c)| (w.render(names, "*"), c)))
    }
}

/// Shared printer for `coefficient*basis` sums; the basis label `1` is dropped.
pub fn render_terms<'a, I: IntoIterator<Item = (String, &'a ScalarRF)>>(it: I) -> String {
    let mut out = String::new();
    for (label, c) in it {
        let (neg, body) = term_body(&label, c);
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn term_body(label: &str, c: &ScalarRF) -> (bool, String) {
    let unit = label == "1";
    if c.is_compound() {
        if unit {
            return (false, format!("({c})"));
        }
        return (false, format!("({c})*{label}"));
    }
    let s = c.to_string();
    let (neg, abs) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.to_string()),
        None => (false, s),
    };
    let body = match (unit, abs.as_str()) {
        (true, _) => abs,
        (false, "1") => label.to_string(),
        (false, _) => format!("{abs}*{label}"),
    };
    (neg, body)
}

/// Element of A⊗A on pairs of normal words.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct TensorElement {
    terms: BTreeMap<(Word, Word), ScalarRF>,
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut t = Self::zero();
        t.add_term(Word::empty(), Word::empty(), ScalarRF::one());
        t
    }

    pub fn add_term(&mut self, a: Word, b: Word, c: ScalarRF) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let s = match self.terms.get(&key) {
            Some(old) => old + &c,
            None => c,
        };
        if s.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, s);
        }
    }

    /// Adds `c * (x ⊗ y)`.
    pub fn add_product(&mut self, x: &AlgElement, y: &AlgElement, c: &ScalarRF) {
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                self.add_term(a.clone(), b.clone(), &(ca * cb) * c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &ScalarRF)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn render(&self, names: &[String]) -> String {
        render_terms(
            self.terms.iter().map(|((a, b), c)| (format!("{} @ {}", a.render(names, "*"), b.render(names, "*")), c)),
        )
    }
}
