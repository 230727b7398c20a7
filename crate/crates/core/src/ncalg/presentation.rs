use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use parking_lot::RwLock;

use crate::scalars::ScalarRF;

use super::{AlgElement, AlgError, HopfData, Word};

/// Default rewrite budget per `normalize` call.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Raw noncommutative polynomial: words in generator indices, not yet reduced.
pub type RawPoly = Vec<(Vec<usize>, ScalarRF)>;

/// Oriented rewrite rule `lhs -> rhs`; rhs words are strictly smaller than lhs.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Vec<(Word, ScalarRF)>,
}

impl Rule {
    pub fn new(lhs: Word, rhs: Vec<(Word, ScalarRF)>) -> Self {
        Rule { lhs, rhs }
    }

    /// Orients `poly = 0` with its largest word as the left-hand side.
    pub fn orient(poly: Vec<(Word, ScalarRF)>) -> Option<Rule> {
        let mut acc: std::collections::BTreeMap<Word, ScalarRF> = Default::default();
        for (w, c) in poly {
            let s = acc.get(&w).map(|o| o + &c).unwrap_or(c);
            acc.insert(w, s);
        }
        acc.retain(|_, c| !c.is_zero());
        let (lead, lc) = acc.iter().next_back().map(|(w, c)| (w.clone(), c.clone()))?;
        acc.remove(&lead);
        let inv = lc.inv().ok()?;
        let rhs = acc.into_iter().map(|(w, c)| (w, -(&c * &inv))).collect();
        Some(Rule { lhs: lead, rhs })
    }
}

/// A finitely presented algebra with deglex rewriting to normal words.
pub struct Presentation {
    name: String,
    gens: Vec<String>,
    rules: Vec<Rule>,
    grading: Option<Vec<i64>>,
    hopf: Option<HopfData>,
    budget: usize,
    cache: RwLock<HashMap<Word, Arc<AlgElement>>>,
}

impl std::fmt::Debug for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Presentation")
            .field("name", &self.name)
            .field("gens", &self.gens)
            .field("rules", &self.rules.len())
            .finish()
    }
}

impl Presentation {
    pub fn new(
        name: impl Into<String>,
        gens: Vec<String>,
        rules: Vec<Rule>,
        grading: Option<Vec<i64>>,
    ) -> Result<Self, AlgError> {
        if gens.len() > 250 {
            return Err(AlgError::TooManyGenerators);
        }
        let mut seen = BTreeSet::new();
        for g in &gens {
            if !seen.insert(g) {
                return Err(AlgError::DuplicateGenerator(g.clone()));
            }
        }
        for (i, r) in rules.iter().enumerate() {
            if r.lhs.letters().any(|g| g >= gens.len()) || r.rhs.iter().any(|(w, _)| w.letters().any(|g| g >= gens.len())) {
                return Err(AlgError::UnknownGenerator(format!("rule {i}")));
            }
            if r.lhs.is_empty() || r.rhs.iter().any(|(w, _)| *w >= r.lhs) {
                return Err(AlgError::RuleNotDecreasing(i));
            }
        }
        if let Some(deg) = &grading {
            if deg.len() != gens.len() {
                return Err(AlgError::GradingLength);
            }
            let d = |w: &Word| w.letters().map(|g| deg[g]).sum::<i64>();
            for (i, r) in rules.iter().enumerate() {
                if r.rhs.iter().any(|(w, _)| d(w) != d(&r.lhs)) {
                    return Err(AlgError::GradingNotHomogeneous(i));
                }
            }
        }
        Ok(Presentation {
            name: name.into(),
            gens,
            rules,
            grading,
            hopf: None,
            budget: DEFAULT_BUDGET,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn with_hopf(mut self, hopf: HopfData) -> Self {
        self.hopf = Some(hopf);
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn gens(&self) -> &[String] {
        &self.gens
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn grading(&self) -> Option<&[i64]> {
        self.grading.as_deref()
    }

    pub fn hopf(&self) -> Option<&HopfData> {
        self.hopf.as_ref()
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g == name)
    }

    pub fn gen(&self, name: &str) -> AlgElement {
        let i = self.gen_index(name).unwrap_or_else(|| panic!("unknown generator {name}"));
        AlgElement::word(Word::letter(i))
    }

    fn redex_at(&self, w: &Word, pos: usize) -> Option<usize> {
        self.rules.iter().position(|r| w.occurs_at(pos, &r.lhs))
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        (0..w.len()).all(|i| self.redex_at(w, i).is_none())
    }

    fn nf_word(&self, w: &Word, steps: &mut usize, budget: usize) -> Result<Arc<AlgElement>, AlgError> {
        if let Some(hit) = self.cache.read().get(w) {
            return Ok(hit.clone());
        }
        let out = if let Some(r) = self.redex_at(w, 0) {
            *steps += 1;
            if *steps > budget {
                return Err(AlgError::ReductionBudgetExceeded(budget));
            }
            let rule = &self.rules[r];
            let mut acc = AlgElement::zero();
            for (t, c) in &rule.rhs {
                let next = w.splice(0, rule.lhs.len(), t);
                let part = self.nf_word(&next, steps, budget)?;
                acc.add_scaled(&part, c);
            }
            acc
        } else if w.len() <= 1 || self.is_normal(w) {
            AlgElement::word(w.clone())
        } else {
            // the first letter is stuck; reduce the tail, then push the letter through
            let head = Word::letter(w.get(0));
            let tail = self.nf_word(&w.tail(), steps, budget)?;
            let mut acc = AlgElement::zero();
            for (u, c) in tail.terms() {
                let part = self.nf_word(&head.concat(u), steps, budget)?;
                acc.add_scaled(&part, c);
            }
            acc
        };
        let out = Arc::new(out);
        self.cache.write().insert(w.clone(), out.clone());
        Ok(out)
    }

    /// Normal form of a single word. Presentations are validated to strictly
    /// decrease a well-order, so this always terminates.
    pub fn word_nf(&self, w: &Word) -> Arc<AlgElement> {
        let mut steps = 0;
        self.nf_word(w, &mut steps, usize::MAX).expect("unbounded budget")
    }

    /// Reduces a raw polynomial, respecting the step budget.
    pub fn normalize(&self, raw: &RawPoly) -> Result<AlgElement, AlgError> {
        let mut steps = 0;
        let mut acc = AlgElement::zero();
        for (letters, c) in raw {
            if let Some(&g) = letters.iter().find(|&&g| g >= self.gens.len()) {
                return Err(AlgError::UnknownGenerator(format!("#{g}")));
            }
            let w = Word::from_letters(letters.iter().copied());
            let part = self.nf_word(&w, &mut steps, self.budget)?;
            acc.add_scaled(&part, c);
        }
        Ok(acc)
    }

    /// Reduces a combination of arbitrary words without a budget.
    pub fn reduce_words<'a, I: IntoIterator<Item = (&'a Word, &'a ScalarRF)>>(&self, it: I) -> AlgElement {
        let mut acc = AlgElement::zero();
        for (w, c) in it {
            acc.add_scaled(&self.word_nf(w), c);
        }
        acc
    }

    pub fn mul(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        let mut acc = AlgElement::zero();
        for (u, cu) in a.terms() {
            for (v, cv) in b.terms() {
                let c = cu * cv;
                if u.is_empty() {
                    acc.add_term(v.clone(), c);
                } else if v.is_empty() {
                    acc.add_term(u.clone(), c);
                } else {
                    acc.add_scaled(&self.word_nf(&u.concat(v)), &c);
                }
            }
        }
        acc
    }

    pub fn mul_all<'a, I: IntoIterator<Item = &'a AlgElement>>(&self, it: I) -> AlgElement {
        it.into_iter().fold(AlgElement::one(), |acc, x| self.mul(&acc, x))
    }

    pub fn pow(&self, a: &AlgElement, n: u32) -> AlgElement {
        (0..n).fold(AlgElement::one(), |acc, _| self.mul(&acc, a))
    }

    /// Normal words of length at most `max_len`, ascending.
    pub fn normal_words(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for g in 0..self.gens.len() {
                    let mut x = w.clone();
                    x.push(g);
                    let ok = self.rules.iter().all(|r| r.lhs.len() > x.len() || !x.occurs_at(x.len() - r.lhs.len(), &r.lhs));
                    if ok {
                        next.push(x);
                    }
                }
            }
            next.sort();
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn word_degree(&self, w: &Word) -> Option<i64> {
        let g = self.grading.as_ref()?;
        Some(w.letters().map(|x| g[x]).sum())
    }

    pub fn zdegree(&self, a: &AlgElement) -> Result<ZDegree, AlgError> {
        let g = self.grading.as_ref().ok_or(AlgError::GradingAbsent)?;
        let mut deg = None;
        for (w, _) in a.terms() {
            let d: i64 = w.letters().map(|x| g[x]).sum();
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Ok(ZDegree::Mixed),
                _ => {}
            }
        }
        Ok(ZDegree::Degree(deg.unwrap_or(0)))
    }

    /// Homogeneous components by Z-degree.
    pub fn split_by_degree(&self, a: &AlgElement) -> Result<Vec<(i64, AlgElement)>, AlgError> {
        let g = self.grading.as_ref().ok_or(AlgError::GradingAbsent)?;
        let mut parts: std::collections::BTreeMap<i64, AlgElement> = Default::default();
        for (w, c) in a.terms() {
            let d: i64 = w.letters().map(|x| g[x]).sum();
            parts.entry(d).or_default().add_term(w.clone(), c.clone());
        }
        Ok(parts.into_iter().collect())
    }

    /// True when every rule preserves the multiset of letters.
    pub fn content_homogeneous(&self) -> bool {
        let content = |w: &Word| (0..self.gens.len()).map(|g| w.count(g)).collect::<Vec<_>>();
        self.rules.iter().all(|r| r.rhs.iter().all(|(w, _)| content(w) == content(&r.lhs)))
    }

    pub fn render(&self, a: &AlgElement) -> String {
        a.render(&self.gens)
    }

    pub fn render_word(&self, w: &Word) -> String {
        w.render(&self.gens, "*")
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().len()
    }
}

/// Result of [`Presentation::zdegree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZDegree {
    Degree(i64),
    Mixed,
}
