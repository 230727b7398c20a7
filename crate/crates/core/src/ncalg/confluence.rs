use super::{AlgElement, Presentation, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmbiguityKind {
    Overlap,
    Inclusion,
}

/// One critical word with the two competing reductions.
#[derive(Clone, Debug)]
pub struct Ambiguity {
    pub word: Word,
    pub rules: (usize, usize),
    pub kind: AmbiguityKind,
    pub left: AlgElement,
    pub right: AlgElement,
}

impl Ambiguity {
    pub fn resolved(&self) -> bool {
        self.left == self.right
    }
}

#[derive(Clone, Debug)]
pub struct ConfluenceReport {
    pub degree_bound: usize,
    pub ambiguities: Vec<Ambiguity>,
}

impl ConfluenceReport {
    pub fn failures(&self) -> impl Iterator<Item = &Ambiguity> {
        self.ambiguities.iter().filter(|a| !a.resolved())
    }

    pub fn is_confluent(&self) -> bool {
        self.failures().next().is_none()
    }
}

impl Presentation {
    fn reduce_once_at(&self, w: &Word, rule: usize, pos: usize) -> AlgElement {
        let r = &self.rules()[rule];
        let mut acc = AlgElement::zero();
        for (t, c) in &r.rhs {
            acc.add_scaled(&self.word_nf(&w.splice(pos, r.lhs.len(), t)), c);
        }
        acc
    }

    /// Enumerates overlap and inclusion ambiguities among left-hand sides up to
    /// `degree_bound` letters and compares both reductions.
    pub fn check_local_confluence(&self, degree_bound: usize) -> ConfluenceReport {
        let rules = self.rules();
        let mut amb = Vec::new();
        for (i, a) in rules.iter().enumerate() {
            for (j, b) in rules.iter().enumerate() {
                // proper overlaps: suffix of a equals prefix of b
                for k in 1..a.lhs.len().min(b.lhs.len()) {
                    let sa = a.lhs.sub(a.lhs.len() - k, a.lhs.len());
                    let pb = b.lhs.sub(0, k);
                    if sa != pb {
                        continue;
                    }
                    let w = a.lhs.concat(&b.lhs.sub(k, b.lhs.len()));
                    if w.len() > degree_bound {
                        continue;
                    }
                    amb.push(Ambiguity {
                        left: self.reduce_once_at(&w, i, 0),
                        right: self.reduce_once_at(&w, j, a.lhs.len() - k),
                        word: w,
                        rules: (i, j),
                        kind: AmbiguityKind::Overlap,
                    });
                }
                // b strictly inside a
                if i != j && b.lhs.len() <= a.lhs.len() && a.lhs.len() <= degree_bound {
                    for pos in 0..=(a.lhs.len() - b.lhs.len()) {
                        if a.lhs.occurs_at(pos, &b.lhs) {
                            amb.push(Ambiguity {
                                left: self.reduce_once_at(&a.lhs, i, 0),
                                right: self.reduce_once_at(&a.lhs, j, pos),
                                word: a.lhs.clone(),
                                rules: (i, j),
                                kind: AmbiguityKind::Inclusion,
                            });
                        }
                    }
                }
            }
        }
        ConfluenceReport { degree_bound, ambiguities: amb }
    }
}
