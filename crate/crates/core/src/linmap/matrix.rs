use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;
use serde::Serialize;

use crate::ncalg::{AlgElement, Presentation, Word};

use super::expr::{identity_matrix, matmul, MapEval, MapExpr, MatrixAlgebraMap};
use super::LinMapError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    General,
    UpperTriangular,
    LowerTriangular,
    Diagonal,
}

/// n×n matrix of linear maps on A, i.e. an element of M_n(End(A)).
///
/// Values on words are cached; the cache is shared by clones.
#[derive(Clone, Debug)]
pub struct MapMatrix {
    n: usize,
    entries: Vec<MapExpr>,
    multiplicative: bool,
    cache: Arc<RwLock<HashMap<Word, Arc<Vec<AlgElement>>>>>,
}

impl MapMatrix {
    pub fn new(n: usize, entries: Vec<MapExpr>) -> Result<Self, LinMapError> {
        if entries.len() != n * n {
            return Err(LinMapError::SizeMismatch);
        }
        Ok(MapMatrix { n, entries, multiplicative: false, cache: Default::default() })
    }

    /// Entries of an algebra map A -> M_n(A).
    pub fn from_algebra_map(map: Arc<MatrixAlgebraMap>) -> Self {
        let n = map.n();
        // triangular generator images give triangular values on every word
        let vanishes = |i: usize, j: usize| (0..map.num_gens()).all(|g| map.generator_image(g)[i * n + j].is_zero());
        let lower_zero = (0..n).all(|i| (0..i).all(|j| vanishes(i, j)));
        let upper_zero = (0..n).all(|i| (i + 1..n).all(|j| vanishes(i, j)));
        let entries = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                if (i > j && lower_zero) || (i < j && upper_zero) {
                    MapExpr::zero()
                } else {
                    MapExpr::entry(map.clone(), i, j)
                }
            })
            .collect();
        MapMatrix { n, entries, multiplicative: true, cache: Default::default() }
    }

    pub fn diagonal(diag: Vec<MapExpr>) -> Self {
        let n = diag.len();
        let mut entries = vec![MapExpr::zero(); n * n];
        for (i, e) in diag.into_iter().enumerate() {
            entries[i * n + i] = e;
        }
        MapMatrix { n, entries, multiplicative: false, cache: Default::default() }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(vec![MapExpr::identity(); n])
    }

    /// Declares the matrix an algebra map; only recorded, checked by callers.
    pub fn assume_multiplicative(mut self) -> Self {
        self.multiplicative = true;
        self
    }

    pub fn is_multiplicative(&self) -> bool {
        self.multiplicative
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &MapExpr {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[MapExpr] {
        &self.entries
    }

    /// Zero pattern read off the symbolic entries.
    pub fn kind(&self) -> MatrixKind {
        let n = self.n;
        let below = (0..n).any(|i| (0..i).any(|j| !self.get(i, j).is_zero()));
        let above = (0..n).any(|i| (i + 1..n).any(|j| !self.get(i, j).is_zero()));
        match (below, above) {
            (false, false) => MatrixKind::Diagonal,
            (false, true) => MatrixKind::UpperTriangular,
            (true, false) => MatrixKind::LowerTriangular,
            (true, true) => MatrixKind::General,
        }
    }

    pub fn transpose(&self) -> MapMatrix {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect();
        MapMatrix { n, entries, multiplicative: false, cache: Default::default() }
    }

    /// (A•B)_ij = Σ_k A_ik ∘ B_kj, kept symbolic.
    pub fn bullet(&self, other: &MapMatrix) -> Result<MapMatrix, LinMapError> {
        if self.n != other.n {
            return Err(LinMapError::SizeMismatch);
        }
        let n = self.n;
        let entries = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                MapExpr::sum((0..n).map(|l| self.get(i, l).compose(other.get(l, j))).collect())
            })
            .collect();
        MapMatrix::new(n, entries)
    }

    /// All n² entries evaluated on a word.
    pub fn eval_word(&self, pres: &Presentation, w: &Word) -> Result<Arc<Vec<AlgElement>>, LinMapError> {
        if let Some(hit) = self.cache.read().get(w) {
            return Ok(hit.clone());
        }
        let mut sess = MapEval::new(pres);
        let mut out = Vec::with_capacity(self.n * self.n);
        for e in &self.entries {
            out.push((*sess.eval_word(e, w)?).clone());
        }
        let out = Arc::new(out);
        self.cache.write().insert(w.clone(), out.clone());
        Ok(out)
    }

    pub fn eval(&self, pres: &Presentation, a: &AlgElement) -> Result<Vec<AlgElement>, LinMapError> {
        let mut out = vec![AlgElement::zero(); self.n * self.n];
        for (w, c) in a.terms() {
            for (slot, x) in out.iter_mut().zip(self.eval_word(pres, w)?.iter()) {
                slot.add_scaled(x, c);
            }
        }
        Ok(out)
    }

    pub fn eval_entry(&self, pres: &Presentation, i: usize, j: usize, a: &AlgElement) -> Result<AlgElement, LinMapError> {
        let mut acc = AlgElement::zero();
        for (w, c) in a.terms() {
            acc.add_scaled(&self.eval_word(pres, w)?[i * self.n + j], c);
        }
        Ok(acc)
    }

    /// Product of the generator matrices along an arbitrary word.
    pub fn eval_letters(&self, pres: &Presentation, w: &Word) -> Result<Vec<AlgElement>, LinMapError> {
        let mut acc = identity_matrix(self.n);
        for g in w.letters() {
            let m = self.eval_word(pres, &Word::letter(g))?;
            acc = matmul(pres, self.n, &acc, &m);
        }
        Ok(acc)
    }

    /// First word on which the matrix is not δ_ij·w, if any.
    pub fn check_identity(&self, pres: &Presentation, words: &[Word]) -> Result<Option<String>, LinMapError> {
        let results = crate::exec::par_map(words, |w| -> Result<Option<String>, LinMapError> {
            let m = self.eval_word(pres, w)?;
            for i in 0..self.n {
                for j in 0..self.n {
                    let got = &m[i * self.n + j];
                    let ok = if i == j { *got == AlgElement::word(w.clone()) } else { got.is_zero() };
                    if !ok {
                        return Ok(Some(format!(
                            "entry ({},{}) on {} gives {}",
                            i + 1,
                            j + 1,
                            pres.render_word(w),
                            pres.render(got)
                        )));
                    }
                }
            }
            Ok(None)
        });
        for r in results {
            if let Some(w) = r? {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }

    /// Algebra-map checks: relations are respected and M(gh) = M(g)M(h) on generator pairs.
    pub fn check_multiplicative(&self, pres: &Presentation) -> Result<Option<String>, LinMapError> {
        for r in pres.rules() {
            let lhs = self.eval_letters(pres, &r.lhs)?;
            let mut rhs = vec![AlgElement::zero(); self.n * self.n];
            for (w, c) in &r.rhs {
                for (slot, x) in rhs.iter_mut().zip(self.eval_letters(pres, w)?) {
                    slot.add_scaled(&x, c);
                }
            }
            if lhs != rhs {
                return Ok(Some(format!("relation {} not respected", pres.render_word(&r.lhs))));
            }
        }
        let gens = pres.num_gens();
        for g in 0..gens {
            for h in 0..gens {
                let gh = pres.word_nf(&Word::from_letters([g, h]));
                let direct = self.eval(pres, &gh)?;
                let prod = self.eval_letters(pres, &Word::from_letters([g, h]))?;
                if direct != prod {
                    return Ok(Some(format!(
                        "M({}) differs from M({})M({})",
                        pres.render(&gh),
                        pres.gens()[g],
                        pres.gens()[h]
                    )));
                }
            }
        }
        Ok(None)
    }
}

fn check_roundtrip(pres: &Presentation, f: &MapExpr, g: &MapExpr) -> Result<Option<usize>, LinMapError> {
    for gen in 0..pres.num_gens() {
        let x = AlgElement::word(Word::letter(gen));
        let a = f.eval(pres, &g.eval(pres, &x)?)?;
        let b = g.eval(pres, &f.eval(pres, &x)?)?;
        if a != x || b != x {
            return Ok(Some(gen));
        }
    }
    Ok(None)
}

/// Lower-triangular σ̄ with σ^T•σ̄ = 𝕀 from upper-triangular σ.
///
/// `diag_inverses[i]` must invert σ_ii; this is checked on generators only.
pub fn invert_triangular(pres: &Presentation, sigma: &MapMatrix, diag_inverses: &[MapExpr]) -> Result<MapMatrix, LinMapError> {
    let n = sigma.n();
    if !matches!(sigma.kind(), MatrixKind::UpperTriangular | MatrixKind::Diagonal) {
        return Err(LinMapError::NotTriangular);
    }
    if diag_inverses.len() != n {
        return Err(LinMapError::SizeMismatch);
    }
    for i in 0..n {
        if let Some(g) = check_roundtrip(pres, sigma.get(i, i), &diag_inverses[i])? {
            return Err(LinMapError::DiagonalNotInvertible { index: i + 1, generator: pres.gens()[g].clone() });
        }
    }
    let mut bar = vec![MapExpr::zero(); n * n];
    for i in 0..n {
        bar[i * n + i] = diag_inverses[i].clone();
    }
    for d in 1..n {
        for j in 0..n - d {
            let i = j + d;
            let parts = (j..i).map(|k| sigma.get(k, i).compose(&bar[k * n + j])).collect();
            bar[i * n + j] = diag_inverses[i].compose(&MapExpr::sum(parts)).neg();
        }
    }
    Ok(MapMatrix::new(n, bar)?.assume_multiplicative())
}

/// Upper-triangular α̃ with ᾱ^T•α̃ = 𝕀 from lower-triangular ᾱ.
pub fn tilde_of_lower(pres: &Presentation, lower: &MapMatrix, diag_inverses: &[MapExpr]) -> Result<MapMatrix, LinMapError> {
    let n = lower.n();
    if !matches!(lower.kind(), MatrixKind::LowerTriangular | MatrixKind::Diagonal) {
        return Err(LinMapError::NotTriangular);
    }
    if diag_inverses.len() != n {
        return Err(LinMapError::SizeMismatch);
    }
    for i in 0..n {
        if let Some(g) = check_roundtrip(pres, lower.get(i, i), &diag_inverses[i])? {
            return Err(LinMapError::DiagonalNotInvertible { index: i + 1, generator: pres.gens()[g].clone() });
        }
    }
    let mut tl = vec![MapExpr::zero(); n * n];
    for i in 0..n {
        tl[i * n + i] = diag_inverses[i].clone();
    }
    for d in 1..n {
        for i in (0..n - d).rev() {
            let j = i + d;
            let parts = (i + 1..=j).map(|l| lower.get(l, i).compose(&tl[l * n + j])).collect();
            tl[i * n + j] = diag_inverses[i].compose(&MapExpr::sum(parts)).neg();
        }
    }
    Ok(MapMatrix::new(n, tl)?.assume_multiplicative())
}
