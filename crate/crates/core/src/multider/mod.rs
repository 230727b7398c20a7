//! Right twisted multi-derivations (∂, σ): extension from generators,
//! free-ness checks and q-skew detection.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;
use thiserror::Error;

use crate::check::CheckResult;
use crate::linmap::{invert_triangular, tilde_of_lower, LinMapError, MapExpr, MapMatrix, MatrixKind};
use crate::ncalg::{AlgElement, Presentation, Word};
use crate::scalars::ScalarRF;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerError {
    #[error("σ is not diagonal")]
    SigmaNotDiagonal,
    #[error("∂ row for generator {0} has the wrong length")]
    RowLength(String),
    #[error("σ̄ and σ̂ were not supplied and σ has no diagonal inverses")]
    MissingInverses,
    #[error(transparent)]
    LinMap(#[from] LinMapError),
}

/// (∂, σ) together with σ̄, σ̂.
pub struct TwistedMultiDerivation {
    pres: Arc<Presentation>,
    n: usize,
    partial_gens: Vec<Vec<AlgElement>>,
    sigma: MapMatrix,
    sigma_bar: MapMatrix,
    sigma_hat: MapMatrix,
    cache: RwLock<HashMap<Word, Arc<Vec<AlgElement>>>>,
}

impl std::fmt::Debug for TwistedMultiDerivation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TwistedMultiDerivation").field("n", &self.n).field("algebra", &self.pres.name()).finish()
    }
}

impl TwistedMultiDerivation {
    /// Missing σ̄ or σ̂ are built by triangular inversion from `diag_inverses`.
    pub fn new(
        pres: Arc<Presentation>,
        partial_gens: Vec<Vec<AlgElement>>,
        sigma: MapMatrix,
        sigma_bar: Option<MapMatrix>,
        sigma_hat: Option<MapMatrix>,
        diag_inverses: Option<Vec<MapExpr>>,
    ) -> Result<Self, DerError> {
        let n = sigma.n();
        for (g, row) in partial_gens.iter().enumerate() {
            if row.len() != n {
                return Err(DerError::RowLength(pres.gens().get(g).cloned().unwrap_or_default()));
            }
        }
        if partial_gens.len() != pres.num_gens() {
            return Err(DerError::RowLength("(count)".into()));
        }
        let sigma_bar = match sigma_bar {
            Some(b) => b,
            None => invert_triangular(&pres, &sigma, diag_inverses.as_deref().ok_or(DerError::MissingInverses)?)?,
        };
        let sigma_hat = match sigma_hat {
            Some(h) => h,
            None => {
                let diag: Vec<MapExpr> = (0..n).map(|i| sigma.get(i, i).clone()).collect();
                tilde_of_lower(&pres, &sigma_bar, &diag)?
            }
        };
        Ok(TwistedMultiDerivation { pres, n, partial_gens, sigma, sigma_bar, sigma_hat, cache: Default::default() })
    }

    /// Same data with σ̄ replaced; used to plant corrupted fixtures.
    pub fn with_sigma_bar(&self, sigma_bar: MapMatrix) -> Self {
        TwistedMultiDerivation {
            pres: self.pres.clone(),
            n: self.n,
            partial_gens: self.partial_gens.clone(),
            sigma: self.sigma.clone(),
            sigma_bar,
            sigma_hat: self.sigma_hat.clone(),
            cache: Default::default(),
        }
    }

    pub fn with_partials(&self, partial_gens: Vec<Vec<AlgElement>>) -> Self {
        TwistedMultiDerivation {
            pres: self.pres.clone(),
            n: self.n,
            partial_gens,
            sigma: self.sigma.clone(),
            sigma_bar: self.sigma_bar.clone(),
            sigma_hat: self.sigma_hat.clone(),
            cache: Default::default(),
        }
    }

    pub fn pres(&self) -> &Presentation {
        &self.pres
    }

    pub fn pres_arc(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> &MapMatrix {
        &self.sigma
    }

    pub fn sigma_bar(&self) -> &MapMatrix {
        &self.sigma_bar
    }

    pub fn sigma_hat(&self) -> &MapMatrix {
        &self.sigma_hat
    }

    pub fn partial_on_generator(&self, g: usize) -> &[AlgElement] {
        &self.partial_gens[g]
    }

    /// σ_ij(a).
    pub fn sigma_entry(&self, i: usize, j: usize, a: &AlgElement) -> AlgElement {
        self.sigma.eval_entry(&self.pres, i, j, a).expect("σ was validated at load")
    }

    pub fn sigma_bar_entry(&self, i: usize, j: usize, a: &AlgElement) -> AlgElement {
        self.sigma_bar.eval_entry(&self.pres, i, j, a).expect("σ̄ was validated at load")
    }

    pub fn sigma_hat_entry(&self, i: usize, j: usize, a: &AlgElement) -> AlgElement {
        self.sigma_hat.eval_entry(&self.pres, i, j, a).expect("σ̂ was validated at load")
    }

    /// ∂ on a normal word, by recursion on its first letter.
    pub fn partial_word(&self, w: &Word) -> Arc<Vec<AlgElement>> {
        if let Some(hit) = self.cache.read().get(w) {
            return hit.clone();
        }
        let out = match w.first() {
            None => vec![AlgElement::zero(); self.n],
            Some(g) => {
                let rest = w.tail();
                let sig = self.sigma.eval_word(&self.pres, &rest).expect("σ was validated at load");
                let tail = self.partial_word(&rest);
                self.leibniz_step(g, &sig, &tail)
            }
        };
        let out = Arc::new(out);
        self.cache.write().insert(w.clone(), out.clone());
        out
    }

    // ∂_i(g·w) = Σ_j ∂_j(g) σ_ji(w) + g ∂_i(w)
    fn leibniz_step(&self, g: usize, sig: &[AlgElement], tail: &[AlgElement]) -> Vec<AlgElement> {
        let n = self.n;
        let gen = AlgElement::word(Word::letter(g));
        (0..n)
            .map(|i| {
                let mut acc = AlgElement::zero();
                for j in 0..n {
                    let dj = &self.partial_gens[g][j];
                    let s = &sig[j * n + i];
                    if !dj.is_zero() && !s.is_zero() {
                        acc.add_scaled(&self.pres.mul(dj, s), &ScalarRF::one());
                    }
                }
                if !tail[i].is_zero() {
                    acc.add_scaled(&self.pres.mul(&gen, &tail[i]), &ScalarRF::one());
                }
                acc
            })
            .collect()
    }

    /// ∂ on an arbitrary word, with σ taken as the product of generator matrices.
    pub fn partial_raw_word(&self, w: &Word) -> Vec<AlgElement> {
        match w.first() {
            None => vec![AlgElement::zero(); self.n],
            Some(g) => {
                let rest = w.tail();
                let sig = self.sigma.eval_letters(&self.pres, &rest).expect("σ was validated at load");
                let tail = self.partial_raw_word(&rest);
                self.leibniz_step(g, &sig, &tail)
            }
        }
    }

    pub fn extend_partial(&self, a: &AlgElement) -> Vec<AlgElement> {
        let mut out = vec![AlgElement::zero(); self.n];
        for (w, c) in a.terms() {
            for (slot, x) in out.iter_mut().zip(self.partial_word(w).iter()) {
                slot.add_scaled(x, c);
            }
        }
        out
    }

    pub fn partial(&self, i: usize, a: &AlgElement) -> AlgElement {
        let mut acc = AlgElement::zero();
        for (w, c) in a.terms() {
            acc.add_scaled(&self.partial_word(w)[i], c);
        }
        acc
    }

    fn identity_words(&self) -> Vec<Word> {
        std::iter::once(Word::empty()).chain((0..self.pres.num_gens()).map(Word::letter)).collect()
    }

    /// The four matrix identities of a free derivation, on the given words.
    pub fn check_bar_hat(&self, words: &[Word]) -> Vec<CheckResult> {
        let pres = &self.pres;
        let pairs: [(&str, &str, MapMatrix, MapMatrix); 4] = [
            ("sigma_bar_sigma_t", "σ̄ • σ^T = 𝕀", self.sigma_bar.clone(), self.sigma.transpose()),
            ("sigma_t_sigma_bar", "σ^T • σ̄ = 𝕀", self.sigma.transpose(), self.sigma_bar.clone()),
            ("sigma_hat_sigma_bar_t", "σ̂ • σ̄^T = 𝕀", self.sigma_hat.clone(), self.sigma_bar.transpose()),
            ("sigma_bar_t_sigma_hat", "σ̄^T • σ̂ = 𝕀", self.sigma_bar.transpose(), self.sigma_hat.clone()),
        ];
        pairs
            .into_iter()
            .map(|(name, reference, a, b)| {
                let witness = a.bullet(&b).and_then(|m| m.check_identity(pres, words)).unwrap_or_else(|e| Some(e.to_string()));
                CheckResult::from_witness(&format!("free.{name}"), reference, witness)
            })
            .collect()
    }

    /// Relation, multiplicativity and inverse checks; failures carry witnesses.
    pub fn verify_free(&self) -> Vec<CheckResult> {
        let pres = &self.pres;
        let mut out = Vec::new();
        for (label, m) in [("sigma", &self.sigma), ("sigma_bar", &self.sigma_bar), ("sigma_hat", &self.sigma_hat)] {
            let w = m.check_multiplicative(pres).unwrap_or_else(|e| Some(e.to_string()));
            out.push(CheckResult::from_witness(&format!("free.{label}_multiplicative"), "algebra map A -> M_n(A)", w));
        }
        let mut bad = None;
        for r in pres.rules() {
            let lhs = self.partial_raw_word(&r.lhs);
            let mut rhs = vec![AlgElement::zero(); self.n];
            for (w, c) in &r.rhs {
                for (slot, x) in rhs.iter_mut().zip(self.partial_raw_word(w)) {
                    slot.add_scaled(&x, c);
                }
            }
            if lhs != rhs {
                let i = (0..self.n).find(|&i| lhs[i] != rhs[i]).unwrap_or(0);
                bad = Some(format!(
                    "relation {}: ∂_{} gives {} vs {}",
                    pres.render_word(&r.lhs),
                    i + 1,
                    pres.render(&lhs[i]),
                    pres.render(&rhs[i])
                ));
                break;
            }
        }
        out.push(CheckResult::from_witness("free.partial_kills_relations", "∂ is well defined on A", bad));
        out.extend(self.check_bar_hat(&self.identity_words()));
        out
    }

    /// q_i with σ_i^{-1} ∂_i σ_i = q_i ∂_i on generators, when σ is diagonal.
    pub fn detect_q_skew(&self) -> Result<Option<Vec<ScalarRF>>, DerError> {
        if self.sigma.kind() != MatrixKind::Diagonal {
            return Err(DerError::SigmaNotDiagonal);
        }
        let mut qs = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut found: Option<ScalarRF> = None;
            for g in 0..self.pres.num_gens() {
                let x = AlgElement::word(Word::letter(g));
                let lhs = self.sigma_bar_entry(i, i, &self.partial(i, &self.sigma_entry(i, i, &x)));
                let rhs = self.partial(i, &x);
                let k = match (found.clone(), rhs.leading()) {
                    (Some(k), _) => k,
                    (None, None) => {
                        if !lhs.is_zero() {
                            return Ok(None);
                        }
                        continue;
                    }
                    (None, Some((w, c))) => {
                        let k = lhs.coeff(w).checked_div(c).expect("nonzero leading coefficient");
                        found = Some(k.clone());
                        k
                    }
                };
                if lhs != rhs.scale(&k) {
                    return Ok(None);
                }
            }
            qs.push(found.unwrap_or_else(ScalarRF::one));
        }
        Ok(Some(qs))
    }

    /// Constant ℤ-degree shift of each ∂_i on generators, when one exists.
    pub fn degree_shifts(&self) -> Option<Vec<Option<i64>>> {
        self.pres.grading()?;
        Some(
            (0..self.n)
                .map(|i| {
                    let mut shift = None;
                    for g in 0..self.pres.num_gens() {
                        let x = &self.partial_gens[g][i];
                        if x.is_zero() {
                            continue;
                        }
                        let d = match self.pres.zdegree(x).ok()? {
                            crate::ncalg::ZDegree::Degree(d) => d,
                            crate::ncalg::ZDegree::Mixed => return None,
                        };
                        let s = d - self.pres.word_degree(&Word::letter(g))?;
                        match shift {
                            None => shift = Some(s),
                            Some(t) if t != s => return None,
                            _ => {}
                        }
                    }
                    shift
                })
                .collect(),
        )
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use std::sync::Arc;

    use super::*;
    use crate::linmap::MatrixAlgebraMap;
    use crate::ncalg::presets::{quantum_plane, sl2, ALPHA, BETA, DELTA, GAMMA};

    pub fn q(e: i32) -> ScalarRF {
        ScalarRF::q_pow(e)
    }

    pub fn p(e: i32) -> ScalarRF {
        ScalarRF::param_pow(1, e)
    }

    fn mono(r: usize, s: usize, c: ScalarRF) -> AlgElement {
        AlgElement::term(Word::from_letters(std::iter::repeat_n(0, r).chain(std::iter::repeat_n(1, s))), c)
    }

    /// Quantum plane with ∂ = (∂_x, ∂_y) and the upper-triangular σ.
    pub fn qplane() -> TwistedMultiDerivation {
        let pres = Arc::new(quantum_plane());
        let one = ScalarRF::one();
        let images = vec![
            vec![mono(1, 0, p(1)), AlgElement::zero(), AlgElement::zero(), mono(1, 0, &p(1) * &q(-1))],
            vec![mono(0, 1, q(1)), mono(1, 0, &p(1) - &one), AlgElement::zero(), mono(0, 1, p(1))],
        ];
        let sigma = MapMatrix::from_algebra_map(Arc::new(MatrixAlgebraMap::new(2, images).unwrap()));
        let inv = vec![
            MapExpr::algebra_map(vec![mono(1, 0, p(-1)), mono(0, 1, q(-1))]),
            MapExpr::algebra_map(vec![mono(1, 0, &p(-1) * &q(1)), mono(0, 1, p(-1))]),
        ];
        let partials = vec![vec![AlgElement::one(), AlgElement::zero()], vec![AlgElement::zero(), AlgElement::one()]];
        TwistedMultiDerivation::new(pres, partials, sigma, None, None, Some(inv)).unwrap()
    }

    /// 3D calculus on O_q(SL(2)); derivation order (−, 0, +).
    pub fn sl2_3d() -> TwistedMultiDerivation {
        let pres = Arc::new(sl2());
        let g = |x: usize, c: ScalarRF| AlgElement::term(Word::letter(x), c);
        let z = AlgElement::zero;
        let mut partials = vec![Vec::new(); 4];
        partials[ALPHA] = vec![z(), g(ALPHA, q(0)), g(BETA, -q(1))];
        partials[BETA] = vec![g(ALPHA, q(0)), g(BETA, -q(2)), z()];
        partials[GAMMA] = vec![z(), g(GAMMA, q(0)), g(DELTA, -q(1))];
        partials[DELTA] = vec![g(GAMMA, q(0)), g(DELTA, -q(2)), z()];
        let sigma = MapMatrix::diagonal(vec![
            MapExpr::grade_scale(q(1), -1),
            MapExpr::grade_scale(q(1), -2),
            MapExpr::grade_scale(q(1), -1),
        ])
        .assume_multiplicative();
        let inv = vec![MapExpr::grade_scale(q(1), 1), MapExpr::grade_scale(q(1), 2), MapExpr::grade_scale(q(1), 1)];
        TwistedMultiDerivation::new(pres, partials, sigma, None, None, Some(inv)).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::ncalg::presets::{ALPHA, BETA, GAMMA};

    #[test]
    fn sl2_partials() {
        let t = sl2_3d();
        let pres = t.pres();
        assert_eq!(t.partial(2, &pres.gen("alpha")), pres.gen("beta").scale(&-q(1)));
        let bc = pres.mul(&pres.gen("beta"), &pres.gen("gamma"));
        assert!(t.partial(1, &bc).is_zero());
        assert!(t.extend_partial(&AlgElement::one()).iter().all(AlgElement::is_zero));
        let _ = (ALPHA, BETA, GAMMA);
    }

    #[test]
    fn presets_are_free() {
        for t in [qplane(), sl2_3d()] {
            for c in t.verify_free() {
                assert!(c.passed(), "{c:?}");
            }
            let words = t.pres().normal_words(4);
            for c in t.check_bar_hat(&words) {
                assert!(c.passed(), "{c:?}");
            }
        }
    }

    #[test]
    fn corrupted_bar_is_caught() {
        let t = sl2_3d();
        let n = t.n();
        let mut e: Vec<MapExpr> = t.sigma_bar().entries().to_vec();
        e[0] = e[0].neg();
        let bad = t.with_sigma_bar(MapMatrix::new(n, e).unwrap());
        let res = bad.verify_free();
        let c = res.iter().find(|c| c.name == "free.sigma_bar_sigma_t").unwrap();
        assert!(!c.passed());
        assert!(c.witness.as_deref().unwrap().contains("entry (1,1)"));
    }

    #[test]
    fn q_skew_constants() {
        let t = sl2_3d();
        assert_eq!(t.detect_q_skew().unwrap(), Some(vec![q(2), q(0), q(-2)]));
        assert_eq!(qplane().detect_q_skew().unwrap_err(), DerError::SigmaNotDiagonal);
        assert_eq!(t.degree_shifts().unwrap(), vec![Some(2), Some(0), Some(-2)]);
    }
}
