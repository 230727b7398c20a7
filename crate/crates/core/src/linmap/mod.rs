//! Linear maps on an algebra, matrices of them under the • product, and the
//! triangular inversion that produces σ̄ and σ̂ from σ.

mod expr;
mod matrix;

use thiserror::Error;

pub use expr::{matmul, MapEval, MapExpr, MatrixAlgebraMap};
pub use matrix::{invert_triangular, tilde_of_lower, MapMatrix, MatrixKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinMapError {
    #[error("matrix sizes do not match")]
    SizeMismatch,
    #[error("matrix is not triangular in the required direction")]
    NotTriangular,
    #[error("supplied inverse of diagonal entry {index} fails on generator {generator}")]
    DiagonalNotInvertible { index: usize, generator: String },
    #[error("grade scaling needs a graded presentation")]
    GradingAbsent,
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ncalg::presets::quantum_plane;
    use crate::ncalg::{AlgElement, Presentation, Word};
    use crate::scalars::ScalarRF;

    fn p(e: i32) -> ScalarRF {
        ScalarRF::param_pow(1, e)
    }

    fn q(e: i32) -> ScalarRF {
        ScalarRF::q_pow(e)
    }

    fn mono(r: usize, s: usize, c: ScalarRF) -> AlgElement {
        AlgElement::term(Word::from_letters(std::iter::repeat_n(0, r).chain(std::iter::repeat_n(1, s))), c)
    }

    fn qplane_sigma() -> (MapMatrix, Vec<MapExpr>) {
        let x = images_x();
        let map = MatrixAlgebraMap::new(2, x).unwrap();
        let inv = vec![
            MapExpr::algebra_map(vec![mono(1, 0, p(-1)), mono(0, 1, q(-1))]),
            MapExpr::algebra_map(vec![mono(1, 0, &p(-1) * &q(1)), mono(0, 1, p(-1))]),
        ];
        (MapMatrix::from_algebra_map(Arc::new(map)), inv)
    }

    fn images_x() -> Vec<Vec<AlgElement>> {
        vec![
            vec![mono(1, 0, p(1)), AlgElement::zero(), AlgElement::zero(), mono(1, 0, &p(1) * &q(-1))],
            vec![mono(0, 1, q(1)), mono(1, 0, &p(1) - &ScalarRF::one()), AlgElement::zero(), mono(0, 1, p(1))],
        ]
    }

    fn words(pres: &Presentation, l: usize) -> Vec<Word> {
        pres.normal_words(l)
    }

    #[test]
    fn qplane_bar_and_hat() {
        let pres = quantum_plane();
        let (sigma, inv) = qplane_sigma();
        assert_eq!(sigma.kind(), MatrixKind::UpperTriangular);
        assert_eq!(sigma.check_multiplicative(&pres).unwrap(), None);
        let bar = invert_triangular(&pres, &sigma, &inv).unwrap();
        assert_eq!(bar.kind(), MatrixKind::LowerTriangular);
        let ws = words(&pres, 4);
        assert_eq!(bar.bullet(&sigma.transpose()).unwrap().check_identity(&pres, &ws).unwrap(), None);
        assert_eq!(sigma.transpose().bullet(&bar).unwrap().check_identity(&pres, &ws).unwrap(), None);
        let diag: Vec<MapExpr> = (0..2).map(|i| sigma.get(i, i).clone()).collect();
        let hat = tilde_of_lower(&pres, &bar, &diag).unwrap();
        assert_eq!(hat.kind(), MatrixKind::UpperTriangular);
        assert_eq!(hat.bullet(&bar.transpose()).unwrap().check_identity(&pres, &ws).unwrap(), None);
        assert_eq!(bar.transpose().bullet(&hat).unwrap().check_identity(&pres, &ws).unwrap(), None);
        assert_eq!(bar.check_multiplicative(&pres).unwrap(), None);
        assert_eq!(hat.check_multiplicative(&pres).unwrap(), None);
        // σ̄(xy) entry (2,1) = p^-1 q (p^-1 - 1) x^2
        let xy = mono(1, 1, ScalarRF::one());
        let got = bar.eval_entry(&pres, 1, 0, &xy).unwrap();
        assert_eq!(got, mono(2, 0, &(&p(-1) * &q(1)) * &(&p(-1) - &ScalarRF::one())));
    }

    #[test]
    fn diagonal_inverse() {
        let pres = quantum_plane();
        let s = vec![
            MapExpr::algebra_map(vec![mono(1, 0, q(2)), mono(0, 1, q(1))]),
            MapExpr::identity(),
        ];
        let inv = vec![MapExpr::algebra_map(vec![mono(1, 0, q(-2)), mono(0, 1, q(-1))]), MapExpr::identity()];
        let sigma = MapMatrix::diagonal(s.clone());
        let bar = invert_triangular(&pres, &sigma, &inv).unwrap();
        assert_eq!(bar.kind(), MatrixKind::Diagonal);
        let hat = tilde_of_lower(&pres, &bar, &s).unwrap();
        for w in words(&pres, 3) {
            assert_eq!(hat.eval_word(&pres, &w).unwrap(), sigma.eval_word(&pres, &w).unwrap());
        }
        let bad = vec![MapExpr::algebra_map(vec![mono(1, 0, q(-2)), mono(0, 1, q(1))]), MapExpr::identity()];
        assert!(matches!(invert_triangular(&pres, &sigma, &bad), Err(LinMapError::DiagonalNotInvertible { index: 1, .. })));
        assert_eq!(invert_triangular(&pres, &sigma.transpose().bullet(&MapMatrix::identity(2)).unwrap(), &inv).map(|m| m.kind()), Ok(MatrixKind::Diagonal));
    }

    #[test]
    fn bullet_identity_and_sizes() {
        let pres = quantum_plane();
        let (sigma, _) = qplane_sigma();
        let id = MapMatrix::identity(2);
        let b = sigma.bullet(&id).unwrap();
        for w in words(&pres, 3) {
            assert_eq!(b.eval_word(&pres, &w).unwrap(), sigma.eval_word(&pres, &w).unwrap());
        }
        assert_eq!(sigma.bullet(&MapMatrix::identity(3)).unwrap_err(), LinMapError::SizeMismatch);
        let n1 = MapMatrix::identity(1);
        assert!(invert_triangular(&pres, &n1, &[MapExpr::identity()]).unwrap().get(0, 0).is_identity());
    }

    #[test]
    fn not_triangular() {
        let pres = quantum_plane();
        let (sigma, inv) = qplane_sigma();
        let general = MapMatrix::new(2, vec![MapExpr::identity(); 4]).unwrap();
        assert_eq!(invert_triangular(&pres, &general, &inv).unwrap_err(), LinMapError::NotTriangular);
        assert_eq!(tilde_of_lower(&pres, &sigma, &inv).unwrap_err(), LinMapError::NotTriangular);
    }

    #[test]
    fn grade_scale_needs_grading() {
        let pres = quantum_plane();
        let g = MapExpr::grade_scale(q(1), -2);
        assert_eq!(g.eval(&pres, &mono(1, 0, ScalarRF::one())).unwrap_err(), LinMapError::GradingAbsent);
        let sl2 = crate::ncalg::presets::sl2();
        let a = sl2.gen("alpha").plus(&sl2.gen("beta"));
        let got = g.eval(&sl2, &a).unwrap();
        assert_eq!(got, sl2.gen("alpha").scale(&q(-2)).plus(&sl2.gen("beta").scale(&q(2))));
    }
}
