//! Property tests for the algebraic invariants, on random small inputs.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use ncforms::frontend::{load_source, PresentationFile};
use ncforms::homconn::{hom_right_act, HomConnection, HomForm};
use ncforms::integrals::sl2_lambda;
use ncforms::matrixcalc::MatElement;
use ncforms::ncalg::{AlgElement, Word};
use ncforms::scalars::{GaussRat, ScalarRF};

fn connection(name: &str) -> HomConnection {
    let (_, text) = load_source(&format!("preset:{name}")).unwrap();
    PresentationFile::parse(&text).unwrap().connection().unwrap()
}

fn qplane() -> &'static HomConnection {
    static C: OnceLock<HomConnection> = OnceLock::new();
    C.get_or_init(|| connection("qplane"))
}

fn sl2() -> &'static HomConnection {
    static C: OnceLock<HomConnection> = OnceLock::new();
    C.get_or_init(|| connection("sl2-3d"))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

// Σ k q^e p^f with small k, e, f
fn poly_terms() -> impl Strategy<Value = Vec<(i64, i32, i32)>> {
    prop::collection::vec((-3i64..=3, -2i32..=2, 0i32..=1), 1..4)
}

fn build(terms: &[(i64, i32, i32)]) -> ScalarRF {
    terms.iter().fold(ScalarRF::zero(), |acc, &(k, e, f)| {
        &acc + &(&(&ScalarRF::from_int(k) * &ScalarRF::q_pow(e)) * &ScalarRF::param("p").pow(f))
    })
}

fn scalar() -> impl Strategy<Value = ScalarRF> {
    (poly_terms(), poly_terms()).prop_map(|(n, d)| {
        let den = build(&d);
        let den = if den.is_zero() { ScalarRF::one() } else { den };
        build(&n).checked_div(&den).unwrap()
    })
}

fn gauss() -> impl Strategy<Value = GaussRat> {
    (-5i64..=5, 1i64..=4, -5i64..=5, 1i64..=4).prop_map(|(a, b, c, d)| GaussRat::new(rat(a, b), rat(c, d)))
}

/// Random element over the normal words of length ≤ 3.
fn element(conn: &'static HomConnection) -> impl Strategy<Value = AlgElement> {
    let words = conn.calc().pres().normal_words(3);
    prop::collection::vec((0..words.len(), -2i64..=2, -1i32..=1), 1..4).prop_map(move |ts| {
        let mut a = AlgElement::zero();
        for (i, k, e) in ts {
            a.add_term(words[i].clone(), &ScalarRF::from_int(k) * &ScalarRF::q_pow(e));
        }
        a
    })
}

/// Random hom-form of the given degree: Σ ξ_e·a_e.
fn hom(conn: &'static HomConnection, degree: usize) -> impl Strategy<Value = HomForm> {
    let basis = conn.calc().basis(degree).to_vec();
    prop::collection::vec(element(conn), basis.len()).prop_map(move |coeffs| {
        let calc = conn.calc();
        basis.iter().zip(&coeffs).fold(HomForm::zero(degree), |acc, (e, a)| acc.plus(&hom_right_act(calc, &HomForm::dual(e.clone()), a)))
    })
}

fn pick(plane: bool) -> &'static HomConnection {
    if plane {
        qplane()
    } else {
        sl2()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_ring_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn scalar_evaluation_is_a_homomorphism(a in scalar(), b in scalar()) {
        let at = [rat(2, 1), rat(3, 1)];
        let (ea, eb) = (a.eval(&at), b.eval(&at));
        prop_assume!(ea.is_ok() && eb.is_ok());
        let (ea, eb) = (ea.unwrap(), eb.unwrap());
        prop_assert_eq!((&a + &b).eval(&at).unwrap(), &ea + &eb);
        prop_assert_eq!((&a * &b).eval(&at).unwrap(), &ea * &eb);
    }

    #[test]
    fn gaussian_field_laws(a in gauss(), b in gauss(), c in gauss()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        if let Some(inv) = a.inv() {
            prop_assert_eq!(&a * &inv, GaussRat::one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn multiplication_is_associative_and_normal(plane in any::<bool>(), seed in any::<u64>()) {
        let conn = pick(plane);
        let pres = conn.calc().pres();
        let words = pres.normal_words(3);
        let mut rng = ncforms::sample::rng(seed);
        let [a, b, c] = [0, 1, 2].map(|_| ncforms::sample::element(&mut rng, &words, 3));
        let left = pres.mul(&pres.mul(&a, &b), &c);
        prop_assert_eq!(&left, &pres.mul(&a, &pres.mul(&b, &c)));
        prop_assert!(left.terms().all(|(w, _)| pres.is_normal(w)));
    }

    #[test]
    fn twisted_leibniz_rule(a in element(qplane()), b in element(qplane()), c in element(sl2()), d in element(sl2())) {
        for (conn, a, b) in [(qplane(), &a, &b), (sl2(), &c, &d)] {
            let tmd = conn.calc().tmd();
            let pres = tmd.pres();
            let ab = pres.mul(a, b);
            for i in 0..tmd.n() {
                let mut rhs = pres.mul(a, &tmd.partial(i, b));
                for j in 0..tmd.n() {
                    rhs = rhs.plus(&pres.mul(&tmd.partial(j, a), &tmd.sigma_entry(j, i, b)));
                }
                prop_assert_eq!(tmd.partial(i, &ab), rhs);
            }
        }
    }

    #[test]
    fn sigma_bar_inverts_sigma_transpose(a in element(sl2())) {
        // Σ_k σ̄_ik(σ_jk(a)) = δ_ij a
        let tmd = sl2().calc().tmd();
        for i in 0..tmd.n() {
            for j in 0..tmd.n() {
                let mut acc = AlgElement::zero();
                for k in 0..tmd.n() {
                    acc = acc.plus(&tmd.sigma_bar_entry(i, k, &tmd.sigma_entry(j, k, &a)));
                }
                prop_assert_eq!(acc, if i == j { a.clone() } else { AlgElement::zero() });
            }
        }
    }

    #[test]
    fn hom_connection_leibniz(f in hom(sl2(), 1), a in element(sl2()), g in hom(qplane(), 1), b in element(qplane())) {
        prop_assert!(sl2().leibniz_defect(&f, &a).unwrap().is_zero());
        prop_assert!(qplane().leibniz_defect(&g, &b).unwrap().is_zero());
    }

    #[test]
    fn curvature_is_right_linear_and_zero(f in hom(sl2(), 2), a in element(sl2())) {
        let conn = sl2();
        let pres = conn.calc().pres();
        let fa = hom_right_act(conn.calc(), &f, &a);
        let lhs = conn.curvature(&fa).unwrap();
        prop_assert_eq!(&lhs, &pres.mul(&conn.curvature(&f).unwrap(), &a));
        prop_assert!(lhs.is_zero());
    }

    #[test]
    fn d_squared_vanishes(plane in any::<bool>(), seed in any::<u64>()) {
        let conn = pick(plane);
        let calc = conn.calc();
        let words = calc.pres().normal_words(4);
        let a = ncforms::sample::element(&mut ncforms::sample::rng(seed), &words, 3);
        prop_assert!(calc.d(&calc.d_function(&a)).unwrap().is_zero());
    }

    #[test]
    fn haar_functional_kills_the_image(f in hom(sl2(), 1)) {
        let conn = sl2();
        let img = conn.nabla(&f).unwrap();
        prop_assert!(sl2_lambda(conn.calc().pres(), &img).unwrap().is_zero());
    }

    #[test]
    fn matrix_commutators_are_traceless(xs in prop::collection::vec(gauss(), 8)) {
        let a = MatElement::from_rows(vec![xs[0..2].to_vec(), xs[2..4].to_vec()]);
        let b = MatElement::from_rows(vec![xs[4..6].to_vec(), xs[6..8].to_vec()]);
        prop_assert!(a.commutator(&b).trace().is_zero());
        prop_assert_eq!(a.mul(&b).trace(), b.mul(&a).trace());
    }
}

#[test]
fn word_concat_and_split_agree() {
    let w = Word::from_letters([0, 1, 1, 2]);
    assert_eq!(w.first(), Some(0));
    assert_eq!(Word::letter(0).concat(&w.tail()), w);
}
