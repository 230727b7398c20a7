//! Built-in presentations used by the calculus presets and the tests.

use crate::scalars::ScalarRF;

use super::{AlgElement, HopfData, Presentation, Rule, TensorElement, Word};

fn w(letters: &[usize]) -> Word {
    Word::from_letters(letters.iter().copied())
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Quantum plane `xy = q yx`, normal words `x^r y^s`.
pub fn quantum_plane() -> Presentation {
    let rules = vec![Rule::new(w(&[1, 0]), vec![(w(&[0, 1]), ScalarRF::q_pow(-1))])];
    Presentation::new("qplane", names(&["x", "y"]), rules, None).expect("valid")
}

// Letters are ordered beta < gamma < alpha < delta so that alpha*delta is
// the leading word of the determinant relation.
pub const BETA: usize = 0;
pub const GAMMA: usize = 1;
pub const ALPHA: usize = 2;
pub const DELTA: usize = 3;

/// O_q(SL(2)); normal words are beta^j gamma^k alpha^i and beta^j gamma^k delta^l.
pub fn sl2() -> Presentation {
    let (a, b, c, d) = (ALPHA, BETA, GAMMA, DELTA);
    let q = ScalarRF::q_pow;
    let rules = vec![
        Rule::new(w(&[c, b]), vec![(w(&[b, c]), ScalarRF::one())]),
        Rule::new(w(&[a, b]), vec![(w(&[b, a]), q(1))]),
        Rule::new(w(&[a, c]), vec![(w(&[c, a]), q(1))]),
        Rule::new(w(&[a, d]), vec![(Word::empty(), ScalarRF::one()), (w(&[b, c]), q(1))]),
        Rule::new(w(&[d, b]), vec![(w(&[b, d]), q(-1))]),
        Rule::new(w(&[d, c]), vec![(w(&[c, d]), q(-1))]),
        Rule::new(w(&[d, a]), vec![(Word::empty(), ScalarRF::one()), (w(&[b, c]), q(-1))]),
    ];
    let pres = Presentation::new("sl2", names(&["beta", "gamma", "alpha", "delta"]), rules, Some(vec![-1, 1, 1, -1]))
        .expect("valid");
    let gen = |g: usize| AlgElement::word(Word::letter(g));
    let tens = |pairs: &[(usize, usize)]| {
        let mut t = TensorElement::zero();
        for &(x, y) in pairs {
            t.add_term(Word::letter(x), Word::letter(y), ScalarRF::one());
        }
        t
    };
    // images listed alpha, beta, gamma, delta, then placed by letter index
    let place = |v: [AlgElement; 4]| {
        let mut out = vec![AlgElement::zero(); 4];
        for (g, x) in [a, b, c, d].into_iter().zip(v) {
            out[g] = x;
        }
        out
    };
    let mut coproduct = vec![TensorElement::zero(); 4];
    for (g, t) in [a, b, c, d].into_iter().zip([
        tens(&[(a, a), (b, c)]),
        tens(&[(a, b), (b, d)]),
        tens(&[(c, a), (d, c)]),
        tens(&[(c, b), (d, d)]),
    ]) {
        coproduct[g] = t;
    }
    let mut counit = vec![ScalarRF::zero(); 4];
    counit[a] = ScalarRF::one();
    counit[d] = ScalarRF::one();
    let hopf = HopfData {
        coproduct,
        counit,
        antipode: place([gen(d), gen(b).scale(&-q(-1)), gen(c).scale(&-q(1)), gen(a)]),
        antipode_inv: place([gen(d), gen(b).scale(&-q(1)), gen(c).scale(&-q(-1)), gen(a)]),
    };
    pres.with_hopf(hopf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::ZDegree;

    fn q(e: i32) -> ScalarRF {
        ScalarRF::q_pow(e)
    }

    #[test]
    fn quantum_plane_swap() {
        let p = quantum_plane();
        let yx = p.mul(&p.gen("y"), &p.gen("x"));
        assert_eq!(yx, AlgElement::term(w(&[0, 1]), q(-1)));
    }

    #[test]
    fn sl2_delta_alpha() {
        let p = sl2();
        let da = p.mul(&p.gen("delta"), &p.gen("alpha"));
        let mut expect = AlgElement::one();
        expect.add_term(w(&[BETA, GAMMA]), q(-1));
        assert_eq!(da, expect);
        let ad = p.mul(&p.gen("alpha"), &p.gen("delta"));
        let mut expect = AlgElement::one();
        expect.add_term(w(&[BETA, GAMMA]), q(1));
        assert_eq!(ad, expect);
    }

    #[test]
    fn sl2_bc_squared() {
        let p = sl2();
        let bc = p.mul(&p.gen("beta"), &p.gen("gamma"));
        assert_eq!(p.mul(&bc, &bc), AlgElement::word(w(&[BETA, BETA, GAMMA, GAMMA])));
    }

    #[test]
    fn sl2_degrees() {
        let p = sl2();
        let bc = p.mul(&p.gen("beta"), &p.gen("gamma"));
        assert_eq!(p.zdegree(&bc).unwrap(), ZDegree::Degree(0));
        assert_eq!(p.zdegree(&AlgElement::one()).unwrap(), ZDegree::Degree(0));
        assert_eq!(p.zdegree(&p.gen("alpha").plus(&p.gen("beta"))).unwrap(), ZDegree::Mixed);
    }

    #[test]
    fn sl2_normal_basis_shape() {
        let p = sl2();
        for word in p.normal_words(5) {
            assert!(!(word.count(ALPHA) > 0 && word.count(DELTA) > 0), "{word:?}");
        }
    }

    #[test]
    fn presets_are_confluent() {
        assert!(quantum_plane().check_local_confluence(6).is_confluent());
        let rep = sl2().check_local_confluence(6);
        assert!(!rep.ambiguities.is_empty());
        assert!(rep.is_confluent());
    }

    #[test]
    fn sl2_hopf_checks() {
        let p = sl2();
        for c in p.check_hopf() {
            assert!(c.passed(), "{c:?}");
        }
        assert_eq!(p.antipode(&p.gen("gamma"), 1).unwrap(), p.gen("gamma").scale(&-q(1)));
        let ad = p.mul(&p.gen("alpha"), &p.gen("delta"));
        assert_eq!(p.counit(&ad).unwrap(), ScalarRF::one());
    }
}
