use crate::check::CheckResult;
use crate::scalars::ScalarRF;

use super::{AlgElement, AlgError, Presentation, TensorElement, Word};

/// Generator images of the Hopf structure maps.
#[derive(Clone, Debug, PartialEq)]
pub struct HopfData {
    pub coproduct: Vec<TensorElement>,
    pub counit: Vec<ScalarRF>,
    pub antipode: Vec<AlgElement>,
    pub antipode_inv: Vec<AlgElement>,
}

impl Presentation {
    fn hopf_data(&self) -> Result<&HopfData, AlgError> {
        self.hopf().ok_or(AlgError::HopfAbsent)
    }

    /// Product in A⊗A.
    pub fn tensor_mul(&self, x: &TensorElement, y: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero();
        for ((a, b), c) in x.terms() {
            for ((u, v), d) in y.terms() {
                let left = self.word_nf(&a.concat(u));
                let right = self.word_nf(&b.concat(v));
                out.add_product(&left, &right, &(c * d));
            }
        }
        out
    }

    fn coproduct_word(&self, h: &HopfData, w: &Word) -> TensorElement {
        w.letters().fold(TensorElement::one(), |acc, g| self.tensor_mul(&acc, &h.coproduct[g]))
    }

    pub fn coproduct(&self, a: &AlgElement) -> Result<TensorElement, AlgError> {
        let h = self.hopf_data()?;
        Ok(self.coproduct_raw(h, a.terms()))
    }

    fn coproduct_raw<'a, I: IntoIterator<Item = (&'a Word, &'a ScalarRF)>>(&self, h: &HopfData, it: I) -> TensorElement {
        let mut out = TensorElement::zero();
        for (w, c) in it {
            for ((a, b), d) in self.coproduct_word(h, w).terms() {
                out.add_term(a.clone(), b.clone(), c * d);
            }
        }
        out
    }

    pub fn counit(&self, a: &AlgElement) -> Result<ScalarRF, AlgError> {
        let h = self.hopf_data()?;
        Ok(self.counit_raw(h, a.terms()))
    }

    fn counit_raw<'a, I: IntoIterator<Item = (&'a Word, &'a ScalarRF)>>(&self, h: &HopfData, it: I) -> ScalarRF {
        let mut acc = ScalarRF::zero();
        for (w, c) in it {
            let v = w.letters().fold(ScalarRF::one(), |k, g| &k * &h.counit[g]);
            acc = &acc + &(c * &v);
        }
        acc
    }

    fn anti_apply<'a, I: IntoIterator<Item = (&'a Word, &'a ScalarRF)>>(&self, images: &[AlgElement], it: I) -> AlgElement {
        let mut acc = AlgElement::zero();
        for (w, c) in it {
            let img = w.reversed().letters().fold(AlgElement::one(), |k, g| self.mul(&k, &images[g]));
            acc.add_scaled(&img, c);
        }
        acc
    }

    /// `S^power` for power in {-2, -1, 1, 2}, composed from generator images.
    pub fn antipode(&self, a: &AlgElement, power: i32) -> Result<AlgElement, AlgError> {
        let h = self.hopf_data()?;
        let (images, times) = match power {
            1 => (&h.antipode, 1),
            2 => (&h.antipode, 2),
            -1 => (&h.antipode_inv, 1),
            -2 => (&h.antipode_inv, 2),
            _ => return Err(AlgError::UnsupportedPower(power)),
        };
        let mut x = a.clone();
        for _ in 0..times {
            x = self.anti_apply(images, x.terms());
        }
        Ok(x)
    }

    /// Structure checks: maps respect the relations and satisfy the Hopf axioms on generators.
    pub fn check_hopf(&self) -> Vec<CheckResult> {
        let Some(h) = self.hopf() else {
            return vec![CheckResult::skipped("hopf.present", "no Hopf data declared")];
        };
        let names = self.gens();
        let mut out = Vec::new();
        let rel_name = |r: &super::Rule| self.render_word(&r.lhs);

        let mut bad = None;
        for r in self.rules() {
            let l = self.coproduct_word(h, &r.lhs);
            let rr = self.coproduct_raw(h, r.rhs.iter().map(|(w, c)| (w, c)));
            if l != rr {
                bad = Some(format!("relation {}: {} vs {}", rel_name(r), l.render(names), rr.render(names)));
                break;
            }
        }
        out.push(CheckResult::from_witness("hopf.coproduct_respects_relations", "Δ is an algebra map", bad));

        let mut bad = None;
        for r in self.rules() {
            let l = self.counit_raw(h, [(&r.lhs, &ScalarRF::one())]);
            let rr = self.counit_raw(h, r.rhs.iter().map(|(w, c)| (w, c)));
            if l != rr {
                bad = Some(format!("relation {}: {l} vs {rr}", rel_name(r)));
                break;
            }
        }
        out.push(CheckResult::from_witness("hopf.counit_respects_relations", "ε is an algebra map", bad));

        for (label, images) in [("antipode", &h.antipode), ("antipode_inv", &h.antipode_inv)] {
            let mut bad = None;
            for r in self.rules() {
                let l = self.anti_apply(images, [(&r.lhs, &ScalarRF::one())]);
                let rr = self.anti_apply(images, r.rhs.iter().map(|(w, c)| (w, c)));
                if l != rr {
                    bad = Some(format!("relation {}: {} vs {}", rel_name(r), self.render(&l), self.render(&rr)));
                    break;
                }
            }
            out.push(CheckResult::from_witness(
                &format!("hopf.{label}_respects_relations"),
                "antipode is an anti-algebra map",
                bad,
            ));
        }

        let mut bad = None;
        for g in 0..self.num_gens() {
            let x = AlgElement::word(Word::letter(g));
            let back = self.anti_apply(&h.antipode, self.anti_apply(&h.antipode_inv, x.terms()).terms());
            let fwd = self.anti_apply(&h.antipode_inv, self.anti_apply(&h.antipode, x.terms()).terms());
            if back != x || fwd != x {
                bad = Some(format!("generator {}", names[g]));
                break;
            }
        }
        out.push(CheckResult::from_witness("hopf.antipode_inverse", "S∘S⁻¹ = S⁻¹∘S = id on generators", bad));

        let mut bad = None;
        for g in 0..self.num_gens() {
            let d = &h.coproduct[g];
            let mut left = AlgElement::zero();
            let mut right = AlgElement::zero();
            let mut eps_l = AlgElement::zero();
            let mut eps_r = AlgElement::zero();
            for ((a, b), c) in d.terms() {
                let sa = self.anti_apply(&h.antipode, [(a, &ScalarRF::one())]);
                let sb = self.anti_apply(&h.antipode, [(b, &ScalarRF::one())]);
                left.add_scaled(&self.mul(&sa, &AlgElement::word(b.clone())), c);
                right.add_scaled(&self.mul(&AlgElement::word(a.clone()), &sb), c);
                let ea = self.counit_raw(h, [(a, &ScalarRF::one())]);
                let eb = self.counit_raw(h, [(b, &ScalarRF::one())]);
                eps_l.add_term(b.clone(), c * &ea);
                eps_r.add_term(a.clone(), c * &eb);
            }
            let unit = AlgElement::scalar(h.counit[g].clone());
            let x = AlgElement::word(Word::letter(g));
            if left != unit || right != unit {
                bad = Some(format!("antipode axiom at {}: {} / {}", names[g], self.render(&left), self.render(&right)));
                break;
            }
            if eps_l != x || eps_r != x {
                bad = Some(format!("counit axiom at {}", names[g]));
                break;
            }
        }
        out.push(CheckResult::from_witness(
            "hopf.axioms_on_generators",
            "m(S⊗id)Δ = m(id⊗S)Δ = ε·1 and (ε⊗id)Δ = (id⊗ε)Δ = id",
            bad,
        ));
        out
    }
}
