//! Seeded random elements for property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ncalg::{AlgElement, Word};
use crate::scalars::ScalarRF;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small nonzero coefficient: ±k·q^e with 1 ≤ k ≤ 3, |e| ≤ 1.
pub fn coefficient<R: Rng>(rng: &mut R) -> ScalarRF {
    let k = rng.gen_range(1..=3i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
    &ScalarRF::from_int(k) * &ScalarRF::q_pow(rng.gen_range(-1..=1))
}

/// Up to `max_terms` random terms drawn from `words`; may be zero if `words` is empty.
pub fn element<R: Rng>(rng: &mut R, words: &[Word], max_terms: usize) -> AlgElement {
    let mut a = AlgElement::zero();
    if words.is_empty() {
        return a;
    }
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let w = &words[rng.gen_range(0..words.len())];
        a.add_term(w.clone(), coefficient(rng));
    }
    a
}
