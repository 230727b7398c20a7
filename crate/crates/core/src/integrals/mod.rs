//! Truncated exact linear algebra for the complex of integral forms:
//! images and cokernels of ∇, the Haar table, ∇-integral classes and ladder
//! diagrams between the de Rham and integral complexes.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::dga::FormElement;
use crate::exec::par_map;
use crate::homconn::{hom_apply, hom_right_act, HomConnection, HomError, HomForm};
use crate::linalg::{Echelon, SparseVec};
use crate::ncalg::{AlgElement, Presentation, Word};
use crate::scalars::ScalarRF;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntegralError {
    #[error("truncation not preserved: {0}")]
    FiltrationViolated(String),
    #[error("no preimage within length bound {bound} for {element}")]
    NoPreimageUpToBound { bound: usize, element: String },
    #[error("generator {0} missing from the presentation")]
    MissingGenerator(String),
    #[error("ladder needs {expected} vertical maps, got {found}")]
    LadderShape { expected: usize, found: usize },
    #[error(transparent)]
    Hom(#[from] HomError),
}

/// Blocks that ∇ never mixes: ℤ-degree when graded, letter content when the
/// relations preserve it, otherwise a single block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockKey {
    Degree(i64),
    Content(Vec<usize>),
    All,
}

impl std::fmt::Display for BlockKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BlockKey::Degree(d) => write!(f, "degree {d}"),
            BlockKey::Content(c) => write!(f, "content {c:?}"),
            BlockKey::All => write!(f, "all"),
        }
    }
}

pub fn block_key(pres: &Presentation, w: &Word) -> BlockKey {
    if let Some(d) = pres.word_degree(w) {
        BlockKey::Degree(d)
    } else if pres.content_homogeneous() {
        BlockKey::Content((0..pres.num_gens()).map(|g| w.count(g)).collect())
    } else {
        BlockKey::All
    }
}

/// A column of the truncated ∇ matrix: ∇(ξ_i·w).
#[derive(Clone, Debug)]
pub struct Column {
    pub form: usize,
    pub word: Word,
    pub image: AlgElement,
}

impl Column {
    pub fn source(&self, conn: &HomConnection) -> HomForm {
        hom_right_act(conn.calc(), &HomForm::dual(Word::letter(self.form)), &AlgElement::word(self.word.clone()))
    }
}

/// How many letters ∂ can remove from a word (0 when ∂ maps generators to
/// combinations of generators).
pub fn length_drop(conn: &HomConnection) -> usize {
    let tmd = conn.calc().tmd();
    let mut drop = 0;
    for g in 0..tmd.pres().num_gens() {
        for x in tmd.partial_on_generator(g) {
            for (w, _) in x.terms() {
                drop = drop.max(1usize.saturating_sub(w.len()));
            }
        }
    }
    drop
}

/// All columns ∇(ξ_i·w) with |w| ≤ L + drop; images must stay within length L.
pub fn nabla_columns(conn: &HomConnection, max_len: usize) -> Result<Vec<Column>, IntegralError> {
    let calc = conn.calc();
    let words = calc.pres().normal_words(max_len + length_drop(conn));
    let sources: Vec<(usize, Word)> = (0..calc.n()).flat_map(|i| words.iter().map(move |w| (i, w.clone()))).collect();
    let images = par_map(&sources, |(i, w)| {
        let f = hom_right_act(calc, &HomForm::dual(Word::letter(*i)), &AlgElement::word(w.clone()));
        conn.nabla(&f)
    });
    let mut cols = Vec::with_capacity(sources.len());
    for ((form, word), image) in sources.into_iter().zip(images) {
        let image = image?;
        if image.max_len() > max_len {
            return Err(IntegralError::FiltrationViolated(format!(
                "∇(ξ_{}·{}) = {}",
                calc.form_names()[form],
                calc.pres().render_word(&word),
                calc.pres().render(&image)
            )));
        }
        cols.push(Column { form, word, image });
    }
    Ok(cols)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockRank {
    pub key: BlockKey,
    pub rows: usize,
    pub rank: usize,
    /// Normal words whose classes span the truncated cokernel.
    pub cokernel: Vec<Word>,
}

impl BlockRank {
    pub fn cokernel_dim(&self) -> usize {
        self.rows - self.rank
    }
}

/// Rank of ∇ per block on the words of length ≤ L.
pub fn image_rank(conn: &HomConnection, max_len: usize, only: Option<&BlockKey>) -> Result<Vec<BlockRank>, IntegralError> {
    let pres = conn.calc().pres();
    let cols = nabla_columns(conn, max_len)?;
    let mut rows: BTreeMap<BlockKey, Vec<Word>> = BTreeMap::new();
    for w in pres.normal_words(max_len) {
        rows.entry(block_key(pres, &w)).or_default().push(w);
    }
    if let Some(k) = only {
        rows.retain(|key, _| key == k);
    }
    let keys: Vec<(BlockKey, Vec<Word>)> = rows.into_iter().collect();
    let out = par_map(&keys, |(key, words)| {
        let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(k, w)| (w, k)).collect();
        let mut ech: Echelon<ScalarRF> = Echelon::new();
        for c in &cols {
            let v: SparseVec<ScalarRF> = c.image.terms().filter_map(|(w, x)| index.get(w).map(|&r| (r, x.clone()))).collect();
            if !v.is_empty() {
                ech.push(v);
            }
        }
        let mut pivots = vec![false; words.len()];
        for &r in ech.pivot_rows() {
            pivots[r] = true;
        }
        let cokernel = words.iter().zip(&pivots).filter(|(_, p)| !**p).map(|(w, _)| w.clone()).collect();
        BlockRank { key: key.clone(), rows: words.len(), rank: ech.rank(), cokernel }
    });
    Ok(out)
}

/// (−1)^l (q − q^{-1}) / (q^{l+1} − q^{-l-1}).
pub fn haar_value(l: u32) -> ScalarRF {
    let q = ScalarRF::q_pow;
    let l = l as i32;
    let sign = if l % 2 == 0 { ScalarRF::one() } else { -ScalarRF::one() };
    let num = &sign * &(&q(1) - &q(-1));
    num.checked_div(&(&q(l + 1) - &q(-l - 1))).expect("nonzero")
}

/// The linear functional that takes the value `table(l)` on (βγ)^l and vanishes
/// on every other normal word.
pub fn lambda_with(pres: &Presentation, a: &AlgElement, table: &dyn Fn(u32) -> ScalarRF) -> Result<ScalarRF, IntegralError> {
    let b = pres.gen_index("beta").ok_or_else(|| IntegralError::MissingGenerator("beta".into()))?;
    let c = pres.gen_index("gamma").ok_or_else(|| IntegralError::MissingGenerator("gamma".into()))?;
    let mut out = ScalarRF::zero();
    for (w, x) in a.terms() {
        let l = w.len() / 2;
        if w.len() % 2 == 0 && w.count(b) == l && w.count(c) == l && w.letters().take(l).all(|g| g == b) {
            out = &out + &(x * &table(l as u32));
        }
    }
    Ok(out)
}

/// The normalised Haar functional on O_q(SL(2)).
pub fn sl2_lambda(pres: &Presentation, a: &AlgElement) -> Result<ScalarRF, IntegralError> {
    lambda_with(pres, a, &haar_value)
}

/// First column ∇(ξ_i·w), |w| ≤ L, on which the functional does not vanish.
pub fn check_lambda_annihilates(
    conn: &HomConnection,
    max_len: usize,
    table: &dyn Fn(u32) -> ScalarRF,
) -> Result<Option<String>, IntegralError> {
    let calc = conn.calc();
    let pres = calc.pres();
    for c in nabla_columns(conn, max_len)? {
        let v = lambda_with(pres, &c.image, table)?;
        if !v.is_zero() {
            return Ok(Some(format!(
                "λ(∇(ξ_{}·{})) = {}",
                calc.form_names()[c.form],
                pres.render_word(&c.word),
                v
            )));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralClass {
    /// a = ∇(preimage) + c·1.
    pub c: ScalarRF,
    pub preimage: HomForm,
}

/// Solves ∇(f) = a − c·1 inside the truncation. The constant column is only
/// offered in the block of 1, so c = 0 in every other block.
pub fn integral_class(conn: &HomConnection, a: &AlgElement, max_len: usize) -> Result<IntegralClass, IntegralError> {
    let calc = conn.calc();
    let pres = calc.pres();
    let cols = nabla_columns(conn, max_len)?;
    let no_preimage = || IntegralError::NoPreimageUpToBound { bound: max_len, element: pres.render(a) };
    let mut rows: HashMap<Word, usize> = HashMap::new();
    let mut row = |w: &Word| {
        let k = rows.len();
        *rows.entry(w.clone()).or_insert(k)
    };
    let mut ech: Echelon<ScalarRF> = Echelon::new();
    let mut used = Vec::new();
    for c in &cols {
        let v: SparseVec<ScalarRF> = c.image.terms().map(|(w, x)| (row(w), x.clone())).collect();
        if !v.is_empty() {
            ech.push(v);
            used.push(c);
        }
    }
    let one_col = used.len();
    ech.push([(row(&Word::empty()), ScalarRF::one())].into_iter().collect());
    let target: SparseVec<ScalarRF> = a.terms().map(|(w, x)| (row(w), x.clone())).collect();
    let sol = ech.solve(&target).ok_or_else(no_preimage)?;
    let mut c = ScalarRF::zero();
    let mut f = HomForm::zero(1);
    for (k, x) in sol {
        if k == one_col {
            c = x;
        } else {
            f.add_scaled(&used[k].source(conn), &x);
        }
    }
    let check = conn.nabla(&f)?.plus(&AlgElement::scalar(c.clone()));
    if &check != a {
        return Err(no_preimage());
    }
    Ok(IntegralClass { c, preimage: f })
}

/// Vertical maps of a ladder between (Ω, d) and the integral forms.
///
/// `verticals[k]` sends each basis k-form to a hom-form of degree top − k,
/// extended right-linearly; `theta` is the scalar multiple of a basis top form
/// used for A → Ω^top.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderDiagram {
    pub verticals: Vec<BTreeMap<Word, HomForm>>,
    pub theta: (Word, ScalarRF),
}

#[derive(Clone, Debug, Default)]
pub struct LadderReport {
    /// One entry per square: None when it commutes.
    pub squares: Vec<Option<String>>,
    /// One entry per vertical map (the last is Θ): None when bijective on the truncation.
    pub bijective: Vec<Option<String>>,
}

impl LadderReport {
    pub fn commutes(&self) -> bool {
        self.squares.iter().all(Option::is_none)
    }

    pub fn all_bijective(&self) -> bool {
        self.bijective.iter().all(Option::is_none)
    }

    pub fn first_failure(&self) -> Option<String> {
        self.squares.iter().chain(&self.bijective).flatten().next().cloned()
    }
}

impl LadderDiagram {
    pub fn apply(&self, conn: &HomConnection, k: usize, w: &FormElement) -> HomForm {
        let calc = conn.calc();
        let mut out = HomForm::zero(calc.top() - k);
        let rights = if k == 0 {
            [(Word::empty(), w.coeff(&Word::empty()))].into_iter().collect()
        } else {
            calc.to_right(w)
        };
        for (e, r) in rights {
            if let Some(v) = self.verticals[k].get(&e) {
                out.add_scaled(&hom_right_act(calc, v, &r), &ScalarRF::one());
            }
        }
        out
    }

    pub fn theta(&self, conn: &HomConnection, a: &AlgElement) -> FormElement {
        let (e, c) = &self.theta;
        conn.calc().right_mul(&FormElement::basis(e.clone(), AlgElement::scalar(c.clone())), a)
    }
}

fn nabla_hom(conn: &HomConnection, f: &HomForm) -> Result<HomForm, HomError> {
    if f.degree() == 1 {
        let mut out = HomForm::zero(0);
        out.set(Word::empty(), conn.nabla(f)?);
        Ok(out)
    } else {
        conn.nabla_n(f.degree() - 1, f)
    }
}

/// Checks V_{k+1}∘d = ∇∘V_k for k < top − 1 and d = Θ∘∇∘V_{top−1} on every
/// w·e with e a basis k-form and |w| ≤ L, plus bijectivity of each vertical
/// map (and Θ) on the truncation by rank.
pub fn check_ladder(conn: &HomConnection, diagram: &LadderDiagram, max_len: usize) -> Result<LadderReport, IntegralError> {
    let calc = conn.calc();
    let pres = calc.pres();
    let top = calc.top();
    if diagram.verticals.len() != top {
        return Err(IntegralError::LadderShape { expected: top, found: diagram.verticals.len() });
    }
    let words = pres.normal_words(max_len);
    let mut report = LadderReport::default();
    for k in 0..top {
        let inputs: Vec<(Word, Word)> = calc.basis(k).iter().flat_map(|e| words.iter().map(move |w| (e.clone(), w.clone()))).collect();
        let res = par_map(&inputs, |(e, w)| -> Result<Option<String>, IntegralError> {
            let x = FormElement::basis(e.clone(), AlgElement::word(w.clone()));
            let dx = calc.d(&x).map_err(HomError::from)?;
            let vx = diagram.apply(conn, k, &x);
            let (lhs, rhs) = if k + 1 < top {
                let l = diagram.apply(conn, k + 1, &dx);
                let r = nabla_hom(conn, &vx)?;
                (l.render(calc), r.render(calc))
            } else {
                let r = diagram.theta(conn, &conn.nabla(&vx)?);
                (calc.render(&dx), calc.render(&r))
            };
            Ok((lhs != rhs).then(|| format!("square {k} on {}·{}: {lhs} vs {rhs}", pres.render_word(w), calc.render_form_word(e))))
        });
        let mut first = None;
        for r in res {
            if let Some(w) = r? {
                first.get_or_insert(w);
            }
        }
        report.squares.push(first);
    }
    for k in 0..top {
        report.bijective.push(vertical_rank_defect(conn, diagram, k, &words));
    }
    report.bijective.push(theta_rank_defect(conn, diagram, &words));
    Ok(report)
}

fn coordinates<'a>(values: impl Iterator<Item = (&'a Word, &'a AlgElement)>, index: &mut HashMap<(Word, Word), usize>) -> SparseVec<ScalarRF> {
    let mut v = SparseVec::new();
    for (e, a) in values {
        for (w, x) in a.terms() {
            let k = index.len();
            let r = *index.entry((e.clone(), w.clone())).or_insert(k);
            v.insert(r, x.clone());
        }
    }
    v
}

fn vertical_rank_defect(conn: &HomConnection, diagram: &LadderDiagram, k: usize, words: &[Word]) -> Option<String> {
    let calc = conn.calc();
    let mut index = HashMap::new();
    let mut ech: Echelon<ScalarRF> = Echelon::new();
    let mut n_in = 0;
    for e in calc.basis(k) {
        for w in words {
            let x = calc.right_mul(&FormElement::basis(e.clone(), AlgElement::one()), &AlgElement::word(w.clone()));
            let v = coordinates(diagram.apply(conn, k, &x).values(), &mut index);
            ech.push(v);
            n_in += 1;
        }
    }
    let n_out = calc.basis(calc.top() - k).len() * words.len();
    (ech.rank() != n_in || ech.rank() != n_out || index.len() > n_out)
        .then(|| format!("vertical {k}: rank {} on {n_in} inputs, {n_out} outputs", ech.rank()))
}

fn theta_rank_defect(conn: &HomConnection, diagram: &LadderDiagram, words: &[Word]) -> Option<String> {
    let mut index = HashMap::new();
    let mut ech: Echelon<ScalarRF> = Echelon::new();
    for w in words {
        let x = diagram.theta(conn, &AlgElement::word(w.clone()));
        ech.push(coordinates(x.coords(), &mut index));
    }
    (ech.rank() != words.len() || index.len() > words.len()).then(|| format!("Θ: rank {} on {} inputs", ech.rank(), words.len()))
}

/// Identity used with a scalar-valued hom-form: f(e) for a basis word.
pub fn evaluate_on_basis(conn: &HomConnection, f: &HomForm, e: &Word) -> Result<AlgElement, IntegralError> {
    Ok(hom_apply(conn.calc(), f, &FormElement::basis(e.clone(), AlgElement::one()))?)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::multider::fixtures::{p, q};

    fn fw(l: &[usize]) -> Word {
        Word::from_letters(l.iter().copied())
    }

    fn dual_scaled(e: &[usize], c: ScalarRF) -> HomForm {
        HomForm::dual(fw(e)).scale(&c)
    }

    pub fn qplane_ladder() -> LadderDiagram {
        let one = ScalarRF::one();
        let v0 = [(Word::empty(), dual_scaled(&[0, 1], one.clone()))].into_iter().collect();
        // Φ(dx a + dy b) = p q^{-1} ξ_x b − ξ_y a
        let v1 = [(fw(&[0]), dual_scaled(&[1], -one.clone())), (fw(&[1]), dual_scaled(&[0], &p(1) * &q(-1)))].into_iter().collect();
        LadderDiagram { verticals: vec![v0, v1], theta: (fw(&[0, 1]), one) }
    }

    pub fn sl2_ladder() -> LadderDiagram {
        let (m, z, pl) = (0, 1, 2);
        let one = ScalarRF::one();
        let v0 = [(Word::empty(), dual_scaled(&[m, z, pl], one.clone()))].into_iter().collect();
        // Φ: ω_− ↦ φ_−, ω_0 ↦ −q⁴φ_0, ω_+ ↦ q⁶φ_+
        let v1 = [
            (fw(&[m]), dual_scaled(&[z, pl], one.clone())),
            (fw(&[z]), dual_scaled(&[m, pl], -q(4))),
            (fw(&[pl]), dual_scaled(&[m, z], q(6))),
        ]
        .into_iter()
        .collect();
        // Ψ: ω_−ω_0 ↦ ξ_+, ω_−ω_+ ↦ −q⁴ξ_0, ω_0ω_+ ↦ q⁶ξ_−
        let v2 = [
            (fw(&[m, z]), dual_scaled(&[pl], one.clone())),
            (fw(&[m, pl]), dual_scaled(&[z], -q(4))),
            (fw(&[z, pl]), dual_scaled(&[m], q(6))),
        ]
        .into_iter()
        .collect();
        LadderDiagram { verticals: vec![v0, v1, v2], theta: (fw(&[m, z, pl]), one) }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::fixtures::*;
    use super::*;
    use crate::dga::fixtures::{qplane_calculus, sl2_calculus};
    use crate::multider::fixtures::q;

    fn sl2() -> HomConnection {
        HomConnection::new(Arc::new(sl2_calculus()))
    }

    fn qp() -> HomConnection {
        HomConnection::new(Arc::new(qplane_calculus()))
    }

    fn bg(l: usize) -> AlgElement {
        let pres = crate::ncalg::presets::sl2();
        let bg = pres.mul(&pres.gen("beta"), &pres.gen("gamma"));
        pres.pow(&bg, l as u32)
    }

    #[test]
    fn haar_table() {
        assert_eq!(haar_value(0), ScalarRF::one());
        let want = (-ScalarRF::one()).checked_div(&(&q(1) + &q(-1))).unwrap();
        assert_eq!(haar_value(1), want);
        let h = sl2();
        let pres = h.calc().pres();
        assert_eq!(sl2_lambda(pres, &bg(1)).unwrap(), want);
        assert_eq!(sl2_lambda(pres, &AlgElement::one()).unwrap(), ScalarRF::one());
        let a = pres.mul_all([&pres.gen("alpha"), &pres.gen("beta"), &pres.gen("beta"), &pres.gen("gamma")]);
        assert!(sl2_lambda(pres, &a).unwrap().is_zero());
    }

    #[test]
    fn qplane_cokernel_vanishes() {
        let blocks = image_rank(&qp(), 4, None).unwrap();
        assert!(blocks.iter().all(|b| b.cokernel_dim() == 0), "{blocks:?}");
        assert_eq!(blocks.len(), 15);
        assert_eq!(length_drop(&qp()), 1);
    }

    #[test]
    fn zero_derivation_has_rank_zero() {
        let h = qp();
        let calc = h.calc();
        let tmd = calc.tmd().with_partials(vec![vec![AlgElement::zero(); 2]; 2]);
        let zero = HomConnection::new(Arc::new(calc.with_tmd(Arc::new(tmd))));
        let blocks = image_rank(&zero, 3, None).unwrap();
        assert!(blocks.iter().all(|b| b.rank == 0));
    }

    #[test]
    fn sl2_degree_zero_block() {
        let h = sl2();
        assert_eq!(length_drop(&h), 0);
        let blocks = image_rank(&h, 4, Some(&BlockKey::Degree(0))).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].cokernel_dim(), 1, "{:?}", blocks[0]);
        assert_eq!(check_lambda_annihilates(&h, 4, &haar_value).unwrap(), None);
        let flipped = |l: u32| if l == 1 { -haar_value(1) } else { haar_value(l) };
        assert!(check_lambda_annihilates(&h, 4, &flipped).unwrap().is_some());
    }

    #[test]
    fn integral_classes() {
        let h = sl2();
        let one = integral_class(&h, &AlgElement::one(), 2).unwrap();
        assert_eq!(one.c, ScalarRF::one());
        assert!(one.preimage.is_zero());
        let c = integral_class(&h, &bg(1), 4).unwrap();
        assert_eq!(c.c, haar_value(1));
        let a = h.calc().pres().gen("alpha");
        let c = integral_class(&h, &a, 3).unwrap();
        assert!(c.c.is_zero());
        assert_eq!(h.nabla(&c.preimage).unwrap(), a);
    }

    #[test]
    fn ladders_commute() {
        let r = check_ladder(&qp(), &qplane_ladder(), 3).unwrap();
        assert!(r.commutes() && r.all_bijective(), "{r:?}");
        let r = check_ladder(&sl2(), &sl2_ladder(), 2).unwrap();
        assert!(r.commutes() && r.all_bijective(), "{r:?}");
    }

    #[test]
    fn corrupted_ladder_fails() {
        let mut l = sl2_ladder();
        let e = Word::from_letters([0, 2]);
        let v = l.verticals[2].get(&e).unwrap().scale(&q(1));
        l.verticals[2].insert(e, v);
        let r = check_ladder(&sl2(), &l, 1).unwrap();
        assert!(!r.commutes());
    }
}
