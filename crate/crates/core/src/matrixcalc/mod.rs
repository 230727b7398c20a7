//! The derivation calculus on M_n: one-forms dual to the inner derivations
//! 𝔛_l = i[E_l, ·] for a traceless Hermitian basis E_l, the Koszul
//! differential, the hom-connection ∇(Σ 𝔛_l ⊗ a_l) = Σ 𝔛_l(a_l), and the
//! trace integral.
//!
//! k-forms are stored by their values on increasing index tuples; the basis
//! one-forms are central, so Ω^k is free on ω_I with coefficients on the right.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exec::par_map;
use crate::linalg::{rank, solve, SparseVec};
use crate::scalars::GaussRat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("derivations are not closed under the bracket: [X_{0}, X_{1}]")]
    NotClosed(usize, usize),
    #[error("degree {0} exceeds the top degree {1}")]
    DegreeOverflow(usize, usize),
    #[error("matrix size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("basis element {0} is not traceless")]
    NotTraceless(usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatElement {
    n: usize,
    entries: Vec<GaussRat>,
}

impl MatElement {
    pub fn zero(n: usize) -> Self {
        MatElement { n, entries: vec![GaussRat::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = GaussRat::one();
        }
        m
    }

    /// The matrix unit e_{ab}.
    pub fn unit(n: usize, a: usize, b: usize) -> Self {
        let mut m = Self::zero(n);
        m.entries[a * n + b] = GaussRat::one();
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussRat>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "square matrix expected");
        MatElement { n, entries: rows.into_iter().flatten().collect() }
    }

    pub fn diag(d: &[GaussRat]) -> Self {
        let mut m = Self::zero(d.len());
        for (i, x) in d.iter().enumerate() {
            m.entries[i * d.len() + i] = x.clone();
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> &GaussRat {
        &self.entries[a * self.n + b]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GaussRat::is_zero)
    }

    pub fn plus(&self, o: &Self) -> Self {
        MatElement { n: self.n, entries: self.entries.iter().zip(&o.entries).map(|(x, y)| x + y).collect() }
    }

    pub fn minus(&self, o: &Self) -> Self {
        MatElement { n: self.n, entries: self.entries.iter().zip(&o.entries).map(|(x, y)| x - y).collect() }
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        MatElement { n: self.n, entries: self.entries.iter().map(|x| c * x).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] = &out.entries[i * n + j] + &(x * o.get(k, j));
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).minus(&o.mul(self))
    }

    pub fn trace(&self) -> GaussRat {
        (0..self.n).fold(GaussRat::zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Coordinates in the matrix-unit basis.
    pub fn coords(&self) -> SparseVec<GaussRat> {
        self.entries.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
    }

    pub fn from_coords(n: usize, v: &SparseVec<GaussRat>) -> Self {
        let mut m = Self::zero(n);
        for (i, x) in v {
            m.entries[*i] = x.clone();
        }
        m
    }
}

impl fmt::Display for MatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect::<Vec<_>>().join(", ")).collect();
        write!(f, "[[{}]]", rows.join("], ["))
    }
}

/// Pauli matrices σ_x, σ_y, σ_z.
pub fn pauli() -> Vec<MatElement> {
    let g = GaussRat::from_ints;
    vec![
        MatElement::from_rows(vec![vec![g(0, 0), g(1, 0)], vec![g(1, 0), g(0, 0)]]),
        MatElement::from_rows(vec![vec![g(0, 0), g(0, -1)], vec![g(0, 1), g(0, 0)]]),
        MatElement::from_rows(vec![vec![g(1, 0), g(0, 0)], vec![g(0, 0), g(-1, 0)]]),
    ]
}

/// Structure constants c[i][j][l] with [𝔛_i, 𝔛_j] = Σ_l c_{ijl} 𝔛_l.
pub type Structure = Vec<Vec<Vec<GaussRat>>>;

/// Traceless basis E_l with its derivations.
#[derive(Clone, Debug)]
pub struct DerBasis {
    n: usize,
    e: Vec<MatElement>,
    c: Structure,
}

/// Signed position of a sorted index set after inserting `l`: None when l is already present.
fn insert_sorted(l: usize, rest: &[usize]) -> Option<(i32, Vec<usize>)> {
    match rest.binary_search(&l) {
        Ok(_) => None,
        Err(pos) => {
            let mut v = rest.to_vec();
            v.insert(pos, l);
            Some((if pos % 2 == 0 { 1 } else { -1 }, v))
        }
    }
}

/// Sign of the shuffle sorting I ++ J, or None if they meet.
pub fn merge_sign(i: &[usize], j: &[usize]) -> Option<(i32, Vec<usize>)> {
    let mut sign = 1;
    for x in i {
        if j.contains(x) {
            return None;
        }
        if j.iter().filter(|y| *y < x).count() % 2 == 1 {
            sign = -sign;
        }
    }
    let mut v: Vec<usize> = i.iter().chain(j).copied().collect();
    v.sort_unstable();
    Some((sign, v))
}

fn sign_scalar(s: i32) -> GaussRat {
    GaussRat::from_ints(s as i64, 0)
}

/// Increasing k-subsets of 0..n.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl DerBasis {
    pub fn new(e: Vec<MatElement>) -> Result<Self, MatrixError> {
        let n = e.first().map_or(0, MatElement::n);
        for (l, m) in e.iter().enumerate() {
            if m.n() != n {
                return Err(MatrixError::SizeMismatch(n, m.n()));
            }
            if !m.trace().is_zero() {
                return Err(MatrixError::NotTraceless(l));
            }
        }
        let mut b = DerBasis { n, e, c: Vec::new() };
        b.c = b.compute_structure()?;
        Ok(b)
    }

    pub fn pauli() -> Self {
        Self::new(pauli()).expect("Pauli matrices close")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// N, the number of derivations.
    pub fn dim(&self) -> usize {
        self.e.len()
    }

    pub fn element(&self, l: usize) -> &MatElement {
        &self.e[l]
    }

    pub fn structure(&self) -> &Structure {
        &self.c
    }

    /// 𝔛_l(a) = i[E_l, a].
    pub fn derive(&self, l: usize, a: &MatElement) -> MatElement {
        self.e[l].commutator(a).scale(&GaussRat::i())
    }

    /// A linear map on M_n as the list of images of matrix units.
    fn as_vector(&self, f: impl Fn(&MatElement) -> MatElement) -> SparseVec<GaussRat> {
        let n = self.n;
        let mut v = SparseVec::new();
        for u in 0..n * n {
            let img = f(&MatElement::unit(n, u / n, u % n));
            for (k, x) in img.coords() {
                v.insert(u * n * n + k, x);
            }
        }
        v
    }

    fn compute_structure(&self) -> Result<Structure, MatrixError> {
        let big_n = self.e.len();
        let cols: Vec<SparseVec<GaussRat>> = (0..big_n).map(|l| self.as_vector(|a| self.derive(l, a))).collect();
        let mut c = vec![vec![vec![GaussRat::zero(); big_n]; big_n]; big_n];
        for i in 0..big_n {
            for j in 0..big_n {
                let br = self.as_vector(|a| self.derive(i, &self.derive(j, a)).minus(&self.derive(j, &self.derive(i, a))));
                let x = solve(cols.iter().cloned(), &br).ok_or(MatrixError::NotClosed(i + 1, j + 1))?;
                for (l, v) in x {
                    c[i][j][l] = v;
                }
            }
        }
        Ok(c)
    }

    /// First triple (i, j, l) where c fails total antisymmetry.
    pub fn antisymmetry_witness(&self) -> Option<(usize, usize, usize)> {
        let big_n = self.dim();
        let c = &self.c;
        for i in 0..big_n {
            for j in 0..big_n {
                for l in 0..big_n {
                    let x = &c[i][j][l];
                    if *x != -&c[j][i][l] || *x != -&c[i][l][j] || *x != c[j][l][i] {
                        return Some((i + 1, j + 1, l + 1));
                    }
                }
            }
        }
        None
    }
}

/// A k-form or a hom-form on k-forms: values on increasing index tuples.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MForm {
    k: usize,
    n: usize,
    values: BTreeMap<Vec<usize>, MatElement>,
}

impl MForm {
    pub fn zero(n: usize, k: usize) -> Self {
        MForm { k, n, values: BTreeMap::new() }
    }

    /// ω_I a, or for hom-forms the dual of ω_I times a.
    pub fn basis(idx: Vec<usize>, a: MatElement) -> Self {
        let mut f = MForm::zero(a.n(), idx.len());
        f.add(&idx, &a);
        f
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn value(&self, idx: &[usize]) -> MatElement {
        self.values.get(idx).cloned().unwrap_or_else(|| MatElement::zero(self.n))
    }

    pub fn values(&self) -> impl Iterator<Item = (&Vec<usize>, &MatElement)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add(&mut self, idx: &[usize], a: &MatElement) {
        let v = self.value(idx).plus(a);
        if v.is_zero() {
            self.values.remove(idx);
        } else {
            self.values.insert(idx.to_vec(), v);
        }
    }

    pub fn add_scaled(&mut self, idx: &[usize], a: &MatElement, c: &GaussRat) {
        self.add(idx, &a.scale(c));
    }

    pub fn right_mul(&self, a: &MatElement) -> Self {
        let mut out = MForm::zero(self.n, self.k);
        for (i, v) in &self.values {
            out.add(i, &v.mul(a));
        }
        out
    }

    pub fn left_mul(&self, a: &MatElement) -> Self {
        let mut out = MForm::zero(self.n, self.k);
        for (i, v) in &self.values {
            out.add(i, &a.mul(v));
        }
        out
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (i, v) in &o.values {
            out.add(i, v);
        }
        out
    }

    /// Coordinates against (index tuple, matrix unit), ordered by `basis`.
    pub fn coords(&self, basis: &[Vec<usize>]) -> SparseVec<GaussRat> {
        let nn = self.n * self.n;
        let mut v = SparseVec::new();
        for (pos, idx) in basis.iter().enumerate() {
            for (k, x) in self.value(idx).coords() {
                v.insert(pos * nn + k, x);
            }
        }
        v
    }
}

impl fmt::Display for MForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|(i, v)| {
                let w: Vec<String> = i.iter().map(|l| format!("w{}", l + 1)).collect();
                format!("{} {}", if w.is_empty() { "1".into() } else { w.join(".") }, v)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The calculus on M_n with its hom-connection. `bracket_sign` and `phi_sign`
/// exist for corrupted fixtures; the true calculus has both equal to +1.
#[derive(Clone, Debug)]
pub struct MatrixCalculus {
    basis: DerBasis,
    bracket_sign: GaussRat,
    phi_flip: bool,
}

impl MatrixCalculus {
    pub fn new(basis: DerBasis) -> Self {
        MatrixCalculus { basis, bracket_sign: GaussRat::one(), phi_flip: false }
    }

    pub fn pauli() -> Self {
        Self::new(DerBasis::pauli())
    }

    pub fn with_bracket_sign(mut self, s: GaussRat) -> Self {
        self.bracket_sign = s;
        self
    }

    /// Uses (−1)^k in place of (−1)^{(N−1)k} in Φ_k.
    pub fn with_flipped_phi(mut self) -> Self {
        self.phi_flip = true;
        self
    }

    pub fn basis(&self) -> &DerBasis {
        &self.basis
    }

    pub fn n(&self) -> usize {
        self.basis.n
    }

    pub fn top(&self) -> usize {
        self.basis.dim()
    }

    /// All (index tuple, matrix unit) basis elements of degree k.
    pub fn full_basis(&self, k: usize) -> Vec<MForm> {
        let n = self.n();
        subsets(self.top(), k).into_iter().flat_map(|i| (0..n * n).map(move |u| MForm::basis(i.clone(), MatElement::unit(n, u / n, u % n)))).collect()
    }

    /// Wedge with the 1/(p!q!) convention; on increasing tuples this is the shuffle sign.
    pub fn wedge(&self, x: &MForm, y: &MForm) -> MForm {
        let mut out = MForm::zero(self.n(), x.k + y.k);
        for (i, a) in &x.values {
            for (j, b) in &y.values {
                if let Some((s, idx)) = merge_sign(i, j) {
                    out.add_scaled(&idx, &a.mul(b), &sign_scalar(s));
                }
            }
        }
        out
    }

    /// Koszul differential.
    pub fn d(&self, w: &MForm) -> Result<MForm, MatrixError> {
        let big_n = self.top();
        if w.k >= big_n {
            return Err(MatrixError::DegreeOverflow(w.k + 1, big_n));
        }
        let c = self.basis.structure();
        let mut out = MForm::zero(self.n(), w.k + 1);
        for j in subsets(big_n, w.k + 1) {
            let mut acc = MatElement::zero(self.n());
            for a in 0..j.len() {
                let mut rest = j.clone();
                let l = rest.remove(a);
                let s = if a % 2 == 0 { GaussRat::one() } else { -&GaussRat::one() };
                acc = acc.plus(&self.basis.derive(l, &w.value(&rest)).scale(&s));
            }
            for a in 0..j.len() {
                for b in a + 1..j.len() {
                    let rest: Vec<usize> = j.iter().enumerate().filter(|(t, _)| *t != a && *t != b).map(|(_, x)| *x).collect();
                    let s = if (a + b) % 2 == 0 { 1 } else { -1 };
                    for (l, cl) in c[j[a]][j[b]].iter().enumerate() {
                        if cl.is_zero() {
                            continue;
                        }
                        if let Some((t, idx)) = insert_sorted(l, &rest) {
                            let k = &(cl * &sign_scalar(s * t)) * &self.bracket_sign;
                            acc = acc.plus(&w.value(&idx).scale(&k));
                        }
                    }
                }
            }
            if !acc.is_zero() {
                out.values.insert(j, acc);
            }
        }
        Ok(out)
    }

    /// d a as a one-form: (da)(𝔛_l) = 𝔛_l(a).
    pub fn d_function(&self, a: &MatElement) -> MForm {
        self.d(&MForm::basis(vec![], a.clone())).expect("degree 0 is below top")
    }

    /// f(ω) for a hom-form f and a form ω of the same degree: Σ_I f(ω_I) ω(I).
    pub fn apply(&self, f: &MForm, w: &MForm) -> MatElement {
        assert_eq!(f.k, w.k, "degree mismatch");
        w.values.iter().fold(MatElement::zero(self.n()), |acc, (i, a)| acc.plus(&f.value(i).mul(a)))
    }

    /// (fω)(ω') = f(ω ∧ ω') for ω of degree < deg f.
    pub fn hom_mul_form(&self, f: &MForm, w: &MForm) -> MForm {
        let k = f.k - w.k;
        let mut out = MForm::zero(self.n(), k);
        for j in subsets(self.top(), k) {
            let v = self.apply(f, &self.wedge(w, &MForm::basis(j.clone(), MatElement::identity(self.n()))));
            out.add(&j, &v);
        }
        out
    }

    /// ∇(Σ 𝔛_l ⊗ a_l) = Σ i[E_l, a_l], with a_l = f(ω_l).
    pub fn nabla(&self, f: &MForm) -> MatElement {
        assert_eq!(f.k, 1, "∇ takes hom-forms on one-forms");
        (0..self.top()).fold(MatElement::zero(self.n()), |acc, l| acc.plus(&self.basis.derive(l, &f.value(&[l]))))
    }

    /// ∇ on explicit (l, a_l) pairs.
    pub fn nabla_pairs(&self, pairs: &[(usize, MatElement)]) -> MatElement {
        pairs.iter().fold(MatElement::zero(self.n()), |acc, (l, a)| acc.plus(&self.basis.derive(*l, a)))
    }

    /// ∇_m(f)(ω) = ∇(fω) + (−1)^{m+1} f(dω) for f on (m+1)-forms.
    pub fn nabla_n(&self, f: &MForm) -> Result<MForm, MatrixError> {
        let m = f.k.checked_sub(1).ok_or(MatrixError::DegreeOverflow(0, self.top()))?;
        if m == 0 {
            return Ok(MForm::basis(vec![], self.nabla(f)));
        }
        let sign = if m % 2 == 0 { -&GaussRat::one() } else { GaussRat::one() };
        let mut out = MForm::zero(self.n(), m);
        for i in subsets(self.top(), m) {
            let w = MForm::basis(i.clone(), MatElement::identity(self.n()));
            let v = self.nabla(&self.hom_mul_form(f, &w)).plus(&self.apply(f, &self.d(&w)?).scale(&sign));
            out.add(&i, &v);
        }
        Ok(out)
    }

    /// F(f) = ∇(∇_1(f)) for f on two-forms.
    pub fn curvature(&self, f: &MForm) -> Result<MatElement, MatrixError> {
        Ok(self.nabla(&self.nabla_n(f)?))
    }

    /// −(1/2)Σ f(𝔛_l(c_{ijl}) ω_iω_j); zero because the c_{ijl} are scalars.
    pub fn curvature_formula(&self, f: &MForm) -> MatElement {
        let n = self.n();
        let big_n = self.top();
        let mut w = MForm::zero(n, 2);
        for i in 0..big_n {
            for j in 0..big_n {
                for l in 0..big_n {
                    let c = MatElement::identity(n).scale(&self.basis.c[i][j][l]);
                    let dc = self.basis.derive(l, &c);
                    if let Some((s, idx)) = merge_sign(&[i], &[j]) {
                        w.add_scaled(&idx, &dc, &(&sign_scalar(s) * &GaussRat::ratio(-1, 2)));
                    }
                }
            }
        }
        self.apply(f, &w)
    }

    /// Tr(a)/n.
    pub fn trace_integral(&self, a: &MatElement) -> GaussRat {
        let n = GaussRat::from_ints(self.n() as i64, 0);
        &a.trace() * &n.inv().expect("n > 0")
    }

    /// Rank of ∇ on all (l, matrix unit) inputs, and the dimension of its cokernel.
    pub fn nabla_rank(&self) -> (usize, usize) {
        let cols: Vec<SparseVec<GaussRat>> = self.full_basis(1).iter().map(|f| self.nabla(f).coords()).collect();
        let r = rank(cols);
        (r, self.n() * self.n() - r)
    }

    /// Φ_k(ω)(ω') = ±Φ_N(ωω'), Φ_N(ω_1⋯ω_N a) = a.
    pub fn phi(&self, k: usize, w: &MForm) -> MForm {
        let big_n = self.top();
        let exp = if self.phi_flip { k } else { (big_n - 1) * k };
        let sign = if exp % 2 == 0 { 1 } else { -1 };
        let n = self.n();
        let mut out = MForm::zero(n, big_n - k);
        for (i, a) in &w.values {
            for j in subsets(big_n, big_n - k) {
                if let Some((s, _)) = merge_sign(i, &j) {
                    out.add_scaled(&j, a, &sign_scalar(s * sign));
                }
            }
        }
        out
    }

    /// Every square Φ_{k+1}∘d = ∇_{N−k−1}∘Φ_k on full bases, and bijectivity of each Φ_k.
    pub fn phi_ladder(&self) -> Result<LadderOutcome, MatrixError> {
        let big_n = self.top();
        let mut squares = Vec::new();
        for k in 0..big_n {
            let basis = self.full_basis(k);
            let bad = par_map(&basis, |w| -> Result<Option<String>, MatrixError> {
                let lhs = self.phi(k + 1, &self.d(w)?);
                let rhs = self.nabla_n(&self.phi(k, w))?;
                Ok((lhs != rhs).then(|| format!("k = {k}: Φ(d({w})) = {lhs}, ∇(Φ({w})) = {rhs}")))
            });
            let mut first = None;
            for b in bad {
                if let Some(x) = b? {
                    first.get_or_insert(x);
                }
            }
            squares.push(first);
        }
        let mut bijective = Vec::new();
        for k in 0..=big_n {
            let src = self.full_basis(k);
            let tgt = subsets(big_n, big_n - k);
            let r = rank(src.iter().map(|w| self.phi(k, w).coords(&tgt)));
            bijective.push(r == src.len() && r == tgt.len() * self.n() * self.n());
        }
        Ok(LadderOutcome { squares, bijective })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderOutcome {
    /// First failing element per square k → k+1.
    pub squares: Vec<Option<String>>,
    pub bijective: Vec<bool>,
}

impl LadderOutcome {
    pub fn commutes(&self) -> bool {
        self.squares.iter().all(Option::is_none)
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.squares.iter().flatten().next().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn calc() -> MatrixCalculus {
        MatrixCalculus::pauli()
    }

    fn eps(i: usize, j: usize, l: usize) -> i64 {
        // Levi-Civita on 0..3
        match (i, j, l) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
            (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
            _ => 0,
        }
    }

    #[test]
    fn derivations() {
        let b = DerBasis::pauli();
        let e = pauli();
        assert!(b.derive(0, &MatElement::identity(2)).is_zero());
        assert_eq!(b.derive(2, &e[0]), e[1].scale(&GaussRat::from_ints(-2, 0)));
        for l in 0..3 {
            assert!(b.derive(l, &e[l]).is_zero());
            // Leibniz
            let (x, y) = (&e[(l + 1) % 3], &MatElement::unit(2, 0, 1));
            let lhs = b.derive(l, &x.mul(y));
            assert_eq!(lhs, b.derive(l, x).mul(y).plus(&x.mul(&b.derive(l, y))));
        }
    }

    #[test]
    fn structure_constants() {
        let b = DerBasis::pauli();
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    assert_eq!(b.structure()[i][j][l], GaussRat::from_ints(-2 * eps(i, j, l), 0));
                }
            }
        }
        assert_eq!(b.antisymmetry_witness(), None);
        // rescaling one basis element keeps closure but breaks antisymmetry
        let mut e = pauli();
        e[2] = e[2].scale(&GaussRat::from_ints(2, 0));
        assert!(DerBasis::new(e).unwrap().antisymmetry_witness().is_some());
        let bad = MatElement::diag(&[GaussRat::one(), GaussRat::zero()]);
        assert_eq!(DerBasis::new(vec![bad]).unwrap_err(), MatrixError::NotTraceless(0));
    }

    #[test]
    fn koszul() {
        let m = calc();
        let e = pauli();
        let da = m.d_function(&e[0]);
        for l in 0..3 {
            assert_eq!(da.value(&[l]), e[l].commutator(&e[0]).scale(&GaussRat::i()));
        }
        assert!(m.d_function(&MatElement::identity(2)).is_zero());
        // dω_l = −(1/2)Σ c_{ijl} ω_iω_j
        for l in 0..3 {
            let dw = m.d(&MForm::basis(vec![l], MatElement::identity(2))).unwrap();
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let want = MatElement::identity(2).scale(&-&m.basis().structure()[i][j][l]);
                assert_eq!(dw.value(&[i, j]), want);
            }
        }
        // the key vanishing on (N−1)-forms
        for idx in subsets(3, 2) {
            assert!(m.d(&MForm::basis(idx, MatElement::identity(2))).unwrap().is_zero());
        }
        assert!(matches!(m.d(&MForm::basis(vec![0, 1, 2], MatElement::identity(2))), Err(MatrixError::DegreeOverflow(..))));
    }

    #[test]
    fn d_squared_exhaustive() {
        let m = calc();
        for k in 0..2 {
            for w in m.full_basis(k) {
                assert!(m.d(&m.d(&w).unwrap()).unwrap().is_zero(), "{w}");
            }
        }
        let bad = calc().with_bracket_sign(-&GaussRat::one());
        let fails = (0..2).flat_map(|k| bad.full_basis(k)).any(|w| !bad.d(&bad.d(&w).unwrap()).unwrap().is_zero());
        assert!(fails);
    }

    #[test]
    fn leibniz_of_d() {
        let m = calc();
        let a = pauli()[0].plus(&MatElement::unit(2, 0, 1));
        let b = pauli()[1].mul(&MatElement::unit(2, 1, 1));
        let lhs = m.d_function(&a.mul(&b));
        let rhs = m.d_function(&a).right_mul(&b).plus(&m.d_function(&b).left_mul(&a));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn connection_and_integral() {
        let m = calc();
        let e = pauli();
        assert!(m.nabla_pairs(&[(0, MatElement::zero(2))]).is_zero());
        for l in 0..3 {
            for x in &e {
                let v = m.nabla_pairs(&[(l, x.clone())]);
                assert!(v.trace().is_zero());
                assert!(m.trace_integral(&v).is_zero());
            }
        }
        for f in m.full_basis(1) {
            assert!(m.trace_integral(&m.nabla(&f)).is_zero());
        }
        assert_eq!(m.nabla_rank(), (3, 1));
        assert_eq!(m.trace_integral(&MatElement::identity(2)), GaussRat::one());
        assert_eq!(m.trace_integral(&MatElement::diag(&[GaussRat::from_ints(3, 0), GaussRat::one()])), GaussRat::from_ints(2, 0));
        for x in &e {
            assert!(m.trace_integral(x).is_zero());
        }
    }

    #[test]
    fn hom_connection_law() {
        let m = calc();
        let a = pauli()[2].plus(&MatElement::unit(2, 1, 0));
        for f in m.full_basis(1) {
            let lhs = m.nabla(&f.right_mul(&a));
            let rhs = m.nabla(&f).mul(&a).plus(&m.apply(&f, &m.d_function(&a)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn flat() {
        let m = calc();
        for f in m.full_basis(2) {
            assert!(m.curvature(&f).unwrap().is_zero());
            assert!(m.curvature_formula(&f).is_zero());
        }
    }

    #[test]
    fn ladder() {
        let m = calc();
        let vol = MForm::basis(vec![0, 1, 2], MatElement::identity(2));
        assert_eq!(m.phi(3, &vol).value(&[]), MatElement::identity(2));
        let out = m.phi_ladder().unwrap();
        assert!(out.commutes(), "{:?}", out.first_failure());
        assert!(out.bijective.iter().all(|b| *b));
        let bad = calc().with_flipped_phi().phi_ladder().unwrap();
        assert!(!bad.commutes());
    }
}
