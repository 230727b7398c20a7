use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use parking_lot::RwLock;

use crate::ncalg::{AlgElement, Presentation, Word};
use crate::scalars::ScalarRF;

use super::LinMapError;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// An algebra map A -> M_n(A) fixed by its values on generators.
///
/// The value on any word, normal or not, is the product of the generator
/// matrices, so the same table serves for relation checks.
pub struct MatrixAlgebraMap {
    n: usize,
    images: Vec<Vec<AlgElement>>,
    cache: RwLock<HashMap<Word, Arc<Vec<AlgElement>>>>,
}

impl fmt::Debug for MatrixAlgebraMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixAlgebraMap").field("n", &self.n).field("gens", &self.images.len()).finish()
    }
}

impl MatrixAlgebraMap {
    /// `images[g]` is the row-major n×n image of generator g.
    pub fn new(n: usize, images: Vec<Vec<AlgElement>>) -> Result<Self, LinMapError> {
        if images.iter().any(|m| m.len() != n * n) {
            return Err(LinMapError::SizeMismatch);
        }
        Ok(MatrixAlgebraMap { n, images, cache: RwLock::new(HashMap::new()) })
    }

    /// A single algebra endomorphism A -> A.
    pub fn scalar_map(images: Vec<AlgElement>) -> Self {
        Self::new(1, images.into_iter().map(|x| vec![x]).collect()).expect("1x1")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generator_image(&self, g: usize) -> &[AlgElement] {
        &self.images[g]
    }

    pub fn num_gens(&self) -> usize {
        self.images.len()
    }

    pub fn eval_word(&self, pres: &Presentation, w: &Word) -> Arc<Vec<AlgElement>> {
        if let Some(hit) = self.cache.read().get(w) {
            return hit.clone();
        }
        let out = match w.first() {
            None => Arc::new(identity_matrix(self.n)),
            Some(g) if w.len() == 1 => Arc::new(self.images[g].clone()),
            Some(g) => {
                let rest = self.eval_word(pres, &w.tail());
                Arc::new(matmul(pres, self.n, &self.images[g], &rest))
            }
        };
        self.cache.write().insert(w.clone(), out.clone());
        out
    }

    pub fn eval(&self, pres: &Presentation, a: &AlgElement) -> Vec<AlgElement> {
        let mut out = vec![AlgElement::zero(); self.n * self.n];
        for (w, c) in a.terms() {
            for (slot, x) in out.iter_mut().zip(self.eval_word(pres, w).iter()) {
                slot.add_scaled(x, c);
            }
        }
        out
    }
}

pub(crate) fn identity_matrix(n: usize) -> Vec<AlgElement> {
    let mut m = vec![AlgElement::zero(); n * n];
    for i in 0..n {
        m[i * n + i] = AlgElement::one();
    }
    m
}

/// Product of row-major matrices with entries in A.
pub fn matmul(pres: &Presentation, n: usize, a: &[AlgElement], b: &[AlgElement]) -> Vec<AlgElement> {
    let mut out = vec![AlgElement::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = &a[i * n + k];
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                let y = &b[k * n + j];
                if !y.is_zero() {
                    let p = pres.mul(x, y);
                    out[i * n + j].add_scaled(&p, &ScalarRF::one());
                }
            }
        }
    }
    out
}

enum Node {
    Zero,
    Identity,
    Entry { map: Arc<MatrixAlgebraMap>, i: usize, j: usize },
    /// a -> base^(exponent·|a|) a on homogeneous a
    GradeScale { base: ScalarRF, exponent: i64 },
    Compose(MapExpr, MapExpr),
    Sum(Vec<MapExpr>),
    Scale(ScalarRF, MapExpr),
}

/// Symbolic linear map A -> A; cheap to clone, evaluated on demand.
#[derive(Clone)]
pub struct MapExpr {
    id: u64,
    node: Arc<Node>,
}

impl fmt::Debug for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.node {
            Node::Zero => write!(f, "0"),
            Node::Identity => write!(f, "id"),
            Node::Entry { i, j, .. } => write!(f, "m[{i}{j}]"),
            Node::GradeScale { base, exponent } => write!(f, "grade({base},{exponent})"),
            Node::Compose(a, b) => write!(f, "{a}∘{b}"),
            Node::Sum(v) => {
                write!(f, "(")?;
                for (k, x) in v.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Node::Scale(c, a) => write!(f, "({c})·{a}"),
        }
    }
}

impl MapExpr {
    fn make(node: Node) -> Self {
        MapExpr { id: NEXT_ID.fetch_add(1, Ordering::Relaxed), node: Arc::new(node) }
    }

    pub fn zero() -> Self {
        Self::make(Node::Zero)
    }

    pub fn identity() -> Self {
        Self::make(Node::Identity)
    }

    pub fn entry(map: Arc<MatrixAlgebraMap>, i: usize, j: usize) -> Self {
        Self::make(Node::Entry { map, i, j })
    }

    /// An endomorphism given by generator images.
    pub fn algebra_map(images: Vec<AlgElement>) -> Self {
        Self::entry(Arc::new(MatrixAlgebraMap::scalar_map(images)), 0, 0)
    }

    pub fn grade_scale(base: ScalarRF, exponent: i64) -> Self {
        Self::make(Node::GradeScale { base, exponent })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn is_zero(&self) -> bool {
        matches!(*self.node, Node::Zero)
    }

    pub fn is_identity(&self) -> bool {
        matches!(*self.node, Node::Identity)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MapExpr) -> MapExpr {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_identity() {
            return other.clone();
        }
        if other.is_identity() {
            return self.clone();
        }
        Self::make(Node::Compose(self.clone(), other.clone()))
    }

    pub fn sum(parts: Vec<MapExpr>) -> MapExpr {
        let mut parts: Vec<_> = parts.into_iter().filter(|x| !x.is_zero()).collect();
        match parts.len() {
            0 => Self::zero(),
            1 => parts.pop().expect("one"),
            _ => Self::make(Node::Sum(parts)),
        }
    }

    pub fn scale(&self, c: &ScalarRF) -> MapExpr {
        if c.is_zero() || self.is_zero() {
            return Self::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Self::make(Node::Scale(c.clone(), self.clone()))
    }

    pub fn neg(&self) -> MapExpr {
        self.scale(&ScalarRF::from_int(-1))
    }

    /// One-shot evaluation with a private memo table.
    pub fn eval(&self, pres: &Presentation, a: &AlgElement) -> Result<AlgElement, LinMapError> {
        MapEval::new(pres).eval(self, a)
    }
}

/// Evaluation session: memoizes (expression, word) pairs. Each worker keeps its own.
pub struct MapEval<'p> {
    pres: &'p Presentation,
    memo: HashMap<(u64, Word), Arc<AlgElement>>,
}

impl<'p> MapEval<'p> {
    pub fn new(pres: &'p Presentation) -> Self {
        MapEval { pres, memo: HashMap::new() }
    }

    pub fn presentation(&self) -> &'p Presentation {
        self.pres
    }

    pub fn eval(&mut self, e: &MapExpr, a: &AlgElement) -> Result<AlgElement, LinMapError> {
        let mut acc = AlgElement::zero();
        for (w, c) in a.terms() {
            let v = self.eval_word(e, w)?;
            acc.add_scaled(&v, c);
        }
        Ok(acc)
    }

    pub fn eval_word(&mut self, e: &MapExpr, w: &Word) -> Result<Arc<AlgElement>, LinMapError> {
        let out = match &*e.node {
            Node::Zero => return Ok(Arc::new(AlgElement::zero())),
            Node::Identity => return Ok(Arc::new(AlgElement::word(w.clone()))),
            Node::Entry { map, i, j } => {
                let m = map.eval_word(self.pres, w);
                return Ok(Arc::new(m[i * map.n() + j].clone()));
            }
            Node::GradeScale { base, exponent } => {
                let deg = self.pres.word_degree(w).ok_or(LinMapError::GradingAbsent)?;
                let e = i32::try_from(deg * exponent).map_err(|_| LinMapError::SizeMismatch)?;
                return Ok(Arc::new(AlgElement::term(w.clone(), base.pow(e))));
            }
            _ => {
                if let Some(hit) = self.memo.get(&(e.id, w.clone())) {
                    return Ok(hit.clone());
                }
                match &*e.node {
                    Node::Compose(a, b) => {
                        let inner = self.eval_word(b, w)?;
                        self.eval(a, &inner)?
                    }
                    Node::Sum(parts) => {
                        let mut acc = AlgElement::zero();
                        for p in parts {
                            let v = self.eval_word(p, w)?;
                            acc.add_scaled(&v, &ScalarRF::one());
                        }
                        acc
                    }
                    Node::Scale(c, a) => self.eval_word(a, w)?.scale(c),
                    _ => unreachable!(),
                }
            }
        };
        let out = Arc::new(out);
        self.memo.insert((e.id, w.clone()), out.clone());
        Ok(out)
    }
}
