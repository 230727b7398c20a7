//! Sparse exact linear algebra over a [`Field`], plus a fraction-free rank
//! over the polynomial ring used as an independent cross-check.

use std::collections::{BTreeMap, HashMap};

use crate::scalars::{Field, Poly, ScalarRF};

pub type SparseVec<F> = BTreeMap<usize, F>;

fn axpy<F: Field>(y: &mut SparseVec<F>, a: &F, x: &SparseVec<F>) {
    for (k, v) in x {
        let t = a.times(v);
        match y.get(k) {
            Some(old) => {
                let s = old.plus(&t);
                if s.is_zero() {
                    y.remove(k);
                } else {
                    y.insert(*k, s);
                }
            }
            None => {
                if !t.is_zero() {
                    y.insert(*k, t);
                }
            }
        }
    }
}

struct Pivot<F> {
    vec: SparseVec<F>,
    combo: SparseVec<F>,
}

/// Incremental column echelon form that remembers how each reduced column
/// was assembled from the inputs.
pub struct Echelon<F: Field> {
    pivots: HashMap<usize, Pivot<F>>,
    order: Vec<usize>,
    added: usize,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Echelon { pivots: HashMap::new(), order: Vec::new(), added: 0 }
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.order.len()
    }

    pub fn num_columns(&self) -> usize {
        self.added
    }

    /// Rows holding a pivot, in the order they were taken.
    pub fn pivot_rows(&self) -> &[usize] {
        &self.order
    }

    fn reduce(&self, v: &mut SparseVec<F>, combo: &mut SparseVec<F>) {
        // pivots are kept fully reduced against each other, so one sweep suffices
        let hits: Vec<usize> = v.keys().copied().filter(|k| self.pivots.contains_key(k)).collect();
        for r in hits {
            let Some(c) = v.get(&r).cloned() else { continue };
            let p = &self.pivots[&r];
            let m = c.negated();
            axpy(v, &m, &p.vec);
            axpy(combo, &m, &p.combo);
        }
    }

    /// Adds a column; returns true when it raised the rank.
    pub fn push(&mut self, col: SparseVec<F>) -> bool {
        let idx = self.added;
        self.added += 1;
        let mut v = col;
        let mut combo = SparseVec::new();
        combo.insert(idx, F::one());
        self.reduce(&mut v, &mut combo);
        if v.is_empty() {
            return false;
        }
        let (&row, _) = v.iter().min_by_key(|(k, x)| (x.weight(), **k)).expect("nonempty");
        let inv = v[&row].inverse().expect("nonzero pivot");
        let scale = |m: &mut SparseVec<F>| {
            for x in m.values_mut() {
                *x = x.times(&inv);
            }
        };
        scale(&mut v);
        scale(&mut combo);
        for p in self.pivots.values_mut() {
            if let Some(c) = p.vec.get(&row).cloned() {
                let m = c.negated();
                axpy(&mut p.vec, &m, &v);
                axpy(&mut p.combo, &m, &combo);
            }
        }
        self.pivots.insert(row, Pivot { vec: v, combo });
        self.order.push(row);
        true
    }

    /// Coefficients x with Σ x_k col_k = target, if the target is in the span.
    pub fn solve(&self, target: &SparseVec<F>) -> Option<SparseVec<F>> {
        let mut v = target.clone();
        let mut combo = SparseVec::new();
        self.reduce(&mut v, &mut combo);
        if !v.is_empty() {
            return None;
        }
        Some(combo.into_iter().map(|(k, x)| (k, x.negated())).collect())
    }

    pub fn contains(&self, target: &SparseVec<F>) -> bool {
        let mut v = target.clone();
        let mut combo = SparseVec::new();
        self.reduce(&mut v, &mut combo);
        v.is_empty()
    }
}

pub fn rank<F: Field>(cols: impl IntoIterator<Item = SparseVec<F>>) -> usize {
    let mut e = Echelon::new();
    for c in cols {
        e.push(c);
    }
    e.rank()
}

/// Solves Σ x_k cols_k = target.
pub fn solve<F: Field>(cols: impl IntoIterator<Item = SparseVec<F>>, target: &SparseVec<F>) -> Option<SparseVec<F>> {
    let mut e = Echelon::new();
    for c in cols {
        e.push(c);
    }
    e.solve(target)
}

/// Rank by fraction-free (Bareiss) elimination over the polynomial ring.
///
/// Each row is first multiplied by the lcm of its denominators.
pub fn bareiss_rank(rows: &[SparseVec<ScalarRF>], ncols: usize) -> usize {
    let mut m: Vec<Vec<Poly>> = rows
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let l = r.values().fold(Poly::one(), |acc, x| {
                let g = acc.gcd(x.denom());
                acc.mul(&x.denom().div_exact(&g).expect("gcd divides"))
            });
            let mut row = vec![Poly::zero(); ncols];
            for (k, x) in r {
                row[*k] = x.numer().mul(&l.div_exact(x.denom()).expect("lcm"));
            }
            row
        })
        .collect();
    let nrows = m.len();
    let mut prev = Poly::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).filter(|&r| !m[r][col].is_zero()).min_by_key(|&r| m[r][col].terms().len()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = m[rank][col].mul(&m[r][c]).sub(&m[r][col].mul(&m[rank][c]));
                m[r][c] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[r][col] = Poly::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::GaussRat;

    fn v(entries: &[(usize, ScalarRF)]) -> SparseVec<ScalarRF> {
        entries.iter().filter(|(_, x)| !x.is_zero()).cloned().collect()
    }

    fn q(e: i32) -> ScalarRF {
        ScalarRF::q_pow(e)
    }

    #[test]
    fn rank_and_solve() {
        let cols = vec![v(&[(0, q(1)), (1, q(2))]), v(&[(0, q(-1)), (1, ScalarRF::one())]), v(&[(2, q(3))])];
        assert_eq!(rank(cols.clone()), 2);
        let target = v(&[(2, ScalarRF::one())]);
        let x = solve(cols.clone(), &target).unwrap();
        assert_eq!(x.get(&2), Some(&q(-3)));
        assert!(solve(cols, &v(&[(0, ScalarRF::one())])).is_none());
    }

    #[test]
    fn bareiss_agrees() {
        let rows = vec![
            v(&[(0, q(1)), (1, q(-1))]),
            v(&[(0, q(2)), (1, ScalarRF::from_int(2))]),
            v(&[(0, &q(1) + &q(2)), (1, &q(-1) + &ScalarRF::from_int(2))]),
        ];
        assert_eq!(bareiss_rank(&rows, 2), 2);
        // columns of the transpose
        let cols: Vec<_> = (0..2).map(|c| rows.iter().enumerate().filter_map(|(r, row)| row.get(&c).map(|x| (r, x.clone()))).collect()).collect();
        assert_eq!(rank::<ScalarRF>(cols), 2);
    }

    #[test]
    fn gaussian_field() {
        let i = GaussRat::i();
        let cols: Vec<SparseVec<GaussRat>> =
            vec![[(0, GaussRat::one()), (1, i.clone())].into_iter().collect(), [(0, i.clone()), (1, GaussRat::from_ints(-1, 0))].into_iter().collect()];
        assert_eq!(rank(cols), 1);
    }
}
