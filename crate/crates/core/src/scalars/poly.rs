use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

/// Exponent vector over the parameter registry; trailing zeros are trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(SmallVec<[u32; 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(i: usize, e: u32) -> Self {
        let mut v: SmallVec<[u32; 4]> = SmallVec::from_elem(0, i + 1);
        v[i] = e;
        Monomial(v).trimmed()
    }

    pub fn from_exps<I: IntoIterator<Item = u32>>(exps: I) -> Self {
        Monomial(exps.into_iter().collect()).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let n = self.0.len().max(o.0.len());
        Monomial((0..n).map(|i| self.exp(i) + o.exp(i)).collect())
    }

    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        if o.0.len() > self.0.len() {
            return None;
        }
        let mut out = SmallVec::with_capacity(self.0.len());
        for i in 0..self.0.len() {
            out.push(self.exp(i).checked_sub(o.exp(i))?);
        }
        Some(Monomial(out).trimmed())
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let n = self.0.len().min(o.0.len());
        Monomial((0..n).map(|i| self.exp(i).min(o.exp(i))).collect()).trimmed()
    }

    fn without(&self, v: usize) -> Monomial {
        if v >= self.0.len() {
            return self.clone();
        }
        let mut m = self.clone();
        m.0[v] = 0;
        m.trimmed()
    }
}

impl Ord for Monomial {
    /// Degree first, then lexicographic with the first parameter most significant.
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| {
            let n = self.0.len().max(o.0.len());
            for i in 0..n {
                match self.exp(i).cmp(&o.exp(i)) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sparse multivariate polynomial over the integers, terms in descending deglex order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: Vec<(Monomial, BigInt)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial, c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(Monomial::var(i, 1), BigInt::one())
    }

    /// Builds from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(it: I) -> Self {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in it {
            *acc.entry(m).or_insert_with(BigInt::zero) += c;
        }
        Poly {
            terms: acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.first()
    }

    pub fn lc(&self) -> BigInt {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_default()
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(a, c)| (a.mul(m), c * k)).collect(),
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (a, b) = (&self.terms[i], &o.terms[j]);
            match a.0.cmp(&b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a.1 + &b.1;
                    if !c.is_zero() {
                        out.push((a.0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Poly { terms: out }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                *acc.entry(a.mul(b)).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        Poly {
            terms: acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Positive gcd of the integer coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    fn smallest_var(&self) -> Option<usize> {
        self.terms
            .iter()
            .filter_map(|(m, _)| m.exps().iter().position(|&e| e > 0))
            .min()
    }

    /// Coefficients as a polynomial in `v`, indexed by exponent.
    fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let d = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, BigInt)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(v) as usize].push((m.without(v), c.clone()));
        }
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    fn lc_in(&self, v: usize) -> Poly {
        let d = self.degree_in(v);
        Poly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.exp(v) == d)
                .map(|(m, c)| (m.without(v), c.clone())),
        )
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if d.terms.len() == 1 {
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                out.push((m.div(dm)?, q));
            }
            return Some(Poly { terms: out });
        }
        let mut r = self.clone();
        let mut q = Vec::new();
        while let Some((rm, rc)) = r.leading().cloned() {
            let mm = rm.div(dm)?;
            let (qc, rem) = rc.div_rem(dc);
            if !rem.is_zero() {
                return None;
            }
            r = r.sub(&d.mul_term(&mm, &qc));
            q.push((mm, qc));
        }
        Some(Poly { terms: q })
    }

    fn normalized_sign(self) -> Poly {
        if self.lc().is_negative() {
            self.neg()
        } else {
            self
        }
    }

    /// Greatest common divisor with positive leading coefficient.
    pub fn gcd(&self, o: &Poly) -> Poly {
        if self.is_zero() {
            return o.clone().normalized_sign();
        }
        if o.is_zero() {
            return self.clone().normalized_sign();
        }
        if self.terms.len() == 1 {
            return monomial_gcd(&self.terms[0], o);
        }
        if o.terms.len() == 1 {
            return monomial_gcd(&o.terms[0], self);
        }
        if self == o {
            return self.clone().normalized_sign();
        }
        let v = match (self.smallest_var(), o.smallest_var()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!("non-constant polynomial without variables"),
        };
        let in_a = self.degree_in(v) > 0;
        let in_b = o.degree_in(v) > 0;
        if !in_a {
            return self.gcd(&o.content_in(v));
        }
        if !in_b {
            return o.gcd(&self.content_in(v));
        }
        let ca = self.content_in(v);
        let cb = o.content_in(v);
        let c = ca.gcd(&cb);
        let pa = self.div_exact(&ca).expect("content divides");
        let pb = o.div_exact(&cb).expect("content divides");
        let g = primitive_prs(pa, pb, v);
        c.mul(&g).normalized_sign()
    }

    fn content_in(&self, v: usize) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in(v).into_iter().filter(|c| !c.is_zero()) {
            g = g.gcd(&c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_part_in(&self, v: usize) -> Poly {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    pub fn eval(&self, vals: &[BigRational]) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    let x = vals.get(i)?;
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Some(acc)
    }

    pub fn nvars(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.exps().len()).max().unwrap_or(0)
    }
}

fn monomial_gcd(t: &(Monomial, BigInt), p: &Poly) -> Poly {
    let mut m = t.0.clone();
    for (pm, _) in p.terms() {
        m = m.gcd(pm);
        if m.is_one() {
            break;
        }
    }
    let c = t.1.gcd(&p.content());
    Poly::monomial(m, c)
}

fn prem(f: &Poly, g: &Poly, v: usize) -> Poly {
    let dg = g.degree_in(v);
    let lg = g.lc_in(v);
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(v) >= dg {
        let dr = r.degree_in(v);
        let lr = r.lc_in(v);
        let shifted = g.mul(&lr).mul_term(&Monomial::var(v, dr - dg), &BigInt::one());
        r = r.mul(&lg).sub(&shifted);
    }
    r
}

fn primitive_prs(a: Poly, b: Poly, v: usize) -> Poly {
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        let r = prem(&f, &g, v);
        if r.is_zero() {
            return g.primitive_part_in(v).normalized_sign();
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        f = g;
        g = r.primitive_part_in(v);
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<(BigRational, Vec<i64>)> = self
            .terms
            .iter()
            .map(|(m, c)| {
                (
                    BigRational::from_integer(c.clone()),
                    m.exps().iter().map(|&e| e as i64).collect(),
                )
            })
            .collect();
        super::write_terms(f, &parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Poly {
        Poly::var(0)
    }
    fn p() -> Poly {
        Poly::var(1)
    }
    fn c(k: i64) -> Poly {
        Poly::constant(BigInt::from(k))
    }

    #[test]
    fn deglex_order() {
        let a = Monomial::from_exps([2, 0]);
        let b = Monomial::from_exps([1, 1]);
        let c = Monomial::from_exps([0, 3]);
        assert!(a > b);
        assert!(c > a);
        assert!(Monomial::one() < Monomial::var(1, 1));
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        let a = q().mul(&q()).sub(&c(1));
        let b = q().sub(&c(1)).mul(&p().add(&c(2)));
        assert_eq!(a.gcd(&b), q().sub(&c(1)));
    }

    #[test]
    fn gcd_keeps_integer_content() {
        let a = q().scale(&BigInt::from(6)).add(&c(4));
        let b = q().mul(&q()).scale(&BigInt::from(9)).sub(&c(4));
        // 2(3q+2) and (3q-2)(3q+2)
        assert_eq!(a.gcd(&b), q().scale(&BigInt::from(3)).add(&c(2)));
    }

    #[test]
    fn exact_division() {
        let a = q().pow(4).sub(&c(1));
        let b = q().pow(2).add(&c(1));
        assert_eq!(a.div_exact(&b), Some(q().pow(2).sub(&c(1))));
        assert_eq!(a.div_exact(&q().add(&c(2))), None);
    }

    #[test]
    fn gcd_multivariate_coprime() {
        let a = q().mul(&p()).add(&c(1));
        let b = q().add(&p());
        assert!(a.gcd(&b).is_one());
    }
}
