use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{param_index, Field, Monomial, Poly, ScalarError};

/// Reduced quotient of integer polynomials in the registered parameters.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ScalarRF {
    num: Poly,
    den: Poly,
}

impl Default for ScalarRF {
    fn default() -> Self {
        Self::zero()
    }
}

impl ScalarRF {
    pub fn zero() -> Self {
        ScalarRF { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_bigint(BigInt::from(k))
    }

    pub fn from_bigint(k: BigInt) -> Self {
        ScalarRF { num: Poly::constant(k), den: Poly::one() }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_polys(Poly::constant(n.into()), Poly::constant(d.into())).expect("nonzero denominator")
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::from_polys(Poly::constant(r.numer().clone()), Poly::constant(r.denom().clone()))
            .expect("nonzero denominator")
    }

    pub fn from_poly(p: Poly) -> Self {
        ScalarRF { num: p, den: Poly::one() }
    }

    /// The parameter at registry index `i` raised to `e`; negative powers land in the denominator.
    pub fn param_pow(i: usize, e: i32) -> Self {
        let m = Poly::monomial(Monomial::var(i, e.unsigned_abs()), BigInt::one());
        if e >= 0 {
            Self::from_poly(m)
        } else {
            ScalarRF { num: Poly::one(), den: m }
        }
    }

    pub fn param(name: &str) -> Self {
        Self::param_pow(param_index(name), 1)
    }

    /// `q^e` for the default parameter `q`.
    pub fn q_pow(e: i32) -> Self {
        Self::param_pow(param_index("q"), e)
    }

    pub fn from_polys(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (n, d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Self::signed(n, d)
    }

    fn signed(n: Poly, d: Poly) -> Self {
        if d.lc().is_negative() {
            ScalarRF { num: n.neg(), den: d.neg() }
        } else {
            ScalarRF { num: n, den: d }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::signed(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, ScalarError> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: i32) -> Self {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        ScalarRF { num: self.num.pow(e as u32), den: self.den.pow(e as u32) }
    }

    /// Substitutes exact rationals for the parameters (by registry index).
    pub fn eval(&self, vals: &[BigRational]) -> Result<BigRational, ScalarError> {
        let unbound = |p: &Poly| p.nvars() > vals.len();
        if unbound(&self.num) || unbound(&self.den) {
            let i = self.num.nvars().max(self.den.nvars()) - 1;
            return Err(ScalarError::UnboundParameter(super::param_name(i)));
        }
        let d = self.den.eval(vals).expect("bound");
        if d.is_zero() {
            return Err(ScalarError::PoleAtAssignment);
        }
        Ok(self.num.eval(vals).expect("bound") / d)
    }

    /// Evaluates an unreduced quotient, the way a naive substitution would.
    pub fn eval_unreduced(num: &Poly, den: &Poly, vals: &[BigRational]) -> Result<BigRational, ScalarError> {
        let d = den.eval(vals).ok_or_else(|| ScalarError::UnboundParameter("?".into()))?;
        if d.is_zero() {
            return Err(ScalarError::PoleAtAssignment);
        }
        Ok(num.eval(vals).ok_or_else(|| ScalarError::UnboundParameter("?".into()))? / d)
    }

    /// True when the printed form needs parentheses inside a product.
    pub fn is_compound(&self) -> bool {
        if self.den.is_monomial() {
            self.num.terms().len() > 1
        } else {
            true
        }
    }

    /// The constant rational value, if the function is constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(BigRational::new(n, d))
    }
}

impl fmt::Display for ScalarRF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_monomial() {
            let (dm, dc) = self.den.leading().expect("nonzero");
            let parts: Vec<(BigRational, Vec<i64>)> = self
                .num
                .terms()
                .iter()
                .map(|(m, c)| {
                    let n = m.exps().len().max(dm.exps().len());
                    let exps = (0..n).map(|i| m.exp(i) as i64 - dm.exp(i) as i64).collect();
                    (BigRational::new(c.clone(), dc.clone()), exps)
                })
                .collect();
            return super::write_terms(f, &parts);
        }
        if self.num.terms().len() == 1 {
            write!(f, "{}/({})", self.num, self.den)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Add for &ScalarRF {
    type Output = ScalarRF;
    fn add(self, o: &ScalarRF) -> ScalarRF {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return ScalarRF::from_poly(self.num.add(&o.num));
            }
            return ScalarRF::reduce(self.num.add(&o.num), self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = o.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&b).add(&o.num.mul(&a));
        if num.is_zero() {
            return ScalarRF::zero();
        }
        let den = self.den.mul(&b);
        let g2 = num.gcd(&g);
        if g2.is_one() {
            ScalarRF::signed(num, den)
        } else {
            ScalarRF::signed(num.div_exact(&g2).expect("divides"), den.div_exact(&g2).expect("divides"))
        }
    }
}

impl Sub for &ScalarRF {
    type Output = ScalarRF;
    fn sub(self, o: &ScalarRF) -> ScalarRF {
        self + &(-o)
    }
}

impl Neg for &ScalarRF {
    type Output = ScalarRF;
    fn neg(self) -> ScalarRF {
        ScalarRF { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for ScalarRF {
    type Output = ScalarRF;
    fn neg(self) -> ScalarRF {
        -&self
    }
}

impl Mul for &ScalarRF {
    type Output = ScalarRF;
    fn mul(self, o: &ScalarRF) -> ScalarRF {
        if self.is_zero() || o.is_zero() {
            return ScalarRF::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return ScalarRF::from_poly(self.num.mul(&o.num));
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let div = |p: &Poly, g: &Poly| if g.is_one() { p.clone() } else { p.div_exact(g).expect("divides") };
        let num = div(&self.num, &g1).mul(&div(&o.num, &g2));
        let den = div(&self.den, &g2).mul(&div(&o.den, &g1));
        ScalarRF::signed(num, den)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for ScalarRF {
            type Output = ScalarRF;
            fn $m(self, o: ScalarRF) -> ScalarRF {
                (&self).$m(&o)
            }
        }
        impl $tr<&ScalarRF> for ScalarRF {
            type Output = ScalarRF;
            fn $m(self, o: &ScalarRF) -> ScalarRF {
                (&self).$m(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl From<i64> for ScalarRF {
    fn from(k: i64) -> Self {
        Self::from_int(k)
    }
}

impl Field for ScalarRF {
    fn zero() -> Self {
        ScalarRF::zero()
    }
    fn one() -> Self {
        ScalarRF::one()
    }
    fn is_zero(&self) -> bool {
        ScalarRF::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn weight(&self) -> usize {
        self.num.terms().len() + self.den.terms().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(e: i32) -> ScalarRF {
        ScalarRF::q_pow(e)
    }
    fn k(n: i64) -> ScalarRF {
        ScalarRF::from_int(n)
    }
    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cancels_q_difference_quotient() {
        let a = &q(1) - &q(-1);
        let b = &q(2) - &q(-2);
        let r = a.checked_div(&b).unwrap();
        let expect = (&q(1) + &q(-1)).inv().unwrap();
        assert_eq!(r, expect);
        assert_eq!(r.to_string(), "q/(q^2 + 1)");
    }

    #[test]
    fn eval_examples() {
        let r = (&q(1) + &q(-1)).inv().unwrap();
        assert_eq!(r.eval(&[rat(2, 1)]).unwrap(), rat(2, 5));
        assert_eq!(q(-2).eval(&[rat(3, 1)]).unwrap(), rat(1, 9));
        let reduced = (&q(1) - &q(-1)).checked_div(&(&q(2) - &q(-2))).unwrap();
        assert_eq!(reduced.eval(&[rat(1, 1)]).unwrap(), rat(1, 2));
        // the same quotient, cleared of q powers but not of common factors
        let n = (&q(2) - &k(1)).mul(&q(2));
        let d = &q(4) - &k(1);
        assert_eq!(
            ScalarRF::eval_unreduced(n.numer(), d.numer(), &[rat(1, 1)]),
            Err(ScalarError::PoleAtAssignment)
        );
    }

    #[test]
    fn p_quotient() {
        let p = ScalarRF::param("p");
        let r = (&p - &k(1)).checked_div(&(&p.pow(2) - &k(1))).unwrap();
        assert_eq!(r, (&p + &k(1)).inv().unwrap());
    }

    #[test]
    fn zero_is_unique() {
        let z = &q(1) - &q(1);
        assert_eq!(z, ScalarRF::zero());
        assert!(z.denom().is_one());
        assert_eq!(&q(3) + &z, q(3));
    }

    #[test]
    fn laurent_printing() {
        assert_eq!((&q(1) - &q(-1)).to_string(), "q - q^-1");
        assert_eq!(ScalarRF::from_ratio(-1, 2).mul(&q(2)).to_string(), "-1/2*q^2");
        assert_eq!(k(-3).to_string(), "-3");
    }

    #[test]
    fn sign_lives_in_denominator_lc() {
        let r = ScalarRF::from_polys(Poly::one(), Poly::constant(BigInt::from(-2))).unwrap();
        assert!(r.denom().lc() > BigInt::zero());
        assert_eq!(r, ScalarRF::from_ratio(-1, 2));
    }
}
