use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// Sparse univariate polynomial. The variable is `t` (equivalently `W₀`)
/// unless stated otherwise; no zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    terms: BTreeMap<u32, Scalar>,
}

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly::default()
    }

    pub fn constant(c: Scalar) -> UniPoly {
        UniPoly::monomial(0, c)
    }

    pub fn one() -> UniPoly {
        UniPoly::constant(Scalar::one())
    }

    /// The variable itself.
    pub fn var() -> UniPoly {
        UniPoly::monomial(1, Scalar::one())
    }

    pub fn monomial(exp: u32, c: Scalar) -> UniPoly {
        let mut p = UniPoly::zero();
        p.add_term(exp, c);
        p
    }

    /// `x - c`.
    pub fn linear_shift(c: &Scalar) -> UniPoly {
        let mut p = UniPoly::var();
        p.add_term(0, -c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, Scalar)>) -> UniPoly {
        let mut p = UniPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: u32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `None` stands for the degree of the zero polynomial (−∞), which
    /// compares below every `Some`.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: u32) -> Scalar {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.terms.values().next_back().cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.degree().unwrap_or(0) == 0
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &Scalar)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn scale(&self, c: &Scalar) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| **e > 0)
                .map(|(e, c)| (e - 1, c * &Scalar::int(*e as i64))),
        )
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        // Horner over the sparse exponents, highest first.
        let mut acc = Scalar::zero();
        let mut prev: Option<u32> = None;
        for (e, c) in self.terms.iter().rev() {
            if let Some(p) = prev {
                acc = &acc * &x.pow((p - e) as i64).expect("non-negative exponent");
            }
            acc = &acc + c;
            prev = Some(*e);
        }
        if let Some(p) = prev {
            acc = &acc * &x.pow(p as i64).expect("non-negative exponent");
        }
        acc
    }

    /// Terms of degree `>= min_exp` only.
    pub fn truncate_below(&self, min_exp: u32) -> UniPoly {
        UniPoly {
            terms: self.terms.range(min_exp..).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    /// Writes the polynomial in the named variable.
    pub fn display_in<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        struct D<'a>(&'a UniPoly, &'a str);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                super::write_terms(
                    f,
                    self.0.terms.iter().rev().map(|(e, c)| (c, super::power(self.1, *e))),
                )
            }
        }
        D(self, var)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("t"))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        let mut out = UniPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<UniPoly> for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// `(x^k − α^k)/(x − α) = Σ_{j<k} α^j x^{k−1−j}`; zero for `k = 0`.
pub fn divided_difference(k: u32, alpha: &Scalar) -> UniPoly {
    let mut out = UniPoly::zero();
    let mut alpha_pow = Scalar::one();
    for j in 0..k {
        out.add_term(k - 1 - j, alpha_pow.clone());
        alpha_pow = &alpha_pow * alpha;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t() -> UniPoly {
        UniPoly::var()
    }

    #[test]
    fn ring_examples() {
        let p = &(&t() + &UniPoly::one()) * &(&t() - &UniPoly::one());
        assert_eq!(p.to_string(), "t^2 - 1");
        assert_eq!(&p + &UniPoly::zero(), p);
        assert_eq!(UniPoly::zero().degree(), None);
        assert!(UniPoly::zero().degree() < Some(0));
    }

    #[test]
    fn divided_difference_examples() {
        assert!(divided_difference(0, &Scalar::int(5)).is_zero());
        assert_eq!(divided_difference(1, &Scalar::int(5)), UniPoly::one());
        // Long division of t³ − 8 by t − 2.
        let quotient = long_divide_by_linear(
            &(&UniPoly::monomial(3, Scalar::one()) - &UniPoly::constant(Scalar::int(8))),
            &Scalar::int(2),
        );
        assert_eq!(quotient.to_string(), "t^2 + 2*t + 4");
        assert_eq!(divided_difference(3, &Scalar::int(2)), quotient);
    }

    #[test]
    fn eval_example() {
        let p = &UniPoly::monomial(2, Scalar::one()) + &UniPoly::one();
        assert_eq!(p.eval(&Scalar::complex((0, 1), (2, 1))), Scalar::int(-3));
        assert_eq!(UniPoly::monomial(5, Scalar::int(3)).eval(&Scalar::int(2)), Scalar::int(96));
    }

    /// Synthetic division by `t − c`; independent of `divided_difference`.
    fn long_divide_by_linear(p: &UniPoly, c: &Scalar) -> UniPoly {
        let deg = p.degree().expect("nonzero dividend");
        let mut carry = Scalar::zero();
        let mut quotient = UniPoly::zero();
        for e in (1..=deg).rev() {
            carry = &(&carry * c) + &p.coeff(e);
            quotient.add_term(e - 1, carry.clone());
        }
        assert_eq!(&(&carry * c) + &p.coeff(0), Scalar::zero(), "nonzero remainder");
        quotient
    }

    fn small_scalar() -> impl Strategy<Value = Scalar> {
        ((-9i64..9, 1i64..5), (-9i64..9, 1i64..5)).prop_map(|(re, im)| Scalar::complex(re, im))
    }

    proptest! {
        #[test]
        fn divided_difference_times_linear(k in 0u32..=12, alpha in small_scalar()) {
            let lhs = &UniPoly::linear_shift(&alpha) * &divided_difference(k, &alpha);
            let rhs = &UniPoly::monomial(k, Scalar::one())
                - &UniPoly::constant(alpha.pow(k as i64).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
