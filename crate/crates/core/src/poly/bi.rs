use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

use super::uni::UniPoly;

/// Sparse polynomial in `s` and `t` (equivalently `L₀` and `W₀`), keyed by
/// `(s-exponent, t-exponent)`; no zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Scalar>,
}

impl BiPoly {
    pub fn zero() -> BiPoly {
        BiPoly::default()
    }

    pub fn one() -> BiPoly {
        BiPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> BiPoly {
        BiPoly::monomial(0, 0, c)
    }

    pub fn s() -> BiPoly {
        BiPoly::monomial(1, 0, Scalar::one())
    }

    pub fn t() -> BiPoly {
        BiPoly::monomial(0, 1, Scalar::one())
    }

    pub fn monomial(i: u32, j: u32, c: Scalar) -> BiPoly {
        let mut p = BiPoly::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Scalar)>) -> BiPoly {
        let mut p = BiPoly::zero();
        for ((i, j), c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    /// Embeds a polynomial in `t` alone.
    pub fn from_t(p: &UniPoly) -> BiPoly {
        BiPoly {
            terms: p.terms().map(|(j, c)| ((0, j), c.clone())).collect(),
        }
    }

    /// Embeds a polynomial in `s` alone.
    pub fn from_s(p: &UniPoly) -> BiPoly {
        BiPoly {
            terms: p.terms().map(|(i, c)| ((i, 0), c.clone())).collect(),
        }
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((i, j)) {
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

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Scalar {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Terms in ascending `(s, t)` exponent order.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Scalar)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn deg_s(&self) -> Option<u32> {
        self.terms.keys().map(|(i, _)| *i).max()
    }

    pub fn deg_t(&self) -> Option<u32> {
        self.terms.keys().map(|(_, j)| *j).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    /// The polynomial in `t` multiplying `s^i`.
    pub fn coefficient_of_s_power(&self, i: u32) -> UniPoly {
        UniPoly::from_terms(
            self.terms
                .range((i, 0)..=(i, u32::MAX))
                .map(|((_, j), c)| (*j, c.clone())),
        )
    }

    /// The `t`-free part as a polynomial in `s`.
    pub fn coefficient_of_t_power(&self, j: u32) -> UniPoly {
        UniPoly::from_terms(
            self.terms
                .iter()
                .filter(|((_, tj), _)| *tj == j)
                .map(|((i, _), c)| (*i, c.clone())),
        )
    }

    /// `Some(p)` when the polynomial does not involve `s`.
    pub fn as_t_poly(&self) -> Option<UniPoly> {
        if self.deg_s().unwrap_or(0) == 0 {
            Some(self.coefficient_of_s_power(0))
        } else {
            None
        }
    }

    /// Terms whose `s`-exponent is at least `min_i`.
    pub fn s_degree_at_least(&self, min_i: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .range((min_i, 0)..)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(k, x)| (*k, x * c)).collect(),
        }
    }

    pub fn mul_uni_t(&self, p: &UniPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((i, j), c1) in &self.terms {
            for (e, c2) in p.terms() {
                out.add_term(*i, j + e, c1 * c2);
            }
        }
        out
    }

    /// `∂/∂t`.
    pub fn partial_t(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|((i, j), c)| ((*i, j - 1), c * &Scalar::int(*j as i64))),
        )
    }

    /// `∂/∂s`.
    pub fn partial_s(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|((i, j), c)| ((i - 1, *j), c * &Scalar::int(*i as i64))),
        )
    }

    /// `f(s − c, t)`, expanded binomially.
    pub fn shift_s(&self, c: &Scalar) -> BiPoly {
        if c.is_zero() {
            return self.clone();
        }
        let max_i = self.deg_s().unwrap_or(0) as usize;
        let minus_c = -c;
        let mut powers = Vec::with_capacity(max_i + 1);
        powers.push(Scalar::one());
        for k in 1..=max_i {
            powers.push(&powers[k - 1] * &minus_c);
        }
        let mut binom_rows: Vec<Vec<Scalar>> = vec![vec![Scalar::one()]];
        for n in 1..=max_i {
            let prev = &binom_rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(Scalar::one());
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(Scalar::one());
            binom_rows.push(row);
        }
        let mut out = BiPoly::zero();
        for ((i, j), coef) in &self.terms {
            let i = *i as usize;
            for (k, binom) in binom_rows[i].iter().enumerate() {
                let factor = binom * &powers[i - k];
                out.add_term(k as u32, *j, coef * &factor);
            }
        }
        out
    }

    /// `f(s, t + c)`.
    pub fn shift_t(&self, c: &Scalar) -> BiPoly {
        self.swap_vars().shift_s(&-c).swap_vars()
    }

    /// `f(t, s)`.
    pub fn swap_vars(&self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|((i, j), c)| ((*j, *i), c.clone())).collect(),
        }
    }

    pub fn eval(&self, s: &Scalar, t: &Scalar) -> Scalar {
        self.terms
            .iter()
            .map(|((i, j), c)| {
                let si = s.pow(*i as i64).expect("non-negative exponent");
                let tj = t.pow(*j as i64).expect("non-negative exponent");
                c * &(&si * &tj)
            })
            .sum()
    }

    /// Substitutes a value for `t`, leaving a polynomial in `s`.
    pub fn eval_t(&self, t: &Scalar) -> UniPoly {
        let mut out = UniPoly::zero();
        for ((i, j), c) in &self.terms {
            out.add_term(*i, c * &t.pow(*j as i64).expect("non-negative exponent"));
        }
        out
    }

    /// Substitutes a value for `s`, leaving a polynomial in `t`.
    pub fn eval_s(&self, s: &Scalar) -> UniPoly {
        self.swap_vars().eval_t(s)
    }

    /// Terms in display order: graded by total degree (highest first), ties
    /// broken by the larger `s`-exponent.
    pub fn graded_terms(&self) -> Vec<((u32, u32), &Scalar)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|((i1, j1), _), ((i2, j2), _)| (i2 + j2, i2).cmp(&(i1 + j1, i1)));
        v
    }

    /// Writes the polynomial with the given names for the two variables.
    pub fn display_in<'a>(&'a self, s_name: &'a str, t_name: &'a str) -> impl fmt::Display + 'a {
        struct D<'a>(&'a BiPoly, &'a str, &'a str);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let terms = self.0.graded_terms().into_iter().map(|((i, j), c)| {
                    let sp = super::power(self.1, i);
                    let tp = super::power(self.2, j);
                    let mono = match (sp.is_empty(), tp.is_empty()) {
                        (true, _) => tp,
                        (_, true) => sp,
                        _ => format!("{sp}*{tp}"),
                    };
                    (c, mono)
                });
                super::write_terms(f, terms)
            }
        }
        D(self, s_name, t_name)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("s", "t"))
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let (mut out, other) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for ((i, j), c) in &other.terms {
            out.add_term(*i, *j, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for ((i, j), c) in &rhs.terms {
            out.add_term(*i, *j, -c);
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $m(self, rhs: BiPoly) -> BiPoly { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);
