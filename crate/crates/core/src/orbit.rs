//! Degree-bounded exploration of submodules of `Φ` and `Θ`.
//!
//! [`orbit_closure`] grows the span of some seeds under all `L_m, W_m` with
//! `|m| ≤ N` inside the box `{s^i t^j : i ≤ Ds, j ≤ Dt}`. Images leaving the
//! box are counted as overflow, never silently truncated, so a stabilized
//! closure certifies an invariant subspace only when the overflow is zero.
//! Reaching `1` is evidence of irreducibility, not a proof.
//!
//! [`check_invariant_subspace`] tests whether a monomial-spanned subspace
//! is mapped into itself, using exact images.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::BiPoly;
use crate::repmod::ModuleSpec;
use crate::scalar::Scalar;

pub const DEFAULT_WINDOW: i64 = 3;
pub const DEFAULT_BOUNDS: (u32, u32) = (8, 8);
pub const DEFAULT_ROUNDS: usize = 6;

/// Row-reduced basis of a subspace of the polynomials in the box
/// `i ≤ Ds, j ≤ Dt`; coordinate of `s^i t^j` is `i·(Dt+1) + j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    bounds: (u32, u32),
    /// Fully reduced rows, sorted by pivot; each pivot entry is `1`.
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl SubspaceBasis {
    pub fn new(bounds: (u32, u32)) -> SubspaceBasis {
        SubspaceBasis { bounds, rows: Vec::new() }
    }

    pub fn bounds(&self) -> (u32, u32) {
        self.bounds
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn width(&self) -> usize {
        (self.bounds.0 as usize + 1) * (self.bounds.1 as usize + 1)
    }

    /// Coordinates of `f`, or `None` if some monomial lies outside the box.
    pub fn coords(&self, f: &BiPoly) -> Option<Vec<Scalar>> {
        let (ds, dt) = self.bounds;
        let mut v = vec![Scalar::zero(); self.width()];
        for ((i, j), c) in f.terms() {
            if i > ds || j > dt {
                return None;
            }
            v[i as usize * (dt as usize + 1) + j as usize] = c.clone();
        }
        Some(v)
    }

    pub fn to_poly(&self, v: &[Scalar]) -> BiPoly {
        let dt = self.bounds.1 as usize + 1;
        BiPoly::from_terms(
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (((k / dt) as u32, (k % dt) as u32), c.clone())),
        )
    }

    fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row).skip(*p) {
                    if !r.is_zero() {
                        *x -= &(&c * r);
                    }
                }
            }
        }
        v
    }

    /// Adds `f` to the span; returns whether the dimension grew.
    /// Polynomials outside the box are rejected with `false`.
    pub fn insert(&mut self, f: &BiPoly) -> bool {
        let Some(v) = self.coords(f) else { return false };
        self.insert_coords(v)
    }

    fn insert_coords(&mut self, v: Vec<Scalar>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("pivot is nonzero");
        for x in v.iter_mut().skip(p) {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (x, r) in row.iter_mut().zip(&v).skip(p) {
                    if !r.is_zero() {
                        *x -= &(&c * r);
                    }
                }
            }
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, v));
        true
    }

    pub fn contains(&self, f: &BiPoly) -> bool {
        match self.coords(f) {
            Some(v) => self.reduce(v).iter().all(Scalar::is_zero),
            None => false,
        }
    }

    /// The basis rows as polynomials.
    pub fn basis(&self) -> Vec<BiPoly> {
        self.rows.iter().map(|(_, v)| self.to_poly(v)).collect()
    }
}

/// Result of an [`orbit_closure`] run.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    pub window: i64,
    pub bounds: (u32, u32),
    pub max_rounds: usize,
    /// Dimension after seeding, then after each round.
    pub dims: Vec<usize>,
    pub contains_one: bool,
    /// No new direction appeared in the last round.
    pub stabilized: bool,
    /// Number of operator images that left the box.
    pub overflow: u64,
    /// Stabilized with zero overflow: the span is invariant under every
    /// operator in the window.
    pub invariant_certificate: bool,
    #[serde(skip)]
    pub basis: SubspaceBasis,
}

impl fmt::Display for OrbitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite    orbit")?;
        writeln!(f, "param    window = {}", self.window)?;
        writeln!(f, "param    bounds = ({}, {})", self.bounds.0, self.bounds.1)?;
        writeln!(f, "param    rounds = {}", self.max_rounds)?;
        let dims: Vec<String> = self.dims.iter().map(ToString::to_string).collect();
        writeln!(f, "dims     {}", dims.join(" "))?;
        writeln!(f, "overflow {}", self.overflow)?;
        writeln!(f, "stable   {}", self.stabilized)?;
        writeln!(f, "certified-invariant {}", self.invariant_certificate)?;
        write!(f, "contains-one {}", self.contains_one)
    }
}

fn operators(window: i64) -> Vec<(bool, i64)> {
    (-window..=window).flat_map(|m| [(true, m), (false, m)]).collect()
}

fn apply(spec: &ModuleSpec, (is_l, m): (bool, i64), f: &BiPoly) -> BiPoly {
    if is_l { spec.act_l(m, f) } else { spec.act_w(m, f) }
}

/// Span of `seeds` closed under `L_m, W_m` (`|m| ≤ window`) within the box,
/// for at most `max_rounds` rounds. Each round applies every operator to the
/// directions found in the previous round.
pub fn orbit_closure(
    spec: &ModuleSpec,
    seeds: &[BiPoly],
    window: i64,
    bounds: (u32, u32),
    max_rounds: usize,
) -> Result<OrbitReport> {
    let mut basis = SubspaceBasis::new(bounds);
    let mut frontier = Vec::new();
    for seed in seeds {
        if seed.is_zero() {
            return Err(Error::InvalidSpec("seeds must be nonzero".into()));
        }
        if basis.coords(seed).is_none() {
            return Err(Error::InvalidSpec(format!("seed {seed} exceeds the bounds {bounds:?}")));
        }
        if basis.insert(seed) {
            frontier.push(seed.clone());
        }
    }
    let ops = operators(window);
    let mut dims = vec![basis.dim()];
    let mut overflow = 0u64;
    let mut stabilized = frontier.is_empty();
    for _ in 0..max_rounds {
        if stabilized {
            break;
        }
        let images: Vec<BiPoly> = frontier
            .par_iter()
            .flat_map_iter(|f| ops.iter().map(move |&op| apply(spec, op, f)))
            .collect();
        let mut next = Vec::new();
        for image in images {
            match basis.coords(&image) {
                None => overflow += 1,
                Some(v) => {
                    if basis.insert_coords(v) {
                        next.push(image);
                    }
                }
            }
        }
        dims.push(basis.dim());
        stabilized = next.is_empty();
        frontier = next;
    }
    Ok(OrbitReport {
        window,
        bounds,
        max_rounds,
        contains_one: basis.contains(&BiPoly::one()),
        invariant_certificate: stabilized && overflow == 0,
        stabilized,
        overflow,
        dims,
        basis,
    })
}

/// A condition on the exponents of `s^i t^j`, e.g. `j>=1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonomialPredicate {
    lhs: Exponent,
    op: Cmp,
    value: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Exponent {
    I,
    J,
    Total,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cmp {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
}

impl MonomialPredicate {
    pub fn holds(&self, i: u32, j: u32) -> bool {
        let x = match self.lhs {
            Exponent::I => i,
            Exponent::J => j,
            Exponent::Total => i + j,
        };
        match self.op {
            Cmp::Ge => x >= self.value,
            Cmp::Gt => x > self.value,
            Cmp::Le => x <= self.value,
            Cmp::Lt => x < self.value,
            Cmp::Eq => x == self.value,
        }
    }
}

impl FromStr for MonomialPredicate {
    type Err = Error;

    /// `LHS OP N` with `LHS ∈ {i, j, i+j}` and `OP ∈ {>=, >, <=, <, ==}`.
    fn from_str(text: &str) -> Result<MonomialPredicate> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (lhs, rest) = if let Some(r) = compact.strip_prefix("i+j") {
            (Exponent::Total, r)
        } else if let Some(r) = compact.strip_prefix('i') {
            (Exponent::I, r)
        } else if let Some(r) = compact.strip_prefix('j') {
            (Exponent::J, r)
        } else {
            return Err(Error::syntax(0, "expected i, j or i+j"));
        };
        let at = compact.len() - rest.len();
        let (op, num) = [(">=", Cmp::Ge), ("<=", Cmp::Le), ("==", Cmp::Eq), (">", Cmp::Gt), ("<", Cmp::Lt)]
            .into_iter()
            .find_map(|(tok, op)| rest.strip_prefix(tok).map(|n| (op, n)))
            .ok_or_else(|| Error::syntax(at, "expected >=, >, <=, < or =="))?;
        let value = num
            .parse()
            .map_err(|_| Error::syntax(compact.len() - num.len(), "expected a non-negative integer"))?;
        Ok(MonomialPredicate { lhs, op, value })
    }
}

impl fmt::Display for MonomialPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs = match self.lhs {
            Exponent::I => "i",
            Exponent::J => "j",
            Exponent::Total => "i+j",
        };
        let op = match self.op {
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
            Cmp::Le => "<=",
            Cmp::Lt => "<",
            Cmp::Eq => "==",
        };
        write!(f, "{lhs}{op}{}", self.value)
    }
}

/// An operator that maps a basis monomial out of the subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceViolation {
    /// `L:m` or `W:m`.
    pub operator: String,
    pub monomial: (u32, u32),
    pub image: BiPoly,
}

/// First operator `L_m, W_m` (`|m| ≤ window`) and basis monomial `s^i t^j`
/// of the box satisfying `pred` whose exact image has a monomial failing
/// `pred`.
pub fn find_invariance_violation(
    spec: &ModuleSpec,
    pred: &(dyn Fn(u32, u32) -> bool + Sync),
    window: i64,
    bounds: (u32, u32),
) -> Option<InvarianceViolation> {
    let monos: Vec<(u32, u32)> = (0..=bounds.0)
        .flat_map(|i| (0..=bounds.1).map(move |j| (i, j)))
        .filter(|&(i, j)| pred(i, j))
        .collect();
    let ops = operators(window);
    monos.par_iter().find_map_first(|&(i, j)| {
        let f = BiPoly::monomial(i, j, Scalar::one());
        ops.iter().find_map(|&op| {
            let image = apply(spec, op, &f);
            let escapes = image.terms().any(|((a, b), _)| !pred(a, b));
            escapes.then(|| InvarianceViolation {
                operator: format!("{}:{}", if op.0 { "L" } else { "W" }, op.1),
                monomial: (i, j),
                image,
            })
        })
    })
}

/// Whether the span of the box monomials satisfying `pred` is mapped into
/// the span of all monomials satisfying `pred`.
pub fn check_invariant_subspace(
    spec: &ModuleSpec,
    pred: &(dyn Fn(u32, u32) -> bool + Sync),
    window: i64,
    bounds: (u32, u32),
) -> bool {
    find_invariance_violation(spec, pred, window, bounds).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn p(s: &str) -> BiPoly {
        parse_poly(s).unwrap()
    }

    fn sc(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    fn phi(b: &str, lambda: &str, alpha: &str, h: &[&str]) -> ModuleSpec {
        ModuleSpec::phi(sc(b), sc(lambda), sc(alpha), h.iter().map(|c| sc(c)).collect(), false).unwrap()
    }

    fn t_multiples(_i: u32, j: u32) -> bool {
        j >= 1
    }

    #[test]
    fn row_reduction_is_exact() {
        let mut b = SubspaceBasis::new((2, 2));
        assert!(b.insert(&p("s + t")));
        assert!(b.insert(&p("s - t")));
        assert!(!b.insert(&p("3*s")));
        assert!(b.contains(&p("t")));
        assert!(!b.contains(&p("1")));
        assert!(!b.insert(&p("s^3")));
        assert_eq!(b.dim(), 2);
        assert_eq!(b.basis(), vec![p("t"), p("s")]);
    }

    #[test]
    fn alpha_nonzero_reaches_one_from_t() {
        let spec = phi("1", "2", "1", &[]);
        let r = orbit_closure(&spec, &[p("t")], 2, (6, 6), DEFAULT_ROUNDS).unwrap();
        assert!(r.contains_one);
        assert!(r.dims.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn one_then_fills_the_box() {
        let spec = phi("1", "2", "1", &[]);
        let r = orbit_closure(&spec, &[p("t")], 2, (4, 4), DEFAULT_ROUNDS).unwrap();
        assert!(r.contains_one);
        // L₀ and W₀ multiply by s and t, so 1 generates every box monomial.
        let mut span = r.basis.clone();
        for i in 0..=4 {
            for j in 0..=4 {
                let mut v = BiPoly::one();
                for _ in 0..j {
                    v = spec.act_w(0, &v);
                }
                for _ in 0..i {
                    v = spec.act_l(0, &v);
                }
                span.insert(&v);
            }
        }
        assert_eq!(span.dim(), 25);
    }

    #[test]
    fn alpha_zero_stays_in_t_multiples() {
        let spec = phi("1", "2", "0", &[]);
        let r = orbit_closure(&spec, &[p("t")], 2, (6, 6), DEFAULT_ROUNDS).unwrap();
        assert!(!r.contains_one);
        assert!(r.basis.basis().iter().all(|f| f.terms().all(|((_, j), _)| j >= 1)));
        let theta = ModuleSpec::theta(sc("2"), vec![sc("0"), sc("1")], false).unwrap();
        let r = orbit_closure(&theta, &[p("t")], 2, (6, 6), DEFAULT_ROUNDS).unwrap();
        assert!(!r.contains_one);
    }

    #[test]
    fn evaluation_at_zero_alpha_is_invariant_when_h_vanishes_there() {
        // For b = 1 and h_m(α) = 0, every image vanishes at (s,t) = (0,α),
        // so s never generates 1.
        let spec = phi("1", "2", "1", &[]);
        let at = |f: &BiPoly| f.eval(&Scalar::zero(), &Scalar::one());
        for f in [p("s"), p("s*t^2 - 3*s^2"), p("t - 1"), p("s^2*t")] {
            for m in -3..=3 {
                assert!(at(&spec.act_l(m, &f)).is_zero());
                assert!(at(&spec.act_w(m, &f)).is_zero());
            }
        }
        let r = orbit_closure(&spec, &[p("s")], DEFAULT_WINDOW, DEFAULT_BOUNDS, DEFAULT_ROUNDS).unwrap();
        assert!(!r.contains_one);
    }

    #[test]
    fn stabilized_without_overflow_certifies() {
        // Θ with r = 0 and N = 0: L_0, W_0 multiply by s and t, so the
        // closure of t³ stalls once every image leaves the box.
        let theta = ModuleSpec::theta(sc("2"), vec![], false).unwrap();
        let r = orbit_closure(&theta, &[p("t^3")], 0, (1, 4), 4).unwrap();
        assert!(r.stabilized);
        assert!(r.overflow > 0);
        assert!(!r.invariant_certificate);
    }

    #[test]
    fn invariant_subspace_examples() {
        for spec in [
            phi("2", "2", "0", &["1", "2"]),
            phi("2", "2", "5", &["0", "1"]),
            phi("1", "2", "0", &["1"]),
            phi("-1", "i", "0", &["0", "1"]),
            ModuleSpec::theta(sc("-1/2"), vec![sc("0"), sc("1"), sc("1")], true).unwrap(),
        ] {
            assert!(check_invariant_subspace(&spec, &t_multiples, 3, (5, 5)));
        }
        let spec = phi("1", "2", "1", &[]);
        let v = find_invariance_violation(&spec, &t_multiples, 3, (5, 5)).expect("not invariant");
        assert!(v.image.terms().any(|((_, j), _)| j == 0));
        assert_eq!(spec.act_l(1, &p("t")), p("2*s*t + 2*t - 2"));
    }

    #[test]
    fn predicate_text() {
        let pred: MonomialPredicate = "j>=1".parse().unwrap();
        assert!(pred.holds(3, 1) && !pred.holds(3, 0));
        let pred: MonomialPredicate = "i + j < 3".parse().unwrap();
        assert!(pred.holds(1, 1) && !pred.holds(2, 1));
        assert_eq!(pred.to_string(), "i+j<3");
        assert!(matches!("k>=1".parse::<MonomialPredicate>(), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!("j=>1".parse::<MonomialPredicate>(), Err(Error::Syntax { pos: 1, .. })));
    }
}
