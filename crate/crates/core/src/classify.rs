//! Finite-window classification of rank-one free modules.
//!
//! A module free of rank one over `U(ℂL₀ ⊕ ℂW₀)` is fixed by the data
//! `g_m = L_m·1`, `a_m = W_m·1` (a [`CandidateFamily`]). This module
//!
//! * evaluates the identities such data must satisfy ([`check_constraints`]),
//! * recovers canonical parameters `(λ, α, h)` from the four generators
//!   `a_{±1}, g_{±1}` or produces a violated identity as a certificate
//!   ([`solve_from_generators`]),
//! * decides isomorphism between canonical modules ([`isom_decide`]).
//!
//! Every statement is checked on the finite window `|m| ≤ N` only.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::algebra::classify_case;
use crate::error::{Error, Result};
use crate::poly::{BiPoly, UniPoly};
use crate::repmod::{f_identity_residue, q_poly, Family, GenericFamily, ModuleSpec};
use crate::report::{Failure, Report};
use crate::scalar::Scalar;

pub type CandidateFamily = GenericFamily;

/// Canonical parameters of `Φ(λ,α,h)` or `Θ(λ,r)`.
///
/// Trailing zero coefficients are dropped; `α` is `0` for `Θ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalParams {
    pub family: Family,
    pub lambda: Scalar,
    pub alpha: Scalar,
    pub coeffs: Vec<Scalar>,
}

impl CanonicalParams {
    pub fn new(family: Family, lambda: Scalar, alpha: Scalar, mut coeffs: Vec<Scalar>) -> CanonicalParams {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        CanonicalParams { family, lambda, alpha, coeffs }
    }

    pub fn from_spec(spec: &ModuleSpec) -> CanonicalParams {
        CanonicalParams::new(spec.family(), spec.lambda().clone(), spec.alpha().clone(), spec.coeffs().to_vec())
    }

    /// `α` replaced by `0` when `b ∉ {±1}`, where it does not enter the action.
    pub fn normalized(&self, b: &Scalar) -> CanonicalParams {
        let mut out = self.clone();
        if !is_pm_one(b) {
            out.alpha = Scalar::zero();
        }
        out
    }

    pub fn to_spec(&self, b: &Scalar, extension: bool) -> Result<ModuleSpec> {
        match self.family {
            Family::Phi => ModuleSpec::phi(b.clone(), self.lambda.clone(), self.alpha.clone(), self.coeffs.clone(), extension),
            Family::Theta => {
                if !b.is_one() {
                    return Err(Error::InvalidSpec(format!("theta requires b = 1, got {b}")));
                }
                ModuleSpec::theta(self.lambda.clone(), self.coeffs.clone(), extension)
            }
        }
    }
}

impl fmt::Display for CanonicalParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        match self.family {
            Family::Phi => write!(f, "phi(lambda={}, alpha={}, h=({}))", self.lambda, self.alpha, coeffs.join(", ")),
            Family::Theta => write!(f, "theta(lambda={}, r=({}))", self.lambda, coeffs.join(", ")),
        }
    }
}

/// A violated identity: its name, where it fails, and `lhs − rhs`.
///
/// Invariant: `residue` is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub constraint: String,
    pub indices: Vec<i64>,
    pub residue: BiPoly,
}

impl InfeasibilityCertificate {
    fn new(constraint: &str, indices: Vec<i64>, residue: BiPoly) -> InfeasibilityCertificate {
        debug_assert!(!residue.is_zero(), "certificate for {constraint} with zero residue");
        InfeasibilityCertificate { constraint: constraint.to_string(), indices, residue }
    }

    fn scalar(constraint: &str, indices: Vec<i64>, residue: Scalar) -> InfeasibilityCertificate {
        InfeasibilityCertificate::new(constraint, indices, BiPoly::constant(residue))
    }

    pub fn to_failure(&self) -> Failure {
        Failure::new(self.constraint.clone(), self.indices.clone(), &self.residue)
    }
}

impl fmt::Display for InfeasibilityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:?}: residue {}", self.constraint, self.indices, self.residue)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Outcome {
    Canonical(CanonicalParams),
    Infeasible(InfeasibilityCertificate),
}

impl Outcome {
    pub fn canonical(&self) -> Option<&CanonicalParams> {
        match self {
            Outcome::Canonical(c) => Some(c),
            Outcome::Infeasible(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&InfeasibilityCertificate> {
        match self {
            Outcome::Canonical(_) => None,
            Outcome::Infeasible(c) => Some(c),
        }
    }
}

fn is_pm_one(b: &Scalar) -> bool {
    *b == Scalar::one() || *b == Scalar::int(-1)
}

fn int(n: i64) -> Scalar {
    Scalar::int(n)
}

/// Counts checks and keeps the violated ones in order.
#[derive(Default)]
struct Checks {
    count: u64,
    found: Vec<InfeasibilityCertificate>,
}

impl Checks {
    fn check(&mut self, constraint: &str, indices: Vec<i64>, residue: BiPoly) {
        self.count += 1;
        if !residue.is_zero() {
            self.found.push(InfeasibilityCertificate::new(constraint, indices, residue));
        }
    }

    fn check_scalar(&mut self, constraint: &str, indices: Vec<i64>, residue: Scalar) {
        self.check(constraint, indices, BiPoly::constant(residue));
    }

    fn extend(&mut self, other: Checks) {
        self.count += other.count;
        self.found.extend(other.found);
    }

    fn first(self) -> Option<InfeasibilityCertificate> {
        self.found.into_iter().next()
    }
}

/// `[L_m, W_n]·1 = (a+n+bm) a_{m+n}`, as `L_m·a_n − W_n·g_m − (a+n+bm) a_{m+n}`.
fn lw_residue(fam: &CandidateFamily, m: i64, n: i64) -> Result<BiPoly> {
    let coef = fam.a() + &(&int(n) + &(fam.b() * &int(m)));
    let lhs = &fam.generic_act_l(m, fam.a_m(n)?)? - &fam.generic_act_w(n, fam.g_m(m)?)?;
    Ok(&lhs - &fam.a_m(m + n)?.scale(&coef))
}

/// `[L_m, L_n]·1 = (n−m) g_{m+n}`.
fn ll_residue(fam: &CandidateFamily, m: i64, n: i64) -> Result<BiPoly> {
    let lhs = &fam.generic_act_l(m, fam.g_m(n)?)? - &fam.generic_act_l(n, fam.g_m(m)?)?;
    Ok(&lhs - &fam.g_m(m + n)?.scale(&int(n - m)))
}

/// `W_m·a_n − W_n·a_m`.
fn ww_residue(fam: &CandidateFamily, m: i64, n: i64) -> Result<BiPoly> {
    Ok(&fam.generic_act_w(m, fam.a_m(n)?)? - &fam.generic_act_w(n, fam.a_m(m)?)?)
}

/// Index order used by every sweep: `0, 1, −1, 2, −2, …`.
fn indices(window: i64) -> Vec<i64> {
    std::iter::once(0).chain((1..=window).flat_map(|k| [k, -k])).collect()
}

fn pairs(window: i64) -> Vec<(i64, i64)> {
    let idx = indices(window);
    idx.iter()
        .flat_map(|&m| idx.iter().map(move |&n| (m, n)))
        .filter(|(m, n)| (m + n).abs() <= window)
        .collect()
}

fn w_commutation_checks(fam: &CandidateFamily) -> Checks {
    let mut checks = Checks::default();
    let w = fam.window();
    for m in -w..=w {
        for n in m + 1..=w {
            checks.check("w-commutation", vec![m, n], ww_residue(fam, m, n).expect("in window"));
        }
    }
    checks
}

/// `W_m·W_n·1 = W_n·W_m·1` for all in-window `m < n`.
pub fn check_w_commutation(fam: &CandidateFamily) -> Report {
    report_from("w-commutation", fam, w_commutation_checks(fam))
}

fn report_from(suite: &str, fam: &CandidateFamily, checks: Checks) -> Report {
    let mut report = Report::new(suite)
        .param("a", fam.a())
        .param("b", fam.b())
        .param("window", fam.window());
    report.checks = checks.count;
    report.failures = checks.found.iter().map(InfeasibilityCertificate::to_failure).collect();
    if !report.failures.is_empty() {
        report.status = crate::report::Status::Fail;
    }
    report
}

/// Scalar-shaped data `g_m = b_m s + d_m(t)`, `a_m = A_m t + B_m`.
struct Shaped {
    b_m: BTreeMap<i64, Scalar>,
    d_m: BTreeMap<i64, UniPoly>,
    a_m: BTreeMap<i64, UniPoly>,
}

impl Shaped {
    fn of(fam: &CandidateFamily) -> Option<Shaped> {
        let mut shaped = Shaped { b_m: BTreeMap::new(), d_m: BTreeMap::new(), a_m: BTreeMap::new() };
        for (&m, g) in fam.g_map() {
            if g.deg_s().unwrap_or(0) > 1 {
                return None;
            }
            let bm = g.coefficient_of_s_power(1);
            if !bm.is_constant() {
                return None;
            }
            shaped.b_m.insert(m, bm.coeff(0));
            shaped.d_m.insert(m, g.coefficient_of_s_power(0));
        }
        for (&m, a) in fam.a_map() {
            let a = a.as_t_poly()?;
            if a.degree().unwrap_or(0) > 1 {
                return None;
            }
            shaped.a_m.insert(m, a);
        }
        Some(shaped)
    }

    fn big_a(&self, m: i64) -> Scalar {
        self.a_m[&m].coeff(1)
    }

    fn big_b(&self, m: i64) -> Scalar {
        self.a_m[&m].coeff(0)
    }
}

/// Evaluates every identity a rank-one free module must satisfy on the
/// window of `fam`.
///
/// Always checked: `g-degree` (`deg_s g_m ≤ 1`), `w-commutation`,
/// `lw-bracket` and `ll-bracket` (the bracket relations on the generator
/// `1`). When the data has the shape `g_m = b_m s + d_m(t)` with scalar
/// `b_m` and `a_m = A_m t + B_m`, the derived scalar recursions
/// `b-multiplicative`, `a-recursion-A`, `a-recursion-B`, `d-recursion` are
/// evaluated too, and `f-recursion` when `a_m` has the canonical form.
pub fn check_constraints(fam: &CandidateFamily) -> Report {
    let mut report = report_from("check-constraints", fam, constraint_checks(fam));
    report.params.insert("case".into(), fam.algebra().case().to_string());
    report
}

fn constraint_checks(fam: &CandidateFamily) -> Checks {
    let w = fam.window();
    let mut checks = Checks::default();
    for m in indices(w) {
        let g = fam.g_m(m).expect("in window");
        let excess = g.s_degree_at_least(2);
        checks.check("g-degree", vec![m], excess);
    }
    checks.extend(w_commutation_checks(fam));

    let parts: Vec<Checks> = pairs(w)
        .par_iter()
        .map(|&(m, n)| {
            let mut c = Checks::default();
            c.check("lw-bracket", vec![m, n], lw_residue(fam, m, n).expect("in window"));
            if m < n {
                c.check("ll-bracket", vec![m, n], ll_residue(fam, m, n).expect("in window"));
            }
            c
        })
        .collect();
    // lw-bracket first (its m = 0 instances lead), then ll-bracket.
    let (mut lw, mut ll) = (Checks::default(), Checks::default());
    for part in parts {
        for cert in part.found {
            if cert.constraint == "lw-bracket" { lw.found.push(cert) } else { ll.found.push(cert) }
        }
        lw.count += part.count;
    }
    checks.extend(lw);
    checks.extend(ll);

    if fam.a().is_zero() && w >= 1 {
        if let Some(shaped) = Shaped::of(fam) {
            checks.extend(derived_checks(fam, &shaped));
        }
    }
    checks
}

fn derived_checks(fam: &CandidateFamily, sh: &Shaped) -> Checks {
    let b = fam.b();
    let w = fam.window();
    let mut checks = Checks::default();
    for (m, n) in pairs(w) {
        let (bm, bn) = (&sh.b_m[&m], &sh.b_m[&n]);
        checks.check_scalar("b-multiplicative", vec![m, n], int(n - m) * (&sh.b_m[&(m + n)] - &(bm * bn)));
    }
    let lambda = sh.b_m[&1].clone();
    if lambda.is_zero() {
        return checks;
    }
    let lp = |m: i64| lambda.pow(m).expect("nonzero");
    for (m, n) in pairs(w) {
        let c = &int(n) + &(b * &int(m));
        let bm_ = b * &int(m);
        let res_a = &(&c * &sh.big_a(m + n)) - &(&(&int(n) * &sh.big_a(n)) * &lp(m)) - bm_.clone() * sh.big_a(n) * sh.big_a(m);
        checks.check_scalar("a-recursion-A", vec![m, n], res_a);
        let res_b = &(&c * &sh.big_b(m + n)) - &(&(&int(n) * &sh.big_b(n)) * &lp(m)) - bm_ * sh.big_a(n) * sh.big_b(m);
        checks.check_scalar("a-recursion-B", vec![m, n], res_b);

        let (dm, dn) = (&sh.d_m[&m], &sh.d_m[&n]);
        let (am, an) = (&sh.a_m[&m], &sh.a_m[&n]);
        let mut res_d = dn.scale(&(&int(n) * &sh.b_m[&m]));
        res_d = &res_d - &dm.scale(&(&int(m) * &sh.b_m[&n]));
        res_d = &res_d - &(&dm.derivative() * an).scale(&(b * &int(n)));
        res_d = &res_d + &(&dn.derivative() * am).scale(&(b * &int(m)));
        res_d = &res_d - &sh.d_m[&(m + n)].scale(&int(n - m));
        checks.check("d-recursion", vec![m, n], BiPoly::from_t(&res_d));
    }

    let alpha = if is_pm_one(b) { -(&sh.big_b(1) * &lambda.inv().expect("nonzero")) } else { Scalar::zero() };
    let canonical = (-w..=w).all(|m| {
        sh.a_m[&m] == crate::repmod::w_factor(m, &alpha, b).scale(&lp(m))
    });
    if canonical {
        let f: BTreeMap<i64, UniPoly> = sh.d_m.iter().map(|(&m, d)| (m, d.scale(&lp(-m)))).collect();
        for (m, n) in pairs(w) {
            let res = f_identity_residue(|j| f[&j].clone(), m, n, &alpha, b);
            checks.check("f-recursion", vec![m, n], BiPoly::from_t(&res));
        }
    }
    checks
}

/// The generator data `a_{±1}, g_{±1}` together with `(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seeds {
    pub a: Scalar,
    pub b: Scalar,
    pub a_plus: BiPoly,
    pub a_minus: BiPoly,
    pub g_plus: BiPoly,
    pub g_minus: BiPoly,
}

impl Seeds {
    pub fn from_family(fam: &CandidateFamily) -> Result<Seeds> {
        Ok(Seeds {
            a: fam.a().clone(),
            b: fam.b().clone(),
            a_plus: fam.a_m(1)?.clone(),
            a_minus: fam.a_m(-1)?.clone(),
            g_plus: fam.g_m(1)?.clone(),
            g_minus: fam.g_m(-1)?.clone(),
        })
    }

    pub fn from_spec(spec: &ModuleSpec) -> Seeds {
        Seeds::from_family(&GenericFamily::from_spec(spec, 1)).expect("window 1")
    }

    /// The window-one family `{a_{-1}, t, a_1}`, `{g_{-1}, s, g_1}`.
    pub fn family(&self) -> CandidateFamily {
        let algebra = classify_case(&self.a, &self.b, false);
        GenericFamily::new(
            algebra,
            1,
            [(-1, self.a_minus.clone()), (0, BiPoly::t()), (1, self.a_plus.clone())].into(),
            [(-1, self.g_minus.clone()), (0, BiPoly::s()), (1, self.g_plus.clone())].into(),
        )
        .expect("complete window-one data")
    }
}

/// Recovers `(λ, α, h)` from the four generators, propagating the scalar
/// recursions over `|m| ≤ window`, or returns the first violated identity.
pub fn solve_from_generators(seeds: &Seeds, window: i64) -> Outcome {
    match solve(seeds, window.max(2)) {
        Ok(c) => Outcome::Canonical(c),
        Err(cert) => Outcome::Infeasible(cert),
    }
}

type Solve<T> = std::result::Result<T, InfeasibilityCertificate>;

fn solve(seeds: &Seeds, window: i64) -> Solve<CanonicalParams> {
    let fam = seeds.family();
    let b = &seeds.b;

    // W_0 and L_0 commute only when a = 0; the m = 0 bracket exposes a·t·∂_t a_n.
    if !seeds.a.is_zero() {
        let cert = [1, -1, 0]
            .into_iter()
            .map(|n| (n, lw_residue(&fam, 0, n).expect("in window")))
            .find(|(_, r)| !r.is_zero())
            .map(|(n, r)| InfeasibilityCertificate::new("lw-bracket", vec![0, n], r))
            .expect("n = 0 always yields a·t");
        return Err(cert);
    }

    if let Some(cert) = constraint_checks(&fam).first() {
        return Err(cert);
    }

    let shape = |name: &str, m: i64, extra: BiPoly| -> Solve<()> {
        if extra.is_zero() { Ok(()) } else { Err(InfeasibilityCertificate::new(name, vec![m], extra)) }
    };
    let mut a_seed = BTreeMap::new();
    let mut d_seed = BTreeMap::new();
    let mut b_seed = BTreeMap::new();
    for (m, a, g) in [(1, &seeds.a_plus, &seeds.g_plus), (-1, &seeds.a_minus, &seeds.g_minus)] {
        shape("a-l0-free", m, a.s_degree_at_least(1))?;
        let a = a.as_t_poly().expect("checked");
        shape("a-degree", m, BiPoly::from_t(&a.truncate_below(2)))?;
        let bm = g.coefficient_of_s_power(1);
        shape("b-constant", m, BiPoly::from_t(&bm.truncate_below(1)))?;
        a_seed.insert(m, a);
        b_seed.insert(m, bm.coeff(0));
        d_seed.insert(m, g.coefficient_of_s_power(0));
    }
    let lambda = b_seed[&1].clone();
    let product = &lambda * &b_seed[&-1];
    if lambda.is_zero() || !product.is_one() {
        return Err(InfeasibilityCertificate::scalar("b-multiplicative", vec![1, -1], &product - &Scalar::one()));
    }
    let lp = |m: i64| lambda.pow(m).expect("nonzero");

    if a_seed[&1].is_zero() || a_seed[&-1].is_zero() {
        return solve_theta(seeds, &lambda, &a_seed, &d_seed);
    }

    let big_a = |m: i64| a_seed[&m].coeff(1);
    let big_b = |m: i64| a_seed[&m].coeff(0);
    check_k_branch(b, &lambda, &big_a(1), &big_a(-1))?;

    let a_vals = propagate(window, b, &lambda, (Scalar::one(), big_a(1), big_a(-1)), (&big_a(1), &big_a(-1)))?;
    let b_vals = propagate(window, b, &lambda, (Scalar::zero(), big_b(1), big_b(-1)), (&big_a(1), &big_a(-1)))?;
    for (m, n) in pairs(window) {
        let c = &int(n) + &(b * &int(m));
        let bm = b * &int(m);
        let ra = &c * &a_vals[&(m + n)] - &int(n) * &a_vals[&n] * lp(m) - &bm * &a_vals[&n] * &a_vals[&m];
        if !ra.is_zero() {
            return Err(InfeasibilityCertificate::scalar("a-recursion-A", vec![m, n], ra));
        }
        let rb = &c * &b_vals[&(m + n)] - &int(n) * &b_vals[&n] * lp(m) - &bm * &a_vals[&n] * &b_vals[&m];
        if !rb.is_zero() {
            return Err(InfeasibilityCertificate::scalar("a-recursion-B", vec![m, n], rb));
        }
    }

    let alpha = if is_pm_one(b) { -(&big_b(1) / &lambda) } else { Scalar::zero() };
    let f: BTreeMap<i64, UniPoly> = [(-1, d_seed[&-1].scale(&lp(1))), (0, UniPoly::zero()), (1, d_seed[&1].scale(&lp(-1)))].into();
    let coeffs = extract_h_coeffs(&f, &alpha, b)?;
    let params = CanonicalParams::new(Family::Phi, lambda, alpha, coeffs);
    compare_seeds(seeds, &params)?;
    Ok(params)
}

fn solve_theta(
    seeds: &Seeds,
    lambda: &Scalar,
    a_seed: &BTreeMap<i64, UniPoly>,
    d_seed: &BTreeMap<i64, UniPoly>,
) -> Solve<CanonicalParams> {
    // Either a_m vanishes for every m ≠ 0 or for none.
    for m in [1, -1] {
        if !a_seed[&m].is_zero() {
            return Err(InfeasibilityCertificate::new("a-vanishing", vec![m], BiPoly::from_t(&a_seed[&m])));
        }
    }
    if !seeds.b.is_one() {
        let res = lw_residue(&seeds.family(), 1, -1).expect("in window");
        return Err(InfeasibilityCertificate::new("lw-bracket", vec![1, -1], res));
    }
    let f: BTreeMap<i64, UniPoly> = [
        (-1, d_seed[&-1].scale(lambda)),
        (0, UniPoly::zero()),
        (1, d_seed[&1].scale(&lambda.inv().expect("nonzero"))),
    ]
    .into();
    let coeffs = extract_h_coeffs(&f, &Scalar::zero(), &Scalar::one())?;
    let params = CanonicalParams::new(Family::Theta, lambda.clone(), Scalar::zero(), coeffs);
    compare_seeds(seeds, &params)?;
    Ok(params)
}

/// `A_{±1} = k λ^{±1}` with `k ≠ 1` contradicts the `(1,1)` and `(2,−1)`
/// instances of the `A` recursion.
fn check_k_branch(b: &Scalar, lambda: &Scalar, a1: &Scalar, am1: &Scalar) -> Solve<()> {
    if a1 == lambda {
        return Ok(());
    }
    let rhs_11 = lambda * a1 + b * &(a1 * a1);
    let one_plus_b = b + &Scalar::one();
    if one_plus_b.is_zero() {
        // (1+b) A_2 = λA_1 + bA_1² with vanishing left side
        return Err(InfeasibilityCertificate::scalar("k-branch", vec![1, 1], -rhs_11));
    }
    let a2 = &rhs_11 / &one_plus_b;
    // (−1+2b)A_1 = −A_{−1}λ² + 2b A_{−1} A_2
    let two_b = b * &int(2);
    let res = &(&two_b - &Scalar::one()) * a1 - (-(am1 * &(lambda * lambda)) + &two_b * am1 * &a2);
    if !res.is_zero() {
        return Err(InfeasibilityCertificate::scalar("k-branch", vec![2, -1], res));
    }
    Ok(())
}

/// Solves `(n+bm) X_{m+n} = n X_n λ^m + bm A_n X_m` for `n = ±1` outward
/// from `X_0, X_{±1}`. At an index where the forward coefficient vanishes the
/// opposite-direction relation is solved for the unknown instead.
fn propagate(
    window: i64,
    b: &Scalar,
    lambda: &Scalar,
    (x0, x1, xm1): (Scalar, Scalar, Scalar),
    (a1, am1): (&Scalar, &Scalar),
) -> Solve<BTreeMap<i64, Scalar>> {
    let lp = |m: i64| lambda.pow(m).expect("nonzero");
    let mut x: BTreeMap<i64, Scalar> = [(0, x0), (1, x1.clone()), (-1, xm1.clone())].into();
    let degenerate = |j: i64| InfeasibilityCertificate::scalar("recursion-degenerate", vec![j], Scalar::one());

    for j in 2..=window {
        let m = j - 1;
        let up = &Scalar::one() + &(b * &int(m));
        let val = if !up.is_zero() {
            (&x1 * &lp(m) + &(b * &int(m)) * a1 * &x[&m]) / up
        } else {
            // n = −1 at m = j: (−1+bj) X_{j−1} = −X_{−1}λ^j + bj A_{−1} X_j
            let c = &(b * &int(j)) * am1;
            if c.is_zero() {
                return Err(degenerate(j));
            }
            (&(&(b * &int(j)) - &Scalar::one()) * &x[&m] + &xm1 * &lp(j)) / c
        };
        x.insert(j, val);
    }
    for j in (-window..=-2).rev() {
        let m = j + 1;
        let down = &(b * &int(m)) - &Scalar::one();
        let val = if !down.is_zero() {
            (-(&xm1 * &lp(m)) + &(b * &int(m)) * am1 * &x[&m]) / down
        } else {
            // n = 1 at m = j: (1+bj) X_{j+1} = X_1 λ^j + bj A_1 X_j
            let c = &(b * &int(j)) * a1;
            if c.is_zero() {
                return Err(degenerate(j));
            }
            (&(&Scalar::one() + &(b * &int(j))) * &x[&m] - &x1 * &lp(j)) / c
        };
        x.insert(j, val);
    }
    Ok(x)
}

/// The window-one data of the recovered module must reproduce the seeds.
fn compare_seeds(seeds: &Seeds, params: &CanonicalParams) -> Solve<()> {
    let spec = params.to_spec(&seeds.b, false).expect("recovered parameters are valid");
    let rebuilt = Seeds::from_spec(&spec);
    for (m, given, ours) in [
        (1, &seeds.a_plus, &rebuilt.a_plus),
        (-1, &seeds.a_minus, &rebuilt.a_minus),
        (1, &seeds.g_plus, &rebuilt.g_plus),
        (-1, &seeds.g_minus, &rebuilt.g_minus),
    ] {
        let diff = given - ours;
        if !diff.is_zero() {
            return Err(InfeasibilityCertificate::new("seed-mismatch", vec![m], diff));
        }
    }
    Ok(())
}

/// Writes `F_n = Σ_k h⁽ᵏ⁾ q_{n,k;α}` by peeling the top `t`-degree: `h⁽ᵏ⁾`
/// is the `t^k` coefficient of `F_1`, and every `F_n` must have `t^k`
/// coefficient `n·h⁽ᵏ⁾` (constraint `leading-coefficient`).
///
/// Indices are visited as `0, 1, 2, …, −1, −2, …`; `F_1` must be present.
pub fn extract_h_coeffs(
    f: &BTreeMap<i64, UniPoly>,
    alpha: &Scalar,
    b: &Scalar,
) -> std::result::Result<Vec<Scalar>, InfeasibilityCertificate> {
    assert!(f.contains_key(&1), "F_1 is required");
    let order: Vec<i64> = f.range(0..).map(|(n, _)| *n).chain(f.range(..0).rev().map(|(n, _)| *n)).collect();
    let top = f.values().filter_map(UniPoly::degree).max();
    let Some(top) = top else {
        return Ok(Vec::new());
    };
    let mut rest = f.clone();
    let mut coeffs = vec![Scalar::zero(); top as usize + 1];
    for k in (0..=top).rev() {
        let h = rest[&1].coeff(k);
        for &n in &order {
            let diff = &rest[&n].coeff(k) - &(&int(n) * &h);
            if !diff.is_zero() {
                return Err(InfeasibilityCertificate::new(
                    "leading-coefficient",
                    vec![n, k as i64],
                    BiPoly::monomial(0, k, diff),
                ));
            }
        }
        if !h.is_zero() {
            for (&n, fn_) in rest.iter_mut() {
                *fn_ = &*fn_ - &q_poly(n, k, alpha, b).scale(&h);
            }
        }
        coeffs[k as usize] = h;
    }
    debug_assert!(rest.values().all(UniPoly::is_zero));
    while coeffs.last().is_some_and(Scalar::is_zero) {
        coeffs.pop();
    }
    Ok(coeffs)
}

/// Full-window classification: every identity on the window, then the
/// generator solve, then agreement of the whole window with the recovered
/// module (constraint `window-mismatch`).
pub fn classify(fam: &CandidateFamily) -> Outcome {
    if let Some(cert) = constraint_checks(fam).first() {
        return Outcome::Infeasible(cert);
    }
    let seeds = match Seeds::from_family(fam) {
        Ok(s) => s,
        Err(_) => {
            return Outcome::Infeasible(InfeasibilityCertificate::scalar("window-too-small", vec![fam.window()], Scalar::one()))
        }
    };
    let params = match solve_from_generators(&seeds, fam.window()) {
        Outcome::Canonical(p) => p,
        infeasible => return infeasible,
    };
    let spec = params.to_spec(fam.b(), false).expect("recovered parameters are valid");
    let rebuilt = GenericFamily::from_spec(&spec, fam.window());
    for m in indices(fam.window()) {
        for (given, ours) in [
            (fam.a_m(m).expect("in window"), rebuilt.a_m(m).expect("in window")),
            (fam.g_m(m).expect("in window"), rebuilt.g_m(m).expect("in window")),
        ] {
            let diff = given - ours;
            if !diff.is_zero() {
                return Outcome::Infeasible(InfeasibilityCertificate::new("window-mismatch", vec![m], diff));
            }
        }
    }
    Outcome::Canonical(params)
}

/// Whether the modules with parameters `p` and `q` over `W(0,b)` are
/// isomorphic: equal parameters, with `α` ignored when `b ∉ {±1}`.
pub fn isom_decide(p: &CanonicalParams, q: &CanonicalParams, b: &Scalar) -> Result<bool> {
    if p.family != q.family {
        return Err(Error::Incomparable(format!(
            "{} and {} belong to different families",
            p.family.name(),
            q.family.name()
        )));
    }
    let norm = |c: &CanonicalParams| CanonicalParams::new(c.family, c.lambda.clone(), c.alpha.clone(), c.coeffs.clone()).normalized(b);
    Ok(norm(p) == norm(q))
}

/// [`isom_decide`] on two specs, which must share `b`.
pub fn isom_decide_specs(p: &ModuleSpec, q: &ModuleSpec) -> Result<bool> {
    if p.b() != q.b() {
        return Err(Error::Incomparable(format!("b = {} and b = {} differ", p.b(), q.b())));
    }
    isom_decide(&CanonicalParams::from_spec(p), &CanonicalParams::from_spec(q), p.b())
}
