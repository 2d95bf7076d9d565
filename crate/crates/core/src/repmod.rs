//! Rank-one free modules on `ℂ[s,t]`, where `s` stands for `L₀` and `t`
//! for `W₀`.
//!
//! * [`ModuleSpec`] describes the two explicit families `Φ(λ,α,h)` and
//!   `Θ(λ,r)` over `W(0,b)` or its extension.
//! * [`GenericFamily`] holds arbitrary finite-window data `g_m = L_m·1`,
//!   `a_m = W_m·1` and acts by the general free-module formulas.
//!
//! Both implement [`Representation`], which [`verify_module`] checks
//! against the bracket tables, central symbols included.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::algebra::{bracket, classify_case, AlgElement, AlgebraParams, BasisSymbol, Case};
use crate::error::{Error, Result};
use crate::poly::{divided_difference, BiPoly, UniPoly};
use crate::report::{Failure, Report};
use crate::scalar::Scalar;

fn is_int(x: &Scalar, n: i64) -> bool {
    *x == Scalar::int(n)
}

/// `q_{n,k;α}(t) = n t^k − δ_{b,−1} n(n−1) α DD_k − δ_{b,1} n α DD_k`, where
/// `DD_k = (t^k − α^k)/(t − α)`.
pub fn q_poly(n: i64, k: u32, alpha: &Scalar, b: &Scalar) -> UniPoly {
    let mut q = UniPoly::monomial(k, Scalar::int(n));
    let correction = if is_int(b, -1) {
        Scalar::int(n) * Scalar::int(n - 1) * alpha
    } else if is_int(b, 1) {
        Scalar::int(n) * alpha
    } else {
        return q;
    };
    if !correction.is_zero() {
        q = &q - &divided_difference(k, alpha).scale(&correction);
    }
    q
}

/// `t − δ_{b,−1} m α − δ_{b,1} (1 − δ_{m,0}) α`, the factor carried by
/// `W_m` in `Φ`.
pub fn w_factor(m: i64, alpha: &Scalar, b: &Scalar) -> UniPoly {
    let shift = if is_int(b, -1) {
        Scalar::int(m) * alpha
    } else if is_int(b, 1) && m != 0 {
        alpha.clone()
    } else {
        Scalar::zero()
    };
    UniPoly::linear_shift(&shift)
}

/// A sequence `h_n = Σ_i h⁽ⁱ⁾ q_{n,i;α}` with finitely many coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HSeq {
    pub b: Scalar,
    pub alpha: Scalar,
    pub coeffs: Vec<Scalar>,
}

impl HSeq {
    pub fn new(b: Scalar, alpha: Scalar, coeffs: Vec<Scalar>) -> HSeq {
        HSeq { b, alpha, coeffs }
    }

    pub fn h_of_n(&self, n: i64) -> UniPoly {
        let mut out = UniPoly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &q_poly(n, k as u32, &self.alpha, &self.b).scale(c);
            }
        }
        out
    }

    /// `n h_n − m h_m − (n−m) h_{m+n}`, which vanishes for `b ∉ {±1}`.
    pub fn cocycle_residue(&self, m: i64, n: i64) -> UniPoly {
        let lhs = &self.h_of_n(n).scale(&Scalar::int(n)) - &self.h_of_n(m).scale(&Scalar::int(m));
        &lhs - &self.h_of_n(m + n).scale(&Scalar::int(n - m))
    }
}

/// Residue of the identity satisfied by `F_n = λ^{−n} d_n`:
///
/// `(n−m)F_{m+n} − nF_n + mF_m + nbF_m′·w_n − mbF_n′·w_m`
///
/// with `w_n` from [`w_factor`]. `f` must be defined at `m`, `n` and `m+n`.
pub fn f_identity_residue(
    f: impl Fn(i64) -> UniPoly,
    m: i64,
    n: i64,
    alpha: &Scalar,
    b: &Scalar,
) -> UniPoly {
    let (fm, fn_, fmn) = (f(m), f(n), f(m + n));
    let bn = b * &Scalar::int(n);
    let bm = b * &Scalar::int(m);
    let mut r = fmn.scale(&Scalar::int(n - m));
    r = &r - &fn_.scale(&Scalar::int(n));
    r = &r + &fm.scale(&Scalar::int(m));
    r = &r + &(&fm.derivative() * &w_factor(n, alpha, b)).scale(&bn);
    &r - &(&fn_.derivative() * &w_factor(m, alpha, b)).scale(&bm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Phi,
    Theta,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Phi => "phi",
            Family::Theta => "theta",
        }
    }
}

/// Parameters of `Φ(λ,α,h)` or `Θ(λ,r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleSpec {
    family: Family,
    algebra: AlgebraParams,
    lambda: Scalar,
    seq: HSeq,
}

impl ModuleSpec {
    /// `Φ(λ,α,h)` over `W(0,b)`, or over `Vir(0,b)` when `extension` is set.
    pub fn phi(b: Scalar, lambda: Scalar, alpha: Scalar, coeffs: Vec<Scalar>, extension: bool) -> Result<ModuleSpec> {
        if lambda.is_zero() {
            return Err(Error::InvalidSpec("lambda must be nonzero".into()));
        }
        Ok(ModuleSpec {
            family: Family::Phi,
            algebra: classify_case(&Scalar::zero(), &b, extension),
            lambda,
            seq: HSeq::new(b, alpha, coeffs),
        })
    }

    /// `Θ(λ,r)` over `W(0,1)` or `Vir(0,1)`; `r_n = Σ_i r⁽ⁱ⁾ n tⁱ`.
    pub fn theta(lambda: Scalar, coeffs: Vec<Scalar>, extension: bool) -> Result<ModuleSpec> {
        if lambda.is_zero() {
            return Err(Error::InvalidSpec("lambda must be nonzero".into()));
        }
        Ok(ModuleSpec {
            family: Family::Theta,
            algebra: classify_case(&Scalar::zero(), &Scalar::one(), extension),
            lambda,
            seq: HSeq::new(Scalar::one(), Scalar::zero(), coeffs),
        })
    }

    /// Checks `(family, a, b, case)` against the constraints of the families.
    pub fn with_algebra(family: Family, algebra: AlgebraParams, lambda: Scalar, alpha: Scalar, coeffs: Vec<Scalar>) -> Result<ModuleSpec> {
        if !algebra.a().is_zero() {
            return Err(Error::InvalidSpec(format!("a must be 0, got {}", algebra.a())));
        }
        let extension = algebra.case() != Case::WOnly;
        match family {
            Family::Phi => ModuleSpec::phi(algebra.b().clone(), lambda, alpha, coeffs, extension),
            Family::Theta => {
                if !algebra.b().is_one() {
                    return Err(Error::InvalidSpec(format!("theta requires b = 1, got {}", algebra.b())));
                }
                if !alpha.is_zero() {
                    return Err(Error::InvalidSpec("theta takes no alpha".into()));
                }
                ModuleSpec::theta(lambda, coeffs, extension)
            }
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn algebra(&self) -> &AlgebraParams {
        &self.algebra
    }

    pub fn b(&self) -> &Scalar {
        self.algebra.b()
    }

    pub fn lambda(&self) -> &Scalar {
        &self.lambda
    }

    /// Always `0` for `Θ`.
    pub fn alpha(&self) -> &Scalar {
        &self.seq.alpha
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.seq.coeffs
    }

    pub fn seq(&self) -> &HSeq {
        &self.seq
    }

    fn lambda_pow(&self, m: i64) -> Scalar {
        self.lambda.pow(m).expect("lambda is nonzero")
    }

    /// `g_m = L_m·1`, namely `λ^m (s + h_m(t))`.
    pub fn g(&self, m: i64) -> BiPoly {
        (&BiPoly::s() + &BiPoly::from_t(&self.seq.h_of_n(m))).scale(&self.lambda_pow(m))
    }

    /// `a_m = W_m·1`: `λ^m w_m(t)` for `Φ`, `δ_{m,0} t` for `Θ`.
    pub fn a_poly(&self, m: i64) -> UniPoly {
        match self.family {
            Family::Phi => w_factor(m, &self.seq.alpha, self.b()).scale(&self.lambda_pow(m)),
            Family::Theta if m == 0 => UniPoly::var(),
            Family::Theta => UniPoly::zero(),
        }
    }

    /// `L_m · f`.
    pub fn act_l(&self, m: i64, f: &BiPoly) -> BiPoly {
        let shifted = f.shift_s(&Scalar::int(m));
        let mut out = &shifted * &(&BiPoly::s() + &BiPoly::from_t(&self.seq.h_of_n(m)));
        if self.family == Family::Phi {
            let bm = self.b() * &Scalar::int(m);
            if !bm.is_zero() {
                let w = w_factor(m, &self.seq.alpha, self.b());
                out = &out + &shifted.partial_t().mul_uni_t(&w).scale(&bm);
            }
        }
        out.scale(&self.lambda_pow(m))
    }

    /// `W_m · f`.
    pub fn act_w(&self, m: i64, f: &BiPoly) -> BiPoly {
        match self.family {
            Family::Phi => {
                let w = w_factor(m, &self.seq.alpha, self.b());
                f.shift_s(&Scalar::int(m)).mul_uni_t(&w).scale(&self.lambda_pow(m))
            }
            Family::Theta if m == 0 => f.mul_uni_t(&UniPoly::var()),
            Family::Theta => BiPoly::zero(),
        }
    }

    /// `C_i · f = 0`, for every central index of the case.
    pub fn act_c(&self, i: u8, _f: &BiPoly) -> Result<BiPoly> {
        self.algebra.check_symbol(BasisSymbol::C(i))?;
        Ok(BiPoly::zero())
    }
}

/// A module structure on `ℂ[s,t]`, possibly defined only on a window of
/// indices.
pub trait Representation: Sync {
    fn algebra(&self) -> &AlgebraParams;

    /// Largest `|m|` for which `L_m`, `W_m` act; `None` when unbounded.
    fn window(&self) -> Option<i64>;

    fn act_symbol(&self, x: BasisSymbol, f: &BiPoly) -> Result<BiPoly>;
}

impl Representation for ModuleSpec {
    fn algebra(&self) -> &AlgebraParams {
        &self.algebra
    }

    fn window(&self) -> Option<i64> {
        None
    }

    fn act_symbol(&self, x: BasisSymbol, f: &BiPoly) -> Result<BiPoly> {
        match x {
            BasisSymbol::L(m) => Ok(self.act_l(m, f)),
            BasisSymbol::W(m) => Ok(self.act_w(m, f)),
            BasisSymbol::C(i) => self.act_c(i, f),
        }
    }
}

/// Linear extension of [`Representation::act_symbol`].
pub fn act_element<R: Representation + ?Sized>(rep: &R, x: &AlgElement, f: &BiPoly) -> Result<BiPoly> {
    let mut out = BiPoly::zero();
    for (sym, c) in x.terms() {
        out = &out + &rep.act_symbol(sym, f)?.scale(c);
    }
    Ok(out)
}

/// Window data `g_m = L_m·1`, `a_m = W_m·1` for `|m| ≤ window`, acting by
///
/// * `L_m · u = u(s−m, t) g_m + (a+bm) ∂_t(u(s−m, t)) a_m`
/// * `W_m · u = u(s−a−m, t) a_m`
///
/// Invariant: `a_0 = t` and `g_0 = s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericFamily {
    algebra: AlgebraParams,
    window: i64,
    a_m: BTreeMap<i64, BiPoly>,
    g_m: BTreeMap<i64, BiPoly>,
}

impl GenericFamily {
    /// Requires `a_m`, `g_m` for every `|m| ≤ window` and nothing else.
    pub fn new(
        algebra: AlgebraParams,
        window: i64,
        a_m: BTreeMap<i64, BiPoly>,
        g_m: BTreeMap<i64, BiPoly>,
    ) -> Result<GenericFamily> {
        if window < 0 {
            return Err(Error::InvalidSpec("window must be non-negative".into()));
        }
        for (name, map) in [("a", &a_m), ("g", &g_m)] {
            if let Some(m) = (-window..=window).find(|m| !map.contains_key(m)) {
                return Err(Error::InvalidSpec(format!("{name}_{m} is missing")));
            }
            if let Some(m) = map.keys().find(|m| m.abs() > window) {
                return Err(Error::OutsideWindow { index: *m, window });
            }
        }
        if a_m[&0] != BiPoly::t() {
            return Err(Error::InvalidSpec(format!("a_0 must be t, got {}", a_m[&0])));
        }
        if g_m[&0] != BiPoly::s() {
            return Err(Error::InvalidSpec(format!("g_0 must be s, got {}", g_m[&0])));
        }
        Ok(GenericFamily { algebra, window, a_m, g_m })
    }

    /// The data `g_m = λ^m(s + h_m)`, `a_m` of a [`ModuleSpec`] on `|m| ≤ window`.
    pub fn from_spec(spec: &ModuleSpec, window: i64) -> GenericFamily {
        let range = -window..=window;
        GenericFamily {
            algebra: spec.algebra.clone(),
            window,
            a_m: range.clone().map(|m| (m, BiPoly::from_t(&spec.a_poly(m)))).collect(),
            g_m: range.map(|m| (m, spec.g(m))).collect(),
        }
    }

    pub fn algebra(&self) -> &AlgebraParams {
        &self.algebra
    }

    pub fn a(&self) -> &Scalar {
        self.algebra.a()
    }

    pub fn b(&self) -> &Scalar {
        self.algebra.b()
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn a_m(&self, m: i64) -> Result<&BiPoly> {
        self.a_m.get(&m).ok_or(Error::OutsideWindow { index: m, window: self.window })
    }

    pub fn g_m(&self, m: i64) -> Result<&BiPoly> {
        self.g_m.get(&m).ok_or(Error::OutsideWindow { index: m, window: self.window })
    }

    pub fn a_map(&self) -> &BTreeMap<i64, BiPoly> {
        &self.a_m
    }

    pub fn g_map(&self) -> &BTreeMap<i64, BiPoly> {
        &self.g_m
    }

    /// Replaces `a_m`; `m = 0` and out-of-window indices are refused.
    pub fn set_a(&mut self, m: i64, p: BiPoly) -> Result<()> {
        self.check_settable(m)?;
        self.a_m.insert(m, p);
        Ok(())
    }

    /// Replaces `g_m`; `m = 0` and out-of-window indices are refused.
    pub fn set_g(&mut self, m: i64, p: BiPoly) -> Result<()> {
        self.check_settable(m)?;
        self.g_m.insert(m, p);
        Ok(())
    }

    fn check_settable(&self, m: i64) -> Result<()> {
        if m.abs() > self.window {
            return Err(Error::OutsideWindow { index: m, window: self.window });
        }
        if m == 0 {
            return Err(Error::InvalidSpec("a_0 and g_0 are fixed".into()));
        }
        Ok(())
    }

    /// The same data restricted to `|m| ≤ window`.
    pub fn restrict(&self, window: i64) -> GenericFamily {
        let keep = |map: &BTreeMap<i64, BiPoly>| {
            map.range(-window..=window).map(|(m, p)| (*m, p.clone())).collect()
        };
        GenericFamily {
            algebra: self.algebra.clone(),
            window: window.min(self.window),
            a_m: keep(&self.a_m),
            g_m: keep(&self.g_m),
        }
    }

    pub fn generic_act_l(&self, m: i64, u: &BiPoly) -> Result<BiPoly> {
        let g = self.g_m(m)?;
        let a = self.a_m(m)?;
        let shifted = u.shift_s(&Scalar::int(m));
        let mut out = &shifted * g;
        let c = self.a() + &(self.b() * &Scalar::int(m));
        if !c.is_zero() {
            out = &out + &(&shifted.partial_t() * a).scale(&c);
        }
        Ok(out)
    }

    pub fn generic_act_w(&self, m: i64, u: &BiPoly) -> Result<BiPoly> {
        let a = self.a_m(m)?;
        Ok(&u.shift_s(&(self.a() + &Scalar::int(m))) * a)
    }
}

impl Representation for GenericFamily {
    fn algebra(&self) -> &AlgebraParams {
        &self.algebra
    }

    fn window(&self) -> Option<i64> {
        Some(self.window)
    }

    fn act_symbol(&self, x: BasisSymbol, f: &BiPoly) -> Result<BiPoly> {
        match x {
            BasisSymbol::L(m) => self.generic_act_l(m, f),
            BasisSymbol::W(m) => self.generic_act_w(m, f),
            BasisSymbol::C(_) => {
                self.algebra.check_symbol(x)?;
                Ok(BiPoly::zero())
            }
        }
    }
}

/// Monomials `s^i t^j` with `i + j ≤ degree`.
pub fn monomials(degree: u32) -> Vec<(u32, u32)> {
    (0..=degree)
        .flat_map(|d| (0..=d).map(move |i| (i, d - i)))
        .collect()
}

fn monomial(i: u32, j: u32) -> BiPoly {
    BiPoly::monomial(i, j, Scalar::one())
}

/// Checks `[x,y]·f = x·(y·f) − y·(x·f)` for every ordered pair of symbols
/// with index in `[−window, window]` (central symbols included) and every
/// monomial `f` of total degree `≤ degree`.
///
/// For a windowed representation, pairs whose bracket leaves its window
/// are skipped.
pub fn verify_module<R: Representation + ?Sized>(rep: &R, window: i64, degree: u32) -> Report {
    let start = Instant::now();
    let algebra = rep.algebra();
    let window = rep.window().map_or(window, |w| window.min(w));
    let symbols = algebra.window_symbols(window);
    let monos = monomials(degree);
    let mut report = Report::new("verify-module")
        .param("case", algebra.case())
        .param("b", algebra.b())
        .param("window", window)
        .param("degree", degree);

    let act = |x: BasisSymbol, f: &BiPoly| rep.act_symbol(x, f).expect("in-window symbol");
    // first[x][f] = x·f
    let first: Vec<Vec<BiPoly>> = symbols
        .par_iter()
        .map(|&x| monos.iter().map(|&(i, j)| act(x, &monomial(i, j))).collect())
        .collect();

    let in_reach = |x: BasisSymbol, y: BasisSymbol| match rep.window() {
        Some(w) if !x.is_central() && !y.is_central() => (x.index() + y.index()).abs() <= w,
        _ => true,
    };

    let parts: Vec<Report> = (0..symbols.len())
        .into_par_iter()
        .map(|xi| {
            let x = symbols[xi];
            let mut part = Report::new("verify-module");
            for (yi, &y) in symbols.iter().enumerate() {
                if !in_reach(x, y) {
                    continue;
                }
                let br = bracket(x, y, algebra).expect("window symbols are valid");
                for (fi, &(i, j)) in monos.iter().enumerate() {
                    let f = monomial(i, j);
                    let lhs = act_element(rep, &br, &f).expect("in-window symbols");
                    let xy = act(x, &first[yi][fi]);
                    let yx = act(y, &first[xi][fi]);
                    let residue = &lhs - &(&xy - &yx);
                    part.record((!residue.is_zero()).then(|| {
                        Failure::new("module-axiom", vec![x.index(), y.index(), i as i64, j as i64], &residue)
                            .with_context(format!("[{x},{y}] on s^{i}*t^{j}"))
                    }));
                }
            }
            part
        })
        .collect();
    for part in parts {
        report.merge(part);
    }
    report.set_elapsed(start.elapsed());
    report
}

/// Checks `u(L₀,W₀)·1 = u(s,t)` for every monomial `u` of total degree
/// `≤ degree`.
pub fn verify_freeness<R: Representation + ?Sized>(rep: &R, degree: u32) -> Report {
    let start = Instant::now();
    let mut report = Report::new("freeness").param("degree", degree);
    for (i, j) in monomials(degree) {
        let mut v = BiPoly::one();
        for _ in 0..j {
            v = rep.act_symbol(BasisSymbol::W(0), &v).expect("W_0 always acts");
        }
        for _ in 0..i {
            v = rep.act_symbol(BasisSymbol::L(0), &v).expect("L_0 always acts");
        }
        let residue = &v - &monomial(i, j);
        report.record((!residue.is_zero()).then(|| {
            Failure::new("freeness", vec![i as i64, j as i64], &residue)
        }));
    }
    report.set_elapsed(start.elapsed());
    report
}

/// Compares the explicit actions of `spec` with the generic window action
/// built from its `g_m`, `a_m`, for `|m| ≤ window` on monomials of total
/// degree `≤ degree`.
pub fn verify_consistency(spec: &ModuleSpec, window: i64, degree: u32) -> Report {
    let start = Instant::now();
    let fam = GenericFamily::from_spec(spec, window);
    let mut report = Report::new("consistency")
        .param("window", window)
        .param("degree", degree);
    for m in -window..=window {
        for (i, j) in monomials(degree) {
            let u = monomial(i, j);
            let dl = &spec.act_l(m, &u) - &fam.generic_act_l(m, &u).expect("in window");
            report.record((!dl.is_zero()).then(|| {
                Failure::new("consistency-l", vec![m, i as i64, j as i64], &dl)
            }));
            let dw = &spec.act_w(m, &u) - &fam.generic_act_w(m, &u).expect("in window");
            report.record((!dw.is_zero()).then(|| {
                Failure::new("consistency-w", vec![m, i as i64, j as i64], &dw)
            }));
        }
    }
    report.set_elapsed(start.elapsed());
    report
}
