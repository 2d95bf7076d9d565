//! The Lie algebras `W(a,b)` and their central extensions `Vir(a,b)`.
//!
//! `W(a,b)` has basis `{L_n, W_n}` with
//! `[L_m,L_n] = (n−m)L_{m+n}`, `[L_m,W_n] = (a+n+bm)W_{m+n}`, `[W_m,W_n] = 0`.
//! The extensions add central elements `C_i` whose presence depends on
//! `(a,b)`; see [`Case`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{Failure, Report};
use crate::scalar::Scalar;

/// Which bracket table is in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `W(a,b)` itself, no central terms.
    WOnly,
    /// `Vir(0,0)`, centre `C₁, C₂, C₃`.
    Vir00,
    /// `Vir(0,−1)`, centre `C₁, C₂`.
    Vir0m1,
    /// `Vir(1/2,0)`, centre `C₁, C₃`.
    Vir120,
    /// `Vir(a,b)` for all remaining `(a,b)`, centre `C₁`.
    VirGeneric,
    /// `Vir(0,1)`, centre `C₁, C₂, C₄`.
    Vir01,
}

impl Case {
    pub const ALL: [Case; 6] = [
        Case::WOnly,
        Case::Vir00,
        Case::Vir0m1,
        Case::Vir120,
        Case::VirGeneric,
        Case::Vir01,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Case::WOnly => "w",
            Case::Vir00 => "vir00",
            Case::Vir0m1 => "vir0m1",
            Case::Vir120 => "vir120",
            Case::VirGeneric => "vir-gen",
            Case::Vir01 => "vir01",
        }
    }

    pub fn from_name(name: &str) -> Option<Case> {
        Case::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn central_indices(self) -> &'static [u8] {
        match self {
            Case::WOnly => &[],
            Case::Vir00 => &[1, 2, 3],
            Case::Vir0m1 => &[1, 2],
            Case::Vir120 => &[1, 3],
            Case::VirGeneric => &[1],
            Case::Vir01 => &[1, 2, 4],
        }
    }

    /// The `(a,b)` this table is tied to, if any.
    pub fn fixed_params(self) -> Option<(Scalar, Scalar)> {
        match self {
            Case::Vir00 => Some((Scalar::zero(), Scalar::zero())),
            Case::Vir0m1 => Some((Scalar::zero(), Scalar::int(-1))),
            Case::Vir120 => Some((Scalar::ratio(1, 2), Scalar::zero())),
            Case::Vir01 => Some((Scalar::zero(), Scalar::one())),
            Case::WOnly | Case::VirGeneric => None,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraParams {
    a: Scalar,
    b: Scalar,
    case: Case,
}

impl AlgebraParams {
    /// Fails when `case` contradicts `(a,b)`.
    pub fn new(a: Scalar, b: Scalar, case: Case) -> Result<AlgebraParams> {
        if case != Case::WOnly {
            let expected = classify_case(&a, &b, true).case;
            if expected != case {
                return Err(Error::InvalidSpec(format!(
                    "(a,b) = ({a},{b}) belongs to case {expected}, not {case}"
                )));
            }
        }
        Ok(AlgebraParams { a, b, case })
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    pub fn b(&self) -> &Scalar {
        &self.b
    }

    pub fn case(&self) -> Case {
        self.case
    }

    pub fn central_symbols(&self) -> impl Iterator<Item = BasisSymbol> {
        self.case.central_indices().iter().map(|&i| BasisSymbol::C(i))
    }

    /// `L_n, W_n` for `|n| ≤ window`, followed by the central symbols.
    pub fn window_symbols(&self, window: i64) -> Vec<BasisSymbol> {
        let mut out: Vec<BasisSymbol> = (-window..=window).map(BasisSymbol::L).collect();
        out.extend((-window..=window).map(BasisSymbol::W));
        out.extend(self.central_symbols());
        out
    }

    pub fn check_symbol(&self, x: BasisSymbol) -> Result<()> {
        match x {
            BasisSymbol::C(i) if !self.case.central_indices().contains(&i) => {
                Err(Error::InvalidCentralIndex {
                    index: i,
                    case: self.case.name().to_string(),
                })
            }
            _ => Ok(()),
        }
    }
}

/// Picks the bracket table for `(a,b)`; `W(a,b)` when no extension is wanted.
pub fn classify_case(a: &Scalar, b: &Scalar, want_extension: bool) -> AlgebraParams {
    let case = if !want_extension {
        Case::WOnly
    } else {
        [Case::Vir00, Case::Vir0m1, Case::Vir120, Case::Vir01]
            .into_iter()
            .find(|c| c.fixed_params().is_some_and(|(ca, cb)| &ca == a && &cb == b))
            .unwrap_or(Case::VirGeneric)
    };
    AlgebraParams {
        a: a.clone(),
        b: b.clone(),
        case,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisSymbol {
    L(i64),
    W(i64),
    C(u8),
}

impl BasisSymbol {
    pub fn index(self) -> i64 {
        match self {
            BasisSymbol::L(n) | BasisSymbol::W(n) => n,
            BasisSymbol::C(i) => i as i64,
        }
    }

    pub fn is_central(self) -> bool {
        matches!(self, BasisSymbol::C(_))
    }
}

impl fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisSymbol::L(n) => write!(f, "L:{n}"),
            BasisSymbol::W(n) => write!(f, "W:{n}"),
            BasisSymbol::C(i) => write!(f, "C:{i}"),
        }
    }
}

impl FromStr for BasisSymbol {
    type Err = Error;

    /// `L:2`, `W:-1`, `C:3`.
    fn from_str(s: &str) -> Result<BasisSymbol> {
        let s = s.trim();
        let (kind, idx) = s
            .split_once(':')
            .ok_or_else(|| Error::syntax(0, "expected KIND:INDEX, e.g. L:2"))?;
        let at = kind.len() + 1;
        match kind {
            "L" | "W" => {
                let n: i64 = idx.parse().map_err(|_| Error::syntax(at, "expected an integer index"))?;
                Ok(if kind == "L" { BasisSymbol::L(n) } else { BasisSymbol::W(n) })
            }
            "C" => {
                let i: u8 = idx.parse().map_err(|_| Error::syntax(at, "expected a central index"))?;
                if !(1..=4).contains(&i) {
                    return Err(Error::syntax(at, "central index must be 1, 2, 3 or 4"));
                }
                Ok(BasisSymbol::C(i))
            }
            _ => Err(Error::syntax(0, "expected L, W or C")),
        }
    }
}

/// Finite linear combination of basis symbols.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgElement {
    terms: BTreeMap<BasisSymbol, Scalar>,
}

impl AlgElement {
    pub fn zero() -> AlgElement {
        AlgElement::default()
    }

    pub fn symbol(x: BasisSymbol) -> AlgElement {
        AlgElement::term(x, Scalar::one())
    }

    pub fn term(x: BasisSymbol, c: Scalar) -> AlgElement {
        let mut e = AlgElement::zero();
        e.add_term(x, c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BasisSymbol, Scalar)>) -> AlgElement {
        let mut e = AlgElement::zero();
        for (x, c) in terms {
            e.add_term(x, c);
        }
        e
    }

    pub fn add_term(&mut self, x: BasisSymbol, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(x).or_default();
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, x: BasisSymbol) -> Scalar {
        self.terms.get(&x).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (BasisSymbol, &Scalar)> {
        self.terms.iter().map(|(x, c)| (*x, c))
    }

    pub fn scale(&self, c: &Scalar) -> AlgElement {
        AlgElement::from_terms(self.terms.iter().map(|(x, v)| (*x, v * c)))
    }

    pub fn add(&self, other: &AlgElement) -> AlgElement {
        let mut out = self.clone();
        for (x, c) in &other.terms {
            out.add_term(*x, c.clone());
        }
        out
    }

    pub fn neg(&self) -> AlgElement {
        self.scale(&Scalar::int(-1))
    }

    /// Drops all central terms.
    pub fn without_central(&self) -> AlgElement {
        AlgElement::from_terms(
            self.terms
                .iter()
                .filter(|(x, _)| !x.is_central())
                .map(|(x, c)| (*x, c.clone())),
        )
    }
}

impl fmt::Display for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::poly::write_terms(f, self.terms.iter().map(|(x, c)| (c, x.to_string())))
    }
}

impl fmt::Debug for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `[x, y]` on basis symbols.
pub fn bracket(x: BasisSymbol, y: BasisSymbol, p: &AlgebraParams) -> Result<AlgElement> {
    use BasisSymbol::*;
    p.check_symbol(x)?;
    p.check_symbol(y)?;
    let extended = p.case != Case::WOnly;
    let mut out = AlgElement::zero();
    match (x, y) {
        (C(_), _) | (_, C(_)) => {}
        (L(n), L(m)) => {
            // [L_n, L_m] = (m−n)L_{m+n} + δ_{m+n,0} (n³−n)/12 C₁
            out.add_term(L(m + n), Scalar::int(m - n));
            if extended && m + n == 0 {
                out.add_term(C(1), Scalar::ratio(n * n * n - n, 12));
            }
        }
        (L(n), W(m)) => return Ok(bracket_lw(n, m, p)),
        (W(m), L(n)) => return Ok(bracket_lw(n, m, p).neg()),
        (W(n), W(m)) => match p.case {
            // [W_n, W_m] = n δ_{m+n,0} C₃
            Case::Vir00 if m + n == 0 => out.add_term(C(3), Scalar::int(n)),
            // [W_n, W_m] = (2n+1) δ_{m+n,−1} C₃
            Case::Vir120 if m + n == -1 => out.add_term(C(3), Scalar::int(2 * n + 1)),
            _ => {}
        },
    }
    Ok(out)
}

/// `[L_n, W_m] = (m + a + nb) W_{m+n}` plus the case's central term.
fn bracket_lw(n: i64, m: i64, p: &AlgebraParams) -> AlgElement {
    use BasisSymbol::*;
    let coef = &(&Scalar::int(m) + &p.a) + &(&Scalar::int(n) * &p.b);
    let mut out = AlgElement::term(W(m + n), coef);
    if m + n == 0 {
        match p.case {
            Case::Vir00 => out.add_term(C(2), Scalar::int(n * n + n)),
            Case::Vir0m1 => out.add_term(C(2), Scalar::ratio(n * n * n - n, 12)),
            Case::Vir01 => {
                out.add_term(C(2), Scalar::int(n));
                out.add_term(C(4), Scalar::one());
            }
            _ => {}
        }
    }
    out
}

/// Bilinear extension of [`bracket`].
pub fn bracket_lin(x: &AlgElement, y: &AlgElement, p: &AlgebraParams) -> Result<AlgElement> {
    let mut out = AlgElement::zero();
    for (xs, xc) in x.terms() {
        for (ys, yc) in y.terms() {
            let c = xc * yc;
            for (z, zc) in bracket(xs, ys, p)?.terms() {
                out.add_term(z, &c * zc);
            }
        }
    }
    Ok(out)
}

/// Exhaustive antisymmetry and Jacobi check over all basis symbols with
/// index in `[−window, window]`.
pub fn verify_algebra(p: &AlgebraParams, window: i64) -> Report {
    let start = Instant::now();
    let symbols = p.window_symbols(window);
    let mut report = Report::new("verify-algebra")
        .param("case", p.case)
        .param("a", &p.a)
        .param("b", &p.b)
        .param("window", window);

    for &x in &symbols {
        for &y in &symbols {
            let lhs = bracket(x, y, p).expect("window symbols are valid");
            let rhs = bracket(y, x, p).expect("window symbols are valid");
            let residue = lhs.add(&rhs);
            report.record((!residue.is_zero()).then(|| {
                Failure::new("antisymmetry", vec![x.index(), y.index()], &residue)
                    .with_context(format!("{x},{y}"))
            }));
        }
    }

    let jacobi: Vec<Report> = symbols
        .par_iter()
        .map(|&x| {
            let mut part = Report::new("jacobi");
            for &y in &symbols {
                for &z in &symbols {
                    let residue = jacobi_residue(x, y, z, p);
                    part.record((!residue.is_zero()).then(|| {
                        Failure::new("jacobi", vec![x.index(), y.index(), z.index()], &residue)
                            .with_context(format!("{x},{y},{z}"))
                    }));
                }
            }
            part
        })
        .collect();
    for part in jacobi {
        report.merge(part);
    }
    report.set_elapsed(start.elapsed());
    report
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`.
pub fn jacobi_residue(x: BasisSymbol, y: BasisSymbol, z: BasisSymbol, p: &AlgebraParams) -> AlgElement {
    let cyc = |u: BasisSymbol, v: BasisSymbol, w: BasisSymbol| {
        let inner = bracket(v, w, p).expect("valid symbols");
        bracket_lin(&AlgElement::symbol(u), &inner, p).expect("valid symbols")
    };
    cyc(x, y, z).add(&cyc(y, z, x)).add(&cyc(z, x, y))
}
