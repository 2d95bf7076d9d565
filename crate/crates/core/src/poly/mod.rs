//! Sparse exact polynomials in one variable ([`UniPoly`]) and in the two
//! variables `s, t` ([`BiPoly`]), which realize `L₀, W₀` on the free
//! rank-one module.
//!
//! Text form: `2*s^2*t - 1/2`, `(1+i)*t + 3i`, with `L0`/`W0` accepted as
//! aliases for `s`/`t`. Output is graded lexicographic with `s` before `t`.

mod bi;
mod parse;
mod uni;

use std::fmt;

pub use bi::BiPoly;
pub use parse::{parse_poly, parse_unipoly};
pub use uni::{divided_difference, UniPoly};

use crate::scalar::Scalar;

pub(crate) fn power(var: &str, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

/// Writes `c₁*m₁ ± c₂*m₂ ± …`, `0` for an empty sum. An empty monomial
/// string denotes the constant term.
pub(crate) fn write_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: IntoIterator<Item = (&'a Scalar, String)>,
{
    let mut first = true;
    for (c, mono) in terms {
        let (neg, abs) = c.term_parts();
        let body = if mono.is_empty() {
            abs
        } else if abs == "1" {
            mono
        } else {
            format!("{abs}*{mono}")
        };
        match (first, neg) {
            (true, false) => write!(f, "{body}")?,
            (true, true) => write!(f, "-{body}")?,
            (false, false) => write!(f, " + {body}")?,
            (false, true) => write!(f, " - {body}")?,
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}
