//! The explicit constants of the generalized Crossing Lemma and checks of
//! concrete drawings against them.
//!
//! With `x = p/q`, `alpha^q = 2^-(2p+14q) k2^-2q k3^-p` is always rational,
//! so verdicts compare `cr^q n^(p+q) >= alpha^q e^(p+2q)` exactly. Reported
//! bound values are floating point.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::drawing::{Drawing, DrawingError};
use crate::geometry::{int, Scalar};
use crate::styles::{Style, StyleParams};

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("{0} is not rational")]
    Irrational(String),
    #[error("style violation: {0}")]
    StyleViolation(String),
    #[error(transparent)]
    Drawing(#[from] DrawingError),
}

/// `x(b) = 1/(b-1)`.
pub fn x_of_b(b: &Scalar) -> Result<Scalar, BoundsError> {
    if *b <= Scalar::one() {
        return Err(BoundsError::DomainError(format!("b = {b} must exceed 1")));
    }
    Ok((b - Scalar::one()).recip())
}

fn parts(x: &Scalar) -> (i32, i32) {
    let p = x.numer().to_i32().expect("numerator of x fits in i32");
    let q = x.denom().to_i32().expect("denominator of x fits in i32");
    (p, q)
}

/// `alpha^q` for `x = p/q`; rational for every rational `x`.
pub fn alpha_pow_q(params: &StyleParams) -> Result<(Scalar, i32), BoundsError> {
    let x = x_of_b(&params.b)?;
    let (p, q) = parts(&x);
    let den = Pow::pow(int(2), 2 * p + 14 * q) * Pow::pow(params.k2.clone(), 2 * q) * Pow::pow(params.k3.clone(), p);
    Ok((den.recip(), q))
}

/// Exact rational `k`-th root, if there is one.
fn rational_root(v: &Scalar, k: u32) -> Option<Scalar> {
    if v.is_negative() {
        return None;
    }
    let root = |b: &BigInt| {
        let r = b.nth_root(k);
        (Pow::pow(&r, k) == *b).then_some(r)
    };
    Some(Scalar::new(root(v.numer())?, root(v.denom())?))
}

/// `alpha = 2^-(2x+14) k2^-2 k3^-x`, exact when it is rational.
pub fn alpha(params: &StyleParams) -> Result<Scalar, BoundsError> {
    let (aq, q) = alpha_pow_q(params)?;
    rational_root(&aq, q as u32).ok_or_else(|| BoundsError::Irrational(format!("alpha for {}", params.style)))
}

fn ln(s: &Scalar) -> f64 {
    // Scale big numerators and denominators before converting.
    let bits = |b: &BigInt| b.bits() as i64;
    let shift = |b: &BigInt| -> f64 {
        let extra = (bits(b) - 900).max(0);
        let t: BigInt = b >> (extra as usize);
        t.to_f64().unwrap().ln() + extra as f64 * std::f64::consts::LN_2
    };
    shift(s.numer()) - shift(s.denom())
}

fn f(s: &Scalar) -> f64 {
    s.to_f64().unwrap_or(f64::NAN)
}

pub fn alpha_f64(params: &StyleParams) -> Result<f64, BoundsError> {
    let (aq, q) = alpha_pow_q(params)?;
    Ok((ln(&aq) / q as f64).exp())
}

/// `beta = alpha^(-1/(x+2))`.
pub fn beta(params: &StyleParams) -> Result<f64, BoundsError> {
    let x = f(&x_of_b(&params.b)?);
    let (aq, q) = alpha_pow_q(params)?;
    let ln_alpha = ln(&aq) / q as f64;
    Ok((-ln_alpha / (x + 2.0)).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum LowerBound {
    NotApplicable,
    Bound(f64),
}

/// `e > (k1 + 1) n`.
pub fn applicable(n: usize, e: usize, params: &StyleParams) -> bool {
    int(e as i64) > (&params.k1 + Scalar::one()) * int(n as i64)
}

/// `alpha e^(x+2) / n^(x+1)` when `e > (k1+1) n`.
pub fn crossing_lower_bound(n: usize, e: usize, params: &StyleParams) -> Result<LowerBound, BoundsError> {
    if n == 0 || !applicable(n, e, params) {
        return Ok(LowerBound::NotApplicable);
    }
    let x = f(&x_of_b(&params.b)?);
    let (aq, q) = alpha_pow_q(params)?;
    let v = ln(&aq) / q as f64 + (x + 2.0) * (e as f64).ln() - (x + 1.0) * (n as f64).ln();
    Ok(LowerBound::Bound(v.exp()))
}

/// Exact `cr >= alpha e^(x+2) / n^(x+1)`.
pub fn meets_bound(cr: usize, n: usize, e: usize, params: &StyleParams) -> Result<bool, BoundsError> {
    let x = x_of_b(&params.b)?;
    let (p, q) = parts(&x);
    let (aq, _) = alpha_pow_q(params)?;
    let lhs = Pow::pow(int(cr as i64), q) * Pow::pow(int(n as i64), p + q);
    Ok(lhs >= aq * Pow::pow(int(e as i64), p + 2 * q))
}

/// `cr >= e - k1 n`, the linear bound a crossing-free subdrawing forces;
/// `None` below the threshold `e > (k1+1) n`.
pub fn linear_bound_holds(cr: usize, n: usize, e: usize, params: &StyleParams) -> Option<bool> {
    applicable(n, e, params)
        .then(|| int(cr as i64) >= int(e as i64) - &params.k1 * int(n as i64))
}

/// The bound as a style usually states it, with its own constant name.
#[derive(Clone, Debug, Serialize)]
pub struct Headline {
    pub formula: String,
    pub constant: f64,
    pub value: Option<f64>,
}

fn headline(params: &StyleParams, bound: LowerBound) -> Result<Headline, BoundsError> {
    let a = alpha_f64(params)?;
    let value = match bound {
        LowerBound::Bound(v) => Some(v),
        LowerBound::NotApplicable => None,
    };
    Ok(match params.style {
        Style::Separated => Headline { formula: "alpha*e^2.5/n^1.5".into(), constant: a, value },
        Style::LocallyStarlike | Style::Branching => {
            Headline { formula: "alpha*e^3/n^2".into(), constant: a, value }
        }
        Style::Multiplicity(m) => Headline {
            formula: format!("alpha'*e^3/({m}*n^2)"),
            constant: a * m as f64,
            value,
        },
        Style::Girth(r) => Headline {
            formula: format!("alpha_{r}*e^{}/n^{}", r + 2, r + 1),
            constant: a,
            value,
        },
        Style::SingleCrossing => Headline { formula: "-".into(), constant: a, value },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub style: String,
    pub n: usize,
    pub e: usize,
    pub cr: usize,
    #[serde(serialize_with = "crate::geometry::serialize_scalar")]
    pub x: Scalar,
    pub alpha: f64,
    pub beta: f64,
    /// `(k1 + 1) n`.
    #[serde(serialize_with = "crate::geometry::serialize_scalar")]
    pub threshold: Scalar,
    pub applicable: bool,
    pub bound: Option<f64>,
    pub satisfied: Option<bool>,
    pub ratio: Option<f64>,
    pub headline: Headline,
    pub footer: Option<String>,
}

impl BoundReport {
    pub fn verdict(&self) -> &'static str {
        match self.satisfied {
            None => "n/a",
            Some(true) => "satisfied",
            Some(false) => "VIOLATED",
        }
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: n={} e={} cr={} threshold={} bound={} ratio={} verdict={}",
            self.style,
            self.n,
            self.e,
            self.cr,
            self.threshold,
            self.bound.map_or("-".into(), |b| format!("{b:.6e}")),
            self.ratio.map_or("-".into(), |r| format!("{r:.6e}")),
            self.verdict()
        )?;
        if let Some(note) = &self.footer {
            write!(f, "\nnote: {note}")?;
        }
        Ok(())
    }
}

/// Report for given counts without looking at a drawing.
pub fn bound_report(n: usize, e: usize, cr: usize, params: &StyleParams) -> Result<BoundReport, BoundsError> {
    let x = x_of_b(&params.b)?;
    let bound = crossing_lower_bound(n, e, params)?;
    let (bound_v, satisfied, ratio) = match bound {
        LowerBound::NotApplicable => (None, None, None),
        LowerBound::Bound(v) => (Some(v), Some(meets_bound(cr, n, e, params)?), Some(cr as f64 / v)),
    };
    let footer = match params.style {
        Style::Multiplicity(m) => {
            let alt = e > 4 * m * n;
            Some(format!(
                "threshold e > (3m+1)n = {} used; the published hypothesis is e > 4mn = {} (applicable there: {alt})",
                (3 * m + 1) * n,
                4 * m * n
            ))
        }
        _ => None,
    };
    Ok(BoundReport {
        style: params.style.to_string(),
        n,
        e,
        cr,
        x,
        alpha: alpha_f64(params)?,
        beta: beta(params)?,
        threshold: (&params.k1 + Scalar::one()) * int(n as i64),
        applicable: bound_v.is_some(),
        bound: bound_v,
        satisfied,
        ratio,
        headline: headline(params, bound)?,
        footer,
    })
}

/// Check a drawing in the style against its crossing lemma.
pub fn verify_crossing_lemma(d: &Drawing, params: &StyleParams) -> Result<BoundReport, BoundsError> {
    let r = params.style.check(d)?;
    if !r.holds {
        return Err(BoundsError::StyleViolation(r.to_string()));
    }
    bound_report(d.num_vertices(), d.num_edges(), d.crossing_number()?, params)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeBoundCheck {
    pub name: String,
    pub value: usize,
    pub bound: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeBoundReport {
    pub style: String,
    pub n: usize,
    pub e: usize,
    pub max_degree: usize,
    pub cr: usize,
    pub checks: Vec<EdgeBoundCheck>,
}

impl EdgeBoundReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

impl fmt::Display for EdgeBoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: n={} e={} max_degree={} cr={}", self.style, self.n, self.e, self.max_degree, self.cr)?;
        for c in &self.checks {
            write!(f, "\n  {} = {} <= {}: {}", c.name, c.value, c.bound, if c.holds { "ok" } else { "FAILS" })?;
        }
        Ok(())
    }
}

/// Degree and edge-count bounds for the style; crossing-free drawings are
/// also checked against the planar edge bound.
pub fn verify_edge_bounds(d: &Drawing, style: Style) -> Result<EdgeBoundReport, BoundsError> {
    let r = style.check(d)?;
    if !r.holds {
        return Err(BoundsError::StyleViolation(r.to_string()));
    }
    let (n, e, delta, cr) = (d.num_vertices(), d.num_edges(), d.max_degree(), d.crossing_number()?);
    let mut checks = Vec::new();
    let mut check = |name: &str, value: usize, bound: usize| {
        checks.push(EdgeBoundCheck { name: name.into(), value, bound, holds: value <= bound })
    };
    let pairs = n * n.saturating_sub(1) / 2;
    match style {
        Style::Separated => {
            check("max degree vs (n-1)(n-2)", delta, n.saturating_sub(1) * n.saturating_sub(2));
            check("edges vs C(n,2)(n-2)", e, pairs * n.saturating_sub(2));
        }
        Style::LocallyStarlike | Style::Branching if n >= 3 => {
            check("max degree vs 2n-4", delta, 2 * n - 4);
            check("edges vs n(n-2)", e, n * (n - 2));
        }
        Style::Multiplicity(m) => {
            check("edges vs m*C(n,2)", e, m * pairs);
            if cr == 0 {
                check("crossing-free edges vs 3mn", e, 3 * m * n);
            }
        }
        Style::Girth(_) => {
            check("edges vs C(n,2)", e, pairs);
            if cr == 0 {
                check("crossing-free edges vs 3n", e, 3 * n);
            }
        }
        _ => {}
    }
    if style.needs_separation() && cr == 0 && n >= 3 {
        check("crossing-free edges vs 3n-6", e, 3 * n - 6);
    }
    Ok(EdgeBoundReport { style: style.to_string(), n, e, max_degree: delta, cr, checks })
}

/// `cr / (e^(x+2) / n^(x+1))` for each report.
pub fn tightness_ratio(reports: &[BoundReport]) -> Vec<f64> {
    reports
        .iter()
        .map(|r| {
            let x = f(&r.x);
            let shape = ((x + 2.0) * (r.e as f64).ln() - (x + 1.0) * (r.n as f64).ln()).exp();
            r.cr as f64 / shape
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ratio;

    fn sep() -> StyleParams {
        Style::Separated.params(None).unwrap()
    }

    fn loc() -> StyleParams {
        Style::LocallyStarlike.params(None).unwrap()
    }

    #[test]
    fn exponents() {
        assert_eq!(x_of_b(&int(2)).unwrap(), int(1));
        assert_eq!(x_of_b(&int(3)).unwrap(), ratio(1, 2));
        assert_eq!(x_of_b(&(int(1) + ratio(1, 4))).unwrap(), int(4));
        assert!(matches!(x_of_b(&int(1)), Err(BoundsError::DomainError(_))));
        assert!(x_of_b(&ratio(1, 2)).is_err());
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(&sep()).unwrap(), ratio(1, 63_438_848));
        assert_eq!(alpha(&loc()).unwrap(), ratio(1, 126_877_696));
        let mut doubled = loc();
        doubled.k3 = int(2);
        assert_eq!(alpha(&doubled).unwrap() * int(2), alpha(&loc()).unwrap());
        // k3 = 2 with x = 1/2 makes alpha irrational.
        let mut odd = sep();
        odd.k3 = int(2);
        assert!(matches!(alpha(&odd), Err(BoundsError::Irrational(_))));
        assert!((alpha_f64(&odd).unwrap() * 2f64.sqrt() * 63_438_848.0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn beta_is_cube_root() {
        let b = beta(&loc()).unwrap();
        assert!((b.powi(3) / 126_877_696.0 - 1.0).abs() < 1e-12);
        assert!((b - 502.49).abs() < 0.01);
        let mut big = loc();
        big.k2 = int(1);
        assert!(beta(&big).unwrap() < b);
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(crossing_lower_bound(10, 40, &sep()).unwrap(), LowerBound::NotApplicable);
        let LowerBound::Bound(v) = crossing_lower_bound(10, 100, &sep()).unwrap() else {
            panic!("applicable")
        };
        let expect = 100f64.powf(2.5) / 10f64.powf(1.5) / 63_438_848.0;
        assert!((v / expect - 1.0).abs() < 1e-12);
        assert!(meets_bound(1, 10, 100, &sep()).unwrap());
        assert!(!meets_bound(0, 10, 100, &sep()).unwrap());
    }

    #[test]
    fn multiplicity_report_flags_threshold() {
        let p = Style::Multiplicity(2).params(None).unwrap();
        let r = bound_report(10, 75, 100, &p).unwrap();
        assert!(r.applicable); // 75 > 7 * 10
        assert!(r.footer.as_ref().unwrap().contains("applicable there: false"));
        assert_eq!(r.verdict(), "satisfied");
    }

    #[test]
    fn linear_bound() {
        assert_eq!(linear_bound_holds(0, 10, 40, &sep()), None);
        assert_eq!(linear_bound_holds(11, 10, 41, &sep()), Some(true));
        assert_eq!(linear_bound_holds(10, 10, 41, &sep()), Some(false));
    }

    #[test]
    fn tightness_of_empty_family() {
        assert!(tightness_ratio(&[]).is_empty());
        let r = bound_report(5, 30, 20, &sep()).unwrap();
        assert!(tightness_ratio(&[r])[0] > 0.0);
    }
}
