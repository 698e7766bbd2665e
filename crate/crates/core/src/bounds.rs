//! Effective bounds on codimension, the top weight and the top degree.

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::singularity::KltParams;

/// Largest codimension a quasismooth, linear-cone-free family can have.
pub fn codim_bound(m: usize, alpha: i64) -> usize {
    if alpha >= 0 {
        m + alpha as usize + 1
    } else {
        m
    }
}

/// Strict upper bound on `a_n` in terms of `δ`.
///
/// For `α ≥ −1` this is `(m+1)δ`. Below that, the bound `(m+ε)/ε · δ` needs
/// ε-klt singularities and `a_n > (m+ε)/m · (−α)/ε`, so the caller must pass
/// both `eps` and the value of `a_n` it wants to test.
pub fn an_bound(
    m: usize,
    delta: i64,
    alpha: i64,
    eps: Option<&Rational>,
    an_hint: Option<u64>,
) -> Result<Rational> {
    let m_r = rational::int(m as i64);
    if alpha >= -1 {
        return Ok(rational::int((m as i64 + 1) * delta));
    }
    let (Some(e), Some(an)) = (eps, an_hint) else {
        return Err(Error::BoundHypothesis(format!(
            "α = {alpha} needs ε and an a_n value"
        )));
    };
    if !rational::is_positive(e) {
        return Err(Error::InvalidEpsilon(rational::to_pq(e)));
    }
    let threshold = (&m_r + e) / &m_r * rational::int(-alpha) / e;
    if rational::int(an as i64) <= threshold {
        return Err(Error::BoundHypothesis(format!(
            "a_n = {an} does not exceed {}",
            rational::to_pq(&threshold)
        )));
    }
    Ok((&m_r + e) / e * rational::int(delta))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsQuery {
    pub m: usize,
    pub alpha: i64,
    /// `None` maximizes over every admissible codimension.
    pub c: Option<usize>,
    pub b: Rational,
    pub epsilon: Option<KltParams>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsResult {
    pub codim: usize,
    pub codim_max: usize,
    pub epsilon: Rational,
    pub n: Rational,
    pub delta_max: Rational,
    pub an_strict_sup: Rational,
    pub dc_max: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundsOutcome {
    Bounds(Box<BoundsResult>),
    /// `α = 0`: `K_X` is trivial and no degree cap follows from the volume;
    /// callers must supply their own.
    NoEffectiveBound { codim_max: usize },
}

impl BoundsOutcome {
    pub fn bounds(&self) -> Option<&BoundsResult> {
        match self {
            BoundsOutcome::Bounds(r) => Some(r),
            BoundsOutcome::NoEffectiveBound { .. } => None,
        }
    }
}

/// The ε actually used: forced to 1 when `α > 0` or `α = −1`.
fn effective_epsilon(alpha: i64, eps: Option<&KltParams>) -> Result<Rational> {
    if alpha > 0 || alpha == -1 {
        return Ok(rational::int(1));
    }
    eps.map(|e| e.epsilon().clone())
        .ok_or_else(|| Error::BoundHypothesis(format!("α = {alpha} needs ε")))
}

fn bounds_at(m: usize, alpha: i64, c: usize, b: &Rational, eps: &Rational) -> BoundsResult {
    let m_i = m as i64;
    let c_i = c as i64;
    let (base, shift) = if alpha > 0 { (alpha, alpha) } else { (-alpha, 0) };
    let factor = rational::ratio(c_i + shift + m_i + 1, c_i);
    let n = rational::pow(&rational::int(base), m as u32) * rational::pow(&factor, c as u32) / b;
    let delta_max = rational::int(m_i + 1) * &n + rational::int(alpha);
    let m_r = rational::int(m_i);
    let an_strict_sup = (&m_r + eps) / eps * &delta_max;
    let dc_max = (&m_r + rational::int(2) * eps) / eps * &delta_max;
    BoundsResult {
        codim: c,
        codim_max: codim_bound(m, alpha),
        epsilon: eps.clone(),
        n,
        delta_max,
        an_strict_sup,
        dc_max,
    }
}

pub fn dc_bound(q: &BoundsQuery) -> Result<BoundsOutcome> {
    if q.m < 2 {
        return Err(Error::BoundHypothesis(format!("dimension {} < 2", q.m)));
    }
    if !rational::is_positive(&q.b) {
        return Err(Error::InvalidVolumeBound(rational::to_pq(&q.b)));
    }
    let codim_max = codim_bound(q.m, q.alpha);
    if q.alpha == 0 {
        return Ok(BoundsOutcome::NoEffectiveBound { codim_max });
    }
    let eps = effective_epsilon(q.alpha, q.epsilon.as_ref())?;
    let result = match q.c {
        Some(0) => return Err(Error::BoundHypothesis("codimension 0".into())),
        Some(c) => bounds_at(q.m, q.alpha, c, &q.b, &eps),
        None => (1..=codim_max)
            .map(|c| bounds_at(q.m, q.alpha, c, &q.b, &eps))
            .max_by(|x, y| x.dc_max.cmp(&y.dc_max))
            .expect("codim_max ≥ 1"),
    };
    Ok(BoundsOutcome::Bounds(Box::new(result)))
}
