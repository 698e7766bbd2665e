//! Weight systems, candidate families and their basic invariants.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Hard cap on the number of ambient variables; subsets are stored as `u32` masks.
pub const MAX_VARIABLES: usize = 32;

/// Ambient weights `a_0 <= a_1 <= ... <= a_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct WeightSystem(Vec<u64>);

impl WeightSystem {
    pub fn new(mut weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyWeights);
        }
        if weights.len() < 2 {
            return Err(Error::TooFewWeights(weights.len()));
        }
        if weights.len() > MAX_VARIABLES {
            return Err(Error::TooManyVariables { got: weights.len(), max: MAX_VARIABLES });
        }
        if weights.contains(&0) {
            return Err(Error::NonPositiveWeight(0));
        }
        weights.sort_unstable();
        Ok(WeightSystem(weights))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    /// Number of variables, `n + 1`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn max(&self) -> u64 {
        *self.0.last().expect("nonempty")
    }
}

impl TryFrom<Vec<u64>> for WeightSystem {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        WeightSystem::new(v)
    }
}

impl From<WeightSystem> for Vec<u64> {
    fn from(w: WeightSystem) -> Self {
        w.0
    }
}

impl std::ops::Index<usize> for WeightSystem {
    type Output = u64;

    fn index(&self, i: usize) -> &u64 {
        &self.0[i]
    }
}

/// A normalized family `X_{d_1..d_c} ⊂ P(a_0..a_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CandidateFamily {
    weights: WeightSystem,
    degrees: Vec<u64>,
}

impl CandidateFamily {
    pub fn new(weights: Vec<u64>, mut degrees: Vec<u64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyWeights);
        }
        if degrees.is_empty() {
            return Err(Error::EmptyDegrees);
        }
        if degrees.contains(&0) {
            return Err(Error::NonPositiveDegree(0));
        }
        let weights = WeightSystem::new(weights)?;
        if degrees.len() > weights.dim() {
            return Err(Error::CodimTooLarge { codim: degrees.len(), dim: weights.dim() });
        }
        degrees.sort_unstable();
        Ok(CandidateFamily { weights, degrees })
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Ambient dimension `n`.
    pub fn n(&self) -> usize {
        self.weights.dim()
    }

    /// Codimension `c`.
    pub fn codim(&self) -> usize {
        self.degrees.len()
    }

    /// Dimension `m = n - c`.
    pub fn dim(&self) -> usize {
        self.n() - self.codim()
    }

    /// `α = Σd_j − Σa_i`.
    pub fn amplitude(&self) -> i64 {
        self.degrees.iter().sum::<u64>() as i64 - self.weights.sum() as i64
    }

    pub fn delta_profile(&self) -> DeltaProfile {
        let m = self.dim();
        let deltas: Vec<i64> = self
            .degrees
            .iter()
            .enumerate()
            .map(|(j, &d)| d as i64 - self.weights[j + 1 + m] as i64)
            .collect();
        let total = deltas.iter().sum();
        DeltaProfile { deltas, total }
    }

    pub fn is_linear_cone(&self) -> bool {
        self.degrees.iter().any(|d| self.weights.as_slice().contains(d))
    }
}

impl fmt::Display for CandidateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "X_{{{}}} in P({})", join(&self.degrees), join(self.weights.as_slice()))
    }
}

/// `δ_j = d_j − a_{j+m}` (1-based `j`) and their sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaProfile {
    pub deltas: Vec<i64>,
    pub total: i64,
}

/// Exact top self-intersections of `O_X(1)`, `K_X` and `−K_X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeData {
    pub o1_power: Rational,
    pub canonical_power: Rational,
    pub anticanonical_power: Rational,
}

/// Sorts raw input into the unique normalized representative.
pub fn normalize_family(weights: &[i64], degrees: &[i64]) -> Result<CandidateFamily> {
    if weights.is_empty() {
        return Err(Error::EmptyWeights);
    }
    if degrees.is_empty() {
        return Err(Error::EmptyDegrees);
    }
    if let Some(&w) = weights.iter().find(|&&w| w < 1) {
        return Err(Error::NonPositiveWeight(w));
    }
    if let Some(&d) = degrees.iter().find(|&&d| d < 1) {
        return Err(Error::NonPositiveDegree(d));
    }
    CandidateFamily::new(
        weights.iter().map(|&w| w as u64).collect(),
        degrees.iter().map(|&d| d as u64).collect(),
    )
}

pub fn amplitude_delta(f: &CandidateFamily) -> (i64, DeltaProfile) {
    (f.amplitude(), f.delta_profile())
}

/// One elimination `d_j = a_i`; indices refer to the family at the time of the step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeStep {
    pub weight_index: usize,
    pub degree_index: usize,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduced {
    Family(CandidateFamily),
    /// Every equation was linear: `X` is the whole ambient space.
    Ambient(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeReduction {
    pub reduced: Reduced,
    pub steps: Vec<ConeStep>,
}

impl ConeReduction {
    pub fn is_degenerate(&self) -> bool {
        matches!(self.reduced, Reduced::Ambient(_))
    }
}

/// Strips equations `x_i + ...` with `d_j = a_i` until none is left.
pub fn linear_cone_reduce(f: &CandidateFamily) -> ConeReduction {
    let mut weights = f.weights.as_slice().to_vec();
    let mut degrees = f.degrees.clone();
    let mut steps = Vec::new();
    loop {
        let hit = degrees.iter().enumerate().find_map(|(j, d)| {
            weights.iter().position(|w| w == d).map(|i| (i, j))
        });
        let Some((i, j)) = hit else { break };
        steps.push(ConeStep { weight_index: i, degree_index: j, value: degrees[j] });
        weights.remove(i);
        degrees.remove(j);
        if degrees.is_empty() {
            return ConeReduction { reduced: Reduced::Ambient(weights), steps };
        }
    }
    let family = CandidateFamily::new(weights, degrees).expect("reduction keeps invariants");
    ConeReduction { reduced: Reduced::Family(family), steps }
}

/// `P(a_0..a_n)` is well-formed iff every `n` of the weights are coprime.
pub fn is_wellformed_space(w: &WeightSystem) -> bool {
    wellformed_space_witness(w).is_none()
}

/// Index `i` whose removal leaves weights with a common factor, if any.
pub fn wellformed_space_witness(w: &WeightSystem) -> Option<usize> {
    let a = w.as_slice();
    (0..a.len()).find(|&i| {
        let g = a
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .fold(0u64, |g, (_, &x)| g.gcd(&x));
        g > 1
    })
}

pub fn volume(f: &CandidateFamily) -> VolumeData {
    let num = f.degrees.iter().fold(BigInt::one(), |acc, &d| acc * d);
    let den = f.weights.as_slice().iter().fold(BigInt::one(), |acc, &a| acc * a);
    let o1_power = Rational::new(num, den);
    let m = f.dim() as u32;
    let alpha = rational::int(f.amplitude());
    let canonical_power = rational::pow(&alpha, m) * &o1_power;
    let anticanonical_power = rational::pow(&-alpha, m) * &o1_power;
    VolumeData { o1_power, canonical_power, anticanonical_power }
}

/// `X ⊂ P(a)` to `X ⊂ P(1, a)`: one dimension up, amplitude down by one.
pub fn cone_lift(f: &CandidateFamily) -> CandidateFamily {
    let mut weights = Vec::with_capacity(f.weights.len() + 1);
    weights.push(1);
    weights.extend_from_slice(f.weights.as_slice());
    CandidateFamily::new(weights, f.degrees.clone()).expect("lift keeps invariants")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn fam(w: &[u64], d: &[u64]) -> CandidateFamily {
        CandidateFamily::new(w.to_vec(), d.to_vec()).unwrap()
    }

    #[test]
    fn normalize_sorts() {
        let f = normalize_family(&[3, 1, 1, 1], &[6]).unwrap();
        assert_eq!(f.weights().as_slice(), &[1, 1, 1, 3]);
        assert_eq!(f.degrees(), &[6]);
        let g = normalize_family(&[1, 2, 3, 4], &[5, 4]).unwrap();
        assert_eq!(g.degrees(), &[4, 5]);
        assert_eq!(normalize_family(&[1, 2, 3, 4], &[4, 5]).unwrap(), g);
    }

    #[test]
    fn normalize_rejects_bad_input() {
        assert_eq!(normalize_family(&[], &[1]), Err(Error::EmptyWeights));
        assert_eq!(normalize_family(&[1, 1], &[]), Err(Error::EmptyDegrees));
        assert_eq!(normalize_family(&[1, 0], &[1]), Err(Error::NonPositiveWeight(0)));
        assert_eq!(normalize_family(&[1, 1], &[-2]), Err(Error::NonPositiveDegree(-2)));
        assert!(matches!(
            normalize_family(&[1, 1, 1], &[2, 2, 2]),
            Err(Error::CodimTooLarge { codim: 3, dim: 2 })
        ));
    }

    #[test]
    fn amplitude_and_deltas() {
        let (a, p) = amplitude_delta(&fam(&[1, 1, 1, 3], &[6]));
        assert_eq!((a, p.deltas, p.total), (0, vec![3], 3));
        let (a, p) = amplitude_delta(&fam(&[1, 1, 1, 1, 4], &[5]));
        assert_eq!((a, p.deltas, p.total), (-3, vec![1], 1));
        let (a, p) = amplitude_delta(&fam(&[2, 3, 3, 3, 8], &[18]));
        assert_eq!((a, p.deltas, p.total), (-1, vec![10], 10));
        // codimension two: δ_j pairs d_j with a_{j+m}
        let (a, p) = amplitude_delta(&fam(&[1, 1, 2, 2, 2], &[4, 4]));
        assert_eq!((a, p.deltas, p.total), (0, vec![2, 2], 4));
    }

    #[test]
    fn cone_reduction() {
        let r = linear_cone_reduce(&fam(&[1, 1, 2, 2, 3], &[2, 6]));
        assert_eq!(r.reduced, Reduced::Family(fam(&[1, 1, 2, 3], &[6])));
        assert_eq!(r.steps.len(), 1);
        assert_eq!(r.steps[0].value, 2);

        let f = fam(&[1, 1, 1, 3], &[6]);
        let r = linear_cone_reduce(&f);
        assert_eq!(r.reduced, Reduced::Family(f));
        assert!(r.steps.is_empty());

        let r = linear_cone_reduce(&fam(&[1, 2, 2, 3, 4], &[4, 6]));
        assert_eq!(r.reduced, Reduced::Family(fam(&[1, 2, 2, 3], &[6])));
        assert_eq!(r.steps.len(), 1);
    }

    #[test]
    fn cone_reduction_to_ambient() {
        let r = linear_cone_reduce(&fam(&[1, 1, 2], &[1]));
        assert!(r.is_degenerate());
        assert_eq!(r.reduced, Reduced::Ambient(vec![1, 2]));
        let r = linear_cone_reduce(&fam(&[1, 2, 3, 5], &[2, 3]));
        assert_eq!(r.reduced, Reduced::Ambient(vec![1, 5]));
        assert_eq!(r.steps.len(), 2);
    }

    #[test]
    fn wellformed_space() {
        assert!(is_wellformed_space(&WeightSystem::new(vec![1, 1, 1, 3]).unwrap()));
        assert!(!is_wellformed_space(&WeightSystem::new(vec![2, 2, 3]).unwrap()));
        assert!(is_wellformed_space(&WeightSystem::new(vec![2, 3, 3, 3, 8]).unwrap()));
        assert!(!is_wellformed_space(&WeightSystem::new(vec![1, 2, 4, 6]).unwrap()));
    }

    #[test]
    fn volumes() {
        let v = volume(&fam(&[1, 1, 1, 3], &[6]));
        assert_eq!(v.o1_power, int(2));
        assert_eq!(v.canonical_power, int(0));
        let v = volume(&fam(&[1, 1, 1, 1, 4], &[5]));
        assert_eq!(v.o1_power, ratio(5, 4));
        assert_eq!(v.anticanonical_power, ratio(135, 4));
        assert_eq!(v.canonical_power, ratio(-135, 4));
        let v = volume(&fam(&[2, 3, 3, 3, 8], &[18]));
        assert_eq!(v.o1_power, ratio(1, 24));
        assert_eq!(v.anticanonical_power, ratio(1, 24));
    }

    #[test]
    fn volume_numerators_exceed_u64() {
        let f = fam(&[1; 12], &[u32::MAX as u64; 3]);
        let v = volume(&f);
        assert_eq!(v.o1_power, Rational::from_integer(BigInt::from(u32::MAX).pow(3)));
    }

    #[test]
    fn lift() {
        let f = fam(&[1, 1, 1, 3], &[6]);
        let g = cone_lift(&f);
        assert_eq!(g.weights().as_slice(), &[1, 1, 1, 1, 3]);
        assert_eq!((g.amplitude(), g.dim()), (-1, 3));
        let h = cone_lift(&fam(&[1, 1, 1, 1, 4], &[5]));
        assert_eq!(h.amplitude(), -4);
        let twice = cone_lift(&g);
        assert_eq!(twice.amplitude(), f.amplitude() - 2);
        assert_eq!(twice.weights().as_slice(), &[1, 1, 1, 1, 1, 3]);
    }
}
