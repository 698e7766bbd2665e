//! Cyclic quotient singularities at coordinate points and one-blowup
//! discrepancy witnesses.
//!
//! At a coordinate point `P_i ∈ X` with `a_i > 1`, each equation `f_j` has a
//! monomial `x_{e_j} · x_i^{k}` with distinct `e_j`. Eliminating the `x_{e_j}`
//! leaves a quotient `1/a_i(w_1, ..., w_m)` of smooth `m`-space, the `w_k`
//! being residues of the remaining weights. The weighted blowup with weights
//! `w_k / a_i` has discrepancy `Σw_k / a_i − 1`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::CandidateFamily;
use crate::monomial::{distinct_assignment, representable, VariableSubset};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicQuotientSingularity {
    pub point_index: usize,
    pub order: u64,
    pub local_weights: Vec<u64>,
    pub discrepancy: Rational,
    /// Variables eliminated by the implicit function theorem, one per equation.
    pub eliminated: Vec<usize>,
    /// Surviving weights divisible by the order; they were dropped from the
    /// local type and the record needs manual review.
    pub zero_residues: usize,
}

impl CyclicQuotientSingularity {
    pub fn needs_review(&self) -> bool {
        self.zero_residues > 0
    }
}

impl fmt::Display for CyclicQuotientSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.local_weights.iter().map(u64::to_string).collect();
        write!(f, "P_{}: 1/{}({})", self.point_index, self.order, w.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointAnalysis {
    /// Some equation has a pure power of `x_i`; always the case for `a_i = 1`.
    NotOnX,
    Quotient(CyclicQuotientSingularity),
    /// `P_i ∈ X` but the equations admit no distinct `x_{e_j} x_i^k` terms;
    /// such a family is not quasismooth.
    NoStructure,
}

impl PointAnalysis {
    pub fn singularity(&self) -> Option<&CyclicQuotientSingularity> {
        match self {
            PointAnalysis::Quotient(s) => Some(s),
            _ => None,
        }
    }
}

/// `0 < ε ≤ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KltParams {
    epsilon: Rational,
}

impl KltParams {
    pub fn new(epsilon: Rational) -> Result<Self> {
        if !rational::is_positive(&epsilon) || epsilon > rational::int(1) {
            return Err(Error::InvalidEpsilon(rational::to_pq(&epsilon)));
        }
        Ok(KltParams { epsilon })
    }

    pub fn one() -> Self {
        KltParams { epsilon: rational::int(1) }
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }
}

pub fn coordinate_point_analysis(f: &CandidateFamily, i: usize) -> Result<PointAnalysis> {
    let w = f.weights().as_slice();
    if i >= w.len() {
        return Err(Error::IndexOutOfRange { index: i, len: w.len() });
    }
    let r = w[i];
    if f.degrees().iter().any(|d| d % r == 0) {
        return Ok(PointAnalysis::NotOnX);
    }
    let reqs: Vec<Vec<usize>> = f
        .degrees()
        .iter()
        .map(|&d| {
            (0..w.len())
                .filter(|&e| e != i && d > w[e] && (d - w[e]).is_multiple_of(r))
                .collect()
        })
        .collect();
    let Some(eliminated) = distinct_assignment(&reqs) else {
        return Ok(PointAnalysis::NoStructure);
    };
    let mut local_weights = Vec::new();
    let mut zero_residues = 0;
    for (k, &a) in w.iter().enumerate() {
        if k == i || eliminated.contains(&k) {
            continue;
        }
        match a % r {
            0 => zero_residues += 1,
            res => local_weights.push(res),
        }
    }
    let discrepancy = blowup_discrepancy(r, &local_weights)?;
    Ok(PointAnalysis::Quotient(CyclicQuotientSingularity {
        point_index: i,
        order: r,
        local_weights,
        discrepancy,
        eliminated,
        zero_residues,
    }))
}

/// `Σw / r − 1` for the weighted blowup of `1/r(w_1..w_m)`.
pub fn blowup_discrepancy(r: u64, local_weights: &[u64]) -> Result<Rational> {
    if r < 2 {
        return Err(Error::InvalidQuotient(format!("order {r} < 2")));
    }
    if let Some(&w) = local_weights.iter().find(|&&w| w == 0 || w >= r) {
        return Err(Error::InvalidQuotient(format!("weight {w} outside [1, {r})")));
    }
    let sum: u64 = local_weights.iter().sum();
    Ok(rational::ratio(sum as i64, r as i64) - rational::int(1))
}

/// The same quotient written with generator `ζ^j`, `gcd(j, r) = 1`:
/// `1/r(j·w mod r)`. Each choice gives its own weighted blowup.
pub fn rewritten_weights(r: u64, local_weights: &[u64], j: u64) -> Vec<u64> {
    local_weights.iter().map(|&w| (j * w) % r).collect()
}

/// Smallest blowup discrepancy over all generator choices, with the generator.
pub fn min_generator_discrepancy(r: u64, local_weights: &[u64]) -> Result<(u64, Rational)> {
    let mut best = (1, blowup_discrepancy(r, local_weights)?);
    for j in 2..r {
        if j.gcd(&r) != 1 {
            continue;
        }
        let q = blowup_discrepancy(r, &rewritten_weights(r, local_weights, j))?;
        if q < best.1 {
            best = (j, q);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KltWitness {
    pub singularity: CyclicQuotientSingularity,
    /// Generator used to present the quotient for the witnessing blowup.
    pub generator: u64,
    pub discrepancy: Rational,
}

/// First coordinate point carrying a weighted blowup with discrepancy `≤ ε − 1`.
///
/// `None` does not certify that `X` is ε-klt.
pub fn epsilon_klt_witness(f: &CandidateFamily, params: &KltParams) -> Option<KltWitness> {
    let threshold = params.epsilon() - rational::int(1);
    (0..f.weights().len())
        .filter_map(|i| coordinate_point_analysis(f, i).ok())
        .filter_map(|p| match p {
            PointAnalysis::Quotient(s) => Some(s),
            _ => None,
        })
        .find_map(|s| {
            let (j, q) = min_generator_discrepancy(s.order, &s.local_weights).ok()?;
            (q <= threshold).then_some(KltWitness { singularity: s, generator: j, discrepancy: q })
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KltStatus {
    #[serde(rename = "witness")]
    Witness,
    #[serde(rename = "no-witness")]
    NoWitness,
    #[serde(rename = "unanalyzed")]
    Unanalyzed,
}

impl KltStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            KltStatus::Witness => "witness",
            KltStatus::NoWitness => "no-witness",
            KltStatus::Unanalyzed => "unanalyzed",
        }
    }
}

/// Singular strata of dimension ≥ 1 that meet `X` by a dimension count:
/// fewer equations survive on `P_F` than its number of coordinates.
pub fn singular_strata_meeting(f: &CandidateFamily) -> Vec<VariableSubset> {
    let w = f.weights();
    VariableSubset::all(w.len())
        .into_iter()
        .filter(|s| s.len() >= 2)
        .filter(|s| s.indices().fold(0u64, |g, i| g.gcd(&w[i])) > 1)
        .filter(|s| {
            let inside = s.weights(w);
            let surviving = f
                .degrees()
                .iter()
                .filter(|&&d| representable(d, &inside).is_some())
                .count();
            surviving < s.len()
        })
        .collect()
}

/// Coordinate-point singularities of a family, in point order. `Err` carries
/// the first point on `X` without the expected local structure.
pub fn coordinate_singularities(f: &CandidateFamily) -> std::result::Result<Vec<CyclicQuotientSingularity>, usize> {
    let mut out = Vec::new();
    for i in 0..f.weights().len() {
        match coordinate_point_analysis(f, i).expect("index in range") {
            PointAnalysis::Quotient(s) => out.push(s),
            PointAnalysis::NoStructure => return Err(i),
            PointAnalysis::NotOnX => {}
        }
    }
    Ok(out)
}

/// Tri-state summary: a certified witness wins, then any unexamined singular
/// locus, then "nothing found".
pub fn klt_status(f: &CandidateFamily, params: &KltParams) -> KltStatus {
    if epsilon_klt_witness(f, params).is_some() {
        return KltStatus::Witness;
    }
    let unexamined = coordinate_singularities(f).map_or(true, |s| s.iter().any(|s| s.needs_review()));
    if unexamined || !singular_strata_meeting(f).is_empty() {
        KltStatus::Unanalyzed
    } else {
        KltStatus::NoWitness
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn fam(w: &[u64], d: &[u64]) -> CandidateFamily {
        CandidateFamily::new(w.to_vec(), d.to_vec()).unwrap()
    }

    fn eps(p: i64, q: i64) -> KltParams {
        KltParams::new(ratio(p, q)).unwrap()
    }

    #[test]
    fn point_examples() {
        let f = fam(&[1, 1, 1, 1, 4], &[5]);
        let s = coordinate_point_analysis(&f, 4).unwrap();
        let s = s.singularity().unwrap();
        assert_eq!((s.order, s.local_weights.clone()), (4, vec![1, 1, 1]));
        assert_eq!(s.discrepancy, ratio(-1, 4));

        let g = fam(&[1, 1, 1, 3], &[6]);
        assert_eq!(coordinate_point_analysis(&g, 3).unwrap(), PointAnalysis::NotOnX);
        assert_eq!(coordinate_point_analysis(&g, 0).unwrap(), PointAnalysis::NotOnX);

        let h = fam(&[2, 3, 3, 3, 8], &[18]);
        let s = coordinate_point_analysis(&h, 4).unwrap();
        let s = s.singularity().unwrap();
        assert_eq!(s.eliminated, vec![0]);
        assert_eq!(s.local_weights, vec![3, 3, 3]);
        assert_eq!(s.discrepancy, ratio(1, 8));

        assert!(coordinate_point_analysis(&h, 5).is_err());
    }

    #[test]
    fn off_and_broken_points() {
        let f = fam(&[1, 1, 1, 2], &[5]);
        assert_eq!(coordinate_point_analysis(&f, 0).unwrap(), PointAnalysis::NotOnX);
        let s = coordinate_point_analysis(&f, 3).unwrap();
        assert_eq!(s.singularity().unwrap().local_weights, vec![1, 1]);
        // X_6 ⊂ P(1,1,4,5): P_2 on X with no x_e x_2^k term
        let g = fam(&[1, 1, 4, 5], &[6]);
        assert_eq!(coordinate_point_analysis(&g, 2).unwrap(), PointAnalysis::NoStructure);
        assert_eq!(coordinate_singularities(&g), Err(2));
    }

    #[test]
    fn zero_residue_is_flagged() {
        // P_1 of X_7 ⊂ P(1,2,2,4): both surviving weights vanish mod 2
        let f = fam(&[1, 2, 2, 4], &[7]);
        let s = coordinate_point_analysis(&f, 1).unwrap();
        let s = s.singularity().unwrap().clone();
        assert_eq!(s.eliminated, vec![0]);
        assert_eq!(s.zero_residues, 2);
        assert!(s.local_weights.is_empty());
        assert!(s.needs_review());
    }

    #[test]
    fn discrepancy_examples() {
        assert_eq!(blowup_discrepancy(4, &[1, 1, 1]).unwrap(), ratio(-1, 4));
        assert_eq!(blowup_discrepancy(8, &[3, 3, 3]).unwrap(), ratio(1, 8));
        assert_eq!(blowup_discrepancy(2, &[1, 1, 1]).unwrap(), ratio(1, 2));
        assert!(blowup_discrepancy(1, &[]).is_err());
        assert!(blowup_discrepancy(4, &[4]).is_err());
        assert!(blowup_discrepancy(4, &[0, 1]).is_err());
    }

    #[test]
    fn discrepancy_scaling() {
        // 1/5(1,2) and 1/10(2,4) describe the same ratios
        for (r, w, k) in [(5u64, vec![1u64, 2], 2u64), (7, vec![3, 1, 2], 3), (4, vec![1, 1, 1], 5)] {
            let scaled: Vec<u64> = w.iter().map(|x| x * k).collect();
            assert_eq!(
                blowup_discrepancy(r, &w).unwrap(),
                blowup_discrepancy(r * k, &scaled).unwrap()
            );
        }
    }

    #[test]
    fn generator_rewriting() {
        // 1/8(3,3,3) with generator 3 is 1/8(1,1,1)
        assert_eq!(rewritten_weights(8, &[3, 3, 3], 3), vec![1, 1, 1]);
        assert_eq!(min_generator_discrepancy(8, &[3, 3, 3]).unwrap(), (3, ratio(-5, 8)));
        assert_eq!(min_generator_discrepancy(4, &[1, 1, 1]).unwrap(), (1, ratio(-1, 4)));
    }

    #[test]
    fn witness_examples() {
        let f = fam(&[1, 1, 1, 1, 4], &[5]);
        let w = epsilon_klt_witness(&f, &eps(4, 5)).unwrap();
        assert_eq!(w.singularity.point_index, 4);
        assert_eq!(w.discrepancy, ratio(-1, 4));
        assert!(epsilon_klt_witness(&f, &eps(1, 2)).is_none());
        // boundary: q = ε − 1 violates q > ε − 1
        assert!(epsilon_klt_witness(&f, &eps(3, 4)).is_some());
        let g = fam(&[1, 1, 1, 3], &[6]);
        for e in [eps(1, 100), eps(1, 2), KltParams::one()] {
            assert!(epsilon_klt_witness(&g, &e).is_none());
        }
    }

    #[test]
    fn klt_params_validation() {
        assert!(KltParams::new(ratio(0, 1)).is_err());
        assert!(KltParams::new(ratio(5, 4)).is_err());
        assert!(KltParams::new(ratio(-1, 2)).is_err());
        assert!(KltParams::new(ratio(1, 1)).is_ok());
    }

    #[test]
    fn status_tri_state() {
        let g = fam(&[1, 1, 1, 3], &[6]);
        assert_eq!(klt_status(&g, &KltParams::one()), KltStatus::NoWitness);
        let f = fam(&[1, 1, 1, 1, 4], &[5]);
        assert_eq!(klt_status(&f, &eps(1, 2)), KltStatus::NoWitness);
        assert_eq!(klt_status(&f, &eps(4, 5)), KltStatus::Witness);
        // curve of 1/3 points along P(3,3,3)
        let h = fam(&[2, 3, 3, 3, 8], &[18]);
        assert_eq!(klt_status(&h, &eps(1, 10)), KltStatus::Unanalyzed);
        assert!(singular_strata_meeting(&h).iter().any(|s| s.to_vec() == vec![1, 2, 3]));
    }
}
