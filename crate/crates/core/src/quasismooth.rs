//! Subset-wise quasismoothness conditions, stratum containment and well-formedness.
//!
//! For a nonempty subset `E` of the variables put `ρ_E = min(c, |E|)`. The
//! family passes at `E` when either
//!
//! 1. at least `ρ_E` equations have a monomial purely in the variables of `E`, or
//! 2. every equation without such a monomial can be paired with its own
//!    variable `x_e`, `e ∉ E`, through a monomial `x_e · Π_{i∈E} x_i^{k_i}`,
//!    the `e` being pairwise distinct.
//!
//! This is necessary for quasismoothness of a general member. For
//! hypersurfaces the strict mode asks, when (1) fails, for at least `|E|`
//! distinct such `e`, which is the classical sufficient test.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{wellformed_space_witness, CandidateFamily};
use crate::monomial::{
    distinct_assignment, external_candidates_with, representable, SemigroupTable, VariableSubset,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "necessary")]
    Necessary,
    #[serde(rename = "strict")]
    StrictHypersurface,
}

impl Mode {
    /// Strict mode only strengthens the test for hypersurfaces.
    pub fn effective(self, codim: usize) -> Mode {
        match self {
            Mode::StrictHypersurface if codim == 1 => Mode::StrictHypersurface,
            _ => Mode::Necessary,
        }
    }

    /// Default used by the enumerator: strict for hypersurfaces, necessary otherwise.
    pub fn default_for(codim: usize) -> Mode {
        Mode::StrictHypersurface.effective(codim)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Necessary => "necessary",
            Mode::StrictHypersurface => "strict",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "necessary" => Ok(Mode::Necessary),
            "strict" | "strict-hypersurface" => Ok(Mode::StrictHypersurface),
            other => Err(format!("unknown mode {other:?} (expected necessary|strict)")),
        }
    }
}

/// Pairing of the non-pure equations with distinct outside variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition2 {
    /// Number of equations with a pure monomial in `E`.
    pub l: usize,
    /// `(degree index, e)` for every remaining equation.
    pub assignment: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetReport {
    pub subset: VariableSubset,
    pub rho: usize,
    pub pure_count: usize,
    pub condition1: bool,
    pub condition2: Option<Condition2>,
    pub distinct_e_count: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QsVerdict {
    pub pass: bool,
    pub failing_subsets: Vec<SubsetReport>,
    pub mode: Mode,
}

fn evaluate(
    f: &CandidateFamily,
    subset: VariableSubset,
    mode: Mode,
    pure: impl Fn(u64) -> bool,
    candidates: impl Fn(u64) -> Vec<usize>,
) -> SubsetReport {
    let c = f.codim();
    let rho = c.min(subset.len());
    let mut pure_count = 0;
    let mut open: Vec<usize> = Vec::new();
    for (j, &d) in f.degrees().iter().enumerate() {
        if pure(d) {
            pure_count += 1;
        } else {
            open.push(j);
        }
    }
    let condition1 = pure_count >= rho;
    let reqs: Vec<Vec<usize>> = open.iter().map(|&j| candidates(f.degrees()[j])).collect();
    let mut union: Vec<usize> = reqs.iter().flatten().copied().collect();
    union.sort_unstable();
    union.dedup();
    let distinct_e_count = union.len();
    let condition2 = distinct_assignment(&reqs).map(|chosen| Condition2 {
        l: pure_count,
        assignment: open.iter().copied().zip(chosen).collect(),
    });
    let pass = condition1
        || match mode.effective(c) {
            Mode::Necessary => condition2.is_some(),
            Mode::StrictHypersurface => condition2.is_some() && distinct_e_count >= subset.len(),
        };
    SubsetReport { subset, rho, pure_count, condition1, condition2, distinct_e_count, pass }
}

/// Evaluates both conditions at one subset.
pub fn subset_report(f: &CandidateFamily, subset: VariableSubset, mode: Mode) -> Result<SubsetReport> {
    let w = f.weights();
    // re-validate the mask against this family
    let subset = VariableSubset::new(&subset.to_vec(), w.len())?;
    let inside = subset.weights(w);
    let a = w.as_slice();
    Ok(evaluate(
        f,
        subset,
        mode,
        |d| representable(d, &inside).is_some(),
        |d| {
            (0..a.len())
                .filter(|&e| !subset.contains(e) && d >= a[e])
                .filter(|&e| representable(d - a[e], &inside).is_some())
                .collect()
        },
    ))
}

/// Scans every nonempty subset; failures are listed smallest-first.
pub fn check_quasismooth(f: &CandidateFamily, mode: Mode) -> QsVerdict {
    let a = f.weights().as_slice();
    let table = SemigroupTable::new(a, f.degrees()[f.codim() - 1]);
    let failing_subsets: Vec<SubsetReport> = VariableSubset::all(a.len())
        .into_iter()
        .map(|s| report_with(&table, f, s, mode))
        .filter(|r| !r.pass)
        .collect();
    QsVerdict { pass: failing_subsets.is_empty(), failing_subsets, mode: mode.effective(f.codim()) }
}

fn report_with(table: &SemigroupTable, f: &CandidateFamily, s: VariableSubset, mode: Mode) -> SubsetReport {
    let a = f.weights().as_slice();
    evaluate(
        f,
        s,
        mode,
        |d| table.contains(s.mask(), d),
        |d| external_candidates_with(table, a, d, s),
    )
}

/// Verdict only, with early exit. Supersets of a subset on which every
/// equation already has a pure monomial are skipped.
pub fn is_quasismooth(f: &CandidateFamily, mode: Mode) -> bool {
    let a = f.weights().as_slice();
    let table = SemigroupTable::new(a, f.degrees()[f.codim() - 1]);
    is_quasismooth_with(&table, f, mode)
}

pub(crate) fn is_quasismooth_with(table: &SemigroupTable, f: &CandidateFamily, mode: Mode) -> bool {
    let nv = f.weights().len();
    let mut saturated: Vec<u32> = Vec::new();
    for s in VariableSubset::all(nv) {
        if saturated.iter().any(|&m| m & !s.mask() == 0) {
            continue;
        }
        let r = report_with(table, f, s, mode);
        if !r.pass {
            return false;
        }
        if r.pure_count == f.codim() {
            saturated.push(s.mask());
        }
    }
    true
}

/// For general equations, `P_E ⊂ X` iff no equation has a monomial in `E` alone.
pub fn stratum_contained(f: &CandidateFamily, subset: VariableSubset) -> bool {
    let inside = subset.weights(f.weights());
    f.degrees().iter().all(|&d| representable(d, &inside).is_none())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellFormedness {
    pub wellformed: bool,
    /// A singular stratum of the ambient space responsible for the failure:
    /// either a divisor stratum (ambient space not well-formed) or a
    /// codimension `c+1` stratum lying on `X`.
    pub witness: Option<VariableSubset>,
}

/// The ambient space must be well-formed and `X` may contain no singular
/// stratum of codimension `c + 1` in the ambient space.
pub fn check_wellformed_family(f: &CandidateFamily) -> WellFormedness {
    let w = f.weights();
    let nv = w.len();
    if let Some(i) = wellformed_space_witness(w) {
        let mask = ((1u64 << nv) - 1) as u32 & !(1 << i);
        return WellFormedness { wellformed: false, witness: Some(VariableSubset::from_mask(mask)) };
    }
    let size = f.n() - f.codim();
    if size == 0 {
        return WellFormedness { wellformed: true, witness: None };
    }
    let witness = VariableSubset::of_size(nv, size).find(|&s| {
        let g = s.indices().fold(0u64, |g, i| g.gcd(&w[i]));
        g > 1 && stratum_contained(f, s)
    });
    WellFormedness { wellformed: witness.is_none(), witness }
}
