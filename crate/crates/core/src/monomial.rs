//! Monomial existence (numerical-semigroup membership) and distinct representatives.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{CandidateFamily, WeightSystem, MAX_VARIABLES};

/// A nonempty set of variable indices, stored as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VariableSubset(u32);

impl VariableSubset {
    pub fn new(indices: &[usize], num_vars: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut mask = 0u32;
        for &i in indices {
            if i >= num_vars || i >= MAX_VARIABLES {
                return Err(Error::IndexOutOfRange { index: i, len: num_vars });
            }
            mask |= 1 << i;
        }
        Ok(VariableSubset(mask))
    }

    pub fn from_mask(mask: u32) -> Self {
        debug_assert!(mask != 0);
        VariableSubset(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn is_subset_of(self, other: VariableSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |i| mask & (1 << i) != 0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.indices().collect()
    }

    pub fn weights(self, w: &WeightSystem) -> Vec<u64> {
        self.indices().map(|i| w[i]).collect()
    }

    /// Every nonempty subset of `{0..num_vars}`, by size and then lexicographically.
    pub fn all(num_vars: usize) -> Vec<VariableSubset> {
        let mut out: Vec<Vec<usize>> = (1..=num_vars)
            .flat_map(|k| itertools::Itertools::combinations(0..num_vars, k))
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out.into_iter()
            .map(|v| VariableSubset(v.iter().fold(0, |m, &i| m | (1 << i))))
            .collect()
    }

    /// Subsets of a fixed size, lexicographically.
    pub fn of_size(num_vars: usize, k: usize) -> impl Iterator<Item = VariableSubset> {
        itertools::Itertools::combinations(0..num_vars, k)
            .map(|v| VariableSubset(v.iter().fold(0, |m, &i| m | (1 << i))))
    }
}

impl fmt::Display for VariableSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `Π x_i^{k_i}`, keyed by variable index; zero exponents are omitted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Monomial {
    pub exponents: BTreeMap<usize, u64>,
    pub degree: u64,
}

impl Monomial {
    pub fn is_constant(&self) -> bool {
        self.exponents.is_empty()
    }
}

/// Witness exponents for `d = Σ k_i w_i`, one entry per input weight.
///
/// The witness is the lexicographically smallest exponent vector when the
/// weights are read in ascending order (ties by position).
pub fn representable(d: u64, weights: &[u64]) -> Option<Vec<u64>> {
    if d == 0 {
        return Some(vec![0; weights.len()]);
    }
    let mut order: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 0).collect();
    order.sort_by_key(|&i| (weights[i], i));
    let limit = d as usize;
    // reach[k][v]: v is a sum of weights from order[k..]
    let mut reach = vec![vec![false; limit + 1]; order.len() + 1];
    reach[order.len()][0] = true;
    for k in (0..order.len()).rev() {
        let w = weights[order[k]] as usize;
        let (head, tail) = reach.split_at_mut(k + 1);
        let cur = &mut head[k];
        cur.copy_from_slice(&tail[0]);
        for v in w..=limit {
            if cur[v - w] {
                cur[v] = true;
            }
        }
    }
    if !reach[0][limit] {
        return None;
    }
    let mut exps = vec![0u64; weights.len()];
    let mut rem = limit;
    for (k, &pos) in order.iter().enumerate() {
        let w = weights[pos] as usize;
        let mut e = 0;
        while !reach[k + 1][rem - e * w] {
            e += 1;
        }
        exps[pos] = e as u64;
        rem -= e * w;
    }
    debug_assert_eq!(rem, 0);
    Some(exps)
}

/// Monomial of degree `d` in the variables of `subset`, if any.
pub fn representable_over(d: u64, weights: &WeightSystem, subset: VariableSubset) -> Option<Monomial> {
    let idx = subset.to_vec();
    let w: Vec<u64> = idx.iter().map(|&i| weights[i]).collect();
    representable(d, &w).map(|exps| Monomial {
        exponents: idx.into_iter().zip(exps).filter(|&(_, e)| e > 0).collect(),
        degree: d,
    })
}

/// Membership tables for every subset of a fixed weight system, up to a degree limit.
pub struct SemigroupTable {
    limit: u64,
    stride: usize,
    bits: Vec<bool>,
}

impl SemigroupTable {
    pub fn new(weights: &[u64], limit: u64) -> Self {
        let nv = weights.len();
        assert!(nv <= 20, "subset table limited to 20 variables");
        let stride = limit as usize + 1;
        let masks = 1usize << nv;
        let mut bits = vec![false; masks * stride];
        bits[0] = true;
        for mask in 1..masks {
            let low = mask.trailing_zeros() as usize;
            let prev = mask & (mask - 1);
            let w = weights[low] as usize;
            let (before, after) = bits.split_at_mut(mask * stride);
            let src = &before[prev * stride..prev * stride + stride];
            let dst = &mut after[..stride];
            dst.copy_from_slice(src);
            for v in w..stride {
                if dst[v - w] {
                    dst[v] = true;
                }
            }
        }
        SemigroupTable { limit, stride, bits }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Whether `d` is a nonnegative combination of the weights selected by `mask`.
    pub fn contains(&self, mask: u32, d: u64) -> bool {
        assert!(d <= self.limit, "degree {d} beyond table limit {}", self.limit);
        self.bits[mask as usize * self.stride + d as usize]
    }
}

/// Variables `e ∉ E` admitting a monomial `x_e · Π_{i∈E} x_i^{k_i}` of degree `d`.
pub fn external_candidates(d: u64, subset: VariableSubset, f: &CandidateFamily) -> BTreeSet<usize> {
    let w = f.weights();
    let inside = subset.weights(w);
    (0..w.len())
        .filter(|&e| !subset.contains(e))
        .filter(|&e| d >= w[e] && representable(d - w[e], &inside).is_some())
        .collect()
}

pub(crate) fn external_candidates_with(
    table: &SemigroupTable,
    weights: &[u64],
    d: u64,
    subset: VariableSubset,
) -> Vec<usize> {
    (0..weights.len())
        .filter(|&e| !subset.contains(e))
        .filter(|&e| d >= weights[e] && table.contains(subset.mask(), d - weights[e]))
        .collect()
}

/// A system of distinct representatives: `out[r]` is chosen from `requirements[r]`
/// and all choices differ. Computed by augmenting paths.
pub fn distinct_assignment<S>(requirements: &[S]) -> Option<Vec<usize>>
where
    S: AsRef<[usize]>,
{
    let mut owner: HashMap<usize, usize> = HashMap::new();
    for r in 0..requirements.len() {
        let mut seen = BTreeSet::new();
        if !augment(r, requirements, &mut owner, &mut seen) {
            return None;
        }
    }
    let mut out = vec![0; requirements.len()];
    for (item, r) in owner {
        out[r] = item;
    }
    Some(out)
}

fn augment<S: AsRef<[usize]>>(
    r: usize,
    reqs: &[S],
    owner: &mut HashMap<usize, usize>,
    seen: &mut BTreeSet<usize>,
) -> bool {
    for &item in reqs[r].as_ref() {
        if !seen.insert(item) {
            continue;
        }
        let free = match owner.get(&item) {
            None => true,
            Some(&other) => augment(other, reqs, owner, seen),
        };
        if free {
            owner.insert(item, r);
            return true;
        }
    }
    false
}
