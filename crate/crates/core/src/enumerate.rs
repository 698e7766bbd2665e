//! Bounded enumeration of quasismooth families with fixed dimension and
//! amplitude.
//!
//! Weights are chosen top-down from `a_n` with their sum pinned to
//! `Σd − α`. Besides sortedness and the sum, the search uses three rules that
//! every quasismooth, linear-cone-free family obeys:
//!
//! * `a_{m+j} < d_j`, and more sharply `a_{j−1} ≤ d_j − a_{m+j}`: otherwise
//!   on `E = {m+j, ..., n}` the first `j` equations have no pure monomial and
//!   need `j` distinct partners among `x_0..x_{j−2}`;
//! * a weight `a_t > d_1` divides some `d_j`: otherwise `f_1` has no monomial
//!   at `P_t`;
//! * no weight equals a degree.

use itertools::Itertools;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::bounds::{self, BoundsQuery};
use crate::error::{Error, Result};
use crate::model::{is_wellformed_space, CandidateFamily, WeightSystem};
use crate::monomial::SemigroupTable;
use crate::quasismooth::{self, Mode};
use crate::rational::{self, Rational};
use crate::record::{self, FamilyRecord};
use crate::singularity::KltParams;

/// Membership tables cover every subset, so searches stay small.
pub const MAX_SEARCH_VARIABLES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchParams {
    pub m: usize,
    pub alpha: i64,
    pub codims: Vec<usize>,
    pub d_max: u64,
    pub a_max: Option<u64>,
    pub jobs: usize,
    /// `None` picks strict for hypersurfaces and necessary otherwise.
    pub mode: Option<Mode>,
    pub epsilon: Option<KltParams>,
}

impl SearchParams {
    pub fn new(m: usize, alpha: i64, codims: Vec<usize>, d_max: u64) -> Self {
        SearchParams { m, alpha, codims, d_max, a_max: None, jobs: 1, mode: None, epsilon: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidSearch("dimension must be positive".into()));
        }
        if self.codims.is_empty() || self.codims.contains(&0) {
            return Err(Error::InvalidSearch("codimensions must be positive".into()));
        }
        if self.jobs == 0 {
            return Err(Error::InvalidSearch("jobs must be positive".into()));
        }
        if let Some(&c) = self.codims.iter().find(|&&c| self.m + c + 1 > MAX_SEARCH_VARIABLES) {
            return Err(Error::TooManyVariables { got: self.m + c + 1, max: MAX_SEARCH_VARIABLES });
        }
        Ok(())
    }

    fn mode_for(&self, c: usize) -> Mode {
        self.mode.unwrap_or_else(|| Mode::default_for(c)).effective(c)
    }
}

/// Degree cap from the volume bound when none is given.
///
/// Without `b`, the known threefold bounds are used: `1/330` for Fano and
/// `1/420` for general type. `α = 0` has no effective cap.
pub fn default_degree_cap(
    m: usize,
    alpha: i64,
    codims: &[usize],
    b: Option<Rational>,
    epsilon: Option<KltParams>,
) -> Result<u64> {
    if alpha == 0 {
        return Err(Error::InvalidSearch("α = 0 has no effective degree cap; pass one".into()));
    }
    let b = match b {
        Some(b) => b,
        None if m == 3 && alpha > 0 => rational::ratio(1, 420),
        None if m == 3 => rational::ratio(1, 330),
        None => return Err(Error::InvalidSearch(format!("no default volume bound in dimension {m}"))),
    };
    let mut cap = 0u64;
    for &c in codims {
        let q = BoundsQuery { m, alpha, c: Some(c), b: b.clone(), epsilon: epsilon.clone() };
        let out = bounds::dc_bound(&q)?;
        let r = out.bounds().expect("α ≠ 0");
        let v = rational::floor(&r.dc_max)
            .to_u64()
            .ok_or_else(|| Error::InvalidSearch("degree cap out of range".into()))?;
        cap = cap.max(v);
    }
    Ok(cap)
}

struct Shape<'a> {
    m: usize,
    c: usize,
    degrees: &'a [u64],
}

impl Shape<'_> {
    /// Largest value `a_i` may take once `a_{k+1..n}` are fixed, ignoring the sum.
    fn cap(&self, i: usize, k: usize, prev: u64, w: &[u64]) -> i64 {
        let mut cap = prev as i64;
        if i > self.m {
            cap = cap.min(self.degrees[i - self.m - 1] as i64 - 1);
        }
        if i < self.c && self.m + i + 1 > k {
            cap = cap.min(self.degrees[i] as i64 - w[self.m + i + 1] as i64);
        }
        cap
    }

    /// Upper bound on `a_0 + ... + a_k` given `a_{k+1..n}` and `a_k ≤ prev`;
    /// `None` when some slot has no admissible value.
    fn rest_sup(&self, k: usize, prev: u64, w: &[u64]) -> Option<i64> {
        let mut caps = vec![0i64; k + 1];
        let mut above = prev as i64;
        for i in (0..=k).rev() {
            let c = self.cap(i, k, prev, w).min(above);
            if c < 1 {
                return None;
            }
            caps[i] = c;
            above = c;
        }
        let mut used = vec![false; k + 1];
        let mut total = 0i64;
        for j in 1..=self.c {
            let (lo, hi) = (j - 1, self.m + j);
            if hi <= k && !used[lo] && !used[hi] {
                used[lo] = true;
                used[hi] = true;
                total += (caps[lo] + caps[hi]).min(self.degrees[j - 1] as i64);
            }
        }
        total += (0..=k).filter(|&i| !used[i]).map(|i| caps[i]).sum::<i64>();
        Some(total)
    }

    fn admissible(&self, v: u64) -> bool {
        if self.degrees.contains(&v) {
            return false;
        }
        v <= self.degrees[0] || self.degrees.iter().any(|d| d % v == 0)
    }

    /// Values for `a_k` in descending order that keep the rest feasible.
    fn choices(&self, k: usize, prev: u64, remaining: i64, w: &[u64]) -> Vec<u64> {
        let hi = self.cap(k, k, prev, w).min(remaining);
        let mut w = w.to_vec();
        let mut out = Vec::new();
        let mut v = hi;
        while v >= 1 && v * (k as i64 + 1) >= remaining {
            let rest = remaining - v;
            w[k] = v as u64;
            let ok = if k == 0 {
                rest == 0
            } else {
                rest >= k as i64 && self.rest_sup(k - 1, v as u64, &w).is_some_and(|s| s >= rest)
            };
            if ok && self.admissible(v as u64) {
                out.push(v as u64);
            }
            v -= 1;
        }
        out
    }

    fn descend(&self, k: usize, remaining: i64, w: &mut Vec<u64>, leaf: &mut impl FnMut(&[u64])) {
        for v in self.choices(k, w[k + 1], remaining, w) {
            w[k] = v;
            if k == 0 {
                leaf(w);
            } else {
                self.descend(k - 1, remaining - v as i64, w, leaf);
            }
        }
        w[k] = 0;
    }
}

#[derive(Debug, Clone)]
struct Shard {
    c: usize,
    degrees: Vec<u64>,
    top: u64,
}

fn shards(p: &SearchParams) -> Vec<Shard> {
    let mut out = Vec::new();
    for &c in &p.codims {
        let n = p.m + c;
        for degrees in (2..=p.d_max).combinations_with_replacement(c) {
            let sum = degrees.iter().sum::<u64>() as i64 - p.alpha;
            if sum < n as i64 + 1 {
                continue;
            }
            let shape = Shape { m: p.m, c, degrees: &degrees };
            let prev = p.a_max.unwrap_or(u64::MAX / 4);
            let w = vec![0u64; n + 1];
            if shape.rest_sup(n, prev, &w).is_none_or(|s| s < sum) {
                continue;
            }
            for top in shape.choices(n, prev, sum, &w) {
                out.push(Shard { c, degrees: degrees.clone(), top });
            }
        }
    }
    out
}

fn run_shard(p: &SearchParams, s: &Shard) -> Vec<FamilyRecord> {
    let n = p.m + s.c;
    let shape = Shape { m: p.m, c: s.c, degrees: &s.degrees };
    let sum = s.degrees.iter().sum::<u64>() as i64 - p.alpha;
    let mode = p.mode_for(s.c);
    let params = p.epsilon.clone().unwrap_or_else(KltParams::one);
    let tag = format!("c={};d={:?};a_n={}", s.c, s.degrees, s.top);
    let mut out = Vec::new();
    let mut w = vec![0u64; n + 1];
    w[n] = s.top;
    shape.descend(n - 1, sum - s.top as i64, &mut w, &mut |weights| {
        if let Some(mut r) = accept(weights, &s.degrees, mode, &params, false) {
            r.provenance = Some(tag.clone());
            out.push(r);
        }
    });
    out
}

/// Leaf filters shared by both enumerators.
fn accept(weights: &[u64], degrees: &[u64], mode: Mode, params: &KltParams, full_scan: bool) -> Option<FamilyRecord> {
    let ws = WeightSystem::new(weights.to_vec()).ok()?;
    if !is_wellformed_space(&ws) {
        return None;
    }
    let f = CandidateFamily::new(weights.to_vec(), degrees.to_vec()).ok()?;
    if f.is_linear_cone() {
        return None;
    }
    let qs = if full_scan {
        quasismooth::check_quasismooth(&f, mode).pass
    } else {
        let table = SemigroupTable::new(weights, f.degrees()[f.codim() - 1]);
        quasismooth::is_quasismooth_with(&table, &f, mode)
    };
    if !qs || !quasismooth::check_wellformed_family(&f).wellformed {
        return None;
    }
    Some(record::classify(&f, mode, params).record)
}

fn in_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidSearch(e.to_string()))?;
    Ok(pool.install(work))
}

fn finish(mut records: Vec<FamilyRecord>) -> Vec<FamilyRecord> {
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    records.dedup_by(|a, b| a.sort_key() == b.sort_key());
    records
}

/// Every normalized, linear-cone-free, well-formed family with the given
/// shape and `d_c ≤ d_max` that passes the quasismoothness check, in
/// canonical order.
pub fn enumerate(p: &SearchParams) -> Result<Vec<FamilyRecord>> {
    p.validate()?;
    let shards = shards(p);
    let records = in_pool(p.jobs, || {
        shards.par_iter().flat_map_iter(|s| run_shard(p, s)).collect::<Vec<_>>()
    })?;
    Ok(finish(records))
}

/// Non-increasing tuples of `parts` positive integers summing to `sum`, the
/// largest at most `top`, written ascending.
fn partitions(sum: u64, parts: usize, top: u64, acc: &mut Vec<u64>, out: &mut impl FnMut(&[u64])) {
    if parts == 0 {
        if sum == 0 {
            let asc: Vec<u64> = acc.iter().rev().copied().collect();
            out(&asc);
        }
        return;
    }
    let hi = top.min(sum - (parts as u64 - 1));
    let lo = sum.div_ceil(parts as u64);
    for v in (lo..=hi).rev() {
        acc.push(v);
        partitions(sum - v, parts - 1, v, acc, out);
        acc.pop();
    }
}

/// Reference enumerator: every weight tuple with the right sum and every
/// degree tuple up to `d_max`, filtered by the full checks only.
pub fn enumerate_unpruned(p: &SearchParams) -> Result<Vec<FamilyRecord>> {
    p.validate()?;
    let params = p.epsilon.clone().unwrap_or_else(KltParams::one);
    let work: Vec<(usize, Vec<u64>)> = p
        .codims
        .iter()
        .flat_map(|&c| (1..=p.d_max).combinations_with_replacement(c).map(move |d| (c, d)))
        .collect();
    let records = in_pool(p.jobs, || {
        work.par_iter()
            .flat_map_iter(|(c, degrees)| {
                let n = p.m + c;
                let sum = degrees.iter().sum::<u64>() as i64 - p.alpha;
                let mode = p.mode_for(*c);
                let mut out = Vec::new();
                if sum > n as i64 {
                    let top = p.a_max.unwrap_or(sum as u64);
                    partitions(sum as u64, n + 1, top, &mut Vec::new(), &mut |w| {
                        out.extend(accept(w, degrees, mode, &params, true));
                    });
                }
                out
            })
            .collect::<Vec<_>>()
    })?;
    Ok(finish(records))
}

/// `X_{2ks} ⊂ P(2, kb_1, kb_2, kb_3, ks − 1)` with `s = b_1 + b_2 + b_3`.
pub fn jk_family(k: u64, b: [u64; 3]) -> Result<CandidateFamily> {
    if k.is_multiple_of(2) {
        return Err(Error::EvenTemplateParameter(k));
    }
    let s: u64 = b.iter().sum();
    CandidateFamily::new(vec![2, k * b[0], k * b[1], k * b[2], k * s - 1], vec![2 * k * s])
}

/// Classifies every template instance, triples outer and `k` inner.
pub fn jk_templates(ks: &[u64], triples: &[[u64; 3]], epsilon: Option<KltParams>) -> Result<Vec<FamilyRecord>> {
    if let Some(&k) = ks.iter().find(|&&k| k % 2 == 0) {
        return Err(Error::EvenTemplateParameter(k));
    }
    let mut out = Vec::new();
    for &b in triples {
        for &k in ks {
            let f = jk_family(k, b)?;
            let w: Vec<i64> = f.weights().as_slice().iter().map(|&x| x as i64).collect();
            let d: Vec<i64> = f.degrees().iter().map(|&x| x as i64).collect();
            let rep = record::check_one(&w, &d, epsilon.clone(), None)?;
            if let Some(r) = rep.record() {
                out.push(r.clone());
            }
        }
    }
    Ok(out)
}

/// K3 weight systems `(b_1, b_2, b_3, b_1+b_2+b_3)` among quasismooth
/// hypersurfaces of degree at most 100.
pub fn auto_triples(jobs: usize) -> Result<Vec<[u64; 3]>> {
    let mut p = SearchParams::new(2, 0, vec![1], 100);
    p.jobs = jobs;
    Ok(k3_records_to_triples(&enumerate(&p)?))
}

pub fn k3_records_to_triples(records: &[FamilyRecord]) -> Vec<[u64; 3]> {
    records
        .iter()
        .filter(|r| r.weights.len() == 4 && r.weights[3] == r.weights[0] + r.weights[1] + r.weights[2])
        .map(|r| [r.weights[0], r.weights[1], r.weights[2]])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(rs: &[FamilyRecord]) -> Vec<(Vec<u64>, Vec<u64>)> {
        rs.iter().map(|r| (r.weights.clone(), r.degrees.clone())).collect()
    }

    #[test]
    fn small_k3_list() {
        let rs = enumerate(&SearchParams::new(2, 0, vec![1], 6)).unwrap();
        assert_eq!(
            pairs(&rs),
            vec![
                (vec![1, 1, 1, 1], vec![4]),
                (vec![1, 1, 1, 2], vec![5]),
                (vec![1, 1, 1, 3], vec![6]),
                (vec![1, 1, 2, 2], vec![6]),
            ]
        );
        assert!(enumerate(&SearchParams::new(2, 0, vec![1], 3)).unwrap().is_empty());
        assert!(enumerate(&SearchParams::new(2, 0, vec![4], 20)).unwrap().is_empty());
    }

    #[test]
    fn pruned_matches_unpruned_small() {
        for (m, alpha, c, d) in [(2, 0, 1, 10), (1, 0, 1, 12), (2, -1, 2, 7), (2, 1, 1, 9)] {
            let p = SearchParams::new(m, alpha, vec![c], d);
            assert_eq!(
                pairs(&enumerate(&p).unwrap()),
                pairs(&enumerate_unpruned(&p).unwrap()),
                "m={m} α={alpha} c={c} d≤{d}"
            );
        }
    }

    #[test]
    fn partitions_are_complete() {
        let mut seen = Vec::new();
        partitions(7, 3, 7, &mut Vec::new(), &mut |w| seen.push(w.to_vec()));
        assert_eq!(seen.len(), 4);
        assert!(seen.iter().all(|w| w.iter().sum::<u64>() == 7 && w.windows(2).all(|p| p[0] <= p[1])));
    }

    #[test]
    fn weight_cap_is_applied() {
        let mut p = SearchParams::new(2, 0, vec![1], 12);
        p.a_max = Some(3);
        let rs = enumerate(&p).unwrap();
        assert!(!rs.is_empty());
        assert!(rs.iter().all(|r| r.weights[3] <= 3));
        assert_eq!(pairs(&rs), pairs(&enumerate_unpruned(&p).unwrap()));
    }

    #[test]
    fn jk_instances() {
        let f = jk_family(1, [1, 1, 1]).unwrap();
        assert_eq!(f.weights().as_slice(), &[1, 1, 1, 2, 2]);
        assert_eq!(f.degrees(), &[6]);
        let rs = jk_templates(&[1, 3], &[[1, 1, 1]], None).unwrap();
        assert!(rs.iter().all(|r| r.amplitude == -1));
        assert_eq!(rs[1].weights, vec![2, 3, 3, 3, 8]);
        assert_eq!(rs[1].singularities.iter().find(|s| s.r == 8).unwrap().local_type, vec![3, 3, 3]);
        assert!(jk_templates(&[2], &[[1, 1, 1]], None).is_err());
        assert!(jk_family(4, [1, 1, 1]).is_err());
    }

    #[test]
    fn default_caps() {
        assert_eq!(default_degree_cap(3, -1, &[1], None, None).unwrap(), 32995);
        assert_eq!(default_degree_cap(2, 1, &[1], Some(rational::int(1)), None).unwrap(), 64);
        assert!(default_degree_cap(2, 0, &[1], Some(rational::int(1)), None).is_err());
        assert!(default_degree_cap(2, -1, &[1], None, None).is_err());
    }
}
