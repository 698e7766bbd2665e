//! Full classification of a single family and its serialized form.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{self, CandidateFamily, ConeStep, Reduced};
use crate::quasismooth::{self, Mode, QsVerdict, WellFormedness};
use crate::rational;
use crate::singularity::{
    self, CyclicQuotientSingularity, KltParams, KltStatus, KltWitness, PointAnalysis,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityEntry {
    pub point: usize,
    pub r: u64,
    #[serde(rename = "type")]
    pub local_type: Vec<u64>,
    pub discrepancy: String,
}

impl From<&CyclicQuotientSingularity> for SingularityEntry {
    fn from(s: &CyclicQuotientSingularity) -> Self {
        SingularityEntry {
            point: s.point_index,
            r: s.order,
            local_type: s.local_weights.clone(),
            discrepancy: rational::to_pq(&s.discrepancy),
        }
    }
}

/// One line of JSONL output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub weights: Vec<u64>,
    pub degrees: Vec<u64>,
    pub dim: usize,
    pub codim: usize,
    pub amplitude: i64,
    pub delta: i64,
    pub o1_volume: String,
    pub k_volume: String,
    pub wellformed: bool,
    pub quasismooth: String,
    pub qs_mode: String,
    pub singularities: Vec<SingularityEntry>,
    pub klt_status: KltStatus,
    #[serde(skip)]
    pub provenance: Option<String>,
    #[serde(skip)]
    pub reduction: Vec<ConeStep>,
}

impl FamilyRecord {
    pub fn family(&self) -> Result<CandidateFamily> {
        CandidateFamily::new(self.weights.clone(), self.degrees.clone())
    }

    pub fn is_quasismooth(&self) -> bool {
        self.quasismooth == "pass"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    /// Canonical order: codimension, then degrees, then weights.
    pub fn sort_key(&self) -> (usize, &[u64], &[u64]) {
        (self.codim, &self.degrees, &self.weights)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub record: FamilyRecord,
    pub verdict: QsVerdict,
    pub wellformedness: WellFormedness,
    pub points: Vec<PointAnalysis>,
    pub witness: Option<KltWitness>,
}

/// Classifies a family that is already normalized and free of linear cones.
pub fn classify(f: &CandidateFamily, mode: Mode, params: &KltParams) -> Classification {
    let verdict = quasismooth::check_quasismooth(f, mode);
    let wellformedness = quasismooth::check_wellformed_family(f);
    let points: Vec<PointAnalysis> = (0..f.weights().len())
        .map(|i| singularity::coordinate_point_analysis(f, i).expect("index in range"))
        .collect();
    let (witness, klt_status) = if verdict.pass {
        (singularity::epsilon_klt_witness(f, params), singularity::klt_status(f, params))
    } else {
        (None, KltStatus::Unanalyzed)
    };
    let vol = model::volume(f);
    let record = FamilyRecord {
        weights: f.weights().as_slice().to_vec(),
        degrees: f.degrees().to_vec(),
        dim: f.dim(),
        codim: f.codim(),
        amplitude: f.amplitude(),
        delta: f.delta_profile().total,
        o1_volume: rational::to_pq(&vol.o1_power),
        k_volume: rational::to_pq(&vol.canonical_power),
        wellformed: wellformedness.wellformed,
        quasismooth: if verdict.pass { "pass" } else { "fail" }.to_string(),
        qs_mode: verdict.mode.as_str().to_string(),
        singularities: points
            .iter()
            .filter_map(PointAnalysis::singularity)
            .map(SingularityEntry::from)
            .collect(),
        klt_status,
        provenance: None,
        reduction: Vec::new(),
    };
    Classification { record, verdict, wellformedness, points, witness }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Classified(Box<Classification>),
    /// Every equation was linear; the weights of the remaining space.
    Ambient(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub input: CandidateFamily,
    pub steps: Vec<ConeStep>,
    pub outcome: CheckOutcome,
}

impl CheckReport {
    pub fn classification(&self) -> Option<&Classification> {
        match &self.outcome {
            CheckOutcome::Classified(c) => Some(c),
            CheckOutcome::Ambient(_) => None,
        }
    }

    pub fn record(&self) -> Option<&FamilyRecord> {
        self.classification().map(|c| &c.record)
    }

    /// Quasismooth and well-formed.
    pub fn passed(&self) -> bool {
        self.record().is_some_and(|r| r.is_quasismooth() && r.wellformed)
    }
}

/// Normalizes, strips linear cones and classifies what is left.
///
/// `mode` defaults to strict for hypersurfaces and necessary otherwise; ε
/// defaults to 1.
pub fn check_one(
    weights: &[i64],
    degrees: &[i64],
    eps: Option<KltParams>,
    mode: Option<Mode>,
) -> Result<CheckReport> {
    let input = model::normalize_family(weights, degrees)?;
    let reduction = model::linear_cone_reduce(&input);
    let params = eps.unwrap_or_else(KltParams::one);
    let outcome = match reduction.reduced {
        Reduced::Ambient(w) => CheckOutcome::Ambient(w),
        Reduced::Family(f) => {
            let mode = mode.unwrap_or_else(|| Mode::default_for(f.codim()));
            let mut c = classify(&f, mode, &params);
            c.record.reduction = reduction.steps.clone();
            CheckOutcome::Classified(Box::new(c))
        }
    };
    Ok(CheckReport { input, steps: reduction.steps, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn worked_example() {
        let rep = check_one(&[1, 1, 1, 1, 4], &[5], None, None).unwrap();
        let r = rep.record().unwrap();
        assert!(r.is_quasismooth());
        assert_eq!((r.amplitude, r.delta), (-3, 1));
        assert_eq!(r.singularities.len(), 1);
        let s = &r.singularities[0];
        assert_eq!((s.point, s.r, s.local_type.clone()), (4, 4, vec![1, 1, 1]));
        assert_eq!(s.discrepancy, "-1/4");
        assert_eq!(r.o1_volume, "5/4");
        assert_eq!(r.k_volume, "-135/4");
        assert_eq!(r.klt_status, KltStatus::Witness);
        let half = KltParams::new(ratio(1, 2)).unwrap();
        let rep = check_one(&[1, 1, 1, 1, 4], &[5], Some(half), None).unwrap();
        assert_eq!(rep.record().unwrap().klt_status, KltStatus::NoWitness);
    }

    #[test]
    fn failing_examples() {
        let rep = check_one(&[1, 1, 4, 5], &[6], None, None).unwrap();
        let c = rep.classification().unwrap();
        assert!(!c.verdict.pass);
        assert_eq!(c.verdict.failing_subsets[0].subset.to_vec(), vec![2]);
        assert!(!rep.passed());

        let rep = check_one(&[1, 1, 2, 2], &[5], None, None).unwrap();
        let c = rep.classification().unwrap();
        assert!(!c.wellformedness.wellformed);
        assert_eq!(c.wellformedness.witness.unwrap().to_vec(), vec![2, 3]);
    }

    #[test]
    fn linear_cones_are_reduced() {
        let rep = check_one(&[1, 1, 1, 1, 2], &[2, 4], None, None).unwrap();
        assert_eq!(rep.steps.len(), 1);
        assert_eq!(rep.record().unwrap().weights, vec![1, 1, 1, 1]);
        let rep = check_one(&[1, 1, 2], &[2], None, None).unwrap();
        assert_eq!(rep.outcome, CheckOutcome::Ambient(vec![1, 1]));
        assert!(!rep.passed());
    }

    #[test]
    fn json_shape() {
        let rep = check_one(&[1, 1, 1, 3], &[6], None, None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&rep.record().unwrap().to_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = vec![
            "weights", "degrees", "dim", "codim", "amplitude", "delta", "o1_volume", "k_volume",
            "wellformed", "quasismooth", "qs_mode", "singularities", "klt_status",
        ];
        expected.sort_unstable();
        let mut keys = keys;
        keys.sort_unstable();
        assert_eq!(keys, expected);
        assert_eq!(v["klt_status"], "no-witness");
        assert_eq!(v["qs_mode"], "strict");
        assert_eq!(v["o1_volume"], "2/1");
        assert_eq!(v["k_volume"], "0/1");
    }
}
