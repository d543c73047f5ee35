//! Finite-shot simulation of the local settings `σx⊗σx`, `σy⊗σy`, `σz⊗σz`
//! on the joint output of a qubit channel, and the estimator that turns the
//! three count tables into a [`BoundReport`].
//!
//! Each setting yields the joint outcome `(r, s) ∈ {±1}²` for the reference
//! and system qubits. From one setting `σ` we read `⟨σ⊗σ⟩`, `⟨σ⊗I⟩` and
//! `⟨I⊗σ⟩`; those ten expectation values fix the system Bloch vector and every
//! projector of the families `B1`–`B3`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use crate::channels::Channel;
use crate::detection::{
    optimize_with, pauli_projector_decomposition, BasisSpec, BoundReport, PauliWeights,
};
use crate::entropy::{h2, ProbabilityVector};
use crate::error::{Error, Result};
use crate::linalg::{paulis, ComplexMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Setting {
    XX,
    YY,
    ZZ,
}

impl Setting {
    pub const ALL: [Setting; 3] = [Setting::XX, Setting::YY, Setting::ZZ];

    /// Index of the Pauli axis, `1..=3`.
    pub fn axis(self) -> usize {
        match self {
            Self::XX => 1,
            Self::YY => 2,
            Self::ZZ => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::XX => "XX",
            Self::YY => "YY",
            Self::ZZ => "ZZ",
        }
    }
}

/// Outcome pairs in count-table order.
pub const OUTCOMES: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

fn outcome_index(r: i8, s: i8) -> usize {
    match (r > 0, s > 0) {
        (true, true) => 0,
        (true, false) => 1,
        (false, true) => 2,
        (false, false) => 3,
    }
}

/// Counts of the four joint outcomes of one setting.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasurementRecord {
    pub setting: Setting,
    /// Indexed like [`OUTCOMES`].
    counts: [u64; 4],
    shots: u64,
}

impl MeasurementRecord {
    pub fn new(setting: Setting, counts: [u64; 4]) -> Result<Self> {
        let shots: u64 = counts.iter().sum();
        if shots == 0 {
            return Err(Error::InvalidParameter {
                name: "shots".into(),
                value: 0.0,
                reason: "a record needs at least one shot".into(),
            });
        }
        Ok(Self {
            setting,
            counts,
            shots,
        })
    }

    pub fn count(&self, r: i8, s: i8) -> u64 {
        self.counts[outcome_index(r, s)]
    }

    pub fn counts(&self) -> &[u64; 4] {
        &self.counts
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    /// `(⟨σ⊗I⟩, ⟨I⊗σ⟩, ⟨σ⊗σ⟩)` as sample means.
    pub fn moments(&self) -> (f64, f64, f64) {
        let n = self.shots as f64;
        let mut m = (0.0, 0.0, 0.0);
        for (&(r, s), &c) in OUTCOMES.iter().zip(&self.counts) {
            let c = c as f64;
            m.0 += r as f64 * c;
            m.1 += s as f64 * c;
            m.2 += (r * s) as f64 * c;
        }
        (m.0 / n, m.1 / n, m.2 / n)
    }
}

/// Exactly one record per setting. This is the estimator's only input.
#[derive(Clone, Debug, Serialize)]
pub struct SettingRecords {
    pub xx: MeasurementRecord,
    pub yy: MeasurementRecord,
    pub zz: MeasurementRecord,
}

impl SettingRecords {
    /// Sorts records by setting; a setting that is absent is an error and a
    /// repeated one keeps the last record.
    pub fn from_records(records: impl IntoIterator<Item = MeasurementRecord>) -> Result<Self> {
        let mut slots: [Option<MeasurementRecord>; 3] = [None, None, None];
        for r in records {
            let k = r.setting.axis() - 1;
            slots[k] = Some(r);
        }
        let [xx, yy, zz] = slots;
        Ok(Self {
            xx: xx.ok_or(Error::MissingSetting("XX"))?,
            yy: yy.ok_or(Error::MissingSetting("YY"))?,
            zz: zz.ok_or(Error::MissingSetting("ZZ"))?,
        })
    }

    pub fn get(&self, setting: Setting) -> &MeasurementRecord {
        match setting {
            Setting::XX => &self.xx,
            Setting::YY => &self.yy,
            Setting::ZZ => &self.zz,
        }
    }
}

/// The ten locally measurable expectation values, indexed by Pauli axis
/// `1..=3` (slot 0 unused).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Expectations {
    pub reference: [f64; 4],
    pub system: [f64; 4],
    pub correlation: [f64; 4],
}

impl Expectations {
    pub fn from_records(records: &SettingRecords) -> Self {
        let mut e = Self {
            reference: [0.0; 4],
            system: [0.0; 4],
            correlation: [0.0; 4],
        };
        for setting in Setting::ALL {
            let (r, s, rs) = records.get(setting).moments();
            let k = setting.axis();
            e.reference[k] = r;
            e.system[k] = s;
            e.correlation[k] = rs;
        }
        e
    }

    /// Exact values on the Choi state of a qubit channel.
    pub fn exact(ch: &Channel) -> Result<Self> {
        require_qubit(ch)?;
        let joint = ch.choi_output();
        let p = paulis();
        let ev = |a: &ComplexMatrix, b: &ComplexMatrix| -> Result<f64> {
            Ok(joint.matmul(&a.kron(b))?.trace()?.re)
        };
        let mut e = Self {
            reference: [0.0; 4],
            system: [0.0; 4],
            correlation: [0.0; 4],
        };
        for k in 1..4 {
            e.reference[k] = ev(&p[k], &p[0])?;
            e.system[k] = ev(&p[0], &p[k])?;
            e.correlation[k] = ev(&p[k], &p[k])?;
        }
        Ok(e)
    }

    /// `⟨σ_r ⊗ σ_s⟩` for a measurable string.
    fn string(&self, r: usize, s: usize) -> Option<f64> {
        match (r, s) {
            (0, 0) => Some(1.0),
            (k, 0) => Some(self.reference[k]),
            (0, k) => Some(self.system[k]),
            (k, l) if k == l => Some(self.correlation[k]),
            _ => None,
        }
    }

    fn projector_probability(&self, w: &PauliWeights) -> f64 {
        let mut p = 0.0;
        for (r, row) in w.iter().enumerate() {
            for (s, &x) in row.iter().enumerate() {
                if x != 0.0 {
                    p += x * self.string(r, s).expect("decompositions use measurable strings only");
                }
            }
        }
        p
    }

    /// Unclamped probability estimates for a qubit-family basis.
    pub fn probabilities(&self, spec: &BasisSpec) -> Result<[f64; 4]> {
        let ws = pauli_projector_decomposition(spec)?;
        Ok(ws.map(|w| self.projector_probability(&w)))
    }

    /// `S(E(I/2))` from the system Bloch vector, clamped to the unit ball.
    pub fn output_entropy(&self) -> f64 {
        let r = self.system[1..].iter().map(|x| x * x).sum::<f64>().sqrt().min(1.0);
        h2((1.0 + r) / 2.0)
    }
}

fn require_qubit(ch: &Channel) -> Result<()> {
    if ch.d_in() != 2 || ch.d_out() != 2 {
        return Err(Error::NotQubit {
            d_in: ch.d_in(),
            d_out: ch.d_out(),
        });
    }
    Ok(())
}

/// Exact probabilities of the four joint outcomes of `setting`, ordered like
/// [`OUTCOMES`].
pub fn outcome_probabilities(ch: &Channel, setting: Setting) -> Result<[f64; 4]> {
    require_qubit(ch)?;
    let joint = ch.choi_output();
    let p = paulis();
    let sigma = &p[setting.axis()];
    let half = |sign: i8| (&p[0] + &sigma.scale_real(sign as f64)).scale_real(0.5);
    let mut out = [0.0; 4];
    for (slot, &(r, s)) in out.iter_mut().zip(OUTCOMES.iter()) {
        let proj = half(r).kron(&half(s));
        *slot = joint.matmul(&proj)?.trace()?.re.max(0.0);
    }
    Ok(out)
}

/// Draws `shots` joint outcomes of one setting. The stream is fixed by
/// `(seed, setting)`, so records for different settings are independent and
/// each is reproducible on its own.
pub fn sample(ch: &Channel, setting: Setting, shots: u64, seed: u64) -> Result<MeasurementRecord> {
    if shots == 0 {
        return Err(Error::InvalidParameter {
            name: "shots".into(),
            value: 0.0,
            reason: "must be at least 1".into(),
        });
    }
    let probs = outcome_probabilities(ch, setting)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(setting.axis() as u64);

    // multinomial as a chain of conditional binomials
    let mut counts = [0u64; 4];
    let mut remaining = shots;
    let mut mass = 1.0;
    for k in 0..3 {
        if remaining == 0 {
            break;
        }
        let q = if mass > 0.0 { (probs[k] / mass).clamp(0.0, 1.0) } else { 0.0 };
        let n = Binomial::new(remaining, q)
            .expect("probability clamped to [0, 1]")
            .sample(&mut rng);
        counts[k] = n;
        remaining -= n;
        mass -= probs[k];
    }
    counts[3] = remaining;
    MeasurementRecord::new(setting, counts)
}

pub fn sample_all(ch: &Channel, shots: u64, seed: u64) -> Result<SettingRecords> {
    SettingRecords::from_records(
        Setting::ALL
            .iter()
            .map(|&s| sample(ch, s, shots, seed))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// Which qubit basis the estimator reports on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BasisChoice {
    Fixed(BasisSpec),
    Optimize,
}

/// Bound report from measured statistics.
pub fn estimate_report(records: &SettingRecords, choice: BasisChoice) -> Result<BoundReport> {
    estimate_from_expectations(&Expectations::from_records(records), choice)
}

/// Bound report from expectation values; with exact values this reproduces
/// the noiseless detection pipeline.
pub fn estimate_from_expectations(e: &Expectations, choice: BasisChoice) -> Result<BoundReport> {
    let s = e.output_entropy();
    match choice {
        BasisChoice::Fixed(spec) => {
            let (p, clamped) = ProbabilityVector::clamp_renormalize(&e.probabilities(&spec)?)?;
            Ok(BoundReport::new(s, p, spec, 2, clamped))
        }
        BasisChoice::Optimize => optimize_with(s, |spec| {
            e.probabilities(spec).expect("optimizer only visits qubit families")
        }),
    }
}
