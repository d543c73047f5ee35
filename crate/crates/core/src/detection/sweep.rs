//! Parameter sweeps over the built-in channel families.
//!
//! A sweep is the cartesian product of its axes, first axis outermost. Points
//! are evaluated in parallel and returned in that order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{default_basis, optimize_qdet, q_det, Basis, BasisFamily, BasisSpec, BoundReport};
use crate::channels::{self, Channel};
use crate::entropy::reference::{self, ReferenceValue};
use crate::error::{Error, Result};
use crate::shotsim::{self, BasisChoice, Expectations};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Identity,
    Dephasing,
    Depolarizing,
    Pauli,
    GeneralizedPauli,
    Erasure,
    AmplitudeDamping,
    TwoKraus,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 8] = [
        Self::Identity,
        Self::Dephasing,
        Self::Depolarizing,
        Self::Pauli,
        Self::GeneralizedPauli,
        Self::Erasure,
        Self::AmplitudeDamping,
        Self::TwoKraus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::Dephasing => "dephasing",
            Self::Depolarizing => "depolarizing",
            Self::Pauli => "pauli",
            Self::GeneralizedPauli => "generalized-pauli",
            Self::Erasure => "erasure",
            Self::AmplitudeDamping => "amplitude-damping",
            Self::TwoKraus => "two-kraus",
        }
    }

    /// Parameters the family accepts. For `pauli` they are optional and
    /// default to zero; every other listed parameter is required.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            Self::Identity | Self::GeneralizedPauli => &[],
            Self::Dephasing | Self::Depolarizing | Self::Erasure => &["p"],
            Self::Pauli => &["px", "py", "pz"],
            Self::AmplitudeDamping => &["gamma"],
            Self::TwoKraus => &["alpha", "beta"],
        }
    }

    /// Whether the family is only defined for qubits.
    pub fn qubit_only(self) -> bool {
        matches!(self, Self::Pauli | Self::AmplitudeDamping | Self::TwoKraus)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::Config(format!("unknown channel family `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub enum ChannelSource {
    Family(FamilyKind),
    /// A fixed channel, e.g. loaded from a JSON document. It has no
    /// parameters, so sweeping it is an error.
    Custom(Channel),
}

/// Everything needed to build the channel at one parameter point.
#[derive(Clone, Debug)]
pub struct ChannelSpec {
    pub source: ChannelSource,
    pub dim: usize,
    /// Fixed parameter values; sweep axes override them.
    pub params: BTreeMap<String, f64>,
    /// Weyl weights for `generalized-pauli`, or the four Pauli weights.
    pub weights: Option<Vec<f64>>,
}

/// Channel plus whatever closed-form references are known at that point.
#[derive(Clone, Debug)]
pub struct Instance {
    pub channel: Channel,
    pub capacity: Option<ReferenceValue>,
    pub hashing_bound: Option<f64>,
    pub upper_bound: Option<f64>,
}

impl Instance {
    fn bare(channel: Channel) -> Self {
        Self {
            channel,
            capacity: None,
            hashing_bound: None,
            upper_bound: None,
        }
    }
}

impl ChannelSpec {
    pub fn family(kind: FamilyKind, dim: usize) -> Self {
        Self {
            source: ChannelSource::Family(kind),
            dim,
            params: BTreeMap::new(),
            weights: None,
        }
    }

    pub fn custom(channel: Channel) -> Self {
        Self {
            dim: channel.d_in(),
            source: ChannelSource::Custom(channel),
            params: BTreeMap::new(),
            weights: None,
        }
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = Some(weights);
        self
    }

    /// Rejects parameter names the family does not know and dimensions it
    /// does not support, before any point is evaluated.
    pub fn check(&self, axes: &[Axis]) -> Result<()> {
        let names = self.params.keys().map(String::as_str).chain(axes.iter().map(|a| a.name.as_str()));
        match &self.source {
            ChannelSource::Custom(_) => {
                if let Some(n) = names.into_iter().next() {
                    return Err(Error::Config(format!(
                        "custom channels have no parameters, got `{n}`"
                    )));
                }
            }
            ChannelSource::Family(kind) => {
                for n in names {
                    if !kind.parameters().contains(&n) {
                        return Err(Error::Config(format!(
                            "`{kind}` has no parameter `{n}` (accepted: {})",
                            kind.parameters().join(", ")
                        )));
                    }
                }
                if kind.qubit_only() && self.dim != 2 {
                    return Err(Error::Config(format!("`{kind}` is a qubit channel, dim must be 2")));
                }
                if *kind == FamilyKind::Pauli
                    && self.weights.is_some()
                    && (!self.params.is_empty() || !axes.is_empty())
                {
                    return Err(Error::Config("pauli takes either weights or px/py/pz, not both".into()));
                }
            }
        }
        let mut seen = Vec::new();
        for a in axes {
            if seen.contains(&a.name.as_str()) {
                return Err(Error::Config(format!("axis `{}` given twice", a.name)));
            }
            seen.push(a.name.as_str());
        }
        Ok(())
    }

    /// Builds the channel at `point`, falling back to fixed parameters.
    pub fn instantiate(&self, point: &[(String, f64)]) -> Result<Instance> {
        let kind = match &self.source {
            ChannelSource::Custom(ch) => return Ok(Instance::bare(ch.clone())),
            ChannelSource::Family(k) => *k,
        };
        let get = |name: &str| -> Option<f64> {
            point
                .iter()
                .find(|(n, _)| n == name)
                .map(|&(_, v)| v)
                .or_else(|| self.params.get(name).copied())
        };
        let need = |name: &'static str| {
            get(name).ok_or_else(|| Error::Config(format!("`{kind}` needs parameter `{name}`")))
        };
        let d = self.dim;
        Ok(match kind {
            FamilyKind::Identity => Instance {
                capacity: Some(ReferenceValue::Exact((d as f64).log2())),
                ..Instance::bare(Channel::identity(d))
            },
            FamilyKind::Dephasing => {
                let p = need("p")?;
                Instance {
                    capacity: Some(reference::capacity_dephasing(p, d)?),
                    ..Instance::bare(channels::make_dephasing(p, d, None)?)
                }
            }
            FamilyKind::Depolarizing => {
                let p = need("p")?;
                Instance {
                    hashing_bound: Some(reference::hashing_bound(p, d)?),
                    upper_bound: (d == 2).then(|| reference::depolarizing_upper(p)),
                    ..Instance::bare(channels::make_depolarizing(p, d)?)
                }
            }
            FamilyKind::Pauli => {
                let w: [f64; 4] = match &self.weights {
                    Some(w) => w.as_slice().try_into().map_err(|_| {
                        Error::Config(format!("pauli needs 4 weights, got {}", w.len()))
                    })?,
                    None => {
                        let (x, y, z) = (get("px").unwrap_or(0.0), get("py").unwrap_or(0.0), get("pz").unwrap_or(0.0));
                        [1.0 - x - y - z, x, y, z]
                    }
                };
                Instance {
                    hashing_bound: Some(reference::pauli_hashing_bound(&w, 2)),
                    ..Instance::bare(channels::make_pauli(w)?)
                }
            }
            FamilyKind::GeneralizedPauli => {
                let w = self
                    .weights
                    .as_deref()
                    .ok_or_else(|| Error::Config("generalized-pauli needs weights".into()))?;
                Instance {
                    hashing_bound: Some(reference::pauli_hashing_bound(w, d)),
                    ..Instance::bare(channels::make_generalized_pauli(w, d)?)
                }
            }
            FamilyKind::Erasure => {
                let p = need("p")?;
                Instance {
                    capacity: Some(ReferenceValue::Exact(reference::capacity_erasure(p, d)?)),
                    ..Instance::bare(channels::make_erasure(p, d)?)
                }
            }
            FamilyKind::AmplitudeDamping => {
                let g = need("gamma")?;
                Instance {
                    capacity: Some(ReferenceValue::Exact(reference::capacity_amplitude_damping(g)?)),
                    ..Instance::bare(channels::make_amplitude_damping(g)?)
                }
            }
            FamilyKind::TwoKraus => {
                let (a, b) = (need("alpha")?, need("beta")?);
                Instance {
                    capacity: Some(ReferenceValue::Exact(reference::capacity_two_kraus(a, b))),
                    ..Instance::bare(channels::make_two_kraus(a, b)?)
                }
            }
        })
    }
}

/// One swept parameter, `start..=stop` in steps of `step`.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(name: &str, start: f64, stop: f64, step: f64) -> Result<Self> {
        if step <= 0.0 || !step.is_finite() {
            return Err(Error::Config(format!("sweep step must be positive, got {step}")));
        }
        if !start.is_finite() || !stop.is_finite() || stop < start {
            return Err(Error::Config(format!("bad sweep range {start}..{stop}")));
        }
        Ok(Self {
            name: name.to_string(),
            start,
            stop,
            step,
        })
    }

    /// Grid values, rounded to 12 decimals; `stop` is included when it lies
    /// on the grid up to rounding, and is then returned exactly.
    pub fn values(&self) -> Vec<f64> {
        let span = (self.stop - self.start) / self.step;
        let n = (span + 1e-9).floor() as usize;
        // snapping to 12 decimals turns 0.30000000000000004 back into 0.3
        let mut v: Vec<f64> = (0..=n)
            .map(|k| ((self.start + self.step * k as f64) * 1e12).round() / 1e12)
            .collect();
        if (span - n as f64).abs() < 1e-9 {
            v[n] = self.stop;
        }
        v
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// `name:start:stop:step`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [name, start, stop, step] = parts[..] else {
            return Err(Error::Config(format!("expected name:start:stop:step, got `{s}`")));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("`{t}` is not a number in `{s}`")))
        };
        Axis::new(name.trim(), num(start)?, num(stop)?, num(step)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    /// Finite-shot estimates from the three local settings. The point with
    /// index `k` is sampled with seed `seed + k`.
    Shots { shots: u64, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub params: Vec<(String, f64)>,
    pub q_det_optimized: f64,
    /// Fixed Bell-type basis; absent for erasure channels, whose only
    /// built-in basis is the flag-augmented one.
    pub q_det_bell: Option<f64>,
    pub output_entropy: f64,
    pub shannon: f64,
    pub capacity: Option<f64>,
    pub capacity_exact: Option<bool>,
    pub hashing_bound: Option<f64>,
    pub upper_bound: Option<f64>,
    pub ce_lower: f64,
    pub p_lower: f64,
    pub family: BasisFamily,
    pub theta1: f64,
    pub theta2: f64,
    pub clamped: bool,
}

impl SweepRow {
    fn new(params: Vec<(String, f64)>, best: &BoundReport, bell: Option<f64>, inst: &Instance) -> Self {
        Self {
            params,
            q_det_optimized: best.q_det,
            q_det_bell: bell,
            output_entropy: best.output_entropy,
            shannon: best.shannon_entropy,
            capacity: inst.capacity.map(ReferenceValue::value),
            capacity_exact: inst.capacity.map(ReferenceValue::is_exact),
            hashing_bound: inst.hashing_bound,
            upper_bound: inst.upper_bound,
            ce_lower: best.ce_lower,
            p_lower: best.p_lower,
            family: best.basis.family,
            theta1: best.basis.theta1,
            theta2: best.basis.theta2,
            clamped: best.clamped,
        }
    }
}

/// Evaluates a single point. `index` only matters in shot mode.
pub fn evaluate(spec: &ChannelSpec, point: &[(String, f64)], mode: Mode, index: u64) -> Result<SweepRow> {
    let inst = spec.instantiate(point)?;
    let ch = &inst.channel;
    let qubit = ch.d_in() == 2 && ch.d_out() == 2;
    let (best, bell) = match mode {
        Mode::Exact if qubit => {
            let best = optimize_qdet(ch)?;
            let bell = q_det(ch, &Basis::build(&BasisSpec::bell())?)?;
            (best, Some(bell.q_det))
        }
        Mode::Exact => {
            let spec = default_basis(ch)?;
            let r = q_det(ch, &Basis::build(&spec)?)?;
            let bell = (spec.family == BasisFamily::GeneralizedBell).then_some(r.q_det);
            (r, bell)
        }
        Mode::Shots { shots, seed } => {
            if !qubit {
                return Err(Error::NotQubit {
                    d_in: ch.d_in(),
                    d_out: ch.d_out(),
                });
            }
            let records = shotsim::sample_all(ch, shots, seed.wrapping_add(index))?;
            let e = Expectations::from_records(&records);
            let best = shotsim::estimate_from_expectations(&e, BasisChoice::Optimize)?;
            let bell = shotsim::estimate_from_expectations(&e, BasisChoice::Fixed(BasisSpec::bell()))?;
            (best, Some(bell.q_det))
        }
    };
    Ok(SweepRow::new(point.to_vec(), &best, bell, &inst))
}

/// All points of the axes' cartesian product, first axis outermost. No axes
/// gives the single point of the fixed parameters.
pub fn grid_points(axes: &[Axis]) -> Vec<Vec<(String, f64)>> {
    let mut points = vec![Vec::new()];
    for axis in axes {
        let values = axis.values();
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push((axis.name.clone(), v));
                    q
                })
            })
            .collect();
    }
    points
}

pub fn sweep(spec: &ChannelSpec, axes: &[Axis], mode: Mode) -> Result<Vec<SweepRow>> {
    spec.check(axes)?;
    if let Mode::Shots { shots: 0, .. } = mode {
        return Err(Error::Config("shot mode needs at least one shot".into()));
    }
    grid_points(axes)
        .par_iter()
        .enumerate()
        .map(|(k, point)| evaluate(spec, point, mode, k as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::h2;

    #[test]
    fn axis_values_include_stop() {
        let a: Axis = "p:0:0.25:0.005".parse().unwrap();
        let v = a.values();
        assert_eq!(v.len(), 51);
        assert_eq!(v[50], 0.25);
        let b = Axis::new("x", 0.0, 1.0, 0.3).unwrap();
        assert_eq!(b.values().len(), 4);
        assert!("p:0:1".parse::<Axis>().is_err());
        assert!("p:0:1:0".parse::<Axis>().is_err());
        assert!("p:1:0:0.1".parse::<Axis>().is_err());
    }

    #[test]
    fn grid_is_long_format_and_ordered() {
        let axes = [Axis::new("alpha", 0.0, 1.0, 0.5).unwrap(), Axis::new("beta", 0.0, 0.2, 0.1).unwrap()];
        let pts = grid_points(&axes);
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[1], vec![("alpha".to_string(), 0.0), ("beta".to_string(), 0.1)]);
        assert_eq!(pts[3][0].1, 0.5);
    }

    #[test]
    fn family_names_round_trip() {
        for k in FamilyKind::ALL {
            assert_eq!(k.name().parse::<FamilyKind>().unwrap(), k);
        }
        assert_eq!("Amplitude_Damping".parse::<FamilyKind>().unwrap(), FamilyKind::AmplitudeDamping);
        assert!("bogus".parse::<FamilyKind>().is_err());
    }

    #[test]
    fn dephasing_sweep_rows() {
        let spec = ChannelSpec::family(FamilyKind::Dephasing, 2);
        let rows = sweep(&spec, &[Axis::new("p", 0.0, 1.0, 0.25).unwrap()], Mode::Exact).unwrap();
        assert_eq!(rows.len(), 5);
        for r in &rows {
            let p = r.params[0].1;
            assert!((r.q_det_optimized - (1.0 - h2(p / 2.0))).abs() < 1e-9);
            assert!((r.capacity.unwrap() - r.q_det_optimized).abs() < 1e-9);
            assert_eq!(r.capacity_exact, Some(true));
        }
    }

    #[test]
    fn qudit_and_erasure_bases() {
        let spec = ChannelSpec::family(FamilyKind::Depolarizing, 3).with_param("p", 0.05);
        let r = &sweep(&spec, &[], Mode::Exact).unwrap()[0];
        assert_eq!(r.family, BasisFamily::GeneralizedBell);
        assert!((r.q_det_optimized - r.hashing_bound.unwrap()).abs() < 1e-9);
        assert_eq!(r.q_det_bell, Some(r.q_det_optimized));
        assert!(r.upper_bound.is_none());

        let spec = ChannelSpec::family(FamilyKind::Erasure, 3).with_param("p", 0.1);
        let r = &sweep(&spec, &[], Mode::Exact).unwrap()[0];
        assert_eq!(r.family, BasisFamily::ErasureFlag);
        assert!(r.q_det_bell.is_none());
        assert!((r.q_det_optimized - r.capacity.unwrap()).abs() < 1e-9);
    }

    #[test]
    fn config_errors() {
        let spec = ChannelSpec::family(FamilyKind::AmplitudeDamping, 2);
        assert!(sweep(&spec, &[], Mode::Exact).is_err());
        assert!(sweep(&spec, &[Axis::new("p", 0.0, 0.1, 0.1).unwrap()], Mode::Exact).is_err());
        let spec = ChannelSpec::family(FamilyKind::TwoKraus, 3).with_param("alpha", 0.1).with_param("beta", 0.2);
        assert!(sweep(&spec, &[], Mode::Exact).is_err());
        let spec = ChannelSpec::custom(Channel::identity(2));
        assert!(sweep(&spec, &[Axis::new("p", 0.0, 0.1, 0.1).unwrap()], Mode::Exact).is_err());
        let spec = ChannelSpec::family(FamilyKind::Depolarizing, 3).with_param("p", 0.1);
        assert!(sweep(&spec, &[], Mode::Shots { shots: 10, seed: 1 }).is_err());
    }

    #[test]
    fn pauli_weights_or_params() {
        let by_params = ChannelSpec::family(FamilyKind::Pauli, 2).with_param("px", 0.1).with_param("pz", 0.2);
        let by_weights = ChannelSpec::family(FamilyKind::Pauli, 2).with_weights(vec![0.7, 0.1, 0.0, 0.2]);
        let a = &sweep(&by_params, &[], Mode::Exact).unwrap()[0];
        let b = &sweep(&by_weights, &[], Mode::Exact).unwrap()[0];
        assert!((a.q_det_optimized - b.q_det_optimized).abs() < 1e-12);
        assert!((a.q_det_optimized - a.hashing_bound.unwrap()).abs() < 1e-9);
    }

    #[test]
    fn shot_sweep_is_reproducible() {
        let spec = ChannelSpec::family(FamilyKind::AmplitudeDamping, 2);
        let axes = [Axis::new("gamma", 0.1, 0.3, 0.1).unwrap()];
        let mode = Mode::Shots { shots: 2000, seed: 9 };
        let a = sweep(&spec, &axes, mode).unwrap();
        let b = sweep(&spec, &axes, mode).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.q_det_optimized, y.q_det_optimized);
        }
    }
}
