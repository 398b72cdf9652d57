//! JSON run configuration and its resolution to SI values.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

use qstab_core::circuit::{derive, CircuitParams, DressedParams};
use qstab_core::model::{StabilizationTarget, SystemParams};

use crate::error::{HarnessError, Result};
use crate::quantity::{Dimension, Quantity, UnitConvention};

/// Dressed-parameter block. Missing fields take the reference values.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub omega_r: Option<Quantity>,
    pub omega_q: Option<Quantity>,
    pub chi: Option<Quantity>,
    pub g: Option<Quantity>,
    pub g_prime: Option<Quantity>,
    pub kappa: Option<Quantity>,
    pub gamma: Option<Quantity>,
    pub gamma_phi: Option<Quantity>,
    pub temperature: Option<Quantity>,
}

/// Dissipation and temperature used alongside a circuit block.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossSpec {
    pub kappa: Option<Quantity>,
    pub gamma: Option<Quantity>,
    pub gamma_phi: Option<Quantity>,
    pub temperature: Option<Quantity>,
}

/// Raw circuit block. Energies are frequencies `E/h`; missing fields take
/// the reference circuit values.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitSpec {
    #[serde(rename = "E_a")]
    pub e_a: Option<Quantity>,
    #[serde(rename = "E_b")]
    pub e_b: Option<Quantity>,
    #[serde(rename = "E_c")]
    pub e_c: Option<Quantity>,
    #[serde(rename = "E_ac")]
    pub e_ac: Option<Quantity>,
    #[serde(rename = "E_bc")]
    pub e_bc: Option<Quantity>,
    #[serde(rename = "E_Lr")]
    pub e_lr: Option<Quantity>,
    #[serde(rename = "E_Lq")]
    pub e_lq: Option<Quantity>,
    #[serde(rename = "E_J1")]
    pub e_j1: Option<Quantity>,
    #[serde(rename = "E_J2")]
    pub e_j2: Option<Quantity>,
    pub phi_sq_dc: Option<Quantity>,
    pub d1: Option<Quantity>,
    pub d2: Option<Quantity>,
    pub d3: Option<Quantity>,
    pub phi_fl_dc: Option<Quantity>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub theta: Option<Quantity>,
    pub phi: Option<Quantity>,
    pub mix: Option<Quantity>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub fock_levels: Option<usize>,
    pub include_stark: Option<bool>,
    /// Largest accepted fidelity change when the truncation is doubled.
    pub convergence_tol: Option<f64>,
    pub convergence_check: Option<bool>,
    /// Relative band used for settle times.
    pub settle_tol: Option<f64>,
    pub max_step: Option<Quantity>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisValues {
    List { values: Vec<f64> },
    Range { start: f64, stop: f64, count: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxisSpecFile {
    pub parameter: String,
    #[serde(default)]
    pub unit: String,
    #[serde(flatten)]
    pub values: AxisValues,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpecFile {
    pub axis1: AxisSpecFile,
    pub axis2: Option<AxisSpecFile>,
    pub observables: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeDomainSpec {
    pub duration: Option<Quantity>,
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermalSpec {
    pub temperatures: Option<Vec<f64>>,
    pub unit: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RwaSpec {
    pub duration: Option<Quantity>,
    pub samples: Option<usize>,
    /// Lab-frame step as `h·ω_max`.
    pub step_phase: Option<f64>,
    pub fock_levels: Option<usize>,
}

/// The config document as written.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub system: Option<SystemSpec>,
    pub circuit: Option<CircuitSpec>,
    pub losses: Option<LossSpec>,
    pub target: Option<TargetSpec>,
    pub g_eps: Option<Quantity>,
    pub g_eps1: Option<Quantity>,
    pub g_eps2: Option<Quantity>,
    pub solver: Option<SolverSpec>,
    pub sweep: Option<SweepSpecFile>,
    pub time_domain: Option<TimeDomainSpec>,
    pub thermal: Option<ThermalSpec>,
    pub rwa: Option<RwaSpec>,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub mhz_as_rate: bool,
}

impl ConfigFile {
    pub fn from_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_str(&text)
    }
}

/// Sideband drive specification.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Drive {
    /// Planned drives with effective coupling `g_eps` toward the target axis.
    Axis { g_eps: f64 },
    /// Explicit red (`g_eps1`) and blue (`g_eps2`) strengths without a Rabi drive.
    Sidebands { g_eps1: f64, g_eps2: f64 },
}

impl Drive {
    /// Strength entering the three-level model.
    pub fn effective(&self) -> f64 {
        match *self {
            Self::Axis { g_eps } => g_eps,
            Self::Sidebands { g_eps2, .. } => g_eps2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverSettings {
    pub fock_levels: usize,
    pub include_stark: bool,
    pub convergence_tol: f64,
    pub convergence_check: bool,
    pub settle_tol: f64,
    pub max_step: Option<f64>,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            fock_levels: 10,
            include_stark: true,
            convergence_tol: 1e-4,
            convergence_check: true,
            settle_tol: 0.01,
            max_step: None,
        }
    }
}

/// Sweepable parameters and their dimensions.
pub const SWEEP_WHITELIST: [(&str, Dimension); 12] = [
    ("g_eps", Dimension::Frequency),
    ("g_eps1", Dimension::Frequency),
    ("g_eps2", Dimension::Frequency),
    ("kappa", Dimension::Frequency),
    ("gamma", Dimension::Frequency),
    ("gamma_phi", Dimension::Frequency),
    ("chi", Dimension::Frequency),
    ("temperature", Dimension::Temperature),
    ("theta", Dimension::Angle),
    ("phi", Dimension::Angle),
    ("omega_r", Dimension::Frequency),
    ("omega_q", Dimension::Frequency),
];

pub fn parameter_dimension(name: &str) -> Result<Dimension> {
    SWEEP_WHITELIST
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, d)| *d)
        .ok_or_else(|| {
            let names: Vec<&str> = SWEEP_WHITELIST.iter().map(|(n, _)| *n).collect();
            HarnessError::Config(format!(
                "parameter {name:?} cannot be swept; allowed: {}",
                names.join(", ")
            ))
        })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Fidelity,
    Sx,
    Sy,
    Sz,
    PhotonNumber,
    SettleTime,
    DampingClass,
}

impl Observable {
    pub const ALL: [Observable; 7] = [
        Self::Fidelity,
        Self::Sx,
        Self::Sy,
        Self::Sz,
        Self::PhotonNumber,
        Self::SettleTime,
        Self::DampingClass,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Fidelity => "fidelity",
            Self::Sx => "sx",
            Self::Sy => "sy",
            Self::Sz => "sz",
            Self::PhotonNumber => "photon_number",
            Self::SettleTime => "settle_time",
            Self::DampingClass => "damping_class",
        }
    }

    pub fn header(&self) -> String {
        let unit = match self {
            Self::SettleTime => "s",
            Self::DampingClass => "label",
            _ => "1",
        };
        format!("{}[{unit}]", self.name())
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|o| o.name() == name)
            .ok_or_else(|| HarnessError::Config(format!("unknown observable {name:?}")))
    }

    /// Needs the full Lindblad steady state.
    pub fn needs_steady_state(&self) -> bool {
        !matches!(self, Self::SettleTime | Self::DampingClass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Axis {
    pub parameter: String,
    #[serde(skip)]
    pub dimension: Dimension,
    /// Values in SI units.
    pub values: Vec<f64>,
}

impl Axis {
    pub fn header(&self) -> String {
        format!("{}[{}]", self.parameter, self.dimension.si_unit())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSpec {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub observables: Vec<Observable>,
}

/// Where the dressed parameters came from.
#[derive(Clone, Debug)]
pub enum Source {
    Direct,
    Circuit { params: CircuitParams, dressed: Box<DressedParams> },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimeDomain {
    pub duration: f64,
    pub samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RwaSettings {
    pub duration: f64,
    pub samples: usize,
    pub step_phase: f64,
    pub fock_levels: usize,
}

/// Fully resolved run configuration; all values in SI units.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub system: SystemParams,
    pub source: Source,
    pub target: StabilizationTarget,
    pub drive: Drive,
    pub solver: SolverSettings,
    pub sweep: Option<SweepSpec>,
    pub time_domain: TimeDomain,
    pub temperatures: Vec<f64>,
    pub rwa: RwaSettings,
    pub output: Option<PathBuf>,
    pub convention: UnitConvention,
}

fn take(q: &Option<Quantity>, dim: Dimension, conv: UnitConvention, field: &str, default: f64) -> Result<f64> {
    match q {
        Some(q) => q.resolve(dim, conv, field),
        None => Ok(default),
    }
}

fn axis(spec: &AxisSpecFile, conv: UnitConvention) -> Result<Axis> {
    let dimension = parameter_dimension(&spec.parameter)?;
    let raw = match &spec.values {
        AxisValues::List { values } => values.clone(),
        AxisValues::Range { start, stop, count } => {
            if *count == 0 {
                return Err(HarnessError::Config(format!("{}: count must be positive", spec.parameter)));
            }
            if *count == 1 {
                vec![*start]
            } else {
                (0..*count)
                    .map(|k| start + (stop - start) * k as f64 / (*count - 1) as f64)
                    .collect()
            }
        }
    };
    if raw.is_empty() {
        return Err(HarnessError::Config(format!("{}: value list is empty", spec.parameter)));
    }
    let values = raw
        .iter()
        .map(|&v| Quantity::new(v, &spec.unit).resolve(dimension, conv, &spec.parameter))
        .collect::<Result<Vec<f64>>>()?;
    Ok(Axis { parameter: spec.parameter.clone(), dimension, values })
}

impl RunConfig {
    /// Reference system, `|e⟩` target, `gε/2π = 2 MHz`.
    pub fn reference() -> Self {
        Self::resolve(&ConfigFile::default(), UnitConvention::default()).expect("reference config")
    }

    /// Resolves units, defaults and the circuit derivation. `conv` is
    /// combined with the file's own `mhz_as_rate` flag.
    pub fn resolve(file: &ConfigFile, conv: UnitConvention) -> Result<Self> {
        use Dimension::*;
        let conv = UnitConvention { mhz_as_rate: conv.mhz_as_rate || file.mhz_as_rate };
        let r = SystemParams::reference();

        let (system, source) = match (&file.system, &file.circuit) {
            (Some(_), Some(_)) => {
                return Err(HarnessError::Config(
                    "system and circuit blocks are mutually exclusive".into(),
                ))
            }
            (Some(s), None) => {
                if file.losses.is_some() {
                    return Err(HarnessError::Config(
                        "losses block only applies to circuit configs; put rates in system".into(),
                    ));
                }
                let p = SystemParams {
                    omega_r: take(&s.omega_r, Frequency, conv, "system.omega_r", r.omega_r)?,
                    omega_q: take(&s.omega_q, Frequency, conv, "system.omega_q", r.omega_q)?,
                    chi: take(&s.chi, Frequency, conv, "system.chi", r.chi)?,
                    g: take(&s.g, Frequency, conv, "system.g", r.g)?,
                    g_prime: take(&s.g_prime, Dimensionless, conv, "system.g_prime", r.g_prime)?,
                    kappa: take(&s.kappa, Frequency, conv, "system.kappa", r.kappa)?,
                    gamma: take(&s.gamma, Frequency, conv, "system.gamma", r.gamma)?,
                    gamma_phi: take(&s.gamma_phi, Frequency, conv, "system.gamma_phi", r.gamma_phi)?,
                    temperature: take(&s.temperature, Temperature, conv, "system.temperature", r.temperature)?,
                };
                (p, Source::Direct)
            }
            (None, Some(c)) => {
                let params = circuit_params(c, conv)?;
                params.validate().map_err(|e| HarnessError::Config(format!("circuit: {e}")))?;
                let d = derive(&params).map_err(|e| HarnessError::solver("circuit derivation", e))?;
                let l = file.losses.clone().unwrap_or_default();
                let p = SystemParams {
                    omega_r: d.dressed.omega_r,
                    omega_q: d.dressed.omega_q,
                    chi: d.dressed.chi,
                    g: d.dressed.g,
                    g_prime: d.dressed.g_prime,
                    kappa: take(&l.kappa, Frequency, conv, "losses.kappa", r.kappa)?,
                    gamma: take(&l.gamma, Frequency, conv, "losses.gamma", r.gamma)?,
                    gamma_phi: take(&l.gamma_phi, Frequency, conv, "losses.gamma_phi", r.gamma_phi)?,
                    temperature: take(&l.temperature, Temperature, conv, "losses.temperature", r.temperature)?,
                };
                (p, Source::Circuit { params, dressed: Box::new(d.dressed) })
            }
            (None, None) => (r, Source::Direct),
        };
        system.validate().map_err(|e| HarnessError::Config(format!("system: {e}")))?;

        let t = file.target.clone().unwrap_or_default();
        let target = StabilizationTarget::new(
            take(&t.theta, Angle, conv, "target.theta", 0.0)?,
            take(&t.phi, Angle, conv, "target.phi", 0.0)?,
            take(&t.mix, Dimensionless, conv, "target.mix", 1.0)?,
        )
        .map_err(|e| HarnessError::Config(format!("target: {e}")))?;

        let drive = match (&file.g_eps, &file.g_eps1, &file.g_eps2) {
            (Some(_), None, None) | (None, None, None) => Drive::Axis {
                g_eps: take(&file.g_eps, Frequency, conv, "g_eps", qstab_core::units::mhz(2.0))?,
            },
            (None, e1, e2) => Drive::Sidebands {
                g_eps1: take(e1, Frequency, conv, "g_eps1", 0.0)?,
                g_eps2: take(e2, Frequency, conv, "g_eps2", 0.0)?,
            },
            _ => {
                return Err(HarnessError::Config(
                    "g_eps cannot be combined with g_eps1/g_eps2".into(),
                ))
            }
        };

        let s = file.solver.clone().unwrap_or_default();
        let d = SolverSettings::default();
        let solver = SolverSettings {
            fock_levels: s.fock_levels.unwrap_or(d.fock_levels),
            include_stark: s.include_stark.unwrap_or(d.include_stark),
            convergence_tol: s.convergence_tol.unwrap_or(d.convergence_tol),
            convergence_check: s.convergence_check.unwrap_or(d.convergence_check),
            settle_tol: s.settle_tol.unwrap_or(d.settle_tol),
            max_step: match &s.max_step {
                Some(q) => Some(q.resolve(Time, conv, "solver.max_step")?),
                None => None,
            },
        };
        solver.validate()?;

        let sweep = match &file.sweep {
            None => None,
            Some(sw) => {
                let observables = match &sw.observables {
                    None => vec![Observable::Fidelity, Observable::Sx, Observable::Sy, Observable::Sz],
                    Some(list) if list.is_empty() => {
                        return Err(HarnessError::Config("sweep.observables is empty".into()))
                    }
                    Some(list) => list.iter().map(|n| Observable::parse(n)).collect::<Result<_>>()?,
                };
                let axis1 = axis(&sw.axis1, conv)?;
                let axis2 = sw.axis2.as_ref().map(|a| axis(a, conv)).transpose()?;
                if axis2.as_ref().is_some_and(|a| a.parameter == axis1.parameter) {
                    return Err(HarnessError::Config("sweep axes must differ".into()));
                }
                Some(SweepSpec { axis1, axis2, observables })
            }
        };

        let td = file.time_domain.clone().unwrap_or_default();
        let time_domain = TimeDomain {
            duration: take(&td.duration, Time, conv, "time_domain.duration", 500e-9)?,
            samples: td.samples.unwrap_or(501),
        };
        if !(time_domain.duration > 0.0 && time_domain.samples >= 2) {
            return Err(HarnessError::Config("time_domain needs a positive duration and ≥ 2 samples".into()));
        }

        let th = file.thermal.clone().unwrap_or_default();
        let temperatures = match th.temperatures {
            None => (0..=10).map(|k| 0.01 * k as f64).collect(),
            Some(list) => {
                let unit = th.unit.unwrap_or_else(|| "K".into());
                list.iter()
                    .map(|&v| Quantity::new(v, &unit).resolve(Temperature, conv, "thermal.temperatures"))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        if temperatures.is_empty() || temperatures.iter().any(|&t| t < 0.0) {
            return Err(HarnessError::Config("thermal.temperatures must be non-empty and ≥ 0".into()));
        }

        let rw = file.rwa.clone().unwrap_or_default();
        let rwa = RwaSettings {
            duration: take(&rw.duration, Time, conv, "rwa.duration", 600e-9)?,
            samples: rw.samples.unwrap_or(121),
            step_phase: rw.step_phase.unwrap_or(qstab_core::model::LAB_STEP_PHASE),
            fock_levels: rw.fock_levels.unwrap_or(6),
        };
        if !(rwa.duration > 0.0 && rwa.samples >= 2 && rwa.fock_levels >= 2) {
            return Err(HarnessError::Config("rwa needs a positive duration, ≥ 2 samples and ≥ 2 levels".into()));
        }

        Ok(Self {
            system,
            source,
            target,
            drive,
            solver,
            sweep,
            time_domain,
            temperatures,
            rwa,
            output: file.output.clone(),
            convention: conv,
        })
    }

    /// Resolved parameters with explicit units, for sidecars.
    pub fn to_json(&self) -> Value {
        let q = |v: f64, unit: &str| json!({ "value": v, "unit": unit });
        let s = &self.system;
        let mut out = json!({
            "system": {
                "omega_r": q(s.omega_r, "rad/s"),
                "omega_q": q(s.omega_q, "rad/s"),
                "chi": q(s.chi, "rad/s"),
                "g": q(s.g, "rad/s"),
                "g_prime": q(s.g_prime, "1"),
                "kappa": q(s.kappa, "rad/s"),
                "gamma": q(s.gamma, "1/s"),
                "gamma_phi": q(s.gamma_phi, "1/s"),
                "temperature": q(s.temperature, "K"),
            },
            "target": {
                "theta": q(self.target.theta, "rad"),
                "phi": q(self.target.phi, "rad"),
                "mix": q(self.target.mix, "1"),
            },
            "drive": match self.drive {
                Drive::Axis { g_eps } => json!({ "kind": "axis", "g_eps": q(g_eps, "rad/s") }),
                Drive::Sidebands { g_eps1, g_eps2 } => json!({
                    "kind": "sidebands",
                    "g_eps1": q(g_eps1, "rad/s"),
                    "g_eps2": q(g_eps2, "rad/s"),
                }),
            },
            "solver": serde_json::to_value(self.solver).expect("serializable"),
            "mhz_as_rate": self.convention.mhz_as_rate,
        });
        if let Source::Circuit { params, dressed } = &self.source {
            out["circuit"] = serde_json::to_value(params).expect("serializable");
            out["circuit_units"] = json!("energies rad/s, phases rad, depths 1");
            out["dressed"] = dressed.to_json();
        }
        if let Some(sw) = &self.sweep {
            out["sweep"] = serde_json::to_value(sw).expect("serializable");
        }
        out
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if self.fock_levels < 2 {
            return Err(HarnessError::Config("solver.fock_levels must be at least 2".into()));
        }
        for (name, v) in [("convergence_tol", self.convergence_tol), ("settle_tol", self.settle_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(HarnessError::Config(format!("solver.{name} must be positive")));
            }
        }
        if self.settle_tol >= 0.5 {
            return Err(HarnessError::Config("solver.settle_tol must be below 0.5".into()));
        }
        if let Some(h) = self.max_step {
            if !(h > 0.0) {
                return Err(HarnessError::Config("solver.max_step must be positive".into()));
            }
        }
        Ok(())
    }
}

fn circuit_params(c: &CircuitSpec, conv: UnitConvention) -> Result<CircuitParams> {
    use Dimension::*;
    let r = CircuitParams::reference();
    Ok(CircuitParams {
        e_a: take(&c.e_a, Frequency, conv, "circuit.E_a", r.e_a)?,
        e_b: take(&c.e_b, Frequency, conv, "circuit.E_b", r.e_b)?,
        e_c: take(&c.e_c, Frequency, conv, "circuit.E_c", r.e_c)?,
        e_ac: take(&c.e_ac, Frequency, conv, "circuit.E_ac", r.e_ac)?,
        e_bc: take(&c.e_bc, Frequency, conv, "circuit.E_bc", r.e_bc)?,
        e_lr: take(&c.e_lr, Frequency, conv, "circuit.E_Lr", r.e_lr)?,
        e_lq: take(&c.e_lq, Frequency, conv, "circuit.E_Lq", r.e_lq)?,
        e_j1: take(&c.e_j1, Frequency, conv, "circuit.E_J1", r.e_j1)?,
        e_j2: take(&c.e_j2, Frequency, conv, "circuit.E_J2", r.e_j2)?,
        phi_sq_dc: take(&c.phi_sq_dc, Angle, conv, "circuit.phi_sq_dc", r.phi_sq_dc)?,
        d1: take(&c.d1, Dimensionless, conv, "circuit.d1", r.d1)?,
        d2: take(&c.d2, Dimensionless, conv, "circuit.d2", r.d2)?,
        d3: take(&c.d3, Dimensionless, conv, "circuit.d3", r.d3)?,
        phi_fl_dc: take(&c.phi_fl_dc, Angle, conv, "circuit.phi_fl_dc", r.phi_fl_dc)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_reference() {
        let c = RunConfig::reference();
        assert_eq!(c.system, SystemParams::reference());
        assert_eq!(c.drive, Drive::Axis { g_eps: qstab_core::units::mhz(2.0) });
        assert_eq!(c.solver.fock_levels, 10);
    }

    #[test]
    fn rejects_system_and_circuit_together() {
        let f = ConfigFile::from_str(r#"{"system": {}, "circuit": {}}"#).unwrap();
        assert!(matches!(RunConfig::resolve(&f, UnitConvention::default()), Err(HarnessError::Config(_))));
    }

    #[test]
    fn rejects_unknown_sweep_parameter() {
        let f = ConfigFile::from_str(
            r#"{"sweep": {"axis1": {"parameter": "g", "unit": "MHz", "values": [1.0]}}}"#,
        )
        .unwrap();
        let e = RunConfig::resolve(&f, UnitConvention::default()).unwrap_err();
        assert!(e.to_string().contains("cannot be swept"), "{e}");
    }

    #[test]
    fn rejects_unknown_fields_and_bad_tolerances() {
        assert!(ConfigFile::from_str(r#"{"sytem": {}}"#).is_err());
        let f = ConfigFile::from_str(r#"{"solver": {"convergence_tol": 0.0}}"#).unwrap();
        assert!(RunConfig::resolve(&f, UnitConvention::default()).is_err());
    }

    #[test]
    fn range_axis_endpoints() {
        let f = ConfigFile::from_str(
            r#"{"sweep": {"axis1": {"parameter": "kappa", "unit": "MHz", "start": 1.0, "stop": 3.0, "count": 3}}}"#,
        )
        .unwrap();
        let c = RunConfig::resolve(&f, UnitConvention::default()).unwrap();
        let v = &c.sweep.unwrap().axis1.values;
        assert_eq!(v.len(), 3);
        assert_eq!(v[2], 3.0 * std::f64::consts::TAU * 1e6);
    }

    #[test]
    fn circuit_config_derives_system() {
        let f = ConfigFile::from_str(r#"{"circuit": {}, "losses": {"kappa": {"value": 8, "unit": "MHz"}}}"#).unwrap();
        let c = RunConfig::resolve(&f, UnitConvention::default()).unwrap();
        assert!(matches!(c.source, Source::Circuit { .. }));
        assert!(c.system.g > 0.0 && c.system.g_prime > 0.0);
        assert!((c.system.kappa - qstab_core::units::mhz(8.0)).abs() <= 1e-15 * c.system.kappa);
        assert!(c.to_json()["dressed"]["chi"]["unit"] == "rad/s");
    }
}
