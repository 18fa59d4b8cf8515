//! One-parameter sweeps over a base plan.
//!
//! Every sweep point reuses the base plan's master seed, so the same
//! replication substreams are used at every point and a point computed on
//! its own matches the corresponding row of a full sweep.

use std::fmt;

use cv2x_mec::engine::{AggregateStats, SimulationPlan};

use crate::error::{ConfigError, Violation};
use crate::runner::Runner;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParameter {
    VruCount,
    VehicleIntensity,
    ClusterSize,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::VruCount => "vruCount",
            SweepParameter::VehicleIntensity => "vehicleIntensity",
            SweepParameter::ClusterSize => "clusterSize",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "vruCount" => Some(SweepParameter::VruCount),
            "vehicleIntensity" => Some(SweepParameter::VehicleIntensity),
            "clusterSize" => Some(SweepParameter::ClusterSize),
            _ => None,
        }
    }

    /// Axis label for plots.
    pub fn label(self) -> &'static str {
        match self {
            SweepParameter::VruCount => "Number of VRUs",
            SweepParameter::VehicleIntensity => "Vehicle intensity [vehicles/m]",
            SweepParameter::ClusterSize => "Cluster size",
        }
    }

    fn is_count(self) -> bool {
        !matches!(self, SweepParameter::VehicleIntensity)
    }

    /// The values swept in the reference experiments.
    pub fn reference_values(self) -> Vec<f64> {
        match self {
            SweepParameter::VruCount => vec![50.0, 70.0, 90.0, 110.0, 130.0],
            SweepParameter::VehicleIntensity => vec![0.01, 0.03, 0.05, 0.07, 0.09],
            SweepParameter::ClusterSize => vec![1.0, 3.0, 5.0, 7.0, 9.0],
        }
    }

    /// `base` with this parameter set to `value`.
    pub fn apply(self, base: &SimulationPlan, value: f64) -> SimulationPlan {
        let mut plan = *base;
        match self {
            SweepParameter::VruCount => plan.scenario.vru_count = value as usize,
            SweepParameter::VehicleIntensity => plan.scenario.hard_core.intensity = value,
            SweepParameter::ClusterSize => plan.radio.cluster_size = value as usize,
        }
        plan
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    pub base: SimulationPlan,
}

impl SweepSpec {
    pub fn new(
        parameter: SweepParameter,
        values: Vec<f64>,
        base: SimulationPlan,
    ) -> Result<Self, ConfigError> {
        let spec = Self {
            parameter,
            values,
            base,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn reference(parameter: SweepParameter, base: SimulationPlan) -> Self {
        Self {
            parameter,
            values: parameter.reference_values(),
            base,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut problems = Vec::new();
        let mut bad = |message: String| {
            problems.push(Violation {
                path: format!("sweep.{}", self.parameter),
                message,
            })
        };
        if self.values.is_empty() {
            bad("no sweep values".into());
        }
        if self.values.windows(2).any(|w| !(w[1] > w[0])) {
            bad("values must be strictly increasing".into());
        }
        if self.parameter.is_count() {
            for v in &self.values {
                if !(v.fract() == 0.0 && *v >= 1.0) {
                    bad(format!("{v} is not a positive integer"));
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(problems))
        }
    }
}

/// Failure of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    pub message: String,
    pub is_config: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: Result<AggregateStats, RowError>,
}

impl SweepRow {
    pub fn stats(&self) -> Option<&AggregateStats> {
        self.outcome.as_ref().ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub parameter: SweepParameter,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn failures(&self) -> impl Iterator<Item = (&f64, &RowError)> {
        self.rows
            .iter()
            .filter_map(|r| r.outcome.as_ref().err().map(|e| (&r.value, e)))
    }
}

/// Runs every sweep point. A point that fails (e.g. an infeasible vehicle
/// intensity) is recorded in its row and the sweep carries on.
pub fn run_sweep(spec: &SweepSpec, runner: &Runner) -> Result<SweepResult, ConfigError> {
    spec.validate()?;
    let rows = spec
        .values
        .iter()
        .map(|&value| {
            let plan = spec.parameter.apply(&spec.base, value);
            let outcome = runner.run(&plan).map_err(|e| RowError {
                message: e.to_string(),
                is_config: e.is_config(),
            });
            SweepRow { value, outcome }
        })
        .collect();
    Ok(SweepResult {
        parameter: spec.parameter,
        rows,
    })
}
