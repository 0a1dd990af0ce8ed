use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::Value;

use crate::analysis::MapDescriptor;
use crate::error::{Error, Result};
use crate::solvers::SolverConfig;
use crate::spaces::{grid_points, DistanceDescriptor, NormDescriptor, Point};

/// The space a scenario works in: a distance, or a norm whose forward
/// distance `‖y − x|` is used wherever a distance is needed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Space {
    Distance(DistanceDescriptor),
    Norm(NormDescriptor),
}

const NORM_KINDS: [&str; 4] = ["upper", "planar_max", "symmetric_lift", "scaled"];

impl<'de> Deserialize<'de> for Space {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| D::Error::custom("space needs a string field `kind`"))?;
        if NORM_KINDS.contains(&kind) {
            NormDescriptor::deserialize(v).map(Space::Norm).map_err(D::Error::custom)
        } else {
            DistanceDescriptor::deserialize(v)
                .map(Space::Distance)
                .map_err(D::Error::custom)
        }
    }
}

impl Space {
    pub fn validate(&self) -> Result<()> {
        match self {
            Space::Distance(d) => d.validate(),
            Space::Norm(n) => n.validate(),
        }
    }

    pub fn distance(&self) -> DistanceDescriptor {
        match self {
            Space::Distance(d) => d.clone(),
            Space::Norm(n) => DistanceDescriptor::NormForward { norm: n.clone() },
        }
    }

    pub fn norm(&self) -> Result<NormDescriptor> {
        match self {
            Space::Norm(n) => Ok(n.clone()),
            Space::Distance(DistanceDescriptor::NormForward { norm }) => Ok(norm.clone()),
            Space::Distance(_) => Err(Error::InvalidArgument(
                "this task needs a normed space".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Eval,
    Axioms,
    Classify,
    Picard,
    PowerPicard,
    Edelstein,
    AveragedFamily,
    GkDiagnostic,
    Geometry,
    Mazur,
    Minkowski,
    MinimalInvariant,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Eval => "eval",
            Task::Axioms => "axioms",
            Task::Classify => "classify",
            Task::Picard => "picard",
            Task::PowerPicard => "power_picard",
            Task::Edelstein => "edelstein",
            Task::AveragedFamily => "averaged_family",
            Task::GkDiagnostic => "gk_diagnostic",
            Task::Geometry => "geometry",
            Task::Mazur => "mazur",
            Task::Minkowski => "minkowski",
            Task::MinimalInvariant => "minimal_invariant",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub space: Space,
    #[serde(default)]
    pub map: Option<MapDescriptor>,
    pub task: Task,
    #[serde(default)]
    pub params: Value,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub seed: u64,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.space.validate()?;
        if let Some(m) = &self.map {
            m.validate()?;
        }
        self.solver.validate()
    }

    pub fn map(&self) -> Result<&MapDescriptor> {
        self.map.as_ref().ok_or_else(|| {
            Error::InvalidArgument(format!("task `{}` needs a map", self.task.name()))
        })
    }

    /// Task parameters as a typed struct; a missing `params` is `{}`.
    pub fn params<T: for<'de> Deserialize<'de>>(&self) -> Result<T> {
        let v = match &self.params {
            Value::Null => Value::Object(Default::default()),
            v => v.clone(),
        };
        serde_json::from_value(v)
            .map_err(|e| Error::InvalidArgument(format!("invalid params for `{}`: {e}", self.task.name())))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub points_per_axis: usize,
}

/// Explicit points, or a regular grid on a box.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Sample {
    Points(Vec<Point>),
    Grid(GridSpec),
}

impl Sample {
    pub fn points(&self) -> Result<Vec<Point>> {
        match self {
            Sample::Points(p) => Ok(p.clone()),
            Sample::Grid(g) => grid_points(&g.lower, &g.upper, g.points_per_axis),
        }
    }
}
