use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::scenario::{Sample, Scenario, Task};
use crate::analysis::{classify_map, MapDescriptor, SamplerConfig};
use crate::convexity::{mazur_approximation, minkowski_functional, DEFAULT_GRID_Q};
use crate::error::{Error, Result};
use crate::geometry::{
    backward_radius, bounded_witness, diameter, find_forward_nondiametral, forward_radius,
    hull_membership, is_forward_diametral, mch_check, minimal_invariant_sets, FiniteSubset,
    DEFAULT_GEOMETRY_TOL,
};
use crate::solvers::{
    averaged_family, edelstein_minimize, gk_diagnostic, picard, power_picard, AveragedVariant,
    ConvergenceTrace, FixedPointResult, GkVerdict, Status,
};
use crate::spaces::{
    check_distance_axioms, check_norm_axioms, induced_distance, AsymmetricDistance, Direction,
    Point, DEFAULT_AXIOM_TOL,
};

/// What a task produced: the summary fields plus an optional trace.
pub(crate) struct TaskOutput {
    pub status: String,
    pub exit_code: i32,
    pub point: Option<Point>,
    pub iterations: Option<usize>,
    pub forward_residual: Option<f64>,
    pub backward_residual: Option<f64>,
    pub bound_respected: Option<bool>,
    pub diagnostics: Value,
    pub trace: Option<(ConvergenceTrace, usize)>,
}

impl TaskOutput {
    fn verdict(ok: bool, pass: &str, fail: &str, diagnostics: Value) -> Self {
        TaskOutput {
            status: if ok { pass } else { fail }.to_string(),
            exit_code: if ok { 0 } else { 1 },
            point: None,
            iterations: None,
            forward_residual: None,
            backward_residual: None,
            bound_respected: None,
            diagnostics,
            trace: None,
        }
    }

    fn fixed_point(res: FixedPointResult, dim: usize) -> Result<Self> {
        let ok = res.status == Status::Converged;
        let diagnostics = to_value(&res.diagnostics)?;
        Ok(TaskOutput {
            status: to_value(&res.status)?.as_str().unwrap_or_default().to_string(),
            exit_code: if ok { 0 } else { 1 },
            point: Some(res.point),
            iterations: Some(res.iterations),
            forward_residual: Some(res.forward_residual),
            backward_residual: Some(res.backward_residual),
            bound_respected: res.bound_respected,
            diagnostics,
            trace: res.trace.map(|t| (t, dim)),
        })
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::InvalidArgument(e.to_string()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EvalParams {
    x: Point,
    y: Point,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AxiomParams {
    sample: Sample,
    #[serde(default = "default_axiom_tol")]
    tol: f64,
    #[serde(default = "default_scalars")]
    scalars: Vec<f64>,
}

fn default_axiom_tol() -> f64 {
    DEFAULT_AXIOM_TOL
}

fn default_scalars() -> Vec<f64> {
    vec![0.0, 0.5, 1.0, 2.0, 3.5]
}

fn default_geometry_tol() -> f64 {
    DEFAULT_GEOMETRY_TOL
}

fn default_grid_q() -> usize {
    DEFAULT_GRID_Q
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifyParams {
    #[serde(default)]
    sampler: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PicardParams {
    x0: Point,
    #[serde(default)]
    contraction: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PowerParams {
    x0: Point,
    k: usize,
    #[serde(default)]
    contraction: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdelsteinParams {
    candidates: Sample,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyParams {
    variant: AveragedVariant,
    n_max: usize,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum FamilySource {
    Points(Vec<Point>),
    Averaged(FamilyParams),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GkParams {
    family: FamilySource,
    sample_k: Vec<Point>,
}

#[derive(Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
enum GeometryParams {
    Diameter {
        points: Vec<Point>,
    },
    ForwardRadius {
        points: Vec<Point>,
        u: Point,
    },
    BackwardRadius {
        points: Vec<Point>,
        u: Point,
    },
    IsForwardDiametral {
        points: Vec<Point>,
        u: Point,
        #[serde(default = "default_geometry_tol")]
        tol: f64,
    },
    FindForwardNondiametral {
        points: Vec<Point>,
        #[serde(default = "default_geometry_tol")]
        tol: f64,
    },
    BoundedWitness {
        points: Vec<Point>,
    },
    HullMembership {
        vertices: Vec<Point>,
        z: Point,
        #[serde(default = "default_geometry_tol")]
        tol: f64,
    },
    MchCheck {
        vertices: Vec<Point>,
        sample: Vec<Point>,
        #[serde(default = "default_geometry_tol")]
        tol: f64,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MazurParams {
    seq: Vec<Point>,
    x0: Point,
    eps: f64,
    #[serde(default = "default_grid_q")]
    grid_q: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MinkowskiParams {
    vertices: Vec<Point>,
    z: Point,
    #[serde(default = "default_geometry_tol")]
    tol: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MinimalParams {
    #[serde(default)]
    points: Option<Vec<Point>>,
}

pub(crate) fn run_task(sc: &Scenario) -> Result<TaskOutput> {
    sc.validate()?;
    match sc.task {
        Task::Eval => {
            let p: EvalParams = sc.params()?;
            let d = sc.space.distance();
            let forward = d.distance(&p.x, &p.y)?;
            let backward = d.distance(&p.y, &p.x)?;
            Ok(TaskOutput::verdict(
                true,
                "ok",
                "",
                json!({"d_xy": forward, "d_yx": backward}),
            ))
        }
        Task::Axioms => axioms(sc),
        Task::Classify => {
            let p: ClassifyParams = sc.params()?;
            let mut sampler = match p.sampler {
                Some(v) => {
                    if v.get("seed").is_some() {
                        return Err(Error::InvalidArgument(
                            "the sampler seed is the scenario's `seed`".into(),
                        ));
                    }
                    serde_json::from_value::<SamplerConfig>(v)
                        .map_err(|e| Error::InvalidArgument(format!("invalid sampler: {e}")))?
                }
                None => SamplerConfig::default(),
            };
            sampler.seed = sc.seed;
            let report = classify_map(sc.map()?, &sc.space.distance(), &sampler)?;
            Ok(TaskOutput::verdict(true, "classified", "", to_value(&report)?))
        }
        Task::Picard => {
            let p: PicardParams = sc.params()?;
            let map = sc.map()?;
            let res = picard(map, &sc.space.distance(), &p.x0, &sc.solver, p.contraction)?;
            TaskOutput::fixed_point(res, crate::analysis::SelfMap::dim(map))
        }
        Task::PowerPicard => {
            let p: PowerParams = sc.params()?;
            let map = sc.map()?;
            let res = power_picard(map, &sc.space.distance(), p.k, &p.x0, &sc.solver, p.contraction)?;
            TaskOutput::fixed_point(res, crate::analysis::SelfMap::dim(map))
        }
        Task::Edelstein => {
            let p: EdelsteinParams = sc.params()?;
            let map = sc.map()?;
            let res = edelstein_minimize(map, &sc.space.distance(), &p.candidates.points()?, &sc.solver)?;
            TaskOutput::fixed_point(res, crate::analysis::SelfMap::dim(map))
        }
        Task::AveragedFamily => {
            let p: FamilyParams = sc.params()?;
            let fam = averaged_family(sc.map()?, &sc.space.norm()?, &p.variant, p.n_max, &sc.solver)?;
            let ok = fam.failure.is_none() && fam.all_bounds_respected();
            let status = if fam.failure.is_some() {
                "failed"
            } else if ok {
                "bounds_respected"
            } else {
                "bound_violated"
            };
            let mut out = TaskOutput::verdict(ok, status, status, to_value(&fam)?);
            out.point = fam.members.last().map(|m| m.point.clone());
            out.bound_respected = Some(fam.all_bounds_respected());
            Ok(out)
        }
        Task::GkDiagnostic => {
            let p: GkParams = sc.params()?;
            let norm = sc.space.norm()?;
            let (family, fam_value) = match p.family {
                FamilySource::Points(pts) => (pts, Value::Null),
                FamilySource::Averaged(f) => {
                    let fam = averaged_family(sc.map()?, &norm, &f.variant, f.n_max, &sc.solver)?;
                    (fam.points(), to_value(&fam)?)
                }
            };
            let report = gk_diagnostic(&family, &p.sample_k, &norm)?;
            let status = to_value(&report.verdict)?;
            let mut diag = to_value(&report)?;
            if !fam_value.is_null() {
                diag["family"] = fam_value;
            }
            Ok(TaskOutput::verdict(
                report.verdict == GkVerdict::ConsistentWithMinimal,
                status.as_str().unwrap_or_default(),
                status.as_str().unwrap_or_default(),
                diag,
            ))
        }
        Task::Geometry => geometry(sc),
        Task::Mazur => {
            let p: MazurParams = sc.params()?;
            let r = mazur_approximation(&p.seq, &p.x0, &sc.space.norm()?, p.eps, p.grid_q)?;
            let mut out = TaskOutput::verdict(r.found, "found", "not_found", to_value(&r)?);
            out.point = Some(r.y);
            Ok(out)
        }
        Task::Minkowski => {
            let p: MinkowskiParams = sc.params()?;
            let t = minkowski_functional(&p.vertices, &p.z, p.tol)?;
            Ok(TaskOutput::verdict(true, "ok", "", json!({"gauge": t})))
        }
        Task::MinimalInvariant => {
            let p: MinimalParams = sc.params()?;
            let map = sc.map()?;
            let points = match (p.points, map) {
                (Some(pts), _) => pts,
                (None, MapDescriptor::FiniteTable { points, .. }) => points.clone(),
                (None, _) => {
                    return Err(Error::InvalidArgument(
                        "minimal_invariant needs a finite_table map or explicit points".into(),
                    ))
                }
            };
            let sets = minimal_invariant_sets(&points, map)?;
            Ok(TaskOutput::verdict(true, "ok", "", json!({"sets": to_value(&sets)?})))
        }
    }
}

fn axioms(sc: &Scenario) -> Result<TaskOutput> {
    let p: AxiomParams = sc.params()?;
    let sample = p.sample.points()?;
    let mut reports = serde_json::Map::new();
    let mut ok = true;
    match sc.space.norm() {
        Ok(norm) if matches!(sc.space, super::scenario::Space::Norm(_)) => {
            let n = check_norm_axioms(&norm, &sample, &p.scalars, p.tol)?;
            let f = check_distance_axioms(&induced_distance(&norm, Direction::Forward), &sample, p.tol)?;
            let b = check_distance_axioms(&induced_distance(&norm, Direction::Backward), &sample, p.tol)?;
            ok &= n.is_consistent() && f.is_consistent() && b.is_consistent();
            reports.insert("norm".into(), to_value(&n)?);
            reports.insert("forward_distance".into(), to_value(&f)?);
            reports.insert("backward_distance".into(), to_value(&b)?);
        }
        _ => {
            let d = check_distance_axioms(&sc.space.distance(), &sample, p.tol)?;
            ok &= d.is_consistent();
            reports.insert("distance".into(), to_value(&d)?);
        }
    }
    Ok(TaskOutput::verdict(ok, "consistent", "violations", Value::Object(reports)))
}

fn geometry(sc: &Scenario) -> Result<TaskOutput> {
    let subset = |points: Vec<Point>| -> Result<FiniteSubset> { FiniteSubset::new(points, sc.space.norm()?) };
    let out = match sc.params::<GeometryParams>()? {
        GeometryParams::Diameter { points } => {
            let k = subset(points)?;
            TaskOutput::verdict(true, "ok", "", json!({"op": "diameter", "diameter": diameter(&k)}))
        }
        GeometryParams::ForwardRadius { points, u } => {
            let k = subset(points)?;
            let r = forward_radius(&u, &k)?;
            TaskOutput::verdict(true, "ok", "", json!({"op": "forward_radius", "radius": r}))
        }
        GeometryParams::BackwardRadius { points, u } => {
            let k = subset(points)?;
            let r = backward_radius(&u, &k)?;
            TaskOutput::verdict(true, "ok", "", json!({"op": "backward_radius", "radius": r}))
        }
        GeometryParams::IsForwardDiametral { points, u, tol } => {
            let k = subset(points)?;
            let yes = is_forward_diametral(&u, &k, tol)?;
            let r = forward_radius(&u, &k)?;
            TaskOutput::verdict(
                yes,
                "diametral",
                "not_diametral",
                json!({"op": "is_forward_diametral", "diameter": diameter(&k), "forward_radius": r}),
            )
        }
        GeometryParams::FindForwardNondiametral { points, tol } => {
            let probe = find_forward_nondiametral(&subset(points)?, tol);
            let mut d = to_value(&probe)?;
            d["op"] = json!("find_forward_nondiametral");
            let mut out = TaskOutput::verdict(true, "ok", "", d);
            out.point = probe.witness;
            out
        }
        GeometryParams::BoundedWitness { points } => {
            let w = bounded_witness(&subset(points)?);
            let mut d = to_value(&w)?;
            d["op"] = json!("bounded_witness");
            TaskOutput::verdict(w.f_contained && w.b_contained, "bounded", "unbounded", d)
        }
        GeometryParams::HullMembership { vertices, z, tol } => {
            let member = hull_membership(&vertices, &z, tol)?;
            TaskOutput::verdict(
                member,
                "member",
                "not_member",
                json!({"op": "hull_membership", "member": member}),
            )
        }
        GeometryParams::MchCheck { vertices, sample, tol } => {
            let r = mch_check(&vertices, sc.map()?, &sample, tol)?;
            let mut d = to_value(&r)?;
            d["op"] = json!("mch_check");
            TaskOutput::verdict(r.necessary_condition_holds, "consistent", "not_minimal", d)
        }
    };
    Ok(out)
}
