use std::time::Instant;

use super::record::{Output, OutputValue, ResultRecord, Timing, Versions};
use super::spec::{EdgeRef, ExperimentSpec, Kind, Limits};
use crate::error::{Error, Result};
use crate::exact::{
    cylinder_probability, edge_current_fraction, exact_lerw_law_with, green_function_exact, mu3_exact_law_with,
    spanning_tree_count_with, uniform_tree_law, ExactProb,
};
use crate::experiments::{
    central_edge, component_density_check, connection_probability, derive_seed, fit_power_law, free_wired_gap,
    green_function_scaling, intersection_moments, intersection_sweep, separator_probability, Budgets, EstimateResult,
    Placement,
};
use crate::lattice::{rect_grid, EdgeId, LatticeBox, LatticeCoord, MultiGraph, VertexId};
use crate::walks::{
    aldous_broder_tree_with_budget, lerw_sample, lerw_sample_zd, srw_path, srw_path_zd, RngStream, StopRule,
};

/// Paley-Zygmund checks allow this many standard errors of slack.
const PZ_SIGMAS: f64 = 3.0;

enum Host {
    Plain(MultiGraph),
    Lattice(LatticeBox),
}

impl Host {
    fn graph(&self) -> &MultiGraph {
        match self {
            Host::Plain(g) => g,
            Host::Lattice(b) => b.graph(),
        }
    }

    fn name(&self, v: VertexId) -> String {
        match self {
            Host::Plain(_) => v.to_string(),
            Host::Lattice(b) => b.coord(v).to_string(),
        }
    }

    fn vertex(&self, id: u32, field: &str) -> Result<VertexId> {
        let v = VertexId(id);
        self.graph().check_vertex(v).map_err(|_| schema(field, format!("vertex {id} is not in the graph")))?;
        Ok(v)
    }

    fn edge(&self, e: &EdgeRef) -> Result<EdgeId> {
        match (e, self) {
            (EdgeRef::Id(i), _) if (*i as usize) < self.graph().edge_count() => Ok(EdgeId(*i)),
            (EdgeRef::Id(i), _) => Err(schema("A", format!("edge {i} is not in the graph"))),
            (EdgeRef::Coords([x, y]), Host::Lattice(b)) => b
                .edge_between(&LatticeCoord(x.clone()), &LatticeCoord(y.clone()))
                .ok_or_else(|| schema("A", format!("{x:?} and {y:?} are not adjacent box vertices"))),
            (EdgeRef::Coords(_), Host::Plain(_)) => Err(schema("A", "coordinate edges need a lattice box (d and n)")),
        }
    }
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), message: message.into() }
}

fn host(spec: &ExperimentSpec, limits: &Limits) -> Result<Host> {
    if let Some(dims) = &spec.grid {
        return Ok(Host::Plain(rect_grid(dims)?));
    }
    if let Some(edges) = &spec.edges {
        let n = spec.vertices.ok_or_else(|| schema("vertices", "required together with edges"))?;
        return Ok(Host::Plain(MultiGraph::from_edges(n, edges.iter().copied())?));
    }
    let d = spec.need_d()?;
    let n = spec.need_single(&spec.n, "n")?;
    Ok(Host::Lattice(LatticeBox::with_budget(d, n, limits.vertex_budget)?))
}

fn budgets(limits: &Limits) -> Budgets {
    Budgets { step_budget: limits.step_budget, vertex_budget: limits.vertex_budget }
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn exact(label: impl Into<String>, seed: u64, p: ExactProb) -> Output {
    Output::new(label, seed, OutputValue::Exact(p))
}

fn estimate(label: impl Into<String>, e: EstimateResult) -> Output {
    Output::new(label, e.seed, OutputValue::Estimate(e))
}

/// Adds a log-log slope over `(x, estimate)` points when there are at least three.
fn push_fit(out: &mut Vec<Output>, label: String, seed: u64, points: &[(u32, &EstimateResult)]) -> Result<()> {
    if points.len() >= 3 {
        let pts: Vec<(f64, f64, f64)> = points.iter().map(|(x, e)| (*x as f64, e.mean, e.stderr)).collect();
        match fit_power_law(&pts) {
            Ok(fit) => out.push(Output::new(label, seed, OutputValue::Fit(fit))),
            // zero estimates have no logarithm; the points are still reported
            Err(Error::Fit(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

/// Sorted `a | b` lines for the edges of a tree, each edge written with its smaller end first.
fn tree_dump(host: &Host, edges: &[EdgeId]) -> String {
    let g = host.graph();
    let mut lines: Vec<(Vec<i64>, Vec<i64>, String)> = edges
        .iter()
        .map(|&e| {
            let (a, b) = g.endpoints(e).expect("tree edge");
            let key = |v: VertexId| match host {
                Host::Plain(_) => vec![v.0 as i64],
                Host::Lattice(bx) => bx.coord(v).0,
            };
            let (ka, kb) = (key(a), key(b));
            let (a, b, ka, kb) = if ka <= kb { (a, b, ka, kb) } else { (b, a, kb, ka) };
            let line = format!("{} | {}", host.name(a), host.name(b));
            (ka, kb, line)
        })
        .collect();
    lines.sort();
    lines.into_iter().map(|(_, _, l)| l).collect::<Vec<_>>().join("\n")
}

fn path_dump<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\n")
}

/// Largest `n` with `(2n+1)^d` within the vertex budget.
fn budget_radius(d: usize, vertex_budget: u64) -> u32 {
    let mut n = 0u32;
    while (2 * (n as u64 + 1) + 1).checked_pow(d as u32).is_some_and(|v| v <= vertex_budget) {
        n += 1;
    }
    n
}

/// Runs a validated spec.
pub fn run(spec: &ExperimentSpec) -> Result<ResultRecord> {
    spec.validate()?;
    let start = Instant::now();
    let outputs = dispatch(spec).map_err(|e| e.context(format!("running {:?}", spec.kind)))?;
    Ok(ResultRecord {
        spec: spec.clone(),
        outputs,
        versions: Versions::default(),
        timing: Timing { wall_seconds: start.elapsed().as_secs_f64() },
    })
}

fn dispatch(spec: &ExperimentSpec) -> Result<Vec<Output>> {
    let limits = spec.limits();
    let seed = spec.seed;
    let mut out = Vec::new();
    match spec.kind {
        Kind::TreeCount => {
            let h = host(spec, &limits)?;
            let count = spanning_tree_count_with(h.graph(), &limits.exact)?;
            out.push(Output::new("count", seed, OutputValue::Count(count.to_string())));
        }
        Kind::Cylinder => {
            let h = host(spec, &limits)?;
            let a: Vec<EdgeId> = spec.edge_set.iter().flatten().map(|e| h.edge(e)).collect::<Result<_>>()?;
            out.push(exact("probability", seed, cylinder_probability(h.graph(), &a)?));
        }
        Kind::CurrentFraction => {
            let h = host(spec, &limits)?;
            let e = h.edge(&spec.edge_set.as_ref().expect("validated")[0])?;
            out.push(exact("current_fraction", seed, edge_current_fraction(h.graph(), e)?));
        }
        Kind::Mu3Law => {
            let h = host(spec, &limits)?;
            let g = h.graph();
            let order: Vec<EdgeId> = match &spec.enumeration {
                Some(ids) => ids.iter().map(|&i| EdgeId(i)).collect(),
                None => g.edge_ids().collect(),
            };
            let law = mu3_exact_law_with(g, &order, &limits.exact)?;
            let uniform = uniform_tree_law(g)?;
            out.push(Output::new("trees", seed, OutputValue::Integer(law.len() as u64)));
            out.push(Output::new("equals_uniform", seed, OutputValue::Flag(law == uniform)));
            for (tree, p) in law {
                out.push(exact(join(tree), seed, p));
            }
        }
        Kind::LerwLaw => {
            let h = host(spec, &limits)?;
            let s = h.vertex(spec.source.expect("validated"), "source")?;
            let t = h.vertex(spec.target.expect("validated"), "target")?;
            let law = exact_lerw_law_with(h.graph(), s, t, &limits.exact)?;
            out.push(Output::new("paths", seed, OutputValue::Integer(law.support.len() as u64)));
            for (path, p) in law.support {
                let label = path.iter().map(|&v| h.name(v)).collect::<Vec<_>>().join(" -> ");
                out.push(exact(label, seed, p));
            }
        }
        Kind::FreeWiredGap => {
            let d = spec.need_d()?;
            let a = spec.coordinate_edges(d)?.unwrap_or_else(|| vec![central_edge(d)]);
            let m = match spec.m {
                Some(m) => m,
                None => a.iter().map(|(x, y)| x.norm().max(y.norm()) as u32).max().unwrap_or(1).max(1),
            };
            for row in free_wired_gap(d, &a, m, spec.n.as_deref().expect("validated"))? {
                out.push(exact(format!("free n={}", row.n), seed, row.free.clone()));
                out.push(exact(format!("wired n={}", row.n), seed, row.wired.clone()));
                out.push(exact(format!("gap n={}", row.n), seed, row.gap()));
            }
        }
        Kind::GreenExact => {
            let d = spec.need_d()?;
            let n = spec.need_single(&spec.n, "n")?;
            let lattice = LatticeBox::with_budget(d, n, limits.vertex_budget)?;
            if lattice.graph().vertex_count() > limits.exact.max_vertices {
                return Err(Error::ResourceLimit {
                    what: "vertices for an exact solve",
                    requested: lattice.graph().vertex_count() as u64,
                    limit: limits.exact.max_vertices as u64,
                });
            }
            for &r in spec.r.as_deref().expect("validated") {
                let y = lattice
                    .vertex(&LatticeCoord::axis(d, r as i64))
                    .ok_or_else(|| schema("r", format!("r={r} lies outside B_{n}")))?;
                let g = green_function_exact(&lattice, lattice.origin(), y)?;
                out.push(exact(format!("G r={r}"), seed, ExactProb(g)));
            }
        }
        Kind::SampleTree => {
            let h = host(spec, &limits)?;
            let root = match &h {
                Host::Lattice(b) => b.origin(),
                Host::Plain(_) => VertexId(spec.source.unwrap_or(0)),
            };
            let mut rng = RngStream::new(seed, 0);
            let t = aldous_broder_tree_with_budget(h.graph(), root, &mut rng, limits.step_budget)?;
            let edges = t.edges();
            out.push(Output::new("edges", seed, OutputValue::Integer(edges.len() as u64)));
            out.push(Output::new("tree", seed, OutputValue::Dump(tree_dump(&h, &edges))));
        }
        Kind::SampleWalk => {
            let d = spec.need_d()?;
            let m = spec.need_single(&spec.cutoff, "M")?;
            let mut rng = RngStream::new(seed, 0);
            let dump = if spec.n.is_some() {
                let h = host(spec, &limits)?;
                let Host::Lattice(b) = &h else { unreachable!() };
                let p = srw_path(h.graph(), b.origin(), &StopRule::steps(m), &mut rng)?;
                path_dump(p.vertices().iter().map(|&v| h.name(v)))
            } else {
                let p = srw_path_zd(&LatticeCoord::origin(d), &StopRule::steps(m), &mut rng)?;
                path_dump(p.vertices())
            };
            out.push(Output::new("walk", seed, OutputValue::Dump(dump)));
        }
        Kind::SampleLerw => {
            let mut rng = RngStream::new(seed, 0);
            if let (Some(s), Some(t)) = (spec.source, spec.target) {
                let h = host(spec, &limits)?;
                let (s, t) = (h.vertex(s, "source")?, h.vertex(t, "target")?);
                let p = lerw_sample(h.graph(), s, &[t], &mut rng)?;
                out.push(Output::new("length", seed, OutputValue::Integer(p.len() as u64)));
                out.push(Output::new("path", seed, OutputValue::Dump(path_dump(p.vertices().iter().map(|&v| h.name(v))))));
            } else {
                let d = spec.need_d()?;
                let m = spec.need_single(&spec.cutoff, "M")?;
                let l = lerw_sample_zd(&LatticeCoord::origin(d), m, &mut rng)?;
                out.push(Output::new("stable_len", seed, OutputValue::Integer(l.stable_len as u64)));
                out.push(Output::new("certified", seed, OutputValue::Flag(l.is_certified())));
                out.push(Output::new("path", seed, OutputValue::Dump(path_dump(l.stable_prefix().vertices()))));
            }
        }
        Kind::Intersection => {
            let d = spec.need_d()?;
            let ms = spec.need_list(&spec.cutoff, "M")?;
            let rs = spec.need_list(&spec.r, "r")?;
            let reps = spec.need_reps()?;
            let mut table = Vec::new();
            for (i, &r) in rs.iter().enumerate() {
                let s = derive_seed(seed, i as u64);
                table.push(intersection_sweep(d, r, ms, reps, s)?);
            }
            for (j, &m) in ms.iter().enumerate() {
                for (i, &r) in rs.iter().enumerate() {
                    out.push(estimate(format!("P r={r} M={m}"), table[i][j].clone()));
                }
                let pts: Vec<(u32, &EstimateResult)> = rs.iter().zip(&table).map(|(&r, row)| (r, &row[j])).collect();
                push_fit(&mut out, format!("slope M={m}"), seed, &pts)?;
            }
        }
        Kind::IntersectionMoments => {
            let d = spec.need_d()?;
            let m = spec.need_single(&spec.cutoff, "M")?;
            let reps = spec.need_reps()?;
            for (i, &r) in spec.need_list(&spec.r, "r")?.iter().enumerate() {
                let s = derive_seed(seed, i as u64);
                let mo = intersection_moments(d, r, m, reps, s)?;
                out.push(Output::new(format!("paley_zygmund r={r}"), s, OutputValue::Flag(mo.paley_zygmund_holds(PZ_SIGMAS))));
                out.push(Output::new(format!("pz_bound r={r}"), s, OutputValue::Number(mo.pz_bound)));
                out.push(Output::new(format!("pz_stderr r={r}"), s, OutputValue::Number(mo.pz_stderr)));
                out.push(estimate(format!("EX r={r}"), mo.ex));
                out.push(estimate(format!("EX2 r={r}"), mo.ex2));
                out.push(estimate(format!("P(X>0) r={r}"), mo.p_positive));
            }
        }
        Kind::Connection => {
            let d = spec.need_d()?;
            let rs = spec.need_list(&spec.r, "r")?;
            let ns = spec.need_list(&spec.n, "n")?;
            let m = spec.cutoff.as_ref().and_then(|v| v.first().copied()).unwrap_or(u64::MAX);
            let boundary = spec.boundary.unwrap_or_default();
            let reps = spec.need_reps()?;
            let mut ests = Vec::new();
            for (i, &r) in rs.iter().enumerate() {
                let n = if ns.len() == 1 { ns[0] } else { ns[i] };
                let s = derive_seed(seed, i as u64);
                let e = connection_probability(d, n, r, m, boundary, reps, s, &budgets(&limits))?;
                out.push(estimate(format!("P r={r} n={n}"), e.clone()));
                ests.push(e);
            }
            let pts: Vec<(u32, &EstimateResult)> = rs.iter().copied().zip(&ests).collect();
            push_fit(&mut out, "slope".into(), seed, &pts)?;
        }
        Kind::ComponentDensity => {
            let d = spec.need_d()?;
            let m = spec.cutoff.as_ref().and_then(|v| v.first().copied());
            let pairs = spec.pairs.unwrap_or(16);
            let reps = spec.need_reps()?;
            for (i, &n) in spec.need_list(&spec.n, "n")?.iter().enumerate() {
                let s = derive_seed(seed, i as u64);
                let rep = component_density_check(d, n, m, pairs, reps, s, &budgets(&limits))?;
                out.push(Output::new(format!("vertices n={n}"), s, OutputValue::Integer(rep.vertices)));
                out.push(estimate(format!("sum n={n}"), rep.sum));
                out.push(estimate(format!("ratio n={n}"), rep.ratio));
            }
        }
        Kind::Separator => {
            let d = spec.need_d()?;
            let ls = spec.need_list(&spec.separations, "L")?;
            let m = spec.cutoff.as_ref().and_then(|v| v.first().copied()).unwrap_or(u64::MAX);
            let reps = spec.need_reps()?;
            let cap = budget_radius(d, limits.vertex_budget);
            let mut ests = Vec::new();
            for (i, &l) in ls.iter().enumerate() {
                let n = match &spec.n {
                    Some(ns) if ns.len() == 1 => ns[0],
                    Some(ns) => ns[i],
                    None => (8 * l).min(cap),
                };
                let s = derive_seed(seed, i as u64);
                let e = separator_probability(d, n, &Placement::collinear(d, l), m, reps, s, &budgets(&limits))?;
                out.push(estimate(format!("P L={l} n={n}"), e.clone()));
                ests.push(e);
            }
            let pts: Vec<(u32, &EstimateResult)> = ls.iter().copied().zip(&ests).collect();
            push_fit(&mut out, "slope".into(), seed, &pts)?;
        }
        Kind::GreenScaling => {
            let d = spec.need_d()?;
            let n = spec.need_single(&spec.n, "n")?;
            let rs = spec.need_list(&spec.r, "r")?;
            let g = green_function_scaling(d, rs, n, spec.need_reps()?, derive_seed(seed, 0), spec.method.unwrap_or_default())?;
            for (r, e) in &g.values {
                out.push(estimate(format!("G r={r}"), e.clone()));
            }
            out.push(Output::new("decreasing", seed, OutputValue::Flag(g.decreasing)));
            out.push(Output::new("exact_solve", seed, OutputValue::Flag(g.exact)));
            out.push(Output::new("slope", seed, OutputValue::Fit(g.fit)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_spec;

    #[test]
    fn grid_tree_count() {
        let rec = run(&parse_spec(r#"{"kind":"tree_count","grid":[2,3],"seed":0}"#).unwrap()).unwrap();
        assert_eq!(rec.output("count"), Some(&OutputValue::Count("15".into())));
    }

    #[test]
    fn budget_radius_fits() {
        assert_eq!(budget_radius(3, 5_000_000), 84);
        assert_eq!(budget_radius(1, 3), 1);
        assert_eq!(budget_radius(2, 8), 0);
    }

    #[test]
    fn tree_dump_is_sorted_and_spanning() {
        let rec = run(&parse_spec(r#"{"kind":"sample_tree","d":2,"n":2,"seed":3}"#).unwrap()).unwrap();
        let Some(OutputValue::Dump(s)) = rec.output("tree") else { panic!() };
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 24);
        assert!(lines.iter().all(|l| l.contains(" | ")));
    }

    #[test]
    fn runs_are_reproducible_apart_from_timing() {
        let spec = parse_spec(r#"{"kind":"intersection","d":4,"r":[1,2,3],"M":[50,200],"reps":200,"seed":9}"#).unwrap();
        let mut a = run(&spec).unwrap();
        let mut b = run(&spec).unwrap();
        a.timing.wall_seconds = 0.0;
        b.timing.wall_seconds = 0.0;
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.output("slope M=200").is_some());
    }
}
