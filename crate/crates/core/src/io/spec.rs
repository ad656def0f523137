use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::exact::ExactLimits;
use crate::experiments::{Boundary, GreenMethod, MAX_HORIZON};
use crate::lattice::{DEFAULT_VERTEX_BUDGET, LatticeCoord};
use crate::walks::DEFAULT_STEP_BUDGET;

/// Version of the spec and record layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    TreeCount,
    Cylinder,
    CurrentFraction,
    Mu3Law,
    LerwLaw,
    FreeWiredGap,
    GreenExact,
    SampleTree,
    SampleWalk,
    SampleLerw,
    Intersection,
    IntersectionMoments,
    Connection,
    ComponentDensity,
    Separator,
    GreenScaling,
}

/// Which front-end subcommand runs a kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Category {
    Exact,
    Sample,
    Experiment,
}

impl Kind {
    pub fn category(self) -> Category {
        use Kind::*;
        match self {
            TreeCount | Cylinder | CurrentFraction | Mu3Law | LerwLaw | FreeWiredGap | GreenExact => Category::Exact,
            SampleTree | SampleWalk | SampleLerw => Category::Sample,
            Intersection | IntersectionMoments | Connection | ComponentDensity | Separator | GreenScaling => Category::Experiment,
        }
    }
}

/// An edge named by id or by its two lattice endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeRef {
    Id(u32),
    Coords([Vec<i64>; 2]),
}

/// Size limits a spec runs under.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Limits {
    pub max_reps: u64,
    pub max_cutoff: u64,
    pub step_budget: u64,
    pub vertex_budget: u64,
    pub exact: ExactLimits,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_reps: 10_000_000,
            max_cutoff: MAX_HORIZON,
            step_budget: DEFAULT_STEP_BUDGET,
            vertex_budget: DEFAULT_VERTEX_BUDGET,
            exact: ExactLimits::default(),
        }
    }
}

fn one_or_many<'de, D, T>(d: D) -> std::result::Result<Option<Vec<T>>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany<T> {
        One(T),
        Many(Vec<T>),
    }
    Ok(Option::<OneOrMany<T>>::deserialize(d)?.map(|x| match x {
        OneOrMany::One(v) => vec![v],
        OneOrMany::Many(v) => v,
    }))
}

/// One run request. Scalar-or-list fields (`n`, `r`, `L`, `M`) accept either form and are
/// stored as lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<u32>>,
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<u32>>,
    #[serde(rename = "L", default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub separations: Option<Vec<u32>>,
    /// Path-length or step cutoffs.
    #[serde(rename = "M", default, deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<Vec<u64>>,
    /// Radius containing the edge set `A`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(u32, u32)>>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub edge_set: Option<Vec<EdgeRef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enumeration: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Boundary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<GreenMethod>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reps: Option<u64>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budgets: Option<Limits>,
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), message: message.into() }
}

impl ExperimentSpec {
    /// A spec of the given kind with every optional field unset.
    pub fn new(kind: Kind, seed: u64) -> Self {
        ExperimentSpec {
            kind,
            d: None,
            n: None,
            r: None,
            separations: None,
            cutoff: None,
            m: None,
            grid: None,
            vertices: None,
            edges: None,
            edge_set: None,
            enumeration: None,
            source: None,
            target: None,
            boundary: None,
            pairs: None,
            method: None,
            reps: None,
            seed,
            budgets: None,
        }
    }

    pub fn limits(&self) -> Limits {
        self.budgets.clone().unwrap_or_default()
    }

    pub(crate) fn need_d(&self) -> Result<usize> {
        match self.d {
            Some(0) => Err(schema("d", "dimension must be positive")),
            Some(d) => Ok(d),
            None => Err(schema("d", "required")),
        }
    }

    pub(crate) fn need_list<'a, T>(&self, v: &'a Option<Vec<T>>, path: &str) -> Result<&'a [T]> {
        match v {
            Some(v) if !v.is_empty() => Ok(v),
            Some(_) => Err(schema(path, "must not be empty")),
            None => Err(schema(path, "required")),
        }
    }

    pub(crate) fn need_single<T: Copy>(&self, v: &Option<Vec<T>>, path: &str) -> Result<T> {
        match self.need_list(v, path)? {
            [x] => Ok(*x),
            _ => Err(schema(path, "expects a single value")),
        }
    }

    pub(crate) fn need_reps(&self) -> Result<u64> {
        match self.reps {
            Some(0) => Err(schema("reps", "must be positive")),
            Some(r) => Ok(r),
            None => Err(schema("reps", "required")),
        }
    }

    fn has_graph(&self) -> bool {
        self.grid.is_some() || self.edges.is_some() || (self.d.is_some() && self.n.is_some())
    }

    /// Kind-specific checks run after parsing.
    pub fn validate(&self) -> Result<()> {
        use Kind::*;
        let limits = self.limits();
        if let Some(r) = self.reps {
            if r > limits.max_reps {
                return Err(Error::Budget(format!("reps {r} exceeds max_reps {}", limits.max_reps)));
            }
        }
        if let Some(ms) = &self.cutoff {
            if let Some(&m) = ms.iter().max() {
                if m > limits.max_cutoff && matches!(self.kind, Intersection | IntersectionMoments | SampleWalk | SampleLerw) {
                    return Err(Error::Budget(format!("cutoff M={m} exceeds max_cutoff {}", limits.max_cutoff)));
                }
            }
        }
        if self.edges.is_some() && self.vertices.is_none() {
            return Err(schema("vertices", "required together with edges"));
        }
        if let Some(g) = &self.grid {
            if g.is_empty() || g.contains(&0) {
                return Err(schema("grid", "side lengths must be positive"));
            }
        }
        match self.kind {
            TreeCount | Mu3Law | SampleTree => self.require_graph()?,
            Cylinder => {
                self.require_graph()?;
                self.need_list(&self.edge_set, "A")?;
            }
            CurrentFraction => {
                self.require_graph()?;
                if self.need_list(&self.edge_set, "A")?.len() != 1 {
                    return Err(schema("A", "current fraction takes exactly one edge"));
                }
            }
            LerwLaw => {
                self.require_graph()?;
                self.source.ok_or_else(|| schema("source", "required"))?;
                self.target.ok_or_else(|| schema("target", "required"))?;
            }
            FreeWiredGap => {
                self.need_d()?;
                self.need_list(&self.n, "n")?;
                if let Some(a) = &self.edge_set {
                    if a.iter().any(|e| matches!(e, EdgeRef::Id(_))) {
                        return Err(schema("A", "free/wired comparison names edges by lattice endpoints"));
                    }
                }
            }
            GreenExact => {
                self.need_d()?;
                self.need_single(&self.n, "n")?;
                self.need_list(&self.r, "r")?;
            }
            SampleWalk => {
                self.need_d()?;
                self.need_single(&self.cutoff, "M")?;
            }
            SampleLerw => {
                if self.source.is_some() || self.target.is_some() || self.grid.is_some() || self.edges.is_some() {
                    self.require_graph()?;
                    self.source.ok_or_else(|| schema("source", "required"))?;
                    self.target.ok_or_else(|| schema("target", "required"))?;
                } else {
                    self.require_infinite_lerw()?;
                    self.need_single(&self.cutoff, "M")?;
                }
            }
            Intersection => {
                self.require_infinite_lerw()?;
                self.need_list(&self.r, "r")?;
                self.need_list(&self.cutoff, "M")?;
                self.need_reps()?;
            }
            IntersectionMoments => {
                if self.need_d()? < 5 {
                    return Err(schema("d", "intersection moments need d ≥ 5"));
                }
                self.need_list(&self.r, "r")?;
                self.need_single(&self.cutoff, "M")?;
                self.need_reps()?;
            }
            Connection => {
                self.need_d()?;
                let r = self.need_list(&self.r, "r")?;
                let n = self.need_list(&self.n, "n")?;
                if n.len() != 1 && n.len() != r.len() {
                    return Err(schema("n", "give one box radius or one per separation"));
                }
                self.need_reps()?;
            }
            ComponentDensity => {
                self.need_d()?;
                self.need_list(&self.n, "n")?;
                self.need_reps()?;
            }
            Separator => {
                self.need_d()?;
                let l = self.need_list(&self.separations, "L")?;
                if let Some(n) = &self.n {
                    if n.len() != 1 && n.len() != l.len() {
                        return Err(schema("n", "give one box radius or one per separation"));
                    }
                }
                self.need_reps()?;
            }
            GreenScaling => {
                if self.need_d()? < 3 {
                    return Err(schema("d", "Green's function scaling needs d ≥ 3"));
                }
                self.need_list(&self.r, "r")?;
                self.need_single(&self.n, "n")?;
                self.need_reps()?;
            }
        }
        Ok(())
    }

    fn require_graph(&self) -> Result<()> {
        if !self.has_graph() {
            return Err(schema("grid", "a graph is required: grid, vertices+edges, or d+n"));
        }
        if self.grid.is_none() && self.edges.is_none() {
            self.need_single(&self.n, "n")?;
        }
        Ok(())
    }

    fn require_infinite_lerw(&self) -> Result<()> {
        if self.need_d()? < 3 {
            return Err(schema("d", "d must be ≥ 3 for infinite-context LERW"));
        }
        Ok(())
    }

    /// Edge set `A` given by coordinates, if any entry is an id this fails.
    pub(crate) fn coordinate_edges(&self, d: usize) -> Result<Option<Vec<(LatticeCoord, LatticeCoord)>>> {
        let Some(a) = &self.edge_set else { return Ok(None) };
        a.iter()
            .map(|e| match e {
                EdgeRef::Coords([x, y]) if x.len() == d && y.len() == d => Ok((LatticeCoord(x.clone()), LatticeCoord(y.clone()))),
                EdgeRef::Coords(_) => Err(schema("A", format!("edge endpoints must have {d} coordinates"))),
                EdgeRef::Id(_) => Err(schema("A", "expected coordinate pairs")),
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }
}

/// Parses and validates a JSON spec. Unknown fields are rejected and errors name the field.
pub fn parse_spec(text: &str) -> Result<ExperimentSpec> {
    let mut de = serde_json::Deserializer::from_str(text);
    let spec: ExperimentSpec = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        Error::Schema { path, message: e.into_inner().to_string() }
    })?;
    de.end().map_err(|e| schema(".", e.to_string()))?;
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_example_parses() {
        let s = parse_spec(r#"{"kind":"intersection","d":5,"r":[2,4,8],"M":100000,"reps":10000,"seed":42}"#).unwrap();
        assert_eq!(s.kind, Kind::Intersection);
        assert_eq!(s.cutoff, Some(vec![100_000]));
        assert_eq!(s.r, Some(vec![2, 4, 8]));
    }

    #[test]
    fn planar_lerw_is_rejected() {
        let e = parse_spec(r#"{"kind":"intersection","d":2,"r":[2],"M":10,"reps":5,"seed":1}"#).unwrap_err();
        assert!(e.to_string().contains("d must be ≥ 3 for infinite-context LERW"), "{e}");
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn seed_is_mandatory_and_fields_are_strict() {
        let e = parse_spec(r#"{"kind":"tree_count","grid":[2,3]}"#).unwrap_err();
        assert!(e.to_string().contains("seed"), "{e}");
        let e = parse_spec(r#"{"kind":"tree_count","grid":[2,3],"seed":1,"colour":"red"}"#).unwrap_err();
        assert!(e.to_string().contains("colour"), "{e}");
        let e = parse_spec(r#"{"kind":"tree_count","grid":[2,3],"seed":1,"budgets":{"max_reps":1,"bogus":2}}"#).unwrap_err();
        match e {
            Error::Schema { path, .. } => assert!(path.starts_with("budgets"), "{path}"),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn budgets_are_enforced() {
        let e = parse_spec(r#"{"kind":"intersection","d":5,"r":2,"M":10,"reps":100,"seed":1,"budgets":{"max_reps":10}}"#).unwrap_err();
        assert_eq!(e.exit_code(), 3);
        let e = parse_spec(r#"{"kind":"intersection","d":5,"r":2,"M":1000,"reps":1,"seed":1,"budgets":{"max_cutoff":10}}"#).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn missing_fields_name_their_path() {
        let e = parse_spec(r#"{"kind":"connection","d":3,"r":[2],"reps":3,"seed":1}"#).unwrap_err();
        match e {
            Error::Schema { path, .. } => assert_eq!(path, "n"),
            other => panic!("{other}"),
        }
    }
}
