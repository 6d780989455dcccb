//! File formats and graph spec strings.
//!
//! * Edge lists: UTF-8, one `u v` pair of non-negative integers per line,
//!   whitespace separated. Blank lines and lines starting with `#` are
//!   skipped, duplicate edges collapse, self-loops are rejected.
//! * Vertex functions: CSV with header `vertex,value`. Values are written in
//!   shortest round-trip decimal form.
//! * Graph specs: `builtin:<name>[?key=value&...]` or `file:<path>`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::graph::{generators, EdgeListGraph, GraphOracle, VertexId};
use crate::operators::VertexFunction;
use crate::{HeatError, Result};

/// Names accepted after `builtin:`.
pub const BUILTIN_NAMES: [&str; 5] = ["path_z", "lattice_z2", "tree_regular", "figure1", "star_growing"];

/// Parses an edge list.
pub fn read_edge_list(reader: impl BufRead) -> Result<EdgeListGraph> {
    let mut edges = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v] = fields.as_slice() else {
            return Err(HeatError::Parse(format!(
                "line {}: expected two vertex ids, got {line:?}",
                lineno + 1
            )));
        };
        let parse = |s: &str| {
            s.parse::<u64>()
                .map(VertexId)
                .map_err(|_| HeatError::Parse(format!("line {}: {s:?} is not a vertex id", lineno + 1)))
        };
        edges.push((parse(u)?, parse(v)?));
    }
    EdgeListGraph::from_edges(edges)
}

pub fn load_edge_list(path: &Path) -> Result<GraphOracle> {
    let file = std::fs::File::open(path)?;
    read_edge_list(std::io::BufReader::new(file))?.into_oracle(path.display().to_string())
}

pub fn write_edge_list(graph: &EdgeListGraph, mut out: impl Write) -> Result<()> {
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

/// Parses `vertex,value` rows; a leading header line is optional.
pub fn read_vertex_function(reader: impl BufRead) -> Result<VertexFunction> {
    let mut f = VertexFunction::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (lineno == 0 && line.starts_with("vertex")) {
            continue;
        }
        let bad = || HeatError::Parse(format!("line {}: expected `vertex,value`, got {line:?}", lineno + 1));
        let (v, value) = line.split_once(',').ok_or_else(bad)?;
        let v: u64 = v.trim().parse().map_err(|_| bad())?;
        let value: f64 = value.trim().parse().map_err(|_| bad())?;
        if !value.is_finite() {
            return Err(HeatError::Parse(format!("line {}: value must be finite", lineno + 1)));
        }
        f.set(VertexId(v), value);
    }
    Ok(f)
}

pub fn load_vertex_function(path: &Path) -> Result<VertexFunction> {
    read_vertex_function(std::io::BufReader::new(std::fs::File::open(path)?))
}

pub fn write_vertex_function(f: &VertexFunction, mut out: impl Write) -> Result<()> {
    writeln!(out, "vertex,value")?;
    for (x, v) in f.iter() {
        writeln!(out, "{x},{v}")?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSource {
    Builtin(String),
    File(PathBuf),
}

/// A parsed `builtin:` or `file:` graph description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSpec {
    pub source: GraphSource,
    pub params: BTreeMap<String, String>,
}

impl FromStr for GraphSpec {
    type Err = HeatError;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(path) = s.strip_prefix("file:") {
            if path.is_empty() {
                return Err(HeatError::Parse("file: spec needs a path".into()));
            }
            return Ok(GraphSpec {
                source: GraphSource::File(PathBuf::from(path)),
                params: BTreeMap::new(),
            });
        }
        let rest = s
            .strip_prefix("builtin:")
            .ok_or_else(|| HeatError::Parse(format!("graph spec {s:?} must start with builtin: or file:")))?;
        let (name, query) = rest.split_once('?').unwrap_or((rest, ""));
        if !BUILTIN_NAMES.contains(&name) {
            return Err(HeatError::Parse(format!(
                "unknown builtin graph {name:?}; expected one of {}",
                BUILTIN_NAMES.join(", ")
            )));
        }
        let mut params = BTreeMap::new();
        for pair in query.split('&').filter(|p| !p.is_empty()) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| HeatError::Parse(format!("malformed parameter {pair:?}, expected key=value")))?;
            if params.insert(k.to_string(), v.to_string()).is_some() {
                return Err(HeatError::Parse(format!("parameter {k:?} given twice")));
            }
        }
        let allowed: &[&str] = match name {
            "tree_regular" => &["degree"],
            "star_growing" => &["arms"],
            _ => &[],
        };
        if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(HeatError::Parse(format!("builtin {name:?} does not take parameter {k:?}")));
        }
        Ok(GraphSpec {
            source: GraphSource::Builtin(name.to_string()),
            params,
        })
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            GraphSource::File(p) => write!(f, "file:{}", p.display()),
            GraphSource::Builtin(name) => {
                write!(f, "builtin:{name}")?;
                for (i, (k, v)) in self.params.iter().enumerate() {
                    write!(f, "{}{k}={v}", if i == 0 { '?' } else { '&' })?;
                }
                Ok(())
            }
        }
    }
}

impl GraphSpec {
    fn positive_param(&self, key: &str, default: u64) -> Result<u64> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => match v.parse::<u64>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(HeatError::Parse(format!("parameter {key} must be a positive integer, got {v:?}"))),
            },
        }
    }
}

/// Builds the oracle a spec describes. `tree_regular` defaults to degree 3,
/// `star_growing` to 3 arms.
pub fn generate(spec: &GraphSpec) -> Result<GraphOracle> {
    match &spec.source {
        GraphSource::File(path) => load_edge_list(path),
        GraphSource::Builtin(name) => Ok(match name.as_str() {
            "path_z" => generators::path_z(),
            "lattice_z2" => generators::lattice_z2(),
            "tree_regular" => generators::tree_regular(spec.positive_param("degree", 3)?),
            "figure1" => generators::figure1(),
            "star_growing" => generators::star_growing(spec.positive_param("arms", 3)?),
            other => return Err(HeatError::Parse(format!("unknown builtin graph {other:?}"))),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_with_comments_and_duplicates() {
        let text = "# k3\n0 1\n1 2\n\n2 0\n1 0\n";
        let g = read_edge_list(text.as_bytes()).unwrap();
        assert_eq!(g.edges().len(), 3);
        let mut out = Vec::new();
        write_edge_list(&g, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "0 1\n0 2\n1 2\n");
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(read_edge_list("0 1 2\n".as_bytes()), Err(HeatError::Parse(_))));
        assert!(matches!(read_edge_list("0 -1\n".as_bytes()), Err(HeatError::Parse(_))));
        assert!(matches!(read_edge_list("4 4\n".as_bytes()), Err(HeatError::Structural(_))));
    }

    #[test]
    fn vertex_function_csv() {
        let f: VertexFunction = [(VertexId(3), 0.1), (VertexId(0), -2.5e-17)].into_iter().collect();
        let mut out = Vec::new();
        write_vertex_function(&f, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "vertex,value\n0,-0.000000000000000025\n3,0.1\n");
        assert_eq!(read_vertex_function(text.as_bytes()).unwrap(), f);
        assert!(read_vertex_function("vertex,value\n1;2\n".as_bytes()).is_err());
        assert!(read_vertex_function("1,inf\n".as_bytes()).is_err());
    }

    #[test]
    fn spec_parsing() {
        let s: GraphSpec = "builtin:tree_regular?degree=4".parse().unwrap();
        assert_eq!(s.source, GraphSource::Builtin("tree_regular".into()));
        assert_eq!(s.params["degree"], "4");
        assert_eq!(s.to_string(), "builtin:tree_regular?degree=4");
        assert_eq!(generate(&s).unwrap().valence(VertexId(9)).unwrap(), 4);

        let f: GraphSpec = "file:/tmp/a?b.txt".parse().unwrap();
        assert_eq!(f.source, GraphSource::File("/tmp/a?b.txt".into()));

        for bad in [
            "builtin:nope",
            "builtin:figure1?x=1",
            "builtin:tree_regular?degree=0",
            "builtin:tree_regular?degree",
            "builtin:star_growing?arms=2&arms=3",
            "lattice",
            "file:",
        ] {
            let parsed = bad.parse::<GraphSpec>().and_then(|s| generate(&s));
            assert!(matches!(parsed, Err(HeatError::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn figure1_valences_via_spec() {
        let g = generate(&"builtin:figure1".parse().unwrap()).unwrap();
        assert_eq!(g.valence(g.root()).unwrap(), 2);
        let row3 = VertexId(generators::figure1_id(3, 2));
        assert_eq!(g.valence(row3).unwrap(), 6);
        let z = generate(&"builtin:path_z".parse().unwrap()).unwrap();
        assert!((0..50).all(|x| z.valence(VertexId(x)).unwrap() == 2));
    }
}
