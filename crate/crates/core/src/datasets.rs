//! Graph file loaders and the registry of classical benchmark datasets.
//!
//! Supported inputs:
//! * edge lists: whitespace-separated `source target [weight]` per line,
//!   `#` or `%` comments; nodes are numbered in order of first appearance;
//! * label sidecars: one class per line, listed in ascending order of the
//!   edge list's integer node ids;
//! * a GML subset: `node [ id label value ]` and `edge [ source target weight ]`,
//!   nodes numbered in declaration order, classes taken from `value`.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{is_connected, Graph};
use crate::Matrix;

/// Environment variable naming the directory that holds dataset files.
pub const DATA_ENV: &str = "KERNELBENCH_DATA";

const KARATE_GML: &str = include_str!("../data/karate.gml");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    Gml,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetDescriptor {
    pub name: &'static str,
    pub nodes: usize,
    pub classes: usize,
    /// File name relative to the data directory.
    pub file: &'static str,
    pub format: Format,
    /// Label sidecar for edge-list datasets.
    pub labels: Option<&'static str>,
}

/// The nine benchmark datasets.
pub fn registry() -> Vec<DatasetDescriptor> {
    let gml = |name, nodes, classes, file| DatasetDescriptor {
        name,
        nodes,
        classes,
        file,
        format: Format::Gml,
        labels: None,
    };
    let news = |name: &'static str, nodes, classes, file, labels| DatasetDescriptor {
        name,
        nodes,
        classes,
        file,
        format: Format::EdgeList,
        labels: Some(labels),
    };
    vec![
        gml("football", 115, 12, "football.gml"),
        gml("polbooks", 105, 3, "polbooks.gml"),
        gml("zachary", 34, 2, "karate.gml"),
        news("news_2cl_1", 400, 2, "news_2cl_1.edges", "news_2cl_1.labels"),
        news("news_2cl_2", 400, 2, "news_2cl_2.edges", "news_2cl_2.labels"),
        news("news_2cl_3", 400, 2, "news_2cl_3.edges", "news_2cl_3.labels"),
        news("news_3cl_1", 600, 3, "news_3cl_1.edges", "news_3cl_1.labels"),
        news("news_3cl_2", 600, 3, "news_3cl_2.edges", "news_3cl_2.labels"),
        news("news_3cl_3", 600, 3, "news_3cl_3.edges", "news_3cl_3.labels"),
    ]
}

pub fn find(name: &str) -> Result<DatasetDescriptor> {
    registry()
        .into_iter()
        .find(|d| d.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::NotFound(name.to_string()))
}

/// Data directory from [`DATA_ENV`], defaulting to `./data`.
pub fn data_root() -> PathBuf {
    std::env::var_os(DATA_ENV).map_or_else(|| PathBuf::from("data"), PathBuf::from)
}

/// Zachary's karate club as shipped with the crate (34 nodes, two factions).
pub fn zachary() -> Graph {
    parse_gml(KARATE_GML).expect("bundled karate club parses")
}

/// Whether the files for `desc` exist under `root` (Zachary is always available).
pub fn is_available(desc: &DatasetDescriptor, root: &Path) -> bool {
    desc.name == "zachary"
        || (root.join(desc.file).is_file() && desc.labels.is_none_or(|l| root.join(l).is_file()))
}

/// Loads a registry dataset and checks its size, class count and connectivity.
///
/// Zachary falls back to the bundled copy when no file is present.
pub fn load_dataset(desc: &DatasetDescriptor, root: &Path) -> Result<Graph> {
    let path = root.join(desc.file);
    let g = if desc.name == "zachary" && !path.is_file() {
        zachary()
    } else {
        if !path.is_file() {
            return Err(Error::NotFound(path.display().to_string()));
        }
        match desc.format {
            Format::Gml => load_gml(&path)?,
            Format::EdgeList => load_edge_list(&path, desc.labels.map(|l| root.join(l)).as_deref())?,
        }
    };
    if g.labels().is_none() {
        return Err(Error::MissingLabels);
    }
    if g.n() != desc.nodes || g.num_classes() != desc.classes {
        return Err(Error::DatasetMismatch {
            name: desc.name.to_string(),
            expected_nodes: desc.nodes,
            expected_classes: desc.classes,
            nodes: g.n(),
            classes: g.num_classes(),
        });
    }
    if !is_connected(&g) {
        return Err(Error::Disconnected);
    }
    Ok(g)
}

pub fn load_gml(path: &Path) -> Result<Graph> {
    parse_gml(&std::fs::read_to_string(path)?)
}

pub fn load_edge_list(path: &Path, labels: Option<&Path>) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    let labels = labels.map(std::fs::read_to_string).transpose()?;
    parse_edge_list(&text, labels.as_deref())
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Maps arbitrary class values to `0..k` in sorted order.
fn dense_classes<T: Ord + Clone>(values: &[T]) -> Vec<usize> {
    let mut distinct: Vec<T> = values.to_vec();
    distinct.sort();
    distinct.dedup();
    values
        .iter()
        .map(|v| distinct.binary_search(v).expect("value present"))
        .collect()
}

fn build(n: usize, edges: &[(usize, usize, f64)], labels: Option<Vec<usize>>, line_of: &[usize]) -> Result<Graph> {
    let mut a = Matrix::zeros(n, n);
    for (k, &(u, v, w)) in edges.iter().enumerate() {
        if u == v {
            return Err(parse_err(line_of[k], "self-loop"));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(parse_err(line_of[k], format!("edge weight {w} must be positive")));
        }
        a[(u, v)] = w;
        a[(v, u)] = w;
    }
    let g = Graph::new(a, None)?;
    match labels {
        Some(l) => g.with_labels(l),
        None => Ok(g),
    }
}

/// Parses an edge list and an optional label sidecar.
pub fn parse_edge_list(text: &str, labels: Option<&str>) -> Result<Graph> {
    let mut index: HashMap<i64, usize> = HashMap::new();
    let mut ids: Vec<i64> = Vec::new();
    let mut edges = Vec::new();
    let mut lines = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split(['#', '%']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(parse_err(ln + 1, format!("expected 2 or 3 fields, found {}", fields.len())));
        }
        let mut node = |s: &str| -> Result<usize> {
            let id: i64 = s
                .parse()
                .map_err(|_| parse_err(ln + 1, format!("node id {s:?} is not an integer")))?;
            Ok(*index.entry(id).or_insert_with(|| {
                ids.push(id);
                ids.len() - 1
            }))
        };
        let u = node(fields[0])?;
        let v = node(fields[1])?;
        let w = match fields.get(2) {
            Some(s) => s
                .parse::<f64>()
                .map_err(|_| parse_err(ln + 1, format!("weight {s:?} is not a number")))?,
            None => 1.0,
        };
        edges.push((u, v, w));
        lines.push(ln + 1);
    }
    let n = ids.len();
    let labels = match labels {
        None => None,
        Some(text) => {
            let values = parse_label_lines(text)?;
            if values.len() != n {
                return Err(Error::LabelCount { n, got: values.len() });
            }
            // Sidecar rows follow ascending node id; graph nodes follow first appearance.
            let by_id: BTreeMap<i64, usize> = ids.iter().enumerate().map(|(node, &id)| (id, node)).collect();
            let dense = dense_classes(&values);
            let mut labels = vec![0; n];
            for (row, (_, &node)) in by_id.iter().enumerate() {
                labels[node] = dense[row];
            }
            Some(labels)
        }
    };
    build(n, &edges, labels, &lines)
}

fn parse_label_lines(text: &str) -> Result<Vec<i64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(ln, l)| {
            l.trim()
                .parse::<i64>()
                .map_err(|_| parse_err(ln + 1, format!("class {:?} is not an integer", l.trim())))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Word(String),
    Str(String),
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        if line.trim_start().starts_with('#') {
            continue;
        }
        let mut chars = line.char_indices().peekable();
        while let Some(&(start, c)) = chars.peek() {
            match c {
                c if c.is_whitespace() => {
                    chars.next();
                }
                '[' => {
                    chars.next();
                    out.push((Token::Open, ln));
                }
                ']' => {
                    chars.next();
                    out.push((Token::Close, ln));
                }
                '"' => {
                    chars.next();
                    let mut s = String::new();
                    loop {
                        match chars.next() {
                            Some((_, '"')) => break,
                            Some((_, ch)) => s.push(ch),
                            None => return Err(parse_err(ln, "unterminated string")),
                        }
                    }
                    out.push((Token::Str(s), ln));
                }
                _ => {
                    let mut end = line.len();
                    while let Some(&(i, ch)) = chars.peek() {
                        if ch.is_whitespace() || ch == '[' || ch == ']' || ch == '"' {
                            end = i;
                            break;
                        }
                        chars.next();
                    }
                    out.push((Token::Word(line[start..end].to_string()), ln));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug)]
enum Value {
    Scalar(String, bool),
    List(Vec<(String, Value, usize)>),
}

fn parse_list(tokens: &[(Token, usize)], pos: &mut usize, nested: bool) -> Result<Vec<(String, Value, usize)>> {
    let mut items = Vec::new();
    loop {
        let Some((tok, ln)) = tokens.get(*pos) else {
            if nested {
                let ln = tokens.last().map_or(0, |t| t.1);
                return Err(parse_err(ln, "missing closing bracket"));
            }
            return Ok(items);
        };
        let ln = *ln;
        *pos += 1;
        let key = match tok {
            Token::Close if nested => return Ok(items),
            Token::Word(k) => k.clone(),
            other => return Err(parse_err(ln, format!("expected a key, found {other:?}"))),
        };
        let value = match tokens.get(*pos) {
            Some((Token::Open, _)) => {
                *pos += 1;
                Value::List(parse_list(tokens, pos, true)?)
            }
            Some((Token::Word(w), _)) => Value::Scalar(w.clone(), false),
            Some((Token::Str(s), _)) => Value::Scalar(s.clone(), true),
            _ => return Err(parse_err(ln, format!("key {key:?} has no value"))),
        };
        if matches!(value, Value::Scalar(..)) {
            *pos += 1;
        }
        items.push((key, value, ln));
    }
}

fn scalar<'a>(items: &'a [(String, Value, usize)], key: &str) -> Option<(&'a str, bool, usize)> {
    items.iter().find_map(|(k, v, ln)| match v {
        Value::Scalar(s, quoted) if k == key => Some((s.as_str(), *quoted, *ln)),
        _ => None,
    })
}

/// Class value of a GML node: numbers compare numerically, strings lexically.
#[derive(Debug, Clone)]
enum Class {
    Num(f64),
    Text(String),
}

impl PartialEq for Class {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for Class {}

impl PartialOrd for Class {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Class {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Class::Num(a), Class::Num(b)) => a.total_cmp(b),
            (Class::Num(_), Class::Text(_)) => std::cmp::Ordering::Less,
            (Class::Text(_), Class::Num(_)) => std::cmp::Ordering::Greater,
            (Class::Text(a), Class::Text(b)) => a.cmp(b),
        }
    }
}

/// Parses the GML subset described in the module docs.
pub fn parse_gml(text: &str) -> Result<Graph> {
    let tokens = tokenize(text)?;
    let mut pos = 0;
    let top = parse_list(&tokens, &mut pos, false)?;
    let graph = top
        .iter()
        .find_map(|(k, v, _)| match v {
            Value::List(items) if k == "graph" => Some(items),
            _ => None,
        })
        .ok_or_else(|| parse_err(1, "no graph block"))?;

    let mut index: HashMap<String, usize> = HashMap::new();
    let mut classes: Vec<Option<Class>> = Vec::new();
    let mut edges = Vec::new();
    let mut lines = Vec::new();
    for (key, value, ln) in graph {
        let Value::List(items) = value else { continue };
        match key.as_str() {
            "node" => {
                let (id, _, _) = scalar(items, "id").ok_or_else(|| parse_err(*ln, "node without id"))?;
                if index.insert(id.to_string(), classes.len()).is_some() {
                    return Err(parse_err(*ln, format!("duplicate node id {id}")));
                }
                classes.push(scalar(items, "value").map(|(v, quoted, _)| match v.parse::<f64>() {
                    Ok(x) if !quoted => Class::Num(x),
                    _ => Class::Text(v.to_string()),
                }));
            }
            "edge" => {
                let end = |name: &str| -> Result<usize> {
                    let (id, _, l) = scalar(items, name).ok_or_else(|| parse_err(*ln, format!("edge without {name}")))?;
                    index
                        .get(id)
                        .copied()
                        .ok_or_else(|| parse_err(l, format!("edge refers to unknown node {id}")))
                };
                let (u, v) = (end("source")?, end("target")?);
                let w = match scalar(items, "weight") {
                    Some((s, _, l)) => s
                        .parse::<f64>()
                        .map_err(|_| parse_err(l, format!("weight {s:?} is not a number")))?,
                    None => 1.0,
                };
                edges.push((u, v, w));
                lines.push(*ln);
            }
            _ => {}
        }
    }
    let labels = if classes.iter().all(Option::is_none) {
        None
    } else if classes.iter().any(Option::is_none) {
        return Err(Error::MissingLabels);
    } else {
        let values: Vec<Class> = classes.into_iter().flatten().collect();
        Some(dense_classes(&values))
    };
    build(index.len(), &edges, labels, &lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_with_sidecar() {
        let g = parse_edge_list("0 1\n1 2", Some("0\n0\n1")).unwrap();
        assert_eq!(g, crate::graph::named::path(3).with_labels(vec![0, 0, 1]).unwrap());
    }

    #[test]
    fn edge_list_remaps_first_appearance() {
        let g = parse_edge_list("# comment\n10 3\n3 7 % trailing\n", Some("5\n9\n5")).unwrap();
        // Nodes: 10 -> 0, 3 -> 1, 7 -> 2. Sidecar rows are ids 3, 7, 10.
        assert_eq!(g.labels().unwrap(), &[0, 0, 1]);
        assert_eq!(g.adjacency()[(0, 1)], 1.0);
        assert_eq!(g.adjacency()[(1, 2)], 1.0);
        assert!(!g.is_weighted());
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(parse_edge_list("0 1\n1 x\n", None), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("0 1 2 3\n", None), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("0 0\n", None), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("0 1\n", Some("0\n")), Err(Error::LabelCount { .. })));
        assert!(matches!(parse_edge_list("0 1 -2\n", None), Err(Error::Parse { .. })));
    }

    #[test]
    fn weighted_edge_list() {
        let g = parse_edge_list("0 1 2.5\n1 2 0.5\n", None).unwrap();
        assert!(g.is_weighted());
        assert_eq!(g.adjacency()[(1, 0)], 2.5);
    }

    #[test]
    fn gml_subset() {
        let text = r#"
Creator "test"
graph [
  directed 0
  node [ id 5 label "a" value "x" ]
  node [ id 2 label "b" value "y" ]
  node [ id 9 value "x" graphics [ w 3 ] ]
  edge [ source 5 target 2 ]
  edge [ source 2 target 9 ]
]
"#;
        let g = parse_gml(text).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.labels().unwrap(), &[0, 1, 0]);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.adjacency()[(0, 1)], 1.0);
    }

    #[test]
    fn gml_errors() {
        assert!(matches!(parse_gml("graph [ node [ id 1 ]"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_gml("graph [\nnode [ id 1 ]\nedge [ source 1 target 4 ]\n]"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert_eq!(
            parse_gml("graph [ node [ id 1 value 0 ] node [ id 2 ] edge [ source 1 target 2 ] ]"),
            Err(Error::MissingLabels)
        );
    }

    #[test]
    fn bundled_karate() {
        let g = zachary();
        assert_eq!((g.n(), g.num_classes(), g.edge_count()), (34, 2, 78));
        assert!(is_connected(&g));
    }

    #[test]
    fn registry_contents() {
        let r = registry();
        assert_eq!(r.len(), 9);
        let d = find("news_3cl_2").unwrap();
        assert_eq!((d.nodes, d.classes), (600, 3));
        assert_eq!(find("nope"), Err(Error::NotFound("nope".into())));
    }

    #[test]
    fn missing_files() {
        let root = Path::new("/nonexistent");
        let fb = find("football").unwrap();
        assert!(!is_available(&fb, root));
        assert!(matches!(load_dataset(&fb, root), Err(Error::NotFound(_))));
        let z = load_dataset(&find("zachary").unwrap(), root).unwrap();
        assert_eq!(z, zachary());
    }
}
