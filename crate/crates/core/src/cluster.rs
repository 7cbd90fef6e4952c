//! Average-linkage (UPGMA) agglomeration and Newick output.

use std::cmp::Ordering;

use serde_json::{json, Value};
use thiserror::Error;

use crate::matrix::DistanceMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClusterError {
    #[error("need at least two items to cluster, got {0}")]
    TooFewItems(usize),
    #[error("pair ({0}, {1}) has no finite distance")]
    Unclusterable(String, String),
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(String, String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf { name: String },
    Merge { left: usize, right: usize, height: f64 },
}

/// Rooted binary merge tree. Leaves come first in `nodes`, in the order of
/// the input matrix; the root is the last node.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    nodes: Vec<Node>,
}

const SYMMETRY_TOLERANCE: f64 = 1e-12;

pub fn upgma(m: &DistanceMatrix) -> Result<Dendrogram, ClusterError> {
    let n = m.len();
    if n < 2 {
        return Err(ClusterError::TooFewItems(n));
    }
    let names = m.items();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if !m.get(i, j).is_finite() {
                let (a, b) = ordered(&names[i], &names[j]);
                return Err(ClusterError::Unclusterable(a.clone(), b.clone()));
            }
            if (m.get(i, j) - m.get(j, i)).abs() > SYMMETRY_TOLERANCE {
                return Err(ClusterError::NotSymmetric(names[i].clone(), names[j].clone()));
            }
        }
    }

    let total = 2 * n - 1;
    let mut nodes: Vec<Node> = names.iter().map(|name| Node::Leaf { name: name.clone() }).collect();
    let mut dist = vec![vec![0.0f64; total]; total];
    for i in 0..n {
        for j in 0..n {
            dist[i][j] = m.get(i, j);
        }
    }
    // per node: sorted leaf names (tie-break key), leaf count, height
    let mut keys: Vec<Vec<String>> = names.iter().map(|s| vec![s.clone()]).collect();
    let mut sizes = vec![1usize; n];
    let mut heights = vec![0.0f64; n];
    let mut active: Vec<usize> = (0..n).collect();

    while active.len() > 1 {
        let mut best: Option<(f64, usize, usize)> = None;
        for (ai, &a) in active.iter().enumerate() {
            for &b in &active[ai + 1..] {
                let (a, b) = if keys[a] < keys[b] { (a, b) } else { (b, a) };
                let cand = (dist[a][b], a, b);
                let better = match best {
                    None => true,
                    Some((d, ba, bb)) => match cand.0.partial_cmp(&d).unwrap_or(Ordering::Equal) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => (&keys[a], &keys[b]) < (&keys[ba], &keys[bb]),
                    },
                };
                if better {
                    best = Some(cand);
                }
            }
        }
        let (d, a, b) = best.expect("at least two active clusters");
        let id = nodes.len();
        let height = (d / 2.0).max(heights[a]).max(heights[b]);
        nodes.push(Node::Merge { left: a, right: b, height });
        let mut key: Vec<String> = keys[a].iter().chain(&keys[b]).cloned().collect();
        key.sort();
        keys.push(key);
        sizes.push(sizes[a] + sizes[b]);
        heights.push(height);
        active.retain(|&c| c != a && c != b);
        for &c in &active {
            let v = (sizes[a] as f64 * dist[a][c] + sizes[b] as f64 * dist[b][c])
                / (sizes[a] + sizes[b]) as f64;
            dist[id][c] = v;
            dist[c][id] = v;
        }
        active.push(id);
    }
    Ok(Dendrogram { nodes })
}

fn ordered<'a>(a: &'a String, b: &'a String) -> (&'a String, &'a String) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Dendrogram {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn height(&self, node: usize) -> f64 {
        match self.nodes[node] {
            Node::Leaf { .. } => 0.0,
            Node::Merge { height, .. } => height,
        }
    }

    pub fn leaf_count(&self) -> usize {
        (self.nodes.len() + 1) / 2
    }

    pub fn leaf_names(&self) -> Vec<&str> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Leaf { name } => Some(name.as_str()),
                Node::Merge { .. } => None,
            })
            .collect()
    }

    /// Leaf indices under `node`.
    pub fn leaves_under(&self, node: usize) -> Vec<usize> {
        match self.nodes[node] {
            Node::Leaf { .. } => vec![node],
            Node::Merge { left, right, .. } => {
                let mut v = self.leaves_under(left);
                v.extend(self.leaves_under(right));
                v
            }
        }
    }

    /// Merge steps in order as `(left, right, height)`.
    pub fn merges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.nodes.iter().filter_map(|n| match *n {
            Node::Merge { left, right, height } => Some((left, right, height)),
            Node::Leaf { .. } => None,
        })
    }

    /// Leaf-to-leaf distances implied by the tree: twice the height of the
    /// lowest common merge.
    pub fn cophenetic(&self) -> Vec<Vec<f64>> {
        let n = self.leaf_count();
        let mut out = vec![vec![0.0; n]; n];
        for node in &self.nodes {
            if let Node::Merge { left, right, height } = *node {
                for a in self.leaves_under(left) {
                    for b in self.leaves_under(right) {
                        out[a][b] = 2.0 * height;
                        out[b][a] = 2.0 * height;
                    }
                }
            }
        }
        out
    }

    /// Newick text; branch lengths are height differences.
    pub fn to_newick(&self) -> String {
        let mut out = String::new();
        self.write_newick(self.root(), &mut out);
        out.push(';');
        out
    }

    fn write_newick(&self, node: usize, out: &mut String) {
        match &self.nodes[node] {
            Node::Leaf { name } => out.push_str(&newick_label(name)),
            Node::Merge { left, right, height } => {
                out.push('(');
                for (i, child) in [*left, *right].into_iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    self.write_newick(child, out);
                    out.push(':');
                    out.push_str(&branch_length(height - self.height(child)));
                }
                out.push(')');
            }
        }
    }

    /// `{"name", "height"}` for leaves, `{"children", "height"}` otherwise.
    pub fn to_json(&self) -> Value {
        self.node_json(self.root())
    }

    fn node_json(&self, node: usize) -> Value {
        match &self.nodes[node] {
            Node::Leaf { name } => json!({ "name": name, "height": 0.0 }),
            Node::Merge { left, right, height } => json!({
                "children": [self.node_json(*left), self.node_json(*right)],
                "height": height,
            }),
        }
    }
}

/// Quotes labels containing anything outside `[A-Za-z0-9_]`.
pub fn newick_label(name: &str) -> String {
    if !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        name.to_string()
    } else {
        format!("'{}'", name.replace('\'', "''"))
    }
}

fn branch_length(v: f64) -> String {
    let s = format!("{:.9}", v.max(0.0));
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() {
        "0".to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(names: &[&str], rows: Vec<Vec<f64>>) -> DistanceMatrix {
        DistanceMatrix::new(names.iter().map(|s| s.to_string()).collect(), rows).unwrap()
    }

    #[test]
    fn closest_pair_first() {
        let m = matrix(
            &["a", "b", "c"],
            vec![vec![0.0, 0.1, 0.9], vec![0.1, 0.0, 0.9], vec![0.9, 0.9, 0.0]],
        );
        let t = upgma(&m).unwrap();
        let first = t.merges().next().unwrap();
        assert_eq!((first.0, first.1), (0, 1));
        assert_eq!(first.2, 0.05);
        assert_eq!(t.to_newick(), "((a:0.05,b:0.05):0.4,c:0.45);");
    }

    #[test]
    fn single_merge_newick() {
        let m = matrix(&["a", "b"], vec![vec![0.0, 0.1], vec![0.1, 0.0]]);
        assert_eq!(upgma(&m).unwrap().to_newick(), "(a:0.05,b:0.05);");
    }

    #[test]
    fn ties_follow_name_order() {
        let names = ["d", "b", "a", "c"];
        let rows = (0..4)
            .map(|i| (0..4).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
            .collect();
        let t = upgma(&matrix(&names, rows)).unwrap();
        assert_eq!(t.to_newick(), "(((a:0.5,b:0.5):0,c:0.5):0,d:0.5);");
    }

    #[test]
    fn average_linkage_update() {
        // a-b merge at 1; then d({a,b}, c) = (3 + 5) / 2 = 4
        let m = matrix(
            &["a", "b", "c"],
            vec![vec![0.0, 2.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 5.0, 0.0]],
        );
        let t = upgma(&m).unwrap();
        assert_eq!(t.height(t.root()), 2.0);
        let coph = t.cophenetic();
        assert_eq!(coph[0][2], 4.0);
        assert_eq!(coph[0][1], 2.0);
    }

    #[test]
    fn label_quoting() {
        assert_eq!(newick_label("war_and_peace2"), "war_and_peace2");
        assert_eq!(newick_label("war&peace"), "'war&peace'");
        assert_eq!(newick_label("it's"), "'it''s'");
        assert_eq!(newick_label(""), "''");
    }

    #[test]
    fn rejects_bad_input() {
        let inf = matrix(
            &["x", "y", "z"],
            vec![
                vec![0.0, 1.0, f64::INFINITY],
                vec![1.0, 0.0, 1.0],
                vec![f64::INFINITY, 1.0, 0.0],
            ],
        );
        assert_eq!(
            upgma(&inf),
            Err(ClusterError::Unclusterable("x".into(), "z".into()))
        );
        let one = matrix(&["x"], vec![vec![0.0]]);
        assert_eq!(upgma(&one), Err(ClusterError::TooFewItems(1)));
        let asym = matrix(&["x", "y"], vec![vec![0.0, 1.0], vec![0.5, 0.0]]);
        assert!(matches!(upgma(&asym), Err(ClusterError::NotSymmetric(..))));
    }

    #[test]
    fn json_dump() {
        let m = matrix(&["a", "b"], vec![vec![0.0, 0.5], vec![0.5, 0.0]]);
        let j = upgma(&m).unwrap().to_json();
        assert_eq!(j["height"], 0.25);
        assert_eq!(j["children"][0]["name"], "a");
        assert_eq!(j["children"][1]["height"], 0.0);
    }
}
