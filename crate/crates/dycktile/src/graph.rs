//! Weighted graphs with distinguished boundary nodes, shared by the exact
//! oracle and the response-matrix machinery.
//!
//! JSON form: `{"vertices": k, "edges": [[u, v, w], …], "nodes": [v0, v1, …]}`
//! with 0-based vertex ids, weights given as integers or `"p/q"` strings, and
//! nodes listed in circular order around the outer face.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize, BigRational)>,
    nodes: Vec<usize>,
}

impl WeightedGraph {
    pub fn new(
        vertex_count: usize,
        edges: Vec<(usize, usize, BigRational)>,
        nodes: Vec<usize>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(u, v, ref w) in &edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u},{v})")));
            }
            if !w.is_positive() {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) has nonpositive weight")));
            }
        }
        let mut node_seen = BTreeSet::new();
        for &v in &nodes {
            if v >= vertex_count {
                return Err(Error::InvalidGraph(format!("node {v} out of range")));
            }
            if !node_seen.insert(v) {
                return Err(Error::InvalidGraph(format!("node {v} repeated")));
            }
        }
        Ok(WeightedGraph { vertex_count, edges, nodes })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize, BigRational)] {
        &self.edges
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn with_nodes(&self, nodes: Vec<usize>) -> Result<Self> {
        WeightedGraph::new(self.vertex_count, self.edges.clone(), nodes)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(u, _) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        // (neighbor, edge index)
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, &(u, v, _)) in self.edges.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        adj
    }

    /// Two-colors the graph; errors when an odd cycle exists.
    pub fn bipartition(&self) -> Result<Vec<u8>> {
        let adj = self.adjacency();
        let mut color = vec![u8::MAX; self.vertex_count];
        for start in 0..self.vertex_count {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &(u, _) in &adj[v] {
                    if color[u] == u8::MAX {
                        color[u] = 1 - color[v];
                        stack.push(u);
                    } else if color[u] == color[v] {
                        return Err(Error::InvalidGraph("graph is not bipartite".into()));
                    }
                }
            }
        }
        Ok(color)
    }

    /// Checks that the boundary nodes alternate in color around the circle.
    pub fn check_alternating_nodes(&self) -> Result<()> {
        let color = self.bipartition()?;
        if self.nodes.len() % 2 != 0 {
            return Err(Error::InvalidGraph("need an even number of nodes".into()));
        }
        for w in self.nodes.windows(2) {
            if color[w[0]] == color[w[1]] {
                return Err(Error::InvalidGraph(
                    "boundary nodes must alternate in color".into(),
                ));
            }
        }
        if self.nodes.len() >= 2 {
            let first = self.nodes[0];
            let last = *self.nodes.last().unwrap();
            if color[first] == color[last] {
                return Err(Error::InvalidGraph(
                    "boundary nodes must alternate in color".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        let vertex_count = value
            .get("vertices")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("missing \"vertices\"".into()))? as usize;
        let mut edges = Vec::new();
        for e in value
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("missing \"edges\"".into()))?
        {
            let arr = e
                .as_array()
                .ok_or_else(|| Error::Json("edge must be [u, v, w]".into()))?;
            if arr.len() != 3 {
                return Err(Error::Json("edge must be [u, v, w]".into()));
            }
            let u = arr[0]
                .as_u64()
                .ok_or_else(|| Error::Json("edge endpoint must be an integer".into()))?;
            let v = arr[1]
                .as_u64()
                .ok_or_else(|| Error::Json("edge endpoint must be an integer".into()))?;
            edges.push((u as usize, v as usize, parse_rational_value(&arr[2])?));
        }
        let nodes = value
            .get("nodes")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("missing \"nodes\"".into()))?
            .iter()
            .map(|v| {
                v.as_u64()
                    .map(|x| x as usize)
                    .ok_or_else(|| Error::Json("node must be an integer".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        WeightedGraph::new(vertex_count, edges, nodes)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertex_count,
            "edges": self
                .edges
                .iter()
                .map(|(u, v, w)| json!([u, v, rational_to_value(w)]))
                .collect::<Vec<_>>(),
            "nodes": self.nodes,
        })
    }
}

/// Parses a rational from a JSON number or a `"p/q"` string.
pub fn parse_rational_value(value: &Value) -> Result<BigRational> {
    match value {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from(BigInt::from(i)))
            } else {
                Err(Error::Json(format!("weight {n} is not an exact integer")))
            }
        }
        Value::String(s) => parse_rational(s),
        _ => Err(Error::Json("weight must be an integer or \"p/q\" string".into())),
    }
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|e| Error::Json(e.to_string()))?;
        let d = BigInt::from_str(den.trim()).map_err(|e| Error::Json(e.to_string()))?;
        if d.is_zero() {
            return Err(Error::Json("zero denominator".into()));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n = BigInt::from_str(t).map_err(|e| Error::Json(e.to_string()))?;
        Ok(BigRational::from(n))
    }
}

/// Renders exactly: integers plainly, otherwise `p/q`.
pub fn rational_to_value(r: &BigRational) -> Value {
    Value::String(rational_to_string(r))
}

pub fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

// ---- ready-made test graphs ----

/// The m x k grid graph with unit weights; vertex (r, c) has id r*k + c.
/// Returns the graph with an empty node list.
pub fn grid(rows: usize, cols: usize) -> WeightedGraph {
    let mut edges = Vec::new();
    let one = BigRational::from(BigInt::from(1));
    for r in 0..rows {
        for c in 0..cols {
            let id = r * cols + c;
            if c + 1 < cols {
                edges.push((id, id + 1, one.clone()));
            }
            if r + 1 < rows {
                edges.push((id, id + cols, one.clone()));
            }
        }
    }
    WeightedGraph::new(rows * cols, edges, Vec::new()).expect("grid is a valid graph")
}
