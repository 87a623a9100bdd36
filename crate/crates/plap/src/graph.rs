//! Discrete-manifold calculus on finite weighted graphs.
//!
//! A [`WeightedGraph`] carries a node measure `mu > 0`, oriented edges with
//! weights `w > 0`, and an optional boundary marking. Node data lives in
//! [`NodeField`]s (scalar or vector valued), edge data in [`EdgeField`]s.
//! Reversing an edge negates the edge value (orientation covariance).
//!
//! Conventions, fixed so that the usual integration-by-parts identities
//! hold exactly:
//!
//! * gradient      `du(e) = u(head) - u(tail)`
//! * divergence    `div X(a) = (1/mu_a) (sum_{tail(e)=a} w_e X(e) - sum_{head(e)=a} w_e X(e))`
//! * p-Laplacian   `lap_p u = div(|du|^{p-2} du)`
//! * p-energy      `E_p(u) = (1/p) sum_e w_e |du(e)|^p`
//!
//! With these signs, `sum_a mu_a <phi(a), div X(a)> + sum_e w_e <dphi(e), X(e)> = 0`
//! on any graph (the discrete divergence theorem), and the first variation
//! of `E_p` is `-mu * lap_p u`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ineq::{flux_scale, PExponent};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub weight: f64,
}

/// Finite weighted graph: the discrete stand-in for a manifold.
///
/// Invariants enforced at construction: connected, no self-loops, strictly
/// positive weights and measures, and each undirected adjacency represented
/// by exactly one oriented edge.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    ids: Vec<u64>,
    measures: Vec<f64>,
    boundary: Vec<bool>,
    edges: Vec<Edge>,
    /// per node: (edge index, node is tail)
    incident: Vec<Vec<(usize, bool)>>,
}

impl WeightedGraph {
    pub fn new(
        ids: Vec<u64>,
        measures: Vec<f64>,
        boundary: Vec<bool>,
        edges: Vec<Edge>,
    ) -> Result<Self> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::InvalidGraph("no nodes".into()));
        }
        if measures.len() != n || boundary.len() != n {
            return Err(Error::InvalidGraph("node attribute length mismatch".into()));
        }
        {
            let mut seen = BTreeMap::new();
            for (i, &id) in ids.iter().enumerate() {
                if seen.insert(id, i).is_some() {
                    return Err(Error::InvalidGraph(format!("duplicate node id {id}")));
                }
            }
        }
        if let Some(m) = measures.iter().find(|m| !(**m > 0.0) || !m.is_finite()) {
            return Err(Error::InvalidGraph(format!("non-positive measure {m}")));
        }
        let mut seen_pairs = BTreeMap::new();
        for (k, e) in edges.iter().enumerate() {
            if e.tail >= n || e.head >= n {
                return Err(Error::InvalidGraph(format!("edge {k} endpoint out of range")));
            }
            if e.tail == e.head {
                return Err(Error::InvalidGraph(format!("self-loop at node {}", e.tail)));
            }
            if !(e.weight > 0.0) || !e.weight.is_finite() {
                return Err(Error::InvalidGraph(format!("non-positive weight {}", e.weight)));
            }
            let key = (e.tail.min(e.head), e.tail.max(e.head));
            if seen_pairs.insert(key, k).is_some() {
                return Err(Error::InvalidGraph(format!(
                    "duplicate adjacency between {} and {}",
                    key.0, key.1
                )));
            }
        }
        let mut incident = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            incident[e.tail].push((k, true));
            incident[e.head].push((k, false));
        }
        let g = WeightedGraph {
            ids,
            measures,
            boundary,
            edges,
            incident,
        };
        if !g.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    /// Unit-measure, unit-weight graph over `0..n` ids.
    pub fn unit(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(
            (0..n as u64).collect(),
            vec![1.0; n],
            vec![false; n],
            edges
                .into_iter()
                .map(|(t, h)| Edge {
                    tail: t,
                    head: h,
                    weight: 1.0,
                })
                .collect(),
        )
    }

    /// Path 0 - 1 - ... - (n-1) with unit data.
    pub fn path(n: usize) -> Result<Self> {
        Self::unit(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect())
    }

    /// Cycle on n nodes with unit data.
    pub fn cycle(n: usize) -> Result<Self> {
        let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 1, 0));
        Self::unit(n, edges)
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn measure(&self, a: usize) -> f64 {
        self.measures[a]
    }

    pub fn is_boundary(&self, a: usize) -> bool {
        self.boundary[a]
    }

    pub fn boundary_nodes(&self) -> Vec<usize> {
        (0..self.node_count()).filter(|&a| self.boundary[a]).collect()
    }

    pub fn id(&self, a: usize) -> u64 {
        self.ids[a]
    }

    pub fn index_of_id(&self, id: u64) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }

    pub fn incident_edges(&self, a: usize) -> &[(usize, bool)] {
        &self.incident[a]
    }

    /// Same graph with one edge's orientation reversed. Used to check
    /// orientation covariance of edge operations.
    pub fn with_edge_reversed(&self, k: usize) -> Result<Self> {
        let mut edges = self.edges.clone();
        let e = edges
            .get_mut(k)
            .ok_or_else(|| Error::InvalidGraph(format!("no edge {k}")))?;
        std::mem::swap(&mut e.tail, &mut e.head);
        Self::new(
            self.ids.clone(),
            self.measures.clone(),
            self.boundary.clone(),
            edges,
        )
    }

    fn is_connected(&self) -> bool {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(a) = stack.pop() {
            for &(k, _) in &self.incident[a] {
                let e = &self.edges[k];
                let b = if e.tail == a { e.head } else { e.tail };
                if !seen[b] {
                    seen[b] = true;
                    count += 1;
                    stack.push(b);
                }
            }
        }
        count == n
    }

    /// Hop distance from `from` to every node (unit edge lengths).
    pub fn hop_distances(&self, from: usize) -> Vec<f64> {
        let n = self.node_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut queue = std::collections::VecDeque::new();
        dist[from] = 0.0;
        queue.push_back(from);
        while let Some(a) = queue.pop_front() {
            for &(k, _) in &self.incident[a] {
                let e = &self.edges[k];
                let b = if e.tail == a { e.head } else { e.tail };
                if dist[b].is_infinite() {
                    dist[b] = dist[a] + 1.0;
                    queue.push_back(b);
                }
            }
        }
        dist
    }
}

/// Node-indexed field with values in R^dim (`dim = 1` for scalar theory).
#[derive(Debug, Clone, PartialEq)]
pub struct NodeField {
    dim: usize,
    values: Vec<f64>,
}

impl NodeField {
    pub fn zeros(nodes: usize, dim: usize) -> Self {
        NodeField {
            dim,
            values: vec![0.0; nodes * dim],
        }
    }

    pub fn scalar(values: Vec<f64>) -> Self {
        NodeField { dim: 1, values }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.first().map(|r| r.len()).unwrap_or(0);
        if dim == 0 {
            return Err(Error::InvalidField("empty field".into()));
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidField("ragged field rows".into()));
        }
        Ok(NodeField {
            dim,
            values: rows.into_iter().flatten().collect(),
        })
    }

    pub fn constant(nodes: usize, value: &[f64]) -> Self {
        let mut values = Vec::with_capacity(nodes * value.len());
        for _ in 0..nodes {
            values.extend_from_slice(value);
        }
        NodeField {
            dim: value.len(),
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node_count(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn value(&self, a: usize) -> &[f64] {
        &self.values[a * self.dim..(a + 1) * self.dim]
    }

    pub fn value_mut(&mut self, a: usize) -> &mut [f64] {
        &mut self.values[a * self.dim..(a + 1) * self.dim]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Componentwise difference `self - other`.
    pub fn sub(&self, other: &NodeField) -> Result<NodeField> {
        if self.dim != other.dim || self.values.len() != other.values.len() {
            return Err(Error::DimensionMismatch {
                left: self.values.len(),
                right: other.values.len(),
            });
        }
        Ok(NodeField {
            dim: self.dim,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn add_constant(&mut self, value: &[f64]) {
        for a in 0..self.node_count() {
            for (v, c) in self.value_mut(a).iter_mut().zip(value) {
                *v += c;
            }
        }
    }

    fn check_on(&self, g: &WeightedGraph) -> Result<()> {
        if self.node_count() != g.node_count() {
            return Err(Error::InvalidField(format!(
                "field has {} nodes, graph has {}",
                self.node_count(),
                g.node_count()
            )));
        }
        Ok(())
    }
}

/// Oriented-edge-indexed field with values in R^dim. Reversing an edge
/// negates the stored value.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeField {
    dim: usize,
    values: Vec<f64>,
}

impl EdgeField {
    pub fn zeros(edges: usize, dim: usize) -> Self {
        EdgeField {
            dim,
            values: vec![0.0; edges * dim],
        }
    }

    pub fn scalar(values: Vec<f64>) -> Self {
        EdgeField { dim: 1, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn edge_count(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn value(&self, e: usize) -> &[f64] {
        &self.values[e * self.dim..(e + 1) * self.dim]
    }

    pub fn value_mut(&mut self, e: usize) -> &mut [f64] {
        &mut self.values[e * self.dim..(e + 1) * self.dim]
    }

    fn check_on(&self, g: &WeightedGraph) -> Result<()> {
        if self.edge_count() != g.edge_count() {
            return Err(Error::InvalidField(format!(
                "field has {} edges, graph has {}",
                self.edge_count(),
                g.edge_count()
            )));
        }
        Ok(())
    }
}

/// Edge gradient `du(e) = u(head) - u(tail)`.
pub fn edge_gradient(g: &WeightedGraph, u: &NodeField) -> Result<EdgeField> {
    u.check_on(g)?;
    let dim = u.dim();
    let mut out = EdgeField::zeros(g.edge_count(), dim);
    for (k, e) in g.edges().iter().enumerate() {
        let t = u.value(e.tail);
        let h = u.value(e.head);
        for (o, (hv, tv)) in out.value_mut(k).iter_mut().zip(h.iter().zip(t)) {
            *o = hv - tv;
        }
    }
    Ok(out)
}

/// Divergence, the negative adjoint of the gradient:
/// `div X(a) = (1/mu_a) (sum_{tail} w X - sum_{head} w X)`.
pub fn divergence(g: &WeightedGraph, x: &EdgeField) -> Result<NodeField> {
    x.check_on(g)?;
    let dim = x.dim();
    let mut out = NodeField::zeros(g.node_count(), dim);
    for (k, e) in g.edges().iter().enumerate() {
        let xv = x.value(k).to_vec();
        for (o, v) in out.value_mut(e.tail).iter_mut().zip(&xv) {
            *o += e.weight * v;
        }
        for (o, v) in out.value_mut(e.head).iter_mut().zip(&xv) {
            *o -= e.weight * v;
        }
    }
    for a in 0..g.node_count() {
        let mu = g.measure(a);
        for o in out.value_mut(a) {
            *o /= mu;
        }
    }
    Ok(out)
}

/// Edgewise p-flux `|du(e)|^{p-2} du(e)`, the field whose divergence is the
/// p-Laplacian.
pub fn p_flux(g: &WeightedGraph, u: &NodeField, p: PExponent) -> Result<EdgeField> {
    let grad = edge_gradient(g, u)?;
    Ok(p_flux_of_gradient(&grad, p))
}

pub fn p_flux_of_gradient(grad: &EdgeField, p: PExponent) -> EdgeField {
    let pv = p.get();
    let mut out = grad.clone();
    for k in 0..out.edge_count() {
        let nrm = crate::ineq::norm(grad.value(k));
        let s = flux_scale(nrm, pv);
        for v in out.value_mut(k) {
            *v *= s;
        }
    }
    out
}

/// p-Laplacian `div(|du|^{p-2} du)`. For vector-valued fields, `|du(e)|`
/// is the Euclidean norm of the edge difference.
pub fn p_laplacian(g: &WeightedGraph, u: &NodeField, p: PExponent) -> Result<NodeField> {
    let flux = p_flux(g, u, p)?;
    divergence(g, &flux)
}

/// p-energy `E_p(u) = (1/p) sum_e w_e |du(e)|^p`. The 1/p factor makes the
/// first variation exactly `-mu * lap_p u`.
pub fn p_energy(g: &WeightedGraph, u: &NodeField, p: PExponent) -> Result<f64> {
    Ok(p_sum(g, u, p)? / p.get())
}

/// Unnormalized p-sum `sum_e w_e |du(e)|^p` (the p-th power of the L^p norm
/// of the gradient).
pub fn p_sum(g: &WeightedGraph, u: &NodeField, p: PExponent) -> Result<f64> {
    let grad = edge_gradient(g, u)?;
    let pv = p.get();
    let mut acc = 0.0;
    for (k, e) in g.edges().iter().enumerate() {
        acc += e.weight * crate::ineq::norm(grad.value(k)).powf(pv);
    }
    Ok(acc)
}

/// Weighted L^q norm of an edge field: `(sum_e w_e |X(e)|^q)^{1/q}`.
pub fn lq_norm(g: &WeightedGraph, x: &EdgeField, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::InvalidField(format!("q must be >= 1, got {q}")));
    }
    x.check_on(g)?;
    let mut acc = 0.0;
    for (k, e) in g.edges().iter().enumerate() {
        acc += e.weight * crate::ineq::norm(x.value(k)).powf(q);
    }
    Ok(acc.powf(1.0 / q))
}

/// Residual of the discrete divergence theorem:
/// `| sum_a mu_a <phi(a), div X(a)> + sum_e w_e <dphi(e), X(e)> |`.
/// Exactly zero in exact arithmetic on any graph.
pub fn summation_by_parts_residual(
    g: &WeightedGraph,
    phi: &NodeField,
    x: &EdgeField,
) -> Result<f64> {
    phi.check_on(g)?;
    x.check_on(g)?;
    if phi.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            left: phi.dim(),
            right: x.dim(),
        });
    }
    let div = divergence(g, x)?;
    let grad = edge_gradient(g, phi)?;
    let mut node_side = 0.0;
    for a in 0..g.node_count() {
        node_side += g.measure(a) * crate::ineq::dot(phi.value(a), div.value(a));
    }
    let mut edge_side = 0.0;
    for (k, e) in g.edges().iter().enumerate() {
        edge_side += e.weight * crate::ineq::dot(grad.value(k), x.value(k));
    }
    Ok((node_side + edge_side).abs())
}

// ---------------------------------------------------------------------------
// file formats

/// Graph file: nodes with optional measure/boundary, edges with optional
/// weight. Defaults are `measure = 1`, `boundary = false`, `weight = 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub nodes: Vec<GraphFileNode>,
    pub edges: Vec<GraphFileEdge>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFileNode {
    pub id: u64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub measure: f64,
    #[serde(default, skip_serializing_if = "is_false")]
    pub boundary: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFileEdge {
    pub tail: u64,
    pub head: u64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub weight: f64,
}

fn one() -> f64 {
    1.0
}
fn is_one(v: &f64) -> bool {
    *v == 1.0
}
fn is_false(v: &bool) -> bool {
    !*v
}

impl WeightedGraph {
    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let ids: Vec<u64> = file.nodes.iter().map(|n| n.id).collect();
        let mut index = BTreeMap::new();
        for (i, &id) in ids.iter().enumerate() {
            if index.insert(id, i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate node id {id}")));
            }
        }
        let lookup = |id: u64| -> Result<usize> {
            index
                .get(&id)
                .copied()
                .ok_or_else(|| Error::InvalidGraph(format!("edge references unknown node {id}")))
        };
        let edges = file
            .edges
            .iter()
            .map(|e| {
                Ok(Edge {
                    tail: lookup(e.tail)?,
                    head: lookup(e.head)?,
                    weight: e.weight,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            ids,
            file.nodes.iter().map(|n| n.measure).collect(),
            file.nodes.iter().map(|n| n.boundary).collect(),
            edges,
        )
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            nodes: (0..self.node_count())
                .map(|a| GraphFileNode {
                    id: self.ids[a],
                    measure: self.measures[a],
                    boundary: self.boundary[a],
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| GraphFileEdge {
                    tail: self.ids[e.tail],
                    head: self.ids[e.head],
                    weight: e.weight,
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Field file: node id -> value(s). Scalar values may be written either as
/// a bare number or a one-element array.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldFile {
    pub dim: usize,
    pub values: Vec<FieldFileEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldFileEntry {
    pub id: u64,
    pub value: FieldValue,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldValue {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl FieldValue {
    pub fn as_vec(&self) -> Vec<f64> {
        match self {
            FieldValue::Scalar(v) => vec![*v],
            FieldValue::Vector(v) => v.clone(),
        }
    }
}

impl NodeField {
    /// Reads a field file against a graph, matching entries by node id.
    /// Every node must receive exactly one value of the declared dimension.
    pub fn from_file(file: &FieldFile, g: &WeightedGraph) -> Result<Self> {
        if file.dim == 0 {
            return Err(Error::InvalidField("field dim must be >= 1".into()));
        }
        let mut out = NodeField::zeros(g.node_count(), file.dim);
        let mut seen = vec![false; g.node_count()];
        for entry in &file.values {
            let a = g
                .index_of_id(entry.id)
                .ok_or_else(|| Error::InvalidField(format!("unknown node id {}", entry.id)))?;
            let v = entry.value.as_vec();
            if v.len() != file.dim {
                return Err(Error::InvalidField(format!(
                    "value for node {} has dim {}, expected {}",
                    entry.id,
                    v.len(),
                    file.dim
                )));
            }
            if seen[a] {
                return Err(Error::InvalidField(format!("duplicate value for node {}", entry.id)));
            }
            seen[a] = true;
            out.value_mut(a).copy_from_slice(&v);
        }
        if let Some(a) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidField(format!("missing value for node {}", g.id(a))));
        }
        Ok(out)
    }

    pub fn to_file(&self, g: &WeightedGraph) -> FieldFile {
        FieldFile {
            dim: self.dim,
            values: (0..self.node_count())
                .map(|a| FieldFileEntry {
                    id: g.id(a),
                    value: if self.dim == 1 {
                        FieldValue::Scalar(self.value(a)[0])
                    } else {
                        FieldValue::Vector(self.value(a).to_vec())
                    },
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str, g: &WeightedGraph) -> Result<Self> {
        let file: FieldFile = serde_json::from_str(text)?;
        Self::from_file(&file, g)
    }

    /// CSV form: header `id,v0,...`, one row per node.
    pub fn from_csv(text: &str, g: &WeightedGraph) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidField("empty csv".into()))?;
        let dim = header.split(',').count().saturating_sub(1);
        if dim == 0 {
            return Err(Error::InvalidField("csv needs id plus value columns".into()));
        }
        let mut entries = Vec::new();
        for line in lines {
            let mut parts = line.split(',');
            let id: u64 = parts
                .next()
                .unwrap()
                .trim()
                .parse()
                .map_err(|_| Error::InvalidField(format!("bad id in csv row: {line}")))?;
            let vals: Vec<f64> = parts
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidField(format!("bad value in csv row: {line}")))
                })
                .collect::<Result<_>>()?;
            entries.push(FieldFileEntry {
                id,
                value: FieldValue::Vector(vals),
            });
        }
        Self::from_file(
            &FieldFile {
                dim,
                values: entries,
            },
            g,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64) -> PExponent {
        PExponent::new(v).unwrap()
    }

    #[test]
    fn rejects_invalid_graphs() {
        // self-loop
        assert!(WeightedGraph::unit(2, vec![(0, 0)]).is_err());
        // duplicate adjacency (either orientation)
        assert!(WeightedGraph::unit(2, vec![(0, 1), (1, 0)]).is_err());
        // disconnected
        assert!(WeightedGraph::unit(4, vec![(0, 1), (2, 3)]).is_err());
        // bad weight
        assert!(WeightedGraph::new(
            vec![0, 1],
            vec![1.0, 1.0],
            vec![false, false],
            vec![Edge { tail: 0, head: 1, weight: 0.0 }],
        )
        .is_err());
    }

    #[test]
    fn gradient_on_path() {
        let g = WeightedGraph::path(3).unwrap();
        let u = NodeField::scalar(vec![0.0, 1.0, 3.0]);
        let du = edge_gradient(&g, &u).unwrap();
        assert_eq!(du.value(0), &[1.0]);
        assert_eq!(du.value(1), &[2.0]);

        let c = NodeField::constant(3, &[5.0]);
        let dc = edge_gradient(&g, &c).unwrap();
        assert!(dc.value(0)[0] == 0.0 && dc.value(1)[0] == 0.0);

        let g2 = WeightedGraph::path(2).unwrap();
        let m = NodeField::from_rows(vec![vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let dm = edge_gradient(&g2, &m).unwrap();
        assert_eq!(dm.value(0), &[1.0, 1.0]);
    }

    #[test]
    fn p_laplacian_on_path() {
        let g = WeightedGraph::path(3).unwrap();
        let u = NodeField::scalar(vec![0.0, 1.0, 3.0]);
        let lap3 = p_laplacian(&g, &u, p(3.0)).unwrap();
        assert!((lap3.value(1)[0] - 3.0).abs() <= 1e-15);
        let lap2 = p_laplacian(&g, &u, p(2.0)).unwrap();
        assert!((lap2.value(1)[0] - 1.0).abs() <= 1e-15);

        // affine data on a path is p-harmonic at interior nodes
        let aff = NodeField::scalar(vec![0.0, 0.5, 1.0]);
        for pv in [2.0, 3.0, 4.5] {
            let lap = p_laplacian(&g, &aff, p(pv)).unwrap();
            assert!(lap.value(1)[0].abs() <= 1e-15, "p={pv}");
        }
    }

    #[test]
    fn divergence_on_path() {
        let g = WeightedGraph::path(3).unwrap();
        let x = EdgeField::scalar(vec![1.0, 1.0]);
        let div = divergence(&g, &x).unwrap();
        assert_eq!(
            (div.value(0)[0], div.value(1)[0], div.value(2)[0]),
            (1.0, 0.0, -1.0)
        );
        // total mass vanishes
        let total: f64 = (0..3).map(|a| g.measure(a) * div.value(a)[0]).sum();
        assert!(total.abs() <= 1e-15);

        // divergence of the 2-flux is the 2-Laplacian
        let u = NodeField::scalar(vec![0.3, -1.0, 2.0]);
        let lap = p_laplacian(&g, &u, p(2.0)).unwrap();
        let div2 = divergence(&g, &edge_gradient(&g, &u).unwrap()).unwrap();
        for a in 0..3 {
            assert!((lap.value(a)[0] - div2.value(a)[0]).abs() <= 1e-15);
        }
    }

    #[test]
    fn energy_examples() {
        let g = WeightedGraph::path(3).unwrap();
        let u = NodeField::scalar(vec![0.0, 1.0, 3.0]);
        let e = p_energy(&g, &u, p(3.0)).unwrap();
        assert!((e - 3.0).abs() <= 1e-15);
        assert_eq!(
            p_energy(&g, &NodeField::constant(3, &[4.0]), p(3.0)).unwrap(),
            0.0
        );
        // homogeneity at t = 2
        let u2 = NodeField::scalar(vec![0.0, 2.0, 6.0]);
        let e2 = p_energy(&g, &u2, p(3.0)).unwrap();
        assert!((e2 - 8.0 * e).abs() <= 1e-12);
    }

    #[test]
    fn lq_norm_examples() {
        let g = WeightedGraph::path(3).unwrap();
        assert_eq!(lq_norm(&g, &EdgeField::scalar(vec![0.0, 0.0]), 1.5).unwrap(), 0.0);
        let g1 = WeightedGraph::path(2).unwrap();
        assert_eq!(lq_norm(&g1, &EdgeField::scalar(vec![1.0]), 1.5).unwrap(), 1.0);
        let n = lq_norm(&g, &EdgeField::scalar(vec![1.0, 2.0]), 2.0).unwrap();
        assert!((n - 5f64.sqrt()).abs() <= 1e-15);
        assert!(lq_norm(&g, &EdgeField::scalar(vec![1.0, 2.0]), 0.5).is_err());
    }

    #[test]
    fn summation_by_parts_is_exact() {
        let g = WeightedGraph::cycle(10).unwrap();
        let phi = NodeField::scalar((0..10).map(|i| ((i * 7 + 3) % 11) as f64 / 3.0).collect());
        let x = EdgeField::scalar((0..10).map(|i| ((i * 5 + 1) % 13) as f64 - 6.0).collect());
        let r = summation_by_parts_residual(&g, &phi, &x).unwrap();
        let scale: f64 = 1.0 + x.values.iter().map(|v| v.abs()).sum::<f64>();
        assert!(r <= 1e-10 * scale, "residual {r}");

        // constant phi against any field on a cycle
        let c = NodeField::constant(10, &[3.0]);
        assert!(summation_by_parts_residual(&g, &c, &x).unwrap() <= 1e-12);

        // zero field
        let z = EdgeField::zeros(10, 1);
        assert_eq!(summation_by_parts_residual(&g, &phi, &z).unwrap(), 0.0);
    }

    #[test]
    fn orientation_covariance() {
        let g = WeightedGraph::path(4).unwrap();
        let u = NodeField::scalar(vec![0.0, 2.0, -1.0, 0.5]);
        let rev = g.with_edge_reversed(1).unwrap();
        let du = edge_gradient(&g, &u).unwrap();
        let du_r = edge_gradient(&rev, &u).unwrap();
        assert_eq!(du.value(1)[0], -du_r.value(1)[0]);
        // p-Laplacian is orientation invariant
        let lap = p_laplacian(&g, &u, p(3.0)).unwrap();
        let lap_r = p_laplacian(&rev, &u, p(3.0)).unwrap();
        for a in 0..4 {
            assert!((lap.value(a)[0] - lap_r.value(a)[0]).abs() <= 1e-15);
        }
    }

    #[test]
    fn graph_json_round_trip() {
        let g = WeightedGraph::new(
            vec![10, 20, 30],
            vec![1.0, 2.5, 0.125],
            vec![false, false, true],
            vec![
                Edge { tail: 0, head: 1, weight: 1.75 },
                Edge { tail: 1, head: 2, weight: 0.3333333333333333 },
            ],
        )
        .unwrap();
        let text = serde_json::to_string(&g.to_file()).unwrap();
        let g2 = WeightedGraph::from_json(&text).unwrap();
        assert_eq!(g2.id(1), 20);
        assert_eq!(g2.measure(2), 0.125);
        assert_eq!(g2.edges()[1].weight, 0.3333333333333333);
        assert!(g2.is_boundary(2));
    }

    #[test]
    fn field_files_round_trip() {
        let g = WeightedGraph::path(3).unwrap();
        let u = NodeField::from_rows(vec![
            vec![0.1, -2.0],
            vec![1.0 / 3.0, 5.5],
            vec![17.0, 0.0],
        ])
        .unwrap();
        let text = serde_json::to_string(&u.to_file(&g)).unwrap();
        let u2 = NodeField::from_json(&text, &g).unwrap();
        assert_eq!(u, u2);

        let csv = "id,v0,v1\n0,0.1,-2\n1,0.3333333333333333,5.5\n2,17,0\n";
        let u3 = NodeField::from_csv(csv, &g).unwrap();
        assert_eq!(u3.value(1)[0], 1.0 / 3.0);
        // missing node rejected
        let bad = "id,v0\n0,1\n1,2\n";
        assert!(NodeField::from_csv(bad, &g).is_err());
    }
}
