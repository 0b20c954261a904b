//! Compression graphs: the path graph traced by a walk, with vertices
//! `x_1, V_m[x_1], x_2, V_m[x_2], ...` and one edge per step.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tuple::{Scale, Tuple};
use crate::walk::{StepKind, Walk};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub kind: StepKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar", deny_unknown_fields)]
pub struct CompressionGraph<S> {
    pub m: Scale,
    pub vertices: Vec<Tuple<S>>,
    pub edges: Vec<Edge>,
}

impl<S: Scalar> CompressionGraph<S> {
    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.order()];
        for e in &self.edges {
            deg[e.from] += 1;
            deg[e.to] += 1;
        }
        deg
    }

    /// Connected, `|E| = |V| - 1`, every degree at most 2 and exactly two
    /// vertices of degree 1 (edges are checked to chain end to end, which
    /// gives connectivity).
    pub fn is_path(&self) -> bool {
        let n = self.order();
        if n < 2 || self.edges.len() + 1 != n {
            return false;
        }
        if self.edges.iter().any(|e| e.from >= n || e.to >= n || e.from == e.to) {
            return false;
        }
        let chained = self.edges.windows(2).all(|p| p[0].to == p[1].from);
        let deg = self.degrees();
        chained && deg.iter().all(|&d| (1..=2).contains(&d)) && deg.iter().filter(|&&d| d == 1).count() == 2
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let g: CompressionGraph<S> = serde_json::from_str(text)?;
        Ok(g)
    }
}

pub fn build_graph<S: Scalar>(w: &Walk<S>, tol: f64) -> Result<CompressionGraph<S>> {
    w.validate(tol)?;
    let g = CompressionGraph {
        m: w.m,
        vertices: w.vertices.clone(),
        edges: w
            .step_kinds
            .iter()
            .enumerate()
            .map(|(i, &kind)| Edge { from: i, to: i + 1, kind })
            .collect(),
    };
    if !g.is_path() {
        return Err(Error::Construction("walk does not trace a path graph".into()));
    }
    Ok(g)
}
