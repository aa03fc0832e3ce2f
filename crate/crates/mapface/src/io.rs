//! JSON map format: `{"n": N, "edges": [[u, v], ...], "rotation": [[d, ...], ...]}`.
//! Vertices are 1-based; edge `i` (0-based position in `edges`) owns darts
//! `2i` at `u` and `2i + 1` at `v`; `rotation[v − 1]` lists the darts at `v`
//! in cyclic order. The matching is implicit.

use crate::combmap::CombMap;
use crate::error::{Error, Result};
use crate::graph::Graph;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub rotation: Vec<Vec<usize>>,
}

impl MapJson {
    pub fn from_map(map: &CombMap) -> Self {
        let g = map.graph();
        MapJson {
            n: g.n(),
            edges: g.edges().iter().map(|&(u, v)| [u + 1, v + 1]).collect(),
            rotation: (0..g.n()).map(|v| map.rotation().cycle_at(v)).collect(),
        }
    }

    pub fn to_map(&self) -> Result<CombMap> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for &[u, v] in &self.edges {
            if u == 0 || v == 0 {
                return Err(Error::Parse("vertices are 1-based".into()));
            }
            edges.push((u - 1, v - 1));
        }
        let graph = Graph::new(self.n, edges)?;
        CombMap::from_cycles(graph, &self.rotation)
    }
}

pub fn map_to_json(map: &CombMap) -> String {
    serde_json::to_string(&MapJson::from_map(map)).expect("map serializes")
}

pub fn map_from_json(text: &str) -> Result<CombMap> {
    let m: MapJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    m.to_map()
}
