//! Combinatorial maps `(D, R, L)`: darts, a rotation `R` that is one cycle per
//! vertex, and a fixed-point-free involution `L` pairing darts into edges.
//! Faces are the orbits of `d ↦ R(L(d))`.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Per-dart successor plus one anchor dart per vertex (None for isolated vertices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    succ: Vec<usize>,
    anchor: Vec<Option<usize>>,
}

impl RotationSystem {
    /// Build from one cyclic dart sequence per vertex.
    pub fn from_cycles(num_darts: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut succ = vec![usize::MAX; num_darts];
        let mut anchor = vec![None; cycles.len()];
        for (v, cyc) in cycles.iter().enumerate() {
            for (i, &d) in cyc.iter().enumerate() {
                if d >= num_darts {
                    return Err(Error::Validation(format!(
                        "rotation at vertex {} names dart {d} outside [0..{num_darts})",
                        v + 1
                    )));
                }
                if succ[d] != usize::MAX {
                    return Err(Error::Validation(format!(
                        "rotation lists dart {d} twice"
                    )));
                }
                succ[d] = cyc[(i + 1) % cyc.len()];
            }
            anchor[v] = cyc.first().copied();
        }
        if let Some(d) = succ.iter().position(|&s| s == usize::MAX) {
            return Err(Error::Validation(format!("rotation misses dart {d}")));
        }
        Ok(RotationSystem { succ, anchor })
    }

    /// Build from a raw successor array; anchors are the least dart per vertex.
    pub fn from_successors(succ: Vec<usize>, dart_vertex: &[usize], n: usize) -> Self {
        let mut anchor = vec![None; n];
        for (d, &v) in dart_vertex.iter().enumerate() {
            if anchor[v].is_none() {
                anchor[v] = Some(d);
            }
        }
        RotationSystem { succ, anchor }
    }

    pub fn succ(&self, d: usize) -> usize {
        self.succ[d]
    }

    pub fn successors(&self) -> &[usize] {
        &self.succ
    }

    pub fn anchor(&self, v: usize) -> Option<usize> {
        self.anchor[v]
    }

    /// Cyclic dart order at `v`, starting from its anchor.
    pub fn cycle_at(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        if let Some(a) = self.anchor[v] {
            let mut d = a;
            loop {
                out.push(d);
                d = self.succ[d];
                if d == a || out.len() > self.succ.len() {
                    break;
                }
            }
        }
        out
    }

    /// Checks: successor stays at the dart's vertex, is a permutation, and is
    /// one cycle per vertex.
    pub fn validate(&self, dart_vertex: &[usize], n: usize) -> Result<()> {
        let nd = dart_vertex.len();
        if self.succ.len() != nd {
            return Err(Error::Validation(format!(
                "rotation has {} entries for {nd} darts",
                self.succ.len()
            )));
        }
        let mut has_pred = vec![false; nd];
        for d in 0..nd {
            let s = self.succ[d];
            if s >= nd {
                return Err(Error::Validation(format!("rotation maps dart {d} outside the dart set")));
            }
            if dart_vertex[s] != dart_vertex[d] {
                return Err(Error::Validation(format!(
                    "rotation maps dart {d} across vertices"
                )));
            }
            if has_pred[s] {
                return Err(Error::Validation(format!(
                    "rotation is not a permutation at dart {s}"
                )));
            }
            has_pred[s] = true;
        }
        let mut deg = vec![0usize; n];
        for &v in dart_vertex {
            deg[v] += 1;
        }
        for v in 0..n {
            match self.anchor.get(v).copied().flatten() {
                None if deg[v] > 0 => {
                    return Err(Error::Validation(format!(
                        "unicyclicity violation at {}",
                        v + 1
                    )))
                }
                None => {}
                Some(a) => {
                    if dart_vertex[a] != v || self.cycle_at(v).len() != deg[v] {
                        return Err(Error::Validation(format!(
                            "unicyclicity violation at {}",
                            v + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Fixed-point-free involution on darts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMatching {
    partner: Vec<usize>,
}

impl EdgeMatching {
    pub fn new(partner: Vec<usize>) -> Self {
        EdgeMatching { partner }
    }

    /// The matching `2e ↔ 2e+1` of the standard dart layout.
    pub fn standard(num_darts: usize) -> Self {
        EdgeMatching {
            partner: (0..num_darts).map(|d| d ^ 1).collect(),
        }
    }

    pub fn partner(&self, d: usize) -> usize {
        self.partner[d]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let nd = self.partner.len();
        for d in 0..nd {
            let p = self.partner[d];
            if p == d {
                return Err(Error::Validation(format!("fixed-point violation at {d}")));
            }
            if p >= nd || self.partner[p] != d {
                return Err(Error::Validation(format!("involution violation at {d}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombMap {
    graph: Graph,
    rotation: RotationSystem,
    matching: EdgeMatching,
}

impl CombMap {
    /// Map on `graph` in the standard layout (edge `e` owns darts `2e`, `2e+1`).
    pub fn new(graph: Graph, rotation: RotationSystem) -> Result<Self> {
        let matching = EdgeMatching::standard(graph.num_darts());
        let map = CombMap {
            graph,
            rotation,
            matching,
        };
        map.validate()?;
        Ok(map)
    }

    /// Map given by per-vertex cyclic dart sequences (standard layout).
    pub fn from_cycles(graph: Graph, cycles: &[Vec<usize>]) -> Result<Self> {
        let rotation = RotationSystem::from_cycles(graph.num_darts(), cycles)?;
        if cycles.len() != graph.n() {
            return Err(Error::Validation(format!(
                "rotation has {} vertex cycles for {} vertices",
                cycles.len(),
                graph.n()
            )));
        }
        CombMap::new(graph, rotation)
    }

    /// Map from an arbitrary dart layout: `dart_vertex[d]` owns dart `d`,
    /// `succ` is the rotation, `partner` the involution. Darts are relabelled
    /// into the standard layout, edges ordered by their least old dart id.
    pub fn from_parts(
        n: usize,
        dart_vertex: &[usize],
        succ: &[usize],
        partner: &EdgeMatching,
    ) -> Result<Self> {
        partner.validate()?;
        let old_rot = RotationSystem::from_successors(succ.to_vec(), dart_vertex, n);
        old_rot.validate(dart_vertex, n)?;
        let nd = dart_vertex.len();
        let mut new_id = vec![usize::MAX; nd];
        let mut edges = Vec::with_capacity(nd / 2);
        for d in 0..nd {
            let p = partner.partner(d);
            if d < p {
                let e = edges.len();
                edges.push((dart_vertex[d], dart_vertex[p]));
                new_id[d] = 2 * e;
                new_id[p] = 2 * e + 1;
            }
        }
        let graph = Graph::new(n, edges)?;
        let mut new_succ = vec![0; nd];
        for d in 0..nd {
            new_succ[new_id[d]] = new_id[succ[d]];
        }
        let rotation = RotationSystem::from_successors(new_succ, &dart_vertices(&graph), n);
        CombMap::new(graph, rotation)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self) -> &RotationSystem {
        &self.rotation
    }

    pub fn matching(&self) -> &EdgeMatching {
        &self.matching
    }

    pub fn num_darts(&self) -> usize {
        self.graph.num_darts()
    }

    pub fn validate(&self) -> Result<()> {
        let dv = dart_vertices(&self.graph);
        self.matching.validate()?;
        for d in 0..self.matching.len() {
            if self.matching.partner(d) != d ^ 1 {
                return Err(Error::Validation(format!(
                    "matching does not pair the darts of edge {} at dart {d}",
                    d / 2
                )));
            }
        }
        self.rotation.validate(&dv, self.graph.n())
    }

    /// Orbits of `d ↦ R(L(d))`, each starting at its least dart, in order of
    /// that dart.
    pub fn trace_faces(&self) -> Vec<Vec<usize>> {
        trace_orbits(self.rotation.successors(), self.matching.partners())
    }

    /// Face count with the convention `Σ_c F(c) − #components + 1`, where an
    /// isolated vertex is a sphere with one face.
    pub fn count_faces(&self) -> usize {
        let orbits = count_orbits(self.rotation.successors(), self.matching.partners());
        let (k, _) = self.graph.components();
        let isolated = self.graph.degrees().iter().filter(|&&d| d == 0).count();
        orbits + isolated + 1 - k
    }

    pub fn genus(&self) -> Result<usize> {
        genus_from_counts(
            self.graph.m(),
            self.graph.n(),
            self.count_faces(),
            self.graph.components().0,
        )
    }

    pub fn disjoint_union(&self, other: &CombMap) -> CombMap {
        let graph = self.graph.disjoint_union(&other.graph);
        let shift = self.num_darts();
        let mut succ = self.rotation.successors().to_vec();
        succ.extend(other.rotation.successors().iter().map(|&s| s + shift));
        let rotation = RotationSystem::from_successors(succ, &dart_vertices(&graph), graph.n());
        CombMap::new(graph, rotation).expect("union of valid maps is valid")
    }
}

/// `g = (|E| − |V| − F + k + 1) / 2`; errors unless a non-negative integer.
pub fn genus_from_counts(m: usize, n: usize, faces: usize, components: usize) -> Result<usize> {
    let num = m as i64 - n as i64 - faces as i64 + components as i64 + 1;
    if num < 0 || num % 2 != 0 {
        return Err(Error::Consistency(format!(
            "Euler characteristic gives genus {num}/2 (m={m}, n={n}, F={faces}, k={components})"
        )));
    }
    Ok((num / 2) as usize)
}

/// Vertex of every dart in the standard layout.
pub fn dart_vertices(g: &Graph) -> Vec<usize> {
    (0..g.num_darts()).map(|d| g.dart_vertex(d)).collect()
}

pub fn count_orbits(succ: &[usize], partner: &[usize]) -> usize {
    let mut seen = vec![false; succ.len()];
    let mut c = 0;
    for s in 0..succ.len() {
        if seen[s] {
            continue;
        }
        c += 1;
        let mut d = s;
        while !seen[d] {
            seen[d] = true;
            d = succ[partner[d]];
        }
    }
    c
}

pub fn trace_orbits(succ: &[usize], partner: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; succ.len()];
    let mut out = Vec::new();
    for s in 0..succ.len() {
        if seen[s] {
            continue;
        }
        let mut walk = Vec::new();
        let mut d = s;
        while !seen[d] {
            seen[d] = true;
            walk.push(d);
            d = succ[partner[d]];
        }
        out.push(walk);
    }
    out
}

/// A rotation system with a partial matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMap {
    n: usize,
    dart_vertex: Vec<usize>,
    rotation: RotationSystem,
    partner: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporaryFace {
    /// Orbit over paired darts, starting at its least dart.
    pub darts: Vec<usize>,
    /// Unpaired darts in the corners of this face, in traversal order.
    pub open: Vec<usize>,
    pub strongly_two_open: bool,
}

impl TemporaryFace {
    pub fn openness(&self) -> usize {
        self.open.len()
    }
}

impl PartialMap {
    pub fn new(
        n: usize,
        dart_vertex: Vec<usize>,
        rotation: RotationSystem,
        partner: Vec<Option<usize>>,
    ) -> Result<Self> {
        let pm = PartialMap {
            n,
            dart_vertex,
            rotation,
            partner,
        };
        pm.validate()?;
        Ok(pm)
    }

    /// Partial map on `graph` (standard layout) keeping only the listed edges.
    pub fn from_graph(graph: &Graph, rotation: RotationSystem, paired_edges: &[usize]) -> Result<Self> {
        let mut partner = vec![None; graph.num_darts()];
        for &e in paired_edges {
            partner[2 * e] = Some(2 * e + 1);
            partner[2 * e + 1] = Some(2 * e);
        }
        PartialMap::new(graph.n(), dart_vertices(graph), rotation, partner)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_darts(&self) -> usize {
        self.dart_vertex.len()
    }

    pub fn dart_vertex(&self, d: usize) -> usize {
        self.dart_vertex[d]
    }

    pub fn rotation(&self) -> &RotationSystem {
        &self.rotation
    }

    pub fn partner(&self, d: usize) -> Option<usize> {
        self.partner[d]
    }

    pub fn unpaired(&self) -> Vec<usize> {
        (0..self.num_darts()).filter(|&d| self.partner[d].is_none()).collect()
    }

    /// Graph of the paired edges.
    pub fn graph(&self) -> Graph {
        let edges = (0..self.num_darts())
            .filter_map(|d| match self.partner[d] {
                Some(p) if d < p => Some((self.dart_vertex[d], self.dart_vertex[p])),
                _ => None,
            })
            .collect();
        Graph::new(self.n, edges).expect("paired darts have valid vertices")
    }

    pub fn validate(&self) -> Result<()> {
        let nd = self.dart_vertex.len();
        if self.partner.len() != nd {
            return Err(Error::Validation("partner array length mismatch".into()));
        }
        if let Some(&v) = self.dart_vertex.iter().find(|&&v| v >= self.n) {
            return Err(Error::Validation(format!("dart at vertex {} outside [1..{}]", v + 1, self.n)));
        }
        for d in 0..nd {
            if let Some(p) = self.partner[d] {
                if p == d {
                    return Err(Error::Validation(format!("fixed-point violation at {d}")));
                }
                if p >= nd || self.partner[p] != Some(d) {
                    return Err(Error::Validation(format!("involution violation at {d}")));
                }
            }
        }
        self.rotation.validate(&self.dart_vertex, self.n)
    }

    /// Faces of the submap on paired darts. An unpaired dart lying in the
    /// corner between `x` and the next paired dart `y` belongs to the face
    /// through `y`. Vertices without paired darts carry no temporary face.
    pub fn temporary_faces(&self) -> Vec<TemporaryFace> {
        let nd = self.num_darts();
        let mut seen = vec![false; nd];
        let mut out = Vec::new();
        for s in 0..nd {
            if seen[s] || self.partner[s].is_none() {
                continue;
            }
            let mut darts = Vec::new();
            let mut open = Vec::new();
            let mut d = s;
            while !seen[d] {
                seen[d] = true;
                darts.push(d);
                let y = self.partner[d].expect("orbit stays on paired darts");
                let mut x = self.rotation.succ(y);
                while self.partner[x].is_none() {
                    open.push(x);
                    x = self.rotation.succ(x);
                }
                d = x;
            }
            let strongly = open.len() == 2 && self.dart_vertex[open[0]] != self.dart_vertex[open[1]];
            out.push(TemporaryFace {
                darts,
                open,
                strongly_two_open: strongly,
            });
        }
        out
    }

    /// Walk from an unpaired dart along its face to the next unpaired dart,
    /// treating darts in `ignore` as unpaired.
    fn next_open_ignoring(&self, u: usize, ignore: &[bool]) -> usize {
        let paired = |x: usize| self.partner[x].is_some() && !ignore[x];
        let mut x = self.rotation.succ(u);
        let mut steps = 0;
        while paired(x) {
            x = self.rotation.succ(self.partner[x].unwrap());
            steps += 1;
            debug_assert!(steps <= self.num_darts());
        }
        x
    }

    /// Classify the Process-B step-`k` state: vertex `v_j` is index `j − 1`,
    /// `V↑ = {v_{k+1}, …, v_n}` is paired internally, and each vertex of `V↑`
    /// has exactly one dart paired with `v_k` (its active dart).
    pub fn classify_step(&self, k: usize) -> Result<StepClassification> {
        let n = self.n;
        if n < 3 || k < 1 || k > n - 2 {
            return Err(Error::Validation(format!("step k={k} outside [1..{}]", n.saturating_sub(2))));
        }
        let vk = k - 1;
        let upper = |v: usize| v >= k;
        let nd = self.num_darts();
        let mut deg = vec![0usize; n];
        for &v in &self.dart_vertex {
            deg[v] += 1;
        }
        if deg.iter().any(|&d| d != n - 1) {
            return Err(Error::Validation("step state must live on K_n darts (every degree n−1)".into()));
        }
        let mut pair_count = vec![0usize; n * n];
        let mut active = vec![false; nd];
        let mut active_per_vertex = vec![0usize; n];
        for d in 0..nd {
            let Some(p) = self.partner[d] else { continue };
            let (u, v) = (self.dart_vertex[d], self.dart_vertex[p]);
            if u == v {
                return Err(Error::Validation(format!("not a step-{k} state: loop at dart {d}")));
            }
            if !(upper(u) || u == vk) || !(upper(v) || v == vk) {
                return Err(Error::Validation(format!(
                    "not a step-{k} state: dart {d} paired below v_{k}"
                )));
            }
            if upper(u) && v == vk {
                active[d] = true;
                active_per_vertex[u] += 1;
            }
            pair_count[u * n + v] += 1;
        }
        for u in k..n {
            if active_per_vertex[u] != 1 {
                return Err(Error::Validation(format!(
                    "not a step-{k} state: v_{} has {} darts paired with v_{k}",
                    u + 1,
                    active_per_vertex[u]
                )));
            }
            for v in k..n {
                if u != v && pair_count[u * n + v] != 1 {
                    return Err(Error::Validation(format!(
                        "not a step-{k} state: v_{} and v_{} are not joined by exactly one edge",
                        u + 1,
                        v + 1
                    )));
                }
            }
        }

        let mut o = 0;
        let mut pf = 0;
        let mut one_open = Vec::new();
        let mut potential = Vec::new();
        for d in 0..nd {
            if !active[d] {
                continue;
            }
            let e = self.next_open_ignoring(d, &active);
            if !active[e] {
                continue;
            }
            if e == d {
                o += 1;
                one_open.push(self.partner[d].unwrap());
            } else {
                pf += 1;
                potential.push(self.partner[d].unwrap());
                potential.push(self.partner[e].unwrap());
            }
        }
        one_open.sort_unstable();
        potential.sort_unstable();
        potential.dedup();

        let l2 = self.strongly_two_open_upper(k, &active);

        let noncontributing = (0..nd)
            .filter(|&d| self.dart_vertex[d] == vk)
            .filter(|d| one_open.binary_search(d).is_err() && potential.binary_search(d).is_err())
            .collect();
        Ok(StepClassification {
            o,
            pf,
            l2,
            one_open,
            potential,
            noncontributing,
        })
    }

    /// Strongly 2-open temporary faces of the submap induced on `V↑`
    /// (active darts count as unpaired).
    fn strongly_two_open_upper(&self, k: usize, active: &[bool]) -> usize {
        let nd = self.num_darts();
        let partner: Vec<Option<usize>> = (0..nd)
            .map(|d| {
                if active[d] || self.dart_vertex[d] < k {
                    None
                } else {
                    self.partner[d]
                }
            })
            .collect();
        let view = PartialMap {
            n: self.n,
            dart_vertex: self.dart_vertex.clone(),
            rotation: self.rotation.clone(),
            partner,
        };
        view.temporary_faces()
            .iter()
            .filter(|f| f.strongly_two_open)
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepClassification {
    pub o: usize,
    pub pf: usize,
    pub l2: usize,
    /// Darts at `v_k` whose partner starts a 1-open active face.
    pub one_open: Vec<usize>,
    /// Darts at `v_k` whose partner is an endpoint of a potential face.
    pub potential: Vec<usize>,
    pub noncontributing: Vec<usize>,
}
