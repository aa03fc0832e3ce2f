//! Working state for the stepwise processes on K_n: vertex `v` owns slots
//! `v(n−1) .. (v+1)(n−1)`. Slots become darts of concrete edges only when
//! paired, so the state can defer which neighbour each slot leads to.

use crate::combmap::{CombMap, PartialMap, RotationSystem};
use crate::graph::Graph;

pub(crate) const UNSET: usize = usize::MAX;

pub(crate) struct SlotState {
    pub n: usize,
    pub deg: usize,
    pub succ: Vec<usize>,
    pub partner: Vec<Option<usize>>,
}

impl SlotState {
    pub fn new(n: usize) -> Self {
        let deg = n - 1;
        SlotState {
            n,
            deg,
            succ: vec![UNSET; n * deg],
            partner: vec![None; n * deg],
        }
    }

    pub fn slot(&self, v: usize, p: usize) -> usize {
        v * self.deg + p
    }

    pub fn vertex(&self, s: usize) -> usize {
        s / self.deg
    }

    /// `R(d_i) = d_{i+1}` over the slots of `v` in index order.
    pub fn set_slot_order(&mut self, v: usize) {
        for p in 0..self.deg {
            let s = self.slot(v, p);
            self.succ[s] = self.slot(v, (p + 1) % self.deg);
        }
    }

    pub fn pair(&mut self, a: usize, b: usize) {
        debug_assert!(self.partner[a].is_none() && self.partner[b].is_none());
        self.partner[a] = Some(b);
        self.partner[b] = Some(a);
    }

    pub fn unpaired_at(&self, v: usize) -> Vec<usize> {
        (0..self.deg)
            .map(|p| self.slot(v, p))
            .filter(|&s| self.partner[s].is_none())
            .collect()
    }

    /// `R(L(x))` when both are defined.
    pub fn transition(&self, x: usize) -> Option<usize> {
        let y = self.partner[x]?;
        let z = self.succ[y];
        (z != UNSET).then_some(z)
    }

    /// Whether the orbit of `x` under `R∘L` is already a complete cycle.
    pub fn closed_through(&self, x: usize) -> bool {
        let mut y = x;
        for _ in 0..self.succ.len() {
            match self.transition(y) {
                None => return false,
                Some(z) if z == x => return true,
                Some(z) => y = z,
            }
        }
        false
    }

    pub fn same_orbit(&self, a: usize, b: usize) -> bool {
        let mut y = a;
        for _ in 0..self.succ.len() {
            if y == b {
                return true;
            }
            match self.transition(y) {
                None => return false,
                Some(z) if z == a => return false,
                Some(z) => y = z,
            }
        }
        false
    }

    /// View as a `PartialMap`; undefined rotations are filled with slot order,
    /// which only affects vertices that have no paired slot yet.
    pub fn to_partial_map(&self) -> PartialMap {
        let mut succ = self.succ.clone();
        for v in 0..self.n {
            if (0..self.deg).any(|p| succ[self.slot(v, p)] == UNSET) {
                for p in 0..self.deg {
                    succ[self.slot(v, p)] = self.slot(v, (p + 1) % self.deg);
                }
            }
        }
        let dv: Vec<usize> = (0..succ.len()).map(|s| self.vertex(s)).collect();
        let rot = RotationSystem::from_successors(succ, &dv, self.n);
        PartialMap::new(self.n, dv, rot, self.partner.clone()).expect("slot state is a valid partial map")
    }

    pub fn temporary_face_count(&self) -> usize {
        self.to_partial_map().temporary_faces().len()
    }

    /// Final map on `Graph::complete(n)` in the standard dart layout.
    pub fn to_map(&self) -> CombMap {
        let n = self.n;
        let g = Graph::complete(n);
        let edge_index = |u: usize, v: usize| -> usize {
            // edges (u, v), u < v, enumerated row by row
            u * (2 * n - u - 1) / 2 + (v - u - 1)
        };
        let mut dart_of = vec![0usize; self.succ.len()];
        for s in 0..self.succ.len() {
            let p = self.partner[s].expect("process finished with every slot paired");
            let (u, v) = (self.vertex(s), self.vertex(p));
            let e = edge_index(u.min(v), u.max(v));
            dart_of[s] = if u < v { 2 * e } else { 2 * e + 1 };
        }
        let mut succ = vec![0usize; self.succ.len()];
        for s in 0..self.succ.len() {
            succ[dart_of[s]] = dart_of[self.succ[s]];
        }
        let dv: Vec<usize> = (0..g.num_darts()).map(|d| g.dart_vertex(d)).collect();
        let rot = RotationSystem::from_successors(succ, &dv, n);
        CombMap::new(g, rot).expect("process output is a valid map of K_n")
    }
}
