use super::choice::Chooser;
use super::slots::{SlotState, UNSET};
use crate::combmap::CombMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepObservables {
    pub k: usize,
    pub o: usize,
    pub pf: usize,
    pub l2: usize,
    pub faces_closed: usize,
    /// Temporary faces on `{v_k, …, v_n}` once `v_k` is processed.
    pub temporary_faces_after: usize,
}

/// Observables of one run, ordered `k = n−2, …, 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessTrace {
    pub n: usize,
    pub steps: Vec<StepObservables>,
}

impl ProcessTrace {
    pub fn total_closed(&self) -> usize {
        self.steps.iter().map(|s| s.faces_closed).sum()
    }

    pub fn step(&self, k: usize) -> Option<&StepObservables> {
        self.steps.iter().find(|s| s.k == k)
    }
}

/// Process B on K_n. Vertex `v_j` is index `j − 1`.
pub fn process_b(n: usize, ch: &mut dyn Chooser) -> (CombMap, ProcessTrace) {
    assert!(n >= 3, "process B needs n >= 3");
    let mut st = SlotState::new(n);
    st.set_slot_order(n - 1);
    st.set_slot_order(n - 2);
    let (a, b) = (st.slot(n - 1, 0), st.slot(n - 2, 0));
    st.pair(a, b);

    let mut steps = Vec::with_capacity(n - 2);
    for k in (1..=n - 2).rev() {
        let vk = k - 1;
        // Random choice 1: each upper vertex sends one of its k free slots to v_k.
        for (j, vi) in (k..n).rev().enumerate() {
            let free = st.unpaired_at(vi);
            debug_assert_eq!(free.len(), k);
            let d = free[ch.choose(free.len())];
            let target = st.slot(vk, j);
            st.pair(d, target);
        }
        let cls = st
            .to_partial_map()
            .classify_step(k)
            .expect("process B state is a valid step intermediate");

        // σ_k: 1-open, then potential, then non-contributing; ids ascending within.
        let order: Vec<usize> = cls
            .one_open
            .iter()
            .chain(cls.potential.iter())
            .chain(cls.noncontributing.iter())
            .copied()
            .collect();
        debug_assert_eq!(order.len(), n - 1);

        // Random choice 2 with forefather tracking.
        let mut pred = vec![UNSET; n - 1];
        let base = st.slot(vk, 0);
        let local = |s: usize| s - base;
        let mut closed = 0;
        for (i, &d) in order.iter().enumerate() {
            let ff = {
                let mut x = local(d);
                while pred[x] != UNSET {
                    x = pred[x];
                }
                x
            };
            let target_local = if i + 1 == order.len() {
                ff
            } else {
                let options: Vec<usize> = (0..n - 1).filter(|&x| pred[x] == UNSET && x != ff).collect();
                options[ch.choose(options.len())]
            };
            let target = st.slot(vk, target_local);
            st.succ[d] = target;
            pred[target_local] = local(d);
            if let Some(y) = st.partner[d] {
                if st.closed_through(y) {
                    closed += 1;
                }
            }
        }
        debug_assert!(
            closed <= cls.pf + usize::from(k == 1),
            "step {k} closed {closed} faces with PF = {}",
            cls.pf
        );
        steps.push(StepObservables {
            k,
            o: cls.o,
            pf: cls.pf,
            l2: cls.l2,
            faces_closed: closed,
            temporary_faces_after: st.temporary_face_count(),
        });
    }
    (st.to_map(), ProcessTrace { n, steps })
}
