use super::choice::Chooser;
use super::slots::SlotState;
use crate::combmap::CombMap;

/// Faces completed while processing `v_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepClosures {
    pub k: usize,
    pub faces_closed: usize,
    /// Set when the last dart at `v_1` completed two faces at once.
    pub double_closure: bool,
}

/// Process A on K_n. Vertex `v_j` is index `j − 1`; `v_n` and `v_{n−1}` start
/// joined by their edge, then `v_{n−2}, …, v_1` are processed with the fixed
/// order `d_1 … d_{n−1}` and the symbol multiset `{n, …, k+1, u^(k−1)}`.
pub fn process_a(n: usize, ch: &mut dyn Chooser) -> (CombMap, Vec<StepClosures>) {
    assert!(n >= 3, "process A needs n >= 3");
    let mut st = SlotState::new(n);
    for v in 0..n {
        st.set_slot_order(v);
    }
    let (a, b) = (st.slot(n - 1, 0), st.slot(n - 2, 0));
    st.pair(a, b);

    let mut log = Vec::with_capacity(n - 2);
    for k in (1..=n - 2).rev() {
        let vk = k - 1;
        // symbols: Some(upper vertex index) or None for `u`
        let mut symbols: Vec<Option<usize>> = (k..n).rev().map(Some).collect();
        symbols.extend(std::iter::repeat_n(None, k - 1));
        let mut closed = 0;
        let mut double = false;
        for l in 0..n - 1 {
            let d = st.slot(vk, l);
            let sym = if l == 0 && k > 1 {
                // d_1 is taken to be unpaired
                let pos = symbols.iter().position(|s| s.is_none()).unwrap();
                symbols.remove(pos)
            } else {
                symbols.remove(ch.choose(symbols.len()))
            };
            let Some(vi) = sym else { continue };
            let free = st.unpaired_at(vi);
            let dp = free[ch.choose(free.len())];
            st.pair(d, dp);
            let cd = st.closed_through(d);
            let cp = st.closed_through(dp);
            let here = match (cd, cp) {
                (true, true) if st.same_orbit(d, dp) => 1,
                (x, y) => x as usize + y as usize,
            };
            let last_at_v1 = k == 1 && l == n - 2;
            assert!(
                here <= 1 || (last_at_v1 && here <= 2),
                "process A closed {here} faces on one dart at step {k}"
            );
            double |= here == 2;
            closed += here;
        }
        log.push(StepClosures {
            k,
            faces_closed: closed,
            double_closure: double,
        });
    }
    (st.to_map(), log)
}
