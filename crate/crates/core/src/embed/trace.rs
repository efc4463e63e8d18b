//! The bounded trace skeleton: `k` ordered states and an optional back loop
//! from the last state.

/// Trace skeleton for a fixed prefix length. State atoms and `next` are
/// structural; only the loop position is left open.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceAxioms {
    pub k: usize,
    /// Whether a back loop may be chosen. Off for the plain total order.
    pub loops: bool,
}

pub fn axiomatize_trace(k: usize) -> TraceAxioms {
    assert!(k >= 1, "a trace has at least one state");
    TraceAxioms { k, loops: true }
}

/// A plain total order with no back loop.
pub fn total_order(k: usize) -> TraceAxioms {
    assert!(k >= 1, "a trace has at least one state");
    TraceAxioms { k, loops: false }
}

impl TraceAxioms {
    /// Every admissible loop choice, `None` first.
    pub fn loop_choices(&self) -> Vec<Option<usize>> {
        let mut out = vec![None];
        if self.loops {
            out.extend((0..self.k).map(Some));
        }
        out
    }

    pub fn first(&self) -> usize {
        0
    }

    pub fn last(&self) -> usize {
        self.k - 1
    }

    /// Successor of state `i` under loop choice `lp`.
    pub fn next(&self, i: usize, lp: Option<usize>) -> Option<usize> {
        if i + 1 < self.k {
            Some(i + 1)
        } else {
            lp
        }
    }

    /// `i.*next`: states reachable from `i` in zero or more steps.
    pub fn reach(&self, i: usize, lp: Option<usize>) -> Vec<usize> {
        let start = match lp {
            Some(l) => l.min(i),
            None => i,
        };
        (start..self.k).collect()
    }

    /// `i.^next`: states reachable in one or more steps.
    pub fn reach_strict(&self, i: usize, lp: Option<usize>) -> Vec<usize> {
        match lp {
            Some(l) => (0..self.k).filter(|&j| j > i || j >= l).collect(),
            None => (i + 1..self.k).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_state() {
        let t = axiomatize_trace(1);
        assert_eq!(t.loop_choices(), vec![None, Some(0)]);
        assert_eq!(t.next(0, Some(0)), Some(0));
        assert_eq!(t.next(0, None), None);
    }

    #[test]
    fn loop_at_one_of_three() {
        let t = axiomatize_trace(3);
        let next: Vec<_> = (0..3).map(|i| t.next(i, Some(1))).collect();
        assert_eq!(next, vec![Some(1), Some(2), Some(1)]);
        assert_eq!(t.reach(2, Some(1)), vec![1, 2]);
        assert_eq!(t.reach_strict(2, Some(1)), vec![1, 2]);
        assert_eq!(t.reach_strict(0, Some(1)), vec![1, 2]);
        assert_eq!(t.reach_strict(0, Some(0)), vec![0, 1, 2]);
    }

    #[test]
    fn loop_free_last_has_no_successor() {
        let t = axiomatize_trace(3);
        assert_eq!(t.next(t.last(), None), None);
        assert!(t.reach_strict(2, None).is_empty());
        assert_eq!(total_order(3).loop_choices(), vec![None]);
    }
}
