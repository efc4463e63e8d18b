//! Conflict-driven clause learning.
//!
//! Two watched literals with blocker literals, first-UIP learning with local
//! minimisation, VSIDS on a binary heap, Luby restarts, phase saving and
//! activity-based deletion of learnt clauses.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Cnf, Model, SolveResult, SolverConfig, SolverStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct L(u32);

impl L {
    fn from_dimacs(x: i32) -> L {
        let v = x.unsigned_abs() - 1;
        L((v << 1) | (x < 0) as u32)
    }

    fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    fn neg(self) -> bool {
        self.0 & 1 == 1
    }

    fn idx(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for L {
    type Output = L;

    fn not(self) -> L {
        L(self.0 ^ 1)
    }
}

const FALSE: u8 = 0;
const TRUE: u8 = 1;
const UNDEF: u8 = 2;

#[derive(Clone, Copy)]
struct Watcher {
    cref: usize,
    blocker: L,
}

struct Clause {
    lits: Vec<L>,
    learnt: bool,
    activity: f64,
    deleted: bool,
}

/// Max-heap of variables keyed by activity.
struct VarHeap {
    heap: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn new(n: usize) -> Self {
        VarHeap {
            heap: Vec::with_capacity(n),
            pos: vec![None; n],
        }
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v].is_some()
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v] = Some(self.heap.len());
        self.heap.push(v);
        self.up(self.heap.len() - 1, act);
    }

    fn bumped(&mut self, v: usize, act: &[f64]) {
        if let Some(i) = self.pos[v] {
            self.up(i, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("non-empty");
        self.pos[top] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = Some(0);
            self.down(0, act);
        }
        Some(top)
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if act[self.heap[parent]] >= act[v] {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i]] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let c = if r < n && act[self.heap[r]] > act[self.heap[l]] { r } else { l };
            if act[self.heap[c]] <= act[v] {
                break;
            }
            self.heap[i] = self.heap[c];
            self.pos[self.heap[i]] = Some(i);
            i = c;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }
}

/// Luby sequence element `i` (0-based): 1 1 2 1 1 2 4 ...
fn luby(mut i: u64) -> u64 {
    let (mut size, mut seq) = (1u64, 0u32);
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

pub struct Solver {
    num_vars: usize,
    clauses: Vec<Clause>,
    watches: Vec<Vec<Watcher>>,
    values: Vec<u8>,
    level: Vec<usize>,
    reason: Vec<Option<usize>>,
    trail: Vec<L>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    phase: Vec<bool>,
    heap: VarHeap,
    seen: Vec<bool>,
    learnts: Vec<usize>,
    unsat: bool,
    cfg: SolverConfig,
    pub stats: SolverStats,
}

const VAR_DECAY: f64 = 0.95;
const CLA_DECAY: f64 = 0.999;
const RESTART_BASE: u64 = 100;

impl Solver {
    pub fn new(cnf: &Cnf, cfg: &SolverConfig) -> Solver {
        let n = cnf.num_vars as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let activity: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 1e-5).collect();
        let mut s = Solver {
            num_vars: n,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            values: vec![UNDEF; n],
            level: vec![0; n],
            reason: vec![None; n],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity,
            var_inc: 1.0,
            cla_inc: 1.0,
            phase: vec![false; n],
            heap: VarHeap::new(n),
            seen: vec![false; n],
            learnts: Vec::new(),
            unsat: false,
            cfg: cfg.clone(),
            stats: SolverStats::default(),
        };
        for v in 0..n {
            s.heap.insert(v, &s.activity);
        }
        for c in &cnf.clauses {
            if !s.add_clause(c) {
                s.unsat = true;
                break;
            }
        }
        s
    }

    fn value(&self, l: L) -> u8 {
        let v = self.values[l.var()];
        if v == UNDEF {
            UNDEF
        } else {
            v ^ l.neg() as u8
        }
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    /// Adds an input clause at level 0. Returns false on a trivial conflict.
    fn add_clause(&mut self, c: &[i32]) -> bool {
        let mut lits: Vec<L> = c.iter().map(|&x| L::from_dimacs(x)).collect();
        lits.sort_unstable_by_key(|l| l.0);
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == !w[1]) {
            return true;
        }
        lits.retain(|&l| self.value(l) != FALSE);
        if lits.iter().any(|&l| self.value(l) == TRUE) {
            return true;
        }
        match lits.len() {
            0 => false,
            1 => {
                self.enqueue(lits[0], None);
                self.propagate().is_none()
            }
            _ => {
                self.attach(lits, false);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<L>, learnt: bool) -> usize {
        let cref = self.clauses.len();
        self.watches[lits[0].idx()].push(Watcher {
            cref,
            blocker: lits[1],
        });
        self.watches[lits[1].idx()].push(Watcher {
            cref,
            blocker: lits[0],
        });
        self.clauses.push(Clause {
            lits,
            learnt,
            activity: 0.0,
            deleted: false,
        });
        cref
    }

    fn enqueue(&mut self, l: L, reason: Option<usize>) {
        let v = l.var();
        self.values[v] = (!l.neg()) as u8;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Unit propagation; returns a conflicting clause if any.
    fn propagate(&mut self) -> Option<usize> {
        let mut conflict = None;
        while self.qhead < self.trail.len() && conflict.is_none() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.idx()]);
            let (mut i, mut j) = (0, 0);
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref;
                {
                    let lits = &mut self.clauses[cref].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                let nw = Watcher {
                    cref,
                    blocker: first,
                };
                if first != w.blocker && self.value(first) == TRUE {
                    ws[j] = nw;
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[cref].lits[k];
                    if self.value(l) != FALSE {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[l.idx()].push(nw);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = nw;
                j += 1;
                if self.value(first) == FALSE {
                    conflict = Some(cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, Some(cref));
                }
            }
            ws.truncate(j);
            self.watches[false_lit.idx()] = ws;
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: usize) {
        let c = &mut self.clauses[cref];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &r in &self.learnts {
                self.clauses[r].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, mut confl: usize) -> (Vec<L>, usize) {
        let mut learnt = vec![L(0)];
        let mut path = 0;
        let mut p: Option<L> = None;
        let mut idx = self.trail.len();
        loop {
            self.bump_clause(confl);
            let start = usize::from(p.is_some());
            for k in start..self.clauses[confl].lits.len() {
                let q = self.clauses[confl].lits[k];
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= self.decision_level() {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var()] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            self.seen[lit.var()] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[lit.var()].expect("implied literal has a reason");
        }
        learnt[0] = !p.expect("conflict at positive level");

        // Drop literals implied by the rest of the clause.
        let keep: Vec<bool> = learnt
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                i == 0
                    || match self.reason[l.var()] {
                        None => true,
                        Some(r) => self.clauses[r].lits[1..].iter().any(|q| {
                            !self.seen[q.var()] && self.level[q.var()] > 0
                        }),
                    }
            })
            .collect();
        for l in &learnt[1..] {
            self.seen[l.var()] = false;
        }
        let mut out: Vec<L> = learnt
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(&l, _)| l)
            .collect();

        let mut bt = 0;
        if out.len() > 1 {
            let mut best = 1;
            for i in 2..out.len() {
                if self.level[out[i].var()] > self.level[out[best].var()] {
                    best = i;
                }
            }
            out.swap(1, best);
            bt = self.level[out[1].var()];
        }
        (out, bt)
    }

    fn cancel_until(&mut self, lvl: usize) {
        if self.decision_level() <= lvl {
            return;
        }
        let start = self.trail_lim[lvl];
        for i in (start..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var();
            self.values[v] = UNDEF;
            self.reason[v] = None;
            self.phase[v] = !l.neg();
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(lvl);
        self.qhead = start;
    }

    fn locked(&self, cref: usize) -> bool {
        let l = self.clauses[cref].lits[0];
        self.value(l) == TRUE && self.reason[l.var()] == Some(cref)
    }

    fn reduce_db(&mut self) {
        let mut cands: Vec<usize> = self
            .learnts
            .iter()
            .copied()
            .filter(|&c| self.clauses[c].lits.len() > 2 && !self.locked(c))
            .collect();
        cands.sort_by(|&a, &b| {
            self.clauses[a]
                .activity
                .partial_cmp(&self.clauses[b].activity)
                .expect("finite activity")
                .then(a.cmp(&b))
        });
        let remove = &cands[..cands.len() / 2];
        for &c in remove {
            self.clauses[c].deleted = true;
            self.clauses[c].lits = Vec::new();
        }
        let clauses = &self.clauses;
        for ws in &mut self.watches {
            ws.retain(|w| !clauses[w.cref].deleted);
        }
        self.learnts.retain(|&c| !clauses[c].deleted);
        self.stats.deleted += remove.len() as u64;
    }

    fn pick_branch(&mut self) -> Option<L> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.values[v] == UNDEF {
                return Some(L(((v as u32) << 1) | (!self.phase[v]) as u32));
            }
        }
        None
    }

    pub fn solve(&mut self) -> SolveResult {
        if self.unsat {
            return SolveResult::Unsat;
        }
        if self.propagate().is_some() {
            return SolveResult::Unsat;
        }
        let started = Instant::now();
        let mut restarts = 0u64;
        let mut until_restart = luby(0) * RESTART_BASE;
        let mut max_learnts = (self.clauses.len() as f64 / 3.0).max(1000.0);
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                if self.decision_level() == 0 {
                    return SolveResult::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let first = learnt[0];
                    let cref = self.attach(learnt, true);
                    self.learnts.push(cref);
                    self.bump_clause(cref);
                    self.enqueue(first, Some(cref));
                }
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLA_DECAY;
                until_restart = until_restart.saturating_sub(1);
                if let Some(max) = self.cfg.max_conflicts {
                    if self.stats.conflicts >= max {
                        return SolveResult::Unknown(format!("conflict budget of {max} exhausted"));
                    }
                }
                if self.stats.conflicts % 256 == 0 {
                    if let Some(limit) = self.cfg.time_limit {
                        if started.elapsed() >= limit {
                            return SolveResult::Unknown(format!(
                                "time budget of {:.1}s exhausted",
                                limit.as_secs_f64()
                            ));
                        }
                    }
                }
            } else {
                if until_restart == 0 {
                    restarts += 1;
                    self.stats.restarts += 1;
                    until_restart = luby(restarts) * RESTART_BASE;
                    self.cancel_until(0);
                }
                if self.learnts.len() as f64 >= max_learnts + self.trail.len() as f64 {
                    self.reduce_db();
                    max_learnts *= 1.1;
                }
                match self.pick_branch() {
                    None => return SolveResult::Sat(self.model()),
                    Some(l) => {
                        self.stats.decisions += 1;
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, None);
                    }
                }
            }
        }
    }

    fn model(&self) -> Model {
        let mut values = vec![false; self.num_vars + 1];
        for v in 0..self.num_vars {
            values[v + 1] = self.values[v] == TRUE;
        }
        Model::new(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luby_prefix() {
        let v: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(v, [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn heap_orders_by_activity() {
        let act = vec![0.5, 3.0, 1.0, 2.0];
        let mut h = VarHeap::new(4);
        for v in 0..4 {
            h.insert(v, &act);
        }
        let order: Vec<usize> = std::iter::from_fn(|| h.pop(&act)).collect();
        assert_eq!(order, [1, 3, 2, 0]);
    }
}
