//! Hash-consed boolean circuits of n-ary AND gates with complemented edges,
//! and their Tseitin translation to CNF.

use std::collections::HashMap;
use std::ops::Not;

use crate::sat::Cnf;

/// An edge into the circuit: node index and a complement bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub const TRUE: Lit = Lit(0);
    pub const FALSE: Lit = Lit(1);

    fn new(node: usize, neg: bool) -> Lit {
        Lit(((node as u32) << 1) | neg as u32)
    }

    pub fn node(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn is_const(self) -> bool {
        self.node() == 0
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

#[derive(Debug, Clone)]
enum Node {
    True,
    /// A primary CNF variable.
    Input(u32),
    And(Box<[Lit]>),
}

#[derive(Debug, Clone)]
pub struct Circuit {
    nodes: Vec<Node>,
    ands: HashMap<Box<[Lit]>, usize>,
    inputs: HashMap<u32, usize>,
}

impl Default for Circuit {
    fn default() -> Self {
        Circuit {
            nodes: vec![Node::True],
            ands: HashMap::new(),
            inputs: HashMap::new(),
        }
    }
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn constant(b: bool) -> Lit {
        if b {
            Lit::TRUE
        } else {
            Lit::FALSE
        }
    }

    /// Literal of primary variable `var` (1-based).
    pub fn input(&mut self, var: u32) -> Lit {
        assert!(var > 0);
        if let Some(&n) = self.inputs.get(&var) {
            return Lit::new(n, false);
        }
        let n = self.nodes.len();
        self.nodes.push(Node::Input(var));
        self.inputs.insert(var, n);
        Lit::new(n, false)
    }

    pub fn and(&mut self, lits: impl IntoIterator<Item = Lit>) -> Lit {
        let mut v: Vec<Lit> = Vec::new();
        for l in lits {
            if l == Lit::FALSE {
                return Lit::FALSE;
            }
            if l != Lit::TRUE {
                v.push(l);
            }
        }
        v.sort_unstable();
        v.dedup();
        if v.windows(2).any(|w| w[0] == !w[1]) {
            return Lit::FALSE;
        }
        match v.len() {
            0 => Lit::TRUE,
            1 => v[0],
            _ => {
                let key = v.into_boxed_slice();
                if let Some(&n) = self.ands.get(&key) {
                    return Lit::new(n, false);
                }
                let n = self.nodes.len();
                self.nodes.push(Node::And(key.clone()));
                self.ands.insert(key, n);
                Lit::new(n, false)
            }
        }
    }

    pub fn or(&mut self, lits: impl IntoIterator<Item = Lit>) -> Lit {
        let negated: Vec<Lit> = lits.into_iter().map(|l| !l).collect();
        !self.and(negated)
    }

    pub fn and2(&mut self, a: Lit, b: Lit) -> Lit {
        self.and([a, b])
    }

    pub fn or2(&mut self, a: Lit, b: Lit) -> Lit {
        self.or([a, b])
    }

    pub fn implies(&mut self, a: Lit, b: Lit) -> Lit {
        self.or([!a, b])
    }

    pub fn iff(&mut self, a: Lit, b: Lit) -> Lit {
        let l = self.implies(a, b);
        let r = self.implies(b, a);
        self.and2(l, r)
    }

    /// At most one of `lits` holds: a sequential prefix-OR ladder, linear in
    /// the number of literals.
    pub fn at_most_one(&mut self, lits: &[Lit]) -> Lit {
        let lits: Vec<Lit> = lits.iter().copied().filter(|&l| l != Lit::FALSE).collect();
        if lits.len() <= 1 {
            return Lit::TRUE;
        }
        let mut seen = lits[0];
        let mut conds = Vec::with_capacity(lits.len());
        for &x in &lits[1..] {
            let both = self.and2(seen, x);
            conds.push(!both);
            seen = self.or2(seen, x);
        }
        self.and(conds)
    }

    /// Evaluates `lit` under an assignment of the primary variables.
    pub fn eval(&self, lit: Lit, assignment: &dyn Fn(u32) -> bool) -> bool {
        let mut memo: HashMap<usize, bool> = HashMap::new();
        let mut stack = vec![(lit.node(), false)];
        while let Some((n, expanded)) = stack.pop() {
            if memo.contains_key(&n) {
                continue;
            }
            match &self.nodes[n] {
                Node::True => {
                    memo.insert(n, true);
                }
                Node::Input(v) => {
                    memo.insert(n, assignment(*v));
                }
                Node::And(kids) => {
                    if expanded {
                        let v = kids.iter().all(|k| memo[&k.node()] != k.is_neg());
                        memo.insert(n, v);
                    } else {
                        stack.push((n, true));
                        for k in kids.iter() {
                            if !memo.contains_key(&k.node()) {
                                stack.push((k.node(), false));
                            }
                        }
                    }
                }
            }
        }
        memo[&lit.node()] != lit.is_neg()
    }

    /// Tseitin translation asserting every root. Primary variables keep their
    /// numbers `1..=num_inputs`; gates are numbered after them.
    pub fn to_cnf(&self, roots: &[Lit], num_inputs: u32) -> Cnf {
        let mut var_of: Vec<u32> = vec![0; self.nodes.len()];
        let mut next = num_inputs;
        let mut clauses: Vec<Vec<i32>> = Vec::new();
        let mut stack: Vec<(usize, bool)> = roots.iter().map(|r| (r.node(), false)).collect();
        let cnf_lit = |var_of: &[u32], l: Lit| -> i32 {
            let v = var_of[l.node()] as i32;
            if l.is_neg() {
                -v
            } else {
                v
            }
        };
        while let Some((n, expanded)) = stack.pop() {
            if var_of[n] != 0 && !expanded {
                continue;
            }
            match &self.nodes[n] {
                Node::True => {}
                Node::Input(v) => var_of[n] = *v,
                Node::And(kids) => {
                    if !expanded {
                        stack.push((n, true));
                        for k in kids.iter() {
                            if var_of[k.node()] == 0 && !k.is_const() {
                                stack.push((k.node(), false));
                            }
                        }
                        continue;
                    }
                    if var_of[n] != 0 {
                        continue;
                    }
                    next += 1;
                    var_of[n] = next;
                    let g = next as i32;
                    let mut long = vec![g];
                    for &k in kids.iter() {
                        let c = cnf_lit(&var_of, k);
                        clauses.push(vec![-g, c]);
                        long.push(-c);
                    }
                    clauses.push(long);
                }
            }
        }
        for &r in roots {
            if r == Lit::TRUE {
                continue;
            }
            if r == Lit::FALSE {
                clauses.push(Vec::new());
                continue;
            }
            clauses.push(vec![cnf_lit(&var_of, r)]);
        }
        Cnf {
            num_vars: next,
            clauses,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_folding() {
        let mut c = Circuit::new();
        let x = c.input(1);
        assert_eq!(c.and([x, Lit::TRUE]), x);
        assert_eq!(c.and([x, !x]), Lit::FALSE);
        assert_eq!(c.or([x, !x]), Lit::TRUE);
        assert_eq!(c.and(Vec::new()), Lit::TRUE);
        let y = c.input(2);
        assert_eq!(c.and([x, y]), c.and([y, x]));
    }

    #[test]
    fn at_most_one_of_two_is_pairwise() {
        let mut c = Circuit::new();
        let (x, y) = (c.input(1), c.input(2));
        let amo = c.at_most_one(&[x, y]);
        let nand = !c.and2(x, y);
        assert_eq!(amo, nand);
    }

    #[test]
    fn tseitin_preserves_models() {
        let mut c = Circuit::new();
        let xs: Vec<Lit> = (1..=4).map(|v| c.input(v)).collect();
        let amo = c.at_most_one(&xs);
        let some = c.or(xs.clone());
        let exactly_one = c.and2(amo, some);
        let cnf = c.to_cnf(&[exactly_one], 4);
        for bits in 0u32..16 {
            let expect = bits.count_ones() == 1;
            let val = |v: u32| bits >> (v - 1) & 1 == 1;
            assert_eq!(c.eval(exactly_one, &val), expect);
            // the CNF is satisfiable with these inputs iff the circuit holds
            let mut fixed = cnf.clone();
            for v in 1..=4 {
                fixed.clauses.push(vec![if val(v) { v as i32 } else { -(v as i32) }]);
            }
            let sat = crate::sat::solve(&fixed).is_sat();
            assert_eq!(sat, expect, "bits {bits:04b}");
        }
    }
}
