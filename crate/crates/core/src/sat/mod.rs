//! CNF satisfiability: an internal CDCL solver plus DIMACS interchange with
//! external solvers.

mod cdcl;
pub mod dimacs;
pub mod external;

use std::time::Duration;

pub use cdcl::Solver;
pub use dimacs::{export_dimacs, parse_dimacs, DimacsError};
pub use external::{import_external_result, run_external, ExternalError};

/// Propositional CNF. Literals are non-zero DIMACS integers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    /// Whether `model` satisfies every clause.
    pub fn satisfied_by(&self, model: &Model) -> bool {
        self.first_violated(model).is_none()
    }

    pub fn first_violated(&self, model: &Model) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !c.iter().any(|&l| model.lit(l)))
    }
}

/// Total assignment over variables `1..=num_vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    /// `values[0]` is unused.
    pub fn new(values: Vec<bool>) -> Model {
        Model { values }
    }

    pub fn num_vars(&self) -> u32 {
        self.values.len().saturating_sub(1) as u32
    }

    pub fn value(&self, var: u32) -> bool {
        self.values.get(var as usize).copied().unwrap_or(false)
    }

    pub fn lit(&self, l: i32) -> bool {
        self.value(l.unsigned_abs()) == (l > 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Sat(Model),
    Unsat,
    /// Budget exhausted before a verdict.
    Unknown(String),
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }

    /// `Some(true)` for SAT, `Some(false)` for UNSAT.
    pub fn verdict(&self) -> Option<bool> {
        match self {
            SolveResult::Sat(_) => Some(true),
            SolveResult::Unsat => Some(false),
            SolveResult::Unknown(_) => None,
        }
    }
}

pub const DEFAULT_SEED: u64 = 0x1a55_0b3c;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    /// Seeds the tiny initial activity jitter that breaks ties between
    /// variables.
    pub seed: u64,
    pub max_conflicts: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: DEFAULT_SEED,
            max_conflicts: None,
            time_limit: None,
        }
    }
}

impl SolverConfig {
    /// Default configuration, with the seed taken from `LASSO_BMC_SEED` when
    /// that variable holds an integer.
    pub fn from_env() -> Self {
        let mut cfg = SolverConfig::default();
        if let Some(seed) = std::env::var("LASSO_BMC_SEED")
            .ok()
            .and_then(|s| s.trim().parse().ok())
        {
            cfg.seed = seed;
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct SolverStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub deleted: u64,
}

pub fn solve(cnf: &Cnf) -> SolveResult {
    solve_with(cnf, &SolverConfig::default()).0
}

/// Solves and checks any model against every clause before returning it.
pub fn solve_with(cnf: &Cnf, cfg: &SolverConfig) -> (SolveResult, SolverStats) {
    let mut solver = Solver::new(cnf, cfg);
    let result = solver.solve();
    if let SolveResult::Sat(m) = &result {
        if let Some(i) = cnf.first_violated(m) {
            panic!("internal solver produced a model violating clause {i}: {:?}", cnf.clauses[i]);
        }
    }
    (result, solver.stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cnf(num_vars: u32, clauses: &[&[i32]]) -> Cnf {
        Cnf {
            num_vars,
            clauses: clauses.iter().map(|c| c.to_vec()).collect(),
        }
    }

    fn brute(c: &Cnf) -> bool {
        (0u64..1 << c.num_vars).any(|bits| {
            let mut v = vec![false];
            v.extend((0..c.num_vars).map(|i| bits >> i & 1 == 1));
            c.satisfied_by(&Model::new(v))
        })
    }

    #[test]
    fn unit_propagation() {
        let r = solve(&cnf(2, &[&[1, 2], &[-1]]));
        let SolveResult::Sat(m) = r else { panic!() };
        assert!(!m.value(1));
        assert!(m.value(2));
    }

    #[test]
    fn contradiction() {
        assert_eq!(solve(&cnf(1, &[&[1], &[-1]])), SolveResult::Unsat);
        assert_eq!(solve(&cnf(1, &[&[]])), SolveResult::Unsat);
    }

    #[test]
    fn empty_formula_is_sat() {
        assert!(solve(&cnf(3, &[])).is_sat());
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 4 pigeons, 3 holes
        let var = |p: i32, h: i32| p * 3 + h + 1;
        let mut clauses: Vec<Vec<i32>> = (0..4).map(|p| (0..3).map(|h| var(p, h)).collect()).collect();
        for h in 0..3 {
            for p in 0..4 {
                for q in p + 1..4 {
                    clauses.push(vec![-var(p, h), -var(q, h)]);
                }
            }
        }
        let c = Cnf {
            num_vars: 12,
            clauses,
        };
        assert_eq!(solve(&c), SolveResult::Unsat);
    }

    #[test]
    fn agrees_with_brute_force_on_random_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=10u32);
            let m = rng.gen_range(0..=45usize);
            let clauses = (0..m)
                .map(|_| {
                    (0..rng.gen_range(1..=3))
                        .map(|_| {
                            let v = rng.gen_range(1..=n) as i32;
                            if rng.gen() {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            let c = Cnf { num_vars: n, clauses };
            assert_eq!(solve(&c).is_sat(), brute(&c), "{c:?}");
        }
    }

    #[test]
    fn conflict_budget_is_reported() {
        let var = |p: i32, h: i32| p * 7 + h + 1;
        let mut clauses: Vec<Vec<i32>> = (0..8).map(|p| (0..7).map(|h| var(p, h)).collect()).collect();
        for h in 0..7 {
            for p in 0..8 {
                for q in p + 1..8 {
                    clauses.push(vec![-var(p, h), -var(q, h)]);
                }
            }
        }
        let c = Cnf {
            num_vars: 56,
            clauses,
        };
        let cfg = SolverConfig {
            max_conflicts: Some(10),
            ..Default::default()
        };
        assert!(matches!(solve_with(&c, &cfg).0, SolveResult::Unknown(_)));
    }

    #[test]
    fn deterministic_under_fixed_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let clauses: Vec<Vec<i32>> = (0..300)
            .map(|_| {
                (0..3)
                    .map(|_| {
                        let v = rng.gen_range(1..=100);
                        if rng.gen() {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect()
            })
            .collect();
        let c = Cnf {
            num_vars: 100,
            clauses,
        };
        let a = solve_with(&c, &SolverConfig::default());
        let b = solve_with(&c, &SolverConfig::default());
        assert_eq!(a, b);
        assert!(a.0.is_sat());
    }
}
