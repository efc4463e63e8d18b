//! The built-in CDCL solver on small DIMACS problems: pigeonhole instances
//! (unsatisfiable once there are more pigeons than holes) and a chain of
//! implications.

use lasso_bmc::sat::{parse_dimacs, solve_with, Cnf, SolveResult, SolverConfig};

/// `p` pigeons into `h` holes; variable `i * h + j + 1` puts pigeon `i` in
/// hole `j`.
fn pigeonhole(p: i32, h: i32) -> Cnf {
    let var = |i: i32, j: i32| i * h + j + 1;
    let mut clauses: Vec<Vec<i32>> = (0..p).map(|i| (0..h).map(|j| var(i, j)).collect()).collect();
    for j in 0..h {
        for a in 0..p {
            for b in a + 1..p {
                clauses.push(vec![-var(a, j), -var(b, j)]);
            }
        }
    }
    Cnf {
        num_vars: (p * h) as u32,
        clauses,
    }
}

fn main() {
    let cfg = SolverConfig::from_env();
    for (p, h) in [(3, 3), (4, 3), (6, 5), (7, 6)] {
        let (result, stats) = solve_with(&pigeonhole(p, h), &cfg);
        let verdict = match result {
            SolveResult::Sat(_) => "sat",
            SolveResult::Unsat => "unsat",
            SolveResult::Unknown(_) => "unknown",
        };
        println!(
            "pigeons={p} holes={h}: {verdict:<5} conflicts={} decisions={} restarts={}",
            stats.conflicts, stats.decisions, stats.restarts
        );
    }

    let chain = parse_dimacs("c x1 and a chain of implications\np cnf 4 4\n1 0\n-1 2 0\n-2 3 0\n-3 4 0\n").unwrap();
    if let (SolveResult::Sat(m), _) = solve_with(&chain, &cfg) {
        let values: Vec<bool> = (1..=4).map(|v| m.value(v)).collect();
        println!("chain: {values:?}");
    }
}
