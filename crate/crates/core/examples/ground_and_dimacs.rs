//! Grounds one bound of a check to CNF, prints the primary variables and
//! writes the DIMACS file, then solves it with the built-in solver.
//!
//! Pass a directory to keep the CNF; otherwise a temporary one is used.

use lasso_bmc::engine::{build_query, ground_scope, EngineOptions};
use lasso_bmc::lang::load_spec;
use lasso_bmc::sat::{export_dimacs, solve};

fn main() {
    let spec = load_spec(include_str!("../corpus/pifp.spec")).unwrap();
    let cmd = spec.commands.iter().find(|c| c.target == "Safety").unwrap();
    let opts = EngineOptions::default();
    let query = build_query(&spec, cmd, opts.embed).unwrap();

    for k in 1..=3 {
        let g = ground_scope(&spec, cmd, &query, k, &opts).unwrap();
        println!(
            "State={k}: {} primary vars ({} facts), {} vars, {} clauses, {}",
            g.vars.len(),
            g.vars.fact_count(),
            g.cnf.num_vars,
            g.cnf.clauses.len(),
            if solve(&g.cnf).is_sat() { "sat" } else { "unsat" }
        );
        if k == 1 {
            for (v, meaning) in g.vars.iter().take(6) {
                println!("  var {v}: {meaning:?}");
            }
            println!("  ...");
        }
    }

    let dir = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("lasso-bmc-example"));
    std::fs::create_dir_all(&dir).unwrap();
    let g = ground_scope(&spec, cmd, &query, 2, &opts).unwrap();
    let path = dir.join("Safety_k2.cnf");
    std::fs::write(&path, export_dimacs(&g.cnf)).unwrap();
    println!("wrote {}", path.display());
}
