//! A DIMACS solver with the usual competition output, backed by varisat.
//! It stands in for an external solver:
//!
//! ```text
//! cargo build --example external_solver
//! lasso-bmc check corpus/pifp.spec --solver external:target/debug/examples/external_solver
//! ```

use std::fs::File;
use std::io::BufReader;
use std::process::ExitCode;

use varisat::Solver;

fn main() -> ExitCode {
    let Some(path) = std::env::args().nth(1) else {
        eprintln!("usage: external_solver FILE.cnf");
        return ExitCode::from(2);
    };
    let file = match File::open(&path) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{path}: {e}");
            return ExitCode::from(2);
        }
    };
    let mut solver = Solver::new();
    if let Err(e) = solver.add_dimacs_cnf(BufReader::new(file)) {
        eprintln!("{path}: {e}");
        return ExitCode::from(2);
    }
    match solver.solve() {
        Ok(true) => {
            println!("s SATISFIABLE");
            let model = solver.model().unwrap_or_default();
            let lits: Vec<String> = model.iter().map(|l| l.to_dimacs().to_string()).collect();
            println!("v {} 0", lits.join(" "));
            ExitCode::from(10)
        }
        Ok(false) => {
            println!("s UNSATISFIABLE");
            ExitCode::from(20)
        }
        Err(e) => {
            eprintln!("{e}");
            println!("s UNKNOWN");
            ExitCode::SUCCESS
        }
    }
}
