//! Running an external solver on a DIMACS file and reading its answer.

use std::path::Path;
use std::process::Command;

use super::{export_dimacs, Cnf, Model, SolveResult};

#[derive(Debug, thiserror::Error)]
pub enum ExternalError {
    #[error("malformed solver output: {0}")]
    Malformed(String),
    #[error("external solver fault: model violates clause {0}")]
    BadModel(usize),
    #[error("could not run `{cmd}`: {source}")]
    Spawn {
        cmd: String,
        source: std::io::Error,
    },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Parses `s SATISFIABLE` / `v ...` output and validates the model against
/// `cnf`. Unmentioned variables default to false.
pub fn import_external_result(text: &str, cnf: &Cnf) -> Result<SolveResult, ExternalError> {
    let mut status = None;
    let mut values = vec![false; cnf.num_vars as usize + 1];
    let mut terminated = false;
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = Some(match rest.trim() {
                "SATISFIABLE" => true,
                "UNSATISFIABLE" => false,
                "UNKNOWN" | "INDETERMINATE" => return Ok(SolveResult::Unknown("external solver gave up".into())),
                other => return Err(ExternalError::Malformed(format!("status `{other}`"))),
            });
        } else if let Some(rest) = line.strip_prefix('v') {
            for tok in rest.split_whitespace() {
                let l: i32 = tok
                    .parse()
                    .map_err(|_| ExternalError::Malformed(format!("value `{tok}`")))?;
                if l == 0 {
                    terminated = true;
                    continue;
                }
                let v = l.unsigned_abs() as usize;
                if v >= values.len() {
                    return Err(ExternalError::Malformed(format!("variable {v} out of range")));
                }
                values[v] = l > 0;
            }
        }
    }
    match status {
        None => Err(ExternalError::Malformed("no `s` status line".into())),
        Some(false) => Ok(SolveResult::Unsat),
        Some(true) => {
            if !terminated {
                return Err(ExternalError::Malformed("model not terminated by 0".into()));
            }
            let model = Model::new(values);
            match cnf.first_violated(&model) {
                Some(i) => Err(ExternalError::BadModel(i)),
                None => Ok(SolveResult::Sat(model)),
            }
        }
    }
}

/// Writes `cnf` to `path` and runs `cmd path` through the shell-free
/// whitespace split of `cmd`. Exit codes 10/20 are accepted like 0.
pub fn run_external(cmd: &str, cnf: &Cnf, path: &Path) -> Result<SolveResult, ExternalError> {
    std::fs::write(path, export_dimacs(cnf))?;
    let mut parts = cmd.split_whitespace();
    let program = parts
        .next()
        .ok_or_else(|| ExternalError::Malformed("empty solver command".into()))?;
    let output = Command::new(program)
        .args(parts)
        .arg(path)
        .output()
        .map_err(|source| ExternalError::Spawn {
            cmd: cmd.to_string(),
            source,
        })?;
    import_external_result(&String::from_utf8_lossy(&output.stdout), cnf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cnf() -> Cnf {
        Cnf {
            num_vars: 2,
            clauses: vec![vec![1, -2]],
        }
    }

    #[test]
    fn unsat_status() {
        assert_eq!(
            import_external_result("s UNSATISFIABLE\n", &cnf()).unwrap(),
            SolveResult::Unsat
        );
    }

    #[test]
    fn model_lines() {
        let SolveResult::Sat(m) = import_external_result("c hi\ns SATISFIABLE\nv 1 -2 0\n", &cnf()).unwrap()
        else {
            panic!()
        };
        assert!(m.value(1));
        assert!(!m.value(2));
    }

    #[test]
    fn bad_model_is_rejected() {
        let err = import_external_result("s SATISFIABLE\nv -1 2 0\n", &cnf()).unwrap_err();
        assert!(matches!(err, ExternalError::BadModel(0)));
        assert!(import_external_result("v 1 0\n", &cnf()).is_err());
    }
}
