//! DIMACS CNF text.

use std::fmt::Write;

use super::Cnf;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DimacsError {
    #[error("line {0}: missing or malformed `p cnf` header")]
    Header(usize),
    #[error("line {0}: bad literal `{1}`")]
    Literal(usize, String),
    #[error("literal {0} exceeds the declared {1} variables")]
    OutOfRange(i32, u32),
    #[error("header declares {0} clauses, found {1}")]
    ClauseCount(usize, usize),
}

/// `p cnf V C` followed by one zero-terminated clause per line.
pub fn export_dimacs(cnf: &Cnf) -> String {
    let mut out = format!("p cnf {} {}\n", cnf.num_vars, cnf.clauses.len());
    for c in &cnf.clauses {
        for l in c {
            write!(out, "{l} ").expect("writing to a String");
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<Cnf, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["p", "cnf", v, c] => {
                    let v = v.parse().map_err(|_| DimacsError::Header(i + 1))?;
                    let c = c.parse().map_err(|_| DimacsError::Header(i + 1))?;
                    header = Some((v, c));
                }
                _ => return Err(DimacsError::Header(i + 1)),
            }
            continue;
        }
        let (nv, _) = header.ok_or(DimacsError::Header(i + 1))?;
        for tok in line.split_whitespace() {
            let l: i32 = tok
                .parse()
                .map_err(|_| DimacsError::Literal(i + 1, tok.to_string()))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() > nv {
                return Err(DimacsError::OutOfRange(l, nv));
            } else {
                current.push(l);
            }
        }
    }
    let (num_vars, count) = header.ok_or(DimacsError::Header(1))?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != count {
        return Err(DimacsError::ClauseCount(count, clauses.len()));
    }
    Ok(Cnf { num_vars, clauses })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format() {
        let c = Cnf {
            num_vars: 2,
            clauses: vec![vec![1, -2]],
        };
        assert_eq!(export_dimacs(&c), "p cnf 2 1\n1 -2 0\n");
        let empty = Cnf {
            num_vars: 5,
            clauses: vec![],
        };
        assert_eq!(export_dimacs(&empty), "p cnf 5 0\n");
    }

    #[test]
    fn round_trip() {
        let c = Cnf {
            num_vars: 3,
            clauses: vec![vec![1, -2], vec![3], vec![]],
        };
        assert_eq!(parse_dimacs(&export_dimacs(&c)).unwrap(), c);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(parse_dimacs("1 0\n").is_err());
    }
}
