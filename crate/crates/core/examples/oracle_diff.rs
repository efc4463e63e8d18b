//! Differential testing on random specs: the SAT pipeline and exhaustive
//! enumeration must agree on every random goal, run as a predicate on even
//! cases and checked as an assertion on odd ones.
//!
//! `cargo run --release --example oracle_diff -- 200` runs 200 cases.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lasso_bmc::engine::EngineOptions;
use lasso_bmc::oracle::random::{random_case, SpecShape};
use lasso_bmc::oracle::{diff_scope, EnumOptions, FidelityReport, DEFAULT_CAP};
use lasso_bmc::spec::CommandKind;

fn main() {
    let cases: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(50);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = EngineOptions::default();
    let (mut agree, mut sat) = (0, 0);
    let mut fidelity = FidelityReport::default();
    for i in 0..cases {
        let case = random_case(&mut rng, SpecShape::default(), EnumOptions::default());
        let kind = if i % 2 == 0 { CommandKind::Run } else { CommandKind::Check };
        let cmd = case.command(kind);
        let out = diff_scope(&case.spec, &cmd, case.k, &opts, DEFAULT_CAP, true).unwrap();
        if out.agrees() {
            agree += 1;
        } else {
            println!("case {i} disagrees:\n{}", case.source);
        }
        sat += usize::from(out.oracle);
        fidelity.merge(out.fidelity);
    }
    println!("{agree}/{cases} verdicts agree ({sat} with witnesses)");
    println!(
        "fidelity: {}/{} evaluations agree, {} until/release lasso notes",
        fidelity.agreed,
        fidelity.compared,
        fidelity.until_release_lasso.len()
    );
}
