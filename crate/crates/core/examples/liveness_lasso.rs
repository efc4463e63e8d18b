//! Liveness of the guarded model under two trace semantics. Over plain
//! finite prefixes the checker reports a spurious counterexample that ends
//! right after a send; with lasso traces the message is always delivered.

use lasso_bmc::embed::EmbedOptions;
use lasso_bmc::engine::{run_command, EngineOptions};
use lasso_bmc::lang::load_spec;

fn main() {
    let spec = load_spec(include_str!("../corpus/pifp_guarded.spec")).unwrap();
    let cmd = spec.commands.iter().find(|c| c.target == "Liveness").unwrap();
    for finite_traces in [true, false] {
        let opts = EngineOptions {
            embed: EmbedOptions {
                finite_traces,
                ..EmbedOptions::default()
            },
            ..EngineOptions::default()
        };
        let v = run_command(&spec, cmd, &opts).unwrap();
        println!("== finite_traces = {finite_traces}");
        print!("{}", v.report(&spec).to_text());
        println!();
    }
}
