//! Checks the partition message-passing model: Safety fails because a
//! partition may send to itself through its own port, and holds once every
//! partition is allowed to talk to itself.

use lasso_bmc::engine::{run_command, EngineOptions};
use lasso_bmc::lang::load_spec;
use lasso_bmc::spec::CommandKind;

fn check(source: &str, name: &str) -> i32 {
    let spec = load_spec(source).expect("corpus specs load");
    let cmd = spec
        .commands
        .iter()
        .find(|c| c.kind == CommandKind::Check && c.target == name)
        .expect("command present");
    let verdict = run_command(&spec, cmd, &EngineOptions::default()).expect("engine runs");
    print!("{}", verdict.report(&spec).to_text());
    verdict.exit_code()
}

fn main() {
    println!("== pifp.spec, check Safety");
    let code = check(include_str!("../corpus/pifp.spec"), "Safety");
    println!("exit {code}\n");

    println!("== pifp_fixed.spec, check Safety");
    let code = check(include_str!("../corpus/pifp_fixed.spec"), "Safety");
    println!("exit {code}");
}
