//! Negation normal form and the prefix problem: on a lasso `not G p` and
//! `F not p` agree, but on a loop-free prefix where `p` always holds the
//! first is true (the prefix might continue with `not p`) and the second is
//! false.

use lasso_bmc::ground::{build_universe, command_scopes};
use lasso_bmc::lang::load_spec;
use lasso_bmc::nnf::nnf;
use lasso_bmc::oracle::{eval_ltl_lasso, TraceInstance};

const SPEC: &str = "
    sig Light { var on : set Light }
    assert NotAlways { not G some on }
    assert EventuallyOff { F not some on }
    assert Mixed { not (some on U (X no on)) }
    check NotAlways scope exactly 1 Light, 2 State
";

fn main() {
    let spec = load_spec(SPEC).unwrap();
    for a in &spec.asserts {
        println!("{:<14} {}  ~>  {}", a.name, spec.show(&a.formula), spec.show(&nnf(&a.formula)));
    }

    // one light, lit in both states, no loop
    let cmd = &spec.commands[0];
    let u = build_universe(&spec, &command_scopes(&spec, cmd), 2).unwrap();
    let mut t = TraceInstance::empty(&spec, u, None);
    let light = t.atoms_of(spec.sig_id("Light").unwrap()).next().unwrap();
    for i in 0..2 {
        t.value_mut(spec.field_id("on").unwrap(), i).insert(vec![light, light]);
    }
    let not_g = spec.assertion("NotAlways").unwrap();
    let f_not = spec.assertion("EventuallyOff").unwrap();
    println!("\nloop-free prefix, light always on:");
    println!("  not G some on  = {}", eval_ltl_lasso(not_g, &t, 0));
    println!("  F not some on  = {}", eval_ltl_lasso(f_not, &t, 0));

    t.loop_to = Some(0);
    println!("same states closed into a lasso:");
    println!("  not G some on  = {}", eval_ltl_lasso(not_g, &t, 0));
    println!("  F not some on  = {}", eval_ltl_lasso(f_not, &t, 0));
}
