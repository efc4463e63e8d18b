//! How temporal operators become first-order formulas over an explicit
//! State signature, in both field idioms and with finite-trace semantics.

use lasso_bmc::embed::fo::show;
use lasso_bmc::embed::{EmbedOptions, Embedder, Idiom};
use lasso_bmc::lang::load_spec;

const SPEC: &str = "
    sig Node { var token : lone Node }
    assert Next { X some token }
    assert Always { G lone token }
    assert Eventually { F no token }
    assert Until { some token U no token }
    assert Release { no token R some token }
";

fn main() {
    let spec = load_spec(SPEC).unwrap();
    let modes = [
        ("local", EmbedOptions::default()),
        (
            "global",
            EmbedOptions {
                idiom: Idiom::Global,
                ..EmbedOptions::default()
            },
        ),
        (
            "local, finite traces",
            EmbedOptions {
                finite_traces: true,
                ..EmbedOptions::default()
            },
        ),
    ];
    for (label, opts) in modes {
        println!("== {label}");
        let mut e = Embedder::new(&spec, opts);
        for a in &spec.asserts {
            let fo = e.translate_positive(&a.formula);
            println!("{:<10} {}", a.name, spec.show(&a.formula));
            println!("{:<10} {}", "", show(&spec, &fo));
        }
        println!();
    }
}
