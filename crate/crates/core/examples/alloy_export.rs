//! Exports the partition model to Alloy and runs the bundled syntax checker
//! on both files.

use lasso_bmc::alloy::{export_alloy, validate_alloy};
use lasso_bmc::embed::EmbedOptions;
use lasso_bmc::lang::load_spec;

fn main() {
    let spec = load_spec(include_str!("../corpus/pifp.spec")).unwrap();
    let dir = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("lasso-bmc-alloy"));
    let paths = export_alloy(&spec, "pifp", &dir, EmbedOptions::default()).unwrap();
    for path in paths {
        let text = std::fs::read_to_string(&path).unwrap();
        match validate_alloy(&text) {
            Ok(()) => println!("{}: ok ({} lines)", path.display(), text.lines().count()),
            Err(e) => println!("{}: {e}", path.display()),
        }
    }
    println!();
    print!("{}", std::fs::read_to_string(dir.join("pifp.als")).unwrap());
}
