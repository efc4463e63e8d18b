//! Export to Alloy: a small trace module plus the spec with its temporal
//! formulas already embedded, and a syntax checker for the result.

mod emit;
mod validate;

use std::io;
use std::path::{Path, PathBuf};

pub use emit::{emit_alloy_spec, emit_trace_module, escape_ident, ALLOY_KEYWORDS, TRACE_NAMES};
pub use validate::{validate_alloy, AlloySyntaxError};

use crate::embed::EmbedOptions;
use crate::spec::Spec;

/// Writes `trace.als` and `<module>.als` into `dir` and returns both paths.
pub fn export_alloy(spec: &Spec, module: &str, dir: &Path, opts: EmbedOptions) -> io::Result<[PathBuf; 2]> {
    std::fs::create_dir_all(dir)?;
    let trace = dir.join("trace.als");
    let body = dir.join(format!("{module}.als"));
    std::fs::write(&trace, emit_trace_module())?;
    std::fs::write(&body, emit_alloy_spec(spec, module, opts))?;
    Ok([trace, body])
}
