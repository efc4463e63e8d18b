//! Bounded model checking of LTL properties over relational state-transition
//! specifications.

pub mod alloy;
pub mod embed;
pub mod engine;
pub mod ground;
pub mod lang;
pub mod nnf;
pub mod oracle;
pub mod sat;
pub mod spec;
