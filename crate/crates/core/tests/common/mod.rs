#![allow(dead_code)]

pub mod hyperdual;
pub mod mesh_checks;
pub mod oracle;
pub mod props;

/// Outcome of one check: a detail line either way.
pub type Check = Result<String, String>;
