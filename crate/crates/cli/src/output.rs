//! Output sinks and the provenance header shared by every file.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use ps_purify::conventions;
use serde_json::{json, Value};

use crate::config::RunConfig;

/// Bumped whenever a column or key changes.
pub const SCHEMA_VERSION: u32 = 1;

pub fn open(path: Option<&str>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Header line for CSV and text outputs (prefixed with `#`).
pub fn header_line(command: &str, cfg: &RunConfig) -> String {
    format!(
        "# ps-purify {} schema={SCHEMA_VERSION} command={command} config_sha256={} two_mode_db_rule={} conventions={}",
        env!("CARGO_PKG_VERSION"),
        cfg.hash(),
        cfg.two_mode_db_rule.as_str(),
        conventions::describe()
    )
}

/// The same information as a JSON object.
pub fn header_json(command: &str, cfg: &RunConfig) -> Value {
    json!({
        "tool": "ps-purify",
        "version": env!("CARGO_PKG_VERSION"),
        "schema": SCHEMA_VERSION,
        "command": command,
        "config_sha256": cfg.hash(),
        "two_mode_db_rule": cfg.two_mode_db_rule.as_str(),
        "conventions": conventions::describe(),
    })
}
