//! Command-line companion to `ael-core`: knowledge-base files, DIMACS and
//! QDIMACS-lite input, threaded kernel enumeration and report output.

pub mod formats;
pub mod output;
pub mod parallel;
pub mod selftest;

use std::fs;
use std::path::Path;

use ael_core::syntax::parse_kb;
use ael_core::KnowledgeBase;
use anyhow::{Context, Result};

/// Reads and parses a knowledge-base file, labelled with the file stem.
pub fn load_kb(path: &Path) -> Result<KnowledgeBase> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let kb = parse_kb(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(match path.file_stem().and_then(|s| s.to_str()) {
        Some(stem) => kb.with_label(stem),
        None => kb,
    })
}
