//! Atomic file output and CSV rows.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chyp::isometry::IsometryClass;
use chyp::linalg::C64;

/// Writes through a temporary sibling and renames it into place.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, &target).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(target)
}

pub const CSV_HEADER: &str = "alpha_or_word,trace_re,trace_im,goldman_f,class";

#[derive(Debug, Clone, serde::Serialize)]
pub struct TraceRow {
    pub alpha_or_word: String,
    pub trace_re: f64,
    pub trace_im: f64,
    pub goldman_f: f64,
    pub class: &'static str,
}

impl TraceRow {
    pub fn new(key: String, trace: C64, goldman_f: f64, class: IsometryClass) -> Self {
        Self { alpha_or_word: key, trace_re: trace.re, trace_im: trace.im, goldman_f, class: class.label() }
    }
}

pub fn trace_csv(rows: &[TraceRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{},{},{}\n", r.alpha_or_word, r.trace_re, r.trace_im, r.goldman_f, r.class));
    }
    out
}
