use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use nosol_core::{Certificate, Equation};
use serde::Serialize;

/// Input could not be understood: exit 64.
#[derive(Debug)]
pub struct Malformed(pub String);

impl std::fmt::Display for Malformed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Malformed {}

pub fn malformed(msg: impl Into<String>) -> anyhow::Error {
    Malformed(msg.into()).into()
}

pub fn parse_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| malformed(format!("not an integer: {t:?}"))))
        .collect()
}

/// `--sym a,b,c` or `--eq c1,...,cm`.
pub fn equation(sym: Option<&str>, eq: Option<&str>) -> Result<Equation> {
    let parsed = match (sym, eq) {
        (Some(s), None) => nosol_core::make_symmetric(&parse_list(s)?),
        (None, Some(e)) => Equation::new(parse_list(e)?),
        _ => return Err(malformed("give exactly one of --sym or --eq")),
    };
    parsed.map_err(|e| malformed(e.to_string()))
}

/// One decimal integer per line; blank lines and `#` comments are skipped.
pub fn read_set_file(path: &Path) -> Result<Vec<i64>> {
    let text = fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(
            t.parse::<i64>()
                .map_err(|_| malformed(format!("{}:{}: not an integer: {t:?}", path.display(), n + 1)))?,
        );
    }
    Ok(out)
}

pub fn read_certificate(path: &Path) -> Result<Certificate> {
    let text = fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    Certificate::from_json(&text).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn write_lines(path: &Path, values: impl Iterator<Item = i64>) -> Result<()> {
    let mut buf = String::new();
    for v in values {
        buf.push_str(&v.to_string());
        buf.push('\n');
    }
    write_atomic(path, buf.as_bytes())
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command_line: Vec<String>,
    pub config: serde_json::Value,
    pub wall_time_ms: u128,
    pub budget: u64,
    pub nodes_used: u64,
    pub exit_code: i32,
    pub certificates: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
}

/// Collects what a run produced; written once at the end.
pub struct Run {
    start: Instant,
    pub budget: u64,
    pub nodes_used: u64,
    pub config: serde_json::Value,
    pub certificates: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub manifest: Option<PathBuf>,
}

impl Run {
    pub fn new(budget: u64, manifest: Option<PathBuf>) -> Self {
        Run {
            start: Instant::now(),
            budget,
            nodes_used: 0,
            config: serde_json::Value::Null,
            certificates: Vec::new(),
            outputs: Vec::new(),
            manifest,
        }
    }

    pub fn save_certificate(&mut self, path: &Path, cert: &Certificate) -> Result<()> {
        if self.certificates.iter().any(|p| p == path) {
            bail!("certificate path {} used twice", path.display());
        }
        write_atomic(path, (cert.to_json() + "\n").as_bytes())?;
        self.certificates.push(path.to_path_buf());
        if self.manifest.is_none() {
            let mut m = path.as_os_str().to_owned();
            m.push(".manifest.json");
            self.manifest = Some(PathBuf::from(m));
        }
        Ok(())
    }

    pub fn save_output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    pub fn finish(self, exit_code: i32) -> Result<()> {
        let Some(path) = self.manifest.clone() else {
            return Ok(());
        };
        let m = RunManifest {
            schema: 1,
            tool: "nosol",
            version: env!("CARGO_PKG_VERSION"),
            command_line: std::env::args().collect(),
            config: self.config,
            wall_time_ms: self.start.elapsed().as_millis(),
            budget: self.budget,
            nodes_used: self.nodes_used,
            exit_code,
            certificates: self.certificates,
            outputs: self.outputs,
        };
        write_json(&path, &m)
    }
}
