use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use diu_core::trace::OperationSequence;
use serde::{Deserialize, Serialize};

pub struct Ctx {
    pub out_dir: PathBuf,
}

impl Ctx {
    /// `explicit` if given, otherwise `name` inside the output directory.
    pub fn out_path(&self, explicit: Option<PathBuf>, name: &str) -> PathBuf {
        explicit.unwrap_or_else(|| self.out_dir.join(name))
    }
}

pub enum CliError {
    Core(diu_core::Error),
    /// A check the command performs failed.
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Core(diu_core::Error::Io(_)) => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Violation(msg) => write!(f, "invariant violation: {msg}"),
        }
    }
}

impl<E: Into<diu_core::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Core(e.into())
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

pub fn config(msg: impl Into<String>) -> CliError {
    CliError::Core(diu_core::Error::Config(msg.into()))
}

/// Sizes recorded next to a generated trace in `<trace>.meta.json`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TraceMeta {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub b: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub seed: u64,
    pub ops: usize,
    #[serde(flatten)]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

pub fn meta_path(trace: &Path) -> PathBuf {
    let mut s = trace.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

pub fn read_meta(trace: &Path) -> CliResult<Option<TraceMeta>> {
    let path = meta_path(trace);
    if !path.exists() {
        return Ok(None);
    }
    let meta = serde_json::from_reader(BufReader::new(open(&path)?))
        .map_err(|e| config(format!("{}: {e}", path.display())))?;
    Ok(Some(meta))
}

pub fn open(path: &Path) -> CliResult<File> {
    File::open(path).map_err(|e| {
        CliError::Core(diu_core::Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
    })
}

pub fn create(path: &Path) -> CliResult<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let f = File::create(path).map_err(|e| {
        CliError::Core(diu_core::Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
    })?;
    Ok(BufWriter::new(f))
}

pub fn read_trace(path: &Path) -> CliResult<OperationSequence> {
    Ok(OperationSequence::read_jsonl(BufReader::new(open(path)?))?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(std::io::Error::from)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn print_json<T: Serialize>(value: &T) -> CliResult {
    let s = serde_json::to_string_pretty(value).map_err(std::io::Error::from)?;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{s}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}
