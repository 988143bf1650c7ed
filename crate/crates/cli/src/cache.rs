//! Content-addressed report cache. Entries are written once through a
//! temporary file and a hard link, so readers never see a partial entry and
//! an existing entry is never replaced.

use std::fs;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::{CliError, Report, Result};

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// SHA-256 of the tool version, subcommand and canonical parameters.
    pub fn key(tool_version: &str, params: &Value, subcommand: &str) -> String {
        let mut h = Sha256::new();
        h.update(tool_version.as_bytes());
        h.update([0]);
        h.update(subcommand.as_bytes());
        h.update([0]);
        h.update(serde_json::to_vec(params).expect("values serialize"));
        hex::encode(h.finalize())
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Result<Option<Report>> {
        match fs::read_to_string(self.path(key)) {
            Ok(s) => serde_json::from_str(&s)
                .map(Some)
                .map_err(|e| CliError::Invariant(format!("cache entry {key} is corrupt: {e}"))),
            Err(e) if e.kind() == ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Adds an entry unless one already exists under the key.
    pub fn store(&self, key: &str, report: &Report) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let target = self.path(key);
        if target.exists() {
            return Ok(());
        }
        let tmp = write_tmp(&self.dir, key, report.to_json().as_bytes())?;
        let linked = fs::hard_link(&tmp, &target);
        let _ = fs::remove_file(&tmp);
        match linked {
            Ok(()) => Ok(()),
            Err(e) if e.kind() == ErrorKind::AlreadyExists => Ok(()),
            Err(e) => Err(e.into()),
        }
    }
}

fn write_tmp(dir: &Path, stem: &str, bytes: &[u8]) -> Result<PathBuf> {
    let n = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
    let tmp = dir.join(format!(".{stem}.{}.{n}.tmp", std::process::id()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    Ok(tmp)
}

/// Replaces `path` atomically with `bytes`.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir)?;
    let stem = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    let tmp = write_tmp(&dir, stem, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
