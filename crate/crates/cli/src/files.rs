use std::io::Write;
use std::path::Path;

use anyhow::Context;
use chrono::{DateTime, SecondsFormat, Utc};

use crate::error::CliError;

/// Writes through a temporary file in the target directory and renames it
/// into place, so `path` holds either its old content or the complete new
/// one.
pub fn atomic_write_with(
    path: &Path,
    write: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    write(tmp.as_file_mut())
        .and_then(|_| tmp.as_file_mut().sync_all())
        .with_context(|| format!("cannot write {}", path.display()))?;
    tmp.persist(path)
        .with_context(|| format!("cannot replace {}", path.display()))?;
    Ok(())
}

pub fn atomic_write(path: &Path, contents: &str) -> Result<(), CliError> {
    atomic_write_with(path, |w| w.write_all(contents.as_bytes()))
}

pub fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

/// RFC 3339 timestamp: the override if given, else `SOURCE_DATE_EPOCH`,
/// else the current time.
pub fn timestamp(explicit: Option<&str>) -> Result<String, CliError> {
    if let Some(t) = explicit {
        return Ok(t.to_string());
    }
    let now = match std::env::var("SOURCE_DATE_EPOCH") {
        Ok(v) => {
            let secs: i64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("invalid SOURCE_DATE_EPOCH `{v}`")))?;
            DateTime::<Utc>::from_timestamp(secs, 0)
                .ok_or_else(|| CliError::usage(format!("SOURCE_DATE_EPOCH out of range: {v}")))?
        }
        Err(_) => Utc::now(),
    };
    Ok(now.to_rfc3339_opts(SecondsFormat::Secs, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_write_leaves_target_untouched() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("graph.json");
        atomic_write(&path, "old\n").unwrap();
        let err = atomic_write_with(&path, |w| {
            w.write_all(b"partial")?;
            Err(std::io::Error::other("crash injected mid-write"))
        });
        assert!(err.is_err());
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "old\n");
        let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
        assert_eq!(leftovers, 1);

        let fresh = dir.path().join("new.json");
        let _ = atomic_write_with(&fresh, |w| {
            w.write_all(b"partial")?;
            Err(std::io::Error::other("crash"))
        });
        assert!(!fresh.exists());
    }

    #[test]
    fn explicit_timestamp_wins() {
        assert_eq!(timestamp(Some("t")).unwrap(), "t");
    }
}
