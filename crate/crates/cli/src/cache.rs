//! Best-effort persistence of the subset count table.
//!
//! A missing or unreadable cache is never an error: the table is rebuilt
//! and a warning goes to stderr.

use std::path::PathBuf;

use vpf_core::cache;
use vpf_core::CountTable;

const FILE: &str = "counts-v1.txt";

/// `$XDG_CACHE_HOME/vpf/counts-v1.txt`, else `$HOME/.cache/vpf/counts-v1.txt`.
pub fn default_path() -> Option<PathBuf> {
    let from = |var: &str| {
        std::env::var_os(var)
            .map(PathBuf::from)
            .filter(|p| p.is_absolute())
    };
    let base = from("XDG_CACHE_HOME").or_else(|| from("HOME").map(|h| h.join(".cache")))?;
    Some(base.join("vpf").join(FILE))
}

pub struct CachedTable {
    path: Option<PathBuf>,
    stored: usize,
    pub table: CountTable,
}

impl CachedTable {
    pub fn open(path: Option<PathBuf>) -> Self {
        let table = match path.as_deref().map(cache::load) {
            Some(Ok(Some(table))) => table,
            Some(Err(e)) => {
                eprintln!("vpf: warning: ignoring count cache: {e}");
                CountTable::new()
            }
            _ => CountTable::new(),
        };
        Self {
            path,
            stored: table.max_len(),
            table,
        }
    }

    /// Writes the table back if it grew.
    pub fn persist(self) {
        let Some(path) = self.path else { return };
        if self.table.max_len() <= self.stored {
            return;
        }
        if let Err(e) = cache::save(&self.table, &path) {
            eprintln!(
                "vpf: warning: could not write count cache {}: {e}",
                path.display()
            );
        }
    }
}
