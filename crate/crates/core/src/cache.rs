//! Persistence for the subset count table.
//!
//! The file is plain text:
//!
//! ```text
//! vpf-count-cache v1
//! paren <n> <i> <count>
//! bracket <n> <i> <count>
//! total <n> 0 <count>
//! ...
//! checksum sha256 <hex digest of every preceding byte>
//! ```
//!
//! Rows appear for every length from 1 upward. A file that fails the
//! checksum, the layout, the initial conditions or a recomputation of its
//! last row is rejected as a whole; the counts can always be rebuilt.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use num_bigint::BigUint;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::recurrence::{CountTable, Row, INITIAL_CONDITIONS};

pub const HEADER: &str = "vpf-count-cache v1";

/// Serializes every computed row of `table`.
pub fn to_text(table: &CountTable) -> String {
    let mut body = String::new();
    body.push_str(HEADER);
    body.push('\n');
    for (idx, row) in table.rows().iter().enumerate() {
        let n = idx + 1;
        for (i, count) in row.paren.iter().enumerate() {
            let _ = writeln!(body, "paren {n} {} {count}", i + 1);
        }
        for (i, count) in row.bracket.iter().enumerate() {
            let _ = writeln!(body, "bracket {n} {} {count}", i + 1);
        }
        let _ = writeln!(body, "total {n} 0 {}", row.total);
    }
    let digest = hex::encode(Sha256::digest(body.as_bytes()));
    let _ = writeln!(body, "checksum sha256 {digest}");
    body
}

/// Parses and validates a cache file.
pub fn from_text(text: &str) -> Result<CountTable> {
    let reject = |msg: String| Error::Cache(msg);

    let body_end = text
        .trim_end_matches('\n')
        .rfind('\n')
        .map(|pos| pos + 1)
        .ok_or_else(|| reject("missing checksum line".into()))?;
    let (body, trailer) = text.split_at(body_end);
    let digest = trailer
        .trim_end()
        .strip_prefix("checksum sha256 ")
        .ok_or_else(|| reject("missing checksum line".into()))?;
    if hex::encode(Sha256::digest(body.as_bytes())) != digest {
        return Err(reject("checksum mismatch".into()));
    }

    let mut lines = body.lines();
    if lines.next() != Some(HEADER) {
        return Err(reject("unknown header".into()));
    }

    let mut rows: Vec<Row> = Vec::new();
    let mut paren: Vec<BigUint> = Vec::new();
    let mut bracket: Vec<BigUint> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let bad = |what: &str| reject(format!("line {}: {what}", lineno + 2));
        let fields: Vec<&str> = line.split(' ').collect();
        let [family, n, i, count] = fields[..] else {
            return Err(bad("expected four fields"));
        };
        let n: usize = n.parse().map_err(|_| bad("bad length"))?;
        let i: usize = i.parse().map_err(|_| bad("bad index"))?;
        if count.is_empty() || !count.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("count is not a decimal integer"));
        }
        let count: BigUint = count.parse().map_err(|_| bad("bad count"))?;
        if n != rows.len() + 1 {
            return Err(bad("rows out of order"));
        }
        match family {
            "paren" if bracket.is_empty() && i == paren.len() + 1 && i <= n => paren.push(count),
            "bracket" if paren.len() == n && i == bracket.len() + 1 => bracket.push(count),
            "total" if i == 0 && bracket.len() == n => {
                let row = Row::new(std::mem::take(&mut paren), std::mem::take(&mut bracket));
                if row.total != count {
                    return Err(bad("total disagrees with its row"));
                }
                rows.push(row);
            }
            _ => return Err(bad("unexpected record")),
        }
    }
    if !paren.is_empty() || !bracket.is_empty() {
        return Err(reject("truncated final row".into()));
    }

    for &(n, i, p, b) in INITIAL_CONDITIONS.iter() {
        if let Some(row) = rows.get(n - 1) {
            if row.paren[i - 1] != BigUint::from(p) || row.bracket[i - 1] != BigUint::from(b) {
                return Err(reject(format!(
                    "initial condition ({n}, {i}) does not match"
                )));
            }
        }
    }
    if rows.len() >= 3 {
        let n = rows.len();
        let prefix = CountTable::from_rows(rows[..n - 1].to_vec());
        if prefix.compute_row(n) != rows[n - 1] {
            return Err(reject(format!("row {n} does not follow from earlier rows")));
        }
    }
    Ok(CountTable::from_rows(rows))
}

/// Loads `path`; a missing file yields `Ok(None)`.
pub fn load(path: &Path) -> Result<Option<CountTable>> {
    match fs::read_to_string(path) {
        Ok(text) => from_text(&text).map(Some),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(Error::Cache(format!("{}: {e}", path.display()))),
    }
}

/// Writes `table` to `path` through a temporary sibling file.
pub fn save(table: &CountTable, path: &Path) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, to_text(table))?;
    fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n: usize) -> CountTable {
        let mut t = CountTable::new();
        t.ensure(n);
        t
    }

    #[test]
    fn text_round_trip() {
        let mut original = table(12);
        let mut loaded = from_text(&to_text(&original)).unwrap();
        assert_eq!(loaded.max_len(), 12);
        for n in 1..=12 {
            assert_eq!(loaded.vpf_total(n), original.vpf_total(n));
        }
        // extending a loaded table continues the same sequence
        assert_eq!(loaded.vpf_total(20), original.vpf_total(20));
        assert!(from_text(&to_text(&CountTable::new())).unwrap().max_len() == 0);
    }

    #[test]
    fn tampering_is_rejected() {
        let text = to_text(&table(6));
        let flipped = text.replacen("paren 4 1 36", "paren 4 1 37", 1);
        assert_ne!(flipped, text);
        assert!(matches!(from_text(&flipped), Err(Error::Cache(msg)) if msg.contains("checksum")));

        let truncated: String = text.lines().take(5).map(|l| format!("{l}\n")).collect();
        assert!(from_text(&truncated).is_err());
        assert!(from_text("").is_err());
    }

    #[test]
    fn consistent_checksum_but_wrong_counts_is_rejected() {
        let text = to_text(&table(5));
        let body_end = text.trim_end_matches('\n').rfind('\n').unwrap() + 1;
        let body = text[..body_end]
            .replacen("paren 5 1 244", "paren 5 1 245", 1)
            .replacen("total 5 0 1136", "total 5 0 1137", 1);
        let digest = hex::encode(Sha256::digest(body.as_bytes()));
        let forged = format!("{body}checksum sha256 {digest}\n");
        assert!(matches!(from_text(&forged), Err(Error::Cache(msg)) if msg.contains("row 5")));
    }

    #[test]
    fn files_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested").join("counts.txt");
        assert!(load(&path).unwrap().is_none());
        save(&table(8), &path).unwrap();
        let mut loaded = load(&path).unwrap().unwrap();
        assert_eq!(loaded.vpf_total(8), 1827775u32.into());
        std::fs::write(&path, "garbage").unwrap();
        assert!(load(&path).is_err());
    }
}
