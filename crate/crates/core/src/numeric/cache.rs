//! Append-only cache of evaluated t-values keyed by
//! (modulus, residue, index, precision, tolerance).
//!
//! File format: one record per line, `N:a:index:P:tol value err`, all decimal
//! strings. Corrupt lines are skipped with a warning and never poison the
//! rest of the file.

use std::collections::HashMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::bigreal::BigReal;
use crate::index::Index;
use crate::level::Level;

/// Identity of one cached evaluation. `star` marks the weak-inequality
/// variant of the nested sum.
#[derive(Debug, Clone, PartialEq)]
pub struct CacheKey {
    pub modulus: u64,
    pub residue: u64,
    pub index: Index,
    pub star: bool,
    pub precision: u32,
    pub tol: f64,
}

impl CacheKey {
    pub fn new(level: &Level, index: &Index, star: bool, precision: u32, tol: f64) -> Self {
        CacheKey {
            modulus: level.modulus().into(),
            residue: level.residue().into(),
            index: index.clone(),
            star,
            precision,
            tol,
        }
    }
}

impl fmt::Display for CacheKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}{}:{}:{:e}",
            self.modulus,
            self.residue,
            self.index,
            if self.star { "*" } else { "" },
            self.precision,
            self.tol
        )
    }
}

/// Shared, optionally file-backed value store. All access goes through one
/// lock so records are read and written whole.
pub struct ValueCache {
    path: Option<PathBuf>,
    state: Mutex<HashMap<String, (String, f64)>>,
}

impl ValueCache {
    /// Purely in-memory cache.
    pub fn in_memory() -> Self {
        ValueCache {
            path: None,
            state: Mutex::new(HashMap::new()),
        }
    }

    /// File-backed cache; an existing file is loaded, unreadable lines are
    /// skipped with a warning on stderr.
    pub fn at_path(path: &Path) -> std::io::Result<Self> {
        let mut map = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(path)?);
            for (lineno, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match parse_line(&line) {
                    Some((key, value, err)) => {
                        map.insert(key, (value, err));
                    }
                    None => {
                        eprintln!(
                            "warning: skipping corrupt cache line {} in {}",
                            lineno + 1,
                            path.display()
                        );
                    }
                }
            }
        }
        Ok(ValueCache {
            path: Some(path.to_path_buf()),
            state: Mutex::new(map),
        })
    }

    pub fn len(&self) -> usize {
        self.state.lock().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn get(&self, key: &CacheKey) -> Option<BigReal> {
        let state = self.state.lock().expect("cache lock poisoned");
        let (text, err) = state.get(&key.to_string())?;
        let value = BigReal::from_decimal_str(text).ok()?;
        Some(value.with_err_added(*err))
    }

    /// Records a value; file-backed caches append the record inside the same
    /// lock so concurrent writers cannot interleave partial lines.
    pub fn put(&self, key: &CacheKey, value: &BigReal) -> std::io::Result<()> {
        let digits = key.precision + 6;
        let text = value.to_string_digits(digits);
        // The stored text is rounded to `digits` places; widen the recorded
        // bound so reloaded values stay certified.
        let err = value.err() + 10f64.powi(-(digits as i32));
        let mut state = self.state.lock().expect("cache lock poisoned");
        let line = format!("{key} {text} {err:e}");
        if let Some(path) = &self.path {
            let mut file = OpenOptions::new().create(true).append(true).open(path)?;
            writeln!(file, "{line}")?;
        }
        state.insert(key.to_string(), (text, err));
        Ok(())
    }

    /// Drops every record, truncating the backing file if any.
    pub fn clear(&self) -> std::io::Result<()> {
        let mut state = self.state.lock().expect("cache lock poisoned");
        if let Some(path) = &self.path {
            if path.exists() {
                File::create(path)?;
            }
        }
        state.clear();
        Ok(())
    }
}

/// Splits `N:a:index:P:tol value err`; returns the raw key and parsed payload.
fn parse_line(line: &str) -> Option<(String, String, f64)> {
    let mut fields = line.split_whitespace();
    let key = fields.next()?;
    let value = fields.next()?;
    let err = fields.next()?;
    if fields.next().is_some() || key.split(':').count() != 5 {
        return None;
    }
    BigReal::from_decimal_str(value).ok()?;
    let err: f64 = err.parse().ok()?;
    if !err.is_finite() || err < 0.0 {
        return None;
    }
    Some((key.to_string(), value.to_string(), err))
}
