//! Append-only JSON-lines store of search results keyed by
//! `(p, cardinality, special)`.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::plane::{Point, PointSet};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "SPECDIR_CACHE_DIR";
pub const CACHE_FILE: &str = "search-cache.jsonl";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub p: u32,
    pub cardinality: u32,
    pub special: u32,
    /// `witness` or `orbit`.
    pub kind: String,
    pub method: String,
    pub points: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl CacheRecord {
    pub fn set(&self) -> Result<PointSet> {
        let p = Prime::new(self.p)?;
        PointSet::from_points(
            p,
            self.points
                .iter()
                .map(|&i| Point::from_index(p, i as usize)),
        )
    }

    /// The stored points have the recorded size and special count.
    pub fn verify(&self) -> bool {
        self.set().is_ok_and(|s| {
            s.len() as u32 == self.cardinality
                && s.special_directions().len() as u32 == self.special
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchCache {
    path: PathBuf,
}

impl SearchCache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(SearchCache {
            path: dir.as_ref().join(CACHE_FILE),
        })
    }

    /// The cache named by [`CACHE_ENV`], if set.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(CACHE_ENV) {
            Some(dir) if !dir.is_empty() => Self::open(dir).map(Some),
            _ => Ok(None),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn records(&self) -> Result<Vec<CacheRecord>> {
        let text = match fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| Error::Parse {
                    line: i + 1,
                    column: e.column(),
                    message: e.to_string(),
                })
            })
            .collect()
    }

    /// First record for the key that re-verifies.
    pub fn lookup(&self, p: u32, cardinality: u32, special: u32) -> Result<Option<CacheRecord>> {
        Ok(self.records()?.into_iter().find(|r| {
            r.p == p && r.cardinality == cardinality && r.special == special && r.verify()
        }))
    }

    pub fn append(&self, record: &CacheRecord) -> Result<()> {
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        let mut line = serde_json::to_string(record)?;
        line.push('\n');
        f.write_all(line.as_bytes())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SearchCache::open(dir.path()).unwrap();
        assert!(cache.lookup(5, 5, 4).unwrap().is_none());
        let rec = CacheRecord {
            p: 5,
            cardinality: 5,
            special: 4,
            kind: "witness".into(),
            method: "exhaustive".into(),
            points: vec![7, 11, 12, 13, 17],
            seed: None,
        };
        assert!(rec.verify());
        let mut bogus = rec.clone();
        bogus.special = 3;
        cache.append(&bogus).unwrap();
        cache.append(&rec).unwrap();
        assert_eq!(cache.records().unwrap().len(), 2);
        assert_eq!(cache.lookup(5, 5, 4).unwrap(), Some(rec));
        assert!(cache.lookup(5, 5, 3).unwrap().is_none());
    }
}
