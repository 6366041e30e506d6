//! Persistent transposition cache in the SNC1 format.
//!
//! Layout: the magic bytes `SNC1`, then records of
//! `[u32 LE key length][key bytes][i16 LE value]`. Values are mover-relative
//! differentials of the position the canonical key describes. Files only
//! grow; [`compact`] rewrites one with duplicates removed.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use snc_core::CanonicalKey;
use thiserror::Error;

use crate::parallel::SharedTable;

pub const MAGIC: &[u8; 4] = b"SNC1";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path} is not an SNC1 cache (magic {found:?})")]
    BadMagic { path: PathBuf, found: Vec<u8> },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CacheError + '_ {
    move |source| CacheError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheRecord {
    pub key: CanonicalKey,
    pub value: i16,
}

/// Outcome of reading a cache file.
#[derive(Debug, Default)]
pub struct Loaded {
    pub records: Vec<CacheRecord>,
    /// Length of the valid prefix, magic included.
    pub valid_len: u64,
    /// Bytes after the last complete record.
    pub truncated_bytes: usize,
    /// Complete records whose key or value failed validation.
    pub rejected: usize,
}

pub fn encode_record(out: &mut Vec<u8>, key: &CanonicalKey, value: i16) {
    let bytes = key.as_bytes();
    out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
    out.extend_from_slice(bytes);
    out.extend_from_slice(&value.to_le_bytes());
}

fn plausible(key: &CanonicalKey, value: i16) -> bool {
    let n = key.vertex_count() as i32;
    let v = value as i32;
    v.abs() <= n && (n - v) % 2 == 0
}

/// Decodes a whole file image. Only a wrong magic is fatal.
pub fn decode(path: &Path, bytes: &[u8]) -> Result<Loaded, CacheError> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(CacheError::BadMagic {
            path: path.to_path_buf(),
            found: bytes[..bytes.len().min(4)].to_vec(),
        });
    }
    let mut loaded = Loaded::default();
    let mut at = 4;
    loop {
        let rest = &bytes[at..];
        if rest.len() < 4 {
            break;
        }
        let len = u32::from_le_bytes(rest[..4].try_into().unwrap()) as usize;
        let Some(total) = len.checked_add(6).filter(|&t| t <= rest.len()) else {
            break;
        };
        let key_bytes = &rest[4..4 + len];
        let value = i16::from_le_bytes([rest[4 + len], rest[5 + len]]);
        match CanonicalKey::from_bytes(key_bytes) {
            Ok(key) if plausible(&key, value) => loaded.records.push(CacheRecord { key, value }),
            _ => loaded.rejected += 1,
        }
        at += total;
    }
    loaded.valid_len = at as u64;
    loaded.truncated_bytes = bytes.len() - at;
    Ok(loaded)
}

pub fn load(path: &Path) -> Result<Loaded, CacheError> {
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(io_err(path))?;
    let loaded = decode(path, &bytes)?;
    if loaded.truncated_bytes > 0 {
        log::warn!(
            "{}: dropped {} byte(s) of incomplete trailing record",
            path.display(),
            loaded.truncated_bytes
        );
    }
    if loaded.rejected > 0 {
        log::warn!("{}: skipped {} invalid record(s)", path.display(), loaded.rejected);
    }
    Ok(loaded)
}

/// Writes a fresh file holding exactly `records`, replacing any old one.
pub fn save(path: &Path, records: &[(CanonicalKey, i16)]) -> Result<(), CacheError> {
    let mut bytes = MAGIC.to_vec();
    for (k, v) in records {
        encode_record(&mut bytes, k, *v);
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, &bytes).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

/// An open cache: what it held at load time plus an appender.
pub struct CacheFile {
    path: PathBuf,
    pub loaded: Loaded,
}

impl CacheFile {
    /// Loads `path`, creating an empty cache if it does not exist. A
    /// truncated tail is cut off so later appends start on a record boundary.
    pub fn open(path: &Path) -> Result<Self, CacheError> {
        let loaded = if path.exists() {
            let loaded = load(path)?;
            if loaded.truncated_bytes > 0 {
                OpenOptions::new()
                    .write(true)
                    .open(path)
                    .and_then(|f| f.set_len(loaded.valid_len))
                    .map_err(io_err(path))?;
            }
            loaded
        } else {
            fs::write(path, MAGIC).map_err(io_err(path))?;
            Loaded {
                valid_len: 4,
                ..Loaded::default()
            }
        };
        Ok(CacheFile {
            path: path.to_path_buf(),
            loaded,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Seeds `table` with every loaded record.
    pub fn fill(&self, table: &SharedTable) {
        for r in &self.loaded.records {
            table.insert_persisted(r.key.clone(), r.value);
        }
    }

    pub fn append(&mut self, records: &[(CanonicalKey, i16)]) -> Result<(), CacheError> {
        if records.is_empty() {
            return Ok(());
        }
        let mut bytes = Vec::new();
        for (k, v) in records {
            encode_record(&mut bytes, k, *v);
        }
        let mut f = OpenOptions::new().append(true).open(&self.path).map_err(io_err(&self.path))?;
        f.write_all(&bytes).and_then(|_| f.sync_data()).map_err(io_err(&self.path))?;
        self.loaded.valid_len += bytes.len() as u64;
        Ok(())
    }

    /// Appends every exact table entry not yet on disk.
    pub fn persist(&mut self, table: &SharedTable) -> Result<usize, CacheError> {
        let fresh = table.take_unpersisted();
        self.append(&fresh)?;
        Ok(fresh.len())
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct CompactReport {
    pub records_before: usize,
    pub records_after: usize,
    pub bytes_dropped: usize,
}

/// Rewrites `path` keeping one record per key, sorted by key.
pub fn compact(path: &Path) -> Result<CompactReport, CacheError> {
    let loaded = load(path)?;
    let before = loaded.records.len();
    let unique: BTreeMap<CanonicalKey, i16> = loaded.records.into_iter().map(|r| (r.key, r.value)).collect();
    let records: Vec<(CanonicalKey, i16)> = unique.into_iter().collect();
    save(path, &records)?;
    Ok(CompactReport {
        records_before: before,
        records_after: records.len(),
        bytes_dropped: loaded.truncated_bytes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use snc_core::{canonical_key, generate, FamilySpec, LoopyMultigraph, SolveOptions};

    fn sample(n: usize) -> Vec<(CanonicalKey, i16)> {
        let mut out = BTreeMap::new();
        let mut i = 0u32;
        while out.len() < n {
            // paths with a loop at one end: distinct classes, odd vertex count parity varies
            let len = i % 40 + 1;
            let mut g = LoopyMultigraph::from_edges((0..len).map(|x| (x, x + 1)));
            g.add_edges(0, 0, i / 40 + 1);
            let k = canonical_key(&g);
            let v = (k.vertex_count() as i16) - 2 * ((i % 3) as i16).min(k.vertex_count() as i16 / 2);
            out.insert(k, v);
            i += 1;
        }
        out.into_iter().collect()
    }

    #[test]
    fn round_trip_thousand_records() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.snc");
        let recs = sample(1000);
        save(&path, &recs).unwrap();
        let loaded = load(&path).unwrap();
        let got: Vec<_> = loaded.records.into_iter().map(|r| (r.key, r.value)).collect();
        assert_eq!(got, recs);
        assert_eq!(loaded.truncated_bytes, 0);
        assert_eq!(loaded.rejected, 0);
    }

    #[test]
    fn exact_byte_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.snc");
        let k = canonical_key(&LoopyMultigraph::from_edges([(0, 0)]));
        save(&path, &[(k.clone(), 1)]).unwrap();
        let bytes = fs::read(&path).unwrap();
        let mut want = b"SNC1".to_vec();
        want.extend_from_slice(&8u32.to_le_bytes());
        want.extend_from_slice(&[1, 0, 0, 0, 0, 0, 1, 0]);
        want.extend_from_slice(&1i16.to_le_bytes());
        assert_eq!(bytes, want);
        assert_eq!(k.as_bytes(), &[1, 0, 0, 0, 0, 0, 1, 0]);
    }

    #[test]
    fn wrong_magic_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.snc");
        fs::write(&path, b"SNC2\0\0\0\0").unwrap();
        assert!(matches!(load(&path), Err(CacheError::BadMagic { .. })));
        fs::write(&path, b"SN").unwrap();
        assert!(matches!(CacheFile::open(&path), Err(CacheError::BadMagic { .. })));
    }

    #[test]
    fn truncated_tail_is_dropped_and_repaired() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.snc");
        let recs = sample(10);
        save(&path, &recs).unwrap();
        let mut bytes = fs::read(&path).unwrap();
        let full = bytes.len();
        bytes.truncate(full - 3);
        fs::write(&path, &bytes).unwrap();
        let loaded = load(&path).unwrap();
        assert_eq!(loaded.records.len(), 9);
        assert!(loaded.truncated_bytes > 0);

        let mut file = CacheFile::open(&path).unwrap();
        assert_eq!(file.loaded.records.len(), 9);
        file.append(&recs[9..]).unwrap();
        let again = load(&path).unwrap();
        assert_eq!(again.records.len(), 10);
        assert_eq!(again.truncated_bytes, 0);
    }

    #[test]
    fn invalid_records_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.snc");
        let k = canonical_key(&generate(&FamilySpec::Cycle(3)).unwrap());
        let mut bytes = MAGIC.to_vec();
        encode_record(&mut bytes, &k, -3);
        encode_record(&mut bytes, &k, 2); // wrong parity
        bytes.extend_from_slice(&3u32.to_le_bytes());
        bytes.extend_from_slice(&[9, 9, 9, 0, 0]); // bad framing inside the key
        fs::write(&path, &bytes).unwrap();
        let loaded = load(&path).unwrap();
        assert_eq!(loaded.records.len(), 1);
        assert_eq!(loaded.rejected, 2);
    }

    #[test]
    fn compaction_dedupes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.snc");
        let recs = sample(20);
        let mut file = CacheFile::open(&path).unwrap();
        file.append(&recs).unwrap();
        file.append(&recs[..5]).unwrap();
        let rep = compact(&path).unwrap();
        assert_eq!((rep.records_before, rep.records_after), (25, 20));
        assert_eq!(load(&path).unwrap().records.len(), 20);
    }

    #[test]
    fn persisted_entries_reload_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.snc");
        let table = SharedTable::new();
        let g = generate(&FamilySpec::Wheel(5)).unwrap();
        let mut s = snc_core::Solver::with_table(SolveOptions::default(), &table);
        s.solve(&g).unwrap();
        let mut file = CacheFile::open(&path).unwrap();
        let written = file.persist(&table).unwrap();
        assert!(written > 0);
        assert_eq!(file.persist(&table).unwrap(), 0);
        let reloaded = CacheFile::open(&path).unwrap();
        assert_eq!(reloaded.loaded.records.len(), written);
        for r in reloaded.loaded.records.iter().step_by(7) {
            let v = snc_core::Solver::new(SolveOptions::default()).value(&r.key.to_graph()).unwrap();
            assert_eq!(v, r.value as i32);
        }
    }
}
