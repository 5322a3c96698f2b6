//! Append-only JSON-lines store of [`WnRecord`]s keyed by `(xi, n, H)`.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use fs2::FileExt;
use num_bigint::BigInt;

use super::record::WnRecord;
use crate::error::{Error, Result};

pub type RecordKey = (String, u32, BigInt);

/// Records in load/insertion order; later duplicates replace earlier ones.
#[derive(Debug)]
pub struct Store {
    file: Option<(PathBuf, File)>,
    index: HashMap<RecordKey, usize>,
    records: Vec<WnRecord>,
    duplicates: usize,
}

impl Store {
    pub fn in_memory() -> Self {
        Store {
            file: None,
            index: HashMap::new(),
            records: Vec::new(),
            duplicates: 0,
        }
    }

    /// Open (creating if needed) and take an exclusive advisory lock held
    /// until the store is dropped.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(&path)
            .map_err(|e| Error::Store(format!("{}: {e}", path.display())))?;
        file.try_lock_exclusive()
            .map_err(|_| Error::Store(format!("{} is locked by another writer", path.display())))?;
        let mut store = Store::in_memory();
        for (i, line) in BufReader::new(&file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec = WnRecord::from_json(&line)
                .map_err(|e| Error::Store(format!("{}:{}: {e}", path.display(), i + 1)))?;
            store.insert(rec);
        }
        if store.duplicates > 0 {
            log::warn!(
                "{}: {} duplicate keys, keeping the last occurrence",
                path.display(),
                store.duplicates
            );
        }
        store.file = Some((path, file));
        Ok(store)
    }

    fn insert(&mut self, rec: WnRecord) {
        match self.index.get(&rec.key()) {
            Some(&i) => {
                self.duplicates += 1;
                self.records[i] = rec;
            }
            None => {
                self.index.insert(rec.key(), self.records.len());
                self.records.push(rec);
            }
        }
    }

    pub fn path(&self) -> Option<&Path> {
        self.file.as_ref().map(|(p, _)| p.as_path())
    }

    pub fn get(&self, key: &RecordKey) -> Option<&WnRecord> {
        self.index.get(key).map(|&i| &self.records[i])
    }

    pub fn records(&self) -> &[WnRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Duplicate keys seen while loading.
    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    pub fn append(&mut self, rec: WnRecord) -> Result<()> {
        if let Some((path, file)) = &mut self.file {
            let mut line = rec.to_json();
            line.push('\n');
            file.write_all(line.as_bytes())
                .and_then(|_| file.flush())
                .map_err(|e| Error::Store(format!("{}: {e}", path.display())))?;
        }
        self.insert(rec);
        Ok(())
    }
}

impl Drop for Store {
    fn drop(&mut self) {
        if let Some((_, file)) = &self.file {
            let _ = FileExt::unlock(file);
        }
    }
}
