use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock, RwLock};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::RationalFunction;

use super::gram::{verify_table_row, wg_free, wg_orthogonal, wg_unitary_gram};
use super::table::{GroupKind, Mode, TableKey, WeingartenTable};

/// Version of the on-disk table format.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "HAARWELL_CACHE";

/// Builds the table for `(group, k, mode)` from scratch.
pub fn build_table(group: GroupKind, k: usize, mode: &Mode) -> Result<WeingartenTable> {
    match group {
        GroupKind::Unitary => wg_unitary_gram(k, mode),
        GroupKind::Orthogonal => wg_orthogonal(k, mode),
        GroupKind::FreeOrthogonal => wg_free(k, mode),
    }
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    schema_version: u32,
    group: GroupKind,
    k: usize,
    mode: String,
    entries: Vec<String>,
}

/// Serializes a table in the cache file format.
pub fn table_to_json(table: &WeingartenTable) -> String {
    let file = TableFile {
        schema_version: SCHEMA_VERSION,
        group: table.group(),
        k: table.k(),
        mode: table.mode().to_string(),
        entries: table
            .entries()
            .map(|(key, v)| format!("{key} -> {}", v.to_sparse_string()))
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

/// Parses a cache file and checks one randomly chosen inverse identity
/// against a freshly computed Gram matrix before returning it.
pub fn table_from_json(text: &str) -> Result<WeingartenTable> {
    let file: TableFile =
        serde_json::from_str(text).map_err(|e| Error::Cache(format!("malformed table file: {e}")))?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(Error::Cache(format!(
            "schema version {} (expected {SCHEMA_VERSION})",
            file.schema_version
        )));
    }
    let mode: Mode = file.mode.parse()?;
    let mut entries = BTreeMap::new();
    for line in &file.entries {
        let (key, value) = line
            .split_once(" -> ")
            .ok_or_else(|| Error::Cache(format!("bad entry {line:?}")))?;
        entries.insert(TableKey::parse(key)?, RationalFunction::parse_sparse(value)?);
    }
    let table = WeingartenTable::new(file.group, file.k, mode, entries);
    let row = rand::thread_rng().gen_range(0..table.len().max(1));
    if !verify_table_row(&table, row)? {
        return Err(Error::Cache(format!(
            "{} k={} {} failed verification at row {row}",
            table.group(),
            table.k(),
            table.mode()
        )));
    }
    Ok(table)
}

type CacheKey = (GroupKind, usize, Mode);

/// Process-wide table store, optionally backed by a directory.
///
/// Reads take a shared lock; a table is built outside the lock and then
/// published under the write lock, so concurrent builders of the same
/// table may duplicate work but never observe a partial table.
pub struct TableCache {
    dir: Option<PathBuf>,
    tables: RwLock<HashMap<CacheKey, Arc<WeingartenTable>>>,
}

impl TableCache {
    /// Memory-only cache.
    pub fn in_memory() -> Self {
        TableCache {
            dir: None,
            tables: RwLock::new(HashMap::new()),
        }
    }

    /// Cache that also reads and writes table files under `dir`.
    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        TableCache {
            dir: Some(dir.into()),
            tables: RwLock::new(HashMap::new()),
        }
    }

    /// The memory-only cache shared by the library's convenience functions.
    pub fn global() -> &'static TableCache {
        static GLOBAL: OnceLock<TableCache> = OnceLock::new();
        GLOBAL.get_or_init(TableCache::in_memory)
    }

    /// `$HAARWELL_CACHE`, else `$XDG_CACHE_HOME/haarwell`, else
    /// `~/.cache/haarwell`.
    pub fn default_dir() -> Option<PathBuf> {
        if let Some(d) = std::env::var_os(CACHE_ENV) {
            return Some(PathBuf::from(d));
        }
        if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
            return Some(PathBuf::from(d).join("haarwell"));
        }
        std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("haarwell"))
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// File name used for `(group, k, mode)`.
    pub fn file_name(group: GroupKind, k: usize, mode: &Mode) -> String {
        let m = match mode {
            Mode::Symbolic => "symbolic".to_string(),
            Mode::Numeric(q) => format!("n{}", q.to_string().replace('/', "_").replace('-', "m")),
        };
        format!("{group}-k{k}-{m}.json")
    }

    pub fn get(&self, group: GroupKind, k: usize, mode: &Mode) -> Result<Arc<WeingartenTable>> {
        let key = (group, k, mode.clone());
        if let Some(t) = self.tables.read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(t));
        }
        let table = match self.load(group, k, mode)? {
            Some(t) => t,
            None => {
                let t = build_table(group, k, mode)?;
                self.store(&t)?;
                t
            }
        };
        let mut guard = self.tables.write().expect("cache lock");
        Ok(Arc::clone(guard.entry(key).or_insert_with(|| Arc::new(table))))
    }

    /// Drops all in-memory tables; files on disk are kept.
    pub fn evict_memory(&self) {
        self.tables.write().expect("cache lock").clear();
    }

    /// Removes the cache files written by this cache.
    pub fn clear_disk(&self) -> Result<usize> {
        let Some(dir) = &self.dir else { return Ok(0) };
        let mut removed = 0;
        if dir.exists() {
            for entry in fs::read_dir(dir)? {
                let path = entry?.path();
                if path.extension().is_some_and(|e| e == "json") {
                    fs::remove_file(path)?;
                    removed += 1;
                }
            }
        }
        Ok(removed)
    }

    fn path(&self, group: GroupKind, k: usize, mode: &Mode) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(Self::file_name(group, k, mode)))
    }

    fn load(&self, group: GroupKind, k: usize, mode: &Mode) -> Result<Option<WeingartenTable>> {
        let Some(path) = self.path(group, k, mode) else {
            return Ok(None);
        };
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let table = table_from_json(&text)?;
        if table.group() != group || table.k() != k || table.mode() != mode {
            return Err(Error::Cache(format!("{} describes a different table", path.display())));
        }
        Ok(Some(table))
    }

    fn store(&self, table: &WeingartenTable) -> Result<()> {
        let Some(path) = self.path(table.group(), table.k(), table.mode()) else {
            return Ok(());
        };
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, table_to_json(table))?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}
