//! On-disk cache for continued-fraction expansions and scan results.
//! Entries live under `<dir>/v<SCHEMA>/`, so a schema bump invalidates
//! everything at once. Unreadable entries are recomputed.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use quadpart::cfrac::{CFData, CFDataRepr};
use quadpart::qfield::FieldCtx;
use quadpart::{Field, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::output::SCHEMA;

pub const DIR_VAR: &str = "QUADPART_CACHE_DIR";
const DEFAULT_DIR: &str = ".quadpart-cache";

#[derive(Debug, Clone)]
pub struct Cache {
    root: Option<PathBuf>,
}

impl Cache {
    pub fn new(enabled: bool) -> Self {
        let root = enabled.then(|| {
            let base = std::env::var_os(DIR_VAR)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_DIR));
            base.join(format!("v{SCHEMA}"))
        });
        Cache { root }
    }

    fn load<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let path = self.root.as_ref()?.join(key);
        let bytes = fs::read(path).ok()?;
        serde_json::from_slice(&bytes).ok()
    }

    fn store<T: Serialize>(&self, key: &str, value: &T) {
        let Some(root) = &self.root else { return };
        if fs::create_dir_all(root).is_err() {
            return;
        }
        let Ok(bytes) = serde_json::to_vec(value) else { return };
        let tmp = root.join(format!(".{key}.{}.tmp", std::process::id()));
        if fs::write(&tmp, bytes).is_ok() && fs::rename(&tmp, root.join(key)).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }

    /// Cached value for `key`, or `compute()` stored under it.
    pub fn get_or<T, F>(&self, key: &str, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        if let Some(v) = self.load(key) {
            return Ok(v);
        }
        let v = compute()?;
        self.store(key, &v);
        Ok(v)
    }

    pub fn field(&self, d: i64) -> Result<Arc<Field>> {
        let ctx = FieldCtx::new(d)?;
        let key = format!("cf-{}.json", ctx.d());
        if let Some(repr) = self.load::<CFDataRepr>(&key) {
            if let Ok(cf) = CFData::from_repr(repr) {
                return Field::from_cf(cf);
            }
        }
        let cf = CFData::expand(&ctx)?;
        self.store(&key, &cf.to_repr());
        Field::from_cf(cf)
    }
}
