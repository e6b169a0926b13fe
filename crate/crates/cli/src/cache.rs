//! Content-addressed result cache. Entries are JSON files named by the
//! SHA-256 of the canonical request; writers serialize on an advisory lock
//! per key, so concurrent identical runs compute once.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

pub struct Cache {
    dir: PathBuf,
}

/// Hex SHA-256 of the canonical (key-sorted, compact) serialization.
pub fn cache_key(request: &Value) -> String {
    let canon = serde_json::to_string(request).expect("JSON values serialize");
    hex::encode(Sha256::digest(canon.as_bytes()))
}

impl Cache {
    pub fn open(dir: &Path) -> io::Result<Cache> {
        fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn entry(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// Stored payload for `key`; unreadable or mismatched entries count as
    /// missing.
    pub fn get(&self, key: &str) -> Option<Value> {
        let text = fs::read_to_string(self.entry(key)).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        if v.get("key").and_then(Value::as_str) != Some(key) {
            return None;
        }
        v.get("payload").cloned()
    }

    pub fn put(&self, key: &str, payload: &Value) -> io::Result<()> {
        let tmp = self.dir.join(format!("{key}.{}.tmp", std::process::id()));
        let body = serde_json::to_string(&json!({ "key": key, "payload": payload })).expect("serializable");
        {
            let mut f = File::create(&tmp)?;
            f.write_all(body.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.entry(key))
    }

    fn lock(&self, key: &str) -> io::Result<File> {
        let f = OpenOptions::new().create(true).truncate(false).write(true).open(self.dir.join(format!("{key}.lock")))?;
        f.lock()?;
        Ok(f)
    }

    /// Returns the cached payload or computes and stores it. Cache I/O
    /// failures fall back to computing.
    pub fn get_or_compute<E>(
        &self,
        key: &str,
        compute: impl FnOnce() -> Result<Value, E>,
    ) -> Result<(Value, bool), E> {
        let guard = self.lock(key).ok();
        if let Some(v) = self.get(key) {
            return Ok((v, true));
        }
        let v = compute()?;
        if guard.is_some() {
            let _ = self.put(key, &v);
        }
        drop(guard);
        Ok((v, false))
    }
}
