//! A directory of validated documents addressed by the canonical hash of
//! their cone, with an `index.json` listing and an exclusive lock file for
//! writers.

use std::fs::{self, OpenOptions};
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::document::{parse_text, Document};
use crate::error::{Error, Result};

const INDEX: &str = "index.json";
const LOCK: &str = "index.lock";

pub struct Store {
    dir: PathBuf,
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

fn io(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text).map_err(|e| io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io(path, e))
}

impl Store {
    pub fn new(dir: impl Into<PathBuf>) -> Store {
        Store { dir: dir.into() }
    }

    fn lock(&self) -> Result<LockGuard> {
        fs::create_dir_all(&self.dir).map_err(|e| io(&self.dir, e))?;
        let path = self.dir.join(LOCK);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(LockGuard(path)),
            Err(e) if e.kind() == ErrorKind::AlreadyExists => {
                Err(Error::Io(format!("{} is held by another writer", path.display())))
            }
            Err(e) => Err(io(&path, e)),
        }
    }

    fn read_index(&self) -> Result<Vec<Value>> {
        let path = self.dir.join(INDEX);
        match fs::read_to_string(&path) {
            Ok(text) => match parse_text(&path.display().to_string(), &text)? {
                Value::Array(a) => Ok(a),
                _ => Err(Error::Integrity(format!("{} is not an array", path.display()))),
            },
            Err(e) if e.kind() == ErrorKind::NotFound => Ok(Vec::new()),
            Err(e) => Err(io(&path, e)),
        }
    }

    /// Validates and stores `doc`; returns its hash. Adding an identical
    /// document twice is a no-op.
    pub fn add(&self, doc: &Document) -> Result<String> {
        doc.cone.require_good()?;
        if let Some(r) = &doc.reeb {
            if !crate::reeb::is_admissible(&doc.cone, r)? {
                return Err(Error::Inadmissible);
            }
        }
        let _guard = self.lock()?;
        let hash = doc.cone.canonical_hash();
        let text = serde_json::to_string_pretty(&doc.to_json()).expect("json") + "\n";
        let path = self.dir.join(format!("{hash}.json"));
        match fs::read_to_string(&path) {
            Ok(existing) if existing == text => return Ok(hash),
            Ok(_) => return Err(Error::Integrity(format!("hash {hash} is stored with different content"))),
            Err(e) if e.kind() == ErrorKind::NotFound => {}
            Err(e) => return Err(io(&path, e)),
        }
        write_atomic(&path, &text)?;
        let mut index = self.read_index()?;
        index.push(json!({"hash": hash, "name": doc.name}));
        index.sort_by(|a, b| a["hash"].as_str().cmp(&b["hash"].as_str()));
        write_atomic(&self.dir.join(INDEX), &(serde_json::to_string_pretty(&index).expect("json") + "\n"))?;
        Ok(hash)
    }

    pub fn list(&self) -> Result<Value> {
        Ok(Value::Array(self.read_index()?))
    }

    pub fn get(&self, hash: &str) -> Result<Value> {
        if hash.is_empty() || !hash.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(Error::Precondition(format!("\"{hash}\" is not a hash")));
        }
        let path = self.dir.join(format!("{hash}.json"));
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == ErrorKind::NotFound => {
                return Err(Error::Precondition(format!("no document with hash {hash}")))
            }
            Err(e) => return Err(io(&path, e)),
        };
        let v = parse_text(&path.display().to_string(), &text)?;
        let doc = Document::from_json(&v, crate::exactnum::DEFAULT_D)?;
        if doc.cone.canonical_hash() != hash {
            return Err(Error::Integrity(format!("{} does not hash to its name", path.display())));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::example_family;
    use crate::cone::GoodCone;

    #[test]
    fn add_list_get() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::new(dir.path());
        assert_eq!(store.list().unwrap(), json!([]));
        let (c, r) = example_family(2).unwrap();
        let doc = Document::new(c.clone(), Some(r));
        let h = store.add(&doc).unwrap();
        assert_eq!(store.add(&doc).unwrap(), h);
        assert_eq!(store.get(&h).unwrap(), doc.to_json());
        assert_eq!(store.list().unwrap().as_array().unwrap().len(), 1);
        let other = Document::new(c, None);
        assert!(matches!(store.add(&other), Err(Error::Integrity(_))));
        let bad = Document::new(GoodCone::from_ints(&[[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]]).unwrap(), None);
        assert!(matches!(store.add(&bad), Err(Error::NotGood(_))));
        assert!(!dir.path().join(LOCK).exists());
    }

    #[test]
    fn lock_is_exclusive() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::new(dir.path());
        let g = store.lock().unwrap();
        assert!(matches!(store.lock(), Err(Error::Io(_))));
        drop(g);
        assert!(store.lock().is_ok());
    }
}
