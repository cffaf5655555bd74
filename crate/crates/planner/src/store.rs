//! File-backed storage: content-addressed models and session journals.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::document::Document;
use crate::error::{PlannerError, Result};

#[derive(Debug, Clone)]
pub struct Store {
    root: PathBuf,
}

fn is_hex_id(s: &str, len: usize) -> bool {
    s.len() == len && s.bytes().all(|b| b.is_ascii_hexdigit() && !b.is_ascii_uppercase())
}

impl Store {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(root.join("models"))?;
        fs::create_dir_all(root.join("sessions"))?;
        Ok(Self { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn model_path(&self, handle: &str) -> Result<PathBuf> {
        if !is_hex_id(handle, 64) {
            return Err(PlannerError::UnknownHandle(handle.to_string()));
        }
        Ok(self.root.join("models").join(format!("{handle}.json")))
    }

    pub(crate) fn journal_path(&self, session_id: &str) -> Result<PathBuf> {
        if !is_hex_id(session_id, 32) {
            return Err(PlannerError::UnknownSession(session_id.to_string()));
        }
        Ok(self.root.join("sessions").join(format!("{session_id}.jsonl")))
    }

    /// Parses, validates and stores a document; identical content yields the
    /// same handle.
    pub fn ingest(&self, text: &str) -> Result<(String, Document)> {
        let doc = Document::parse(text)?;
        let handle = self.put(&doc)?;
        Ok((handle, doc))
    }

    pub fn put(&self, doc: &Document) -> Result<String> {
        let handle = doc.handle();
        let path = self.model_path(&handle)?;
        if !path.exists() {
            let tmp = path.with_extension(format!("tmp-{}", uuid::Uuid::new_v4().simple()));
            let mut f = fs::File::create(&tmp)?;
            f.write_all(doc.canonical_json().as_bytes())?;
            f.sync_all()?;
            fs::rename(&tmp, &path)?;
        }
        Ok(handle)
    }

    pub fn get(&self, handle: &str) -> Result<Document> {
        let text = self.export(handle)?;
        Document::parse(&text).map_err(|e| PlannerError::Corrupt {
            path: handle.to_string(),
            message: e.to_string(),
        })
    }

    /// Canonical document text for a handle.
    pub fn export(&self, handle: &str) -> Result<String> {
        let path = self.model_path(handle)?;
        match fs::read_to_string(&path) {
            Ok(t) => Ok(t),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                Err(PlannerError::UnknownHandle(handle.to_string()))
            }
            Err(e) => Err(e.into()),
        }
    }
}
