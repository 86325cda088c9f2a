//! Reports on disk, one file per key, written atomically.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::report::ReportEnvelope;

#[derive(Serialize, Deserialize)]
struct Entry {
    exit_code: u8,
    summary: String,
    envelope: ReportEnvelope,
}

pub fn key_digest(canonical: &str) -> String {
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

pub fn load(dir: &Path, key: &str) -> Option<(ReportEnvelope, u8)> {
    let text = std::fs::read_to_string(dir.join(format!("{key}.json"))).ok()?;
    let entry: Entry = serde_json::from_str(&text).ok()?;
    let mut envelope = entry.envelope;
    envelope.summary = entry.summary;
    Some((envelope, entry.exit_code))
}

pub fn store(dir: &Path, key: &str, envelope: &ReportEnvelope, exit_code: u8) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let entry = Entry { exit_code, summary: envelope.summary.clone(), envelope: envelope.clone() };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer(&mut tmp, &entry)?;
    tmp.flush()?;
    tmp.persist(dir.join(format!("{key}.json"))).map_err(|e| e.error)?;
    Ok(())
}
