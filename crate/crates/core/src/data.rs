//! Bundled data: the six MM homology tables, sample diagrams, and the two
//! derivation scenarios, together with a checksum manifest.
//!
//! The files are embedded at compile time and also ship in `data/` at the
//! crate root. [`verify_bundle`] recomputes every checksum and runs the
//! table checks; it can be pointed at an on-disk copy of the directory to
//! audit external data.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::hfk::{parse_hfk, verified, HfkTable, VerifiedTable, VerifyReport};

macro_rules! bundle {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../data/", $name)))),*]
    };
}

/// Embedded copies of every bundled file.
pub const BUNDLED_FILES: &[(&str, &str)] = bundle![
    "mm1.hfk",
    "mm2.hfk",
    "mm3.hfk",
    "mm4.hfk",
    "mm5.hfk",
    "mm6.hfk",
    "figure8.pd",
    "trefoil.pd",
    "unknot_2.grd",
    "trefoil_5.grd",
    "figure8_6.grd",
    "mm6_scenario.json",
    "mm2_scenario.json",
];

pub const MANIFEST: &str = include_str!("../data/manifest.json");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DataError {
    #[error("manifest is unreadable: {0}")]
    BadManifest(String),
    #[error("file `{path}` is missing from the bundle")]
    MissingFile { path: String },
    #[error("file `{path}` fails its checksum")]
    ChecksumMismatch { path: String },
    #[error("table `{path}` fails verification: {reason}")]
    TableInvalid { path: String, reason: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub files: Vec<ManifestEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub kind: String,
    pub source: String,
    pub sha256: String,
}

pub fn manifest() -> Result<Manifest, DataError> {
    serde_json::from_str(MANIFEST).map_err(|e| DataError::BadManifest(e.to_string()))
}

/// Raw text of a bundled file.
pub fn bundled(path: &str) -> Option<&'static str> {
    BUNDLED_FILES.iter().find(|(p, _)| *p == path).map(|&(_, text)| text)
}

fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// The bundled table `MMl` for `l` in `1..=6`, verified.
pub fn mm_table(ell: usize) -> Result<VerifiedTable, DataError> {
    assert!((1..=6).contains(&ell), "MM index out of range");
    let path = format!("mm{ell}.hfk");
    let text = bundled(&path).expect("bundled table");
    let tab = parse_hfk(text)
        .map_err(|e| DataError::TableInvalid { path: path.clone(), reason: e.to_string() })?;
    verified(&tab).map_err(|e| DataError::TableInvalid { path, reason: e.to_string() })
}

/// Per-file verification outcome.
#[derive(Clone, Debug, Serialize)]
pub struct FileReport {
    pub path: String,
    pub kind: String,
    pub checksum_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<VerifyReport>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BundleReport {
    pub files: Vec<FileReport>,
    pub pass: bool,
}

/// Verifies checksums of all manifest files and runs the table checks on
/// every `.hfk` entry. With `dir` given, files are read from disk instead of
/// the embedded bundle.
pub fn verify_bundle(dir: Option<&std::path::Path>) -> Result<BundleReport, DataError> {
    let manifest = manifest()?;
    let mut files = Vec::new();
    let mut pass = true;
    for entry in &manifest.files {
        let text: String = match dir {
            Some(d) => std::fs::read_to_string(d.join(&entry.path))
                .map_err(|_| DataError::MissingFile { path: entry.path.clone() })?,
            None => bundled(&entry.path)
                .ok_or_else(|| DataError::MissingFile { path: entry.path.clone() })?
                .to_string(),
        };
        let checksum_ok = sha256_hex(&text) == entry.sha256;
        let table = if entry.kind == "hfk-table" {
            let parsed: Option<HfkTable> = parse_hfk(&text).ok();
            parsed.map(|tab| crate::hfk::verify_table(&tab).0)
        } else {
            None
        };
        let table_ok = match (&entry.kind[..], &table) {
            ("hfk-table", Some(rep)) => rep.verified,
            ("hfk-table", None) => false,
            _ => true,
        };
        let file_pass = checksum_ok && table_ok;
        pass &= file_pass;
        files.push(FileReport {
            path: entry.path.clone(),
            kind: entry.kind.clone(),
            checksum_ok,
            table,
            pass: file_pass,
        });
    }
    Ok(BundleReport { files, pass })
}

/// All six bundled tables keyed by index.
pub fn mm_tables() -> Result<BTreeMap<usize, VerifiedTable>, DataError> {
    (1..=6).map(|ell| Ok((ell, mm_table(ell)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_verifies() {
        let report = verify_bundle(None).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.files.len(), 13);
    }

    #[test]
    fn tables_load_verified() {
        let tables = mm_tables().unwrap();
        assert_eq!(tables[&1].total_dim(), 5);
        assert_eq!(tables[&2].total_dim(), 27);
        assert_eq!(tables[&6].dim(0, 0), 2);
    }

    #[test]
    fn corrupted_copy_fails_checksum() {
        let dir = std::env::temp_dir().join("gridfloer-data-test");
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        for (name, text) in BUNDLED_FILES {
            std::fs::write(dir.join(name), text).unwrap();
        }
        // Corrupt one table cell.
        let tampered = bundled("mm2.hfk").unwrap().replace("-2,-4,1", "-2,-4,2");
        std::fs::write(dir.join("mm2.hfk"), tampered).unwrap();
        let report = verify_bundle(Some(&dir)).unwrap();
        assert!(!report.pass);
        let mm2 = report.files.iter().find(|f| f.path == "mm2.hfk").unwrap();
        assert!(!mm2.checksum_ok);
        // The tampered cell also breaks the symmetry check.
        assert!(!mm2.table.as_ref().unwrap().symmetry.pass);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn missing_file_reported() {
        let dir = std::env::temp_dir().join("gridfloer-data-missing");
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        let err = verify_bundle(Some(&dir)).unwrap_err();
        assert_eq!(err, DataError::MissingFile { path: "mm1.hfk".into() });
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
