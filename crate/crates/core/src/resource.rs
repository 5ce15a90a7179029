//! External files referenced by a fitted pipeline, pinned by SHA-256.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceRef {
    pub path: PathBuf,
    pub sha256: String,
}

impl ResourceRef {
    /// Hashes the file at `path`.
    pub fn of(path: impl AsRef<Path>) -> Result<ResourceRef> {
        let path = path.as_ref();
        Ok(ResourceRef {
            path: path.to_path_buf(),
            sha256: sha256_file(path)?,
        })
    }

    /// Fails when the file is missing or its contents changed.
    pub fn verify(&self) -> Result<()> {
        let found = sha256_file(&self.path)?;
        if found != self.sha256 {
            return Err(Error::Checksum {
                path: self.path.clone(),
                expected: self.sha256.clone(),
                found,
            });
        }
        Ok(())
    }
}

pub fn sha256_file(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::resource(path, e.to_string()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_modification() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.txt");
        std::fs::write(&path, "abc").unwrap();
        let r = ResourceRef::of(&path).unwrap();
        assert_eq!(
            r.sha256,
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        r.verify().unwrap();
        std::fs::write(&path, "abd").unwrap();
        assert!(matches!(r.verify(), Err(Error::Checksum { .. })));
        std::fs::remove_file(&path).unwrap();
        assert!(matches!(r.verify(), Err(Error::Resource { .. })));
    }
}
