use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::error::{CliError, CliResult};

/// Output directory whose files appear only once fully written.
pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(OutDir {
            root: root.to_path_buf(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write<F>(&self, name: &str, body: F) -> CliResult<PathBuf>
    where
        F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
    {
        let target = self.path(name);
        let dir = target.parent().unwrap_or(&self.root);
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let tmp = NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
        {
            let mut w = BufWriter::new(tmp.as_file());
            body(&mut w).map_err(|e| CliError::io(&target, e))?;
            w.flush().map_err(|e| CliError::io(&target, e))?;
        }
        tmp.persist(&target)
            .map_err(|e| CliError::io(&target, e.error))?;
        Ok(target)
    }

    pub fn write_csv<S: serde::Serialize>(&self, name: &str, rows: &[S]) -> CliResult<PathBuf> {
        self.write(name, |w| {
            let mut csv = csv::Writer::from_writer(w);
            for row in rows {
                csv.serialize(row).map_err(std::io::Error::other)?;
            }
            csv.flush()
        })
    }
}
