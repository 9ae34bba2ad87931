//! Run-directory handling: atomic file writes and the run manifest.
//!
//! Every output file is written to a temporary sibling and renamed into
//! place, and the manifest records only the logical configuration (command,
//! seed, parameters, output names) — never timestamps or thread counts — so
//! repeated runs with the same seed produce byte-identical directories.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

pub struct RunDir {
    dir: PathBuf,
    written: Vec<String>,
}

impl RunDir {
    pub fn create(dir: &Path) -> io::Result<RunDir> {
        fs::create_dir_all(dir)?;
        Ok(RunDir {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, content: &str) -> io::Result<PathBuf> {
        let target = self.dir.join(name);
        let tmp = self.dir.join(format!("{name}.tmp"));
        fs::write(&tmp, content)?;
        fs::rename(&tmp, &target)?;
        self.written.push(name.to_string());
        Ok(target)
    }

    /// Write `manifest.json` describing the run.
    pub fn finish<C: Serialize>(self, command: &str, seed: u64, config: &C) -> io::Result<()> {
        #[derive(Serialize)]
        struct Manifest<'a, C> {
            command: &'a str,
            seed: u64,
            config: &'a C,
            outputs: &'a [String],
        }
        let manifest = Manifest {
            command,
            seed,
            config,
            outputs: &self.written,
        };
        let body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        let target = self.dir.join("manifest.json");
        let tmp = self.dir.join("manifest.json.tmp");
        fs::write(&tmp, body)?;
        fs::rename(&tmp, &target)?;
        Ok(())
    }
}
