//! Resumable search state, written atomically as JSON.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::engine::{PruningStats, ShardKey};
use super::tally::Tally;
use super::task::SearchTask;
use super::SearchError;

pub const CHECKPOINT_VERSION: u32 = 1;

/// Overrides the directory checkpoints are written to.
pub const CHECKPOINT_DIR_ENV: &str = "EDL_CHECKPOINT_DIR";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardState {
    pub key: ShardKey,
    /// Candidate indices of rows `1..n` for the next leaf to visit.
    pub cursor: Vec<usize>,
    pub done: bool,
    pub examined: u64,
    pub stats: PruningStats,
    pub tally: Tally,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub fingerprint: String,
    pub shards: Vec<ShardState>,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Option<Checkpoint>, SearchError> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let cp: Checkpoint =
            serde_json::from_str(&text).map_err(|e| SearchError::Checkpoint(format!("{}: {e}", path.display())))?;
        if cp.version != CHECKPOINT_VERSION {
            return Err(SearchError::Checkpoint(format!(
                "{}: version {} is not supported",
                path.display(),
                cp.version
            )));
        }
        Ok(Some(cp))
    }

    /// Writes to a sibling temporary file, then renames over `path`.
    pub fn save(&self, path: &Path) -> Result<(), SearchError> {
        if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        let text = serde_json::to_string(self).expect("checkpoint serializes");
        fs::write(&tmp, text)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Where a task's checkpoint lives, honouring [`CHECKPOINT_DIR_ENV`].
pub fn checkpoint_location(task: &SearchTask) -> Option<PathBuf> {
    let dir = std::env::var_os(CHECKPOINT_DIR_ENV).map(PathBuf::from);
    match (dir, &task.checkpoint_path) {
        (Some(dir), Some(p)) => Some(dir.join(p.file_name().unwrap_or(p.as_os_str()))),
        (Some(dir), None) => Some(dir.join(format!("search-{}.json", &task.fingerprint()[..16]))),
        (None, p) => p.clone(),
    }
}
