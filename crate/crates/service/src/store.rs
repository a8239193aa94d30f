//! Exercise persistence: one JSON document per exercise under
//! `<storage_dir>/exercises/`, mirrored in memory.

use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use puzzlemaker_core::{Exercise, ExerciseId};

#[derive(Debug)]
pub struct ExerciseStore {
    dir: PathBuf,
    cache: RwLock<HashMap<ExerciseId, Arc<Exercise>>>,
}

impl ExerciseStore {
    pub fn open(storage_dir: &Path) -> io::Result<Self> {
        let dir = storage_dir.join("exercises");
        fs::create_dir_all(&dir)?;
        let mut cache = HashMap::new();
        for entry in fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json") {
                match fs::read_to_string(&path)
                    .map_err(|e| e.to_string())
                    .and_then(|t| serde_json::from_str::<Exercise>(&t).map_err(|e| e.to_string()))
                {
                    Ok(ex) => {
                        cache.insert(ex.exercise_id.clone(), Arc::new(ex));
                    }
                    Err(e) => tracing::warn!(path = %path.display(), error = %e, "skipping unreadable exercise"),
                }
            }
        }
        Ok(Self { dir, cache: RwLock::new(cache) })
    }

    fn path_for(&self, id: &ExerciseId) -> PathBuf {
        self.dir.join(format!("{id}.json"))
    }

    pub fn insert(&self, exercise: Exercise) -> io::Result<Arc<Exercise>> {
        let body = serde_json::to_vec_pretty(&exercise).map_err(io::Error::other)?;
        let path = self.path_for(&exercise.exercise_id);
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, body)?;
        fs::rename(&tmp, &path)?;
        let exercise = Arc::new(exercise);
        self.cache
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(exercise.exercise_id.clone(), exercise.clone());
        Ok(exercise)
    }

    pub fn get(&self, id: &ExerciseId) -> Option<Arc<Exercise>> {
        self.cache.read().unwrap_or_else(|e| e.into_inner()).get(id).cloned()
    }

    pub fn len(&self) -> usize {
        self.cache.read().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
