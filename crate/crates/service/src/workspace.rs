use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use taxunify::catalog::{self, DocumentKind, ProjectSummary};
use taxunify::scheme::MappingSetDocument;
use taxunify::{CatalogError, LoadMode, MappingSet, Project, Violation};
use tokio::sync::{Mutex, RwLock};

#[derive(Debug, thiserror::Error)]
pub enum WorkspaceError {
    #[error("workspace {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("project id {id:?} is used by both {} and {}", first.display(), second.display())]
    DuplicateProject {
        id: String,
        first: PathBuf,
        second: PathBuf,
    },
}

/// Why a mapping commit was refused.
#[derive(Debug)]
pub enum CommitError {
    UnknownProject,
    Conflict { expected: u64, current: u64 },
    Invalid(Vec<Violation>),
    Persist(CatalogError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LockHolder {
    pub client_token: String,
    pub expires_in_seconds: u64,
}

/// Revision and advisory edit lock of one project.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProjectSession {
    pub project_id: String,
    pub revision: u64,
    pub lock_holder: Option<LockHolder>,
}

struct EditLock {
    token: String,
    expires: Instant,
}

struct Slot {
    project: Project,
    path: PathBuf,
    lock: Option<EditLock>,
}

impl Slot {
    fn live_lock(&mut self, now: Instant) -> Option<&EditLock> {
        if self.lock.as_ref().is_some_and(|l| l.expires <= now) {
            self.lock = None;
        }
        self.lock.as_ref()
    }

    fn session(&mut self, now: Instant) -> ProjectSession {
        let lock_holder = self.live_lock(now).map(|l| LockHolder {
            client_token: l.token.clone(),
            expires_in_seconds: l.expires.saturating_duration_since(now).as_secs(),
        });
        ProjectSession {
            project_id: self.project.id.clone(),
            revision: self.project.revision,
            lock_holder,
        }
    }
}

/// Every project file of a directory, held in memory. Each project has its
/// own mutex, so writes to one project are serialized and never wait on
/// another project.
pub struct Workspace {
    dir: PathBuf,
    projects: RwLock<BTreeMap<String, Arc<Mutex<Slot>>>>,
}

fn dir_err(path: &Path) -> impl FnOnce(std::io::Error) -> WorkspaceError + '_ {
    move |source| WorkspaceError::Io {
        path: path.to_path_buf(),
        source,
    }
}

impl Workspace {
    /// Loads every `*.json` file in `dir` whose `kind` is `project`.
    pub fn open(dir: &Path) -> Result<Self, WorkspaceError> {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(dir_err(dir))?
            .map(|e| e.map(|e| e.path()))
            .collect::<Result<_, _>>()
            .map_err(dir_err(dir))?;
        paths.retain(|p| p.extension().is_some_and(|e| e == "json"));
        paths.sort();

        let mut projects = BTreeMap::new();
        let mut origin: BTreeMap<String, PathBuf> = BTreeMap::new();
        for path in paths {
            if catalog::peek_kind(&path)? != Some(DocumentKind::Project) {
                continue;
            }
            let project = catalog::load_project(&path, LoadMode::Lenient)?;
            if let Some(first) = origin.get(&project.id) {
                return Err(WorkspaceError::DuplicateProject {
                    id: project.id,
                    first: first.clone(),
                    second: path,
                });
            }
            origin.insert(project.id.clone(), path.clone());
            projects.insert(
                project.id.clone(),
                Arc::new(Mutex::new(Slot {
                    project,
                    path,
                    lock: None,
                })),
            );
        }
        Ok(Workspace {
            dir: dir.to_path_buf(),
            projects: RwLock::new(projects),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    async fn slot(&self, id: &str) -> Option<Arc<Mutex<Slot>>> {
        self.projects.read().await.get(id).cloned()
    }

    pub async fn summaries(&self) -> Vec<ProjectSummary> {
        let slots: Vec<_> = self.projects.read().await.values().cloned().collect();
        let mut out = Vec::with_capacity(slots.len());
        for s in slots {
            out.push(s.lock().await.project.summary());
        }
        out
    }

    /// A copy of the project at its current revision.
    pub async fn snapshot(&self, id: &str) -> Option<Project> {
        let slot = self.slot(id).await?;
        let guard = slot.lock().await;
        Some(guard.project.clone())
    }

    /// Replaces the mapping if `expected_revision` is current, persists the
    /// project and returns the new revision.
    pub async fn commit_mapping(
        &self,
        id: &str,
        expected_revision: u64,
        body: MappingSetDocument,
    ) -> Result<u64, CommitError> {
        let slot = self.slot(id).await.ok_or(CommitError::UnknownProject)?;
        let mut guard = slot.lock().await;
        let current = guard.project.revision;
        if expected_revision != current {
            return Err(CommitError::Conflict {
                expected: expected_revision,
                current,
            });
        }
        let outcome = guard
            .project
            .validate_mapping_candidate(&body.project_id, &body.pairs);
        if !outcome.is_ok() {
            return Err(CommitError::Invalid(outcome.violations));
        }
        let mut next = guard.project.clone();
        next.mapping = MappingSet::new(next.id.clone(), body.pairs);
        next.revision = current + 1;
        catalog::save_project(&next, &guard.path).map_err(CommitError::Persist)?;
        guard.project = next;
        Ok(current + 1)
    }

    pub async fn session(&self, id: &str) -> Option<ProjectSession> {
        let slot = self.slot(id).await?;
        let mut guard = slot.lock().await;
        Some(guard.session(Instant::now()))
    }

    /// Takes or renews the advisory edit lock. Returns the session either
    /// way; `Err` carries the session of the current foreign holder.
    pub async fn acquire_lock(
        &self,
        id: &str,
        token: &str,
        ttl: Duration,
    ) -> Option<Result<ProjectSession, ProjectSession>> {
        let slot = self.slot(id).await?;
        let mut guard = slot.lock().await;
        let now = Instant::now();
        if guard.live_lock(now).is_some_and(|l| l.token != token) {
            return Some(Err(guard.session(now)));
        }
        guard.lock = Some(EditLock {
            token: token.to_string(),
            expires: now + ttl,
        });
        Some(Ok(guard.session(now)))
    }

    /// Releases the lock if `token` holds it (or nobody does).
    pub async fn release_lock(&self, id: &str, token: &str) -> Option<Result<(), ProjectSession>> {
        let slot = self.slot(id).await?;
        let mut guard = slot.lock().await;
        let now = Instant::now();
        if guard.live_lock(now).is_some_and(|l| l.token != token) {
            return Some(Err(guard.session(now)));
        }
        guard.lock = None;
        Some(Ok(()))
    }
}
