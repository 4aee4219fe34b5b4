//! HTTP backend for superlative frame annotation.
//!
//! The [`Store`] holds documents, detector candidates and each annotator's
//! writes; [`router`] exposes it as JSON over HTTP. Writes use optimistic
//! concurrency on a per-annotator, per-instance revision counter and are
//! persisted to an append-only JSONL journal.

pub mod api;
pub mod store;

use std::net::SocketAddr;
use std::sync::Arc;

pub use api::{router, ANNOTATOR_HEADER};
pub use store::{Action, Annotation, Document, InstanceRecord, Progress, Status, Store, StoreConfig, StoreError};

/// Parses a documents JSONL file (`{id, domain, text}` per line).
pub fn parse_documents(text: &str) -> Result<Vec<Document>, StoreError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| StoreError::Input(format!("line {}: {e}", i + 1))))
        .collect()
}

/// Serves until the process is stopped.
pub async fn serve(store: Arc<Store>, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(store)).await
}
