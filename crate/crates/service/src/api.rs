//! JSON-over-HTTP routes.

use std::collections::BTreeMap;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use supersem_core::corpus::{self, AnnotatedInstance};
use supersem_core::detector::{Candidate, ContextWindow};
use supersem_core::eval::{iaa_report, IaaReport};
use supersem_core::SuperlativeFrame;

use crate::store::{Action, Annotation, InstanceRecord, Progress, Store, StoreError, WriteOutcome};

/// Header naming the annotator of a request.
pub const ANNOTATOR_HEADER: &str = "x-annotator-id";

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/documents", get(documents))
        .route("/candidates", get(candidates))
        .route("/instance/{id}", get(instance))
        .route("/instance/{id}/frame", post(submit))
        .route("/iaa", get(iaa))
        .route("/disagreements", get(disagreements))
        .route("/export", get(export))
        .route("/progress", get(progress))
        .with_state(store)
}

pub struct ApiError(StatusCode, Value);

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError(status, json!({ "error": message.into() }))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(self.1)).into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::UnknownInstance(_) | StoreError::UnknownDocument(_) => {
                ApiError::new(StatusCode::NOT_FOUND, e.to_string())
            }
            StoreError::Conflict { expected, current } => ApiError(
                StatusCode::CONFLICT,
                json!({ "error": "revision conflict", "expected_revision": expected, "current_revision": current }),
            ),
            StoreError::Invalid {
                violations,
                override_allowed,
            } => ApiError(
                StatusCode::UNPROCESSABLE_ENTITY,
                json!({
                    "error": "validation failed",
                    "override_allowed": override_allowed,
                    "messages": violations.iter().map(|v| v.message.clone()).collect::<Vec<_>>(),
                    "violations": violations,
                }),
            ),
            StoreError::Duplicate(_) | StoreError::Input(_) => ApiError::new(StatusCode::BAD_REQUEST, e.to_string()),
            StoreError::Journal { .. } | StoreError::Io { .. } => {
                tracing::error!("{e}");
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string())
            }
        }
    }
}

type ApiResult<T> = Result<T, ApiError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentSummary {
    pub id: String,
    pub domain: String,
    pub text: String,
    pub candidates: usize,
}

async fn documents(State(store): State<Arc<Store>>) -> Json<Vec<DocumentSummary>> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for r in store.instances() {
        *counts.entry(r.doc_id.as_str()).or_default() += 1;
    }
    Json(
        store
            .documents()
            .iter()
            .map(|d| DocumentSummary {
                id: d.id.clone(),
                domain: d.domain.name().to_string(),
                text: d.text.clone(),
                candidates: counts.get(d.id.as_str()).copied().unwrap_or(0),
            })
            .collect(),
    )
}

#[derive(Deserialize)]
struct CandidateQuery {
    doc: Option<String>,
}

async fn candidates(
    State(store): State<Arc<Store>>,
    Query(q): Query<CandidateQuery>,
) -> ApiResult<Json<Vec<Candidate>>> {
    Ok(Json(store.candidates(q.doc.as_deref())?.into_iter().cloned().collect()))
}

#[derive(Deserialize)]
struct WindowQuery {
    before: Option<usize>,
    after: Option<usize>,
}

/// Full payload of `GET /instance/{id}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstancePayload {
    #[serde(flatten)]
    pub record: InstanceRecord,
    pub context: ContextWindow,
    /// The requesting annotator's state, when the header is present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mine: Option<Annotation>,
    pub annotations: BTreeMap<String, Annotation>,
}

fn annotator(headers: &HeaderMap) -> Option<String> {
    headers
        .get(ANNOTATOR_HEADER)
        .and_then(|v| v.to_str().ok())
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
}

async fn instance(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
    Query(q): Query<WindowQuery>,
    headers: HeaderMap,
) -> ApiResult<Json<InstancePayload>> {
    let record = store
        .instance(&id)
        .ok_or_else(|| StoreError::UnknownInstance(id.clone()))?
        .clone();
    let cfg = store.config();
    let context = store.context(
        &id,
        q.before.unwrap_or(cfg.window_before),
        q.after.unwrap_or(cfg.window_after),
    )?;
    let mine = annotator(&headers).map(|who| store.annotation(&who, &id));
    Ok(Json(InstancePayload {
        record,
        context,
        mine,
        annotations: store.annotations_for(&id),
    }))
}

/// Body of `POST /instance/{id}/frame`. Exactly one of `frame`,
/// `non_superlative` and `skip` must be given.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SubmitRequest {
    pub expected_revision: u64,
    #[serde(default, rename = "override")]
    pub override_warnings: bool,
    #[serde(default)]
    pub frame: Option<SuperlativeFrame>,
    #[serde(default)]
    pub non_superlative: bool,
    #[serde(default)]
    pub skip: bool,
}

async fn submit(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: Bytes,
) -> ApiResult<Json<WriteOutcome>> {
    let who = annotator(&headers)
        .ok_or_else(|| ApiError::new(StatusCode::BAD_REQUEST, format!("missing {ANNOTATOR_HEADER} header")))?;
    if store.instance(&id).is_none() {
        return Err(StoreError::UnknownInstance(id).into());
    }
    let req: SubmitRequest = serde_json::from_slice(&body).map_err(|e| {
        let status = if e.is_data() {
            StatusCode::UNPROCESSABLE_ENTITY
        } else {
            StatusCode::BAD_REQUEST
        };
        ApiError(
            status,
            json!({ "error": "malformed body", "messages": [e.to_string()] }),
        )
    })?;
    let action = match (req.frame, req.non_superlative, req.skip) {
        (Some(frame), false, false) => Action::Frame(frame),
        (None, true, false) => Action::NonSuperlative,
        (None, false, true) => Action::Skip,
        _ => {
            return Err(ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "give exactly one of frame, non_superlative, skip",
            ))
        }
    };
    Ok(Json(store.write(
        &who,
        &id,
        req.expected_revision,
        action,
        req.override_warnings,
    )?))
}

#[derive(Deserialize)]
struct PairQuery {
    annotator_a: Option<String>,
    annotator_b: Option<String>,
    sample: Option<usize>,
    seed: Option<u64>,
}

impl PairQuery {
    fn pair(&self) -> ApiResult<(&str, &str)> {
        match (&self.annotator_a, &self.annotator_b) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "annotator_a and annotator_b are required",
            )),
        }
    }
}

/// Seeded subset of `n` paired instances, kept in their original order.
pub fn sample_pairs(
    a: Vec<AnnotatedInstance>,
    b: Vec<AnnotatedInstance>,
    n: usize,
    seed: u64,
) -> (Vec<AnnotatedInstance>, Vec<AnnotatedInstance>) {
    if n >= a.len() {
        return (a, b);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = sample(&mut rng, a.len(), n).into_vec();
    picked.sort_unstable();
    (
        picked.iter().map(|&i| a[i].clone()).collect(),
        picked.iter().map(|&i| b[i].clone()).collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IaaResponse {
    pub annotator_a: String,
    pub annotator_b: String,
    pub overlap: usize,
    pub instance_ids: Vec<String>,
    pub report: IaaReport,
    pub table: String,
}

async fn iaa(State(store): State<Arc<Store>>, Query(q): Query<PairQuery>) -> ApiResult<Json<IaaResponse>> {
    let (a, b) = q.pair()?;
    let (left, right) = store.overlap(a, b);
    if left.is_empty() {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            format!("{a} and {b} share no decided instance"),
        ));
    }
    let overlap = left.len();
    let (left, right) = match q.sample {
        Some(n) => sample_pairs(left, right, n, q.seed.unwrap_or(0)),
        None => (left, right),
    };
    let report = iaa_report(&left, &right).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.to_string()))?;
    Ok(Json(IaaResponse {
        annotator_a: a.to_string(),
        annotator_b: b.to_string(),
        overlap,
        instance_ids: left.iter().map(|i| i.id.clone()).collect(),
        table: report.render(),
        report,
    }))
}

/// One instance where two annotators differ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disagreement {
    pub instance_id: String,
    /// Differing fields: `is_superlative` or frame slot names.
    pub fields: Vec<String>,
    pub a: Option<SuperlativeFrame>,
    pub b: Option<SuperlativeFrame>,
}

/// Fields on which two decided annotations differ.
pub fn differing_fields(a: &AnnotatedInstance, b: &AnnotatedInstance) -> Vec<String> {
    let (fa, fb) = match (&a.frame, &b.frame) {
        (Some(x), Some(y)) => (x, y),
        (None, None) => return Vec::new(),
        _ => return vec!["is_superlative".to_string()],
    };
    let mut out = Vec::new();
    let checks = [
        ("target", fa.target != fb.target),
        ("cs", fa.cs != fb.cs),
        ("anchor", fa.anchor != fb.anchor),
        ("property", fa.property != fb.property),
        ("orientation", fa.orientation != fb.orientation),
        ("rank", fa.rank != fb.rank),
        ("implicit", fa.implicit != fb.implicit),
        ("amount", fa.amount != fb.amount),
    ];
    for (name, differs) in checks {
        if differs {
            out.push(name.to_string());
        }
    }
    out
}

async fn disagreements(
    State(store): State<Arc<Store>>,
    Query(q): Query<PairQuery>,
) -> ApiResult<Json<Vec<Disagreement>>> {
    let (a, b) = q.pair()?;
    let (left, right) = store.overlap(a, b);
    Ok(Json(
        left.into_iter()
            .zip(right)
            .filter_map(|(x, y)| {
                let fields = differing_fields(&x, &y);
                (!fields.is_empty()).then_some(Disagreement {
                    instance_id: x.id,
                    fields,
                    a: x.frame,
                    b: y.frame,
                })
            })
            .collect(),
    ))
}

#[derive(Deserialize)]
struct ExportQuery {
    annotator: Option<String>,
}

async fn export(State(store): State<Arc<Store>>, Query(q): Query<ExportQuery>) -> Response {
    let body = corpus::export(&store.export(q.annotator.as_deref()));
    ([(header::CONTENT_TYPE, "application/x-ndjson")], body).into_response()
}

async fn progress(State(store): State<Arc<Store>>) -> Json<Vec<Progress>> {
    Json(store.progress())
}
