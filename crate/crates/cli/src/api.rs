//! Read-only HTTP API over an analysis snapshot.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{any, get, post};
use axum::{Json, Router};
use ontotopic::client::{execute, BindingTable, EndpointConfig};
use ontotopic::clustering::{TopicId, TopicNode};
use ontotopic::ingest::{schema_stats, SchemaGraph, StatsReport};
use ontotopic::query::{parse_sparql, GeneratedQuery};
use ontotopic::ranking::{io_degrees, CriterionRanks, TopicMeasures, TopicRankRow};
use ontotopic::snapshot::{AnalysisParams, AnalysisSnapshot};
use ontotopic::Error;
use serde::{Deserialize, Serialize};
use tower_http::services::{ServeDir, ServeFile};

/// Entries in the per-topic top predicate and concept lists.
pub const TOPIC_TOP_N: usize = 5;
pub const DEFAULT_EXECUTE_TIMEOUT: Duration = Duration::from_secs(30);

pub struct AppState {
    pub snapshot: AnalysisSnapshot,
    pub default_endpoint: Option<String>,
    pub timeout: Duration,
}

impl AppState {
    pub fn new(snapshot: AnalysisSnapshot) -> Self {
        AppState {
            snapshot,
            default_endpoint: None,
            timeout: DEFAULT_EXECUTE_TIMEOUT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    InvalidRequest,
    InvalidSparql,
    UnknownTopic,
    NotFound,
    MissingEndpoint,
    EndpointError,
    TransportError,
    ResultsFormat,
    Internal,
}

impl ErrorCode {
    pub fn status(self) -> StatusCode {
        match self {
            ErrorCode::InvalidRequest | ErrorCode::InvalidSparql | ErrorCode::MissingEndpoint => {
                StatusCode::BAD_REQUEST
            }
            ErrorCode::UnknownTopic | ErrorCode::NotFound => StatusCode::NOT_FOUND,
            ErrorCode::EndpointError | ErrorCode::TransportError | ErrorCode::ResultsFormat => {
                StatusCode::BAD_GATEWAY
            }
            ErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        ApiError {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::SparqlSyntax { .. } => ErrorCode::InvalidSparql,
            Error::InvalidArgument(_) => ErrorCode::InvalidRequest,
            Error::Endpoint { .. } => ErrorCode::EndpointError,
            Error::Transport(_) => ErrorCode::TransportError,
            Error::ResultsFormat(_) => ErrorCode::ResultsFormat,
            _ => ErrorCode::Internal,
        };
        ApiError::new(code, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.code.status(), Json(self)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DatasetView {
    pub dataset_id: String,
    pub created_at: u64,
    pub params: AnalysisParams,
    pub stats: StatsReport,
    pub level_shape: String,
    pub leaf_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScoredItem {
    pub iri: String,
    pub label: String,
    pub score: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TopicSummary {
    pub topic_id: TopicId,
    /// Position in the final ranking, 1 is best.
    pub overall_rank: usize,
    pub overall: f64,
    pub ranks: CriterionRanks,
    pub measures: TopicMeasures,
    #[serde(rename = "meanSW")]
    pub mean_sw: f64,
    pub predicate_count: usize,
    pub query_count: usize,
    /// Member predicates by pio.
    pub top_predicates: Vec<ScoredItem>,
    /// Concepts of the topic subgraph by their degree inside it.
    pub top_concepts: Vec<ScoredItem>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TopicDetail {
    pub topic_id: TopicId,
    pub is_leaf: bool,
    /// Ancestors from the root down, excluding the topic itself.
    pub path: Vec<TopicId>,
    pub children: Vec<TopicId>,
    pub contribution: f64,
    #[serde(rename = "meanSW")]
    pub mean_sw: Option<f64>,
    pub nsw: Option<f64>,
    pub chosen_k: Option<usize>,
    /// Present for leaves only.
    pub rank: Option<TopicRankRow>,
    pub predicates: Vec<ScoredItem>,
    pub concepts: Vec<ScoredItem>,
    pub stats: Option<StatsReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Concept,
    Predicate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Domain,
    Range,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: String,
    pub label: String,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub source: String,
    pub target: String,
    pub kind: EdgeKind,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

impl TopicGraph {
    /// Concepts first, then predicates; domain edges run concept to
    /// predicate and range edges predicate to concept.
    pub fn from_schema(g: &SchemaGraph) -> Self {
        let node = |iri: &String, kind| GraphNode {
            id: iri.clone(),
            label: g.label(iri).to_string(),
            kind,
        };
        let nodes = g
            .concepts()
            .iter()
            .map(|c| node(c, NodeKind::Concept))
            .chain(g.predicates().iter().map(|p| node(p, NodeKind::Predicate)))
            .collect();
        let edge = |(s, t): &(String, String), n: &u64, kind| GraphEdge {
            source: s.clone(),
            target: t.clone(),
            kind,
            count: *n,
        };
        let edges = g
            .domain_edges()
            .iter()
            .map(|(k, n)| edge(k, n, EdgeKind::Domain))
            .chain(
                g.range_edges()
                    .iter()
                    .map(|(k, n)| edge(k, n, EdgeKind::Range)),
            )
            .collect();
        TopicGraph { nodes, edges }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExecuteRequest {
    /// Falls back to the server's default endpoint.
    #[serde(default)]
    pub endpoint_url: Option<String>,
    pub sparql: String,
    #[serde(default)]
    pub timeout_secs: Option<u64>,
}

fn subgraph(snap: &AnalysisSnapshot, node: &TopicNode) -> SchemaGraph {
    snap.schema
        .induced(node.predicates.iter().map(String::as_str))
}

fn predicate_items(snap: &AnalysisSnapshot, node: &TopicNode) -> Vec<ScoredItem> {
    let mut items: Vec<ScoredItem> = node
        .predicates
        .iter()
        .map(|p| ScoredItem {
            iri: p.clone(),
            label: snap.schema.label(p).to_string(),
            score: snap.degrees.pio(p),
        })
        .collect();
    sort_items(&mut items);
    items
}

fn concept_items(sub: &SchemaGraph) -> Vec<ScoredItem> {
    let local = io_degrees(sub);
    let mut items: Vec<ScoredItem> = sub
        .concepts()
        .iter()
        .map(|c| ScoredItem {
            iri: c.clone(),
            label: sub.label(c).to_string(),
            score: local.cio(c),
        })
        .collect();
    sort_items(&mut items);
    items
}

fn sort_items(items: &mut [ScoredItem]) {
    items.sort_by(|a, b| b.score.cmp(&a.score).then_with(|| a.iri.cmp(&b.iri)));
}

fn find_topic<'a>(snap: &'a AnalysisSnapshot, raw: &str) -> Result<&'a TopicNode, ApiError> {
    let unknown = || ApiError::new(ErrorCode::UnknownTopic, format!("unknown topic `{raw}`"));
    let id: TopicId = raw.parse().map_err(|_| unknown())?;
    snap.hierarchy.find(id).ok_or_else(unknown)
}

pub fn dataset_view(snap: &AnalysisSnapshot) -> DatasetView {
    DatasetView {
        dataset_id: snap.dataset_id.clone(),
        created_at: snap.created_at,
        params: snap.params,
        stats: snap.stats,
        level_shape: snap.hierarchy.shape_string(),
        leaf_count: snap.hierarchy.leaves().len(),
    }
}

/// Leaf summaries in final rank order.
pub fn topic_summaries(snap: &AnalysisSnapshot) -> Vec<TopicSummary> {
    let mut rows: Vec<&TopicRankRow> = snap.ranking.rows.iter().collect();
    rows.sort_by_key(|r| (r.final_position, r.topic_id));
    rows.into_iter()
        .filter_map(|row| {
            let node = snap.hierarchy.find(row.topic_id)?;
            let mut top_predicates = predicate_items(snap, node);
            top_predicates.truncate(TOPIC_TOP_N);
            let mut top_concepts = concept_items(&subgraph(snap, node));
            top_concepts.truncate(TOPIC_TOP_N);
            Some(TopicSummary {
                topic_id: row.topic_id,
                overall_rank: row.final_position,
                overall: row.overall,
                ranks: row.ranks,
                measures: row.measures,
                mean_sw: row.measures.mean_sw,
                predicate_count: node.predicates.len(),
                query_count: snap.queries.get(&row.topic_id).map_or(0, Vec::len),
                top_predicates,
                top_concepts,
            })
        })
        .collect()
}

pub fn topic_detail(snap: &AnalysisSnapshot, node: &TopicNode) -> TopicDetail {
    let sub = subgraph(snap, node);
    let mut path = Vec::new();
    let mut cur = &snap.hierarchy.root;
    while cur.id != node.id {
        path.push(cur.id);
        match cur
            .children
            .iter()
            .find(|c| c.predicates.iter().any(|p| node.predicates.contains(p)))
        {
            Some(next) => cur = next,
            None => break,
        }
    }
    TopicDetail {
        topic_id: node.id,
        is_leaf: node.is_leaf(),
        path,
        children: node.children.iter().map(|c| c.id).collect(),
        contribution: node.contribution,
        mean_sw: node.mean_sw,
        nsw: node.nsw,
        chosen_k: node.chosen_k,
        rank: snap
            .ranking
            .rows
            .iter()
            .find(|r| r.topic_id == node.id)
            .cloned(),
        predicates: predicate_items(snap, node),
        concepts: concept_items(&sub),
        stats: schema_stats(&sub).ok(),
    }
}

async fn datasets(State(st): State<Arc<AppState>>) -> Json<Vec<DatasetView>> {
    Json(vec![dataset_view(&st.snapshot)])
}

async fn topics(State(st): State<Arc<AppState>>) -> Json<Vec<TopicSummary>> {
    Json(topic_summaries(&st.snapshot))
}

async fn topic(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<TopicDetail> {
    let node = find_topic(&st.snapshot, &id)?;
    Ok(Json(topic_detail(&st.snapshot, node)))
}

async fn topic_graph(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> ApiResult<TopicGraph> {
    let node = find_topic(&st.snapshot, &id)?;
    Ok(Json(TopicGraph::from_schema(&subgraph(&st.snapshot, node))))
}

async fn topic_queries(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> ApiResult<Vec<GeneratedQuery>> {
    let node = find_topic(&st.snapshot, &id)?;
    Ok(Json(
        st.snapshot
            .queries
            .get(&node.id)
            .cloned()
            .unwrap_or_default(),
    ))
}

async fn run_query(
    State(st): State<Arc<AppState>>,
    body: Result<Json<ExecuteRequest>, JsonRejection>,
) -> ApiResult<BindingTable> {
    let Json(req) = body.map_err(|e| ApiError::new(ErrorCode::InvalidRequest, e.body_text()))?;
    parse_sparql(&req.sparql)?;
    let url = req
        .endpoint_url
        .filter(|u| !u.trim().is_empty())
        .or_else(|| st.default_endpoint.clone())
        .ok_or_else(|| {
            ApiError::new(
                ErrorCode::MissingEndpoint,
                "no endpointUrl given and no default endpoint configured",
            )
        })?;
    let timeout = req.timeout_secs.map_or(st.timeout, Duration::from_secs);
    let cfg = EndpointConfig::new(&url)?.with_timeout(timeout);
    let table = tokio::task::spawn_blocking(move || execute(&cfg, &req.sparql))
        .await
        .map_err(|e| ApiError::new(ErrorCode::Internal, e.to_string()))??;
    Ok(Json(table))
}

async fn api_not_found() -> ApiError {
    ApiError::new(ErrorCode::NotFound, "no such API route")
}

const LANDING: &str = "<!doctype html>\n<title>ontotopic</title>\n<p>API at <a href=\"/api/topics\">/api/topics</a>. Start with <code>--assets DIR</code> to serve the explorer.</p>\n";

/// API routes, plus the explorer's static files from `assets` (with
/// `index.html` as the fallback for client-side routes).
pub fn router(state: Arc<AppState>, assets: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/datasets", get(datasets))
        .route("/api/topics", get(topics))
        .route("/api/topics/:id", get(topic))
        .route("/api/topics/:id/graph", get(topic_graph))
        .route("/api/topics/:id/queries", get(topic_queries))
        .route("/api/execute", post(run_query))
        .route("/api", any(api_not_found))
        .route("/api/*rest", any(api_not_found))
        .with_state(state);
    match assets {
        Some(dir) => {
            let index = ServeFile::new(dir.join("index.html"));
            api.fallback_service(ServeDir::new(dir).fallback(index))
        }
        None => api.route("/", get(|| async { Html(LANDING) })),
    }
}
