use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use proofblocks::{grade_ordering, render_student_view, resolve_ordering, Exec, Score, Status};
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::services::ServeDir;

use crate::store::{title_of, QuestionStore};

/// Largest seed handed out when the client does not choose one. Seeds stay
/// below 2^53 so browsers can echo them back without losing precision.
const DEFAULT_SEED_LIMIT: u64 = 1 << 53;

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    /// Origins allowed by CORS. `*` allows any origin; empty disables CORS.
    pub allowed_origins: Vec<String>,
    /// Directory served under `/` for everything that is not an API route.
    pub static_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionSummary {
    pub id: String,
    pub title: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradeRequest {
    pub seed: u64,
    pub ordering: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeResponse {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_failure: Option<usize>,
    pub score: Score,
    pub attempt_echo: GradeRequest,
}

#[derive(Deserialize)]
struct SeedQuery {
    seed: Option<u64>,
}

#[derive(Serialize)]
struct ErrorBody {
    error: String,
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (
        status,
        Json(ErrorBody {
            error: message.into(),
        }),
    )
        .into_response()
}

fn not_found(id: &str) -> Response {
    error(StatusCode::NOT_FOUND, format!("no question `{id}`"))
}

async fn list_questions(State(store): State<Arc<QuestionStore>>) -> Json<Vec<QuestionSummary>> {
    Json(
        store
            .ids()
            .map(|id| QuestionSummary {
                id: id.to_string(),
                title: title_of(&store.question(id).unwrap().prompt),
            })
            .collect(),
    )
}

async fn get_question(
    State(store): State<Arc<QuestionStore>>,
    Path(id): Path<String>,
    Query(query): Query<SeedQuery>,
) -> Response {
    let Some(question) = store.question(&id) else {
        return not_found(&id);
    };
    let seed = query
        .seed
        .unwrap_or_else(|| rand::random::<u64>() % DEFAULT_SEED_LIMIT);
    Json(render_student_view(question, seed)).into_response()
}

async fn post_grade(
    State(store): State<Arc<QuestionStore>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Response {
    if store.entry(&id).is_none() {
        return not_found(&id);
    }
    let request: GradeRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, format!("malformed grade request: {e}")),
    };
    // The subset DP can take a while on large questions; keep it off the
    // async workers.
    let graded = tokio::task::spawn_blocking(move || {
        let entry = store.entry(&id).expect("checked above");
        let tags = resolve_ordering(&entry.question, request.seed, &request.ordering);
        grade_ordering(&entry.graph, entry.question.options, &tags, Exec::default())
            .map(|outcome| GradeResponse {
                status: outcome.status,
                first_failure: outcome.first_failure,
                score: outcome.score,
                attempt_echo: request,
            })
    })
    .await;
    match graded {
        Ok(Ok(response)) => Json(response).into_response(),
        Ok(Err(e)) => error(StatusCode::UNPROCESSABLE_ENTITY, format!("cannot grade: {e}")),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, format!("grading failed: {e}")),
    }
}

fn cors(origins: &[String]) -> Option<CorsLayer> {
    if origins.is_empty() {
        return None;
    }
    let allow = if origins.iter().any(|o| o == "*") {
        AllowOrigin::any()
    } else {
        let values: Vec<HeaderValue> = origins
            .iter()
            .filter_map(|o| match HeaderValue::from_str(o) {
                Ok(v) => Some(v),
                Err(_) => {
                    log::warn!("ignoring invalid CORS origin {o:?}");
                    None
                }
            })
            .collect();
        AllowOrigin::list(values)
    };
    Some(
        CorsLayer::new()
            .allow_origin(allow)
            .allow_methods([Method::GET, Method::POST])
            .allow_headers([header::CONTENT_TYPE]),
    )
}

/// The API routes plus optional static files and CORS.
pub fn router(store: Arc<QuestionStore>, config: &ServiceConfig) -> Router {
    let mut app = Router::new()
        .route("/api/questions", get(list_questions))
        .route("/api/questions/{id}", get(get_question))
        .route("/api/questions/{id}/grade", post(post_grade))
        .with_state(store);
    if let Some(dir) = &config.static_dir {
        app = app.fallback_service(ServeDir::new(dir));
    }
    if let Some(layer) = cors(&config.allowed_origins) {
        app = app.layer(layer);
    }
    app
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, store: QuestionStore, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(store), &config)).await
}
