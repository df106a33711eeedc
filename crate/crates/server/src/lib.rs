//! HTTP API for playing the guessing game against a shelf-shuffled deck.
//!
//! | method | path | body / query |
//! |---|---|---|
//! | POST | `/api/session` | `{"n": 20, "p": "1/2", "seed": 7}` |
//! | POST | `/api/session/{id}/guess` | `{"label": 3}` |
//! | GET | `/api/session/{id}` | |
//! | GET | `/api/session/{id}/hint` | |
//! | GET | `/api/exact/pmf` | `?n=&p=&backend=` |
//! | GET | `/api/exact/joint` | `?n=&p=&backend=` |
//! | GET | `/api/exact/position-matrix` | `?n=&p=&backend=` |
//!
//! `p` is an `"a/b"` string or a decimal. Errors are returned as
//! `{"error": code, "message": text}` with status 400, 404 or 409.
//!
//! ```no_run
//! # async fn run() -> std::io::Result<()> {
//! let config = shelf_guess_server::ServerConfig::default();
//! shelf_guess_server::serve("127.0.0.1:8080".parse().unwrap(), config).await
//! # }
//! ```

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{HeaderValue, StatusCode};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use shelf_guess::Bias;
use tower_http::cors::{Any, CorsLayer};

pub mod error;
pub mod exact;
pub mod session;

pub use error::ApiError;
pub use session::{GuessOutcome, Hint, Session, SessionStore, SessionView, Status, Step};

pub const MAX_N: usize = 1000;

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub session_ttl: Duration,
    /// Origin allowed by CORS; any origin when unset.
    pub cors_origin: Option<String>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig { session_ttl: Duration::from_secs(3600), cors_origin: None }
    }
}

/// Shared state behind the router.
#[derive(Debug, Clone)]
pub struct App {
    store: Arc<SessionStore>,
    config: ServerConfig,
}

impl App {
    pub fn new(config: ServerConfig) -> Self {
        App { store: Arc::new(SessionStore::new(config.session_ttl)), config }
    }

    pub fn store(&self) -> &SessionStore {
        &self.store
    }

    pub fn router(&self) -> Router {
        let cors = match &self.config.cors_origin {
            Some(origin) => match HeaderValue::from_str(origin) {
                Ok(v) => CorsLayer::new().allow_origin(v),
                Err(_) => CorsLayer::new(),
            },
            None => CorsLayer::new().allow_origin(Any),
        }
        .allow_methods(Any)
        .allow_headers(Any);

        Router::new()
            .route("/api/session", post(create_session))
            .route("/api/session/{id}", get(get_session))
            .route("/api/session/{id}/guess", post(submit_guess))
            .route("/api/session/{id}/hint", get(hint))
            .route("/api/exact/pmf", get(exact::pmf))
            .route("/api/exact/joint", get(exact::joint))
            .route("/api/exact/position-matrix", get(exact::matrix))
            .layer(cors)
            .with_state(self.store.clone())
    }
}

/// Binds `addr` and serves until the process ends, purging expired
/// sessions once a minute.
pub async fn serve(addr: SocketAddr, config: ServerConfig) -> std::io::Result<()> {
    let app = App::new(config);
    let store = app.store.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            store.purge_expired();
        }
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app.router()).await
}

type Store = State<Arc<SessionStore>>;

/// `p` may arrive as a JSON string or number.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum BiasInput {
    Text(String),
    Number(f64),
}

#[derive(Debug, Deserialize)]
struct CreateRequest {
    n: usize,
    p: BiasInput,
    seed: Option<u64>,
}

#[derive(Debug, Serialize)]
struct CreateResponse {
    session_id: String,
    n: usize,
    p: Bias,
}

#[derive(Debug, Deserialize)]
struct GuessRequest {
    label: usize,
}

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    payload.map(|Json(t)| t).map_err(|e| ApiError::invalid(e.body_text()))
}

async fn create_session(
    State(store): Store,
    payload: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<(StatusCode, Json<CreateResponse>), ApiError> {
    let req = body(payload)?;
    if !(1..=MAX_N).contains(&req.n) {
        return Err(ApiError::invalid(format!("n must be between 1 and {MAX_N}, got {}", req.n)));
    }
    let bias = match req.p {
        BiasInput::Text(s) => Bias::parse(&s)?,
        BiasInput::Number(x) => Bias::parse(&x.to_string())?,
    };
    let session_id = store.create(req.n, bias.clone(), req.seed)?;
    Ok((StatusCode::CREATED, Json(CreateResponse { session_id, n: req.n, p: bias })))
}

async fn submit_guess(
    State(store): Store,
    Path(id): Path<String>,
    payload: Result<Json<GuessRequest>, JsonRejection>,
) -> Result<Json<GuessOutcome>, ApiError> {
    let req = body(payload)?;
    let session = store.get(&id)?;
    let mut session = session.write().map_err(|_| ApiError::internal("session lock poisoned"))?;
    Ok(Json(session.guess(req.label)?))
}

async fn get_session(State(store): Store, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    let session = store.get(&id)?;
    let view = session.read().map_err(|_| ApiError::internal("session lock poisoned"))?.view();
    Ok(Json(view))
}

async fn hint(State(store): Store, Path(id): Path<String>) -> Result<Json<Hint>, ApiError> {
    let session = store.get(&id)?;
    let hint = session.read().map_err(|_| ApiError::internal("session lock poisoned"))?.hint()?;
    Ok(Json(hint))
}
