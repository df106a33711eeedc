//! Read-only exact-law queries.

use axum::extract::rejection::QueryRejection;
use axum::extract::Query;
use axum::Json;
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{Map, Value};
use shelf_guess::document::{pmf_map, JointDocument, MatrixDocument};
use shelf_guess::exact::{joint_pmf, xn_pmf};
use shelf_guess::{position_matrix, Backend, Bias};

use crate::error::ApiError;

#[derive(Debug, Deserialize)]
pub struct LawQuery {
    n: usize,
    p: String,
    backend: Option<Backend>,
}

/// Largest `n` served per endpoint and backend, keeping each request to
/// well under a second.
fn cap(endpoint: &str, backend: Backend) -> usize {
    match (endpoint, backend) {
        ("pmf", Backend::Exact) => 400,
        ("pmf", Backend::Float) => 20_000,
        ("joint", Backend::Exact) => 80,
        ("joint", Backend::Float) => 300,
        (_, Backend::Exact) => 120,
        (_, Backend::Float) => 1000,
    }
}

fn parse(query: Result<Query<LawQuery>, QueryRejection>, endpoint: &str) -> Result<(usize, Bias, Backend), ApiError> {
    let Query(q) = query.map_err(|e| ApiError::invalid(e.body_text()))?;
    let bias = Bias::parse(&q.p)?;
    let backend = q.backend.unwrap_or(Backend::Exact);
    let limit = cap(endpoint, backend);
    if q.n == 0 || q.n > limit {
        return Err(ApiError::invalid(format!("n must be between 1 and {limit} for {endpoint} ({backend}), got {}", q.n)));
    }
    Ok((q.n, bias, backend))
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError::internal(e.to_string()))?
}

/// `{"k": prob, ...}` for the law of the number of correct guesses.
pub async fn pmf(query: Result<Query<LawQuery>, QueryRejection>) -> Result<Json<Map<String, Value>>, ApiError> {
    let (n, bias, backend) = parse(query, "pmf")?;
    blocking(move || {
        Ok(Json(match backend {
            Backend::Exact => pmf_map(&xn_pmf::<BigRational>(n, &bias)?),
            Backend::Float => pmf_map(&xn_pmf::<f64>(n, &bias)?),
        }))
    })
    .await
}

pub async fn joint(query: Result<Query<LawQuery>, QueryRejection>) -> Result<Json<JointDocument>, ApiError> {
    let (n, bias, backend) = parse(query, "joint")?;
    blocking(move || {
        Ok(Json(match backend {
            Backend::Exact => JointDocument::from_joint(&joint_pmf::<BigRational>(n, &bias)?),
            Backend::Float => JointDocument::from_joint(&joint_pmf::<f64>(n, &bias)?),
        }))
    })
    .await
}

pub async fn matrix(query: Result<Query<LawQuery>, QueryRejection>) -> Result<Json<MatrixDocument>, ApiError> {
    let (n, bias, backend) = parse(query, "position-matrix")?;
    blocking(move || {
        Ok(Json(match backend {
            Backend::Exact => MatrixDocument::from_matrix(&position_matrix::<BigRational>(n, &bias)?, &bias),
            Backend::Float => MatrixDocument::from_matrix(&position_matrix::<f64>(n, &bias)?, &bias),
        }))
    })
    .await
}
