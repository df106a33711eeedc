//! Replays the 20-card example game through the HTTP API in-process,
//! asking for a hint before every guess.

use axum::body::Body;
use axum::http::Request;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use shelf_guess::{Bias, ShuffledDeck};
use shelf_guess_server::{App, ServerConfig};
use tower::ServiceExt;

async fn call(router: &axum::Router, method: &str, uri: &str, body: Option<Value>) -> Value {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let response = router.clone().oneshot(request).await.unwrap();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    serde_json::from_slice(&bytes).unwrap()
}

#[tokio::main]
async fn main() {
    let app = App::new(ServerConfig::default());
    let deck = ShuffledDeck::from_order(vec![1, 2, 5, 10, 11, 19, 20, 18, 17, 16, 15, 14, 13, 12, 9, 8, 7, 6, 4, 3]).unwrap();
    let id = app.store().create_with_deck(Bias::half(), deck).unwrap();
    let router = app.router();

    loop {
        let hint = call(&router, "GET", &format!("/api/session/{id}/hint"), None).await;
        let label = hint["optimal_guess"].clone();
        let outcome = call(&router, "POST", &format!("/api/session/{id}/guess"), Some(json!({ "label": label }))).await;
        let law: Vec<String> = hint["conditional_law"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| format!("{}:{}", e[0], e[1].as_str().unwrap()))
            .collect();
        println!("guess {label:>2}  shown {:>2}  {:<17}  law {}", outcome["shown"], outcome["classification"].as_str().unwrap(), law.join(" "));
        if outcome["status"] == "finished" {
            let t = &outcome["totals"];
            println!("{} correct: {} lucky, {} certified", t["x"], t["l"], t["c"]);
            println!("deck {}", outcome["deck"]);
            break;
        }
    }
}
