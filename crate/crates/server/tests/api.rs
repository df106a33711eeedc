use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use shelf_guess::oracle::enumerate_all;
use shelf_guess::shuffle::{deck_from_placements, PlacementSequence};
use shelf_guess::strategy::{GuesserState, Strategy};
use shelf_guess::{play_game, Bias, ShuffledDeck};
use shelf_guess_server::{App, ServerConfig};
use tower::ServiceExt;

const EXAMPLE_DECK: [usize; 20] = [1, 2, 5, 10, 11, 19, 20, 18, 17, 16, 15, 14, 13, 12, 9, 8, 7, 6, 4, 3];

async fn call(router: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let request = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let request = request.body(body.map_or_else(Body::empty, |b| Body::from(b.to_string()))).unwrap();
    let response = router.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, value)
}

async fn guess(router: &Router, id: &str, label: usize) -> (StatusCode, Value) {
    call(router, "POST", &format!("/api/session/{id}/guess"), Some(json!({ "label": label }))).await
}

fn app_with_deck(order: &[usize], p: &str) -> (App, String) {
    let app = App::new(ServerConfig::default());
    let id = app.store().create_with_deck(Bias::parse(p).unwrap(), ShuffledDeck::from_order(order.to_vec()).unwrap()).unwrap();
    (app, id)
}

#[tokio::test]
async fn example_game_scores_three_lucky_and_fourteen_certified() {
    let (app, id) = app_with_deck(&EXAMPLE_DECK, "1/2");
    let router = app.router();
    let script = [1, 2, 3, 6, 11, 12, 20, 18, 17, 16, 15, 14, 13, 12, 9, 8, 7, 6, 4, 3];
    let mut last = Value::Null;
    for (k, &label) in script.iter().enumerate() {
        let (status, body) = guess(&router, &id, label).await;
        assert_eq!(status, StatusCode::OK, "step {k}: {body}");
        assert_eq!(body["shown"], EXAMPLE_DECK[k]);
        if k < 19 {
            assert!(body.get("deck").is_none(), "deck leaked at step {k}");
        }
        last = body;
    }
    assert_eq!(last["totals"], json!({"x": 17, "l": 3, "c": 14}));
    assert_eq!(last["status"], "finished");
    assert_eq!(last["remaining_count"], 0);
    assert_eq!(last["deck"], json!(EXAMPLE_DECK));

    let (status, body) = guess(&router, &id, 1).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "conflict");
    let (status, _) = call(&router, "GET", &format!("/api/session/{id}/hint"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn two_card_deck_wrong_then_certified() {
    let (app, id) = app_with_deck(&[2, 1], "1/2");
    let router = app.router();
    let (_, body) = guess(&router, &id, 1).await;
    assert_eq!(body["classification"], "incorrect");
    assert_eq!(body["correct"], false);
    assert_eq!(body["shown"], 2);
    let (_, body) = guess(&router, &id, 1).await;
    assert_eq!(body["classification"], "certified-correct");
    assert_eq!(body["totals"], json!({"x": 1, "l": 0, "c": 1}));
}

#[tokio::test]
async fn revealed_and_out_of_range_labels_are_rejected() {
    let (app, id) = app_with_deck(&[1, 3, 4, 2], "1/2");
    let router = app.router();
    guess(&router, &id, 1).await;
    for label in [1, 0, 5] {
        let (status, body) = guess(&router, &id, label).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "label {label}");
        assert_eq!(body["error"], "invalid_request");
    }
    let (status, _) = call(&router, "POST", &format!("/api/session/{id}/guess"), Some(json!({"lbl": 2}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (_, view) = call(&router, "GET", &format!("/api/session/{id}"), None).await;
    assert_eq!(view["history"].as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn hints_follow_the_conditional_law() {
    let app = App::new(ServerConfig::default());
    let router = app.router();
    let (status, created) = call(&router, "POST", "/api/session", Some(json!({"n": 3, "p": "1/2", "seed": 1}))).await;
    assert_eq!(status, StatusCode::CREATED);
    let id = created["session_id"].as_str().unwrap();
    let (_, hint) = call(&router, "GET", &format!("/api/session/{id}/hint"), None).await;
    assert_eq!(hint, json!({"optimal_guess": 1, "conditional_law": [[1, "1/2"], [2, "1/4"], [3, "1/4"]], "certified": false}));

    let (app, id) = app_with_deck(&[3, 4, 2, 1], "1/2");
    let router = app.router();
    guess(&router, &id, 1).await;
    let (_, hint) = call(&router, "GET", &format!("/api/session/{id}/hint"), None).await;
    assert_eq!(hint, json!({"optimal_guess": 4, "conditional_law": [[4, "1"]], "certified": true}));

    let app = App::new(ServerConfig::default());
    let router = app.router();
    let (_, created) = call(&router, "POST", "/api/session", Some(json!({"n": 4, "p": 0.3}))).await;
    assert_eq!(created["p"], "3/10");
    let id = created["session_id"].as_str().unwrap();
    let (_, hint) = call(&router, "GET", &format!("/api/session/{id}/hint"), None).await;
    assert_eq!(hint["optimal_guess"], 4);
}

#[tokio::test]
async fn following_hints_reproduces_the_strategy_on_every_deck() {
    for p in ["1/2", "3/10", "3/4"] {
        let bias = Bias::parse(p).unwrap();
        for n in 1..=7 {
            for index in 0..1u64 << (n - 1) {
                let deck = deck_from_placements(n, &PlacementSequence::from_index(n, index)).unwrap();
                let expected = play_game(&deck, &bias).unwrap();
                let (app, id) = app_with_deck(deck.order(), p);
                let router = app.router();
                let mut state = GuesserState::new(n, Strategy::optimal(&bias).unwrap()).unwrap();
                let mut last = Value::Null;
                for k in 0..n {
                    let (_, hint) = call(&router, "GET", &format!("/api/session/{id}/hint"), None).await;
                    let label = hint["optimal_guess"].as_u64().unwrap() as usize;
                    assert_eq!(label, state.next_guess().unwrap());
                    assert_eq!(label, expected.guesses[k]);
                    let (_, body) = guess(&router, &id, label).await;
                    assert_eq!(body["classification"], json!(expected.classifications[k]));
                    state.observe(deck.order()[k], label).unwrap();
                    last = body;
                }
                assert_eq!(last["totals"], json!(expected.totals), "p = {p}, deck {:?}", deck.order());
            }
        }
    }
}

#[tokio::test]
async fn seeded_sessions_replay_identically() {
    let app = App::new(ServerConfig::default());
    let router = app.router();
    let mut shown = Vec::new();
    for _ in 0..2 {
        let (_, created) = call(&router, "POST", "/api/session", Some(json!({"n": 20, "p": "1/2", "seed": 7}))).await;
        let id = created["session_id"].as_str().unwrap().to_string();
        let mut seq = Vec::new();
        for _ in 0..20 {
            let (_, hint) = call(&router, "GET", &format!("/api/session/{id}/hint"), None).await;
            let label = hint["optimal_guess"].as_u64().unwrap() as usize;
            let (_, body) = guess(&router, &id, label).await;
            seq.push(body["shown"].as_u64().unwrap());
        }
        shown.push(seq);
    }
    assert_eq!(shown[0], shown[1]);
}

#[tokio::test]
async fn session_creation_is_validated() {
    let app = App::new(ServerConfig::default());
    let router = app.router();
    for body in [
        json!({"n": 0, "p": "1/2"}),
        json!({"n": 1001, "p": "1/2"}),
        json!({"n": 5, "p": "0"}),
        json!({"n": 5, "p": "3/2"}),
        json!({"n": 5, "p": "half"}),
        json!({"p": "1/2"}),
    ] {
        let (status, reply) = call(&router, "POST", "/api/session", Some(body.clone())).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");
        assert_eq!(reply["error"], "invalid_request");
        assert!(reply["message"].is_string());
    }
    let (status, created) = call(&router, "POST", "/api/session", Some(json!({"n": 52, "p": "0.75"}))).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(created["p"], "3/4");
    let (status, view) = call(&router, "GET", &format!("/api/session/{}", created["session_id"].as_str().unwrap()), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(view["status"], "active");
    assert!(view.get("deck").is_none());
}

#[tokio::test]
async fn unknown_and_expired_sessions_are_not_found() {
    let app = App::new(ServerConfig { session_ttl: Duration::from_millis(50), cors_origin: None });
    let router = app.router();
    let (status, body) = call(&router, "GET", "/api/session/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["error"], "not_found");

    let (_, created) = call(&router, "POST", "/api/session", Some(json!({"n": 5, "p": "1/2"}))).await;
    let id = created["session_id"].as_str().unwrap().to_string();
    assert_eq!(call(&router, "GET", &format!("/api/session/{id}"), None).await.0, StatusCode::OK);
    tokio::time::sleep(Duration::from_millis(80)).await;
    assert_eq!(call(&router, "GET", &format!("/api/session/{id}"), None).await.0, StatusCode::NOT_FOUND);
    assert_eq!(guess(&router, &id, 1).await.0, StatusCode::NOT_FOUND);

    call(&router, "POST", "/api/session", Some(json!({"n": 5, "p": "1/2"}))).await;
    tokio::time::sleep(Duration::from_millis(80)).await;
    assert_eq!(app.store().purge_expired(), 1);
    assert!(app.store().is_empty());
}

#[tokio::test]
async fn exact_endpoints_serve_rational_strings() {
    let router = App::new(ServerConfig::default()).router();
    let (status, body) = call(&router, "GET", "/api/exact/pmf?n=3&p=1/2", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body.to_string(), r#"{"2":"3/4","3":"1/4"}"#);
    let (_, body) = call(&router, "GET", "/api/exact/pmf?n=2&p=1", None).await;
    assert_eq!(body, json!({"2": "1"}));
    let (_, body) = call(&router, "GET", "/api/exact/pmf?n=4&p=0.5&backend=float", None).await;
    assert_eq!(body, json!({"2": 0.125, "3": 0.75, "4": 0.125}));

    let (_, body) = call(&router, "GET", "/api/exact/position-matrix?n=3&p=1/2", None).await;
    assert_eq!(body["rows"][1], json!(["1/4", "1/2", "1/4"]));

    let (_, body) = call(&router, "GET", "/api/exact/joint?n=4&p=3/4", None).await;
    let enumerated = enumerate_all(4, &Bias::parse("3/4").unwrap()).unwrap();
    let entries = body["entries"].as_array().unwrap();
    assert_eq!(entries.len(), enumerated.joint.len());
    for e in entries {
        let key = (e[0][0].as_u64().unwrap() as usize, e[0][1].as_u64().unwrap() as usize);
        let expected = shelf_guess::scalar::render_rational(&enumerated.joint[&key]);
        assert_eq!(e[1], expected);
    }

    for uri in ["/api/exact/pmf?n=0&p=1/2", "/api/exact/pmf?n=3", "/api/exact/pmf?n=3&p=2", "/api/exact/joint?n=100000&p=1/2"] {
        let (status, body) = call(&router, "GET", uri, None).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{uri}");
        assert_eq!(body["error"], "invalid_request");
    }
}
