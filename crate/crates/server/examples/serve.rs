//! Starts the API on the address given as the first argument
//! (default 127.0.0.1:8080).

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let addr = std::env::args().nth(1).unwrap_or_else(|| "127.0.0.1:8080".into());
    let addr = addr.parse().expect("address like 127.0.0.1:8080");
    shelf_guess_server::serve(addr, shelf_guess_server::ServerConfig::default()).await
}
