use std::process::ExitCode;

use clap::Parser;
use craft_service::clips::Catalog;
use craft_service::config::{Config, ServeArgs};
use craft_service::{app, AppState};
use tracing_subscriber::EnvFilter;

#[tokio::main]
async fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .init();
    let config = Config::from(ServeArgs::parse());
    match serve(config).await {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

async fn serve(config: Config) -> Result<(), String> {
    let catalog = match &config.clip_dir {
        Some(dir) => Catalog::with_dir(dir).map_err(|e| e.to_string())?,
        None => Catalog::builtin(),
    };
    let addr = config.addr();
    let router = app(AppState::new(config, catalog))?;
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| format!("cannot bind {addr}: {e}"))?;
    tracing::info!("listening on http://{addr}");
    axum::serve(listener, router)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| e.to_string())
}
