use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::time::Duration;

use clap::Parser;

pub const DEFAULT_PORT: u16 = 8573;
pub const DEFAULT_UPLOAD_LIMIT: usize = 20 * 1024 * 1024;
pub const DEFAULT_UPLOAD_TTL: Duration = Duration::from_secs(3600);

#[derive(Debug, Clone)]
pub struct Config {
    pub bind: IpAddr,
    pub port: u16,
    /// Extra WAV clips served next to the built-in ones.
    pub clip_dir: Option<PathBuf>,
    /// Largest accepted upload, bytes of WAV data.
    pub upload_limit: usize,
    pub upload_ttl: Duration,
    /// Origins allowed to call the API from a browser. Empty disables CORS.
    pub cors_origins: Vec<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            bind: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: DEFAULT_PORT,
            clip_dir: None,
            upload_limit: DEFAULT_UPLOAD_LIMIT,
            upload_ttl: DEFAULT_UPLOAD_TTL,
            cors_origins: Vec::new(),
        }
    }
}

impl Config {
    pub fn addr(&self) -> SocketAddr {
        SocketAddr::new(self.bind, self.port)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "craft-serve",
    version,
    about = "HTTP JSON API for the craft prosody analyses"
)]
pub struct ServeArgs {
    #[arg(long, env = "CRAFT_BIND", default_value = "127.0.0.1")]
    pub bind: IpAddr,
    #[arg(long, env = "CRAFT_PORT", default_value_t = DEFAULT_PORT)]
    pub port: u16,
    #[arg(long, env = "CRAFT_CLIP_DIR")]
    pub clip_dir: Option<PathBuf>,
    /// Upload size limit in bytes
    #[arg(long, env = "CRAFT_UPLOAD_LIMIT", default_value_t = DEFAULT_UPLOAD_LIMIT)]
    pub upload_limit: usize,
    /// Seconds an uploaded clip stays usable
    #[arg(long, env = "CRAFT_UPLOAD_TTL", default_value_t = DEFAULT_UPLOAD_TTL.as_secs())]
    pub upload_ttl: u64,
    /// Allowed browser origin, repeatable or comma separated
    #[arg(long = "cors-origin", env = "CRAFT_CORS_ORIGINS", value_delimiter = ',')]
    pub cors_origins: Vec<String>,
}

impl From<ServeArgs> for Config {
    fn from(a: ServeArgs) -> Self {
        Config {
            bind: a.bind,
            port: a.port,
            clip_dir: a.clip_dir,
            upload_limit: a.upload_limit,
            upload_ttl: Duration::from_secs(a.upload_ttl),
            cors_origins: a.cors_origins.into_iter().filter(|o| !o.trim().is_empty()).collect(),
        }
    }
}
