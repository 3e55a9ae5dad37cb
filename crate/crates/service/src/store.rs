//! In-memory upload store. Tokens expire after a fixed TTL; a restart
//! forgets every token.

use std::collections::HashMap;
use std::hash::{BuildHasher, RandomState};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use craft_core::Signal;

// An expired token keeps answering "gone" for this long before it is
// forgotten entirely.
const TOMBSTONE_LIFETIME: Duration = Duration::from_secs(24 * 3600);

enum Slot {
    Live(Arc<Signal>),
    Expired,
}

struct Entry {
    slot: Slot,
    expires: Instant,
}

#[derive(Debug, Clone)]
pub enum Lookup {
    Live(Arc<Signal>),
    Expired,
    Unknown,
}

pub struct UploadStore {
    ttl: Duration,
    entries: Mutex<HashMap<String, Entry>>,
    counter: AtomicU64,
    salt: RandomState,
}

impl UploadStore {
    pub fn new(ttl: Duration) -> Self {
        UploadStore {
            ttl,
            entries: Mutex::new(HashMap::new()),
            counter: AtomicU64::new(0),
            salt: RandomState::new(),
        }
    }

    pub fn ttl(&self) -> Duration {
        self.ttl
    }

    pub fn insert(&self, signal: Signal) -> String {
        let n = self.counter.fetch_add(1, Ordering::Relaxed);
        let token = format!("{:016x}{:08x}", self.salt.hash_one(n), n);
        let now = Instant::now();
        let mut entries = self.entries.lock().unwrap_or_else(|p| p.into_inner());
        sweep(&mut entries, now);
        entries.insert(
            token.clone(),
            Entry {
                slot: Slot::Live(Arc::new(signal)),
                expires: now + self.ttl,
            },
        );
        token
    }

    pub fn get(&self, token: &str) -> Lookup {
        let now = Instant::now();
        let mut entries = self.entries.lock().unwrap_or_else(|p| p.into_inner());
        sweep(&mut entries, now);
        match entries.get(token) {
            Some(Entry {
                slot: Slot::Live(s), ..
            }) => Lookup::Live(s.clone()),
            Some(Entry {
                slot: Slot::Expired, ..
            }) => Lookup::Expired,
            None => Lookup::Unknown,
        }
    }
}

fn sweep(entries: &mut HashMap<String, Entry>, now: Instant) {
    entries.retain(|_, e| now < e.expires + TOMBSTONE_LIFETIME);
    for e in entries.values_mut() {
        if now >= e.expires {
            e.slot = Slot::Expired;
        }
    }
}
