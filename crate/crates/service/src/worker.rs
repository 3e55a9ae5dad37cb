use std::sync::mpsc;
use std::thread;

use tokio::sync::oneshot;

type Job = Box<dyn FnOnce() + Send>;

/// A single background thread that runs jobs one at a time, in arrival
/// order. Benchmarks go through it so that no two ever overlap.
#[derive(Debug, Clone)]
pub struct SerialWorker {
    tx: mpsc::Sender<Job>,
}

impl SerialWorker {
    pub fn spawn(name: &str) -> Self {
        let (tx, rx) = mpsc::channel::<Job>();
        thread::Builder::new()
            .name(name.into())
            .spawn(move || {
                for job in rx {
                    job();
                }
            })
            .expect("spawn worker thread");
        SerialWorker { tx }
    }

    /// Queues `f` and waits for its result. `None` if the worker is gone.
    pub async fn run<T, F>(&self, f: F) -> Option<T>
    where
        T: Send + 'static,
        F: FnOnce() -> T + Send + 'static,
    {
        let (done, result) = oneshot::channel();
        let job: Job = Box::new(move || {
            let _ = done.send(f());
        });
        self.tx.send(job).ok()?;
        result.await.ok()
    }
}
