//! Minimal scoped-thread parallel map with a configurable worker count.
//!
//! Results land in index slots, so output order never depends on scheduling.

use std::sync::OnceLock;

static THREADS: OnceLock<usize> = OnceLock::new();

pub fn set_thread_count(n: usize) {
    let _ = THREADS.set(n.max(1));
}

fn thread_count() -> usize {
    *THREADS.get_or_init(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    })
}

pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = thread_count().min(items.len().max(1));
    if workers <= 1 {
        return items.iter().map(&f).collect();
    }
    let mut out: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    let chunk = items.len().div_ceil(workers);
    std::thread::scope(|scope| {
        for (ti, out_chunk) in out.chunks_mut(chunk).enumerate() {
            let f = &f;
            let start = ti * chunk;
            scope.spawn(move || {
                for (j, slot) in out_chunk.iter_mut().enumerate() {
                    *slot = Some(f(&items[start + j]));
                }
            });
        }
    });
    out.into_iter().map(|r| r.unwrap()).collect()
}
