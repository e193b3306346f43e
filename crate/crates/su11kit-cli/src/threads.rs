//! Deterministic data parallelism: work items are split into contiguous
//! chunks, each thread fills its own slice, and results keep their index
//! order, so output bytes do not depend on the thread count.

/// Parallelism cap from `SU11KIT_THREADS`; defaults to single-threaded.
pub fn thread_cap() -> usize {
    std::env::var("SU11KIT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

/// Map `f` over `0..n` in index order, using up to `thread_cap()` threads.
pub fn parallel_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let threads = thread_cap().min(n.max(1));
    if threads <= 1 {
        return (0..n).map(f).collect();
    }
    let mut out: Vec<Option<T>> = Vec::with_capacity(n);
    out.resize_with(n, || None);
    let chunk = n.div_ceil(threads);
    std::thread::scope(|scope| {
        for (t, slice) in out.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || {
                for (j, slot) in slice.iter_mut().enumerate() {
                    *slot = Some(f(t * chunk + j));
                }
            });
        }
    });
    out.into_iter().map(|v| v.expect("all slots filled")).collect()
}
