//! Order-preserving parallel map over independent grid points.
//!
//! The thread count is capped by the `CIRCLEOP_THREADS` environment variable
//! when set; results are assembled by index, so output is deterministic
//! regardless of scheduling.

pub fn thread_cap() -> usize {
    std::env::var("CIRCLEOP_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    let threads = thread_cap().min(items.len()).max(1);
    if threads == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    let mut out: Vec<Option<U>> = Vec::with_capacity(items.len());
    out.resize_with(items.len(), || None);
    std::thread::scope(|scope| {
        let mut rest = out.as_mut_slice();
        let mut offset = 0usize;
        let fref = &f;
        for _ in 0..threads {
            let take = chunk.min(rest.len());
            if take == 0 {
                break;
            }
            let (head, tail) = rest.split_at_mut(take);
            rest = tail;
            let slice = &items[offset..offset + take];
            offset += take;
            scope.spawn(move || {
                for (slot, item) in head.iter_mut().zip(slice) {
                    *slot = Some(fref(item));
                }
            });
        }
    });
    out.into_iter().map(|o| o.expect("worker filled slot")).collect()
}
