//! Order-preserving fan-out over scoped threads.

use std::thread;

/// Applies `f` to every item using up to `workers` threads and returns the
/// results in input order. Item `i` is handled by worker `i % workers`, so the
/// outputs do not depend on the worker count.
pub(crate) fn map_shards<I, T, E, F>(items: &[I], workers: usize, f: F) -> Result<Vec<T>, E>
where
    I: Sync,
    T: Send,
    E: Send,
    F: Fn(&I) -> Result<T, E> + Sync,
{
    let workers = workers.clamp(1, items.len().max(1));
    if workers == 1 {
        return items.iter().map(&f).collect();
    }
    let f = &f;
    let mut slots: Vec<Option<Result<T, E>>> = (0..items.len()).map(|_| None).collect();
    thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    items
                        .iter()
                        .enumerate()
                        .skip(w)
                        .step_by(workers)
                        .map(|(i, item)| (i, f(item)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots.into_iter().map(|r| r.expect("every shard ran")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order() {
        let items: Vec<u32> = (0..37).collect();
        for workers in [1, 2, 5, 64] {
            let out: Vec<u32> = map_shards(&items, workers, |&x| Ok::<_, ()>(x * x)).unwrap();
            assert_eq!(out, items.iter().map(|x| x * x).collect::<Vec<_>>());
        }
    }

    #[test]
    fn propagates_errors() {
        let items = [1, 2, 3];
        let r: Result<Vec<i32>, &str> = map_shards(&items, 2, |&x| if x == 2 { Err("bad") } else { Ok(x) });
        assert_eq!(r, Err("bad"));
    }
}
