//! Ordered parallel execution of independent work items.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::error::{Error, Result};

/// Runs `work(i, &items[i])` for every item with at most `jobs` items in
/// flight and returns the results in input order. After the first failure no
/// new items are started; items already running are drained and every failure
/// is reported by index.
pub fn schedule<I, T, F>(items: &[I], jobs: usize, work: F) -> Result<Vec<T>>
where
    I: Sync,
    T: Send,
    F: Fn(usize, &I) -> Result<T> + Sync,
{
    if jobs == 0 {
        return Err(Error::InvalidParameter("jobs must be at least 1".into()));
    }
    let n = items.len();
    let slots: Vec<Mutex<Option<Result<T>>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let failed = AtomicBool::new(false);

    let worker = || loop {
        if failed.load(Ordering::SeqCst) {
            break;
        }
        let i = next.fetch_add(1, Ordering::SeqCst);
        if i >= n {
            break;
        }
        let r = work(i, &items[i]);
        if r.is_err() {
            failed.store(true, Ordering::SeqCst);
        }
        *slots[i].lock().expect("result slot poisoned") = Some(r);
    };

    let threads = jobs.min(n.max(1));
    if threads == 1 {
        worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(&worker);
            }
        });
    }

    let mut out = Vec::with_capacity(n);
    let mut failures = Vec::new();
    for (i, slot) in slots.into_iter().enumerate() {
        match slot.into_inner().expect("result slot poisoned") {
            Some(Ok(v)) => out.push(v),
            Some(Err(e)) => failures.push((i, e)),
            None => {}
        }
    }
    if failures.is_empty() {
        Ok(out)
    } else {
        log::error!("{} of {n} work items failed, {} completed", failures.len(), out.len());
        Err(Error::Scheduled { total: n, completed: out.len(), failures })
    }
}
