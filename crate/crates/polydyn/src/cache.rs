//! Iterate cache shared between threads.

use std::sync::Mutex;

use polydyn_core::{degree_sequence, Coefficient, DegreeSequence, DegreeSequenceError, IterateCache, MapError, PolyMap};

/// Every `get` either sees the cached iterate or computes and stores it under
/// the lock, so the final contents never depend on the interleaving.
#[derive(Debug)]
pub struct SharedIterateCache<C> {
    inner: Mutex<IterateCache<C>>,
}

impl<C: Coefficient> SharedIterateCache<C> {
    pub fn new(base: PolyMap<C>) -> Self {
        Self::from_cache(IterateCache::new(base))
    }

    pub fn from_cache(cache: IterateCache<C>) -> Self {
        Self { inner: Mutex::new(cache) }
    }

    pub fn get(&self, n: u32) -> Result<PolyMap<C>, MapError> {
        self.lock().get(n).cloned()
    }

    pub fn cached(&self) -> usize {
        self.lock().cached()
    }

    pub fn degree_sequence(&self, n_max: u32) -> Result<DegreeSequence, DegreeSequenceError> {
        degree_sequence(&mut self.lock(), n_max)
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, IterateCache<C>> {
        // A panic mid-compose leaves only fully pushed iterates behind.
        self.inner.lock().unwrap_or_else(|e| e.into_inner())
    }
}
