//! Evaluation strategy for batches of independent energy points.
//!
//! Implementations must return results in input order; the numerical
//! pipelines only ever reduce over the returned vector sequentially, which
//! keeps every result independent of how the batch was scheduled.

use alloc::vec::Vec;

pub trait Executor: Sync {
    fn map<T, F>(&self, inputs: &[f64], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(f64) -> T + Sync + Send;
}

/// Evaluates in order on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, F>(&self, inputs: &[f64], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(f64) -> T + Sync + Send,
    {
        inputs.iter().map(|&x| f(x)).collect()
    }
}
