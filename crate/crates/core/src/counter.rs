//! Per-thread instrumentation of operations in the extension ring S.
//!
//! Only the top level of a tower is counted; arithmetic in the subring and
//! precomputation of automorphism matrices is not.

use std::cell::Cell;
use std::ops::Sub;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounts {
    /// Multiplications in S.
    pub mul: u64,
    /// Applications of a power of the Frobenius automorphism.
    pub sigma: u64,
    /// Inversions in S.
    pub inv: u64,
}

impl OpCounts {
    pub fn total(&self) -> u64 {
        self.mul + self.sigma + self.inv
    }
}

impl Sub for OpCounts {
    type Output = OpCounts;

    fn sub(self, rhs: OpCounts) -> OpCounts {
        OpCounts {
            mul: self.mul - rhs.mul,
            sigma: self.sigma - rhs.sigma,
            inv: self.inv - rhs.inv,
        }
    }
}

thread_local! {
    static COUNTS: Cell<OpCounts> = const { Cell::new(OpCounts { mul: 0, sigma: 0, inv: 0 }) };
}

#[inline]
pub(crate) fn record_mul() {
    COUNTS.with(|c| {
        let mut v = c.get();
        v.mul += 1;
        c.set(v);
    });
}

#[inline]
pub(crate) fn record_sigma() {
    COUNTS.with(|c| {
        let mut v = c.get();
        v.sigma += 1;
        c.set(v);
    });
}

#[inline]
pub(crate) fn record_inv() {
    COUNTS.with(|c| {
        let mut v = c.get();
        v.inv += 1;
        c.set(v);
    });
}

/// Current counts of the calling thread.
pub fn snapshot() -> OpCounts {
    COUNTS.with(|c| c.get())
}

/// Runs `f` and returns its result with the operations it performed on this thread.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, OpCounts) {
    let before = snapshot();
    let out = f();
    (out, snapshot() - before)
}
