//! Instrumentation hooks for reversal and rotation.
//!
//! The engines report one event per completed reversal and one per parallel
//! stage. Swaps are counted locally inside the kernels, so a probe costs
//! nothing per element. `()` is the no-op probe.

use crate::tensor::Region;

/// Receives instrumentation events. All methods default to no-ops.
pub trait Probe {
    /// A reversal of `region` finished after `swaps` element swaps.
    fn reversal(&mut self, _region: &Region, _swaps: u64) {}

    /// The odometer ran past the region's last index before the midpoint
    /// check stopped the loop. Never fires for valid regions.
    fn index_exhausted(&mut self) {}

    /// A barrier-delimited parallel stage finished.
    fn stage(&mut self, _report: &StageReport) {}
}

impl Probe for () {}

/// Summary of one parallel stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageReport {
    /// 1 for the global reversal, 2 for the block reversals.
    pub stage: u8,
    /// Size of the stage's pair space.
    pub pairs: u64,
    /// Swaps actually performed, summed over workers.
    pub swaps: u64,
    /// Workers that received a nonempty pair range.
    pub workers: usize,
    /// Index-state words held by each worker (multi-index plus carry table).
    pub state_words_per_worker: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversalRecord {
    pub region: Region,
    pub swaps: u64,
}

/// Probe that records everything it is told.
#[derive(Debug, Clone, Default)]
pub struct Counters {
    pub reversals: u64,
    pub swaps: u64,
    pub exhausted: u64,
    pub records: Vec<ReversalRecord>,
    pub stages: Vec<StageReport>,
}

impl Probe for Counters {
    fn reversal(&mut self, region: &Region, swaps: u64) {
        self.reversals += 1;
        self.swaps += swaps;
        self.records.push(ReversalRecord {
            region: region.clone(),
            swaps,
        });
    }

    fn index_exhausted(&mut self) {
        self.exhausted += 1;
    }

    fn stage(&mut self, report: &StageReport) {
        self.stages.push(report.clone());
    }
}
