//! Hooks recording the memory traffic of a wavefront pass.

pub trait Probe {
    /// Query symbols for `P` lanes were read from sequence storage.
    fn query_load(&mut self, stage: usize, iteration: usize);
    /// A block of `rows` boundary rows was read from stage storage.
    fn boundary_read(&mut self, stage: usize, iteration: usize, rows: usize);
    /// A block of `rows` boundary rows was written to stage storage.
    fn boundary_write(&mut self, stage: usize, iteration: usize, rows: usize);
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NoProbe;

impl Probe for NoProbe {
    #[inline(always)]
    fn query_load(&mut self, _: usize, _: usize) {}
    #[inline(always)]
    fn boundary_read(&mut self, _: usize, _: usize, _: usize) {}
    #[inline(always)]
    fn boundary_write(&mut self, _: usize, _: usize, _: usize) {}
}

/// Every access, as `(stage, iteration, rows)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AccessLog {
    pub query_loads: Vec<(usize, usize)>,
    pub boundary_reads: Vec<(usize, usize, usize)>,
    pub boundary_writes: Vec<(usize, usize, usize)>,
}

impl Probe for AccessLog {
    fn query_load(&mut self, stage: usize, iteration: usize) {
        self.query_loads.push((stage, iteration));
    }

    fn boundary_read(&mut self, stage: usize, iteration: usize, rows: usize) {
        self.boundary_reads.push((stage, iteration, rows));
    }

    fn boundary_write(&mut self, stage: usize, iteration: usize, rows: usize) {
        self.boundary_writes.push((stage, iteration, rows));
    }
}
