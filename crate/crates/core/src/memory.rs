/// Tracks working-buffer bytes held by one encode run.
///
/// Buffers whose size depends on the input (block buffer, suffix-array
/// scratch, transform and token arrays, coder output) are registered with
/// [`MemoryMeter::alloc`] and released with [`MemoryMeter::free`]. Tables of
/// fixed size, such as the byte-alphabet bucket arrays and the coder's
/// frequency model, are not counted.
#[derive(Debug, Default, Clone)]
pub struct MemoryMeter {
    current: usize,
    peak: usize,
}

impl MemoryMeter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn alloc(&mut self, bytes: usize) {
        self.current += bytes;
        self.peak = self.peak.max(self.current);
    }

    pub fn free(&mut self, bytes: usize) {
        debug_assert!(bytes <= self.current, "freeing more than allocated");
        self.current -= bytes.min(self.current);
    }

    pub fn current(&self) -> usize {
        self.current
    }

    pub fn peak(&self) -> usize {
        self.peak
    }
}
