use std::io::{self, Read, Seek, SeekFrom};

/// Read adapter that enforces strictly forward consumption.
///
/// Any seek, including one to the current position, is recorded as a fault
/// and fails. The adapter also records how many bytes were delivered and the
/// largest single read request, which bounds the encoder's lookahead.
#[derive(Debug)]
pub struct ForwardOnly<R> {
    inner: R,
    delivered: u64,
    largest_request: usize,
    reads: u64,
    fault: Option<String>,
}

impl<R: Read> ForwardOnly<R> {
    pub fn new(inner: R) -> Self {
        ForwardOnly {
            inner,
            delivered: 0,
            largest_request: 0,
            reads: 0,
            fault: None,
        }
    }

    pub fn delivered(&self) -> u64 {
        self.delivered
    }

    pub fn largest_request(&self) -> usize {
        self.largest_request
    }

    pub fn reads(&self) -> u64 {
        self.reads
    }

    pub fn fault(&self) -> Option<&str> {
        self.fault.as_deref()
    }

    pub fn into_inner(self) -> R {
        self.inner
    }
}

impl<R: Read> Read for ForwardOnly<R> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        self.reads += 1;
        self.largest_request = self.largest_request.max(buf.len());
        let n = self.inner.read(buf)?;
        self.delivered += n as u64;
        Ok(n)
    }
}

impl<R: Read> Seek for ForwardOnly<R> {
    fn seek(&mut self, pos: SeekFrom) -> io::Result<u64> {
        let msg = format!(
            "seek to {pos:?} after {} bytes on a forward-only source",
            self.delivered
        );
        self.fault = Some(msg.clone());
        Err(io::Error::other(msg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_reads_and_faults() {
        let mut src = ForwardOnly::new(&b"hello"[..]);
        let mut buf = [0u8; 3];
        assert_eq!(src.read(&mut buf).unwrap(), 3);
        assert_eq!(src.read(&mut buf).unwrap(), 2);
        assert_eq!(src.delivered(), 5);
        assert_eq!(src.largest_request(), 3);
        assert!(src.fault().is_none());
        assert!(src.seek(SeekFrom::Start(0)).is_err());
        assert!(src.fault().is_some());
    }
}
