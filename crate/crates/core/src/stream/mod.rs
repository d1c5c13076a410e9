//! One-pass blockwise encoder and decoder.
//!
//! The encoder reads one block into memory, compresses it, writes the record
//! and drops the block before reading further. With the length `n` known,
//! every block (but possibly the last) has length `block_length(n)`. Without
//! it, an estimate starts at [`INITIAL_ESTIMATE`] and doubles each time that
//! many symbols have been read; blocks inside the regime of estimate `N` have
//! length `block_length(N)` and never straddle a regime boundary.

mod format;
mod params;
mod source;

use std::io::{self, Read, Write};
use std::time::Instant;

pub use format::{EncodedStream, Header, FLAG_KNOWN_N, MAGIC, VERSION};
pub use params::{block_length, TradeoffParams, MAX_BLOCK_LEN};
pub use source::ForwardOnly;

use crate::codec::{compress_block_metered, decompress_block, BlockPayload, RECORD_HEADER_BYTES};
use crate::entropy::AlphabetSpec;
use crate::error::{Error, Result};
use crate::memory::MemoryMeter;

/// Starting estimate of `n` when the input length is unknown.
pub const INITIAL_ESTIMATE: u64 = 1024;

/// Accounting for one encode run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MemoryReport {
    /// Peak working-buffer bytes held at once.
    pub peak_buffer_bytes: usize,
    pub block_count: usize,
    pub largest_block_len: usize,
    /// Number of doubling regimes entered (1 in known-length mode).
    pub regimes: usize,
    pub input_len: u64,
    pub encoded_bytes: u64,
    pub wall_time_ms: f64,
}

impl MemoryReport {
    pub fn peak_buffer_bits(&self) -> u64 {
        8 * self.peak_buffer_bytes as u64
    }

    pub fn encoded_bits(&self) -> u64 {
        8 * self.encoded_bytes
    }
}

impl std::fmt::Display for MemoryReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "peak_buffer_bytes={} peak_buffer_bits={} blocks={} largest_block={} regimes={} \
             input={} encoded={} time_ms={:.1}",
            self.peak_buffer_bytes,
            self.peak_buffer_bits(),
            self.block_count,
            self.largest_block_len,
            self.regimes,
            self.input_len,
            self.encoded_bytes,
            self.wall_time_ms
        )
    }
}

/// How block boundaries are chosen.
#[derive(Debug, Clone, Copy)]
enum BlockPlan {
    Known { n: u64, len: usize },
    Doubling,
    Fixed { len: usize },
}

/// Destination for header and records.
trait RecordSink {
    fn header(&mut self, header: &Header) -> Result<()>;
    fn record(&mut self, payload: BlockPayload) -> Result<()>;
    fn finish(&mut self) -> Result<()>;
}

struct WriteSink<W> {
    out: W,
    written: u64,
}

impl<W: Write> RecordSink for WriteSink<W> {
    fn header(&mut self, header: &Header) -> Result<()> {
        header.write_to(&mut self.out)?;
        self.written += header.encoded_len() as u64;
        Ok(())
    }

    fn record(&mut self, payload: BlockPayload) -> Result<()> {
        payload.write_to(&mut self.out)?;
        self.written += payload.encoded_len() as u64;
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        self.out.write_all(&[0u8; RECORD_HEADER_BYTES])?;
        self.written += RECORD_HEADER_BYTES as u64;
        self.out.flush()?;
        Ok(())
    }
}

#[derive(Default)]
struct CollectSink {
    header: Option<Header>,
    records: Vec<BlockPayload>,
}

impl RecordSink for CollectSink {
    fn header(&mut self, header: &Header) -> Result<()> {
        self.header = Some(*header);
        Ok(())
    }

    fn record(&mut self, payload: BlockPayload) -> Result<()> {
        self.records.push(payload);
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        Ok(())
    }
}

/// Fills `buf` from `input`, stopping early only at end of input.
fn read_full<R: Read>(input: &mut R, buf: &mut [u8]) -> io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match input.read(&mut buf[filled..]) {
            Ok(0) => break,
            Ok(k) => filled += k,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(filled)
}

fn run<R: Read, S: RecordSink>(
    mut input: R,
    plan: BlockPlan,
    header: Header,
    alphabet: AlphabetSpec,
    params: &TradeoffParams,
    sink: &mut S,
) -> Result<MemoryReport> {
    let started = Instant::now();
    let mut meter = MemoryMeter::new();
    let mut report = MemoryReport {
        regimes: 0,
        ..Default::default()
    };
    sink.header(&header)?;

    let mut buf: Vec<u8> = Vec::new();
    let mut consumed: u64 = 0;
    let mut estimate = INITIAL_ESTIMATE;
    let mut regime_of_last_block = None;

    loop {
        let want = match plan {
            BlockPlan::Known { n, len } => (n - consumed).min(len as u64) as usize,
            BlockPlan::Fixed { len } => len,
            BlockPlan::Doubling => {
                let len = block_length(estimate, params) as u64;
                (estimate - consumed).min(len) as usize
            }
        };
        if want == 0 {
            break;
        }
        if buf.len() < want {
            meter.alloc(want - buf.len());
            buf.resize(want, 0);
        }
        let got = read_full(&mut input, &mut buf[..want])?;
        if got == 0 {
            break;
        }
        let block = &buf[..got];
        alphabet.check(block).map_err(|e| match e {
            Error::Validation(msg) => Error::Validation(format!("{msg} (input offset {consumed})")),
            other => other,
        })?;

        let payload = compress_block_metered(block, alphabet, &mut meter)?;
        let body_len = payload.body.len();
        report.encoded_bytes += payload.encoded_len() as u64;
        sink.record(payload)?;
        meter.free(body_len);

        report.block_count += 1;
        report.largest_block_len = report.largest_block_len.max(got);
        consumed += got as u64;
        if regime_of_last_block != Some(estimate) {
            report.regimes += 1;
            regime_of_last_block = Some(estimate);
        }
        if let BlockPlan::Doubling = plan {
            if consumed == estimate {
                estimate *= 2;
            }
        }
        if got < want {
            break;
        }
    }

    if let BlockPlan::Known { n, .. } = plan {
        if consumed < n {
            return Err(Error::StreamLength {
                declared: n,
                actual: consumed.to_string(),
            });
        }
        let mut probe = [0u8; 1];
        if read_full(&mut input, &mut probe)? > 0 {
            return Err(Error::StreamLength {
                declared: n,
                actual: format!("more than {n}"),
            });
        }
    }

    sink.finish()?;
    report.encoded_bytes += (header.encoded_len() + RECORD_HEADER_BYTES) as u64;
    report.peak_buffer_bytes = meter.peak();
    report.input_len = consumed;
    report.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

fn header_for(params: &TradeoffParams, alphabet: AlphabetSpec, n: Option<u64>) -> Header {
    Header {
        sigma: alphabet.sigma() as u16,
        c: params.c,
        eps: params.eps,
        n,
    }
}

fn known_plan(params: &TradeoffParams) -> Result<(u64, BlockPlan)> {
    params.validate()?;
    match (params.known_n, params.n_hint) {
        (true, Some(n)) => Ok((
            n,
            BlockPlan::Known {
                n,
                len: block_length(n, params),
            },
        )),
        _ => Err(Error::validation(
            "known-length encoding needs params with known_n and n_hint",
        )),
    }
}

fn unknown_plan(params: &TradeoffParams) -> Result<()> {
    params.validate()?;
    if params.known_n {
        return Err(Error::validation(
            "doubling encoder called with known_n params",
        ));
    }
    Ok(())
}

/// Encodes exactly `params.n_hint` symbols from `input`, writing the stream
/// to `out` as it goes.
pub fn encode_known_n_to<R: Read, W: Write>(
    input: R,
    params: &TradeoffParams,
    alphabet: AlphabetSpec,
    out: W,
) -> Result<MemoryReport> {
    let (n, plan) = known_plan(params)?;
    let mut sink = WriteSink { out, written: 0 };
    let report = run(
        input,
        plan,
        header_for(params, alphabet, Some(n)),
        alphabet,
        params,
        &mut sink,
    )?;
    debug_assert_eq!(sink.written, report.encoded_bytes);
    Ok(report)
}

/// Encodes `input` of unknown length with the doubling schedule, writing the
/// stream to `out` as it goes.
pub fn encode_unknown_n_to<R: Read, W: Write>(
    input: R,
    params: &TradeoffParams,
    alphabet: AlphabetSpec,
    out: W,
) -> Result<MemoryReport> {
    unknown_plan(params)?;
    let mut sink = WriteSink { out, written: 0 };
    run(
        input,
        BlockPlan::Doubling,
        header_for(params, alphabet, None),
        alphabet,
        params,
        &mut sink,
    )
}

/// Encodes with a fixed block length regardless of the input length. The
/// header records `(c, eps)` for reference only; decoding never needs them.
pub fn encode_fixed_block_to<R: Read, W: Write>(
    input: R,
    block_len: usize,
    params: &TradeoffParams,
    alphabet: AlphabetSpec,
    out: W,
) -> Result<MemoryReport> {
    params.validate()?;
    if block_len == 0 || block_len > MAX_BLOCK_LEN {
        return Err(Error::validation(format!(
            "block length {block_len} out of range"
        )));
    }
    let mut sink = WriteSink { out, written: 0 };
    let plan = BlockPlan::Fixed { len: block_len };
    run(
        input,
        plan,
        header_for(params, alphabet, None),
        alphabet,
        params,
        &mut sink,
    )
}

fn collect(sink: CollectSink, report: MemoryReport) -> (EncodedStream, MemoryReport) {
    let stream = EncodedStream {
        header: sink.header.expect("header written first"),
        records: sink.records,
    };
    (stream, report)
}

/// [`encode_known_n_to`] returning the stream as a value.
pub fn encode_known_n<R: Read>(
    input: R,
    params: &TradeoffParams,
    alphabet: AlphabetSpec,
) -> Result<(EncodedStream, MemoryReport)> {
    let (n, plan) = known_plan(params)?;
    let mut sink = CollectSink::default();
    let report = run(
        input,
        plan,
        header_for(params, alphabet, Some(n)),
        alphabet,
        params,
        &mut sink,
    )?;
    Ok(collect(sink, report))
}

/// [`encode_unknown_n_to`] returning the stream as a value.
pub fn encode_unknown_n<R: Read>(
    input: R,
    params: &TradeoffParams,
    alphabet: AlphabetSpec,
) -> Result<(EncodedStream, MemoryReport)> {
    unknown_plan(params)?;
    let mut sink = CollectSink::default();
    let report = run(
        input,
        BlockPlan::Doubling,
        header_for(params, alphabet, None),
        alphabet,
        params,
        &mut sink,
    )?;
    Ok(collect(sink, report))
}

/// Encodes `data` into `io::sink()` and returns only the accounting.
pub fn measure_memory(
    data: &[u8],
    params: &TradeoffParams,
    alphabet: AlphabetSpec,
) -> Result<MemoryReport> {
    if params.known_n {
        encode_known_n_to(data, params, alphabet, io::sink())
    } else {
        encode_unknown_n_to(data, params, alphabet, io::sink())
    }
}

/// Decodes a serialized stream from `input` to `output`, one record at a
/// time. Returns the parsed header.
pub fn decode_to<R: Read, W: Write>(mut input: R, mut output: W) -> Result<Header> {
    let header = Header::read_from(&mut input)?;
    let alphabet = header.alphabet();
    let mut total: u64 = 0;
    let mut index = 0usize;
    loop {
        let record = BlockPayload::read_from(&mut input).map_err(|e| e.in_record(index))?;
        if record.is_terminator() {
            break;
        }
        let block = decompress_block(&record, alphabet).map_err(|e| e.in_record(index))?;
        output.write_all(&block)?;
        total += block.len() as u64;
        index += 1;
    }
    let mut probe = [0u8; 1];
    if read_full(&mut input, &mut probe)? > 0 {
        return Err(Error::corrupt("data after the terminator record"));
    }
    if let Some(n) = header.n {
        if n != total {
            return Err(Error::corrupt(format!(
                "header declares {n} symbols, records hold {total}"
            )));
        }
    }
    output.flush()?;
    Ok(header)
}

/// Decodes an in-memory stream.
pub fn decode(stream: &EncodedStream) -> Result<Vec<u8>> {
    let alphabet = stream.header.alphabet();
    let mut out = Vec::with_capacity(stream.raw_len() as usize);
    for (i, record) in stream.records.iter().enumerate() {
        out.extend(decompress_block(record, alphabet).map_err(|e| e.in_record(i))?);
    }
    if let Some(n) = stream.header.n {
        if n != out.len() as u64 {
            return Err(Error::corrupt(format!(
                "header declares {n} symbols, records hold {}",
                out.len()
            )));
        }
    }
    Ok(out)
}

/// Decodes a serialized stream held in memory.
pub fn decode_bytes(bytes: &[u8]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    decode_to(bytes, &mut out)?;
    Ok(out)
}
