//! Trade-off and adversarial experiments.
//!
//! Every row carries the encoded size, the empirical-entropy floor `n * H_k`
//! at the row's order, their difference, and a redundancy envelope
//! `beta * b * sigma^k * log2(n)` with `beta` fitted by least squares.

use std::io::{self, Write};
use std::time::Instant;

use crate::debruijn::{adversarial_corpus, theorem3_order, DeBruijnSpec};
use crate::entropy::{entropy_bits_unchecked, entropy_profile, AlphabetSpec};
use crate::error::{Error, Result};
use crate::stream::{
    block_length, encode_fixed_block_to, encode_known_n_to, MemoryReport, TradeoffParams,
};

pub const TRADEOFF_SCHEMA: &str = "onepass-tradeoff/1";
pub const ADVERSARIAL_SCHEMA: &str = "onepass-adversarial/1";

pub const COLUMNS: [&str; 13] = [
    "row_kind",
    "n",
    "sigma",
    "c",
    "eps",
    "k",
    "b",
    "encoded_bits",
    "entropy_bits",
    "redundancy_bits",
    "bound_bits",
    "peak_buffer_bytes",
    "wall_time_ms",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub row_kind: String,
    pub n: u64,
    pub sigma: usize,
    pub c: f64,
    pub eps: f64,
    pub k: usize,
    pub b: usize,
    pub encoded_bits: u64,
    pub entropy_bits: f64,
    pub redundancy_bits: f64,
    pub bound_bits: f64,
    pub peak_buffer_bytes: usize,
    pub wall_time_ms: f64,
}

impl ExperimentRow {
    fn new(
        kind: &str,
        report: &MemoryReport,
        sigma: usize,
        params: &TradeoffParams,
        k: usize,
        entropy_bits: f64,
    ) -> Self {
        let encoded_bits = report.encoded_bits();
        ExperimentRow {
            row_kind: kind.to_string(),
            n: report.input_len,
            sigma,
            c: params.c,
            eps: params.eps,
            k,
            b: report.block_count,
            encoded_bits,
            entropy_bits,
            redundancy_bits: encoded_bits as f64 - entropy_bits,
            bound_bits: 0.0,
            peak_buffer_bytes: report.peak_buffer_bytes,
            wall_time_ms: report.wall_time_ms,
        }
    }

    /// The envelope's scale `b * sigma^k * log2(n)`, without `beta`.
    pub fn bound_scale(&self) -> f64 {
        self.b as f64 * (self.sigma as f64).powi(self.k as i32) * (self.n.max(2) as f64).log2()
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.row_kind.clone(),
            self.n.to_string(),
            self.sigma.to_string(),
            self.c.to_string(),
            self.eps.to_string(),
            self.k.to_string(),
            self.b.to_string(),
            self.encoded_bits.to_string(),
            self.entropy_bits.to_string(),
            self.redundancy_bits.to_string(),
            self.bound_bits.to_string(),
            self.peak_buffer_bytes.to_string(),
            self.wall_time_ms.to_string(),
        ]
    }
}

/// Least-squares `beta` for `redundancy ~ beta * scale` through the origin.
pub fn fit_beta<'a>(rows: impl IntoIterator<Item = &'a ExperimentRow>) -> f64 {
    let (num, den) = rows.into_iter().fold((0.0, 0.0), |(num, den), r| {
        let x = r.bound_scale();
        (num + r.redundancy_bits * x, den + x * x)
    });
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Writes `# ` metadata lines, the header row, then the rows.
pub fn write_csv<W: Write>(mut out: W, metadata: &[String], rows: &[ExperimentRow]) -> Result<()> {
    for line in metadata {
        writeln!(out, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(io::Error::other(e));
    w.write_record(COLUMNS).map_err(csv_err)?;
    for r in rows {
        w.write_record(r.record()).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct TradeoffReport {
    /// One `order` row per `(c, k)` and one `best` row per `c`.
    pub rows: Vec<ExperimentRow>,
    /// Least-squares `beta` over the `best` rows.
    pub beta: f64,
}

impl TradeoffReport {
    pub fn best_rows(&self) -> impl Iterator<Item = &ExperimentRow> {
        self.rows.iter().filter(|r| r.row_kind == "best")
    }

    pub fn metadata(&self) -> Vec<String> {
        vec![
            format!("schema={TRADEOFF_SCHEMA}"),
            format!("beta={}", self.beta),
            "best row: argmin over k of entropy_bits + b*sigma^k*log2(n)".into(),
        ]
    }
}

/// Encodes `data` once per `c` (known length) and tabulates size against
/// `n * H_k` for every `k <= kmax`.
pub fn experiment_tradeoff(
    data: &[u8],
    c_list: &[f64],
    eps: f64,
    kmax: usize,
) -> Result<TradeoffReport> {
    if data.is_empty() {
        return Err(Error::validation(
            "trade-off experiment needs a nonempty input",
        ));
    }
    let alphabet = AlphabetSpec::covering(data);
    let sigma = alphabet.sigma();
    let profile = entropy_profile(data, kmax.min(data.len()), alphabet)?;
    let n = data.len() as u64;
    let log_n = (n.max(2) as f64).log2();

    let mut rows = Vec::new();
    for &c in c_list {
        let params = TradeoffParams::known(c, eps, n)?;
        let report = encode_known_n_to(data, &params, alphabet, io::sink())?;
        let mut best: Option<(f64, ExperimentRow)> = None;
        for k in 0..=profile.kmax() {
            let row = ExperimentRow::new("order", &report, sigma, &params, k, profile.bits(k));
            let score = row.entropy_bits + row.b as f64 * (sigma as f64).powi(k as i32) * log_n;
            if best.as_ref().is_none_or(|(s, _)| score < *s) {
                best = Some((score, row.clone()));
            }
            rows.push(row);
        }
        let (_, mut b) = best.expect("at least order 0");
        b.row_kind = "best".into();
        rows.push(b);
    }

    let beta = fit_beta(rows.iter().filter(|r| r.row_kind == "best"));
    for r in &mut rows {
        r.bound_bits = beta * r.bound_scale();
    }
    Ok(TradeoffReport { rows, beta })
}

/// Thresholds for the adversarial verdict. These are harness choices that
/// encode "linear growth" versus "sublinear growth"; they are not derived.
#[derive(Debug, Clone, Copy)]
pub struct AdversarialThresholds {
    pub min_small_growth: f64,
    pub max_whole_growth: f64,
    pub max_whole_fraction: f64,
}

pub const DEFAULT_THRESHOLDS: AdversarialThresholds = AdversarialThresholds {
    min_small_growth: 1.8,
    max_whole_growth: 1.2,
    max_whole_fraction: 0.10,
};

/// Sizes of the `m`-period and `2m`-period prefixes under both encoders.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthStep {
    pub periods: usize,
    pub small_bits: u64,
    pub small_bits_doubled: u64,
    pub whole_bits: u64,
    pub whole_bits_doubled: u64,
}

impl GrowthStep {
    pub fn small_ratio(&self) -> f64 {
        self.small_bits_doubled as f64 / self.small_bits as f64
    }

    pub fn whole_ratio(&self) -> f64 {
        self.whole_bits_doubled as f64 / self.whole_bits as f64
    }
}

#[derive(Debug, Clone)]
pub struct AdversarialReport {
    pub k: usize,
    pub period: usize,
    pub small_memory: ExperimentRow,
    pub whole_string: ExperimentRow,
    pub small_block_len: usize,
    pub whole_block_len: usize,
    pub growth: Vec<GrowthStep>,
    pub thresholds: AdversarialThresholds,
}

impl AdversarialReport {
    pub fn whole_fraction(&self) -> f64 {
        self.whole_string.encoded_bits as f64 / self.small_memory.encoded_bits as f64
    }

    /// Small-memory size at least `min_small_growth`-fold per doubling, the
    /// whole-string size at most `max_whole_growth`-fold, and the whole-string
    /// encoding at most `max_whole_fraction` of the small-memory one.
    pub fn verdict(&self) -> bool {
        let t = &self.thresholds;
        !self.growth.is_empty()
            && self.growth.iter().all(|g| {
                g.small_ratio() >= t.min_small_growth
                    && g.whole_ratio() <= t.max_whole_growth
                    && g.small_ratio() > g.whole_ratio()
            })
            && self.whole_fraction() <= t.max_whole_fraction
    }

    /// The small-memory growth ratio strictly exceeds the whole-string one at
    /// every step.
    pub fn separated(&self) -> bool {
        self.growth
            .iter()
            .all(|g| g.small_ratio() > g.whole_ratio())
    }

    pub fn rows(&self) -> Vec<ExperimentRow> {
        vec![self.small_memory.clone(), self.whole_string.clone()]
    }

    pub fn metadata(&self) -> Vec<String> {
        let t = &self.thresholds;
        let mut lines = vec![
            format!("schema={ADVERSARIAL_SCHEMA}"),
            format!("k={} period={}", self.k, self.period),
            format!(
                "block_len small_memory={} whole_string={}",
                self.small_block_len, self.whole_block_len
            ),
            format!(
                "harness thresholds (test decisions): small growth >= {}, whole growth <= {}, whole/small <= {}",
                t.min_small_growth, t.max_whole_growth, t.max_whole_fraction
            ),
        ];
        for g in &self.growth {
            lines.push(format!(
                "growth m={} small_bits={}->{} ratio={:.4} whole_bits={}->{} ratio={:.4}",
                g.periods,
                g.small_bits,
                g.small_bits_doubled,
                g.small_ratio(),
                g.whole_bits,
                g.whole_bits_doubled,
                g.whole_ratio()
            ));
        }
        lines.push(format!("whole/small={:.4}", self.whole_fraction()));
        lines.push(format!(
            "verdict={}",
            if self.verdict() { "PASS" } else { "FAIL" }
        ));
        lines
    }
}

/// Smallest `n >= sigma` with `sigma^theorem3_order(n) <= n`, if one exists
/// below `2^40`.
pub fn min_feasible_n(sigma: usize, c: f64, eps: f64) -> Option<u64> {
    let mut n = sigma as u64;
    while n < 1 << 40 {
        let k = theorem3_order(n, sigma, c, eps);
        if (sigma as f64).powi(k as i32) <= n as f64 {
            // Refine downward within the last doubling.
            let mut lo = n / 2;
            while lo < n {
                let k = theorem3_order(lo.max(2), sigma, c, eps);
                if lo >= 2 && (sigma as f64).powi(k as i32) <= lo as f64 {
                    return Some(lo);
                }
                lo += 1;
            }
            return Some(n);
        }
        n *= 2;
    }
    None
}

/// Periods used for the growth check; each is compared with its double.
pub const GROWTH_PERIODS: [usize; 3] = [4, 8, 16];

fn encoded_bits_fixed(
    data: &[u8],
    block_len: usize,
    params: &TradeoffParams,
    alphabet: AlphabetSpec,
) -> Result<u64> {
    let r = encode_fixed_block_to(data, block_len, params, alphabet, io::sink())?;
    Ok(r.encoded_bits())
}

/// Builds the repeated de Bruijn corpus at `k = theorem3_order(n)` and
/// compares a memory-bounded encoding (`c`) with a whole-string one (`c = 1`).
///
/// The growth check encodes prefixes of `m` and `2m` periods with the block
/// lengths both encoders use on the full corpus, so the memory budget stays
/// fixed while the input grows.
pub fn experiment_adversarial(
    sigma: usize,
    c: f64,
    eps: f64,
    n: u64,
    seed: u64,
) -> Result<AdversarialReport> {
    TradeoffParams::unknown(c, eps)?;
    if n < 2 {
        return Err(Error::validation("adversarial experiment needs n >= 2"));
    }
    let k = theorem3_order(n, sigma, c, eps).max(1);
    let spec = DeBruijnSpec::new(sigma, k)?;
    if (spec.tuples() as u64) > n {
        let hint = match min_feasible_n(sigma, c, eps) {
            Some(m) => format!("minimum feasible n is {m}"),
            None => "no feasible n below 2^40".to_string(),
        };
        return Err(Error::validation(format!(
            "n = {n} is smaller than sigma^k = {sigma}^{k}; {hint}"
        )));
    }
    let alphabet = AlphabetSpec::new(sigma)?;
    let corpus = adversarial_corpus(spec, n as usize, seed)?;
    let len = corpus.len() as u64;
    let period = spec.tuples();

    let started = Instant::now();
    let entropy_bits = entropy_bits_unchecked(&corpus, k);
    let entropy_ms = started.elapsed().as_secs_f64() * 1e3;

    let small_params = TradeoffParams::known(c, eps, len)?;
    let whole_params = TradeoffParams::known(1.0, eps, len)?;
    let small_report = encode_known_n_to(corpus.as_slice(), &small_params, alphabet, io::sink())?;
    let whole_report = encode_known_n_to(corpus.as_slice(), &whole_params, alphabet, io::sink())?;

    let mut small = ExperimentRow::new(
        "small_memory",
        &small_report,
        sigma,
        &small_params,
        k,
        entropy_bits,
    );
    let mut whole = ExperimentRow::new(
        "whole_string",
        &whole_report,
        sigma,
        &whole_params,
        k,
        entropy_bits,
    );
    small.wall_time_ms += entropy_ms;
    whole.wall_time_ms += entropy_ms;
    let beta = fit_beta([&small, &whole]);
    small.bound_bits = beta * small.bound_scale();
    whole.bound_bits = beta * whole.bound_scale();

    let small_block_len = block_length(len, &small_params);
    let whole_block_len = block_length(len, &whole_params);
    let periods_available = corpus.len() / period;
    let mut growth = Vec::new();
    for &m in GROWTH_PERIODS
        .iter()
        .filter(|&&m| 2 * m <= periods_available)
    {
        let one = &corpus[..m * period];
        let two = &corpus[..2 * m * period];
        growth.push(GrowthStep {
            periods: m,
            small_bits: encoded_bits_fixed(one, small_block_len, &small_params, alphabet)?,
            small_bits_doubled: encoded_bits_fixed(two, small_block_len, &small_params, alphabet)?,
            whole_bits: encoded_bits_fixed(one, whole_block_len, &whole_params, alphabet)?,
            whole_bits_doubled: encoded_bits_fixed(two, whole_block_len, &whole_params, alphabet)?,
        });
    }

    Ok(AdversarialReport {
        k,
        period,
        small_memory: small,
        whole_string: whole,
        small_block_len,
        whole_block_len,
        growth,
        thresholds: DEFAULT_THRESHOLDS,
    })
}
