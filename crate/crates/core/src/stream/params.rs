use crate::ceil_tolerant;
use crate::error::{Error, Result};

/// Memory exponent `c` and slack `eps` for block sizing, plus whether the
/// input length is known up front.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffParams {
    pub c: f64,
    pub eps: f64,
    pub known_n: bool,
    pub n_hint: Option<u64>,
}

impl TradeoffParams {
    /// Parameters for an input of exactly `n` symbols.
    pub fn known(c: f64, eps: f64, n: u64) -> Result<Self> {
        let p = TradeoffParams {
            c,
            eps,
            known_n: true,
            n_hint: Some(n),
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters for an input of unknown length (doubling schedule).
    pub fn unknown(c: f64, eps: f64) -> Result<Self> {
        let p = TradeoffParams {
            c,
            eps,
            known_n: false,
            n_hint: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        validate_exponents(self.c, self.eps)?;
        if self.known_n && !matches!(self.n_hint, Some(n) if n >= 1) {
            return Err(Error::validation("known-length mode needs n >= 1"));
        }
        Ok(())
    }

    /// The block-length exponent `c - eps/2`.
    pub fn exponent(&self) -> f64 {
        self.c - self.eps / 2.0
    }
}

pub(crate) fn validate_exponents(c: f64, eps: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::validation(format!("c must lie in [0, 1], got {c}")));
    }
    if eps.is_nan() || eps <= 0.0 || eps.is_infinite() {
        return Err(Error::validation(format!(
            "eps must be positive, got {eps}"
        )));
    }
    Ok(())
}

/// Largest block the 32-bit record format can describe.
pub const MAX_BLOCK_LEN: usize = (u32::MAX - 1) as usize;

/// `max(1, ceil(n^(c - eps/2)))`, capped at [`MAX_BLOCK_LEN`].
pub fn block_length(n: u64, params: &TradeoffParams) -> usize {
    let n = n.max(1) as f64;
    let len = ceil_tolerant(n.powf(params.exponent()));
    if len >= MAX_BLOCK_LEN as f64 {
        MAX_BLOCK_LEN
    } else {
        (len as usize).max(1)
    }
}
