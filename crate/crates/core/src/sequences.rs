//! Exact evaluation of the dying-rabbit recurrences.
//!
//! All arithmetic is on arbitrary-precision integers. Terms are 0-based:
//! `C_0` is the population at month zero.

use std::fmt;

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lifecycle parameters: `k` fertile months, `h` months to maturity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct SequenceParams {
    k: u32,
    h: u32,
}

#[derive(Deserialize)]
struct RawParams {
    k: u32,
    h: u32,
}

impl TryFrom<RawParams> for SequenceParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        SequenceParams::new(raw.k, raw.h)
    }
}

impl SequenceParams {
    pub fn new(k: u32, h: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if h == 0 {
            return Err(Error::InvalidParameter("h must be at least 1".into()));
        }
        Ok(SequenceParams { k, h })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    /// Order of the recurrence, `k + h - 1`.
    pub fn order(&self) -> usize {
        (self.k + self.h - 1) as usize
    }
}

impl fmt::Display for SequenceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k={}, h={})", self.k, self.h)
    }
}

/// Seed values `C_0..C_{k+h-2}` of a recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialConditions {
    values: Vec<Integer>,
}

impl InitialConditions {
    pub fn new(values: Vec<Integer>) -> Self {
        InitialConditions { values }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        InitialConditions {
            values: values.iter().map(|&v| Integer::from(v)).collect(),
        }
    }

    /// The default seed: `C_l^(h)` for `l = 0..k+h-2`.
    pub fn default_for(params: SequenceParams) -> Self {
        let order = params.order();
        let terms = base_terms(params.h(), order - 1);
        InitialConditions { values: terms }
    }

    /// Miles' seed for the k-generalized Fibonacci numbers: `k` ones.
    pub fn miles(k: u32) -> Self {
        InitialConditions {
            values: vec![Integer::from(1); k as usize],
        }
    }

    /// Seed `(0, ..., 0, 1)` of length `order`.
    pub fn unit(order: usize) -> Self {
        let mut values = vec![Integer::new(); order];
        if let Some(last) = values.last_mut() {
            *last = Integer::from(1);
        }
        InitialConditions { values }
    }

    pub fn values(&self) -> &[Integer] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check_order(&self, params: SequenceParams) -> Result<()> {
        if self.values.len() != params.order() {
            return Err(Error::InitLengthMismatch {
                expected: params.order(),
                got: self.values.len(),
            });
        }
        Ok(())
    }
}

/// Which recurrence produced a [`SequenceWindow`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SequenceKind {
    /// `C_n^(h)`: `h` ones, then `C_n = C_{n-1} + C_{n-h}`.
    Base { h: u32 },
    /// `C_n^(k,h)` with the default seed.
    DyingRabbit { k: u32, h: u32 },
    /// The dying-rabbit recurrence from a caller-supplied seed.
    Custom { k: u32, h: u32 },
    /// Miles' k-generalized Fibonacci numbers.
    Miles { k: u32 },
}

/// A run of consecutive exact terms `C_start .. C_{start+len-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceWindow {
    pub kind: SequenceKind,
    pub start_index: u64,
    pub terms: Vec<Integer>,
}

impl SequenceWindow {
    /// Term `C_n`, if it lies inside the window.
    pub fn term(&self, n: u64) -> Option<&Integer> {
        let offset = n.checked_sub(self.start_index)?;
        self.terms.get(usize::try_from(offset).ok()?)
    }

    /// Comma-separated terms.
    pub fn to_comma_string(&self) -> String {
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        parts.join(",")
    }
}

fn base_terms(h: u32, t: usize) -> Vec<Integer> {
    let h = h as usize;
    let mut terms: Vec<Integer> = Vec::with_capacity(t + 1);
    for n in 0..=t {
        if n < h {
            terms.push(Integer::from(1));
        } else {
            let next = Integer::from(&terms[n - 1] + &terms[n - h]);
            terms.push(next);
        }
    }
    terms
}

/// Runs `C_n = C_{n-h} + ... + C_{n-k-h+1}` from `seed` up to index `t`.
///
/// The window sum is carried between steps: moving from `n` to `n+1` adds
/// `C_{n+1-h}` and drops `C_{n-k-h+1}`.
fn run_recurrence(params: SequenceParams, seed: &[Integer], t: usize) -> Vec<Integer> {
    let order = params.order();
    debug_assert_eq!(seed.len(), order);
    let h = params.h() as usize;
    let mut terms: Vec<Integer> = seed.iter().take(t + 1).cloned().collect();
    if t < order {
        return terms;
    }
    terms.reserve(t + 1 - order);
    // window for n = order covers indices [0, order - h] = [0, k-1]
    let mut window: Integer = seed[..=order - h].iter().sum();
    for n in order..=t {
        terms.push(window.clone());
        window += &terms[n + 1 - h];
        window -= &terms[n - order];
    }
    terms
}

fn index_bound(t: u64) -> Result<usize> {
    usize::try_from(t)
        .ok()
        .filter(|&t| t < usize::MAX)
        .ok_or_else(|| Error::InvalidParameter(format!("t={t} is too large")))
}

/// `C_0^(h) .. C_t^(h)`.
pub fn base_seq(h: u32, t: u64) -> Result<SequenceWindow> {
    if h == 0 {
        return Err(Error::InvalidParameter("h must be at least 1".into()));
    }
    Ok(SequenceWindow {
        kind: SequenceKind::Base { h },
        start_index: 0,
        terms: base_terms(h, index_bound(t)?),
    })
}

/// `C_0^(k,h) .. C_t^(k,h)` with the default seed.
pub fn dying_rabbit_seq(params: SequenceParams, t: u64) -> Result<SequenceWindow> {
    let seed = InitialConditions::default_for(params);
    Ok(SequenceWindow {
        kind: SequenceKind::DyingRabbit {
            k: params.k(),
            h: params.h(),
        },
        start_index: 0,
        terms: run_recurrence(params, seed.values(), index_bound(t)?),
    })
}

/// The dying-rabbit recurrence seeded from `init` (any integers).
pub fn custom_seq(params: SequenceParams, init: &InitialConditions, t: u64) -> Result<SequenceWindow> {
    init.check_order(params)?;
    Ok(SequenceWindow {
        kind: SequenceKind::Custom {
            k: params.k(),
            h: params.h(),
        },
        start_index: 0,
        terms: run_recurrence(params, init.values(), index_bound(t)?),
    })
}

/// Miles' k-generalized Fibonacci numbers: `k` ones, then the sum of the
/// previous `k` terms.
pub fn miles_seq(k: u32, t: u64) -> Result<SequenceWindow> {
    if k < 2 {
        return Err(Error::InvalidParameter(
            "k-generalized Fibonacci numbers need k >= 2".into(),
        ));
    }
    let params = SequenceParams::new(k, 1)?;
    let seed = InitialConditions::miles(k);
    Ok(SequenceWindow {
        kind: SequenceKind::Miles { k },
        start_index: 0,
        terms: run_recurrence(params, seed.values(), index_bound(t)?),
    })
}
