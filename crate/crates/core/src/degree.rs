//! Degree distributions and graphical degree sequences.
//!
//! A [`DistSpec`] is a probability distribution over degrees `1..=d_max`,
//! truncated and renormalized from a standard family. Sampling a sequence
//! of `n` i.i.d. degrees, repairing parity, and checking realizability
//! yields a [`DegreeSequence`] ready for construction.
//!
//! Degree zero is outside every support on purpose: the generator only
//! deals in connected graphs, and an isolated node can never join one.

use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

/// How many times sampling restarts before giving up on producing a
/// graphical sequence.
pub const SAMPLE_RETRY_LIMIT: u32 = 100;

/// A degree distribution on `{1, ..., d_max}`.
///
/// Weights follow the named family and are renormalized over the truncated
/// support, so the realized mean sits slightly off the untruncated
/// parameter for Poisson and exponential; [`DistSpec::scale_free_from_mean`]
/// instead solves for the exponent that hits a mean exactly on the
/// truncated support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistSpec {
    /// `p_d ∝ λ^d e^{-λ} / d!` for `d ≥ 1`.
    Poisson {
        /// Rate parameter of the untruncated law.
        lambda: f64,
        /// Largest degree in the support.
        d_max: usize,
    },
    /// `p_d ∝ e^{-κ (d - 1)}` for `d ≥ 1`.
    Exponential {
        /// Decay rate per degree step.
        kappa: f64,
        /// Largest degree in the support.
        d_max: usize,
    },
    /// `p_d ∝ d^{-γ}` for `d ≥ 1`.
    ScaleFree {
        /// Power-law exponent.
        gamma: f64,
        /// Largest degree in the support.
        d_max: usize,
    },
}

/// Why a parameter solver rejected its inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamError(&'static str);

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl core::error::Error for ParamError {}

impl DistSpec {
    /// Poisson degrees with rate `lambda`, truncated to `1..=d_max`.
    pub fn poisson(lambda: f64, d_max: usize) -> Self {
        DistSpec::Poisson { lambda, d_max }
    }

    /// Exponential degrees with decay `kappa`, truncated to `1..=d_max`.
    pub fn exponential(kappa: f64, d_max: usize) -> Self {
        DistSpec::Exponential { kappa, d_max }
    }

    /// Exponential degrees whose untruncated mean is `mean`; the decay
    /// solves `mean = 1 + 1 / (e^κ - 1)`.
    pub fn exponential_from_mean(mean: f64, d_max: usize) -> Result<Self, ParamError> {
        if !(mean.is_finite() && mean > 1.0) {
            return Err(ParamError("exponential mean must exceed 1"));
        }
        let kappa = libm::log(1.0 + 1.0 / (mean - 1.0));
        Ok(DistSpec::Exponential { kappa, d_max })
    }

    /// Power-law degrees with exponent `gamma`, truncated to `1..=d_max`.
    pub fn scale_free(gamma: f64, d_max: usize) -> Self {
        DistSpec::ScaleFree { gamma, d_max }
    }

    /// Power-law degrees whose mean on the truncated support equals
    /// `mean`, solved for the exponent by bisection; the mean must lie
    /// strictly between 1 and `d_max`.
    pub fn scale_free_from_mean(mean: f64, d_max: usize) -> Result<Self, ParamError> {
        if d_max < 2 {
            return Err(ParamError("scale-free support needs d_max >= 2"));
        }
        if !(mean.is_finite() && mean > 1.0 && mean < d_max as f64) {
            return Err(ParamError("scale-free mean must lie strictly between 1 and d_max"));
        }
        // The truncated mean is strictly decreasing in the exponent.
        let (mut lo, mut hi) = (-64.0_f64, 64.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (DistSpec::ScaleFree { gamma: mid, d_max }).mean() > mean {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(DistSpec::ScaleFree { gamma: 0.5 * (lo + hi), d_max })
    }

    /// Largest degree in the support.
    pub fn d_max(&self) -> usize {
        match *self {
            DistSpec::Poisson { d_max, .. }
            | DistSpec::Exponential { d_max, .. }
            | DistSpec::ScaleFree { d_max, .. } => d_max,
        }
    }

    fn log_weight(&self, d: usize) -> f64 {
        let df = d as f64;
        match *self {
            DistSpec::Poisson { lambda, .. } => {
                df * libm::log(lambda) - lambda - libm::lgamma(df + 1.0)
            }
            DistSpec::Exponential { kappa, .. } => -kappa * (df - 1.0),
            DistSpec::ScaleFree { gamma, .. } => -gamma * libm::log(df),
        }
    }

    fn validate(&self) -> Result<(), SampleError> {
        let param_ok = match *self {
            DistSpec::Poisson { lambda, .. } => lambda.is_finite() && lambda > 0.0,
            DistSpec::Exponential { kappa, .. } => kappa.is_finite() && kappa > 0.0,
            DistSpec::ScaleFree { gamma, .. } => gamma.is_finite(),
        };
        if !param_ok {
            return Err(SampleError::InvalidSpec("distribution parameter out of range"));
        }
        if self.d_max() == 0 {
            return Err(SampleError::InvalidSpec("d_max must be at least 1"));
        }
        Ok(())
    }

    /// Probabilities for degrees `1..=d_max`, in order; sums to 1.
    ///
    /// Weights are assembled in log space so extreme parameters cannot
    /// underflow the tail to all-zero before normalization.
    pub fn pmf(&self) -> Vec<f64> {
        let logs: Vec<f64> = (1..=self.d_max()).map(|d| self.log_weight(d)).collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut weights: Vec<f64> = logs.iter().map(|&l| libm::exp(l - top)).collect();
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        weights
    }

    /// Mean degree of the truncated distribution.
    pub fn mean(&self) -> f64 {
        self.pmf()
            .iter()
            .enumerate()
            .map(|(i, p)| (i + 1) as f64 * p)
            .sum()
    }
}

/// A list of prospective node degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence(Vec<usize>);

impl DegreeSequence {
    /// Wraps a degree list; realizability is checked by
    /// [`DegreeSequence::is_graphical`], not here.
    pub fn new(degrees: Vec<usize>) -> Self {
        DegreeSequence(degrees)
    }

    /// The degrees, indexed by node.
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Whether the sequence has no entries.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of all degrees (twice the edge count of any realization).
    pub fn degree_sum(&self) -> usize {
        self.0.iter().sum()
    }

    /// Largest degree, 0 for an empty sequence.
    pub fn max_degree(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Whether some simple graph realizes the sequence: the sum must be
    /// even and every head of the sorted sequence must fit among the
    /// remaining degrees.
    pub fn is_graphical(&self) -> bool {
        let n = self.0.len();
        if n == 0 {
            return true;
        }
        if self.0.iter().any(|&d| d >= n) {
            return false;
        }
        if !self.degree_sum().is_multiple_of(2) {
            return false;
        }
        let mut d = self.0.clone();
        d.sort_unstable_by(|a, b| b.cmp(a));
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(0usize);
        for &x in &d {
            prefix.push(prefix.last().unwrap() + x);
        }
        for k in 1..=n {
            let tail = &d[k..];
            let big = tail.partition_point(|&x| x > k);
            let tail_sum = big * k + (prefix[n] - prefix[k + big]);
            if prefix[k] > k * (k - 1) + tail_sum {
                return false;
            }
        }
        true
    }
}

impl From<Vec<usize>> for DegreeSequence {
    fn from(degrees: Vec<usize>) -> Self {
        DegreeSequence::new(degrees)
    }
}

impl AsRef<[usize]> for DegreeSequence {
    fn as_ref(&self) -> &[usize] {
        &self.0
    }
}

/// Why no degree sequence was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleError {
    /// The distribution parameters themselves are unusable.
    InvalidSpec(&'static str),
    /// No graphical sequence emerged within [`SAMPLE_RETRY_LIMIT`] draws.
    RetryExhausted {
        /// How many complete draws were attempted.
        attempts: u32,
    },
}

impl fmt::Display for SampleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleError::InvalidSpec(what) => write!(f, "invalid distribution spec: {what}"),
            SampleError::RetryExhausted { attempts } => {
                write!(f, "no graphical degree sequence after {attempts} draws")
            }
        }
    }
}

impl core::error::Error for SampleError {}

/// Draws `n` i.i.d. degrees from `spec`, bumps one node by 1 if the sum
/// came out odd (degree permitting), and redraws until the sequence is
/// graphical. The support must fit a simple graph: `d_max <= n - 1`.
pub fn sample_degree_sequence<R: Rng + ?Sized>(
    spec: &DistSpec,
    n: usize,
    rng: &mut R,
) -> Result<DegreeSequence, SampleError> {
    spec.validate()?;
    if spec.d_max() + 1 > n {
        return Err(SampleError::InvalidSpec("d_max must be at most n - 1"));
    }
    let d_max = spec.d_max();
    let mut cdf = spec.pmf();
    let mut run = 0.0;
    for c in &mut cdf {
        run += *c;
        *c = run;
    }
    *cdf.last_mut().expect("d_max >= 1") = 1.0;

    for _ in 0..SAMPLE_RETRY_LIMIT {
        let mut degrees: Vec<usize> = (0..n)
            .map(|_| {
                let u: f64 = rng.random();
                cdf.partition_point(|&c| c <= u).min(d_max - 1) + 1
            })
            .collect();
        if degrees.iter().sum::<usize>() % 2 == 1 {
            let mut repaired = false;
            for _ in 0..4 * n {
                let i = rng.random_range(0..n);
                if degrees[i] < d_max {
                    degrees[i] += 1;
                    repaired = true;
                    break;
                }
            }
            if !repaired {
                continue;
            }
        }
        let seq = DegreeSequence::new(degrees);
        if seq.is_graphical() {
            return Ok(seq);
        }
    }
    Err(SampleError::RetryExhausted { attempts: SAMPLE_RETRY_LIMIT })
}
