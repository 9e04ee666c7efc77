//! Gray-level statistics and the interwoven-means node iteration.
//!
//! The four interpolation abscissae are the image extrema `x1`, `x2` and two
//! interior means `c1`, `c2`, where `c1` is the mean level over
//! `[x1, c2]` and `c2` the mean level over `[c1, x2]`. The coupled system
//! is solved by fixed-point iteration starting from the midpoints between
//! the extrema and the global mean.
//!
//! All accumulation is done on integer samples. Iterates are carried as
//! exact rationals in sample units so interval membership never depends on
//! floating-point rounding; unit values are derived for reporting.

use crate::error::EnhanceError;
use crate::image_io::{to_unit, GrayImage};

/// Per-level pixel counts, `bins.len() == maxval + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Histogram {
    bins: Vec<u64>,
    total: u64,
}

impl Histogram {
    /// Rebuilds a histogram from raw counts. `bins` must be non-empty and
    /// have at most 65536 entries.
    pub fn from_bins(bins: Vec<u64>) -> Option<Self> {
        if bins.is_empty() || bins.len() > 65536 {
            return None;
        }
        let total = bins.iter().try_fold(0u64, |acc, &b| acc.checked_add(b))?;
        Some(Self { bins, total })
    }

    pub fn bins(&self) -> &[u64] {
        &self.bins
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn maxval(&self) -> u16 {
        (self.bins.len() - 1) as u16
    }

    /// Lowest and highest occupied levels, `None` when empty.
    pub fn occupied_range(&self) -> Option<(u16, u16)> {
        let lo = self.bins.iter().position(|&b| b > 0)?;
        let hi = self.bins.iter().rposition(|&b| b > 0)?;
        Some((lo as u16, hi as u16))
    }

    /// Cumulative distribution `F(k) = P(level <= k)`.
    pub fn cdf(&self) -> Vec<f64> {
        let total = self.total.max(1) as f64;
        let mut running = 0u64;
        self.bins
            .iter()
            .map(|&b| {
                running += b;
                running as f64 / total
            })
            .collect()
    }

    /// Kolmogorov-Smirnov distance between this histogram's CDF and the
    /// discrete uniform CDF over all `maxval + 1` levels.
    pub fn ks_to_uniform(&self) -> f64 {
        let levels = self.bins.len() as f64;
        self.cdf()
            .iter()
            .enumerate()
            .map(|(k, f)| (f - (k + 1) as f64 / levels).abs())
            .fold(0.0, f64::max)
    }

    /// Occupied `(level, count)` pairs in increasing level order.
    fn occupied(&self) -> Vec<(u16, u64)> {
        self.bins
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(level, &c)| (level as u16, c))
            .collect()
    }
}

pub fn histogram(img: &GrayImage) -> Histogram {
    let mut bins = vec![0u64; usize::from(img.maxval()) + 1];
    for &s in img.samples() {
        bins[usize::from(s)] += 1;
    }
    Histogram {
        bins,
        total: img.pixel_count() as u64,
    }
}

/// Unit-scale minimum and maximum gray levels.
pub fn extrema(img: &GrayImage) -> Result<(f64, f64), EnhanceError> {
    let samples = img.samples();
    let lo = samples.iter().copied().min().unwrap_or(0);
    let hi = samples.iter().copied().max().unwrap_or(0);
    if lo == hi {
        return Err(EnhanceError::ConstantImage(lo));
    }
    Ok((to_unit(lo, img.maxval()), to_unit(hi, img.maxval())))
}

/// Mean unit gray level over all pixels.
pub fn global_mean(img: &GrayImage) -> f64 {
    let sum: u128 = img.samples().iter().map(|&s| u128::from(s)).sum();
    let denom = img.pixel_count() as u128 * u128::from(img.maxval());
    sum as f64 / denom as f64
}

/// The four interpolation abscissae `x1 < c1 < c2 < x2` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeSet {
    x1: f64,
    c1: f64,
    c2: f64,
    x2: f64,
}

impl NodeSet {
    /// Requires finite values with `x1 < c1 < c2 < x2`.
    pub fn new(x1: f64, c1: f64, c2: f64, x2: f64) -> Result<Self, EnhanceError> {
        Self::with_min_gap(x1, c1, c2, x2, 0.0)
    }

    /// Requires each consecutive gap to be at least `min_gap` (and positive).
    pub fn with_min_gap(
        x1: f64,
        c1: f64,
        c2: f64,
        x2: f64,
        min_gap: f64,
    ) -> Result<Self, EnhanceError> {
        let ordered = [x1, c1, c2, x2].iter().all(|v| v.is_finite())
            && c1 - x1 >= min_gap
            && c2 - c1 >= min_gap
            && x2 - c2 >= min_gap
            && x1 < c1
            && c1 < c2
            && c2 < x2;
        if !ordered {
            return Err(EnhanceError::DegenerateNodes {
                x1,
                c1,
                c2,
                x2,
                min_gap,
            });
        }
        Ok(Self { x1, c1, c2, x2 })
    }

    /// Equally spaced nodes on `[0, 1]`.
    pub fn equidistant() -> Self {
        Self {
            x1: 0.0,
            c1: 1.0 / 3.0,
            c2: 2.0 / 3.0,
            x2: 1.0,
        }
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn x2(&self) -> f64 {
        self.x2
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.x1, self.c1, self.c2, self.x2]
    }
}

/// Stopping rule for [`interwoven_means`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationConfig {
    /// Stop once both interior means move by less than this (unit scale).
    pub epsilon: f64,
    pub max_iters: usize,
    /// Smallest accepted gap between consecutive nodes.
    pub min_gap: f64,
}

impl Default for IterationConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-4,
            max_iters: 100,
            min_gap: 1e-6,
        }
    }
}

impl IterationConfig {
    pub fn validate(&self) -> Result<(), EnhanceError> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(EnhanceError::InvalidConfig(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_iters == 0 {
            return Err(EnhanceError::InvalidConfig(
                "max_iters must be at least 1".into(),
            ));
        }
        if !(self.min_gap > 0.0 && self.min_gap.is_finite()) {
            return Err(EnhanceError::InvalidConfig(format!(
                "min_gap must be positive, got {}",
                self.min_gap
            )));
        }
        Ok(())
    }
}

/// Iterates `(c1, c2)` from `m = 0`, plus how the iteration ended.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub iterates: Vec<(f64, f64)>,
    pub converged: bool,
    pub cycle_detected: bool,
    pub iterations_used: usize,
}

/// Sufficient statistics of the two overlapping level intervals:
/// `D1 = [x1, c2]` and `D2 = [c1, x2]`, both closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionStats {
    pub count1: u64,
    /// Sum of unit gray levels over `D1`.
    pub sum1: f64,
    pub count2: u64,
    pub sum2: f64,
}

/// Counts and unit-level sums of the pixels in `[x1, c2]` and `[c1, x2]`.
///
/// Membership is decided exactly: `s / maxval <= c` is evaluated as the
/// sign of `c * maxval - s` with a single rounding.
pub fn partition_stats(img: &GrayImage, c1: f64, c2: f64) -> PartitionStats {
    let maxval = f64::from(img.maxval());
    let (mut count1, mut sum1, mut count2, mut sum2) = (0u64, 0u64, 0u64, 0u64);
    for &s in img.samples() {
        let level = f64::from(s);
        if c2.mul_add(maxval, -level) >= 0.0 {
            count1 += 1;
            sum1 += u64::from(s);
        }
        if c1.mul_add(maxval, -level) <= 0.0 {
            count2 += 1;
            sum2 += u64::from(s);
        }
    }
    PartitionStats {
        count1,
        sum1: sum1 as f64 / maxval,
        count2,
        sum2: sum2 as f64 / maxval,
    }
}

/// A non-negative rational level `num / den` in sample units.
#[derive(Debug, Clone, Copy)]
struct Level {
    num: u128,
    den: u128,
}

impl Level {
    fn at_most(self, sample: u16) -> bool {
        u128::from(sample) * self.den <= self.num
    }

    fn at_least(self, sample: u16) -> bool {
        u128::from(sample) * self.den >= self.num
    }

    fn unit(self, maxval: u16) -> f64 {
        self.num as f64 / (self.den * u128::from(maxval)) as f64
    }
}

/// Mean level of the occupied entries accepted by `keep`.
fn interval_mean(occupied: &[(u16, u64)], keep: impl Fn(u16) -> bool) -> Option<Level> {
    let (count, sum) = occupied
        .iter()
        .filter(|(level, _)| keep(*level))
        .fold((0u128, 0u128), |(n, s), &(level, c)| {
            (n + u128::from(c), s + u128::from(c) * u128::from(level))
        });
    (count > 0).then_some(Level {
        num: sum,
        den: count,
    })
}

/// Interwoven means of `img`: see [`interwoven_means_of_histogram`].
pub fn interwoven_means(
    img: &GrayImage,
    cfg: &IterationConfig,
) -> Result<(NodeSet, IterationTrace), EnhanceError> {
    interwoven_means_of_histogram(&histogram(img), cfg)
}

/// Runs the node iteration on a histogram.
///
/// Each step recomputes `c1` as the mean over `[x1, c2]` and `c2` as the
/// mean over `[c1, x2]` using the previous pair. Stops when both move by
/// less than `epsilon`. A period-2 oscillation (both means within
/// `epsilon` of their values two steps back) is resolved by averaging the
/// two states. After `max_iters` steps the last pair is returned unconverged.
pub fn interwoven_means_of_histogram(
    hist: &Histogram,
    cfg: &IterationConfig,
) -> Result<(NodeSet, IterationTrace), EnhanceError> {
    cfg.validate()?;
    let maxval = hist.maxval();
    let (lo, hi) = hist
        .occupied_range()
        .ok_or_else(|| EnhanceError::InvalidConfig("histogram has no pixels".into()))?;
    if lo == hi {
        return Err(EnhanceError::ConstantImage(lo));
    }
    let occupied = hist.occupied();
    let n = u128::from(hist.total());
    let sum: u128 = occupied
        .iter()
        .map(|&(level, c)| u128::from(level) * u128::from(c))
        .sum();

    // (l_min + l_med) / 2 and (l_med + l_max) / 2 over the common denominator 2N.
    let mut c1 = Level {
        num: u128::from(lo) * n + sum,
        den: 2 * n,
    };
    let mut c2 = Level {
        num: u128::from(hi) * n + sum,
        den: 2 * n,
    };
    let mut iterates = vec![(c1.unit(maxval), c2.unit(maxval))];
    let mut converged = false;
    let mut cycle_detected = false;
    let mut result = iterates[0];

    while iterates.len() <= cfg.max_iters {
        let iteration = iterates.len() - 1;
        let next1 =
            interval_mean(&occupied, |s| c2.at_most(s)).ok_or(EnhanceError::EmptyPartition {
                which: 1,
                iteration,
            })?;
        let next2 =
            interval_mean(&occupied, |s| c1.at_least(s)).ok_or(EnhanceError::EmptyPartition {
                which: 2,
                iteration,
            })?;
        c1 = next1;
        c2 = next2;
        let current = (c1.unit(maxval), c2.unit(maxval));
        let previous = iterates[iterates.len() - 1];
        iterates.push(current);
        result = current;

        if within(current, previous, cfg.epsilon) {
            converged = true;
            break;
        }
        if iterates.len() >= 3 && within(current, iterates[iterates.len() - 3], cfg.epsilon) {
            cycle_detected = true;
            result = (
                (current.0 + previous.0) / 2.0,
                (current.1 + previous.1) / 2.0,
            );
            break;
        }
    }

    let nodes = NodeSet::with_min_gap(
        to_unit(lo, maxval),
        result.0,
        result.1,
        to_unit(hi, maxval),
        cfg.min_gap,
    )?;
    let iterations_used = iterates.len() - 1;
    Ok((
        nodes,
        IterationTrace {
            iterates,
            converged,
            cycle_detected,
            iterations_used,
        },
    ))
}

fn within(a: (f64, f64), b: (f64, f64), epsilon: f64) -> bool {
    (a.0 - b.0).abs() < epsilon && (a.1 - b.1).abs() < epsilon
}
