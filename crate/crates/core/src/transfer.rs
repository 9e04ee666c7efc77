//! The generalized homographic transfer curve.
//!
//! Given nodes `x1 < c1 < c2 < x2` and targets `g1 < gc1 < gc2 < g2`, the
//! curve
//!
//! ```text
//!        a1 g1 (x2 - x)^γ + a2 g2 (x - x1)^γ
//! g(x) = -----------------------------------
//!          a1 (x2 - x)^γ + a2 (x - x1)^γ
//! ```
//!
//! passes through all four points for exactly one exponent γ, which has a
//! closed form as a ratio of two log cross-ratios. With `γ = 1` it is the
//! plain two-point homographic (linear-fractional) function.

use crate::error::EnhanceError;
use crate::image_io::from_unit;
use crate::statistics::NodeSet;

/// Magnitude below which the log cross-ratios count as zero.
const LOG_RATIO_ZERO: f64 = 1e-12;

/// Above this `|γ ln(u/v)|` the weight is computed from logarithms.
const LOG_DOMAIN_THRESHOLD: f64 = 50.0;

/// Output levels the curve must hit at `x1, c1, c2, x2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetLevels {
    g1: f64,
    gc1: f64,
    gc2: f64,
    g2: f64,
}

impl TargetLevels {
    /// Requires `0 <= g1 < gc1 < gc2 < g2 <= 1`.
    pub fn new(g1: f64, gc1: f64, gc2: f64, g2: f64) -> Result<Self, EnhanceError> {
        let ok = [g1, gc1, gc2, g2].iter().all(|v| v.is_finite())
            && 0.0 <= g1
            && g1 < gc1
            && gc1 < gc2
            && gc2 < g2
            && g2 <= 1.0;
        if !ok {
            return Err(EnhanceError::InvalidTargets(format!(
                "need 0 <= g1 < gc1 < gc2 < g2 <= 1, got {g1}, {gc1}, {gc2}, {g2}"
            )));
        }
        Ok(Self { g1, gc1, gc2, g2 })
    }

    pub fn g1(&self) -> f64 {
        self.g1
    }

    pub fn gc1(&self) -> f64 {
        self.gc1
    }

    pub fn gc2(&self) -> f64 {
        self.gc2
    }

    pub fn g2(&self) -> f64 {
        self.g2
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.g1, self.gc1, self.gc2, self.g2]
    }
}

/// Equidistant targets `(0, 1/3, 2/3, 1)`: the output of a uniform image.
impl Default for TargetLevels {
    fn default() -> Self {
        Self {
            g1: 0.0,
            gc1: 1.0 / 3.0,
            gc2: 2.0 / 3.0,
            g2: 1.0,
        }
    }
}

/// A fitted curve: exponent, the two coefficients, and the points it
/// interpolates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferFunction {
    gamma: f64,
    alpha1: f64,
    alpha2: f64,
    nodes: NodeSet,
    targets: TargetLevels,
}

impl TransferFunction {
    /// Assembles a curve from explicit parameters. `alpha1`, `alpha2` must
    /// be positive and `gamma` finite.
    pub fn from_parts(
        gamma: f64,
        alpha1: f64,
        alpha2: f64,
        nodes: NodeSet,
        targets: TargetLevels,
    ) -> Result<Self, EnhanceError> {
        if !gamma.is_finite() {
            return Err(EnhanceError::Overflow("gamma"));
        }
        if !(alpha1 > 0.0 && alpha1.is_finite()) {
            return Err(EnhanceError::Overflow("alpha1"));
        }
        if !(alpha2 > 0.0 && alpha2.is_finite()) {
            return Err(EnhanceError::Overflow("alpha2"));
        }
        Ok(Self {
            gamma,
            alpha1,
            alpha2,
            nodes,
            targets,
        })
    }

    /// The straight line through equidistant nodes and targets.
    pub fn identity() -> Self {
        Self {
            gamma: 1.0,
            alpha1: 1.0,
            alpha2: 1.0,
            nodes: NodeSet::equidistant(),
            targets: TargetLevels::default(),
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn targets(&self) -> &TargetLevels {
        &self.targets
    }

    /// Same curve with both coefficients multiplied by `lambda`. Fails if
    /// a scaled coefficient leaves the positive finite range.
    pub fn scaled(&self, lambda: f64) -> Result<Self, EnhanceError> {
        Self::from_parts(
            self.gamma,
            self.alpha1 * lambda,
            self.alpha2 * lambda,
            self.nodes,
            self.targets,
        )
    }

    /// Same coefficients with a different exponent.
    pub fn with_gamma(&self, gamma: f64) -> Self {
        Self { gamma, ..*self }
    }

    /// Evaluates the curve; see [`eval_transfer`].
    pub fn eval(&self, x: f64) -> f64 {
        eval_transfer(self, x)
    }
}

/// Two-point homographic function through `(x1, f1)` and `(x2, f2)`:
/// `(a1 f1 (x2 - x) + a2 f2 (x - x1)) / (a1 (x2 - x) + a2 (x - x1))`.
pub fn two_point_homographic(
    x1: f64,
    x2: f64,
    f1: f64,
    f2: f64,
    alpha1: f64,
    alpha2: f64,
    x: f64,
) -> f64 {
    let left = alpha1 * (x2 - x);
    let right = alpha2 * (x - x1);
    (left * f1 + right * f2) / (left + right)
}

/// Exponent for which the curve passes through both interior points.
///
/// When both log cross-ratios vanish every exponent works and 1 is
/// returned; a vanishing denominator alone admits no solution.
pub fn gamma_zero(nodes: &NodeSet, targets: &TargetLevels) -> Result<f64, EnhanceError> {
    let [x1, c1, c2, x2] = nodes.as_array();
    let [g1, gc1, gc2, g2] = targets.as_array();
    let numerator = ((gc1 - g1) / (g2 - gc1) * ((g2 - gc2) / (gc2 - g1))).ln();
    let denominator = ((c1 - x1) / (x2 - c1) * ((x2 - c2) / (c2 - x1))).ln();
    match (
        numerator.abs() < LOG_RATIO_ZERO,
        denominator.abs() < LOG_RATIO_ZERO,
    ) {
        (true, true) => Ok(1.0),
        (false, true) => Err(EnhanceError::GammaUndefined { numerator }),
        _ => {
            let gamma = numerator / denominator;
            if gamma.is_finite() {
                Ok(gamma)
            } else {
                Err(EnhanceError::Overflow("gamma"))
            }
        }
    }
}

/// Fits exponent and coefficients so the curve interpolates all four
/// `(node, target)` pairs. The coefficients are
/// `alpha1 = (g2 - gc1) / (x2 - c1)^γ` and `alpha2 = (gc1 - g1) / (c1 - x1)^γ`.
pub fn fit_transfer(
    nodes: &NodeSet,
    targets: &TargetLevels,
) -> Result<TransferFunction, EnhanceError> {
    let gamma = gamma_zero(nodes, targets)?;
    let alpha1 = (targets.g2 - targets.gc1) / (nodes.x2() - nodes.c1()).powf(gamma);
    let alpha2 = (targets.gc1 - targets.g1) / (nodes.c1() - nodes.x1()).powf(gamma);
    TransferFunction::from_parts(gamma, alpha1, alpha2, *nodes, *targets)
}

/// Evaluates the fitted curve at `x`, clamping `x` to `[x1, x2]`.
///
/// With `u = x2 - x` and `v = x - x1` the curve is `g1 + (g2 - g1) w`,
/// `w = 1 / (1 + (a1 / a2) (u / v)^γ)`. Endpoints are returned exactly.
/// When `γ |ln(u/v)|` exceeds 50 the ratio is formed from logarithms, so
/// the weight stays finite and monotone for any exponent.
pub fn eval_transfer(t: &TransferFunction, x: f64) -> f64 {
    let [x1, _, _, x2] = t.nodes.as_array();
    let (g1, g2) = (t.targets.g1, t.targets.g2);
    if x.is_nan() {
        return g1;
    }
    if x <= x1 {
        return g1;
    }
    if x >= x2 {
        return g2;
    }
    let u = x2 - x;
    let v = x - x1;
    let log_uv = u.ln() - v.ln();
    // r = (a1 u^γ) / (a2 v^γ); the g2 weight is w = 1 / (1 + r).
    let r = if (t.gamma * log_uv).abs() > LOG_DOMAIN_THRESHOLD {
        (t.alpha1.ln() - t.alpha2.ln() + t.gamma * log_uv).exp()
    } else {
        t.alpha1 / t.alpha2 * (u / v).powf(t.gamma)
    };
    let (w, w_complement) = if r.is_infinite() {
        (0.0, 1.0)
    } else {
        (1.0 / (1.0 + r), r / (1.0 + r))
    };
    let span = g2 - g1;
    let g = if w <= 0.5 {
        g1 + span * w
    } else {
        g2 - span * w_complement
    };
    g.clamp(g1, g2)
}

/// Discrete realization of a transfer curve over integer levels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lut {
    maxval: u16,
    entries: Vec<u16>,
}

impl Lut {
    pub fn maxval(&self) -> u16 {
        self.maxval
    }

    pub fn entries(&self) -> &[u16] {
        &self.entries
    }

    pub fn get(&self, level: u16) -> u16 {
        self.entries[usize::from(level)]
    }

    pub fn is_monotone(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] <= w[1])
    }
}

/// `entries[i] = from_unit(g(i / maxval), maxval)` for every level `i`.
pub fn build_lut(t: &TransferFunction, maxval: u16) -> Lut {
    let maxval = maxval.max(1);
    let entries = (0..=maxval)
        .map(|i| from_unit(eval_transfer(t, f64::from(i) / f64::from(maxval)), maxval))
        .collect();
    Lut { maxval, entries }
}
