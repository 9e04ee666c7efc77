//! End-to-end enhancement: nodes from the image statistics, a fitted
//! transfer curve, lookup-table application, and a machine-readable report.

use rayon::prelude::*;
use serde::de::Error as _;
use serde::Deserialize;

use crate::error::EnhanceError;
use crate::image_io::GrayImage;
use crate::statistics::{
    histogram, interwoven_means_of_histogram, Histogram, IterationConfig, IterationTrace, NodeSet,
};
use crate::transfer::{build_lut, fit_transfer, Lut, TargetLevels, TransferFunction};

/// Everything needed to reproduce an enhancement and redraw its curve.
#[derive(Debug, Clone, PartialEq)]
pub struct EnhanceReport {
    pub nodes: NodeSet,
    pub targets: TargetLevels,
    pub gamma: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub iterations_used: usize,
    pub converged: bool,
    pub cycle_detected: bool,
    pub histogram_before: Histogram,
    pub histogram_after: Histogram,
}

/// Computes the nodes of `img` and fits the curve sending them to `targets`.
pub fn fit_image(
    img: &GrayImage,
    targets: &TargetLevels,
    cfg: &IterationConfig,
) -> Result<(TransferFunction, IterationTrace), EnhanceError> {
    let (nodes, trace) = interwoven_means_of_histogram(&histogram(img), cfg)?;
    Ok((fit_transfer(&nodes, targets)?, trace))
}

/// Enhances `img`: every output sample is `lut[input sample]`.
pub fn enhance(
    img: &GrayImage,
    targets: &TargetLevels,
    cfg: &IterationConfig,
) -> Result<(GrayImage, EnhanceReport), EnhanceError> {
    let before = histogram(img);
    let (nodes, trace) = interwoven_means_of_histogram(&before, cfg)?;
    let transfer = fit_transfer(&nodes, targets)?;
    let lut = build_lut(&transfer, img.maxval());
    let out = apply_lut_parallel(img, &lut);
    let report = EnhanceReport {
        nodes,
        targets: *targets,
        gamma: transfer.gamma(),
        alpha1: transfer.alpha1(),
        alpha2: transfer.alpha2(),
        iterations_used: trace.iterations_used,
        converged: trace.converged,
        cycle_detected: trace.cycle_detected,
        histogram_before: before,
        histogram_after: histogram(&out),
    };
    Ok((out, report))
}

/// Maps every sample through `lut`, sequentially.
pub fn apply_lut(img: &GrayImage, lut: &Lut) -> GrayImage {
    assert_eq!(
        lut.maxval(),
        img.maxval(),
        "lut built for a different maxval"
    );
    img.with_samples(img.samples().iter().map(|&s| lut.get(s)).collect())
}

/// Maps every sample through `lut` on the rayon pool. Produces the same
/// samples as [`apply_lut`].
pub fn apply_lut_parallel(img: &GrayImage, lut: &Lut) -> GrayImage {
    assert_eq!(
        lut.maxval(),
        img.maxval(),
        "lut built for a different maxval"
    );
    img.with_samples(img.samples().par_iter().map(|&s| lut.get(s)).collect())
}

/// Renders `value` with 17 significant digits, trailing zeros removed.
/// Every finite `f64` survives a parse of the result unchanged.
pub fn format_real(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let sci = format!("{value:.16e}");
    let (mantissa, exponent) = sci.split_once('e').expect("scientific notation");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let digits = digits.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };

    let body = if (-5..17).contains(&exponent) {
        let point = exponent + 1;
        if point <= 0 {
            format!("0.{}{digits}", "0".repeat((-point) as usize))
        } else if point as usize >= digits.len() {
            format!("{digits}{}", "0".repeat(point as usize - digits.len()))
        } else {
            let (int, frac) = digits.split_at(point as usize);
            format!("{int}.{frac}")
        }
    } else {
        let (lead, rest) = digits.split_at(1);
        if rest.is_empty() {
            format!("{lead}e{exponent}")
        } else {
            format!("{lead}.{rest}e{exponent}")
        }
    };
    format!("{sign}{body}")
}

fn push_field(out: &mut String, key: &str, value: &str, last: bool) {
    out.push_str("  \"");
    out.push_str(key);
    out.push_str("\": ");
    out.push_str(value);
    out.push_str(if last { "\n" } else { ",\n" });
}

fn counts(h: &Histogram) -> String {
    let items: Vec<String> = h.bins().iter().map(u64::to_string).collect();
    format!("[{}]", items.join(","))
}

impl EnhanceReport {
    /// JSON object with a fixed key order; histograms included.
    pub fn serialize(&self) -> Vec<u8> {
        self.render(true)
    }

    /// Same as [`serialize`](Self::serialize) without the two histograms.
    pub fn serialize_summary(&self) -> Vec<u8> {
        self.render(false)
    }

    fn render(&self, with_histograms: bool) -> Vec<u8> {
        let [x1, c1, c2, x2] = self.nodes.as_array();
        let [g1, gc1, gc2, g2] = self.targets.as_array();
        let reals = [
            ("x1", x1),
            ("c1", c1),
            ("c2", c2),
            ("x2", x2),
            ("g1", g1),
            ("gc1", gc1),
            ("gc2", gc2),
            ("g2", g2),
            ("gamma", self.gamma),
            ("alpha1", self.alpha1),
            ("alpha2", self.alpha2),
        ];
        let mut out = String::from("{\n");
        for (key, value) in reals {
            push_field(&mut out, key, &format_real(value), false);
        }
        push_field(
            &mut out,
            "iterations",
            &self.iterations_used.to_string(),
            false,
        );
        push_field(&mut out, "converged", &self.converged.to_string(), false);
        push_field(
            &mut out,
            "cycle_detected",
            &self.cycle_detected.to_string(),
            !with_histograms,
        );
        if with_histograms {
            push_field(
                &mut out,
                "histogram_before",
                &counts(&self.histogram_before),
                false,
            );
            push_field(
                &mut out,
                "histogram_after",
                &counts(&self.histogram_after),
                true,
            );
        }
        out.push_str("}\n");
        out.into_bytes()
    }

    /// Parses the output of [`serialize`](Self::serialize).
    pub fn parse(bytes: &[u8]) -> Result<Self, serde_json::Error> {
        let raw: RawReport = serde_json::from_slice(bytes)?;
        let nodes = NodeSet::new(raw.x1, raw.c1, raw.c2, raw.x2)
            .map_err(|e| serde_json::Error::custom(e.to_string()))?;
        let targets = TargetLevels::new(raw.g1, raw.gc1, raw.gc2, raw.g2)
            .map_err(|e| serde_json::Error::custom(e.to_string()))?;
        let histogram_before = Histogram::from_bins(raw.histogram_before)
            .ok_or_else(|| serde_json::Error::custom("invalid histogram_before"))?;
        let histogram_after = Histogram::from_bins(raw.histogram_after)
            .ok_or_else(|| serde_json::Error::custom("invalid histogram_after"))?;
        Ok(Self {
            nodes,
            targets,
            gamma: raw.gamma,
            alpha1: raw.alpha1,
            alpha2: raw.alpha2,
            iterations_used: raw.iterations,
            converged: raw.converged,
            cycle_detected: raw.cycle_detected,
            histogram_before,
            histogram_after,
        })
    }

    /// The fitted curve described by this report.
    pub fn transfer(&self) -> Result<TransferFunction, EnhanceError> {
        TransferFunction::from_parts(
            self.gamma,
            self.alpha1,
            self.alpha2,
            self.nodes,
            self.targets,
        )
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReport {
    x1: f64,
    c1: f64,
    c2: f64,
    x2: f64,
    g1: f64,
    gc1: f64,
    gc2: f64,
    g2: f64,
    gamma: f64,
    alpha1: f64,
    alpha2: f64,
    iterations: usize,
    converged: bool,
    cycle_detected: bool,
    histogram_before: Vec<u64>,
    histogram_after: Vec<u64>,
}
