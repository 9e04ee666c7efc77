//! Gray-level contrast enhancement with a generalized homographic curve.
//!
//! The enhancement is a point transform. Four interpolation nodes are taken
//! from the image itself (its extrema and two "interwoven" interior means),
//! and a smooth, monotone rational curve is fitted to send them to four
//! equidistant output levels. The result approximates histogram
//! equalization with a closed-form curve instead of a cumulative histogram.
//!
//! ```
//! use homographic::{enhance, GrayImage, IterationConfig, TargetLevels};
//!
//! let ramp = GrayImage::from_row(255, (0..=255).collect()).unwrap();
//! let (out, report) = enhance(&ramp, &TargetLevels::default(), &IterationConfig::default()).unwrap();
//! assert_eq!(out.samples().len(), 256);
//! assert!((report.gamma - 1.0).abs() < 0.05);
//! ```
//!
//! Modules:
//! - [`image_io`]: PGM P2/P5 and the integer/unit level mapping
//! - [`statistics`]: histograms, extrema and the node iteration
//! - [`transfer`]: fitting and evaluating the curve, lookup tables
//! - [`pipeline`]: end-to-end enhancement and its report
//! - [`plots`]: CSV and SVG renderings of curves and histograms
//! - [`cli`]: the `homographic` command-line front end

pub mod cli;
pub mod error;
pub mod image_io;
pub mod pipeline;
pub mod plots;
pub mod statistics;
pub mod transfer;

pub use error::{EnhanceError, PgmError};
pub use image_io::{from_unit, read_pgm, to_unit, write_pgm, GrayImage, PgmFormat};
pub use pipeline::{enhance, EnhanceReport};
pub use statistics::{histogram, interwoven_means, Histogram, IterationConfig, NodeSet};
pub use transfer::{
    build_lut, eval_transfer, fit_transfer, gamma_zero, Lut, TargetLevels, TransferFunction,
};
