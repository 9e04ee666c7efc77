//! Histogram and curve plots as CSV and SVG.
//!
//! ```text
//! cargo run --example figures [OUTPUT_DIR]
//! ```

use std::path::PathBuf;

use homographic::plots::{curve_csv, curve_svg, histogram_csv, histogram_svg};
use homographic::{enhance, GrayImage, IterationConfig, TargetLevels};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);

    // squared ramp: dark levels dominate
    let samples = (0..4096u32)
        .map(|i| ((i * i) / (4096 * 16)) as u16)
        .collect();
    let img = GrayImage::new(64, 64, 255, samples)?;
    let (_, report) = enhance(&img, &TargetLevels::default(), &IterationConfig::default())?;
    let transfer = report.transfer()?;

    std::fs::create_dir_all(&dir)?;
    let files = [
        (
            "histogram_before.csv",
            histogram_csv(&report.histogram_before),
        ),
        (
            "histogram_before.svg",
            histogram_svg(&report.histogram_before),
        ),
        (
            "histogram_after.csv",
            histogram_csv(&report.histogram_after),
        ),
        (
            "histogram_after.svg",
            histogram_svg(&report.histogram_after),
        ),
        ("curve.csv", curve_csv(&transfer, 256)),
        ("curve.svg", curve_svg(&transfer)),
    ];
    for (name, bytes) in files {
        std::fs::write(dir.join(name), bytes)?;
        println!("{}", dir.join(name).display());
    }
    Ok(())
}
