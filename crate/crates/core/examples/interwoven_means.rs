//! The node iteration step by step, including the two-level oscillation.
//!
//! ```text
//! cargo run --example interwoven_means
//! ```

use homographic::{interwoven_means, GrayImage, IterationConfig};

fn show(label: &str, img: &GrayImage) {
    let (nodes, trace) = interwoven_means(img, &IterationConfig::default()).unwrap();
    println!("{label}");
    for (m, (c1, c2)) in trace.iterates.iter().enumerate() {
        println!("  m={m:<3} c1={c1:.10} c2={c2:.10}");
    }
    println!(
        "  -> c1={:.10} c2={:.10} (converged={}, cycle={})\n",
        nodes.c1(),
        nodes.c2(),
        trace.converged,
        trace.cycle_detected
    );
}

fn main() {
    show(
        "full 8-bit ramp",
        &GrayImage::from_row(255, (0..=255).collect()).unwrap(),
    );
    show(
        "four levels, maxval 4",
        &GrayImage::from_row(4, vec![0, 1, 3, 4]).unwrap(),
    );
    show(
        "four levels, maxval 255",
        &GrayImage::from_row(255, vec![0, 64, 191, 255]).unwrap(),
    );
    show(
        "two levels (period-2 cycle)",
        &GrayImage::from_row(255, vec![0, 255]).unwrap(),
    );
}
