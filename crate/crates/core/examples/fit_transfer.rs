//! Fitting the transfer curve to a node set and tabulating it.
//!
//! ```text
//! cargo run --example fit_transfer -- 0.1 0.2 0.3 0.9
//! ```
//!
//! The four arguments are `x1 c1 c2 x2`; the targets are the default
//! equidistant levels `0, 1/3, 2/3, 1`.

use homographic::{build_lut, fit_transfer, gamma_zero, NodeSet, TargetLevels};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let values: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let [x1, c1, c2, x2] = match values[..] {
        [a, b, c, d] => [a, b, c, d],
        [] => [0.1, 0.2, 0.3, 0.9],
        _ => return Err("expected four node positions: x1 c1 c2 x2".into()),
    };
    let nodes = NodeSet::new(x1, c1, c2, x2)?;
    let targets = TargetLevels::default();

    println!("gamma0 = {}", gamma_zero(&nodes, &targets)?);
    let t = fit_transfer(&nodes, &targets)?;
    println!("alpha1 = {}\nalpha2 = {}\n", t.alpha1(), t.alpha2());

    for (x, g) in nodes.as_array().into_iter().zip(targets.as_array()) {
        println!("g({x}) = {:.15}  (target {g})", t.eval(x));
    }
    println!();
    for i in 0..=10 {
        let x = x1 + (x2 - x1) * i as f64 / 10.0;
        println!("{x:.3}  {:.6}", t.eval(x));
    }

    let lut = build_lut(&t, 255);
    println!("\n8-bit table is monotone: {}", lut.is_monotone());
    Ok(())
}
