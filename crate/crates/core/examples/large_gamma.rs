//! Behaviour at steep exponents, where `(u/v)^gamma` leaves the double
//! range and the evaluation switches to the log domain.
//!
//! ```text
//! cargo run --example large_gamma
//! ```

use homographic::{build_lut, fit_transfer, EnhanceError, NodeSet, TargetLevels};

fn main() {
    for (c1, c2) in [(0.45, 0.55), (0.49, 0.51), (0.499, 0.501), (0.4999, 0.5001)] {
        let nodes = NodeSet::new(0.0, c1, c2, 1.0).unwrap();
        match fit_transfer(&nodes, &TargetLevels::default()) {
            Ok(t) => {
                let lut = build_lut(&t, 255);
                let jump = lut.entries().windows(2).map(|w| w[1] - w[0]).max().unwrap();
                println!(
                    "c1={c1:<6} gamma={:>9.3}  g(0.3)={:.3e}  g(0.7)={:.6}  largest 8-bit step {jump}",
                    t.gamma(),
                    t.eval(0.3),
                    t.eval(0.7),
                );
            }
            Err(e @ EnhanceError::Overflow(_)) => println!("c1={c1:<6} {e}"),
            Err(e) => panic!("{e}"),
        }
    }
}
