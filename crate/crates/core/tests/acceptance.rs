//! Acceptance criteria for the enhancement library, one line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the report reads top to
//! bottom; exits non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use homographic::pipeline::{apply_lut, apply_lut_parallel, enhance, fit_image};
use homographic::statistics::{extrema, interwoven_means, IterationConfig, NodeSet};
use homographic::transfer::{
    build_lut, eval_transfer, fit_transfer, gamma_zero, two_point_homographic, TargetLevels,
    TransferFunction,
};
use homographic::{read_pgm, write_pgm, EnhanceError, GrayImage, PgmFormat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ramp() -> GrayImage {
    GrayImage::from_row(255, (0..=255).collect()).unwrap()
}

/// Four sorted values in `[0, 1]` with consecutive gaps of at least 1e-3.
fn sorted_four(rng: &mut ChaCha8Rng) -> [f64; 4] {
    loop {
        let mut v = [rng.gen::<f64>(), rng.gen(), rng.gen(), rng.gen()];
        v.sort_by(f64::total_cmp);
        if v.windows(2).all(|w| w[1] - w[0] >= 1e-3) {
            return v;
        }
    }
}

fn random_config(rng: &mut ChaCha8Rng) -> (NodeSet, TargetLevels) {
    let n = sorted_four(rng);
    let g = sorted_four(rng);
    (
        NodeSet::new(n[0], n[1], n[2], n[3]).unwrap(),
        TargetLevels::new(g[0], g[1], g[2], g[3]).unwrap(),
    )
}

/// `count` points evenly spaced on `[lo, hi]`, both ends included.
fn grid(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    (0..count).map(move |i| {
        if i + 1 == count {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (count - 1) as f64
        }
    })
}

fn criterion_1_identity_reduction() -> Outcome {
    let start = Instant::now();
    let t = fit_transfer(&NodeSet::equidistant(), &TargetLevels::default())
        .map_err(|e| e.to_string())?;
    let worst = grid(0.0, 1.0, 11)
        .map(|x| (eval_transfer(&t, x) - x).abs())
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    check(
        (t.gamma() - 1.0).abs() < 1e-12,
        format!("gamma = {}", t.gamma()),
    )?;
    check(
        (t.alpha1() - 1.0).abs() < 1e-12,
        format!("alpha1 = {}", t.alpha1()),
    )?;
    check(
        (t.alpha2() - 1.0).abs() < 1e-12,
        format!("alpha2 = {}", t.alpha2()),
    )?;
    check(worst < 1e-12, format!("max |g(x) - x| = {worst:e}"))?;
    check(
        elapsed < Duration::from_millis(1),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!("max |g(x)-x| = {worst:.1e}, {elapsed:?}"))
}

fn criterion_2_closed_form() -> Outcome {
    let nodes = NodeSet::new(0.0, 0.1, 0.3, 1.0).unwrap();
    let targets = TargetLevels::default();
    let expected = (0.25f64).ln() / (7.0f64 / 27.0).ln();
    let gamma = gamma_zero(&nodes, &targets).map_err(|e| e.to_string())?;
    check(
        (gamma - expected).abs() < 1e-12,
        format!("gamma {gamma} vs {expected}"),
    )?;
    let t = fit_transfer(&nodes, &targets).map_err(|e| e.to_string())?;
    let e1 = (eval_transfer(&t, 0.1) - 1.0 / 3.0).abs();
    let e2 = (eval_transfer(&t, 0.3) - 2.0 / 3.0).abs();
    check(
        e1 < 1e-9 && e2 < 1e-9,
        format!("interpolation errors {e1:e}, {e2:e}"),
    )?;
    Ok(format!("gamma = {gamma:.15}, errors {e1:.1e}/{e2:.1e}"))
}

/// Log-odds of the `g2` weight, `ln(a2 v^γ / (a1 u^γ))`. It is an exact
/// monotone reparametrization of the curve that never saturates, so it
/// separates real ordering bugs from binary64 plateaus.
fn weight_log_odds(t: &TransferFunction, x: f64) -> f64 {
    let nodes = t.nodes();
    t.alpha2().ln() - t.alpha1().ln() + t.gamma() * ((x - nodes.x1()).ln() - (nodes.x2() - x).ln())
}

fn criterion_3_interpolation_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_interp = 0.0f64;
    let mut worst_scale = 0.0f64;
    let mut max_gamma = 0.0f64;
    let mut fit_failures = Vec::new();
    let mut plateau_cases = 0usize;
    let mut plateau_max_gamma = 0.0f64;
    let mut ordering_bugs = Vec::new();
    let mut range_violations = Vec::new();
    let mut unscalable = Vec::new();
    for case in 0..1000 {
        let (nodes, targets) = random_config(&mut rng);
        let t = match fit_transfer(&nodes, &targets) {
            Ok(t) => t,
            Err(e) => {
                fit_failures.push(format!("case {case}: {e}"));
                continue;
            }
        };
        max_gamma = max_gamma.max(t.gamma().abs());
        for (x, g) in nodes.as_array().into_iter().zip(targets.as_array()) {
            worst_interp = worst_interp.max((eval_transfer(&t, x) - g).abs());
        }
        let mut scaled = Vec::new();
        for lambda in [1e-6, 1.0, 1e6] {
            match t.scaled(lambda) {
                Ok(s) => scaled.push(s),
                Err(e) => unscalable.push(format!("case {case} x {lambda:e}: {e}")),
            }
        }
        let points: Vec<f64> = grid(nodes.x1(), nodes.x2(), 1024).collect();
        let values: Vec<f64> = points.iter().map(|&x| eval_transfer(&t, x)).collect();
        let mut plateau = false;
        for k in 1..points.len() {
            if values[k] > values[k - 1] {
                continue;
            }
            let interior = k >= 2 && k + 1 < points.len();
            if values[k] < values[k - 1]
                || (interior
                    && weight_log_odds(&t, points[k]) <= weight_log_odds(&t, points[k - 1]))
            {
                ordering_bugs.push(format!("case {case} at x = {}", points[k]));
            }
            plateau = true;
        }
        if plateau {
            plateau_cases += 1;
            plateau_max_gamma = plateau_max_gamma.max(t.gamma());
        }
        for (&x, &g) in points.iter().zip(&values) {
            if !(targets.g1() <= g && g <= targets.g2()) {
                range_violations.push(format!("case {case}: g({x}) = {g}"));
            }
            for s in &scaled {
                let rel = (eval_transfer(s, x) - g).abs() / g.abs().max(f64::MIN_POSITIVE);
                worst_scale = worst_scale.max(rel);
            }
        }
    }
    let elapsed = start.elapsed();
    let summary = format!(
        "interp {worst_interp:.1e}, scaling {worst_scale:.1e}, max gamma {max_gamma:.1}, \
         {} fit errors, {plateau_cases} cases with binary64 plateaus (max gamma {plateau_max_gamma:.1}), \
         {} unrepresentable scalings, {} ordering bugs, {elapsed:?}",
        fit_failures.len(),
        unscalable.len(),
        ordering_bugs.len()
    );
    check(
        worst_interp < 1e-9,
        format!("interpolation error {worst_interp:e}; {summary}"),
    )?;
    check(
        worst_scale <= 1e-12,
        format!("scale invariance error {worst_scale:e}; {summary}"),
    )?;
    check(
        range_violations.is_empty(),
        format!("out of range: {range_violations:?}"),
    )?;
    check(
        ordering_bugs.is_empty(),
        format!("decreasing values: {ordering_bugs:?}"),
    )?;
    check(
        elapsed < Duration::from_secs(5),
        format!("took {elapsed:?}"),
    )?;
    check(
        fit_failures.is_empty(),
        format!("not every pair could be fitted {fit_failures:?}; {summary}"),
    )?;
    check(
        unscalable.is_empty(),
        format!("scaled coefficients overflow {unscalable:?}; {summary}"),
    )?;
    check(
        plateau_cases == 0,
        format!("not strictly increasing on the grid; {summary}"),
    )?;
    Ok(summary)
}

fn criterion_4_gamma_one_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let (nodes, targets) = random_config(&mut rng);
        let t = fit_transfer(&nodes, &targets)
            .map_err(|e| format!("case {case}: {e}"))?
            .with_gamma(1.0);
        for x in grid(nodes.x1(), nodes.x2(), 1024) {
            let baseline = two_point_homographic(
                nodes.x1(),
                nodes.x2(),
                targets.g1(),
                targets.g2(),
                t.alpha1(),
                t.alpha2(),
                x,
            );
            worst = worst.max((eval_transfer(&t, x) - baseline).abs());
        }
    }
    check(worst < 1e-12, format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn criterion_5_uniform_fixed_point() -> Outcome {
    let img = ramp();
    let start = Instant::now();
    let (nodes, trace) =
        interwoven_means(&img, &IterationConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let d1 = (nodes.c1() - 1.0 / 3.0).abs();
    let d2 = (nodes.c2() - 2.0 / 3.0).abs();
    check(
        d1 < 0.01 && d2 < 0.01,
        format!("c1 = {}, c2 = {}", nodes.c1(), nodes.c2()),
    )?;
    check(
        trace.iterations_used <= 100,
        format!("{} iterations", trace.iterations_used),
    )?;
    check(trace.converged, "did not converge")?;
    check(
        elapsed < Duration::from_millis(50),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "c1 = {:.6}, c2 = {:.6}, {} iterations, {elapsed:?}",
        nodes.c1(),
        nodes.c2(),
        trace.iterations_used
    ))
}

/// KS distance of the empirical CDF of `samples` from the discrete uniform
/// CDF on `0..=maxval`, by counting directly.
fn ks_oracle(samples: &[u16], maxval: u16) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_unstable();
    let n = sorted.len() as f64;
    let levels = f64::from(maxval) + 1.0;
    (0..=maxval)
        .map(|k| {
            let at_most = sorted.partition_point(|&s| s <= k) as f64;
            (at_most / n - (f64::from(k) + 1.0) / levels).abs()
        })
        .fold(0.0, f64::max)
}

fn criterion_6_uniformization() -> Outcome {
    let samples: Vec<u16> = (0..=255u32)
        .map(|i| (255.0 * (f64::from(i) / 255.0).powi(2)).round() as u16)
        .collect();
    let img = GrayImage::from_row(255, samples).unwrap();
    let (out, _) = enhance(&img, &TargetLevels::default(), &IterationConfig::default())
        .map_err(|e| e.to_string())?;
    let before = ks_oracle(img.samples(), 255);
    let after = ks_oracle(out.samples(), 255);
    check(after < before, format!("KS before {before}, after {after}"))?;
    Ok(format!("KS {before:.4} -> {after:.4}"))
}

/// Float re-run of the node iteration on unit levels, including the
/// period-2 averaging rule.
fn simulate_nodes(levels: &[f64], eps: f64) -> (f64, f64, bool) {
    let lo = levels.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = levels.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mean = levels.iter().sum::<f64>() / levels.len() as f64;
    let mut history = vec![((lo + mean) / 2.0, (mean + hi) / 2.0)];
    let avg = |keep: &dyn Fn(f64) -> bool| {
        let kept: Vec<f64> = levels.iter().cloned().filter(|&l| keep(l)).collect();
        kept.iter().sum::<f64>() / kept.len() as f64
    };
    for _ in 0..100 {
        let (c1, c2) = *history.last().unwrap();
        let next = (avg(&|l| l <= c2 + 1e-12), avg(&|l| l >= c1 - 1e-12));
        history.push(next);
        if (next.0 - c1).abs() < eps && (next.1 - c2).abs() < eps {
            return (next.0, next.1, false);
        }
        let n = history.len();
        if n >= 3 {
            let back = history[n - 3];
            if (next.0 - back.0).abs() < eps && (next.1 - back.1).abs() < eps {
                return ((next.0 + c1) / 2.0, (next.1 + c2) / 2.0, true);
            }
        }
    }
    let last = *history.last().unwrap();
    (last.0, last.1, false)
}

fn criterion_7_degeneracy() -> Outcome {
    let constant = GrayImage::from_row(255, vec![90; 16]).unwrap();
    check(
        matches!(extrema(&constant), Err(EnhanceError::ConstantImage(90))),
        "extrema did not report ConstantImage",
    )?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("constant.pgm");
    std::fs::write(&input, write_pgm(&constant, PgmFormat::P2)).map_err(|e| e.to_string())?;
    let output = Command::new(env!("CARGO_BIN_EXE_homographic"))
        .arg("enhance")
        .arg(&input)
        .arg(dir.path().join("out.pgm"))
        .output()
        .map_err(|e| e.to_string())?;
    let stderr = String::from_utf8_lossy(&output.stderr);
    check(
        output.status.code() == Some(3),
        format!("exit {:?}", output.status.code()),
    )?;
    check(
        stderr.contains("ConstantImage"),
        format!("stderr: {stderr}"),
    )?;
    check(output.stdout.is_empty(), "diagnostic leaked to stdout")?;

    let img = GrayImage::from_row(255, vec![0, 64, 191, 255]).unwrap();
    let (nodes, trace) =
        interwoven_means(&img, &IterationConfig::default()).map_err(|e| e.to_string())?;
    let levels: Vec<f64> = img
        .samples()
        .iter()
        .map(|&s| f64::from(s) / 255.0)
        .collect();
    let (c1, c2, cycled) = simulate_nodes(&levels, 1e-4);
    check(cycled && trace.cycle_detected, "no period-2 cycle detected")?;
    check(
        (nodes.c1() - c1).abs() < 1e-6 && (nodes.c2() - c2).abs() < 1e-6,
        format!(
            "nodes ({}, {}) vs oracle ({c1}, {c2})",
            nodes.c1(),
            nodes.c2()
        ),
    )?;
    check(
        (nodes.c1() - 0.229).abs() < 1e-3 && (nodes.c2() - 0.771).abs() < 1e-3,
        format!("nodes ({}, {})", nodes.c1(), nodes.c2()),
    )?;
    Ok(format!(
        "exit 3 + ConstantImage; cycle averaged to ({:.6}, {:.6})",
        nodes.c1(),
        nodes.c2()
    ))
}

fn criterion_8_io_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..1000 {
        let width = rng.gen_range(1..=24);
        let height = rng.gen_range(1..=24);
        let maxval: u16 = if rng.gen_bool(0.5) {
            rng.gen_range(1..=255)
        } else {
            rng.gen_range(256..=65535)
        };
        let samples = (0..width * height)
            .map(|_| rng.gen_range(0..=maxval))
            .collect();
        let img = GrayImage::new(width, height, maxval, samples).unwrap();
        for format in [PgmFormat::P2, PgmFormat::P5] {
            let back =
                read_pgm(&write_pgm(&img, format)).map_err(|e| format!("case {case}: {e}"))?;
            check(
                back == img,
                format!("case {case}: {format:?} round trip differs"),
            )?;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let samples: Vec<u16> = (0..512 * 512)
        .map(|_| (rng.gen::<f64>().powi(3) * 4095.0) as u16)
        .collect();
    let img = GrayImage::new(512, 512, 4095, samples).unwrap();
    let targets = TargetLevels::default();
    let cfg = IterationConfig::default();
    let first = enhance(&img, &targets, &cfg).map_err(|e| e.to_string())?;
    let second = enhance(&img, &targets, &cfg).map_err(|e| e.to_string())?;
    check(
        write_pgm(&first.0, PgmFormat::P5) == write_pgm(&second.0, PgmFormat::P5),
        "repeated enhancement differs",
    )?;
    check(
        first.1.serialize() == second.1.serialize(),
        "repeated reports differ",
    )?;
    let (transfer, _) = fit_image(&img, &targets, &cfg).map_err(|e| e.to_string())?;
    let lut = build_lut(&transfer, img.maxval());
    let sequential = write_pgm(&apply_lut(&img, &lut), PgmFormat::P5);
    let parallel = write_pgm(&apply_lut_parallel(&img, &lut), PgmFormat::P5);
    check(
        sequential == parallel,
        "sequential and parallel mapping differ",
    )?;
    check(
        sequential == write_pgm(&first.0, PgmFormat::P5),
        "pipeline differs from LUT mapping",
    )?;
    Ok("1000 images x {P2, P5} bit-exact; enhancement byte-identical".into())
}

/// Symmetric nodes on [0, 1] whose fitted exponent with default targets is `gamma`.
fn nodes_for_gamma(gamma: f64) -> NodeSet {
    let s = 0.25f64.powf(1.0 / (2.0 * gamma));
    let c1 = s / (1.0 + s);
    NodeSet::new(0.0, c1, 1.0 - c1, 1.0).unwrap()
}

fn criterion_9_large_gamma() -> Outcome {
    let t = fit_transfer(&nodes_for_gamma(20.0), &TargetLevels::default())
        .map_err(|e| e.to_string())?;
    check(
        (t.gamma() - 20.0).abs() < 1e-9,
        format!("gamma = {}", t.gamma()),
    )?;
    for x in grid(0.0, 1.0, 100_001) {
        let g = eval_transfer(&t, x);
        check(
            g.is_finite() && (0.0..=1.0).contains(&g),
            format!("g({x}) = {g}"),
        )?;
    }
    for maxval in [255u16, 65535] {
        let lut = build_lut(&t, maxval);
        check(
            lut.entries().len() == usize::from(maxval) + 1,
            "wrong LUT length",
        )?;
        check(
            lut.is_monotone(),
            format!("maxval {maxval}: LUT not monotone"),
        )?;
        check(
            lut.entries().iter().all(|&e| e <= maxval),
            "LUT out of range",
        )?;
        check(
            lut.entries()[0] == 0 && lut.entries()[usize::from(maxval)] == maxval,
            "LUT endpoints not stretched",
        )?;
    }
    Ok(format!(
        "gamma = {:.6}; LUTs for 255 and 65535 finite, monotone, in range",
        t.gamma()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 identity reduction", criterion_1_identity_reduction),
        ("2 closed-form exponent", criterion_2_closed_form),
        (
            "3 interpolation property suite",
            criterion_3_interpolation_suite,
        ),
        ("4 gamma = 1 reduction", criterion_4_gamma_one_reduction),
        ("5 uniform fixed point", criterion_5_uniform_fixed_point),
        ("6 uniformization", criterion_6_uniformization),
        ("7 degeneracy handling", criterion_7_degeneracy),
        ("8 I/O exactness and determinism", criterion_8_io_exactness),
        ("9 large-gamma stability", criterion_9_large_gamma),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
