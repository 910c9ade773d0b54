use super::rng::SuiteRng;
use super::Check;
use crate::error::Result;
use crate::oracle::finite_difference_subgradient;
use crate::primitives::Point;
use crate::streams::{
    l1_adversary_next, parse_svmlight, random_linear_stream, synthetic_logistic, GradientCap,
    Loss, LossStream, LogisticStream, RandomQuadraticStream,
};

const STREAMS: usize = 100;

fn relative_fd_error(loss: &Loss, x: &Point, g: &Point) -> f64 {
    let fd = finite_difference_subgradient(|p| loss.value(p), x, 1e-6);
    g.iter()
        .zip(fd.iter())
        .map(|(a, b)| (a - b).abs() / a.abs().max(1.0))
        .fold(0.0, f64::max)
}

/// Gradient correctness, caps, adversary range and parser round trips.
pub fn streams_suite(seed: u64) -> Result<Vec<Check>> {
    let mut rng = SuiteRng::new(seed, 9);
    let mut fd_worst: f64 = 0.0;
    let mut cap_excess: f64 = f64::NEG_INFINITY;
    let mut roundtrip_failures = 0usize;
    for _ in 0..STREAMS {
        let n = rng.int(1, 8);
        let rounds = rng.int(1, 50);
        let examples = synthetic_logistic(rng.seed(), n, rounds, rng.int(0, n))?;
        let mut logistic = LogisticStream::new(&examples, n)?;
        let mut quadratic = RandomQuadraticStream::new(rng.seed(), n, rng.uniform(0.1, 3.0), rounds)?;
        for t in 1..=rounds {
            let x = rng.normal_point(n, 1.0);
            for stream in [&mut logistic as &mut dyn LossStream, &mut quadratic] {
                if let Some(e) = stream.next_event(t, &x)? {
                    fd_worst = fd_worst.max(relative_fd_error(&e.loss, &x, &e.gradient));
                }
            }
        }
        for e in &examples {
            let line = e.to_svmlight();
            let back = parse_svmlight(&line)?;
            if &back != e || back.to_svmlight() != line {
                roundtrip_failures += 1;
            }
        }
        let cap = rng.uniform(0.1, 5.0);
        let (l2, sup) = (random_linear_stream(rng.seed(), n, GradientCap::L2(cap), rounds)?, random_linear_stream(rng.seed(), n, GradientCap::Sup(cap), rounds)?);
        for g in l2 {
            cap_excess = cap_excess.max(g.norm2() - cap * (1.0 + 1e-12));
        }
        for g in sup {
            cap_excess = cap_excess.max(g.norm_inf() - cap);
        }
    }
    let mut adversary_excess: f64 = f64::NEG_INFINITY;
    for _ in 0..STREAMS {
        let g = rng.uniform(0.1, 20.0);
        let lambda = rng.uniform(0.0, g);
        for t in 1..50 {
            let v = l1_adversary_next(rng.uniform(-5.0, 5.0), t, g, lambda);
            adversary_excess = adversary_excess.max(v.abs() - g);
        }
    }
    Ok(vec![
        Check::new("stream-gradients-match-finite-differences", fd_worst, 1e-5, STREAMS),
        Check::new("random-stream-caps", cap_excess, 0.0, STREAMS),
        Check::new("l1-adversary-within-g", adversary_excess, 0.0, STREAMS),
        Check::new("svmlight-round-trip", roundtrip_failures as f64, 0.0, STREAMS),
    ])
}
