//! Independent re-derivations of solver outputs, written without the
//! library's solver paths.

use qexp::{
    escort_distribution, maxent_distribution, solve_beta, EscortOptions, QParam, Spectrum,
};

/// Two-state shift by bisection on `Σ [1 - (q-1)(x_i - a)]^{1/(q-1)} = 1`, `q < 1`.
fn two_state_probs(q: f64, x: [f64; 2]) -> [f64; 2] {
    let e = 1.0 / (q - 1.0);
    let term = |xi: f64, a: f64| (1.0 - (q - 1.0) * (xi - a)).powf(e);
    let upper = x[0].min(x[1]) - e;
    let (mut lo, mut hi) = (upper - 1e4, upper - 1e-12);
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if term(x[0], mid) + term(x[1], mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = 0.5 * (lo + hi);
    [term(x[0], a), term(x[1], a)]
}

#[test]
fn solve_beta_matches_bisection_oracle() {
    let (q, eps, target) = (0.5, [0.0, 1.0], 0.4);
    let u = |beta: f64| {
        let p = two_state_probs(q, [beta * eps[0], beta * eps[1]]);
        p[0] * eps[0] + p[1] * eps[1]
    };
    // U decreases through the target on [-50, 50]
    let (mut lo, mut hi) = (-50.0f64, 50.0f64);
    assert!(u(lo) > target && u(hi) < target);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if u(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta_oracle = 0.5 * (lo + hi);

    let spectrum = Spectrum::new(eps.to_vec()).unwrap();
    let sol = solve_beta(QParam::new(q).unwrap(), &spectrum, target, 1e-10).unwrap();
    assert!((sol.achieved_u - target).abs() <= 1e-10);
    assert!((sol.beta - beta_oracle).abs() <= 1e-8, "{} vs {}", sol.beta, beta_oracle);
}

/// Eq. (2)-style map written out directly for two states.
fn escort_oracle(q_tilde: f64, x: [f64; 2]) -> [f64; 2] {
    let mut p = [0.5f64, 0.5];
    for _ in 0..100_000 {
        let w = [p[0].powf(q_tilde), p[1].powf(q_tilde)];
        let s = w[0] + w[1];
        let mean = (w[0] * x[0] + w[1] * x[1]) / s;
        let u = x.map(|xi| (1.0 - (1.0 - q_tilde) * (xi - mean) / s).powf(1.0 / (1.0 - q_tilde)));
        let z = u[0] + u[1];
        let next = [u[0] / z, u[1] / z];
        // different damping from the library default
        let np = [0.7 * p[0] + 0.3 * next[0], 0.7 * p[1] + 0.3 * next[1]];
        if (np[0] - p[0]).abs() < 1e-15 {
            return np;
        }
        p = np;
    }
    p
}

#[test]
fn escort_matches_fixed_point_oracle() {
    let oracle = escort_oracle(0.8, [0.0, 1.0]);
    let e = Spectrum::new(vec![0.0, 1.0]).unwrap();
    let sol = escort_distribution(0.8, &e, 1.0, &EscortOptions::default()).unwrap();
    assert!(sol.converged);
    assert!(sol.residual <= 1e-10);
    for (a, b) in sol.p.probs().iter().zip(oracle) {
        assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
    }
    let (m, _) = maxent_distribution(QParam::new(0.8).unwrap(), &e, 1.0).unwrap();
    let q_exp = two_state_probs(0.8, [0.0, 1.0]);
    for (a, b) in m.probs().iter().zip(q_exp) {
        assert!((a - b).abs() <= 1e-12);
    }
    assert!((sol.p.probs()[0] - m.probs()[0]).abs() > 1e-3);
}
