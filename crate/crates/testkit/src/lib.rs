//! Test-only numerical oracles and fitting helpers.
//!
//! Everything in this crate is deliberately independent of the production
//! implementations it is used to check: the sine/cosine-integral oracle
//! integrates lobe by lobe with Gauss–Legendre nodes computed at runtime by
//! Newton iteration, rather than reusing the series/continued-fraction code
//! paths of `sbs-core`.

/// Gauss–Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre polynomial. Accurate to machine precision for n <= 64.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!((2..=64).contains(&n));
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n(x) and P_n'(x) by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, nodes: &[f64], weights: &[f64]) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * f(c + h * x);
    }
    acc * h
}

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Si(x) = ∫₀ˣ sin(u)/u du for x in (0, ~5e3], by lobe-wise Gauss–Legendre.
///
/// Each half-period lobe of the integrand is smooth and single-signed, so a
/// 24-point rule resolves it to machine precision; the lobe sums are
/// compensated. Absolute accuracy ~1e-15.
pub fn si_oracle(x: f64) -> f64 {
    assert!(x > 0.0 && x <= 5.0e3, "oracle range");
    let (nodes, weights) = gauss_legendre(24);
    let f = |u: f64| if u == 0.0 { 1.0 } else { u.sin() / u };
    lobe_sum(f, x, &nodes, &weights)
}

/// Ci(x) = γ + ln x + ∫₀ˣ (cos(u) - 1)/u du for x in (0, ~5e3].
pub fn ci_oracle(x: f64) -> f64 {
    assert!(x > 0.0 && x <= 5.0e3, "oracle range");
    let (nodes, weights) = gauss_legendre(24);
    let f = |u: f64| {
        if u.abs() < 1e-8 {
            -0.5 * u
        } else {
            (u.cos() - 1.0) / u
        }
    };
    EULER_GAMMA + x.ln() + lobe_sum(f, x, &nodes, &weights)
}

fn lobe_sum(f: impl Fn(f64) -> f64, x: f64, nodes: &[f64], weights: &[f64]) -> f64 {
    let pi = std::f64::consts::PI;
    let n_lobes = (x / pi) as usize;
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut add = |v: f64| {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };
    for k in 0..n_lobes {
        add(gl_integrate(
            &f,
            k as f64 * pi,
            (k + 1) as f64 * pi,
            nodes,
            weights,
        ));
    }
    add(gl_integrate(&f, n_lobes as f64 * pi, x, nodes, weights));
    sum
}

/// Least-squares slope of ln|y| against ln(x); points with y == 0 are skipped.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, y)| y.abs() > 0.0)
        .map(|(x, y)| (x.ln(), y.abs().ln()))
        .collect();
    let n = pts.len() as f64;
    assert!(n >= 3.0, "too few usable points for a slope fit");
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Least-squares slope of y against x through the origin.
pub fn slope_through_origin(xs: &[f64], ys: &[f64]) -> f64 {
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    sxy / sxx
}

/// Sample mean and standard deviation (n-1 normalization).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen oracle values keep all their digits
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (nodes, weights) = gauss_legendre(8);
        // degree 15 is exact for an 8-point rule
        let val = gl_integrate(|x| x.powi(14), -1.0, 1.0, &nodes, &weights);
        assert!((val - 2.0 / 15.0).abs() < 1e-14);
        let w_sum: f64 = weights.iter().sum();
        assert!((w_sum - 2.0).abs() < 1e-14);
    }

    #[test]
    fn si_oracle_matches_reference_values() {
        // mpmath, 40 significant digits
        assert!((si_oracle(1.0) - 0.946_083_070_367_183_0).abs() < 1e-14);
        assert!((si_oracle(10.0) - 1.658_347_594_218_874_0).abs() < 1e-14);
        assert!((si_oracle(1000.0) - 1.570_233_121_968_771_2).abs() < 1e-13);
    }

    #[test]
    fn ci_oracle_matches_reference_values() {
        assert!((ci_oracle(1.0) - 0.337_403_922_900_968_1).abs() < 1e-14);
        assert!((ci_oracle(50.0) - (-0.005_628_386_324_116_306)).abs() < 1e-14);
        assert!((ci_oracle(1000.0) - 0.000_826_315_511_090_682_3).abs() < 1e-13);
    }

    #[test]
    fn slope_fit_recovers_power_law() {
        let xs: Vec<f64> = (1..10).map(|k| k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powi(4)).collect();
        assert!((loglog_slope(&xs, &ys) - 4.0).abs() < 1e-12);
    }
}
