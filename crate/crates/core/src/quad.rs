//! Small quadrature kit: Gauss–Legendre panels, the periodic trapezoid rule
//! and an exp-sinh rule for `[0, ∞)`.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for k in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut t = (PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, t);
            dp = d;
            let step = p / d;
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, t);
        if d != 0.0 {
            dp = d;
        }
        let wk = 2.0 / ((1.0 - t * t) * dp * dp);
        x[k] = -t;
        x[n - 1 - k] = t;
        w[k] = wk;
        w[n - 1 - k] = wk;
    }
    (x, w)
}

/// `(P_n(t), P_n′(t))` by the three-term recurrence.
fn legendre(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (t * p - p0) / (t * t - 1.0);
    (p, dp)
}

/// Nodes and weights of an `n`-point Gauss–Legendre rule on each panel
/// `[edges[k], edges[k+1]]`.
pub fn composite_gauss(edges: &[f64], n: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let mut out = Vec::with_capacity(n * edges.len().saturating_sub(1));
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (xi, wi) in x.iter().zip(&w) {
            out.push((mid + half * xi, half * wi));
        }
    }
    out
}

/// Equally spaced angles `2πk/n`, each with weight `2π/n`.
pub fn trapezoid_circle(n: usize) -> Vec<(f64, f64)> {
    let h = 2.0 * PI / n as f64;
    (0..n).map(|k| (k as f64 * h, h)).collect()
}

/// `∫_0^∞ f(t) dt` by the exp-sinh substitution `t = exp(π/2 · sinh s)` and
/// trapezoid in `s` with step halving until two levels agree to `rel_tol`.
pub fn exp_sinh(f: impl Fn(f64) -> f64, rel_tol: f64) -> f64 {
    let node = |s: f64| {
        let t = (0.5 * PI * s.sinh()).exp();
        let dt = t * 0.5 * PI * s.cosh();
        (t, dt)
    };
    let eval = |s: f64| {
        let (t, dt) = node(s);
        if !t.is_finite() || t == 0.0 {
            return 0.0;
        }
        let v = f(t) * dt;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let s_max = 4.5;
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= s_max {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        let mut extra = 0.0;
        let mut k = 1;
        while k as f64 * h <= s_max {
            extra += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        sum += extra;
        let cur = sum * h;
        if (cur - prev).abs() <= rel_tol * cur.abs() {
            return cur;
        }
        prev = cur;
    }
    prev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1, 2, 5, 16, 64] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            let deg = 2 * n - 1;
            let exact = if deg % 2 == 1 { 2.0 / (deg as f64) } else { 0.0 };
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            assert!((got - exact).abs() < 1e-12, "n={n}: {got} vs {exact}");
        }
    }

    #[test]
    fn composite_gauss_on_exp() {
        let q = composite_gauss(&[0.0, 0.5, 1.0], 16);
        let got: f64 = q.iter().map(|(x, w)| w * x.exp()).sum();
        assert!((got - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn exp_sinh_known_integrals() {
        let got = exp_sinh(|t| 1.0 / (1.0 + t * t), 1e-14);
        assert!((got - PI / 2.0).abs() < 1e-13, "{got}");
        let got = exp_sinh(|t| (-t).exp(), 1e-14);
        assert!((got - 1.0).abs() < 1e-13, "{got}");
    }
}
