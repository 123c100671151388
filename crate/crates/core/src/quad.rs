//! One-dimensional quadrature: adaptive Gauss–Kronrod (7/15) and
//! Gauss–Legendre rules.

use std::f64::consts::PI;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_depth: 40,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss–Kronrod integral of `f` over `[a, b]`.
///
/// Infinite integrand values propagate into an infinite result.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: QuadConfig) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        };
    }
    if b < a {
        let r = integrate(f, b, a, cfg);
        return QuadResult {
            value: -r.value,
            ..r
        };
    }
    let mut evaluations = 0;
    let (value, error) = recurse(&f, a, b, cfg.abs_tol, cfg, 0, &mut evaluations);
    QuadResult {
        value,
        error,
        evaluations,
    }
}

fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    cfg: QuadConfig,
    depth: u32,
    evals: &mut usize,
) -> (f64, f64) {
    let (value, err) = kronrod_panel(f, a, b);
    *evals += 15;
    if !value.is_finite() {
        return (value, f64::INFINITY);
    }
    let accept = err <= abs_tol.max(cfg.rel_tol * value.abs());
    let mid = 0.5 * (a + b);
    if accept || depth >= cfg.max_depth || mid <= a || mid >= b {
        return (value, err);
    }
    let (v1, e1) = recurse(f, a, mid, 0.5 * abs_tol, cfg, depth + 1, evals);
    if !v1.is_finite() {
        return (v1, e1);
    }
    let (v2, e2) = recurse(f, mid, b, 0.5 * abs_tol, cfg, depth + 1, evals);
    (v1 + v2, e1 + e2)
}

/// `∫_a^b f(r) dr` for `0 < a < b`, integrated in the variable `u = ln r`.
///
/// Integrands behaving like powers of `1/r` near the lower limit are
/// resolved far better in this variable.
pub fn integrate_log<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: QuadConfig) -> QuadResult {
    debug_assert!(a > 0.0 && b > 0.0);
    integrate(
        |u| {
            let r = u.exp();
            let v = f(r);
            if v == 0.0 {
                0.0
            } else {
                v * r
            }
        },
        a.ln(),
        b.ln(),
        cfg,
    )
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi's initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_integrates_polynomials_exactly() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, QuadConfig::default());
        assert!((r.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn adaptive_handles_endpoint_log_singularity() {
        // ∫_0^1 ln x dx = -1
        let r = integrate(|x: f64| x.ln(), 0.0, 1.0, QuadConfig::default());
        assert!((r.value + 1.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn log_variable_integral_of_reciprocal() {
        let r = integrate_log(|x| 1.0 / x, 1e-6, 1.0, QuadConfig::default());
        assert!((r.value - 1e6f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn infinite_integrand_propagates() {
        let r = integrate(|_| f64::INFINITY, 0.0, 1.0, QuadConfig::default());
        assert!(r.value.is_infinite());
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let r = integrate(|x| x, 1.0, 0.0, QuadConfig::default());
        assert!((r.value + 0.5).abs() < 1e-15);
    }

    #[test]
    fn gauss_legendre_weights_and_moments() {
        for n in [1, 2, 5, 16, 64] {
            let (x, w) = gauss_legendre(n);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n}");
            // exact for degree 2n-1
            let deg = 2 * n - 1;
            let m: f64 = x
                .iter()
                .zip(&w)
                .map(|(x, w)| w * x.powi(deg as i32 - 1))
                .sum();
            let exact = if (deg - 1) % 2 == 0 {
                2.0 / deg as f64
            } else {
                0.0
            };
            assert!((m - exact).abs() < 1e-12, "n={n} m={m} exact={exact}");
        }
    }
}
