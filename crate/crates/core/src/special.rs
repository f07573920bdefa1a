//! Complex Gamma function and Gauss–Legendre rules.

use std::f64::consts::PI;

use num_complex::Complex64;

pub type C64 = Complex64;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(z) for complex z (Lanczos, g = 7), with reflection for Re z < 1/2.
///
/// Returns infinity at the nonpositive integers.
pub fn gamma(z: C64) -> C64 {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return C64::new(f64::INFINITY, 0.0);
    }
    if z.re < 0.5 {
        let s = (C64::new(PI, 0.0) * z).sin();
        return C64::new(PI, 0.0) / (s * gamma(C64::new(1.0, 0.0) - z));
    }
    if z.im == 0.0 && z.re.fract() == 0.0 && z.re <= 171.0 {
        let mut acc = 1.0f64;
        let mut k = 2.0;
        while k < z.re {
            acc *= k;
            k += 1.0;
        }
        return C64::new(acc, 0.0);
    }
    let z = z - 1.0;
    let mut x = C64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// Real Γ for convenience.
pub fn gamma_real(x: f64) -> f64 {
    gamma(C64::new(x, 0.0)).re
}

/// `b^s` on the principal branch, `b != 0`.
pub fn cpow(b: C64, s: C64) -> C64 {
    if s == C64::new(0.0, 0.0) {
        return C64::new(1.0, 0.0);
    }
    (s * b.ln()).exp()
}

/// `(-1)^s := e^{iπs}`.
pub fn minus_one_pow(s: C64) -> C64 {
    (C64::new(0.0, PI) * s).exp()
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1],
/// ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
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
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; n + 1];
    p[0] = 1.0;
    if n >= 1 {
        p[1] = x;
    }
    for k in 2..=n {
        p[k] = ((2 * k - 1) as f64 * x * p[k - 1] - (k - 1) as f64 * p[k - 2]) / k as f64;
    }
    p
}

/// A Gauss–Legendre rule together with its indefinite-integration matrix
/// `S[i][j] = ∫_{-1}^{x_i} ℓ_j(x) dx`, where `ℓ_j` are the Lagrange basis
/// polynomials on the nodes.
#[derive(Clone, Debug)]
pub struct PanelRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub integration: Vec<Vec<f64>>,
}

impl PanelRule {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        // Legendre coefficients of ℓ_j: c_k = (2k+1)/2 * w_j P_k(x_j)
        let p_at_nodes: Vec<Vec<f64>> = nodes.iter().map(|&x| legendre_all(n, x)).collect();
        // antiderivative of P_k from -1 evaluated at each node
        let anti: Vec<Vec<f64>> = nodes
            .iter()
            .zip(&p_at_nodes)
            .map(|(&x, p)| {
                (0..n)
                    .map(|k| {
                        if k == 0 {
                            x + 1.0
                        } else {
                            (p[k + 1] - p[k - 1]) / (2 * k + 1) as f64
                        }
                    })
                    .collect()
            })
            .collect();
        let mut integration = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    let c = (2 * k + 1) as f64 / 2.0 * weights[j] * p_at_nodes[j][k];
                    acc += c * anti[i][k];
                }
                integration[i][j] = acc;
            }
        }
        PanelRule {
            nodes,
            weights,
            integration,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_integers_and_half() {
        assert_relative_eq!(gamma_real(1.0), 1.0);
        assert_relative_eq!(gamma_real(6.0), 120.0);
        assert_relative_eq!(gamma_real(0.5), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma_real(-0.5), -2.0 * PI.sqrt(), max_relative = 1e-14);
        assert!(gamma(C64::new(-2.0, 0.0)).re.is_infinite());
    }

    #[test]
    fn gamma_recurrence_complex() {
        for &(x, y) in &[(0.3, 1.2), (5.5, -2.0), (-1.7, 0.4), (12.25, 3.0)] {
            let z = C64::new(x, y);
            let lhs = gamma(z + 1.0);
            let rhs = z * gamma(z);
            assert!((lhs - rhs).norm() <= 1e-13 * lhs.norm(), "z = {z}");
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert_relative_eq!(s, 2.0 / 19.0, max_relative = 1e-14);
    }

    #[test]
    fn integration_matrix_is_exact_for_polynomials() {
        let rule = PanelRule::new(12);
        let f: Vec<f64> = rule.nodes.iter().map(|x| 3.0 * x * x - x.powi(7)).collect();
        for (i, &x) in rule.nodes.iter().enumerate() {
            let approx: f64 = (0..12).map(|j| rule.integration[i][j] * f[j]).sum();
            let exact = (x.powi(3) - x.powi(8) / 8.0) - (-1.0 - 1.0 / 8.0);
            assert!((approx - exact).abs() < 1e-13);
        }
    }
}
