//! Multiple zeta values `ζ(k_1, ..., k_d) = Σ_{0<n_1<...<n_d} n_1^{-k_1} ... n_d^{-k_d}`
//! by direct summation, as iterated integrals on `ℙ¹ ∖ {0, 1, ∞}`, and as
//! iterated integrals of `F` and `G - 16F` on `Y₀(4)` pulled back along
//! `λ = 16F/G`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::forms::{BuiltinForm, EvalConfig, ModularForm};
use crate::quad::{self, Kernel, NumericsConfig};
use crate::special::{PanelRule, C64};

/// An admissible index `(k_1, ..., k_d)`, `k_d >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MzvIndex(Vec<u32>);

impl MzvIndex {
    pub fn new(k: Vec<u32>) -> Result<Self> {
        if k.is_empty() {
            return Err(Error::domain("an MZV index needs at least one entry"));
        }
        if k.contains(&0) {
            return Err(Error::domain("MZV index entries must be positive"));
        }
        if *k.last().unwrap() < 2 {
            let mut rev = k.clone();
            rev.reverse();
            let hint = if *rev.last().unwrap() >= 2 {
                format!(
                    "; sums run over n_1 < ... < n_d, so the reversed index {} may be what you want",
                    join(&rev)
                )
            } else {
                String::new()
            };
            return Err(Error::domain(format!(
                "index ({}) is not admissible: the last entry must be >= 2{hint}",
                join(&k)
            )));
        }
        Ok(MzvIndex(k))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// Letters `ω₁ ω₀^{k_1-1} ... ω₁ ω₀^{k_d-1}`, first letter innermost;
    /// `true` stands for `ω₁`.
    pub fn word(&self) -> Vec<bool> {
        let mut w = Vec::with_capacity(self.weight() as usize);
        for &k in &self.0 {
            w.push(true);
            w.extend(std::iter::repeat_n(false, k as usize - 1));
        }
        w
    }
}

fn join(k: &[u32]) -> String {
    k.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for MzvIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(&self.0))
    }
}

impl FromStr for MzvIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let k = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad MZV index entry '{p}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        MzvIndex::new(k)
    }
}

/// Truncated nested sum over `n_d <= cutoff` plus an estimate of the
/// remaining tail in `n_d`.
pub fn mzv_series(idx: &MzvIndex, cutoff: usize) -> Result<f64> {
    if cutoff < 10 {
        return Err(Error::domain("cutoff must be at least 10"));
    }
    let k = idx.entries();
    let d = k.len();
    let n = cutoff;
    // inner[m] = Σ_{n_1<...<n_{d-1} < m} ..., built one depth at a time
    let mut inner = vec![1.0f64; n + 2];
    let mut last_term = vec![0.0f64; n + 2];
    for &kk in &k[..d - 1] {
        let mut acc = 0.0;
        let mut next = vec![0.0f64; n + 2];
        let mut term = vec![0.0f64; n + 2];
        for m in 1..=n + 1 {
            next[m] = acc;
            let t = inner[m] * (m as f64).powi(-(kk as i32));
            term[m] = t;
            acc += t;
        }
        inner = next;
        last_term = term;
    }
    let a = k[d - 1] as f64;
    let mut sum = 0.0;
    for m in 1..=n {
        sum += inner[m] * (m as f64).powf(-a);
    }
    // Σ_{m>N} m^{-a} by Euler–Maclaurin
    let nf = n as f64;
    let em = nf.powf(1.0 - a) / (a - 1.0) - 0.5 * nf.powf(-a) + a / 12.0 * nf.powf(-a - 1.0);
    let mut tail = inner[n + 1] * em;
    if d >= 2 {
        // growth of the inner sum past N, with its increments ≈ h(N) (N/m)^b
        let b = k[d - 2] as f64;
        let h = last_term[n];
        tail += if b == 1.0 {
            h * nf * nf.powf(1.0 - a) / ((a - 1.0) * (a - 1.0))
        } else {
            h * nf.powf(b) * nf.powf(2.0 - a - b) / ((a - 1.0) * (a + b - 2.0))
        };
    }
    Ok(sum + tail)
}

/// `∫_{0<t_1<...<t_w<1} η_1(t_1) ... η_w(t_w)` with `ω₀ = dt/t`,
/// `ω₁ = dt/(1-t)`, on panels refined geometrically towards `t = 1`.
pub fn mzv_p1_integral(idx: &MzvIndex) -> Result<f64> {
    let word = idx.word();
    if !word[0] || *word.last().unwrap() {
        return Err(Error::Divergence("word must start with ω1 and end with ω0".into()));
    }
    let rule = PanelRule::new(16);
    // panels as (t0, u0 = 1 - t0, width)
    let mut panels: Vec<(f64, f64, f64)> = Vec::new();
    let head = 8;
    for p in 0..head {
        let t0 = 0.5 * p as f64 / head as f64;
        panels.push((t0, 1.0 - t0, 0.5 / head as f64));
    }
    for j in 1..=100 {
        let u0 = 0.5f64.powi(j);
        panels.push((1.0 - u0, u0, u0 / 2.0));
    }
    let m = rule.len();
    let mut t = Vec::with_capacity(panels.len() * m);
    let mut u = Vec::with_capacity(panels.len() * m);
    let mut w = Vec::with_capacity(panels.len() * m);
    for &(t0, u0, h) in &panels {
        for &x in &rule.nodes {
            let off = h / 2.0 * (x + 1.0);
            t.push(t0 + off);
            u.push(u0 - off);
            w.push(h / 2.0);
        }
    }
    let total = t.len();
    let mut inner = vec![1.0f64; total];
    let mut result = 0.0;
    for &letter in &word {
        let v: Vec<f64> = (0..total)
            .map(|i| inner[i] * w[i] / if letter { u[i] } else { t[i] })
            .collect();
        let mut next = vec![0.0; total];
        let mut acc = 0.0;
        for p in 0..total / m {
            let base = p * m;
            for i in 0..m {
                let s: f64 = (0..m).map(|j| rule.integration[i][j] * v[base + j]).sum();
                next[base + i] = acc + s;
            }
            acc += (0..m).map(|j| rule.weights[j] * v[base + j]).sum::<f64>();
        }
        result = acc;
        inner = next;
    }
    Ok(result)
}

/// Coefficients of `F` and `G - 16F` up to the configured order.
struct Pullback {
    f: ModularForm,
    g16f: ModularForm,
}

impl Pullback {
    fn new(order: usize) -> Result<Self> {
        Ok(Pullback {
            f: BuiltinForm::F.build(order + 1)?,
            g16f: BuiltinForm::GMinus16F.build(order + 1)?,
        })
    }

    fn kernel(&self, omega1: bool) -> Kernel<'_> {
        let one = C64::new(1.0, 0.0);
        if omega1 {
            Kernel::series(&self.f.coeffs, one)
        } else {
            Kernel::series(&self.g16f.coeffs, one)
        }
    }

    /// `∫_{i∞}^{c}` of the letters (first letter innermost) with `ω₁ ↦ F dz`,
    /// `ω₀ ↦ (G-16F) dz`.
    fn down_to(&self, letters: &[bool], c: C64, cfg: &NumericsConfig) -> Result<C64> {
        let kernels: Vec<Kernel> = letters.iter().rev().map(|&l| self.kernel(l)).collect();
        Ok(quad::integrate_from_infinity(&kernels, c, cfg)?.value)
    }
}

/// `∫_{i∞}^{0}` of the word in `F dz` (for `ω₁`) and `(G-16F) dz` (for `ω₀`)
/// along the imaginary axis, split at `i/2`. The piece below `i/2` is moved
/// above it by `z ↦ -1/(4z)`, which sends `F dz` to `-(G-16F) dw / 16` and
/// `(G-16F) dz` to `-16 F dw`.
pub fn mzv_modular_raw(idx: &MzvIndex, cfg: &NumericsConfig) -> Result<C64> {
    let word = idx.word();
    let w = word.len();
    let pb = Pullback::new(cfg.order)?;
    let c = C64::new(0.0, 0.5);
    let mut total = C64::new(0.0, 0.0);
    for j in 0..=w {
        let (inner, outer) = word.split_at(w - j);
        let upper = if inner.is_empty() {
            C64::new(1.0, 0.0)
        } else {
            pb.down_to(inner, c, cfg)?
        };
        let lower = if outer.is_empty() {
            C64::new(1.0, 0.0)
        } else {
            // reversed and swapped; each F ↦ -(G-16F)/16 and each (G-16F) ↦ -16F,
            // the signs cancel against the path reversal
            let swapped: Vec<bool> = outer.iter().rev().map(|&l| !l).collect();
            let ones = outer.iter().filter(|&&l| l).count() as i32;
            let zeros = outer.len() as i32 - ones;
            let scale = 16f64.powi(zeros - ones);
            pb.down_to(&swapped, c, cfg)? * scale
        };
        total += lower * upper;
    }
    Ok(total)
}

/// `ζ(k) = (2πi)^w 16^d ∫ (...)` over the pullback of the straight path.
pub fn mzv_modular_integral(idx: &MzvIndex, cfg: &NumericsConfig) -> Result<f64> {
    let raw = mzv_modular_raw(idx, cfg)?;
    let v = modular_prefactor(idx) * raw;
    if v.im.abs() > 1e-6 * v.re.abs().max(1.0) {
        return Err(Error::Accuracy {
            estimate: v.im.abs(),
            tolerance: 1e-6,
        });
    }
    Ok(v.re)
}

/// `(2πi)^w 16^d`.
pub fn modular_prefactor(idx: &MzvIndex) -> C64 {
    C64::new(0.0, 2.0 * PI).powi(idx.weight() as i32) * 16f64.powi(idx.depth() as i32)
}

/// `λ(z) = 16 F(z) / G(z)`.
pub fn lambda_at(z: C64, cfg: &EvalConfig) -> Result<C64> {
    let len = cfg.order + 1;
    let f = BuiltinForm::F.build(len)?;
    let g = BuiltinForm::G.build(len)?;
    let fv = crate::forms::evaluate_at(&f, z, cfg)?.value;
    let gv = crate::forms::evaluate_at(&g, z, cfg)?.value;
    Ok(16.0 * fv / gv)
}
