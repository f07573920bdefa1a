//! Nested Gauss–Legendre quadrature for iterated path integrals.
//!
//! A word of kernels `g_1(z) z^{s_1} dz/z, ..., g_n(z) z^{s_n} dz/z` is listed
//! outermost first. Cumulative integrals are built from the innermost kernel
//! outwards on a fixed panel grid, so each layer costs one pass over the
//! nodes.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::special::{PanelRule, C64};

/// Nodes per Gauss–Legendre panel.
pub const PANEL_NODES: usize = 16;

/// Number of times the panel count may be doubled before giving up.
pub const MAX_REFINEMENTS: u32 = 5;

fn rule() -> &'static PanelRule {
    static RULE: OnceLock<PanelRule> = OnceLock::new();
    RULE.get_or_init(|| PanelRule::new(PANEL_NODES))
}

/// Truncation and quadrature parameters shared by every numerical routine.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericsConfig {
    /// q-expansion truncation order `M`.
    pub order: usize,
    /// Height `Y` at which integrals to `i∞` are cut off.
    pub height: f64,
    /// Panels per segment before refinement.
    pub panels: usize,
    pub tolerance: f64,
    pub branch: Branch,
}

/// Branch used for `z^s` and `(-1)^s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Branch {
    /// `z^s = exp(s Log z)` with `arg z ∈ (-π, π]`, and `(-1)^s = e^{iπs}`.
    #[default]
    Principal,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            order: 64,
            height: 12.0,
            panels: 64,
            tolerance: 1e-8,
            branch: Branch::Principal,
        }
    }
}

impl NumericsConfig {
    pub fn validate(&self, level: u64) -> Result<()> {
        if !(self.height > 1.0 / (level as f64).sqrt()) {
            return Err(Error::domain(format!(
                "height {} must exceed 1/sqrt(N) = {}",
                self.height,
                1.0 / (level as f64).sqrt()
            )));
        }
        if self.panels < 4 {
            return Err(Error::domain(format!("panels must be >= 4, got {}", self.panels)));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::domain("tolerance must be positive"));
        }
        Ok(())
    }
}

/// One layer `g(z) z^s dz/z`; `coeffs = None` stands for `g = 1`.
#[derive(Clone, Copy, Debug)]
pub struct Kernel<'a> {
    pub coeffs: Option<&'a [C64]>,
    pub exponent: C64,
}

impl<'a> Kernel<'a> {
    pub fn one(exponent: C64) -> Self {
        Kernel { coeffs: None, exponent }
    }

    pub fn series(coeffs: &'a [C64], exponent: C64) -> Self {
        Kernel {
            coeffs: Some(coeffs),
            exponent,
        }
    }

    fn is_one(&self) -> bool {
        self.coeffs.is_none()
    }

    fn has_constant_term(&self) -> bool {
        match self.coeffs {
            None => true,
            Some(c) => c[0] != C64::new(0.0, 0.0),
        }
    }

    /// First nonzero non-constant coefficient `(m, |a_m|)`.
    fn leading(&self) -> Option<(usize, f64)> {
        let c = self.coeffs?;
        c.iter()
            .enumerate()
            .skip(1)
            .find(|(_, a)| a.norm() > 0.0)
            .map(|(m, a)| (m, a.norm()))
    }
}

/// Value of a quadrature together with an error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: C64,
    pub error: f64,
}

#[derive(Clone, Copy)]
enum PathKind {
    /// `z = x + i e^u`, `u` running downwards.
    Ray { x: f64 },
    /// `z = a + (b - a) u`.
    Segment { a: C64, b: C64 },
}

impl PathKind {
    fn point(&self, u: f64) -> (C64, C64) {
        match *self {
            PathKind::Ray { x } => {
                let y = u.exp();
                (C64::new(x, y), C64::new(0.0, y))
            }
            PathKind::Segment { a, b } => (a + (b - a) * u, b - a),
        }
    }
}

/// Breakpoints of the parameter interval; the panels between consecutive
/// breakpoints are refined uniformly.
struct Grid {
    path: PathKind,
    pieces: Vec<(f64, f64, usize)>,
}

struct Nodes {
    z: Vec<C64>,
    /// `dz/dx` times the panel half-width
    dz: Vec<C64>,
}

impl Grid {
    fn nodes(&self, refinement: u32) -> Nodes {
        let rule = rule();
        let mut z = Vec::new();
        let mut dz = Vec::new();
        for &(u0, u1, count) in &self.pieces {
            let panels = count << refinement;
            let h = (u1 - u0) / panels as f64;
            for p in 0..panels {
                let start = u0 + h * p as f64;
                let mid = start + h / 2.0;
                for &x in &rule.nodes {
                    let (zz, d) = self.path.point(mid + h / 2.0 * x);
                    z.push(zz);
                    dz.push(d * (h / 2.0));
                }
            }
        }
        Nodes { z, dz }
    }
}

fn eval_series(coeffs: &[C64], order: usize, q: C64) -> C64 {
    let m = order.min(coeffs.len() - 1);
    let mut acc = C64::new(0.0, 0.0);
    for c in coeffs[..=m].iter().rev() {
        acc = acc * q + c;
    }
    acc
}

/// Integrals of the innermost `1, 2, ..., n` kernels over the grid.
fn cumulative(kernels: &[Kernel], nodes: &Nodes, order: usize) -> Vec<C64> {
    let rule = rule();
    let m = rule.len();
    let total = nodes.z.len();
    let q: Vec<C64> = nodes
        .z
        .iter()
        .map(|z| (C64::new(0.0, 2.0 * PI) * z).exp())
        .collect();
    let mut inner = vec![C64::new(1.0, 0.0); total];
    let mut out = Vec::with_capacity(kernels.len());
    for k in kernels.iter().rev() {
        let s1 = k.exponent - 1.0;
        let v: Vec<C64> = (0..total)
            .map(|i| {
                let z = nodes.z[i];
                let g = match k.coeffs {
                    None => C64::new(1.0, 0.0),
                    Some(c) => eval_series(c, order, q[i]),
                };
                let zp = if s1 == C64::new(0.0, 0.0) {
                    C64::new(1.0, 0.0)
                } else {
                    (s1 * z.ln()).exp()
                };
                g * zp * nodes.dz[i] * inner[i]
            })
            .collect();
        let mut next = vec![C64::new(0.0, 0.0); total];
        let mut acc = C64::new(0.0, 0.0);
        for p in 0..total / m {
            let base = p * m;
            for i in 0..m {
                let row = &rule.integration[i];
                let mut s = C64::new(0.0, 0.0);
                for j in 0..m {
                    s += v[base + j] * row[j];
                }
                next[base + i] = acc + s;
            }
            for j in 0..m {
                acc += v[base + j] * rule.weights[j];
            }
        }
        out.push(acc);
        inner = next;
    }
    out
}

fn refine(grid: &Grid, kernels: &[Kernel], cfg: &NumericsConfig, extra_error: f64) -> Result<Quadrature> {
    let value_at = |r: u32| *cumulative(kernels, &grid.nodes(r), cfg.order).last().unwrap();
    let mut prev = value_at(0);
    let mut diff = f64::INFINITY;
    let mut cur = prev;
    for r in 1..=MAX_REFINEMENTS {
        cur = value_at(r);
        diff = (cur - prev).norm();
        if diff <= 1e-2 * cfg.tolerance * cur.norm().max(1.0) {
            break;
        }
        prev = cur;
    }
    if diff <= cfg.tolerance * cur.norm().max(1.0) {
        Ok(Quadrature {
            value: cur,
            error: diff + extra_error,
        })
    } else {
        Err(Error::Accuracy {
            estimate: diff,
            tolerance: cfg.tolerance,
        })
    }
}

/// `∫` of the word along the straight segment from `a` to `b`.
pub fn integrate_segment(kernels: &[Kernel], a: C64, b: C64, cfg: &NumericsConfig) -> Result<Quadrature> {
    if kernels.is_empty() {
        return Ok(Quadrature {
            value: C64::new(1.0, 0.0),
            error: 0.0,
        });
    }
    if a.im <= 0.0 || b.im <= 0.0 {
        return Err(Error::domain("segment endpoints must lie in the upper half-plane"));
    }
    let grid = Grid {
        path: PathKind::Segment { a, b },
        pieces: vec![(0.0, 1.0, cfg.panels)],
    };
    refine(&grid, kernels, cfg, 0.0)
}

/// `∫_{i∞}^{b}` of the word along the vertical ray above `b`.
///
/// Innermost constant layers need every trailing partial exponent sum to
/// have negative real part; the ray is then extended far enough for their
/// algebraic decay. Otherwise the innermost form must be cuspidal.
pub fn integrate_from_infinity(kernels: &[Kernel], b: C64, cfg: &NumericsConfig) -> Result<Quadrature> {
    if kernels.is_empty() {
        return Ok(Quadrature {
            value: C64::new(1.0, 0.0),
            error: 0.0,
        });
    }
    if b.im <= 0.0 {
        return Err(Error::domain(format!("endpoint {b} is not in the upper half-plane")));
    }
    let ub = b.im.ln();
    let mut top = cfg.height.max(b.im * 2.0).ln();
    let mut pieces = Vec::new();
    let n = kernels.len();
    let innermost = &kernels[n - 1];
    let mut extra = 0.0;
    if innermost.has_constant_term() {
        // trailing partial sums over the innermost block of constant-1 layers
        let mut sum = C64::new(0.0, 0.0);
        let mut worst = f64::NEG_INFINITY;
        for (idx, k) in kernels.iter().enumerate().rev() {
            if !k.is_one() {
                if k.has_constant_term() && idx == n - 1 {
                    return Err(Error::Divergence(
                        "innermost layer has a constant term; split it into its cusp part and a constant layer"
                            .into(),
                    ));
                }
                break;
            }
            sum += k.exponent;
            worst = worst.max(sum.re);
        }
        if worst >= 0.0 {
            return Err(Error::Divergence(format!(
                "integral from i∞ diverges: a trailing partial exponent sum has real part {worst} >= 0"
            )));
        }
        let span = (37.0 / -worst).min(4000.0);
        pieces.push((top + span, top, span.ceil() as usize));
    } else if let Some((m0, a)) = innermost.leading() {
        // raise the cut-off until the neglected tail is far below tolerance
        let sre = kernels.iter().map(|k| k.exponent.re.max(0.0)).sum::<f64>();
        let tail = |y: f64| a * (-2.0 * PI * m0 as f64 * y).exp() * y.powf(sre) / (2.0 * PI * m0 as f64);
        let mut y = top.exp();
        while tail(y) > cfg.tolerance * 1e-6 && y < 1e3 {
            y += 1.0;
        }
        extra = tail(y);
        top = y.ln();
    } else {
        return Ok(Quadrature {
            value: C64::new(0.0, 0.0),
            error: 0.0,
        });
    }
    pieces.push((top, ub, cfg.panels));
    let grid = Grid {
        path: PathKind::Ray { x: b.re },
        pieces,
    };
    refine(&grid, kernels, cfg, extra)
}

/// Fixed-grid variant returning every prefix value, innermost first:
/// entry `k` is the integral of the innermost `k + 1` kernels.
pub fn segment_prefixes(kernels: &[Kernel], a: C64, b: C64, cfg: &NumericsConfig, refinement: u32) -> Vec<C64> {
    let grid = Grid {
        path: PathKind::Segment { a, b },
        pieces: vec![(0.0, 1.0, cfg.panels)],
    };
    cumulative(kernels, &grid.nodes(refinement), cfg.order)
}
