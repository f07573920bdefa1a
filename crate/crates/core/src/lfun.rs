//! Multiple modular L-values
//! `L(f_1, ..., f_n; s_1, ..., s_n) = (-2πi)^{-Σs} Σ a_{m_1} ... a_{m_n} /
//! ((m_1 + ... + m_n)^{s_1} (m_2 + ... + m_n)^{s_2} ... m_n^{s_n})`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::forms::ModularForm;
use crate::identities;
use crate::iterint::{iterint_full, IterSpec};
use crate::quad::NumericsConfig;
use crate::special::C64;

/// Tag reported with every L-value.
pub const BRANCH_TAG: &str = "principal-log";

#[derive(Clone, Debug, PartialEq)]
pub struct LSpec {
    pub forms: Vec<ModularForm>,
    pub exponents: Vec<C64>,
}

impl LSpec {
    pub fn new(forms: Vec<ModularForm>, exponents: Vec<C64>) -> Result<Self> {
        if forms.is_empty() {
            return Err(Error::domain("an L-value needs at least one form"));
        }
        if forms.len() != exponents.len() {
            return Err(Error::domain(format!(
                "{} forms but {} exponents",
                forms.len(),
                exponents.len()
            )));
        }
        let level = forms[0].level;
        if let Some(f) = forms.iter().find(|f| f.level != level) {
            return Err(Error::domain(format!(
                "form '{}' has level {}, expected {level}",
                f.label, f.level
            )));
        }
        Ok(LSpec { forms, exponents })
    }
}

/// How the shell sum is cut off at `M = m_1 + ... + m_n ≈ X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Cutoff {
    /// Shells weighted by a smooth bump equal to 1 up to `X/2` and 0 from `X`.
    #[default]
    Smooth,
    /// Shells `M <= X` with weight 1.
    Sharp,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LConfig {
    pub cutoff: usize,
    pub mode: Cutoff,
    /// Refuse `Re s_1 <= max weight + n`.
    pub guard: bool,
}

impl Default for LConfig {
    fn default() -> Self {
        LConfig {
            cutoff: 2000,
            mode: Cutoff::Smooth,
            guard: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LValue {
    pub value: C64,
    pub tail: f64,
    pub branch: &'static str,
}

/// Smooth weight: 1 on `[0, 1/2]`, 0 on `[1, ∞)`.
pub fn smooth_weight(t: f64) -> f64 {
    if t <= 0.5 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let g = |x: f64| if x <= 0.0 { 0.0 } else { (-1.0 / x).exp() };
    let x = 2.0 * t - 1.0;
    g(1.0 - x) / (g(1.0 - x) + g(x))
}

/// `(-2πi)^{-s}` with the principal logarithm.
pub fn mellin_prefactor(s: C64) -> C64 {
    let log = C64::new((2.0 * PI).ln(), -PI / 2.0);
    (-s * log).exp()
}

/// Shell totals `T[M] = Σ_{m_1+...+m_n = M} a_{m_1}...a_{m_n} / (...)` for
/// `M <= cutoff`.
fn shells(spec: &LSpec, cutoff: usize) -> Vec<C64> {
    let len = cutoff + 1;
    let n = spec.forms.len();
    let pow = |mu: usize, s: C64| (-s * (mu as f64).ln()).exp();
    let last = &spec.forms[n - 1];
    let mut t: Vec<C64> = (0..len)
        .map(|mu| {
            if mu == 0 {
                C64::new(0.0, 0.0)
            } else {
                last.coeff(mu) * pow(mu, spec.exponents[n - 1])
            }
        })
        .collect();
    for i in (0..n - 1).rev() {
        let f = &spec.forms[i];
        let mut next = vec![C64::new(0.0, 0.0); len];
        for (mu, slot) in next.iter_mut().enumerate().skip(2) {
            let mut acc = C64::new(0.0, 0.0);
            for m in 1..mu {
                acc += f.coeff(m) * t[mu - m];
            }
            *slot = acc * pow(mu, spec.exponents[i]);
        }
        t = next;
    }
    t
}

/// Truncated shell sum of the defining series.
pub fn l_direct(spec: &LSpec, cfg: &LConfig) -> Result<LValue> {
    let n = spec.forms.len();
    if cfg.cutoff < 2 {
        return Err(Error::domain("cutoff must be at least 2"));
    }
    if cfg.guard {
        let kmax = spec.forms.iter().map(|f| f.weight).max().unwrap();
        let bound = (kmax + n as i64) as f64;
        if spec.exponents[0].re <= bound {
            return Err(Error::domain(format!(
                "Re s1 = {} is not above max weight + n = {bound}; the series may not converge (override the guard to sum anyway)",
                spec.exponents[0].re
            )));
        }
    }
    if let Some(f) = spec.forms.iter().find(|f| f.coeffs.len() <= cfg.cutoff) {
        return Err(Error::domain(format!(
            "form '{}' has coefficients up to q^{} only; cutoff {} needs more",
            f.label,
            f.coeffs.len() - 1,
            cfg.cutoff
        )));
    }
    let t = shells(spec, cfg.cutoff);
    let pre = mellin_prefactor(spec.exponents.iter().sum());
    let x = cfg.cutoff as f64;
    let (sum, tail) = match cfg.mode {
        Cutoff::Sharp => {
            let s: C64 = t.iter().sum();
            (s, t[cfg.cutoff].norm())
        }
        Cutoff::Smooth => {
            let weighted = |scale: f64| -> C64 {
                t.iter()
                    .enumerate()
                    .map(|(mu, v)| v * smooth_weight(mu as f64 / scale))
                    .sum()
            };
            let full = weighted(x);
            let half = weighted(x / 2.0);
            (full, (full - half).norm())
        }
    };
    Ok(LValue {
        value: pre * sum,
        tail: pre.norm() * tail,
        branch: BRANCH_TAG,
    })
}

/// `L(f_1, ..., f_n; s, α_2, ..., α_n)` through its expansion into iterated
/// integrals, each evaluated by [`iterint_full`].
pub fn l_continued(forms: &[ModularForm], s: C64, alphas: &[i64], cfg: &NumericsConfig) -> Result<C64> {
    let n = forms.len();
    let a0: Vec<C64> = forms.iter().map(|f| f.constant_term()).collect();
    let list = identities::ths_expand(n, alphas)?.prune(&a0);
    list.evaluate(s, &a0, |target| {
        let fs: Vec<ModularForm> = target.slots.iter().map(|&i| forms[i - 1].clone()).collect();
        let spec = IterSpec::forms(&fs, &target.exponents(s))?;
        Ok(iterint_full(&spec, cfg)?.value)
    })
}
