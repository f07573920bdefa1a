//! Modular iterated integrals `I_a^b(f_1, ..., f_n; s_1, ..., s_n)`.
//!
//! Words are listed outermost first: `f_n` is integrated first, starting at
//! `a`. The full integral from `i∞` to `0` is split at a point `c` on the
//! imaginary axis; the piece below `c` is carried back above the Fricke image
//! of `c` by `z ↦ -1/(Nz)`, and every piece from `i∞` is separated into cusp
//! parts and constant terms so that only exponentially decaying integrands
//! reach the quadrature.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::forms::ModularForm;
use crate::quad::{self, Kernel, NumericsConfig, Quadrature};
use crate::special::{cpow, gamma, minus_one_pow, C64};

/// Distance below which a parameter is treated as lying on a divisor.
pub const POLE_THRESHOLD: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum Integrand {
    One,
    Form(ModularForm),
}

impl Integrand {
    pub fn weight(&self) -> i64 {
        match self {
            Integrand::One => 0,
            Integrand::Form(f) => f.weight,
        }
    }

    pub fn constant_term(&self) -> C64 {
        match self {
            Integrand::One => C64::new(1.0, 0.0),
            Integrand::Form(f) => f.constant_term(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Integrand::One => "1".into(),
            Integrand::Form(f) => f.label.clone(),
        }
    }

    fn fricke(&self) -> Result<Integrand> {
        Ok(match self {
            Integrand::One => Integrand::One,
            Integrand::Form(f) => Integrand::Form(f.fricke_form()?),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelSpec {
    pub integrand: Integrand,
    pub exponent: C64,
}

impl KernelSpec {
    pub fn form(f: ModularForm, s: C64) -> Self {
        KernelSpec {
            integrand: Integrand::Form(f),
            exponent: s,
        }
    }

    pub fn one(s: C64) -> Self {
        KernelSpec {
            integrand: Integrand::One,
            exponent: s,
        }
    }
}

/// A word of kernels, outermost first, on `Γ₀(N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IterSpec {
    kernels: Vec<KernelSpec>,
    level: u64,
}

impl IterSpec {
    /// Level taken from the forms; constant layers adopt it (level 1 if
    /// there are no forms at all).
    pub fn new(kernels: Vec<KernelSpec>) -> Result<Self> {
        let level = kernels
            .iter()
            .find_map(|k| match &k.integrand {
                Integrand::Form(f) => Some(f.level),
                Integrand::One => None,
            })
            .unwrap_or(1);
        Self::with_level(kernels, level)
    }

    pub fn with_level(kernels: Vec<KernelSpec>, level: u64) -> Result<Self> {
        if kernels.is_empty() {
            return Err(Error::domain("an iterated integral needs at least one kernel"));
        }
        for k in &kernels {
            if !(k.exponent.re.is_finite() && k.exponent.im.is_finite()) {
                return Err(Error::domain("exponents must be finite"));
            }
            if let Integrand::Form(f) = &k.integrand {
                if f.level != level {
                    return Err(Error::domain(format!(
                        "form '{}' has level {}, expected {level}",
                        f.label, f.level
                    )));
                }
            }
        }
        Ok(IterSpec { kernels, level })
    }

    /// `I(f_1, ..., f_n; s_1, ..., s_n)`.
    pub fn forms(forms: &[ModularForm], s: &[C64]) -> Result<Self> {
        if forms.len() != s.len() {
            return Err(Error::domain(format!(
                "{} forms but {} exponents",
                forms.len(),
                s.len()
            )));
        }
        Self::new(
            forms
                .iter()
                .zip(s)
                .map(|(f, &s)| KernelSpec::form(f.clone(), s))
                .collect(),
        )
    }

    pub fn kernels(&self) -> &[KernelSpec] {
        &self.kernels
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }

    pub fn exponents(&self) -> Vec<C64> {
        self.kernels.iter().map(|k| k.exponent).collect()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.kernels.iter().map(|k| k.integrand.weight()).collect()
    }

    pub fn with_exponents(&self, s: &[C64]) -> Result<Self> {
        if s.len() != self.len() {
            return Err(Error::domain("exponent count does not match the word length"));
        }
        let mut out = self.clone();
        for (k, &e) in out.kernels.iter_mut().zip(s) {
            k.exponent = e;
        }
        Ok(out)
    }

    /// The dual word `(f̃_n, ..., f̃_1; k_n - s_n, ..., k_1 - s_1)`.
    pub fn dual(&self) -> Result<Self> {
        let kernels = self
            .kernels
            .iter()
            .rev()
            .map(|k| {
                Ok(KernelSpec {
                    integrand: k.integrand.fricke()?,
                    exponent: C64::new(k.integrand.weight() as f64, 0.0) - k.exponent,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IterSpec {
            kernels,
            level: self.level,
        })
    }
}

/// Start point of a path: `i∞` or a point of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Endpoint {
    Infinity,
    Point(C64),
}

fn truncated(c: &[C64], order: usize) -> Vec<C64> {
    c[..c.len().min(order + 1)].to_vec()
}

/// Direct nested quadrature of the word from `a` to `b`: a vertical ray
/// when `a = i∞`, a straight segment otherwise.
pub fn nested_quadrature(spec: &IterSpec, a: Endpoint, b: C64, cfg: &NumericsConfig) -> Result<Quadrature> {
    let coeffs: Vec<Option<Vec<C64>>> = spec
        .kernels
        .iter()
        .map(|k| match &k.integrand {
            Integrand::One => None,
            Integrand::Form(f) => Some(truncated(&f.coeffs, cfg.order)),
        })
        .collect();
    let kernels: Vec<Kernel> = spec
        .kernels
        .iter()
        .zip(&coeffs)
        .map(|(k, c)| Kernel {
            coeffs: c.as_deref(),
            exponent: k.exponent,
        })
        .collect();
    match a {
        Endpoint::Infinity => quad::integrate_from_infinity(&kernels, b, cfg),
        Endpoint::Point(a) => quad::integrate_segment(&kernels, a, b, cfg),
    }
}

fn sum_label(name: &str, from: usize, to: usize) -> String {
    if from == to {
        format!("{name}{from}")
    } else if to == from + 1 {
        format!("{name}{from}+{name}{to}")
    } else {
        format!("{name}{from}+...+{name}{to}")
    }
}

/// `b^{s_1+...+s_n} / (s_n (s_n + s_{n-1}) ... (s_n + ... + s_1))`, the
/// continuation of `I_{i∞}^b(1, ..., 1; s)`.
pub fn ones_closed_form(b: C64, s: &[C64]) -> Result<C64> {
    if b == C64::new(0.0, 0.0) {
        return Err(Error::domain("b must be nonzero"));
    }
    let n = s.len();
    let mut partial = C64::new(0.0, 0.0);
    let mut denom = C64::new(1.0, 0.0);
    for i in (0..n).rev() {
        partial += s[i];
        if partial.norm() < POLE_THRESHOLD {
            return Err(Error::pole(format!("{} = 0", sum_label("s", i + 1, n))));
        }
        denom *= partial;
    }
    Ok(cpow(b, partial) / denom)
}

/// A hyperplane `Σ s_i = const` on which the integral may have a pole.
#[derive(Clone, Debug, PartialEq)]
pub struct Divisor {
    pub label: String,
    /// Current value of `Σ s_i - const`.
    pub offset: C64,
}

impl Divisor {
    pub fn is_hit(&self) -> bool {
        self.offset.norm() < POLE_THRESHOLD
    }
}

/// Divisors that carry poles for the given forms: trailing sums
/// `s_a + ... + s_n = 0` while `f_a, ..., f_n` all have constant terms, and
/// leading sums `s_1 + ... + s_b = k_1 + ... + k_b` while the Fricke images
/// `f̃_1, ..., f̃_b` all have constant terms.
pub fn pole_divisors(spec: &IterSpec) -> Result<Vec<Divisor>> {
    let n = spec.len();
    let mut out = Vec::new();
    let mut sum = C64::new(0.0, 0.0);
    for a in (0..n).rev() {
        let k = &spec.kernels[a];
        if k.integrand.constant_term() == C64::new(0.0, 0.0) {
            break;
        }
        sum += k.exponent;
        out.push(Divisor {
            label: format!("{} = 0", sum_label("s", a + 1, n)),
            offset: sum,
        });
    }
    let mut sum = C64::new(0.0, 0.0);
    let mut weight = 0i64;
    for (b, k) in spec.kernels.iter().enumerate() {
        if k.integrand.fricke()?.constant_term() == C64::new(0.0, 0.0) {
            break;
        }
        sum += k.exponent;
        weight += k.integrand.weight();
        out.push(Divisor {
            label: format!("{} = {weight}", sum_label("s", 1, b + 1)),
            offset: sum - weight as f64,
        });
    }
    Ok(out)
}

/// Coefficient data for one layer of a piece from `i∞`.
struct Layer {
    cusp: Option<Vec<C64>>,
    a0: C64,
    exponent: C64,
}

impl Layer {
    fn new(integrand: &Integrand, exponent: C64, order: usize) -> Self {
        match integrand {
            Integrand::One => Layer {
                cusp: None,
                a0: C64::new(1.0, 0.0),
                exponent,
            },
            Integrand::Form(f) => {
                let full = truncated(&f.coeffs, order);
                let mut cusp = full.clone();
                cusp[0] = C64::new(0.0, 0.0);
                let nonzero = cusp.iter().any(|c| c.norm() > 0.0);
                Layer {
                    a0: full[0],
                    cusp: nonzero.then_some(cusp),
                    exponent,
                }
            }
        }
    }
}

/// `I_{i∞}^c` of the layers, expanding each form into cusp part plus
/// constant term and folding innermost constant blocks in closed form.
fn upper_piece(layers: &[Layer], c: C64, cfg: &NumericsConfig) -> Result<Quadrature> {
    let m = layers.len();
    let mut total = Quadrature {
        value: C64::new(0.0, 0.0),
        error: 0.0,
    };
    if m == 0 {
        total.value = C64::new(1.0, 0.0);
        return Ok(total);
    }
    debug_assert!(m < 31);
    for mask in 0u32..(1 << m) {
        // bit i set: slot i takes its constant term
        let mut coef = C64::new(1.0, 0.0);
        let mut skip = false;
        for (i, l) in layers.iter().enumerate() {
            if mask & (1 << i) != 0 {
                coef *= l.a0;
            } else if l.cusp.is_none() {
                skip = true;
            }
        }
        if skip || coef == C64::new(0.0, 0.0) {
            continue;
        }
        let trailing = (0..m).rev().take_while(|&i| mask & (1 << i) != 0).count();
        let exps: Vec<C64> = layers.iter().map(|l| l.exponent).collect();
        if trailing == m {
            total.value += coef * ones_closed_form(c, &exps)?;
            continue;
        }
        let head = m - trailing;
        let mut fold = C64::new(0.0, 0.0);
        let mut denom = C64::new(1.0, 0.0);
        for i in (head..m).rev() {
            fold += exps[i];
            if fold.norm() < POLE_THRESHOLD {
                return Err(Error::pole(format!("{} = 0", sum_label("t", i + 1, m))));
            }
            denom *= fold;
        }
        let kernels: Vec<Kernel> = (0..head)
            .map(|i| {
                let e = if i == head - 1 { exps[i] + fold } else { exps[i] };
                if mask & (1 << i) != 0 {
                    Kernel::one(e)
                } else {
                    Kernel::series(layers[i].cusp.as_deref().unwrap(), e)
                }
            })
            .collect();
        let q = quad::integrate_from_infinity(&kernels, c, cfg)?;
        let scale = coef / denom;
        total.value += scale * q.value;
        total.error += scale.norm() * q.error;
    }
    Ok(total)
}

/// Value of `I_{i∞}^0` with its error estimate and the divisors checked.
#[derive(Clone, Debug, PartialEq)]
pub struct IterValue {
    pub value: C64,
    pub error: f64,
    pub divisors: Vec<Divisor>,
}

/// `I_{i∞}^0(f; s)` split at the fixed point `i/√N` of the Fricke involution.
pub fn iterint_full(spec: &IterSpec, cfg: &NumericsConfig) -> Result<IterValue> {
    iterint_split(spec, 1.0 / (spec.level as f64).sqrt(), cfg)
}

/// `I_{i∞}^0(f; s)` split at `c = iy`. Any `y > 0` gives the same value; the
/// lower piece is evaluated above `c'' = i/(Ny)`.
pub fn iterint_split(spec: &IterSpec, y: f64, cfg: &NumericsConfig) -> Result<IterValue> {
    cfg.validate(spec.level)?;
    if !(y > 0.0) || y >= cfg.height || 1.0 / (spec.level as f64 * y) >= cfg.height {
        return Err(Error::domain(format!("split height {y} out of range")));
    }
    let divisors = pole_divisors(spec)?;
    if let Some(d) = divisors.iter().find(|d| d.is_hit()) {
        return Err(Error::pole(d.label.clone()));
    }
    let n = spec.len();
    let big_n = spec.level as f64;
    let c = C64::new(0.0, y);
    let c2 = C64::new(0.0, 1.0 / (big_n * y));
    let upper_layers: Vec<Layer> = spec
        .kernels
        .iter()
        .map(|k| Layer::new(&k.integrand, k.exponent, cfg.order))
        .collect();
    let dual = spec.dual()?;
    // dual lists f̃_n first; the lower piece for split j uses f̃_j, ..., f̃_1
    let dual_layers: Vec<Layer> = dual
        .kernels
        .iter()
        .map(|k| Layer::new(&k.integrand, k.exponent, cfg.order))
        .collect();
    let mut value = C64::new(0.0, 0.0);
    let mut error = 0.0;
    for j in 0..=n {
        let up = upper_piece(&upper_layers[j..], c, cfg)?;
        let low = if j == 0 {
            Quadrature {
                value: C64::new(1.0, 0.0),
                error: 0.0,
            }
        } else {
            let s_sum: C64 = spec.kernels[..j].iter().map(|k| k.exponent).sum();
            let k_sum: f64 = spec.kernels[..j].iter().map(|k| k.integrand.weight() as f64).sum();
            let pre = minus_one_pow(s_sum) * cpow(C64::new(big_n, 0.0), k_sum / 2.0 - s_sum);
            let q = upper_piece(&dual_layers[n - j..], c2, cfg)?;
            Quadrature {
                value: pre * q.value,
                error: pre.norm() * q.error,
            }
        };
        value += low.value * up.value;
        error += low.error * up.value.norm() + up.error * low.value.norm();
    }
    Ok(IterValue {
        value,
        error,
        divisors,
    })
}

/// `Z(f; s) = N^{Σs/2} I_{i∞}^0(f; s)`.
pub fn completed_z(spec: &IterSpec, cfg: &NumericsConfig) -> Result<IterValue> {
    completed_z_split(spec, 1.0 / (spec.level as f64).sqrt(), cfg)
}

pub fn completed_z_split(spec: &IterSpec, y: f64, cfg: &NumericsConfig) -> Result<IterValue> {
    let mut v = iterint_split(spec, y, cfg)?;
    let s_sum: C64 = spec.exponents().iter().sum();
    let scale = cpow(C64::new(spec.level as f64, 0.0), s_sum / 2.0);
    v.value *= scale;
    v.error *= scale.norm();
    Ok(v)
}

/// `Γ^{(s_1, ..., s_n)} = (-1)^n Γ(s_1) ... Γ(s_n)`.
pub fn signed_gamma(s: &[C64]) -> C64 {
    let sign = if s.len() % 2 == 0 { 1.0 } else { -1.0 };
    s.iter().fold(C64::new(sign, 0.0), |acc, &x| acc * gamma(x))
}

fn tilde_exponents(spec: &IterSpec) -> Result<Vec<i64>> {
    spec.exponents()
        .iter()
        .map(|e| {
            if e.im == 0.0 && e.re.fract() == 0.0 && e.re >= 1.0 {
                Ok(e.re as i64)
            } else {
                Err(Error::domain(format!("exponent {e} must be a positive integer")))
            }
        })
        .collect()
}

fn check_tilde_shape(spec: &IterSpec) -> Result<()> {
    for k in &spec.kernels {
        if let Integrand::Form(f) = &k.integrand {
            if !f.is_cuspidal() {
                return Err(Error::domain(format!(
                    "layer '{}' has a constant term; pass its cusp part",
                    f.label
                )));
            }
        }
    }
    if matches!(spec.kernels.last().unwrap().integrand, Integrand::One) {
        return Err(Error::domain("the innermost layer must be a cusp part"));
    }
    Ok(())
}

/// `Ĩ_{i∞}^z` from its Fourier expansion in `q = e^{2πiz}`, for words made
/// of constant blocks and cusp parts with positive integer exponents `α`.
pub fn tilde_i_fourier(spec: &IterSpec, z: C64, order: usize) -> Result<C64> {
    check_tilde_shape(spec)?;
    let alpha = tilde_exponents(spec)?;
    if z.im <= 0.0 {
        return Err(Error::domain(format!("{z} is not in the upper half-plane")));
    }
    // groups: exponent sums of each block of constants with its closing form
    let mut groups: Vec<(&[C64], i64)> = Vec::new();
    let mut acc = 0i64;
    for (k, &a) in spec.kernels.iter().zip(&alpha) {
        acc += a;
        if let Integrand::Form(f) = &k.integrand {
            groups.push((&f.coeffs, acc));
            acc = 0;
        }
    }
    let len = order + 1;
    let coeff = |c: &[C64], m: usize| c.get(m).copied().unwrap_or_default();
    let (last, e) = *groups.last().unwrap();
    let mut t: Vec<C64> = (0..len)
        .map(|mu| {
            if mu == 0 {
                C64::new(0.0, 0.0)
            } else {
                coeff(last, mu) / (mu as f64).powi(e as i32)
            }
        })
        .collect();
    for &(c, e) in groups.iter().rev().skip(1) {
        let mut next = vec![C64::new(0.0, 0.0); len];
        for (mu, slot) in next.iter_mut().enumerate().skip(2) {
            let mut s = C64::new(0.0, 0.0);
            for m in 1..mu {
                s += coeff(c, m) * t[mu - m];
            }
            *slot = s / (mu as f64).powi(e as i32);
        }
        t = next;
    }
    let q = (C64::new(0.0, 2.0 * PI) * z).exp();
    let mut sum = C64::new(0.0, 0.0);
    for c in t.iter().rev() {
        sum = sum * q + c;
    }
    let total: i64 = alpha.iter().sum();
    let s: Vec<C64> = alpha.iter().map(|&a| C64::new(a as f64, 0.0)).collect();
    let pre = signed_gamma(&s) / C64::new(0.0, -2.0 * PI).powi(total as i32);
    Ok(pre * sum)
}

fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `Ĩ_{i∞}^z` by quadrature: each factor `(z_i - z_{i-1})^{α_i - 1}` is
/// expanded binomially into ordinary iterated integrals.
pub fn tilde_i_quadrature(spec: &IterSpec, z: C64, cfg: &NumericsConfig) -> Result<C64> {
    check_tilde_shape(spec)?;
    let alpha = tilde_exponents(spec)?;
    let n = alpha.len();
    let mut total = C64::new(0.0, 0.0);
    let mut j = vec![0i64; n];
    loop {
        let mut coef = 1.0;
        let mut exps = Vec::with_capacity(n);
        for i in 0..n {
            coef *= binomial(alpha[i] - 1, j[i]) * if j[i] % 2 == 0 { 1.0 } else { -1.0 };
            let next = if i + 1 < n { j[i + 1] } else { 0 };
            exps.push(C64::new((alpha[i] - j[i] + next) as f64, 0.0));
        }
        let word = spec.with_exponents(&exps)?;
        let q = nested_quadrature(&word, Endpoint::Infinity, z, cfg)?;
        total += coef * z.powi(j[0] as i32) * q.value;
        // odometer over 0 <= j_i < α_i
        let mut i = 0;
        loop {
            if i == n {
                return Ok(total);
            }
            j[i] += 1;
            if j[i] < alpha[i] {
                break;
            }
            j[i] = 0;
            i += 1;
        }
    }
}
