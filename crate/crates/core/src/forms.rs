//! Modular forms as coefficient lists: evaluation on the upper half-plane,
//! constant-term splitting, the Fricke reflection and coefficient files.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::{self, BuiltinSeries};
use crate::special::{cpow, C64};

/// How the image `f|ω_N` of a form under the Fricke involution is known.
#[derive(Clone, Debug, PartialEq)]
pub enum FrickeImage {
    /// `f|ω_N = ε f`.
    Scaled(f64),
    /// q-expansion coefficients of `f|ω_N`.
    Expansion(Vec<C64>),
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModularForm {
    pub label: String,
    pub level: u64,
    pub weight: i64,
    pub coeffs: Vec<C64>,
    pub fricke: FrickeImage,
    /// `None` for the trivial character.
    pub character: Option<String>,
}

/// Result of evaluating a truncated q-expansion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: C64,
    pub tail_bound: f64,
}

/// Truncation order and tolerance for point evaluations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalConfig {
    pub order: usize,
    pub tolerance: f64,
    /// Refuse evaluations whose tail bound exceeds the tolerance.
    pub strict: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            order: 64,
            tolerance: 1e-8,
            strict: true,
        }
    }
}

impl ModularForm {
    pub fn new(label: impl Into<String>, level: u64, weight: i64, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("a modular form needs at least one coefficient"));
        }
        if level == 0 {
            return Err(Error::domain("level must be positive"));
        }
        let fricke = if level == 1 {
            FrickeImage::Scaled(1.0)
        } else {
            FrickeImage::Unknown
        };
        Ok(ModularForm {
            label: label.into(),
            level,
            weight,
            coeffs,
            fricke,
            character: None,
        })
    }

    pub fn with_fricke(mut self, fricke: FrickeImage) -> Self {
        self.fricke = fricke;
        self
    }

    pub fn constant_term(&self) -> C64 {
        self.coeffs[0]
    }

    pub fn is_cuspidal(&self) -> bool {
        self.coeffs[0] == C64::new(0.0, 0.0)
    }

    /// Coefficient `a_m`, zero beyond the stored list.
    pub fn coeff(&self, m: usize) -> C64 {
        self.coeffs.get(m).copied().unwrap_or_default()
    }

    /// The form `f⁰ = f - a₀` and the removed constant term.
    pub fn cusp_part(&self) -> (ModularForm, C64) {
        let mut g = self.clone();
        let a0 = g.coeffs[0];
        g.coeffs[0] = C64::new(0.0, 0.0);
        g.label = format!("{}^0", self.label);
        g.fricke = FrickeImage::Unknown;
        (g, a0)
    }

    fn ensure_trivial_character(&self) -> Result<()> {
        match &self.character {
            None => Ok(()),
            Some(c) if c == "trivial" => Ok(()),
            Some(c) => Err(Error::domain(format!(
                "Fricke reflection is only implemented for trivial character, '{}' has '{c}'",
                self.label
            ))),
        }
    }

    /// The form `f̃ = f|ω_N`, as a q-expansion.
    pub fn fricke_form(&self) -> Result<ModularForm> {
        self.ensure_trivial_character()?;
        let sign_k = if self.weight.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let (coeffs, back) = match &self.fricke {
            FrickeImage::Scaled(eps) => {
                if sign_k < 0.0 {
                    return Err(Error::domain(
                        "odd weight forms cannot be Fricke eigenforms up to a real sign",
                    ));
                }
                (
                    self.coeffs.iter().map(|c| c * eps).collect(),
                    FrickeImage::Scaled(*eps),
                )
            }
            FrickeImage::Expansion(g) => (
                g.clone(),
                FrickeImage::Expansion(self.coeffs.iter().map(|c| c * sign_k).collect()),
            ),
            FrickeImage::Unknown => {
                return Err(Error::domain(format!(
                    "Fricke image of '{}' (level {}) is not known",
                    self.label, self.level
                )))
            }
        };
        Ok(ModularForm {
            label: format!("{}~", self.label),
            level: self.level,
            weight: self.weight,
            coeffs,
            fricke: back,
            character: self.character.clone(),
        })
    }

    /// Constant term of `f|ω_N`.
    pub fn fricke_constant_term(&self) -> Result<C64> {
        Ok(self.fricke_form()?.constant_term())
    }
}

/// `Σ_{m=0}^{M} a_m e^{2πimz}` with the heuristic tail bound
/// `max(|a_{M-1}|, |a_M|) |q|^M / (1 - |q|)` (constant term excluded).
pub fn evaluate_at(f: &ModularForm, z: C64, cfg: &EvalConfig) -> Result<Evaluation> {
    if z.im <= 0.0 {
        return Err(Error::domain(format!("evaluation point {z} is not in the upper half-plane")));
    }
    let m = cfg.order.min(f.coeffs.len() - 1);
    let q = (C64::new(0.0, 2.0 * PI) * z).exp();
    let mut acc = C64::new(0.0, 0.0);
    for c in f.coeffs[..=m].iter().rev() {
        acc = acc * q + c;
    }
    let qa = q.norm();
    let last = (m.saturating_sub(1).max(1)..=m).map(|i| f.coeff(i).norm()).fold(0.0, f64::max);
    let tail_bound = last * qa.powi(m as i32) * qa / (1.0 - qa);
    if cfg.strict && tail_bound > cfg.tolerance {
        return Err(Error::Truncation {
            bound: tail_bound,
            tolerance: cfg.tolerance,
        });
    }
    Ok(Evaluation {
        value: acc,
        tail_bound,
    })
}

/// `N^{-k/2} z^{-k} g(-1/(Nz))` for an arbitrary evaluator `g`.
pub fn fricke_slash<F>(level: u64, weight: i64, z: C64, mut g: F) -> Result<C64>
where
    F: FnMut(C64) -> Result<C64>,
{
    if z.im <= 0.0 {
        return Err(Error::domain(format!("evaluation point {z} is not in the upper half-plane")));
    }
    let n = level as f64;
    let w = -1.0 / (n * z);
    let value = g(w)?;
    Ok(n.powf(-(weight as f64) / 2.0) * cpow(z, C64::new(-(weight as f64), 0.0)) * value)
}

/// `f̃(z) = N^{-k/2} z^{-k} f(-1/(Nz))`, with `f` evaluated from its q-expansion.
pub fn fricke_evaluate(f: &ModularForm, z: C64, cfg: &EvalConfig) -> Result<Evaluation> {
    f.ensure_trivial_character()?;
    let mut tail = 0.0;
    let value = fricke_slash(f.level, f.weight, z, |w| {
        let e = evaluate_at(f, w, cfg)?;
        tail = e.tail_bound;
        Ok(e.value)
    })?;
    let scale = (f.level as f64).powf(-(f.weight as f64) / 2.0) * z.norm().powf(-(f.weight as f64));
    Ok(Evaluation {
        value,
        tail_bound: tail * scale,
    })
}

// ---------------------------------------------------------------------------
// coefficient generation

/// `σ_k(n)` for `0 <= n < len` as f64 (index 0 unused).
pub fn sigma_table(k: u32, len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for d in 1..len {
        let p = (d as f64).powi(k as i32);
        let mut n = d;
        while n < len {
            out[n] += p;
            n += d;
        }
    }
    out
}

fn real(v: impl IntoIterator<Item = f64>) -> Vec<C64> {
    v.into_iter().map(|x| C64::new(x, 0.0)).collect()
}

/// Ramanujan τ(n) for `n < len`, exact in i128 before conversion.
pub fn tau_coefficients(len: usize) -> Vec<f64> {
    // η³ = Σ (-1)^k (2k+1) q^{k(k+1)/2}, then Δ = q (η³)^8 up to the q-shift
    let mut eta3 = vec![0i128; len];
    let mut k = 0usize;
    while k * (k + 1) / 2 < len {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        eta3[k * (k + 1) / 2] = sign * (2 * k as i128 + 1);
        k += 1;
    }
    let mul = |a: &[i128], b: &[i128]| -> Vec<i128> {
        let mut out = vec![0i128; len];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate().take(len - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    let e6 = mul(&eta3, &eta3);
    let e12 = mul(&e6, &e6);
    let e24 = mul(&e12, &e12);
    let mut tau = vec![0.0; len];
    for n in 1..len {
        tau[n] = e24[n - 1] as f64;
    }
    tau
}

/// `r_4(n)`, the coefficients of θ(z)⁴.
pub fn theta4_coefficients(len: usize) -> Vec<f64> {
    let mut theta = vec![0i64; len];
    theta[0] = 1;
    let mut n = 1;
    while n * n < len {
        theta[n * n] = 2;
        n += 1;
    }
    let mul = |a: &[i64], b: &[i64]| -> Vec<i64> {
        let mut out = vec![0i64; len];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate().take(len - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    let t2 = mul(&theta, &theta);
    mul(&t2, &t2).into_iter().map(|x| x as f64).collect()
}

/// Built-in forms with closed-form coefficient generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinForm {
    /// Δ = η²⁴, level 1, weight 12.
    Delta,
    /// `E_k` with constant term 1, level 1.
    Eisenstein(i64),
    /// `-B_k/(2k) + Σ σ_{k-1}(n) qⁿ`, level 1.
    EisensteinSigma(i64),
    /// `F = Σ_{n odd} σ₁(n) qⁿ`, level 4, weight 2.
    F,
    /// `G = θ⁴`, level 4, weight 2.
    G,
    /// `G - 16F`, level 4, weight 2.
    GMinus16F,
}

impl BuiltinForm {
    pub fn parse(name: &str) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        let even_weight = |k: &str| -> Result<i64> {
            let k: i64 = k
                .parse()
                .map_err(|_| Error::Parse(format!("unknown form '{name}'")))?;
            if k < 4 || k % 2 != 0 {
                return Err(Error::domain(format!(
                    "level-one Eisenstein series need even weight >= 4, got {k}"
                )));
            }
            Ok(k)
        };
        Ok(match lower.as_str() {
            "delta" => BuiltinForm::Delta,
            "f" => BuiltinForm::F,
            "g" | "theta4" => BuiltinForm::G,
            "g-16f" => BuiltinForm::GMinus16F,
            _ => {
                if let Some(k) = lower.strip_prefix("eis") {
                    BuiltinForm::EisensteinSigma(even_weight(k)?)
                } else if let Some(k) = lower.strip_prefix('e') {
                    BuiltinForm::Eisenstein(even_weight(k)?)
                } else {
                    return Err(Error::Parse(format!("unknown form '{name}'")));
                }
            }
        })
    }

    pub const NAMES: &'static [&'static str] = &["delta", "E4", "E6", "eis4", "F", "G", "G-16F"];

    /// The form with coefficients `a_0 .. a_{len-1}`.
    pub fn build(self, len: usize) -> Result<ModularForm> {
        let len = len.max(2);
        Ok(match self {
            BuiltinForm::Delta => ModularForm::new("delta", 1, 12, real(tau_coefficients(len)))?,
            BuiltinForm::Eisenstein(k) => {
                let factor = eisenstein_factor(k)?;
                let s = sigma_table((k - 1) as u32, len);
                let mut c: Vec<f64> = s.iter().map(|x| factor * x).collect();
                c[0] = 1.0;
                ModularForm::new(format!("E{k}"), 1, k, real(c))?
            }
            BuiltinForm::EisensteinSigma(k) => {
                let b = num_traits::ToPrimitive::to_f64(&qseries::bernoulli(k)?).unwrap_or(f64::NAN);
                let mut c = sigma_table((k - 1) as u32, len);
                c[0] = -b / (2.0 * k as f64);
                ModularForm::new(format!("eis{k}"), 1, k, real(c))?
            }
            BuiltinForm::F => {
                let f = f_coefficients(len);
                let g = theta4_coefficients(len);
                let tilde: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a - b / 16.0).collect();
                ModularForm::new("F", 4, 2, real(f))?.with_fricke(FrickeImage::Expansion(real(tilde)))
            }
            BuiltinForm::G => ModularForm::new("G", 4, 2, real(theta4_coefficients(len)))?
                .with_fricke(FrickeImage::Scaled(-1.0)),
            BuiltinForm::GMinus16F => {
                let f = f_coefficients(len);
                let g = theta4_coefficients(len);
                let c: Vec<f64> = f.iter().zip(&g).map(|(a, b)| b - 16.0 * a).collect();
                // (G - 16F)~ = -G + G - 16F ... = -16F
                let tilde: Vec<f64> = f.iter().map(|a| -16.0 * a).collect();
                ModularForm::new("G-16F", 4, 2, real(c))?.with_fricke(FrickeImage::Expansion(real(tilde)))
            }
        })
    }
}

fn eisenstein_factor(k: i64) -> Result<f64> {
    let b = qseries::bernoulli(k)?;
    let b = num_traits::ToPrimitive::to_f64(&b).unwrap_or(f64::NAN);
    Ok(-2.0 * k as f64 / b)
}

fn f_coefficients(len: usize) -> Vec<f64> {
    let s = sigma_table(1, len);
    (0..len).map(|n| if n % 2 == 1 { s[n] } else { 0.0 }).collect()
}

/// Builds a form by name from exact q-series arithmetic (slow, for checks).
pub fn from_qseries(which: BuiltinSeries, level: u64, weight: i64, order: usize) -> Result<ModularForm> {
    let s = qseries::builtin_form(which, order)?;
    ModularForm::new(format!("{which:?}"), level, weight, real(s.to_f64()?))
}

// ---------------------------------------------------------------------------
// coefficient files

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Real(f64),
    Complex([f64; 2]),
}

impl From<C64> for CoeffRepr {
    fn from(c: C64) -> Self {
        if c.im == 0.0 {
            CoeffRepr::Real(c.re)
        } else {
            CoeffRepr::Complex([c.re, c.im])
        }
    }
}

impl From<&CoeffRepr> for C64 {
    fn from(c: &CoeffRepr) -> Self {
        match c {
            CoeffRepr::Real(x) => C64::new(*x, 0.0),
            CoeffRepr::Complex([re, im]) => C64::new(*re, *im),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FrickeRepr {
    Sign { sign: f64 },
    Coeffs { coeffs: Vec<CoeffRepr> },
}

#[derive(Serialize, Deserialize)]
struct FormFile {
    label: String,
    level: u64,
    weight: i64,
    coeffs: Vec<CoeffRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fricke: Option<FrickeRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    character: Option<String>,
}

/// Parses a coefficient file from its JSON text.
pub fn parse_form(text: &str) -> Result<ModularForm> {
    let file: FormFile = serde_json::from_str(text)?;
    if file.coeffs.is_empty() {
        return Err(Error::Parse(format!("form '{}' has an empty coefficient list", file.label)));
    }
    let mut form = ModularForm::new(
        file.label,
        file.level,
        file.weight,
        file.coeffs.iter().map(C64::from).collect(),
    )
    .map_err(|e| Error::Parse(e.to_string()))?;
    match file.fricke {
        Some(FrickeRepr::Sign { sign }) => form.fricke = FrickeImage::Scaled(sign),
        Some(FrickeRepr::Coeffs { coeffs }) => {
            form.fricke = FrickeImage::Expansion(coeffs.iter().map(C64::from).collect())
        }
        None => {}
    }
    form.character = file.character.filter(|c| c != "trivial");
    Ok(form)
}

pub fn load_form(path: impl AsRef<Path>) -> Result<ModularForm> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_form(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn form_to_json(form: &ModularForm) -> Result<String> {
    let fricke = match &form.fricke {
        FrickeImage::Scaled(s) if form.level != 1 || *s != 1.0 => Some(FrickeRepr::Sign { sign: *s }),
        FrickeImage::Expansion(c) => Some(FrickeRepr::Coeffs {
            coeffs: c.iter().copied().map(CoeffRepr::from).collect(),
        }),
        _ => None,
    };
    let file = FormFile {
        label: form.label.clone(),
        level: form.level,
        weight: form.weight,
        coeffs: form.coeffs.iter().copied().map(CoeffRepr::from).collect(),
        fricke,
        character: form.character.clone(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn save_form(form: &ModularForm, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, form_to_json(form)?)?;
    Ok(())
}
