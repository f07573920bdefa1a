use std::f64::consts::PI;

use moditer_core::forms::BuiltinForm;
use moditer_core::identities::{thi_expand, ths_expand, Target, TermList};
use moditer_core::iterint::{completed_z, completed_z_split, iterint_full, nested_quadrature, Endpoint, IterSpec};
use moditer_core::lfun::{l_direct, LConfig, LSpec};
use moditer_core::mzv::{mzv_modular_integral, mzv_p1_integral, mzv_series, MzvIndex};
use moditer_core::qseries::{builtin_form, eta_series, BuiltinSeries, Rational};
use moditer_core::quad::NumericsConfig;
use moditer_core::{ModularForm, Result, C64};
use num_traits::FromPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::Check;

pub struct Ctx {
    pub numerics: NumericsConfig,
    pub lconfig: LConfig,
}

impl Ctx {
    /// Coefficient count that serves both the quadrature and the L-sums.
    pub fn form_len(&self) -> usize {
        self.numerics.order.max(self.lconfig.cutoff) + 1
    }

    pub fn builtin(&self, f: BuiltinForm) -> Result<ModularForm> {
        f.build(self.form_len())
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn a0s(forms: &[ModularForm]) -> Vec<C64> {
    forms.iter().map(|f| f.constant_term()).collect()
}

fn pick(forms: &[ModularForm], t: &Target) -> Vec<ModularForm> {
    t.slots.iter().map(|&i| forms[i - 1].clone()).collect()
}

pub fn l_value(forms: &[ModularForm], s: &[C64], ctx: &Ctx) -> Result<C64> {
    Ok(l_direct(&LSpec::new(forms.to_vec(), s.to_vec())?, &ctx.lconfig)?.value)
}

pub fn i_value(forms: &[ModularForm], s: &[C64], ctx: &Ctx) -> Result<C64> {
    Ok(iterint_full(&IterSpec::forms(forms, s)?, &ctx.numerics)?.value)
}

fn exps(s: C64, alphas: &[i64]) -> Vec<C64> {
    std::iter::once(s).chain(alphas.iter().map(|&a| real(a as f64))).collect()
}

fn label(name: &str, forms: &[ModularForm], s: &[C64]) -> String {
    let f: Vec<&str> = forms.iter().map(|f| f.label.as_str()).collect();
    let e: Vec<String> = s
        .iter()
        .map(|z| if z.im == 0.0 { format!("{}", z.re) } else { format!("{}{:+}i", z.re, z.im) })
        .collect();
    format!("{name}({}; {})", f.join(","), e.join(","))
}

pub fn eta_checks(order: usize) -> Result<Vec<Check>> {
    let eta = |l| eta_series(l, order);
    let f = builtin_form(BuiltinSeries::F, order)?;
    let g = builtin_form(BuiltinSeries::G, order)?;
    let sixteen = Rational::from_i64(16).expect("16 is finite");
    let g16f = g.sub(&f.scale(&sixteen))?;
    Ok(vec![
        Check::exact(
            "F = eta(4z)^8/eta(2z)^4",
            eta(4)?.pow(8)?.div(&eta(2)?.pow(4)?)?.agrees_with(&f)?,
        ),
        Check::exact(
            "G = eta(2z)^20/(eta(z)^8 eta(4z)^8)",
            eta(2)?.pow(20)?.div(&eta(1)?.pow(8)?.mul(&eta(4)?.pow(8)?))?.agrees_with(&g)?,
        ),
        Check::exact(
            "G-16F = eta(z)^8/eta(2z)^4",
            eta(1)?.pow(8)?.div(&eta(2)?.pow(4)?)?.agrees_with(&g16f)?,
        ),
    ])
}

/// `Z(f; s) = e^{iπΣs} Z(f̃_n, ..., f̃_1; k - s)`, with the left side split
/// below the Fricke fixed point so the two sides are evaluated differently.
pub fn funceq_check(forms: &[ModularForm], s: &[C64], ctx: &Ctx, tol: f64) -> Result<Check> {
    let spec = IterSpec::forms(forms, s)?;
    let y = 0.8 / (spec.level() as f64).sqrt();
    let lhs = completed_z_split(&spec, y, &ctx.numerics)?.value;
    let s_sum: C64 = s.iter().sum();
    let rhs = (C64::new(0.0, PI) * s_sum).exp() * completed_z(&spec.dual()?, &ctx.numerics)?.value;
    Ok(Check::new(label("Z", forms, s), lhs, rhs, tol, true))
}

/// `I(f; s, α)` by quadrature against the expansion in L-values.
pub fn thi_check(forms: &[ModularForm], s: C64, alphas: &[i64], ctx: &Ctx, tol: f64) -> Result<(TermList, Check)> {
    let a0 = a0s(forms);
    let terms = thi_expand(forms.len(), alphas)?.prune(&a0);
    let e = exps(s, alphas);
    let lhs = i_value(forms, &e, ctx)?;
    let rhs = terms.evaluate(s, &a0, |t| l_value(&pick(forms, t), &t.exponents(s), ctx))?;
    Ok((terms, Check::new(label("I", forms, &e), lhs, rhs, tol, true)))
}

/// `L(f; s, α)` by direct summation against the expansion in integrals.
pub fn ths_check(forms: &[ModularForm], s: C64, alphas: &[i64], ctx: &Ctx, tol: f64) -> Result<(TermList, Check)> {
    let a0 = a0s(forms);
    let terms = ths_expand(forms.len(), alphas)?.prune(&a0);
    let e = exps(s, alphas);
    let lhs = l_value(forms, &e, ctx)?;
    let rhs = terms.evaluate(s, &a0, |t| i_value(&pick(forms, t), &t.exponents(s), ctx))?;
    Ok((terms, Check::new(label("L", forms, &e), lhs, rhs, tol, true)))
}

/// Modular and ℙ¹ integrals against the nested series.
pub fn mzv_checks(index: &MzvIndex, ctx: &Ctx, tol: f64) -> Result<Vec<Check>> {
    let series = real(mzv_series(index, 1_000_000)?);
    Ok(vec![
        Check::new(
            format!("zeta{index} modular"),
            real(mzv_modular_integral(index, &ctx.numerics)?),
            series,
            tol,
            false,
        ),
        Check::new(format!("zeta{index} p1"), real(mzv_p1_integral(index)?), series, tol, false),
    ])
}

/// Level-one cusp forms `Δ`, `ΔE4`, `ΔE6`.
fn cusp_pool(len: usize) -> Result<Vec<ModularForm>> {
    let delta = BuiltinForm::Delta.build(len)?;
    let times_delta = |other: ModularForm| {
        let mut out = vec![real(0.0); len];
        for i in 1..len {
            for j in 0..len - i {
                out[i + j] += delta.coeffs[i] * other.coeffs[j];
            }
        }
        ModularForm::new(format!("delta*{}", other.label), 1, 12 + other.weight, out)
    };
    Ok(vec![
        delta.clone(),
        times_delta(BuiltinForm::Eisenstein(4).build(len)?)?,
        times_delta(BuiltinForm::Eisenstein(6).build(len)?)?,
    ])
}

/// Shuffle, reversal and composition on random vertical segments.
pub fn shuffle_checks(seed: u64, count: usize, cfg: &NumericsConfig, tol: f64) -> Result<Vec<Check>> {
    let pool = cusp_pool(cfg.order + 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seg = |forms: &[ModularForm], s: &[C64], a: C64, b: C64| -> Result<C64> {
        if forms.is_empty() {
            return Ok(real(1.0));
        }
        Ok(nested_quadrature(&IterSpec::forms(forms, s)?, Endpoint::Point(a), b, cfg)?.value)
    };
    let mut out = Vec::new();
    for case in 0..count {
        let n = rng.gen_range(1..=3usize);
        let letter = |rng: &mut ChaCha8Rng| {
            (
                pool[rng.gen_range(0..pool.len())].clone(),
                C64::new(rng.gen_range(0.5..6.0), rng.gen_range(-1.0..1.0)),
            )
        };
        let (forms, s): (Vec<_>, Vec<_>) = (0..n).map(|_| letter(&mut rng)).unzip();
        let x = rng.gen_range(-0.5..0.5);
        let a = C64::new(x, rng.gen_range(0.3..0.7));
        let b = C64::new(x, rng.gen_range(1.0..1.6));
        let mid = C64::new(x, rng.gen_range(0.7..1.0));
        let full = seg(&forms, &s, a, b)?;

        let rf: Vec<_> = forms.iter().rev().cloned().collect();
        let rs: Vec<_> = s.iter().rev().cloned().collect();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        out.push(Check::new(format!("case {case}: reversal"), sign * seg(&rf, &rs, b, a)?, full, tol, false));

        let mut comp = real(0.0);
        for j in 0..=n {
            comp += seg(&forms[..j], &s[..j], mid, b)? * seg(&forms[j..], &s[j..], a, mid)?;
        }
        out.push(Check::new(format!("case {case}: composition"), comp, full, tol, false));

        let (ef, es) = letter(&mut rng);
        let prod = full * seg(std::slice::from_ref(&ef), &[es], a, b)?;
        let mut sum = real(0.0);
        for pos in 0..=n {
            let mut wf = forms.clone();
            let mut ws = s.clone();
            wf.insert(pos, ef.clone());
            ws.insert(pos, es);
            sum += seg(&wf, &ws, a, b)?;
        }
        out.push(Check::new(format!("case {case}: shuffle"), sum, prod, tol, false));
    }
    Ok(out)
}
