use std::path::Path;

use moditer_core::forms::{evaluate_at, load_form, BuiltinForm, EvalConfig};
use moditer_core::iterint::{iterint_full, iterint_split, IterSpec};
use moditer_core::lfun::{l_continued, l_direct, Cutoff, LConfig, LSpec};
use moditer_core::mzv::{mzv_modular_integral, mzv_p1_integral, mzv_series, MzvIndex};
use moditer_core::qseries::{builtin_form, BuiltinSeries, Rational};
use moditer_core::quad::NumericsConfig;
use moditer_core::{Error, ModularForm, Result, C64};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::checks::{self, Ctx};
use crate::report::{complex, Config, RunReport};
use crate::{Cli, Command, ExpansionArgs, LMethod, MzvMethod, Suite};

fn parse_complex(text: &str) -> Result<C64> {
    let t = text.trim();
    t.parse::<f64>()
        .map(|x| C64::new(x, 0.0))
        .or_else(|_| t.parse::<C64>())
        .map_err(|_| Error::Parse(format!("bad number '{text}'")))
}

fn parse_list(text: &str) -> Result<Vec<C64>> {
    text.split(',').map(parse_complex).collect()
}

fn parse_ints(text: &str) -> Result<Vec<i64>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer '{p}'")))
        })
        .collect()
}

/// `"x,y"` or a complex literal.
fn parse_point(text: &str) -> Result<C64> {
    let parts: Vec<&str> = text.split(',').collect();
    match parts.as_slice() {
        [x, y] => Ok(C64::new(
            x.trim().parse().map_err(|_| Error::Parse(format!("bad point '{text}'")))?,
            y.trim().parse().map_err(|_| Error::Parse(format!("bad point '{text}'")))?,
        )),
        _ => parse_complex(text),
    }
}

fn resolve_forms(names: &[String], files: &[std::path::PathBuf], ctx: &Ctx) -> Result<Vec<ModularForm>> {
    let mut forms = Vec::new();
    for name in names {
        let looks_like_file = name.ends_with(".json") || name.contains('/') || Path::new(name).is_file();
        forms.push(if looks_like_file {
            load_form(name)?
        } else {
            ctx.builtin(BuiltinForm::parse(name)?)?
        });
    }
    for f in files {
        forms.push(load_form(f)?);
    }
    if forms.is_empty() {
        return Err(Error::Parse(format!(
            "no forms given; use a name ({}) or --form <file>",
            BuiltinForm::NAMES.join(", ")
        )));
    }
    Ok(forms)
}

fn labels(forms: &[ModularForm]) -> Vec<String> {
    forms.iter().map(|f| f.label.clone()).collect()
}

fn complexes(z: &[C64]) -> Vec<[f64; 2]> {
    z.iter().map(|&z| complex(z)).collect()
}

fn rational_json(q: &Rational) -> Value {
    if q.is_integer() {
        if let Some(n) = q.to_integer().to_i64() {
            return json!(n);
        }
    }
    json!(q.to_string())
}

pub fn run(cli: &Cli) -> Result<RunReport> {
    let g = &cli.global;
    let numerics = NumericsConfig {
        order: g.order,
        height: g.height,
        panels: g.panels,
        tolerance: g.tol,
        ..NumericsConfig::default()
    };
    let ctx = Ctx {
        numerics,
        lconfig: LConfig {
            cutoff: g.cutoff,
            ..LConfig::default()
        },
    };
    let config = Config {
        order: g.order,
        height: g.height,
        panels: g.panels,
        tol: g.tol,
        cutoff: g.cutoff,
    };
    match &cli.command {
        Command::Qexp { name } => {
            let series = builtin_form(BuiltinSeries::parse(name)?, g.order)?;
            let mut r = RunReport::new("qexp", json!({ "name": name }), config);
            let coeffs: Vec<Value> = series.coeffs().iter().map(rational_json).collect();
            r.details = json!({ "q_power_24ths": series.prefactor_num(), "coefficients": coeffs });
            Ok(r)
        }
        Command::Eval { form, z } => {
            let names: Vec<String> = form.iter().cloned().collect();
            let forms = resolve_forms(&names, &g.form_files, &ctx)?;
            let z = parse_point(z)?;
            let ecfg = EvalConfig {
                order: g.order,
                tolerance: g.tol,
                ..EvalConfig::default()
            };
            let mut r = RunReport::new("eval", json!({ "forms": labels(&forms), "z": complex(z) }), config);
            for f in &forms {
                let e = evaluate_at(f, z, &ecfg)?;
                r.value(f.label.clone(), e.value, e.tail_bound);
            }
            Ok(r)
        }
        Command::Lvalue {
            forms,
            s,
            method,
            sharp,
            no_guard,
        } => {
            let forms = resolve_forms(forms, &g.form_files, &ctx)?;
            let s = parse_list(s)?;
            let lcfg = LConfig {
                cutoff: g.cutoff,
                mode: if *sharp { Cutoff::Sharp } else { Cutoff::Smooth },
                guard: !no_guard,
            };
            let inputs = json!({ "forms": labels(&forms), "s": complexes(&s), "method": format!("{method:?}").to_lowercase() });
            let mut r = RunReport::new("lvalue", inputs, config);
            match method {
                LMethod::Direct => {
                    let v = l_direct(&LSpec::new(forms, s)?, &lcfg)?;
                    r.value("L", v.value, v.tail);
                    r.details = json!({ "branch": v.branch });
                }
                LMethod::Continued => {
                    let alphas = s[1..]
                        .iter()
                        .map(|a| {
                            if a.im == 0.0 && a.re.fract() == 0.0 && a.re >= 1.0 {
                                Ok(a.re as i64)
                            } else {
                                Err(Error::domain("continuation needs positive integer exponents after the first"))
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let v = l_continued(&forms, s[0], &alphas, &ctx.numerics)?;
                    r.value("L", v, g.tol * v.norm().max(1.0));
                    r.details = json!({ "branch": moditer_core::lfun::BRANCH_TAG });
                }
            }
            Ok(r)
        }
        Command::Iterint { forms, s, split } => {
            let forms = resolve_forms(forms, &g.form_files, &ctx)?;
            let s = parse_list(s)?;
            let spec = IterSpec::forms(&forms, &s)?;
            let v = match split {
                Some(y) => iterint_split(&spec, *y, &ctx.numerics)?,
                None => iterint_full(&spec, &ctx.numerics)?,
            };
            let inputs = json!({ "forms": labels(&forms), "s": complexes(&s), "split": split });
            let mut r = RunReport::new("iterint", inputs, config);
            r.value("I", v.value, v.error);
            let divisors: Vec<Value> = v
                .divisors
                .iter()
                .map(|d| json!({ "divisor": d.label, "offset": complex(d.offset) }))
                .collect();
            r.details = json!({ "divisors": divisors });
            Ok(r)
        }
        Command::ThiVerify(args) => expansion("thi-verify", args, cli, ctx, config),
        Command::ThsVerify(args) => expansion("ths-verify", args, cli, ctx, config),
        Command::FunceqVerify { forms, s, check_tol } => {
            let forms = resolve_forms(forms, &g.form_files, &ctx)?;
            let points = s.iter().map(|p| parse_list(p)).collect::<Result<Vec<_>>>()?;
            let inputs = json!({ "forms": labels(&forms), "s": points.iter().map(|p| complexes(p)).collect::<Vec<_>>() });
            let mut r = RunReport::new("funceq-verify", inputs, config);
            for p in &points {
                r.check(checks::funceq_check(&forms, p, &ctx, *check_tol)?);
            }
            Ok(r)
        }
        Command::EtaVerify => {
            let mut r = RunReport::new("eta-verify", json!({}), config);
            for c in checks::eta_checks(g.order)? {
                r.check(c);
            }
            Ok(r)
        }
        Command::Mzv { index, method, terms } => {
            let idx: MzvIndex = index.parse()?;
            let inputs = json!({ "index": idx.entries(), "method": format!("{method:?}").to_lowercase(), "terms": terms });
            let mut r = RunReport::new("mzv", inputs, config);
            let real = |x: f64| C64::new(x, 0.0);
            if matches!(method, MzvMethod::Series | MzvMethod::All) {
                // the tail estimate is exact to leading order; the residual is O(N^{-k_d})
                let err = (*terms as f64).powi(-(*idx.entries().last().unwrap() as i32)) * (*terms as f64).ln().powi(idx.depth() as i32);
                r.value("series", real(mzv_series(&idx, *terms)?), err);
            }
            if matches!(method, MzvMethod::P1 | MzvMethod::All) {
                r.value("p1", real(mzv_p1_integral(&idx)?), 1e-12);
            }
            if matches!(method, MzvMethod::Modular | MzvMethod::All) {
                let v = mzv_modular_integral(&idx, &ctx.numerics)?;
                let scale = moditer_core::mzv::modular_prefactor(&idx).norm();
                r.value("modular", real(v), g.tol * scale * 1e-2);
            }
            Ok(r)
        }
        Command::Verify { suite, seed } => verify(*suite, *seed, ctx, config),
    }
}

fn expansion(name: &str, args: &ExpansionArgs, cli: &Cli, mut ctx: Ctx, config: Config) -> Result<RunReport> {
    let forms = resolve_forms(&args.forms, &cli.global.form_files, &ctx)?;
    let s = parse_complex(&args.s)?;
    let alphas = parse_ints(&args.alphas)?;
    ctx.lconfig.guard = !args.no_guard;
    let (terms, check) = if name == "thi-verify" {
        checks::thi_check(&forms, s, &alphas, &ctx, args.check_tol)?
    } else {
        checks::ths_check(&forms, s, &alphas, &ctx, args.check_tol)?
    };
    let inputs = json!({ "forms": labels(&forms), "s": complex(s), "alphas": alphas });
    let mut r = RunReport::new(name, inputs, config);
    let lines: Vec<String> = terms.to_string().lines().map(str::to_string).collect();
    r.details = json!({ "terms": lines });
    r.check(check);
    Ok(r)
}

fn verify(suite: Suite, seed: u64, mut ctx: Ctx, config: Config) -> Result<RunReport> {
    let name = format!("{suite:?}").to_lowercase();
    let mut r = RunReport::new("verify", json!({ "suite": name, "seed": seed }), config);
    let c = |x: f64| C64::new(x, 0.0);
    match suite {
        Suite::Eta => {
            for chk in checks::eta_checks(ctx.numerics.order.max(200))? {
                r.check(chk);
            }
        }
        Suite::Funceq => {
            let delta = ctx.builtin(BuiltinForm::Delta)?;
            for s in [5.0, 5.5, 6.0, 6.5, 7.0] {
                r.check(checks::funceq_check(std::slice::from_ref(&delta), &[c(s)], &ctx, 1e-6)?);
            }
            let e4 = ctx.builtin(BuiltinForm::Eisenstein(4))?;
            r.check(checks::funceq_check(&[e4, delta], &[c(7.5), C64::new(3.0, 0.5)], &ctx, 1e-6)?);
        }
        Suite::Thi | Suite::Ths => {
            // guard off: the Δ sums converge well below the absolute-convergence line
            ctx.lconfig.guard = false;
            let e4 = ctx.builtin(BuiltinForm::Eisenstein(4))?;
            let delta = ctx.builtin(BuiltinForm::Delta)?;
            let run = if suite == Suite::Thi { checks::thi_check } else { checks::ths_check };
            r.check(run(&[e4.clone(), e4], c(8.0), &[2], &ctx, 1e-4)?.1);
            r.check(run(&[delta.clone(), delta], c(9.0), &[2], &ctx, 1e-5)?.1);
        }
        Suite::Mzv => {
            for idx in ["2", "3", "1,2", "4", "2,2"] {
                for chk in checks::mzv_checks(&idx.parse()?, &ctx, 1e-6)? {
                    r.check(chk);
                }
            }
        }
        Suite::Shuffle => {
            for chk in checks::shuffle_checks(seed, 10, &ctx.numerics, 1e-8)? {
                r.check(chk);
            }
        }
    }
    Ok(r)
}
