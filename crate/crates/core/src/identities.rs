//! Symbolic expansions between modular iterated integrals and multiple
//! modular L-values.
//!
//! A word `(f_1, ..., f_n)` carries exponents `(s + o, α_2, ..., α_n)` with a
//! symbolic `s`, an integer offset `o` and positive integers `α_k`. Expansion
//! coefficients are products of constant terms `a_0` of chosen slots, a
//! rational function of `s` with rational coefficients and a power of `Γ(s)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::special::{gamma, C64};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat_to_c64(r: &BigRational) -> C64 {
    C64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
}

fn binom(n: i64, k: i64) -> BigRational {
    if k < 0 || n < 0 || k > n {
        return BigRational::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(acc)
}

/// `Γ(m) = (m-1)!` for a positive integer `m`.
fn gamma_int(m: i64) -> BigRational {
    assert!(m >= 1, "Γ at nonpositive integer {m}");
    let mut acc = BigInt::one();
    for i in 2..m {
        acc *= BigInt::from(i);
    }
    BigRational::from_integer(acc)
}

// ---------------------------------------------------------------------------
// polynomials and rational functions in s

/// Polynomial in `s` over ℚ, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly(Vec<BigRational>);

impl Poly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    /// `s + a`.
    pub fn linear(a: i64) -> Self {
        Poly::new(vec![rat(a), BigRational::one()])
    }

    /// `s (s+1) ... (s+j-1)`, i.e. `Γ(s+j)/Γ(s)`.
    pub fn rising(j: i64) -> Self {
        (0..j).fold(Poly::one(), |acc, i| acc.mul(&Poly::linear(i)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    fn lead(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
                        + o.0.get(i).cloned().unwrap_or_else(BigRational::zero)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut r = self.0.clone();
        let mut q = vec![BigRational::zero(); r.len().saturating_sub(dd).max(1)];
        let lead = d.lead();
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let c = r.last().unwrap() / &lead;
            for (i, x) in d.0.iter().enumerate() {
                r[shift + i] -= &c * x;
            }
            q[shift] = c;
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(BigRational::one() / self.lead()))
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, s: C64) -> C64 {
        self.0
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, c| acc * s + rat_to_c64(c))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}s", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}s^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

/// Reduced quotient of polynomials with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn {
                num,
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.lead();
        let inv = BigRational::one() / lead;
        RatFn {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        RatFn::new(Poly::constant(c), Poly::one())
    }

    pub fn poly(p: Poly) -> Self {
        RatFn::new(p, Poly::one())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        RatFn::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        RatFn::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> RatFn {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn eval(&self, s: C64) -> Result<C64> {
        let d = self.den.eval(s);
        if d.norm() < 1e-300 {
            return Err(Error::pole(format!("{} = 0", self.den)));
        }
        Ok(self.num.eval(s) / d)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Poly| {
            let single = p.0.iter().filter(|c| !c.is_zero()).count() <= 1 && !p.0.iter().any(|c| c.is_negative());
            if single {
                p.to_string()
            } else {
                format!("({p})")
            }
        };
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

// ---------------------------------------------------------------------------
// coefficients, targets and term lists

/// `∏ a_0^{(i)} · R(s) · Γ(s)^g`; slots are 1-based positions in the
/// original word.
#[derive(Clone, Debug, PartialEq)]
pub struct Coefficient {
    pub a0: Vec<usize>,
    pub ratfn: RatFn,
    pub gamma_power: i32,
}

impl Coefficient {
    pub fn eval(&self, s: C64, a0: &[C64]) -> Result<C64> {
        let mut v = self.ratfn.eval(s)?;
        for &i in &self.a0 {
            v *= a0[i - 1];
        }
        if self.gamma_power != 0 {
            let g = gamma(s);
            if !g.norm().is_finite() {
                return Err(Error::pole(format!("Γ(s) at s = {s}")));
            }
            v *= g.powi(self.gamma_power);
        }
        Ok(v)
    }

    /// Whether the coefficient vanishes for the given constant terms.
    pub fn vanishes(&self, a0: &[C64]) -> bool {
        self.ratfn.is_zero() || self.a0.iter().any(|&i| a0[i - 1] == C64::new(0.0, 0.0))
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ratfn)?;
        for i in &self.a0 {
            write!(f, " a0[{i}]")?;
        }
        match self.gamma_power {
            0 => Ok(()),
            1 => write!(f, " Γ(s)"),
            g => write!(f, " Γ(s)^{g}"),
        }
    }
}

/// A word `(f_{i_1}, ..., f_{i_l})` of slots with exponents
/// `(s + offset, tail...)`. Used for both L-values and integrals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Target {
    pub slots: Vec<usize>,
    pub offset: i64,
    pub tail: Vec<i64>,
}

impl Target {
    pub fn new(slots: Vec<usize>, offset: i64, tail: Vec<i64>) -> Self {
        debug_assert_eq!(slots.len(), tail.len() + 1);
        Target { slots, offset, tail }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn exponents(&self, s: C64) -> Vec<C64> {
        std::iter::once(s + self.offset as f64)
            .chain(self.tail.iter().map(|&a| C64::new(a as f64, 0.0)))
            .collect()
    }

    fn describe(&self, name: &str) -> String {
        let f: Vec<String> = self.slots.iter().map(|i| format!("f{i}")).collect();
        let mut e = vec![match self.offset {
            0 => "s".to_string(),
            o if o > 0 => format!("s+{o}"),
            o => format!("s{o}"),
        }];
        e.extend(self.tail.iter().map(|a| a.to_string()));
        format!("{name}({}; {})", f.join(","), e.join(","))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: Coefficient,
    pub target: Target,
}

/// What the targets of a term list stand for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetKind {
    L,
    I,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TermList {
    pub kind: TargetKind,
    pub terms: Vec<Term>,
}

impl TermList {
    /// Drops terms whose `a_0` monomial vanishes for the given forms.
    pub fn prune(mut self, a0: &[C64]) -> Self {
        self.terms.retain(|t| !t.coeff.vanishes(a0));
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ coeff(s) · value(target)`, summed in list order.
    pub fn evaluate<F>(&self, s: C64, a0: &[C64], mut value: F) -> Result<C64>
    where
        F: FnMut(&Target) -> Result<C64>,
    {
        let mut acc = C64::new(0.0, 0.0);
        for t in &self.terms {
            if t.coeff.vanishes(a0) {
                continue;
            }
            acc += t.coeff.eval(s, a0)? * value(&t.target)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for TermList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            TargetKind::L => "L",
            TargetKind::I => "I",
        };
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}] {}", t.coeff, t.target.describe(name))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// index enumeration

/// Weak composition `n_1 + ... + n_{l+1} = n - l` fixing the cuspidal slots
/// `n'_j = n_1 + ... + n_j + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composition {
    pub parts: Vec<usize>,
}

impl Composition {
    pub fn l(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum::<usize>() + self.l()
    }

    /// `n'_1 < ... < n'_l` (1-based).
    pub fn cusp_slots(&self) -> Vec<usize> {
        let mut acc = 0;
        self.parts[..self.l()]
            .iter()
            .map(|&p| {
                acc += p + 1;
                acc
            })
            .collect()
    }

    /// Length of the trailing constant block, `n_{l+1}`.
    pub fn trailing(&self) -> usize {
        *self.parts.last().unwrap()
    }
}

/// All weak compositions of `n - l` into `l + 1` parts, lexicographically.
pub fn compositions(n: usize, l: usize) -> Vec<Composition> {
    fn rec(left: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if k == 1 {
            cur.push(left);
            out.push(Composition { parts: cur.clone() });
            cur.pop();
            return;
        }
        for x in 0..=left {
            cur.push(x);
            rec(left - x, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if l >= 1 && l <= n {
        rec(n - l, l + 1, &mut Vec::new(), &mut out);
    }
    out
}

/// Tuples `(j_2, ..., j_p)` with `0 <= j_r < β_r + j_{r+1}`, `j_{p+1} = 0`,
/// for `betas = (β_2, ..., β_p)`. Generated right to left.
pub fn j_tuples(betas: &[i64]) -> Vec<Vec<i64>> {
    fn rec(betas: &[i64], r: usize, next: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        // r indexes betas from the right
        if r == 0 {
            let mut t = cur.clone();
            t.reverse();
            out.push(t);
            return;
        }
        let bound = betas[r - 1] + next;
        for j in 0..bound {
            cur.push(j);
            rec(betas, r - 1, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(betas, betas.len(), 0, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// `β_2, ..., β_p` for a composition: `α_k` below the last cusp slot `p`
/// and `α_p + ... + α_n` at it. `alphas = (α_2, ..., α_n)`.
pub fn betas(comp: &Composition, alphas: &[i64]) -> Vec<i64> {
    let slots = comp.cusp_slots();
    let p = *slots.last().unwrap();
    let n = comp.n();
    let alpha = |k: usize| alphas[k - 2];
    (2..=p)
        .map(|k| if k < p { alpha(k) } else { (p..=n).map(alpha).sum() })
        .collect()
}

/// Every `(composition, j-tuple)` pair entering the expansion with `l`
/// cuspidal slots.
pub fn enumerate_indices(n: usize, l: usize, alphas: &[i64]) -> Vec<(Composition, Vec<i64>)> {
    let mut out = Vec::new();
    for comp in compositions(n, l) {
        for j in j_tuples(&betas(&comp, alphas)) {
            out.push((comp.clone(), j));
        }
    }
    out
}

/// `A = ∏ a_0` over the constant (non-cuspidal) slots and
/// `B = 1/(s_n (s_n + s_{n-1}) ... (s_n + ... + s_{n-m+1}))`, `m = n_{l+1}`.
pub fn coeff_a_b(comp: &Composition, a0: &[C64], s: &[C64]) -> Result<(C64, C64)> {
    let n = comp.n();
    let cusp = comp.cusp_slots();
    let a = (1..=n)
        .filter(|i| !cusp.contains(i))
        .fold(C64::new(1.0, 0.0), |acc, i| acc * a0[i - 1]);
    let mut b = C64::new(1.0, 0.0);
    let mut sum = C64::new(0.0, 0.0);
    for k in 0..comp.trailing() {
        sum += s[n - 1 - k];
        if sum.norm() < 1e-10 {
            return Err(Error::pole(format!("s{}+...+s{n} = 0", n - k)));
        }
        b /= sum;
    }
    Ok((a, b))
}

// ---------------------------------------------------------------------------
// expansions

fn alpha_sum(alphas: &[i64], from: usize, to: usize) -> i64 {
    // α_from + ... + α_to with alphas = (α_2, ...); empty when from > to
    (from..=to).map(|k| alphas[k - 2]).sum()
}

/// `I(f_{slots}; s + offset, α_2, ...)` as a combination of L-values.
fn thi_terms(word: &Target) -> Vec<Term> {
    let n = word.len();
    let alphas = &word.tail;
    let mut out = Vec::new();
    for l in 1..=n {
        for comp in compositions(n, l) {
            let cusp = comp.cusp_slots();
            let p = *cusp.last().unwrap();
            let consts: Vec<usize> = (1..=n)
                .filter(|i| !cusp.contains(i))
                .map(|i| word.slots[i - 1])
                .collect();
            // B: trailing block only involves α's
            let mut b = BigRational::one();
            let mut sum = 0i64;
            for k in 0..comp.trailing() {
                sum += alphas[n - 2 - k];
                b /= rat(sum);
            }
            let slots: Vec<usize> = cusp.iter().map(|&i| word.slots[i - 1]).collect();
            if p == 1 {
                let shift = alpha_sum(alphas, 2, n);
                let r = Poly::rising(word.offset + shift).scale(&(-b));
                out.push(Term {
                    coeff: Coefficient {
                        a0: consts,
                        ratfn: RatFn::poly(r),
                        gamma_power: 1,
                    },
                    target: Target::new(slots, word.offset + shift, vec![]),
                });
                continue;
            }
            let beta = betas(&comp, alphas);
            let bk = |k: usize| beta[k - 2];
            for j in j_tuples(&beta) {
                let jj = |k: usize| if k <= p { j[k - 2] } else { 0 };
                let mut r = b.clone();
                if p % 2 == 1 {
                    r = -r;
                }
                for k in 2..=p {
                    r *= binom(bk(k) + jj(k + 1) - 1, jj(k));
                    r *= gamma_int(bk(k) - jj(k) + jj(k + 1));
                }
                // exponents of L(f_{n'_1}, ..., f_{n'_l})
                let beta_sum = |from: usize, to: usize| -> i64 { (from..=to).map(bk).sum() };
                let first = beta_sum(2, cusp[0]) + jj(cusp[0] + 1);
                let mut tail = Vec::new();
                for i in 1..cusp.len() {
                    let (a, b2) = (cusp[i - 1] + 1, cusp[i]);
                    tail.push(beta_sum(a, b2) - jj(a) + jj(b2 + 1));
                }
                let poly = Poly::rising(word.offset + jj(2)).scale(&r);
                out.push(Term {
                    coeff: Coefficient {
                        a0: consts.clone(),
                        ratfn: RatFn::poly(poly),
                        gamma_power: 1,
                    },
                    target: Target::new(slots.clone(), word.offset + first, tail),
                });
            }
        }
    }
    out
}

fn merge(terms: Vec<Term>) -> Vec<Term> {
    let mut map: BTreeMap<(Target, Vec<usize>, i32), RatFn> = BTreeMap::new();
    let mut order = Vec::new();
    for t in terms {
        let mut a0 = t.coeff.a0.clone();
        a0.sort();
        let key = (t.target, a0, t.coeff.gamma_power);
        match map.get_mut(&key) {
            Some(r) => *r = r.add(&t.coeff.ratfn),
            None => {
                order.push(key.clone());
                map.insert(key, t.coeff.ratfn);
            }
        }
    }
    order
        .into_iter()
        .filter_map(|key| {
            let r = map.remove(&key).unwrap();
            (!r.is_zero()).then_some(Term {
                coeff: Coefficient {
                    a0: key.1,
                    ratfn: r,
                    gamma_power: key.2,
                },
                target: key.0,
            })
        })
        .collect()
}

fn check_alphas(n: usize, alphas: &[i64]) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("word length must be positive"));
    }
    if alphas.len() + 1 != n {
        return Err(Error::domain(format!(
            "a word of length {n} needs {} integer exponents after s, got {}",
            n - 1,
            alphas.len()
        )));
    }
    if let Some(a) = alphas.iter().find(|&&a| a < 1) {
        return Err(Error::domain(format!("exponents after s must be positive integers, got {a}")));
    }
    Ok(())
}

/// `I(f_1, ..., f_n; s, α_2, ..., α_n)` as a combination of L-values of
/// subwords, before dropping terms whose constant terms vanish.
pub fn thi_expand(n: usize, alphas: &[i64]) -> Result<TermList> {
    check_alphas(n, alphas)?;
    let word = Target::new((1..=n).collect(), 0, alphas.to_vec());
    Ok(TermList {
        kind: TargetKind::L,
        terms: merge(thi_terms(&word)),
    })
}

/// `L(f_1, ..., f_n; s, α_2, ..., α_n)` as a combination of iterated
/// integrals, by inverting the I-to-L expansion recursively.
pub fn ths_expand(n: usize, alphas: &[i64]) -> Result<TermList> {
    check_alphas(n, alphas)?;
    let word = Target::new((1..=n).collect(), 0, alphas.to_vec());
    let mut memo = BTreeMap::new();
    let terms = invert(&word, &mut memo);
    Ok(TermList {
        kind: TargetKind::I,
        terms,
    })
}

fn scale_term(t: &Term, c: &Coefficient) -> Term {
    let mut a0 = t.coeff.a0.clone();
    a0.extend(&c.a0);
    a0.sort();
    Term {
        coeff: Coefficient {
            a0,
            ratfn: t.coeff.ratfn.mul(&c.ratfn),
            gamma_power: t.coeff.gamma_power + c.gamma_power,
        },
        target: t.target.clone(),
    }
}

fn invert(target: &Target, memo: &mut BTreeMap<Target, Vec<Term>>) -> Vec<Term> {
    if let Some(v) = memo.get(target) {
        return v.clone();
    }
    let expansion = merge(thi_terms(target));
    let (lead, rest): (Vec<Term>, Vec<Term>) = expansion
        .into_iter()
        .partition(|t| t.target == *target && t.coeff.a0.is_empty());
    assert_eq!(lead.len(), 1, "leading term must be unique");
    let c0 = &lead[0].coeff;
    let inv = Coefficient {
        a0: Vec::new(),
        ratfn: c0.ratfn.inv(),
        gamma_power: -c0.gamma_power,
    };
    let mut out = vec![Term {
        coeff: inv.clone(),
        target: target.clone(),
    }];
    for t in &rest {
        let factor = Coefficient {
            a0: t.coeff.a0.clone(),
            ratfn: t.coeff.ratfn.mul(&inv.ratfn).neg(),
            gamma_power: t.coeff.gamma_power + inv.gamma_power,
        };
        for sub in invert(&t.target, memo) {
            out.push(scale_term(&sub, &factor));
        }
    }
    let out = merge(out);
    memo.insert(target.clone(), out.clone());
    out
}

/// Substitutes the I-to-L expansion into every integral of an I-term list.
pub fn compose_with_thi(list: &TermList) -> TermList {
    assert_eq!(list.kind, TargetKind::I);
    let mut out = Vec::new();
    for t in &list.terms {
        for sub in thi_terms(&t.target) {
            out.push(scale_term(&sub, &t.coeff));
        }
    }
    TermList {
        kind: TargetKind::L,
        terms: merge(out),
    }
}

// ---------------------------------------------------------------------------
// binomial transforms between F and F̃

/// Formal combination `Σ c · z^a · X(α_2, ..., α_n)` with `X` one of
/// `F_a^z` or `F̃_a^z`.
pub type Transform = BTreeMap<(i64, Vec<i64>), BigRational>;

/// Rewrites each `z^a F(α)` as a combination of `z^{a+j_2} F̃(...)`.
pub fn f_to_ftilde(input: &Transform) -> Transform {
    let mut out = Transform::new();
    for ((a, alphas), c) in input {
        for j in j_tuples(alphas) {
            let n = alphas.len();
            let jj = |r: usize| if r < n { j[r] } else { 0 };
            let mut coef = c.clone();
            let mut new = Vec::with_capacity(n);
            for r in 0..n {
                coef *= binom(alphas[r] + jj(r + 1) - 1, jj(r));
                new.push(alphas[r] - jj(r) + jj(r + 1));
            }
            *out.entry((a + jj(0), new)).or_insert_with(BigRational::zero) += coef;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// All tuples with `0 <= j_r < bounds[r]`, lexicographically.
fn box_tuples(bounds: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..b).map(move |j| {
                    let mut t = t.clone();
                    t.push(j);
                    t
                })
            })
            .collect();
    }
    out
}

/// Rewrites each `z^a F̃(α)` as a combination of `z^{a+j_2} F(...)`.
pub fn ftilde_to_f(input: &Transform) -> Transform {
    let mut out = Transform::new();
    for ((a, alphas), c) in input {
        let n = alphas.len();
        for j in box_tuples(alphas) {
            let jj = |r: usize| if r < n { j[r] } else { 0 };
            let mut coef = c.clone();
            let mut new = Vec::with_capacity(n);
            for r in 0..n {
                coef *= binom(alphas[r] - 1, jj(r));
                if jj(r) % 2 == 1 {
                    coef = -coef;
                }
                new.push(alphas[r] - jj(r) + jj(r + 1));
            }
            *out.entry((a + jj(0), new)).or_insert_with(BigRational::zero) += coef;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// The single-entry transform `1 · z^0 X(α)`.
pub fn transform_unit(alphas: &[i64]) -> Transform {
    let mut t = Transform::new();
    t.insert((0, alphas.to_vec()), BigRational::one());
    t
}

/// Exact check of `Π C(β_k + j_{k+1} - 1, j_k) Γ(β_k - j_k + j_{k+1}) Γ(s + j_2)
/// = Γ(s) C(s + j_2 - 1, j_2) Π Γ(β_k) Π_{k≥3} C(β_{k-1} + j_k - 1, j_k)` for
/// a positive integer `s`.
pub fn gamma_identity_holds(s: i64, betas: &[i64], j: &[i64]) -> bool {
    let p = betas.len() + 1;
    let bk = |k: usize| betas[k - 2];
    let jj = |k: usize| if k <= p { j[k - 2] } else { 0 };
    let mut lhs = gamma_int(s + jj(2));
    for k in 2..=p {
        lhs *= binom(bk(k) + jj(k + 1) - 1, jj(k)) * gamma_int(bk(k) - jj(k) + jj(k + 1));
    }
    let mut rhs = gamma_int(s) * binom(s + jj(2) - 1, jj(2));
    for k in 2..=p {
        rhs *= gamma_int(bk(k));
    }
    for k in 3..=p {
        rhs *= binom(bk(k - 1) + jj(k) - 1, jj(k));
    }
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn composition_examples() {
        let c = compositions(3, 1);
        let parts: Vec<Vec<usize>> = c.iter().map(|c| c.parts.clone()).collect();
        assert_eq!(parts, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(c[1].cusp_slots(), vec![2]);
        assert_eq!(compositions(3, 3)[0].cusp_slots(), vec![1, 2, 3]);
    }

    #[test]
    fn j_tuple_examples() {
        assert_eq!(j_tuples(&[2]), vec![vec![0], vec![1]]);
        assert_eq!(j_tuples(&[1, 2]), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(j_tuples(&[]), vec![Vec::<i64>::new()]);
    }

    #[test]
    fn j_tuples_match_brute_force() {
        let betas = [2, 1, 3];
        let mut brute = Vec::new();
        for a in 0..10 {
            for b in 0..10 {
                for c in 0..10 {
                    if c < 3 && b < 1 + c && a < 2 + b {
                        brute.push(vec![a, b, c]);
                    }
                }
            }
        }
        assert_eq!(j_tuples(&betas), brute);
    }

    #[test]
    fn a_b_examples() {
        let one = C64::new(1.0, 0.0);
        let comp = Composition { parts: vec![0, 2] };
        let s = [C64::new(2.0, 0.0), C64::new(3.0, 0.0), C64::new(5.0, 0.0)];
        let (a, b) = coeff_a_b(&comp, &[one, one, one], &s).unwrap();
        assert_eq!(a, one);
        assert!((b - 1.0 / (5.0 * 8.0)).norm() < 1e-15);
        let comp = Composition { parts: vec![1, 1, 0] };
        let (_, b) = coeff_a_b(&comp, &[one, one, one], &s).unwrap();
        assert_eq!(b, one);
        let zero = C64::new(0.0, 0.0);
        let (a, _) = coeff_a_b(&Composition { parts: vec![1, 0] }, &[zero, one], &s[..2]).unwrap();
        assert_eq!(a, zero);
    }

    #[test]
    fn poly_gcd_and_ratfn_reduction() {
        let p = Poly::linear(0).mul(&Poly::linear(1));
        let q = Poly::linear(1).mul(&Poly::linear(2));
        assert_eq!(p.gcd(&q), Poly::linear(1));
        let f = RatFn::new(p, q);
        assert_eq!(f.num(), &Poly::linear(0));
        assert_eq!(f.den(), &Poly::linear(2));
        let g = f.add(&f.neg());
        assert!(g.is_zero());
        assert_eq!(f.to_string(), "s/(s + 2)");
    }

    #[test]
    fn thi_length_one() {
        let t = thi_expand(1, &[]).unwrap();
        assert_eq!(t.terms.len(), 1);
        assert_eq!(t.terms[0].coeff.ratfn, RatFn::constant(r(-1, 1)));
        assert_eq!(t.terms[0].coeff.gamma_power, 1);
        assert_eq!(t.terms[0].target, Target::new(vec![1], 0, vec![]));
    }

    #[test]
    fn thi_five_term_example() {
        let t = thi_expand(2, &[2]).unwrap();
        // (rational, Γ shift, a0 slots, target)
        let expect: Vec<(BigRational, i64, Vec<usize>, Target)> = vec![
            (r(1, 1), 1, vec![], Target::new(vec![1, 2], 1, vec![1])),
            (r(1, 1), 0, vec![], Target::new(vec![1, 2], 0, vec![2])),
            (r(-1, 2), 2, vec![2], Target::new(vec![1], 2, vec![])),
            (r(1, 1), 1, vec![1], Target::new(vec![2], 2, vec![])),
            (r(1, 1), 0, vec![1], Target::new(vec![2], 2, vec![])),
        ];
        // merge the two f2 terms the same way the expander does
        let mut want = Vec::new();
        for (c, shift, a0, target) in expect {
            want.push(Term {
                coeff: Coefficient {
                    a0,
                    ratfn: RatFn::poly(Poly::rising(shift).scale(&c)),
                    gamma_power: 1,
                },
                target,
            });
        }
        let want = merge(want);
        assert_eq!(t.terms.len(), want.len());
        for w in &want {
            assert!(t.terms.contains(w), "missing {}", w.target.describe("L"));
        }
        // unmerged there are exactly five terms
        let raw = thi_terms(&Target::new(vec![1, 2], 0, vec![2]));
        assert_eq!(raw.len(), 5);
    }

    #[test]
    fn thi_cusp_forms_keep_only_full_words() {
        let zero = C64::new(0.0, 0.0);
        let t = thi_expand(3, &[2, 1]).unwrap().prune(&[zero, zero, zero]);
        assert!(t.terms.iter().all(|t| t.target.len() == 3));
        assert_eq!(t.len(), j_tuples(&[2, 1]).len());
    }

    #[test]
    fn ths_printed_example() {
        let t = ths_expand(2, &[2]).unwrap();
        // Γ(s) L(s,2) = I(s,2) - I(s+1,1) + a0[2]/2 I(f1;s+2) + a0[1]/(s(s+1)) I(f2;s+2)
        let find = |target: Target, a0: Vec<usize>| {
            t.terms
                .iter()
                .find(|x| x.target == target && x.coeff.a0 == a0)
                .map(|x| (x.coeff.ratfn.clone(), x.coeff.gamma_power))
        };
        let one = RatFn::constant(r(1, 1));
        assert_eq!(find(Target::new(vec![1, 2], 0, vec![2]), vec![]), Some((one.clone(), -1)));
        assert_eq!(find(Target::new(vec![1, 2], 1, vec![1]), vec![]), Some((one.neg(), -1)));
        assert_eq!(find(Target::new(vec![1], 2, vec![]), vec![2]), Some((RatFn::constant(r(1, 2)), -1)));
        assert_eq!(
            find(Target::new(vec![2], 2, vec![]), vec![1]),
            Some((RatFn::new(Poly::one(), Poly::rising(2)), -1))
        );
        assert_eq!(t.len(), 4);
    }

    #[test]
    fn ths_then_thi_is_identity() {
        for (n, alphas) in [(1, vec![]), (2, vec![2]), (2, vec![3]), (3, vec![1, 2]), (3, vec![2, 2])] {
            let back = compose_with_thi(&ths_expand(n, &alphas).unwrap());
            assert_eq!(back.len(), 1, "n = {n}, α = {alphas:?}: {back}");
            let t = &back.terms[0];
            assert_eq!(t.target, Target::new((1..=n).collect(), 0, alphas.clone()));
            assert_eq!(t.coeff.ratfn, RatFn::constant(r(1, 1)));
            assert_eq!(t.coeff.gamma_power, 0);
            assert!(t.coeff.a0.is_empty());
        }
    }

    #[test]
    fn cuspidal_ths_has_only_full_length_integrals() {
        let zero = C64::new(0.0, 0.0);
        let t = ths_expand(2, &[3]).unwrap().prune(&[zero, zero]);
        assert!(t.terms.iter().all(|x| x.target.len() == 2));
        assert!(!t.is_empty());
    }

    #[test]
    fn transform_involution_examples() {
        for alphas in [vec![2], vec![1, 3], vec![3, 2, 2]] {
            let unit = transform_unit(&alphas);
            assert_eq!(ftilde_to_f(&f_to_ftilde(&unit)), unit);
            assert_eq!(f_to_ftilde(&ftilde_to_f(&unit)), unit);
        }
    }

    #[test]
    fn arity_errors() {
        assert!(thi_expand(2, &[]).is_err());
        assert!(ths_expand(2, &[0]).is_err());
        assert!(thi_expand(0, &[]).is_err());
    }

    proptest! {
        #[test]
        fn gamma_identity(s in 1i64..8, betas in proptest::collection::vec(1i64..5, 1..4), seed in any::<u64>()) {
            let tuples = j_tuples(&betas);
            let j = &tuples[(seed % tuples.len() as u64) as usize];
            prop_assert!(gamma_identity_holds(s, &betas, j));
        }

        #[test]
        fn transform_round_trip(alphas in proptest::collection::vec(1i64..4, 1..4)) {
            let unit = transform_unit(&alphas);
            prop_assert_eq!(ftilde_to_f(&f_to_ftilde(&unit)), unit);
        }
    }
}
