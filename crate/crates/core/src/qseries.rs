//! Exact truncated q-expansions.
//!
//! A [`QSeries`] stores the coefficients of `q^0 .. q^M` as exact rationals
//! together with an optional fractional prefactor `q^{p/24}`. The prefactor
//! lattice of 1/24 is enough for every eta quotient built here.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Truncated power series `q^{prefactor_num/24} * (c_0 + c_1 q + ... + c_M q^M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
    prefactor_num: i64,
}

impl QSeries {
    pub fn new(coeffs: Vec<Rational>, prefactor_num: i64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Series("a series needs at least one coefficient".into()));
        }
        Ok(QSeries {
            coeffs,
            prefactor_num,
        })
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        assert!(!coeffs.is_empty());
        QSeries {
            coeffs: coeffs.iter().map(|&c| rat(c)).collect(),
            prefactor_num: 0,
        }
    }

    pub fn zero(order: usize) -> Self {
        QSeries {
            coeffs: vec![Rational::zero(); order + 1],
            prefactor_num: 0,
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c q^power`, truncated at `order`.
    pub fn monomial(c: Rational, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn prefactor_num(&self) -> i64 {
        self.prefactor_num
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        QSeries {
            coeffs: self.coeffs[..=order].to_vec(),
            prefactor_num: self.prefactor_num,
        }
    }

    /// Index of the lowest nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Coefficients as f64 (lossy), requiring an integral q-exponent.
    pub fn to_f64(&self) -> Result<Vec<f64>> {
        let s = self.normalized()?;
        if s.prefactor_num != 0 {
            return Err(Error::Series(
                "series carries a fractional q-power and cannot be evaluated in q".into(),
            ));
        }
        Ok(s.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect())
    }

    /// Absorbs a prefactor that is a whole power of q into the coefficients.
    ///
    /// A positive shift extends the known order; a negative shift needs the
    /// corresponding leading coefficients to vanish.
    pub fn normalized(&self) -> Result<Self> {
        if self.prefactor_num % 24 != 0 {
            return Ok(self.clone());
        }
        let shift = self.prefactor_num / 24;
        if shift == 0 {
            return Ok(self.clone());
        }
        if shift > 0 {
            let shift = shift as usize;
            let mut coeffs = vec![Rational::zero(); shift];
            coeffs.extend(self.coeffs.iter().cloned());
            return Ok(QSeries {
                coeffs,
                prefactor_num: 0,
            });
        }
        let shift = (-shift) as usize;
        if self.coeffs.len() <= shift || self.coeffs[..shift].iter().any(|c| !c.is_zero()) {
            return Err(Error::Series(format!(
                "cannot absorb q^-{shift}: series has a pole at q = 0"
            )));
        }
        Ok(QSeries {
            coeffs: self.coeffs[shift..].to_vec(),
            prefactor_num: 0,
        })
    }

    fn aligned(&self, rhs: &Self) -> Result<(Self, Self)> {
        if self.prefactor_num == rhs.prefactor_num {
            return Ok((self.clone(), rhs.clone()));
        }
        if (self.prefactor_num - rhs.prefactor_num) % 24 != 0 {
            return Err(Error::Series(format!(
                "cannot add series with q-prefactors {}/24 and {}/24",
                self.prefactor_num, rhs.prefactor_num
            )));
        }
        // bring both to the smaller prefactor
        let base = self.prefactor_num.min(rhs.prefactor_num);
        let lift = |s: &Self| -> Self {
            let shift = ((s.prefactor_num - base) / 24) as usize;
            let mut coeffs = vec![Rational::zero(); shift];
            coeffs.extend(s.coeffs.iter().cloned());
            QSeries {
                coeffs,
                prefactor_num: base,
            }
        };
        Ok((lift(self), lift(rhs)))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        let (a, b) = self.aligned(rhs)?;
        let order = a.order().min(b.order());
        let coeffs = (0..=order).map(|i| &a.coeffs[i] + &b.coeffs[i]).collect();
        Ok(QSeries {
            coeffs,
            prefactor_num: a.prefactor_num,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            prefactor_num: self.prefactor_num,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        QSeries {
            coeffs,
            prefactor_num: self.prefactor_num + rhs.prefactor_num,
        }
    }

    /// Exact division. The divisor's lowest nonzero coefficient is factored
    /// out together with its q-power; the quotient loses that many orders.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        let v = rhs
            .valuation()
            .ok_or_else(|| Error::Series("division by a series with no nonzero coefficient".into()))?;
        let order = self.order().min(rhs.order());
        if v > order {
            return Err(Error::Series("divisor vanishes to the working order".into()));
        }
        if let Some(va) = self.truncate(order).valuation() {
            if va < v {
                return Err(Error::Series(format!(
                    "quotient has a pole of order {} at q = 0",
                    v - va
                )));
            }
        }
        let out_order = order - v;
        let num: Vec<Rational> = (0..=out_order).map(|i| self.coeff(i + v)).collect();
        let den: Vec<Rational> = (0..=out_order).map(|i| rhs.coeff(i + v)).collect();
        let lead_inv = den[0].recip();
        let mut quot = vec![Rational::zero(); out_order + 1];
        for k in 0..=out_order {
            let mut acc = num[k].clone();
            for j in 1..=k {
                if !den[j].is_zero() && !quot[k - j].is_zero() {
                    acc -= &den[j] * &quot[k - j];
                }
            }
            quot[k] = acc * &lead_inv;
        }
        Ok(QSeries {
            coeffs: quot,
            prefactor_num: self.prefactor_num - rhs.prefactor_num,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        QSeries::one(self.order()).div(self)
    }

    pub fn pow(&self, exp: i64) -> Result<Self> {
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = QSeries::one(base.order());
        let mut sq = base.clone();
        sq.prefactor_num = base.prefactor_num;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc.prefactor_num = self.prefactor_num * exp;
        Ok(acc)
    }

    /// `q d/dq` applied to the mantissa (the prefactor is left alone).
    pub fn theta_derivative(&self) -> Self {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
            prefactor_num: self.prefactor_num,
        }
    }

    /// `(1/2πi) d/dz log s` as a q-series: `p/24 + q d/dq log(mantissa)`.
    pub fn logderiv(&self) -> Result<Self> {
        let mantissa = QSeries {
            coeffs: self.coeffs.clone(),
            prefactor_num: 0,
        };
        let body = mantissa.theta_derivative().div(&mantissa)?;
        let shift = QSeries::constant(
            Rational::new(BigInt::from(self.prefactor_num), BigInt::from(24)),
            body.order(),
        );
        body.add(&shift)
    }

    /// Substitution `q -> q^l`, keeping the truncation order.
    pub fn substitute(&self, l: usize) -> Self {
        assert!(l >= 1);
        let mut out = QSeries::zero(self.order());
        for (i, c) in self.coeffs.iter().enumerate() {
            if i * l > self.order() {
                break;
            }
            out.coeffs[i * l] = c.clone();
        }
        out.prefactor_num = self.prefactor_num * l as i64;
        out
    }

    /// Equality after normalisation, compared up to the common order.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        let a = self.normalized()?;
        let b = other.normalized()?;
        if a.prefactor_num != b.prefactor_num {
            return Ok(false);
        }
        let order = a.order().min(b.order());
        Ok(a.coeffs[..=order] == b.coeffs[..=order])
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prefactor_num != 0 {
            write!(f, "q^({}/24) * (", self.prefactor_num)?;
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "q")?,
                1 => write!(f, "{a}*q")?,
                _ if a.is_one() => write!(f, "q^{i}")?,
                _ => write!(f, "{a}*q^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)?;
        if self.prefactor_num != 0 {
            write!(f, ")")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// arithmetic functions

/// Bernoulli numbers with `B_1 = -1/2`, via the Akiyama–Tanigawa transform.
pub fn bernoulli(k: i64) -> Result<Rational> {
    if k < 0 {
        return Err(Error::domain(format!("Bernoulli index must be >= 0, got {k}")));
    }
    if k == 1 {
        return Ok(Rational::new(BigInt::from(-1), BigInt::from(2)));
    }
    if k % 2 == 1 {
        return Ok(Rational::zero());
    }
    let k = k as usize;
    let mut a: Vec<Rational> = Vec::with_capacity(k + 1);
    for m in 0..=k {
        a.push(Rational::new(BigInt::one(), BigInt::from(m as i64 + 1)));
        for j in (1..=m).rev() {
            a[j - 1] = rat(j as i64) * (&a[j - 1] - &a[j]);
        }
    }
    Ok(a[0].clone())
}

/// Divisor power sum `σ_k(n) = Σ_{d | n} d^k`.
pub fn sigma(k: u32, n: i64) -> Result<BigInt> {
    if n <= 0 {
        return Err(Error::domain(format!("σ_k(n) needs n >= 1, got {n}")));
    }
    let mut total = BigInt::zero();
    let mut d = 1i64;
    while d * d <= n {
        if n % d == 0 {
            total += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                total += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    Ok(total)
}

fn check_even_weight(k: i64) -> Result<()> {
    if k < 2 || k.is_odd() {
        return Err(Error::domain(format!(
            "Eisenstein series need an even weight >= 2, got {k}"
        )));
    }
    Ok(())
}

/// `E_k(lz) = 1 - (2k/B_k) Σ σ_{k-1}(n) q^{ln}` to order `order`.
pub fn eisenstein_series(k: i64, l: usize, order: usize) -> Result<QSeries> {
    check_even_weight(k)?;
    if l == 0 {
        return Err(Error::domain("level multiplier l must be >= 1"));
    }
    let factor = -rat(2 * k) / bernoulli(k)?;
    let mut s = QSeries::one(order);
    let mut n = 1usize;
    while n * l <= order {
        s.coeffs[n * l] = &factor * Rational::from_integer(sigma((k - 1) as u32, n as i64)?);
        n += 1;
    }
    Ok(s)
}

/// `η(lz)`: prefactor `l/24`, mantissa `Π (1 - q^{ln})`.
pub fn eta_series(l: usize, order: usize) -> Result<QSeries> {
    if l == 0 {
        return Err(Error::domain("eta(lz) needs l >= 1"));
    }
    // pentagonal number theorem gives the mantissa directly
    let mut s = QSeries::zero(order);
    s.coeffs[0] = Rational::one();
    let mut j: i64 = 1;
    loop {
        let p1 = (j * (3 * j - 1) / 2) as usize * l;
        let p2 = (j * (3 * j + 1) / 2) as usize * l;
        if p1 > order {
            break;
        }
        let sign = if j % 2 == 0 { rat(1) } else { rat(-1) };
        s.coeffs[p1] += sign.clone();
        if p2 <= order {
            s.coeffs[p2] += sign;
        }
        j += 1;
    }
    s.prefactor_num = l as i64;
    Ok(s)
}

/// `θ(z) = Σ_{n ∈ Z} q^{n²}`, including every `n` with `n² <= order`.
pub fn theta_series(order: usize) -> QSeries {
    let mut s = QSeries::zero(order);
    s.coeffs[0] = Rational::one();
    let mut n = 1usize;
    while n * n <= order {
        s.coeffs[n * n] = rat(2);
        n += 1;
    }
    s
}

/// Names accepted by [`builtin_form`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinSeries {
    /// `F = -(E_2(z) - 3E_2(2z) + 2E_2(4z))/24`
    F,
    /// `G = θ⁴`
    G,
    Theta,
    Theta4,
    /// `Δ = η²⁴`
    Delta,
    /// Level-one Eisenstein series `E_k` normalised with constant term 1.
    Eisenstein(i64),
    /// `λ = 16F/G`
    Lambda,
}

impl BuiltinSeries {
    pub fn parse(name: &str) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        Ok(match lower.as_str() {
            "f" => BuiltinSeries::F,
            "g" => BuiltinSeries::G,
            "theta" => BuiltinSeries::Theta,
            "theta4" => BuiltinSeries::Theta4,
            "delta" => BuiltinSeries::Delta,
            "lambda" => BuiltinSeries::Lambda,
            _ => {
                if let Some(k) = lower.strip_prefix('e') {
                    let k: i64 = k
                        .parse()
                        .map_err(|_| Error::Parse(format!("unknown series '{name}'")))?;
                    check_even_weight(k)?;
                    BuiltinSeries::Eisenstein(k)
                } else {
                    return Err(Error::Parse(format!("unknown series '{name}'")));
                }
            }
        })
    }
}

/// The named q-expansion to order `order`.
pub fn builtin_form(which: BuiltinSeries, order: usize) -> Result<QSeries> {
    match which {
        BuiltinSeries::F => {
            let e1 = eisenstein_series(2, 1, order)?;
            let e2 = eisenstein_series(2, 2, order)?;
            let e4 = eisenstein_series(2, 4, order)?;
            let comb = e1.sub(&e2.scale(&rat(3)))?.add(&e4.scale(&rat(2)))?;
            Ok(comb.scale(&Rational::new(BigInt::from(-1), BigInt::from(24))))
        }
        BuiltinSeries::G => theta_series(order).pow(4),
        BuiltinSeries::Theta => Ok(theta_series(order)),
        BuiltinSeries::Theta4 => theta_series(order).pow(4),
        BuiltinSeries::Delta => eta_series(1, order)?.pow(24)?.normalized().map(|s| s.truncate(order)),
        BuiltinSeries::Eisenstein(k) => eisenstein_series(k, 1, order),
        BuiltinSeries::Lambda => {
            let f = builtin_form(BuiltinSeries::F, order)?;
            let g = builtin_form(BuiltinSeries::G, order)?;
            Ok(f.scale(&rat(16)).div(&g)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn bernoulli_by_recurrence(k: usize) -> Vec<Rational> {
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0
        let mut b = vec![Rational::one()];
        for m in 1..=k {
            let mut binom = BigInt::one();
            let mut acc = Rational::zero();
            for (j, bj) in b.iter().enumerate() {
                acc += Rational::from_integer(binom.clone()) * bj;
                binom = binom * BigInt::from((m + 1 - j) as i64) / BigInt::from(j as i64 + 1);
            }
            b.push(-acc / Rational::from_integer(BigInt::from(m as i64 + 1)));
        }
        b
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0).unwrap(), r(1, 1));
        assert_eq!(bernoulli(2).unwrap(), r(1, 6));
        assert_eq!(bernoulli(12).unwrap(), r(-691, 2730));
        assert!(bernoulli(7).unwrap().is_zero());
        assert!(bernoulli(-2).is_err());
        let oracle = bernoulli_by_recurrence(30);
        for k in 0..=30 {
            assert_eq!(bernoulli(k as i64).unwrap(), oracle[k], "B_{k}");
        }
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(1, 1).unwrap(), BigInt::from(1));
        assert_eq!(sigma(1, 3).unwrap(), BigInt::from(4));
        assert_eq!(sigma(3, 2).unwrap(), BigInt::from(9));
        assert_eq!(sigma(0, 12).unwrap(), BigInt::from(6));
        assert!(sigma(1, 0).is_err());
    }

    #[test]
    fn basic_arithmetic() {
        let a = QSeries::from_integers(&[1, 1, 0, 0, 0]);
        let b = QSeries::from_integers(&[1, -1, 0, 0, 0]);
        assert_eq!(a.mul(&b), QSeries::from_integers(&[1, 0, -1, 0, 0]));
        assert_eq!(b.pow(-1).unwrap(), QSeries::from_integers(&[1, 1, 1, 1, 1]));
        let c = QSeries::from_integers(&[0, 1, 1, 0]);
        let q = QSeries::from_integers(&[0, 1, 0, 0]);
        assert_eq!(c.div(&q).unwrap(), QSeries::from_integers(&[1, 1, 0]));
        assert!(q.div(&QSeries::zero(3)).is_err());
        assert!(QSeries::one(3).div(&q).is_err());
    }

    #[test]
    fn order_mismatch_truncates() {
        let a = QSeries::from_integers(&[1, 2, 3, 4, 5]);
        let b = QSeries::from_integers(&[1, 1]);
        assert_eq!(a.add(&b).unwrap().order(), 1);
        assert_eq!(a.mul(&b).order(), 1);
    }

    #[test]
    fn eisenstein_examples() {
        assert_eq!(
            eisenstein_series(2, 1, 3).unwrap(),
            QSeries::from_integers(&[1, -24, -72, -96])
        );
        assert_eq!(eisenstein_series(4, 1, 1).unwrap(), QSeries::from_integers(&[1, 240]));
        assert_eq!(
            eisenstein_series(2, 2, 4).unwrap(),
            QSeries::from_integers(&[1, 0, -24, 0, -72])
        );
        assert!(eisenstein_series(3, 1, 4).is_err());
    }

    #[test]
    fn eta_against_direct_product() {
        let eta = eta_series(1, 40).unwrap();
        let mut prod = QSeries::one(40);
        for n in 1..=40 {
            let mut factor = QSeries::one(40);
            factor.coeffs[n] = rat(-1);
            prod = prod.mul(&factor);
        }
        assert_eq!(eta.coeffs(), prod.coeffs());
        assert_eq!(eta.prefactor_num(), 1);
        assert_eq!(&eta.coeffs()[..6], QSeries::from_integers(&[1, -1, -1, 0, 0, 1]).coeffs());
        assert_eq!(eta_series(2, 5).unwrap().prefactor_num(), 2);
    }

    #[test]
    fn builtin_examples() {
        let f = builtin_form(BuiltinSeries::F, 5).unwrap();
        assert_eq!(f, QSeries::from_integers(&[0, 1, 0, 4, 0, 6]));
        let g = builtin_form(BuiltinSeries::G, 3).unwrap();
        assert_eq!(g, QSeries::from_integers(&[1, 8, 24, 32]));
        let d = builtin_form(BuiltinSeries::Delta, 3).unwrap();
        assert_eq!(d, QSeries::from_integers(&[0, 1, -24, 252]));
        assert!(BuiltinSeries::parse("nope").is_err());
        assert_eq!(BuiltinSeries::parse("E6").unwrap(), BuiltinSeries::Eisenstein(6));
    }

    #[test]
    fn theta4_by_brute_force_convolution() {
        let order = 30usize;
        let mut counts = vec![0i64; order + 1];
        let r = 6i64;
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    for d in -r..=r {
                        let n = (a * a + b * b + c * c + d * d) as usize;
                        if n <= order {
                            counts[n] += 1;
                        }
                    }
                }
            }
        }
        let g = builtin_form(BuiltinSeries::G, order).unwrap();
        assert_eq!(g, QSeries::from_integers(&counts));
    }

    #[test]
    fn f_is_odd_sigma() {
        let f = builtin_form(BuiltinSeries::F, 60).unwrap();
        for n in 1..=60 {
            let expected = if n % 2 == 0 {
                Rational::zero()
            } else {
                Rational::from_integer(sigma(1, n as i64).unwrap())
            };
            assert_eq!(f.coeff(n), expected, "n = {n}");
        }
    }

    #[test]
    fn logderiv_examples() {
        let eta = eta_series(1, 30).unwrap();
        let e2 = eisenstein_series(2, 1, 30).unwrap();
        assert_eq!(eta.logderiv().unwrap(), e2.scale(&r(1, 24)));
        let s = QSeries::from_integers(&[1, 1, 0, 0, 0]);
        assert_eq!(s.logderiv().unwrap(), QSeries::from_integers(&[0, 1, -1, 1, -1]));
        assert!(QSeries::zero(4).logderiv().is_err());
    }

    #[test]
    fn fractional_prefactor_blocks_evaluation() {
        assert!(eta_series(1, 5).unwrap().to_f64().is_err());
        let d = eta_series(1, 10).unwrap().pow(24).unwrap();
        assert_eq!(d.to_f64().unwrap()[..3], [0.0, 1.0, -24.0]);
    }

    #[test]
    fn display_is_readable() {
        let s = QSeries::from_integers(&[1, -24, 0, 3]);
        assert_eq!(s.to_string(), "1 - 24*q + 3*q^3 + O(q^4)");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_series(len: usize) -> impl Strategy<Value = QSeries> {
            proptest::collection::vec(-5i64..=5, len).prop_map(|v| QSeries::from_integers(&v))
        }

        proptest! {
            #[test]
            fn mul_div_round_trip(a in small_series(12), mut b in proptest::collection::vec(-5i64..=5, 12), lead in 1i64..4) {
                b[0] = lead;
                let b = QSeries::from_integers(&b);
                let back = a.mul(&b).div(&b).unwrap();
                prop_assert_eq!(back, a.truncate(11));
            }

            #[test]
            fn pow_adds_exponents(mut a in proptest::collection::vec(-3i64..=3, 10), e1 in -3i64..4, e2 in -3i64..4) {
                a[0] = 1;
                let s = QSeries::from_integers(&a);
                let lhs = s.pow(e1).unwrap().mul(&s.pow(e2).unwrap());
                prop_assert_eq!(lhs, s.pow(e1 + e2).unwrap());
            }
        }
    }
}
