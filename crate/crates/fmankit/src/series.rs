//! Truncated power series in `(t2, t3)` with rational coefficients.
//!
//! A [`Series2`] stores the coefficients of `sum c_ij * t2^i * t3^j` for
//! `i + j < D` in a sparse map; `D` is the total-degree truncation.
//!
//! Invariants:
//! - no stored zero coefficients,
//! - every stored exponent pair satisfies `i + j < D`,
//! - binary operations combine at the minimum of the two truncations.
//!
//! [`ExtSeries`] adjoins a k-th root `u` of `t2` (`u^k = t2`, `k` in 1..=3)
//! and is used for branch data with fractional `t2`-exponents.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rat::{format_rat_signed, rint, Rat};
use crate::{Error, Result};

/// Which of the two series variables an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    T2,
    T3,
}

/// Sparse truncated power series in `t2, t3` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series2 {
    truncation: u32,
    coeffs: BTreeMap<(u32, u32), Rat>,
}

impl Series2 {
    /// The zero series at truncation `d`.
    pub fn zero(d: u32) -> Self {
        Series2 {
            truncation: d,
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant series `1` at truncation `d`.
    pub fn one(d: u32) -> Self {
        Series2::constant(Rat::one(), d)
    }

    /// A constant series.
    pub fn constant(c: Rat, d: u32) -> Self {
        let mut s = Series2::zero(d);
        s.set_coeff(0, 0, c);
        s
    }

    /// `c * t2^i * t3^j`; exponents outside the truncation are dropped.
    pub fn monomial(i: u32, j: u32, c: Rat, d: u32) -> Self {
        let mut s = Series2::zero(d);
        s.set_coeff(i, j, c);
        s
    }

    /// Builds from `(i, j, coefficient)` entries, summing duplicates.
    pub fn from_entries(entries: impl IntoIterator<Item = (u32, u32, Rat)>, d: u32) -> Self {
        let mut s = Series2::zero(d);
        for (i, j, c) in entries {
            let cur = s.coeff(i, j) + c;
            s.set_coeff(i, j, cur);
        }
        s
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Stored (nonzero) terms in lexicographic `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rat)> {
        self.coeffs.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    fn set_coeff(&mut self, i: u32, j: u32, c: Rat) {
        if i + j >= self.truncation || c.is_zero() {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Constant term `c_00`.
    pub fn constant_term(&self) -> Rat {
        self.coeff(0, 0)
    }

    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    /// True when every stored monomial is divisible by `t2^i0 * t3^j0`.
    pub fn divisible_by_monomial(&self, i0: u32, j0: u32) -> bool {
        self.coeffs.keys().all(|&(i, j)| i >= i0 && j >= j0)
    }

    /// Drops retained terms to a lower truncation.
    pub fn truncate(&self, d: u32) -> Self {
        let mut s = Series2::zero(d.min(self.truncation));
        for (&(i, j), c) in &self.coeffs {
            s.set_coeff(i, j, c.clone());
        }
        s
    }

    /// Reinterprets at a higher truncation. This asserts knowledge the data
    /// may not have; it is only used for exact polynomial inputs.
    pub fn extend_truncation(&self, d: u32) -> Self {
        let mut s = self.clone();
        if d > s.truncation {
            s.truncation = d;
        }
        s
    }

    pub fn neg(&self) -> Self {
        let mut s = Series2::zero(self.truncation);
        for (&(i, j), c) in &self.coeffs {
            s.coeffs.insert((i, j), -c.clone());
        }
        s
    }

    /// Coefficientwise sum at the minimum truncation.
    pub fn add(&self, other: &Self) -> Self {
        let d = self.truncation.min(other.truncation);
        let mut s = self.truncate(d);
        for (&(i, j), c) in &other.coeffs {
            let cur = s.coeff(i, j) + c;
            s.set_coeff(i, j, cur);
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Series2::zero(self.truncation);
        }
        let mut s = Series2::zero(self.truncation);
        for (&(i, j), v) in &self.coeffs {
            s.coeffs.insert((i, j), v * c);
        }
        s
    }

    /// Cauchy product at the minimum truncation.
    pub fn mul(&self, other: &Self) -> Self {
        let d = self.truncation.min(other.truncation);
        let mut s = Series2::zero(d);
        for (&(i1, j1), c1) in &self.coeffs {
            if i1 + j1 >= d {
                continue;
            }
            for (&(i2, j2), c2) in &other.coeffs {
                let (i, j) = (i1 + i2, j1 + j2);
                if i + j >= d {
                    continue;
                }
                let cur = s.coeff(i, j) + c1 * c2;
                s.set_coeff(i, j, cur);
            }
        }
        s
    }

    /// `self^n` by repeated multiplication.
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Series2::one(self.truncation);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative; the result is known one degree less far.
    pub fn deriv(&self, var: Var) -> Self {
        let d = self.truncation.saturating_sub(1);
        let mut s = Series2::zero(d);
        for (&(i, j), c) in &self.coeffs {
            match var {
                Var::T2 if i > 0 => {
                    let cur = s.coeff(i - 1, j) + c * rint(i as i64);
                    s.set_coeff(i - 1, j, cur);
                }
                Var::T3 if j > 0 => {
                    let cur = s.coeff(i, j - 1) + c * rint(j as i64);
                    s.set_coeff(i, j - 1, cur);
                }
                _ => {}
            }
        }
        s
    }

    /// Formal antiderivative with zero constant of integration; the result
    /// is known one degree further.
    pub fn integrate(&self, var: Var) -> Self {
        let mut s = Series2::zero(self.truncation + 1);
        for (&(i, j), c) in &self.coeffs {
            match var {
                Var::T2 => s.set_coeff(i + 1, j, c / rint((i + 1) as i64)),
                Var::T3 => s.set_coeff(i, j + 1, c / rint((j + 1) as i64)),
            }
        }
        s
    }

    /// Multiplicative inverse up to truncation. Errors when the constant
    /// term vanishes.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NotAUnit);
        }
        let c0_inv = Rat::one() / c0.clone();
        // a = c0(1 + m) with m of positive order; iterate b <- c0^-1 (1 - m b).
        let mut tail = self.clone();
        tail.set_coeff(0, 0, Rat::zero());
        let tail = tail.scale(&c0_inv);
        let mut b = Series2::constant(c0_inv.clone(), self.truncation);
        for _ in 0..self.truncation {
            let mb = tail.mul(&b);
            b = Series2::constant(c0_inv.clone(), self.truncation).sub(&mb);
        }
        Ok(b)
    }

    /// Exact value of the retained polynomial at `(t2, t3)`.
    pub fn eval(&self, t2: &Rat, t3: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (&(i, j), c) in &self.coeffs {
            let mut term = c.clone();
            for _ in 0..i {
                term *= t2;
            }
            for _ in 0..j {
                term *= t3;
            }
            acc += term;
        }
        acc
    }

    /// Restriction to `t3 = 0` (keeps only `t3`-free terms).
    pub fn restrict_t3_zero(&self) -> Self {
        let mut s = Series2::zero(self.truncation);
        for (&(i, j), c) in &self.coeffs {
            if j == 0 {
                s.coeffs.insert((i, 0), c.clone());
            }
        }
        s
    }

    /// Coefficient of `t3^k` as a series in `t2` alone.
    pub fn t3_slice(&self, k: u32) -> Self {
        let mut s = Series2::zero(self.truncation.saturating_sub(k));
        for (&(i, j), c) in &self.coeffs {
            if j == k {
                s.set_coeff(i, 0, c.clone());
            }
        }
        s
    }

    /// True when the series has no `t3`-dependence.
    pub fn is_t3_free(&self) -> bool {
        self.coeffs.keys().all(|&(_, j)| j == 0)
    }

    /// Multiplies by `t2^k`. Exponent shifts are exact, so the truncation
    /// grows by `k`.
    pub fn shift_t2_up(&self, k: u32) -> Self {
        let mut s = Series2::zero(self.truncation + k);
        for (&(i, j), c) in &self.coeffs {
            s.coeffs.insert((i + k, j), c.clone());
        }
        s
    }

    /// Divides by `t2^k` when every term allows it; truncation drops by `k`.
    pub fn shift_t2_down(&self, k: u32) -> Result<Self> {
        if !self.divisible_by_monomial(k, 0) {
            return Err(Error::PreconditionFailed(format!(
                "series not divisible by t2^{k}"
            )));
        }
        let mut s = Series2::zero(self.truncation.saturating_sub(k));
        for (&(i, j), c) in &self.coeffs {
            s.set_coeff(i - k, j, c.clone());
        }
        Ok(s)
    }

    /// Multiplies by `t3^k` (exact shift).
    pub fn shift_t3_up(&self, k: u32) -> Self {
        let mut s = Series2::zero(self.truncation + k);
        for (&(i, j), c) in &self.coeffs {
            s.coeffs.insert((i, j + k), c.clone());
        }
        s
    }

    /// Exact quotient `self / g` when `g` factors as its lex-least monomial
    /// times a unit (covers monomials and `t2^a t3^b * unit`). Returns `None`
    /// when that structure is missing or division leaves a remainder.
    pub fn try_div(&self, g: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(Series2::zero(self.truncation.min(g.truncation)));
        }
        let (&(i0, j0), c0) = g.coeffs.iter().next()?;
        if !g.divisible_by_monomial(i0, j0) || !self.divisible_by_monomial(i0, j0) {
            return None;
        }
        // self / g = (self / m0) * (g / m0)^-1 with m0 the least monomial.
        let gn = g
            .shift_t2_down(i0)
            .ok()?
            .scale(&(Rat::one() / c0.clone()));
        let gn = shift_t3_down(&gn, j0)?;
        let fn_ = self.shift_t2_down(i0).ok()?.scale(&(Rat::one() / c0.clone()));
        let fn_ = shift_t3_down(&fn_, j0)?;
        Some(fn_.mul(&gn.invert().ok()?))
    }

    /// Total degree of the lowest-order term, or `None` for the zero series.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(i, j)| i + j).min()
    }
}

fn shift_t3_down(s: &Series2, k: u32) -> Option<Series2> {
    if k == 0 {
        return Some(s.clone());
    }
    if !s.divisible_by_monomial(0, k) {
        return None;
    }
    let mut out = Series2::zero(s.truncation().saturating_sub(k));
    for (i, j, c) in s.terms() {
        out.set_coeff(i, j - k, c.clone());
    }
    Some(out)
}

impl fmt::Display for Series2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        // Grouped by total degree, then lexicographic.
        let mut keys: Vec<(u32, u32)> = self.coeffs.keys().cloned().collect();
        keys.sort_by_key(|&(i, j)| (i + j, i, j));
        let mut first = true;
        for (i, j) in keys {
            let c = &self.coeffs[&(i, j)];
            let (neg, mag) = format_rat_signed(c);
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_one = mag == "1";
            if i == 0 && j == 0 {
                write!(f, "{mag}")?;
            } else {
                if !is_one {
                    write!(f, "{mag}*")?;
                }
                match (i, j) {
                    (0, _) => {}
                    (1, _) => write!(f, "t2")?,
                    (_, _) => write!(f, "t2^{i}")?,
                }
                if i > 0 && j > 0 {
                    write!(f, "*")?;
                }
                match j {
                    0 => {}
                    1 => write!(f, "t3")?,
                    _ => write!(f, "t3^{j}")?,
                }
            }
        }
        write!(f, " (mod deg {})", self.truncation)
    }
}

/// Element of `Series2[u] / (u^k - t2)`, the degree-`k` extension housing
/// branches with `t2`-exponents in `(1/k) Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtSeries {
    k: u32,
    parts: Vec<Series2>,
}

impl ExtSeries {
    /// Zero element of the order-`k` extension (`k` in 1..=3).
    pub fn zero(k: u32, d: u32) -> Self {
        assert!((1..=3).contains(&k), "branch order k must be 1, 2 or 3");
        ExtSeries {
            k,
            parts: (0..k).map(|_| Series2::zero(d)).collect(),
        }
    }

    /// Embeds a plain series as the `u^0` part.
    pub fn from_series(k: u32, s: Series2) -> Self {
        let mut e = ExtSeries::zero(k, s.truncation());
        e.parts[0] = s;
        e
    }

    /// `t2^(n/k)` for integer `n >= 0`: the monomial `t2^(n div k) u^(n mod k)`.
    pub fn t2_frac_pow(k: u32, n: u32, d: u32) -> Self {
        let mut e = ExtSeries::zero(k, d);
        let r = (n % k) as usize;
        e.parts[r] = Series2::monomial(n / k, 0, Rat::one(), d);
        e
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The coefficient of `u^r`.
    pub fn part(&self, r: usize) -> &Series2 {
        &self.parts[r]
    }

    pub fn set_part(&mut self, r: usize, s: Series2) {
        self.parts[r] = s;
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(Series2::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        ExtSeries {
            k: self.k,
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ExtSeries {
            k: self.k,
            parts: self.parts.iter().map(Series2::neg).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        ExtSeries {
            k: self.k,
            parts: self.parts.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Product with reduction `u^k -> t2`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        let d = self
            .parts
            .iter()
            .chain(&other.parts)
            .map(Series2::truncation)
            .min()
            .unwrap();
        let mut out = ExtSeries::zero(self.k, d);
        for (r, a) in self.parts.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (s, b) in other.parts.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut prod = a.mul(b);
                let mut idx = (r + s) as u32;
                while idx >= self.k {
                    prod = prod.mul(&Series2::monomial(1, 0, Rat::one(), d));
                    idx -= self.k;
                }
                let cur = out.parts[idx as usize].add(&prod);
                out.parts[idx as usize] = cur;
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let d = self.parts.iter().map(Series2::truncation).min().unwrap();
        let mut acc = ExtSeries::from_series(self.k, Series2::one(d));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `d/dt3`, partwise.
    pub fn deriv_t3(&self) -> Self {
        ExtSeries {
            k: self.k,
            parts: self.parts.iter().map(|p| p.deriv(Var::T3)).collect(),
        }
    }

    /// Reinterprets all parts at a higher truncation; only valid for exact
    /// polynomial data.
    pub fn extend_truncation(&self, d: u32) -> Self {
        ExtSeries {
            k: self.k,
            parts: self.parts.iter().map(|p| p.extend_truncation(d)).collect(),
        }
    }

    /// `d/dt2`. The `u^r` part with `r >= 1` contributes `(r/k) s_r / t2`
    /// to the same `u`-index, so `s_r` must be divisible by `t2`.
    pub fn deriv_t2(&self) -> Result<Self> {
        let mut out = ExtSeries {
            k: self.k,
            parts: self.parts.iter().map(|p| p.deriv(Var::T2)).collect(),
        };
        for r in 1..self.k as usize {
            let s = &self.parts[r];
            if s.is_zero() {
                continue;
            }
            let shifted = s.shift_t2_down(1).map_err(|_| {
                Error::PreconditionFailed(format!(
                    "u^{r} part not divisible by t2; derivative leaves the extension ring"
                ))
            })?;
            let frac = Rat::new(num_bigint::BigInt::from(r), num_bigint::BigInt::from(self.k));
            out.parts[r] = out.parts[r].add(&shifted.scale(&frac));
        }
        Ok(out)
    }

    /// Characteristic data of multiplication by `self` on the free rank-`k`
    /// module with basis `1, u, .., u^(k-1)`: the elementary symmetric
    /// functions `(e1, e2, e3)` of the `k` branch values (`e3 = 0` for
    /// `k = 2`, `e2 = e3 = 0` for `k = 1`).  The characteristic polynomial
    /// is `x^k - e1 x^(k-1) + e2 x^(k-2) - e3`.
    pub fn charpoly_mult(&self) -> (Series2, Series2, Series2) {
        let d = self.parts.iter().map(Series2::truncation).min().unwrap();
        let zero = || Series2::zero(d);
        let t2 = Series2::monomial(1, 0, Rat::one(), d);
        match self.k {
            1 => (self.parts[0].clone(), zero(), zero()),
            2 => {
                // M = [[p0, t2 p1], [p1, p0]]
                let (p0, p1) = (&self.parts[0], &self.parts[1]);
                let e1 = p0.scale(&rint(2));
                let e2 = p0.mul(p0).sub(&t2.mul(&p1.mul(p1)));
                (e1, e2, zero())
            }
            3 => {
                // M columns: f*1, f*u, f*u^2 on basis (1, u, u^2).
                let (p0, p1, p2) = (&self.parts[0], &self.parts[1], &self.parts[2]);
                let m = [
                    [p0.clone(), t2.mul(p2), t2.mul(p1)],
                    [p1.clone(), p0.clone(), t2.mul(p2)],
                    [p2.clone(), p1.clone(), p0.clone()],
                ];
                let e1 = m[0][0].add(&m[1][1]).add(&m[2][2]);
                let minor = |a: usize, b: usize| {
                    m[a][a]
                        .mul(&m[b][b])
                        .sub(&m[a][b].mul(&m[b][a]))
                };
                let e2 = minor(0, 1).add(&minor(0, 2)).add(&minor(1, 2));
                let det = m[0][0]
                    .mul(&m[1][1].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][1])))
                    .sub(&m[0][1].mul(&m[1][0].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][0]))))
                    .add(&m[0][2].mul(&m[1][0].mul(&m[2][1]).sub(&m[1][1].mul(&m[2][0]))));
                (e1, e2, det)
            }
            _ => unreachable!(),
        }
    }
}
