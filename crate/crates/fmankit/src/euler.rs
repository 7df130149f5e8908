//! Euler-field candidates and the Lie-derivative test `Lie_E(o) = o`.
//!
//! A candidate field is `E = eps1 d1 + eps2 d2 + eps3 d3` where `eps1` has
//! affine `t1`-dependence (`c * t1 + ` series) and `eps2, eps3` may carry a
//! pole in `t2` of bounded order, as the catalog's normal forms require.
//! The verification expands
//!
//! ```text
//! [E, di o dj] - [E, di] o dj - [E, dj] o di - di o dj = 0
//! ```
//!
//! for `(i,j)` in `{(1,1), (2,2), (2,3), (3,3)}` over the Laurent-in-`t2`
//! extension of the series ring, so meromorphic fields are checked after
//! clearing poles.

use num_traits::Zero;

use crate::rat::{rint, Rat};
use crate::series::{Series2, Var};
use crate::tangent::MultTable;
use crate::{Error, Result};

/// `t2^(-pole) * num` with `num` a plain series. Canonical form strips
/// common `t2` factors into the pole order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeroSeries2 {
    pole: u32,
    num: Series2,
}

impl MeroSeries2 {
    pub fn new(pole: u32, num: Series2) -> Self {
        MeroSeries2 { pole, num }.canonicalize()
    }

    pub fn holomorphic(s: Series2) -> Self {
        MeroSeries2 { pole: 0, num: s }
    }

    pub fn zero(d: u32) -> Self {
        MeroSeries2 {
            pole: 0,
            num: Series2::zero(d),
        }
    }

    pub fn pole(&self) -> u32 {
        self.pole
    }

    pub fn numerator(&self) -> &Series2 {
        &self.num
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_holomorphic(&self) -> bool {
        self.pole == 0
    }

    /// Strips `t2` factors shared by all numerator terms into the pole.
    fn canonicalize(mut self) -> Self {
        while self.pole > 0 && self.num.divisible_by_monomial(1, 0) {
            self.num = self.num.shift_t2_down(1).expect("divisibility checked");
            self.pole -= 1;
        }
        if self.num.is_zero() {
            self.pole = 0;
        }
        self
    }

    /// Reinterprets the numerator at a higher truncation; only valid for
    /// exact polynomial data.
    pub fn extend_truncation(&self, d: u32) -> Self {
        MeroSeries2 {
            pole: self.pole,
            num: self.num.extend_truncation(d),
        }
    }

    /// The underlying series when there is no pole.
    pub fn to_series(&self) -> Result<Series2> {
        if self.pole == 0 {
            Ok(self.num.clone())
        } else {
            Err(Error::PreconditionFailed(format!(
                "series has a t2-pole of order {}",
                self.pole
            )))
        }
    }

    fn align(&self, other: &Self) -> (u32, Series2, Series2) {
        let pole = self.pole.max(other.pole);
        let a = self.num.shift_t2_up(pole - self.pole);
        let b = other.num.shift_t2_up(pole - other.pole);
        (pole, a, b)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (pole, a, b) = self.align(other);
        MeroSeries2 { pole, num: a.add(&b) }.canonicalize()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MeroSeries2 {
            pole: self.pole,
            num: self.num.neg(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        MeroSeries2 {
            pole: self.pole + other.pole,
            num: self.num.mul(&other.num),
        }
        .canonicalize()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        MeroSeries2 {
            pole: self.pole,
            num: self.num.scale(c),
        }
        .canonicalize()
    }

    /// `d/dt2` via the quotient rule:
    /// `(t2^-m s)' = t2^-(m+1) (t2 s' - m s)`.
    pub fn deriv(&self, var: Var) -> Self {
        match var {
            Var::T3 => MeroSeries2 {
                pole: self.pole,
                num: self.num.deriv(Var::T3),
            }
            .canonicalize(),
            Var::T2 => {
                if self.pole == 0 {
                    return MeroSeries2::holomorphic(self.num.deriv(Var::T2));
                }
                let num = self
                    .num
                    .deriv(Var::T2)
                    .shift_t2_up(1)
                    .sub(&self.num.scale(&rint(self.pole as i64)));
                MeroSeries2 {
                    pole: self.pole + 1,
                    num,
                }
                .canonicalize()
            }
        }
    }

    /// Exact value at a point; errors when the pole survives at `t2 = 0`.
    pub fn eval(&self, t2: &Rat, t3: &Rat) -> Result<Rat> {
        if self.pole > 0 && t2.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        let mut v = self.num.eval(t2, t3);
        for _ in 0..self.pole {
            v /= t2.clone();
        }
        Ok(v)
    }
}

/// Candidate Euler field (`c = 1`) or multiplication symmetry (`c = 0`):
/// `E = (c t1 + eps1) d1 + eps2 d2 + eps3 d3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    pub c: Rat,
    pub eps1: Series2,
    pub eps2: MeroSeries2,
    pub eps3: MeroSeries2,
}

impl VectorField {
    /// Holomorphic field from plain series components.
    pub fn holomorphic(c: Rat, eps1: Series2, eps2: Series2, eps3: Series2) -> Self {
        VectorField {
            c,
            eps1,
            eps2: MeroSeries2::holomorphic(eps2),
            eps3: MeroSeries2::holomorphic(eps3),
        }
    }

    /// The standard Euler shape `t1 d1 + eps2 d2 + eps3 d3`.
    pub fn euler(eps2: MeroSeries2, eps3: MeroSeries2, d: u32) -> Self {
        VectorField {
            c: Rat::from_integer(1.into()),
            eps1: Series2::zero(d),
            eps2,
            eps3,
        }
    }

    /// `E + c * e`; preserves the Euler property.
    pub fn shift_by_unit(&self, c: &Rat) -> Self {
        let mut out = self.clone();
        out.eps1 = out
            .eps1
            .add(&Series2::constant(c.clone(), out.eps1.truncation()));
        out
    }

    pub fn max_pole(&self) -> u32 {
        self.eps2.pole().max(self.eps3.pole())
    }

    fn components(&self) -> [MeroSeries2; 3] {
        [
            MeroSeries2::holomorphic(self.eps1.clone()),
            self.eps2.clone(),
            self.eps3.clone(),
        ]
    }
}

/// A 3-vector of Laurent series: intermediate values in the Lie residual.
type MVec3 = [MeroSeries2; 3];

fn mvec_zero(d: u32) -> MVec3 {
    [
        MeroSeries2::zero(d),
        MeroSeries2::zero(d),
        MeroSeries2::zero(d),
    ]
}

fn mvec_add(a: &MVec3, b: &MVec3) -> MVec3 {
    [a[0].add(&b[0]), a[1].add(&b[1]), a[2].add(&b[2])]
}

fn mvec_sub(a: &MVec3, b: &MVec3) -> MVec3 {
    [a[0].sub(&b[0]), a[1].sub(&b[1]), a[2].sub(&b[2])]
}

fn mvec_from(v: &crate::tangent::Vec3) -> MVec3 {
    [
        MeroSeries2::holomorphic(v[0].clone()),
        MeroSeries2::holomorphic(v[1].clone()),
        MeroSeries2::holomorphic(v[2].clone()),
    ]
}

/// Table product extended to Laurent coefficients.
fn mero_mult(table: &MultTable, v: &MVec3, w: &MVec3) -> MVec3 {
    let d = table.truncation();
    let mut out = mvec_zero(d);
    for i in 1..=3 {
        for j in 1..=3 {
            let c = v[i - 1].mul(&w[j - 1]);
            if c.is_zero() {
                continue;
            }
            let prod = mvec_from(&table.basis_product(i, j));
            let scaled = [prod[0].mul(&c), prod[1].mul(&c), prod[2].mul(&c)];
            out = mvec_add(&out, &scaled);
        }
    }
    out
}

/// `E(f)` for a Laurent function `f` (directional derivative; the
/// `d1`-component contributes nothing since `f` is `t1`-free).
fn apply_field(e: &VectorField, f: &MeroSeries2) -> MeroSeries2 {
    e.eps2
        .mul(&f.deriv(Var::T2))
        .add(&e.eps3.mul(&f.deriv(Var::T3)))
}

/// `[E, W]` for a frame field `W` with Laurent coefficients `w`.
/// Uses `d1 E = c d1` and `d1 w_k = 0`.
fn lie_bracket_with_field(e: &VectorField, w: &MVec3) -> MVec3 {
    let eps = e.components();
    let mut out = mvec_zero(e.eps1.truncation());
    for k in 0..3 {
        let mut term = apply_field(e, &w[k]);
        // - W(eps_k): the t1-derivative of eps_k is c for k = 0.
        if k == 0 {
            term = term.sub(&w[0].scale(&e.c));
        }
        term = term.sub(&w[1].mul(&eps[k].deriv(Var::T2)));
        term = term.sub(&w[2].mul(&eps[k].deriv(Var::T3)));
        out[k] = term;
    }
    out
}

/// One pole-cleared residual vector of the Lie condition.
#[derive(Debug, Clone)]
pub struct LieResidual {
    pub pair: (usize, usize),
    /// Components along `d1, d2, d3` after clearing the common `t2`-pole.
    pub components: [Series2; 3],
    pub cleared_pole: u32,
}

impl LieResidual {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Series2::is_zero)
    }
}

/// Residuals of `Lie_E(o) = o` expanded over the index pairs
/// `(1,1), (2,2), (2,3), (3,3)`; `E` is an Euler field iff all vanish.
pub fn lie_residuals(table: &MultTable, e: &VectorField) -> Result<Vec<LieResidual>> {
    if !table.is_associative() {
        return Err(Error::NotAssociative);
    }
    let d = table.truncation();
    let pairs = [(1usize, 1usize), (2, 2), (2, 3), (3, 3)];
    let mut out = Vec::new();
    for (i, j) in pairs {
        let prod = mvec_from(&table.basis_product(i, j));
        let term1 = lie_bracket_with_field(e, &prod);
        let basis = |k: usize| {
            let mut v = mvec_zero(d);
            v[k - 1] = MeroSeries2::holomorphic(Series2::one(d));
            v
        };
        // [E, d_i] = -(d_i eps) has components -d_i(eps_k), plus -c on the
        // d1-component for i = 1.
        let bracket_basis = |i: usize| -> MVec3 {
            let eps = e.components();
            match i {
                1 => {
                    let mut v = mvec_zero(d);
                    v[0] = MeroSeries2::holomorphic(Series2::constant(-e.c.clone(), d));
                    v
                }
                2 => [
                    eps[0].deriv(Var::T2).neg(),
                    eps[1].deriv(Var::T2).neg(),
                    eps[2].deriv(Var::T2).neg(),
                ],
                3 => [
                    eps[0].deriv(Var::T3).neg(),
                    eps[1].deriv(Var::T3).neg(),
                    eps[2].deriv(Var::T3).neg(),
                ],
                _ => unreachable!(),
            }
        };
        let term2 = mero_mult(table, &bracket_basis(i), &basis(j));
        let term3 = mero_mult(table, &bracket_basis(j), &basis(i));
        let residual = mvec_sub(&mvec_sub(&mvec_sub(&term1, &term2), &term3), &prod);
        let pole = residual.iter().map(MeroSeries2::pole).max().unwrap();
        let components = [
            residual[0].num.shift_t2_up(pole - residual[0].pole),
            residual[1].num.shift_t2_up(pole - residual[1].pole),
            residual[2].num.shift_t2_up(pole - residual[2].pole),
        ];
        out.push(LieResidual {
            pair: (i, j),
            components,
            cleared_pole: pole,
        });
    }
    Ok(out)
}

/// Convenience wrapper: true iff every residual vanishes at truncation.
pub fn is_euler_field(table: &MultTable, e: &VectorField) -> Result<bool> {
    Ok(lie_residuals(table, e)?.iter().all(LieResidual::is_zero))
}

/// Exact 3x3 rational matrix of `E o` at a point, rows indexed by the
/// frame. Errors when a component has a surviving pole there.
pub fn multiplication_matrix_at(
    table: &MultTable,
    e: &VectorField,
    t2: &Rat,
    t3: &Rat,
) -> Result<[[Rat; 3]; 3]> {
    if !table.is_associative() {
        return Err(Error::NotAssociative);
    }
    // t1 only shifts by a multiple of the identity, which regularity
    // ignores; evaluate the t1-free part.
    let eps = [
        e.eps1.eval(t2, t3),
        e.eps2.eval(t2, t3)?,
        e.eps3.eval(t2, t3)?,
    ];
    let mut m = [
        [Rat::zero(), Rat::zero(), Rat::zero()],
        [Rat::zero(), Rat::zero(), Rat::zero()],
        [Rat::zero(), Rat::zero(), Rat::zero()],
    ];
    for j in 1..=3 {
        // column j: E o d_j
        let mut col = [Rat::zero(), Rat::zero(), Rat::zero()];
        for (i, ei) in eps.iter().enumerate() {
            if ei.is_zero() {
                continue;
            }
            let prod = table.basis_product(i + 1, j);
            for k in 0..3 {
                col[k] += ei.clone() * prod[k].eval(t2, t3);
            }
        }
        for k in 0..3 {
            m[k][j - 1] = col[k].clone();
        }
    }
    Ok(m)
}

/// True iff `E o` at the point is a regular endomorphism (one Jordan block
/// per eigenvalue), tested exactly as `I, M, M^2` spanning a 3-dimensional
/// space.
pub fn regular_at(table: &MultTable, e: &VectorField, t2: &Rat, t3: &Rat) -> Result<bool> {
    let m = multiplication_matrix_at(table, e, t2, t3)?;
    let mut m2 = [
        [Rat::zero(), Rat::zero(), Rat::zero()],
        [Rat::zero(), Rat::zero(), Rat::zero()],
        [Rat::zero(), Rat::zero(), Rat::zero()],
    ];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let add = m[i][k].clone() * m[k][j].clone();
                m2[i][j] += add;
            }
        }
    }
    let ident = |i: usize, j: usize| {
        if i == j {
            Rat::from_integer(1.into())
        } else {
            Rat::zero()
        }
    };
    // rows of the 3x9 matrix (I, M, M^2) flattened
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    rows.push((0..9).map(|n| ident(n / 3, n % 3)).collect());
    rows.push((0..9).map(|n| m[n / 3][n % 3].clone()).collect());
    rows.push((0..9).map(|n| m2[n / 3][n % 3].clone()).collect());
    Ok(rank(rows) == 3)
}

fn rank(mut rows: Vec<Vec<Rat>>) -> usize {
    let ncols = rows[0].len();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let p = rows[r][col].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone() / p.clone();
                for c in col..ncols {
                    let sub = factor.clone() * rows[r][c].clone();
                    rows[i][c] -= sub;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}
