//! Multiplication tables on the tangent bundle with unit `e = d1`.
//!
//! A [`MultTable`] stores the coefficients of the three products
//!
//! ```text
//! d2 o d2 = at1*d1 + at2*d2 + a3*d3
//! d2 o d3 = bt1*d1 + b2*d2  + b3*d3
//! d3 o d3 = ct1*d1 + c2*d2  + ct3*d3
//! ```
//!
//! in the coordinate frame (the "tilde" data). All coefficients live in
//! the `t2,t3`-series ring, which encodes `Lie_e(o) = 0`. Two further
//! presentations of the same multiplication are provided as views: the
//! shifted [`AbcFrame`] in which associativity and the classification
//! invariants take their simplest form, and the [`GhFrame`] built on the
//! powers of `d2` when `(d1, d2, d2 o d2)` is a frame.

use num_traits::Zero;

use crate::rat::{rat, rint, Rat};
use crate::series::{Series2, Var};
use crate::{Error, Result};

/// A vector field `v1*d1 + v2*d2 + v3*d3` with series coefficients.
pub type Vec3 = [Series2; 3];

/// Zero vector field at truncation `d`.
pub fn vec3_zero(d: u32) -> Vec3 {
    [Series2::zero(d), Series2::zero(d), Series2::zero(d)]
}

pub fn vec3_add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0].add(&b[0]), a[1].add(&b[1]), a[2].add(&b[2])]
}

pub fn vec3_sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0].sub(&b[0]), a[1].sub(&b[1]), a[2].sub(&b[2])]
}

pub fn vec3_scale(a: &Vec3, s: &Series2) -> Vec3 {
    [a[0].mul(s), a[1].mul(s), a[2].mul(s)]
}

pub fn vec3_is_zero(a: &Vec3) -> bool {
    a.iter().all(Series2::is_zero)
}

/// The four isomorphism classes of 3-dimensional commutative associative
/// unital algebras: `Q1 = C[x1,x2]/(x1,x2)^2`, `Q2 = C[x]/(x^3)`,
/// `Q3 = C + C[x]/(x^2)`, `Q4 = C^3` (semisimple).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlgebraType {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl std::fmt::Display for AlgebraType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlgebraType::Q1 => write!(f, "Q1"),
            AlgebraType::Q2 => write!(f, "Q2"),
            AlgebraType::Q3 => write!(f, "Q3"),
            AlgebraType::Q4 => write!(f, "Q4"),
        }
    }
}

/// Which of the two closed-form integrability cases holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrabilityCase {
    /// `(a2, a3, c2, c3) = 0`.
    NilpotentSquares,
    /// `(A2, A2dual, A3) = 0`.
    VanishingObstructions,
    Both,
}

impl IntegrabilityCase {
    /// The conventional numeric label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            IntegrabilityCase::NilpotentSquares => "4.29",
            IntegrabilityCase::VanishingObstructions => "4.30",
            IntegrabilityCase::Both => "4.29+4.30",
        }
    }
}

/// Verdict of the closed-form integrability check with witnesses.
#[derive(Debug, Clone)]
pub struct ClosedFormVerdict {
    pub is_f_manifold: bool,
    pub case: Option<IntegrabilityCase>,
    /// `(a2, a3, c2, c3)` residuals for the first case.
    pub nilpotent_residuals: [Series2; 4],
    /// `(A2, A2dual, A3)` residuals for the second case.
    pub obstruction_residuals: [Series2; 3],
}

/// Multiplication table in the coordinate frame; `d1` is the unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultTable {
    pub at1: Series2,
    pub at2: Series2,
    pub a3: Series2,
    pub bt1: Series2,
    pub b2: Series2,
    pub b3: Series2,
    pub ct1: Series2,
    pub c2: Series2,
    pub ct3: Series2,
}

/// Shifted-frame coefficients: with `P = d2 - b3*d1`, `Q = d3 - b2*d1`,
///
/// ```text
/// P o P = a1*d1 + a2*P + a3*Q
/// P o Q = b1*d1
/// Q o Q = c1*d1 + c2*P + c3*Q
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbcFrame {
    pub a1: Series2,
    pub a2: Series2,
    pub a3: Series2,
    pub b1: Series2,
    pub b2: Series2,
    pub b3: Series2,
    pub c1: Series2,
    pub c2: Series2,
    pub c3: Series2,
}

/// Power-frame presentation: `d2^o3 = g2*d2^o2 + g1*d2 + g0*d1` and
/// `d3 = h2*d2^o2 + h1*d2 + h0*d1`, valid when `h2` is a unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhFrame {
    pub g2: Series2,
    pub g1: Series2,
    pub g0: Series2,
    pub h2: Series2,
    pub h1: Series2,
    pub h0: Series2,
}

/// The pointwise classification invariants of an associative table,
/// together with the second-order integrability obstructions.
#[derive(Debug, Clone)]
pub struct RInvariants {
    pub r1: Series2,
    pub r2: Series2,
    pub r3: Series2,
    /// `9 R3^2 - 4 R1 R2`; nonvanishing detects semisimple points.
    pub disc: Series2,
    pub a2_obstruction: Series2,
    pub a2_dual_obstruction: Series2,
    pub a3_obstruction: Series2,
}

impl MultTable {
    /// Builds from the nine tilde coefficients, normalizing all of them to
    /// the common (minimum) truncation.
    pub fn new(coeffs: [Series2; 9]) -> Self {
        let d = coeffs.iter().map(Series2::truncation).min().unwrap();
        let mut it = coeffs.into_iter().map(|s| s.truncate(d));
        MultTable {
            at1: it.next().unwrap(),
            at2: it.next().unwrap(),
            a3: it.next().unwrap(),
            bt1: it.next().unwrap(),
            b2: it.next().unwrap(),
            b3: it.next().unwrap(),
            ct1: it.next().unwrap(),
            c2: it.next().unwrap(),
            ct3: it.next().unwrap(),
        }
    }

    /// The zero multiplication (everything but the unit law vanishes).
    pub fn zero(d: u32) -> Self {
        MultTable::new(std::array::from_fn(|_| Series2::zero(d)))
    }

    pub fn truncation(&self) -> u32 {
        self.coeffs().iter().map(|s| s.truncation()).min().unwrap()
    }

    pub fn coeffs(&self) -> [&Series2; 9] {
        [
            &self.at1, &self.at2, &self.a3, &self.bt1, &self.b2, &self.b3, &self.ct1, &self.c2,
            &self.ct3,
        ]
    }

    /// Product `d_i o d_j` for `i, j` in `1..=3` as a coefficient vector.
    pub fn basis_product(&self, i: usize, j: usize) -> Vec3 {
        let d = self.truncation();
        let e = |k: usize| {
            let mut v = vec3_zero(d);
            v[k - 1] = Series2::one(d);
            v
        };
        match (i.min(j), i.max(j)) {
            (1, k) => e(k),
            (2, 2) => [self.at1.clone(), self.at2.clone(), self.a3.clone()],
            (2, 3) => [self.bt1.clone(), self.b2.clone(), self.b3.clone()],
            (3, 3) => [self.ct1.clone(), self.c2.clone(), self.ct3.clone()],
            _ => unreachable!(),
        }
    }

    /// Bilinear extension of the table: `v o w`.
    pub fn mult(&self, v: &Vec3, w: &Vec3) -> Vec3 {
        let d = self.truncation();
        let mut out = vec3_zero(d);
        for i in 1..=3 {
            for j in 1..=3 {
                let c = v[i - 1].mul(&w[j - 1]);
                if c.is_zero() {
                    continue;
                }
                let prod = self.basis_product(i, j);
                out = vec3_add(&out, &vec3_scale(&prod, &c));
            }
        }
        out
    }

    /// Shifted-frame view of the same multiplication.
    pub fn abc(&self) -> AbcFrame {
        let a2 = self.at2.sub(&self.b3.scale(&rint(2)));
        let c3 = self.ct3.sub(&self.b2.scale(&rint(2)));
        let a1 = self
            .at1
            .add(&self.b3.mul(&self.b3))
            .add(&a2.mul(&self.b3))
            .add(&self.a3.mul(&self.b2));
        let b1 = self.bt1.add(&self.b2.mul(&self.b3));
        let c1 = self
            .ct1
            .add(&self.b2.mul(&self.b2))
            .add(&self.c2.mul(&self.b3))
            .add(&c3.mul(&self.b2));
        AbcFrame {
            a1,
            a2,
            a3: self.a3.clone(),
            b1,
            b2: self.b2.clone(),
            b3: self.b3.clone(),
            c1,
            c2: self.c2.clone(),
            c3,
        }
    }

    /// Residuals whose simultaneous vanishing is equivalent to
    /// associativity: `(a1 + a3 c3, b1 - a3 c2, c1 + a2 c2)` in the
    /// shifted frame.
    pub fn associativity_residuals(&self) -> [Series2; 3] {
        let f = self.abc();
        [
            f.a1.add(&f.a3.mul(&f.c3)),
            f.b1.sub(&f.a3.mul(&f.c2)),
            f.c1.add(&f.a2.mul(&f.c2)),
        ]
    }

    pub fn is_associative(&self) -> bool {
        self.associativity_residuals().iter().all(Series2::is_zero)
    }

    fn require_associative(&self) -> Result<()> {
        if self.is_associative() {
            Ok(())
        } else {
            Err(Error::NotAssociative)
        }
    }

    /// Classification invariants `R1, R2, R3`, the discriminant
    /// `9 R3^2 - 4 R1 R2`, and the obstructions `A2, A2dual, A3`.
    pub fn r_invariants(&self) -> Result<RInvariants> {
        self.require_associative()?;
        let f = self.abc();
        let third = rat(1, 3);
        let r1 = f.a3.mul(&f.c3).sub(&f.a2.mul(&f.a2).scale(&third));
        let r2 = f.a2.mul(&f.c2).sub(&f.c3.mul(&f.c3).scale(&third));
        let r3 = f.a3.mul(&f.c2).sub(&f.a2.mul(&f.c3).scale(&rat(1, 9)));
        let disc = r3
            .mul(&r3)
            .scale(&rint(9))
            .sub(&r1.mul(&r2).scale(&rint(4)));
        let (a2o, a2d, a3o) = f.obstructions();
        Ok(RInvariants {
            r1,
            r2,
            r3,
            disc,
            a2_obstruction: a2o,
            a2_dual_obstruction: a2d,
            a3_obstruction: a3o,
        })
    }

    /// Closed-form integrability check: the table extends to an
    /// F-manifold structure iff `(a2,a3,c2,c3) = 0` or `(A2,A2dual,A3) = 0`.
    pub fn is_f_manifold_closed_form(&self) -> Result<ClosedFormVerdict> {
        self.require_associative()?;
        let f = self.abc();
        let nil = [f.a2.clone(), f.a3.clone(), f.c2.clone(), f.c3.clone()];
        let (a2o, a2d, a3o) = f.obstructions();
        let obs = [a2o, a2d, a3o];
        let case1 = nil.iter().all(Series2::is_zero);
        let case2 = obs.iter().all(Series2::is_zero);
        let case = match (case1, case2) {
            (true, true) => Some(IntegrabilityCase::Both),
            (true, false) => Some(IntegrabilityCase::NilpotentSquares),
            (false, true) => Some(IntegrabilityCase::VanishingObstructions),
            (false, false) => None,
        };
        Ok(ClosedFormVerdict {
            is_f_manifold: case.is_some(),
            case,
            nilpotent_residuals: nil,
            obstruction_residuals: obs,
        })
    }

    /// Exact algebra type of the fiber at a point `(t2, t3)`.
    pub fn classify_at(&self, t2: &Rat, t3: &Rat) -> Result<AlgebraType> {
        let inv = self.r_invariants()?;
        let f = self.abc();
        if !inv.disc.eval(t2, t3).is_zero() {
            return Ok(AlgebraType::Q4);
        }
        let r_zero = [&inv.r1, &inv.r2, &inv.r3]
            .iter()
            .all(|s| s.eval(t2, t3).is_zero());
        if !r_zero {
            return Ok(AlgebraType::Q3);
        }
        let nil_zero = [&f.a2, &f.a3, &f.c2, &f.c3]
            .iter()
            .all(|s| s.eval(t2, t3).is_zero());
        if !nil_zero {
            return Ok(AlgebraType::Q2);
        }
        Ok(AlgebraType::Q1)
    }

    /// Algebra type at generic points, reading "not identically zero" at
    /// the working truncation.
    pub fn generic_type(&self) -> Result<AlgebraType> {
        Ok(self.generic_type_with_warning()?.0)
    }

    /// As [`generic_type`](Self::generic_type); the flag warns that some
    /// series tested for identical vanishing was zero at a truncation
    /// below 4, where the verdict carries little evidence.
    pub fn generic_type_with_warning(&self) -> Result<(AlgebraType, bool)> {
        let inv = self.r_invariants()?;
        let f = self.abc();
        let mut low_precision = false;
        let mut check_zero = |s: &Series2| -> bool {
            let z = s.is_zero();
            if z && s.truncation() < 4 {
                low_precision = true;
            }
            z
        };
        let ty = if !check_zero(&inv.disc) {
            AlgebraType::Q4
        } else if !(check_zero(&inv.r1) && check_zero(&inv.r2) && check_zero(&inv.r3)) {
            AlgebraType::Q3
        } else if !(check_zero(&f.a2) && check_zero(&f.a3) && check_zero(&f.c2) && check_zero(&f.c3))
        {
            AlgebraType::Q2
        } else {
            AlgebraType::Q1
        };
        Ok((ty, low_precision))
    }

    /// The two distinguished trace-free sections
    /// `psi1 = d2 - (b3 + a2/3) d1` and `psi2 = d3 - (b2 + c3/3) d1`.
    pub fn psi_fields(&self) -> (Vec3, Vec3) {
        let d = self.truncation();
        let f = self.abc();
        let third = rat(1, 3);
        let psi1 = [
            f.b3.add(&f.a2.scale(&third)).neg(),
            Series2::one(d),
            Series2::zero(d),
        ];
        let psi2 = [
            f.b2.add(&f.c3.scale(&third)).neg(),
            Series2::zero(d),
            Series2::one(d),
        ];
        (psi1, psi2)
    }

    /// Residual of the cubic minimal-polynomial relation for
    /// `psi = l1 psi1 + l2 psi2`: the explicit o-cube of `psi` plus the
    /// claimed linear and scalar corrections. Zero for every associative
    /// table.
    pub fn psi_relation_residual(&self, l1: &Series2, l2: &Series2) -> Result<Vec3> {
        self.require_associative()?;
        let d = self.truncation();
        let f = self.abc();
        let (psi1, psi2) = self.psi_fields();
        let psi = vec3_add(&vec3_scale(&psi1, l1), &vec3_scale(&psi2, l2));
        let psi3 = self.mult(&self.mult(&psi, &psi), &psi);
        let inv = self.r_invariants()?;
        // coefficient of psi
        let cpsi = inv
            .r1
            .mul(&l1.mul(l1))
            .sub(&inv.r3.mul(&l1.mul(l2)).scale(&rint(3)))
            .add(&inv.r2.mul(&l2.mul(l2)));
        // coefficient of d1
        let t1 = f
            .a2
            .mul(&inv.r1)
            .scale(&rat(2, 9))
            .sub(&f.a3.mul(&inv.r3));
        let t2 = f
            .c3
            .mul(&inv.r1)
            .scale(&rat(2, 3))
            .sub(&f.a2.mul(&inv.r3));
        let t3 = f
            .a2
            .mul(&inv.r2)
            .scale(&rat(2, 3))
            .sub(&f.c3.mul(&inv.r3));
        let t4 = f
            .c3
            .mul(&inv.r2)
            .scale(&rat(2, 9))
            .sub(&f.c2.mul(&inv.r3));
        let c1 = t1
            .mul(&l1.pow(3))
            .sub(&t2.mul(&l1.pow(2).mul(l2)))
            .sub(&t3.mul(&l1.mul(&l2.pow(2))))
            .add(&t4.mul(&l2.pow(3)));
        let mut e1 = vec3_zero(d);
        e1[0] = c1;
        Ok(vec3_add(&psi3, &vec3_add(&vec3_scale(&psi, &cpsi), &e1)))
    }

    /// Applies the special coordinate change `t1 -> t1 + tau(t2, t3)`,
    /// which replaces the frame fields `d2, d3` by
    /// `d2 + (d2 tau) d1, d3 + (d3 tau) d1` and keeps `d1`.
    pub fn shift_t1(&self, tau: &Series2) -> MultTable {
        let tau2 = tau.deriv(Var::T2);
        let tau3 = tau.deriv(Var::T3);
        let p = [Series2::zero(tau2.truncation()), tau2, tau3];
        let sh = |i: usize, j: usize| -> Vec3 {
            // (di + p_i d1) o (dj + p_j d1)
            //   = di o dj + p_j di + p_i dj + p_i p_j d1,
            // then rewrite dk = ~dk - p_k d1 in the new frame.
            let v = self.basis_product(i, j);
            let mut w = v.clone();
            w[i - 1] = w[i - 1].add(&p[j - 1]);
            w[j - 1] = w[j - 1].add(&p[i - 1]);
            w[0] = w[0].add(&p[i - 1].mul(&p[j - 1]));
            let correction = w[1].mul(&p[1]).add(&w[2].mul(&p[2]));
            w[0] = w[0].sub(&correction);
            w
        };
        let aa = sh(2, 2);
        let bb = sh(2, 3);
        let cc = sh(3, 3);
        MultTable::new([
            aa[0].clone(),
            aa[1].clone(),
            aa[2].clone(),
            bb[0].clone(),
            bb[1].clone(),
            bb[2].clone(),
            cc[0].clone(),
            cc[1].clone(),
            cc[2].clone(),
        ])
    }

    /// Normalizes `b2, b3` to `-c3/3, -a2/3` (the trace-free choice of the
    /// `t1`-coordinate). Requires the obstruction `A3 = 0`, which is
    /// exactly the integrability of the generating function `tau`.
    pub fn normalize(&self) -> Result<MultTable> {
        let f = self.abc();
        let (_, _, a3o) = f.obstructions();
        if !a3o.is_zero() {
            return Err(Error::PreconditionFailed(format!(
                "A3 obstruction nonzero: {a3o}"
            )));
        }
        let third = rat(-1, 3);
        let g = AbcFrame {
            b2: f.c3.scale(&third),
            b3: f.a2.scale(&third),
            ..f
        };
        Ok(g.to_table())
    }

    /// The potential of the normalizing coordinate change: `tau` with
    /// `d2 tau = -b3 - a2/3` and `d3 tau = -b2 - c3/3`, constant term 0.
    /// Checks mixed-partial consistency (equivalent to `A3 = 0`).
    pub fn tau(&self) -> Result<Series2> {
        let f = self.abc();
        let third = rat(1, 3);
        let p = f.b3.add(&f.a2.scale(&third)).neg();
        let q = f.b2.add(&f.c3.scale(&third)).neg();
        integrate_potential(&p, &q)
    }

    /// Power-frame view. Requires the `d3`-coefficient of `d2 o d2` (the
    /// change-of-basis determinant to `(d1, d2, d2^o2)`) to be a unit.
    pub fn to_gh(&self) -> Result<GhFrame> {
        if !self.a3.is_unit() {
            return Err(Error::FrameDegenerate(
                "a3(0) = 0: (d1, d2, d2 o d2) is not a frame".into(),
            ));
        }
        let a3_inv = self.a3.invert()?;
        let h2 = a3_inv.clone();
        let h1 = a3_inv.mul(&self.at2).neg();
        let h0 = a3_inv.mul(&self.at1).neg();
        // d2^o3 in the coordinate frame, then rewritten in (d1, d2, d2^o2).
        let sq = self.basis_product(2, 2);
        let d = self.truncation();
        let e2 = [Series2::zero(d), Series2::one(d), Series2::zero(d)];
        let cube = self.mult(&sq, &e2);
        let g2 = a3_inv.mul(&cube[2]);
        let g1 = cube[1].sub(&g2.mul(&self.at2));
        let g0 = cube[0].sub(&g2.mul(&self.at1));
        Ok(GhFrame {
            g2,
            g1,
            g0,
            h2,
            h1,
            h0,
        })
    }
}

impl AbcFrame {
    /// Back-conversion to the coordinate-frame table (lossless).
    pub fn to_table(&self) -> MultTable {
        let at2 = self.a2.add(&self.b3.scale(&rint(2)));
        let ct3 = self.c3.add(&self.b2.scale(&rint(2)));
        let at1 = self
            .a1
            .sub(&self.b3.mul(&self.b3))
            .sub(&self.a2.mul(&self.b3))
            .sub(&self.a3.mul(&self.b2));
        let bt1 = self.b1.sub(&self.b2.mul(&self.b3));
        let ct1 = self
            .c1
            .sub(&self.b2.mul(&self.b2))
            .sub(&self.c2.mul(&self.b3))
            .sub(&self.c3.mul(&self.b2));
        MultTable::new([
            at1,
            at2,
            self.a3.clone(),
            bt1,
            self.b2.clone(),
            self.b3.clone(),
            ct1,
            self.c2.clone(),
            ct3,
        ])
    }

    /// Builds an associative frame from the six free coefficients by
    /// imposing `a1 = -a3 c3`, `b1 = a3 c2`, `c1 = -a2 c2`.
    pub fn associative_from_free(
        a2: Series2,
        a3: Series2,
        b2: Series2,
        b3: Series2,
        c2: Series2,
        c3: Series2,
    ) -> AbcFrame {
        let a1 = a3.mul(&c3).neg();
        let b1 = a3.mul(&c2);
        let c1 = a2.mul(&c2).neg();
        AbcFrame {
            a1,
            a2,
            a3,
            b1,
            b2,
            b3,
            c1,
            c2,
            c3,
        }
    }

    /// The second-order integrability obstructions `(A2, A2dual, A3)`.
    /// Notation: the second index is the derivative direction.
    pub fn obstructions(&self) -> (Series2, Series2, Series2) {
        let d2 = |s: &Series2| s.deriv(Var::T2);
        let d3 = |s: &Series2| s.deriv(Var::T3);
        let a2_o = self
            .a2
            .mul(&d2(&self.b2).neg().add(&d3(&self.b3)).add(&d3(&self.a2)))
            .add(
                &self
                    .a3
                    .mul(&d2(&self.c2).scale(&rint(-2)).sub(&d3(&self.c3))),
            )
            .sub(&d2(&self.a3).mul(&self.c2))
            .sub(&d3(&self.a3).mul(&self.c3));
        let a2_dual = self
            .c3
            .mul(&d3(&self.b3).neg().add(&d2(&self.b2)).add(&d2(&self.c3)))
            .add(
                &self
                    .c2
                    .mul(&d3(&self.a3).scale(&rint(-2)).sub(&d2(&self.a2))),
            )
            .sub(&d3(&self.c2).mul(&self.a3))
            .sub(&d2(&self.c2).mul(&self.a2));
        let a3_o = d2(&self.b2)
            .scale(&rint(-3))
            .add(&d3(&self.b3).scale(&rint(3)))
            .add(&d3(&self.a2))
            .sub(&d2(&self.c3));
        (a2_o, a2_dual, a3_o)
    }
}

impl GhFrame {
    pub fn truncation(&self) -> u32 {
        [&self.g2, &self.g1, &self.g0, &self.h2, &self.h1, &self.h0]
            .iter()
            .map(|s| s.truncation())
            .min()
            .unwrap()
    }

    /// Reconstructs the coordinate-frame table. Requires `h2` a unit.
    pub fn to_table(&self) -> Result<MultTable> {
        if !self.h2.is_unit() {
            return Err(Error::FrameDegenerate("h2(0) = 0".into()));
        }
        let h2_inv = self.h2.invert()?;
        // d2 o d2 = h2^-1 (d3 - h1 d2 - h0 d1)
        let at1 = h2_inv.mul(&self.h0).neg();
        let at2 = h2_inv.mul(&self.h1).neg();
        let a3 = h2_inv.clone();
        // Work in the power basis (d1, d2, d2^o2): multiplication by d2
        // sends (x0, x1, x2) to (g0 x2, x0 + g1 x2, x1 + g2 x2).
        let d = self.truncation();
        let mul_d2 = |x: &Vec3| -> Vec3 {
            [
                self.g0.mul(&x[2]),
                x[0].add(&self.g1.mul(&x[2])),
                x[1].add(&self.g2.mul(&x[2])),
            ]
        };
        let to_coord = |x: &Vec3| -> Vec3 {
            // d2^o2 = at1 d1 + at2 d2 + a3 d3
            [
                x[0].add(&x[2].mul(&at1)),
                x[1].add(&x[2].mul(&at2)),
                x[2].mul(&a3),
            ]
        };
        let d3_power = [self.h0.clone(), self.h1.clone(), self.h2.clone()];
        // d2 o d3 and d3 o d3 in the power basis:
        let d2d3 = mul_d2(&d3_power);
        // d3 o d3 = h0 d3 + h1 (d2 o d3) + h2 (d2^o2 o d3)
        let d2sq_d3 = mul_d2(&d2d3);
        let mut d3d3 = vec3_zero(d);
        let d3_in_power = &d3_power;
        d3d3 = vec3_add(&d3d3, &vec3_scale(d3_in_power, &self.h0));
        d3d3 = vec3_add(&d3d3, &vec3_scale(&d2d3, &self.h1));
        d3d3 = vec3_add(&d3d3, &vec3_scale(&d2sq_d3, &self.h2));
        let b = to_coord(&d2d3);
        let c = to_coord(&d3d3);
        Ok(MultTable::new([
            at1,
            at2,
            a3,
            b[0].clone(),
            b[1].clone(),
            b[2].clone(),
            c[0].clone(),
            c[1].clone(),
            c[2].clone(),
        ]))
    }
}

/// Solves `d2 f = p`, `d3 f = q` for `f` with `f(0,0) = 0`, failing when the
/// mixed partials disagree at the common truncation.
pub fn integrate_potential(p: &Series2, q: &Series2) -> Result<Series2> {
    let mixed = p.deriv(Var::T3).sub(&q.deriv(Var::T2));
    if !mixed.is_zero() {
        return Err(Error::PreconditionFailed(format!(
            "1-form not closed: d3(p) - d2(q) = {mixed}"
        )));
    }
    // f = int p dt2 + g(t3), with g' = (q - d3 int p dt2)|_{t2 = 0}.
    let f0 = p.integrate(Var::T2);
    let rest = q.sub(&f0.deriv(Var::T3));
    // rest must be t2-free where retained
    let g = rest.t3_slice_free_part().integrate(Var::T3);
    Ok(f0.add(&g))
}

impl Series2 {
    /// Keeps only `t2`-free terms (helper for potential integration).
    fn t3_slice_free_part(&self) -> Series2 {
        let mut s = Series2::zero(self.truncation());
        for (i, j, c) in self.terms() {
            if i == 0 {
                s = s.add(&Series2::monomial(0, j, c.clone(), self.truncation()));
            }
        }
        s
    }
}
