//! Power-series initial value solver producing integrable multiplications
//! from one-variable initial data.
//!
//! Given `g2, g1, g0` at `t3 = 0` (series in `t2`) and fixed `h2, h1, h0`
//! with `h2` a unit, the evolution system
//!
//! ```text
//! d3 g2 = d2((g2^2 + 2 g1) h2 + g2 h1 + 3 h0)
//! d3 g1 = (2 d2(g2) g1 + 2 d2(g0)) h2 + (g2 g1 + 3 g0) d2(h2)
//!         + d2(g1) h1 + 2 g1 d2(h1) - 2 g2 d2(h0)
//! d3 g0 = 2 d2(g2) g0 h2 + g2 g0 d2(h2) + d2(g0) h1 + 3 g0 d2(h1)
//!         - g1 d2(h0)
//! ```
//!
//! has a unique solution, and the resulting power frame is bracket closed.
//! The recursion computes one `t3`-order per step; every step consumes one
//! `t2`-derivative, which the total-degree truncation absorbs exactly, so
//! the solved coefficients are trustworthy up to the working truncation.

use num_traits::One;

use crate::rat::{rat, rint, Rat};
use crate::series::{Series2, Var};
use crate::spectrum::gh_bracket_residuals;
use crate::tangent::{integrate_potential, GhFrame, MultTable};
use crate::{Error, Result};

/// Initial data of the evolution system.
#[derive(Debug, Clone)]
pub struct InitialData {
    /// `g_j` restricted to `t3 = 0`; must be `t3`-free.
    pub g2_0: Series2,
    pub g1_0: Series2,
    pub g0_0: Series2,
    pub h2: Series2,
    pub h1: Series2,
    pub h0: Series2,
    /// Target `t3`-order of the solution.
    pub order: u32,
}

/// Solver output: the completed frame plus the precision report.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub gh: GhFrame,
    /// `t3`-order actually computed.
    pub order: u32,
    /// `t2`-degrees retained in the top `t3`-slice.
    pub t2_precision_at_top: u32,
}

impl InitialData {
    pub fn validate(&self) -> Result<()> {
        if !self.h2.is_unit() {
            return Err(Error::InvalidParameters("h2 must be a unit".into()));
        }
        for (name, s) in [("g2_0", &self.g2_0), ("g1_0", &self.g1_0), ("g0_0", &self.g0_0)] {
            if !s.is_t3_free() {
                return Err(Error::InvalidParameters(format!(
                    "{name} must be a series in t2 alone"
                )));
            }
        }
        let d = self.truncation();
        if self.order >= d {
            return Err(Error::InvalidParameters(format!(
                "order {} exceeds the precision budget of truncation {} (max {})",
                self.order,
                d,
                d.saturating_sub(1)
            )));
        }
        Ok(())
    }

    pub fn truncation(&self) -> u32 {
        [
            &self.g2_0, &self.g1_0, &self.g0_0, &self.h2, &self.h1, &self.h0,
        ]
        .iter()
        .map(|s| s.truncation())
        .min()
        .unwrap()
    }
}

/// Right-hand side of the evolution system for the current partial sums.
fn rhs(g2: &Series2, g1: &Series2, g0: &Series2, h: &GhFrame) -> [Series2; 3] {
    let d2 = |s: &Series2| s.deriv(Var::T2);
    let r2 = d2(&g2
        .mul(g2)
        .add(&g1.scale(&rint(2)))
        .mul(&h.h2)
        .add(&g2.mul(&h.h1))
        .add(&h.h0.scale(&rint(3))));
    let r1 = d2(g2)
        .mul(g1)
        .scale(&rint(2))
        .add(&d2(g0).scale(&rint(2)))
        .mul(&h.h2)
        .add(&g2.mul(g1).add(&g0.scale(&rint(3))).mul(&d2(&h.h2)))
        .add(&d2(g1).mul(&h.h1))
        .add(&g1.mul(&d2(&h.h1)).scale(&rint(2)))
        .sub(&g2.mul(&d2(&h.h0)).scale(&rint(2)));
    let r0 = d2(g2)
        .mul(g0)
        .mul(&h.h2)
        .scale(&rint(2))
        .add(&g2.mul(g0).mul(&d2(&h.h2)))
        .add(&d2(g0).mul(&h.h1))
        .add(&g0.mul(&d2(&h.h1)).scale(&rint(3)))
        .sub(&g1.mul(&d2(&h.h0)));
    [r2, r1, r0]
}

/// Solves the initial value problem up to the requested `t3`-order.
pub fn solve(init: &InitialData) -> Result<SolveReport> {
    init.validate()?;
    let d = init.truncation();
    let h = GhFrame {
        g2: Series2::zero(d),
        g1: Series2::zero(d),
        g0: Series2::zero(d),
        h2: init.h2.truncate(d),
        h1: init.h1.truncate(d),
        h0: init.h0.truncate(d),
    };
    let mut g2 = init.g2_0.truncate(d);
    let mut g1 = init.g1_0.truncate(d);
    let mut g0 = init.g0_0.truncate(d);
    for k in 0..init.order {
        let r = rhs(&g2, &g1, &g0, &h);
        let inv = Rat::one() / rint((k + 1) as i64);
        // slice k of the RHS depends only on slices <= k of the g's
        let step = |g: &Series2, rk: &Series2| -> Series2 {
            g.add(
                &rk.t3_slice(k)
                    .scale(&inv)
                    .shift_t3_up(k + 1)
                    .truncate(d)
                    .extend_truncation(d),
            )
        };
        g2 = step(&g2, &r[0]);
        g1 = step(&g1, &r[1]);
        g0 = step(&g0, &r[2]);
    }
    Ok(SolveReport {
        gh: GhFrame {
            g2,
            g1,
            g0,
            h2: h.h2,
            h1: h.h1,
            h0: h.h0,
        },
        order: init.order,
        t2_precision_at_top: d.saturating_sub(init.order),
    })
}

/// The coupled completion of a plane-curve presentation: starting from
/// `y2^3 - g1 y2 - g0` at `t3 = 0` with the volume-normalized closure
/// data `(g2, h2, h1, h0) = (0, 1, t2, -2/3 g1)`, evolve
///
/// ```text
/// d3 g1 = 2 d2(g0) + d2(g1) t2 + 2 g1
/// d3 g0 = d2(g0) t2 + 3 g0 + 2/3 g1 d2(g1)
/// ```
///
/// Here `h0` tracks `g1`, so the generic solver does not apply verbatim.
pub fn solve_curve_extension(g1_0: &Series2, g0_0: &Series2, order: u32) -> Result<SolveReport> {
    for s in [g1_0, g0_0] {
        if !s.is_t3_free() {
            return Err(Error::InvalidParameters(
                "initial data must be series in t2 alone".into(),
            ));
        }
    }
    let d = g1_0.truncation().min(g0_0.truncation());
    if order >= d {
        return Err(Error::InvalidParameters(format!(
            "order {order} exceeds the precision budget of truncation {d}"
        )));
    }
    let t2 = Series2::monomial(1, 0, Rat::one(), d);
    let mut g1 = g1_0.truncate(d);
    let mut g0 = g0_0.truncate(d);
    for k in 0..order {
        let d2 = |s: &Series2| s.deriv(Var::T2);
        let r1 = d2(&g0)
            .scale(&rint(2))
            .add(&d2(&g1).mul(&t2))
            .add(&g1.scale(&rint(2)));
        let r0 = d2(&g0)
            .mul(&t2)
            .add(&g0.scale(&rint(3)))
            .add(&g1.mul(&d2(&g1)).scale(&rat(2, 3)));
        let inv = Rat::one() / rint((k + 1) as i64);
        let step = |g: &Series2, rk: &Series2| -> Series2 {
            g.add(
                &rk.t3_slice(k)
                    .scale(&inv)
                    .shift_t3_up(k + 1)
                    .truncate(d)
                    .extend_truncation(d),
            )
        };
        g1 = step(&g1, &r1);
        g0 = step(&g0, &r0);
    }
    let gh = GhFrame {
        g2: Series2::zero(d),
        g0,
        h2: Series2::one(d),
        h1: t2,
        h0: g1.scale(&rat(-2, 3)),
        g1,
    };
    Ok(SolveReport {
        gh,
        order,
        t2_precision_at_top: d.saturating_sub(order),
    })
}

/// Trace-free renormalization of an integrable power frame: the special
/// coordinate change generated by `tau` with `d2 tau = -g2/3` and
/// `d3 tau = -((g2^2 + 2 g1) h2 + g2 h1 + 3 h0)/3` produces an equivalent
/// frame with `g2 = 0` and `2 g1 h2 + 3 h0 = 0`. Returns the new frame
/// and the `tau` used.
pub fn normalize_gh(gh: &GhFrame) -> Result<(GhFrame, Series2)> {
    let res = gh_bracket_residuals(gh);
    if !res.is_f_manifold() {
        return Err(Error::PreconditionFailed(
            "power-frame bracket residuals are nonzero".into(),
        ));
    }
    let third = rat(-1, 3);
    let p = gh.g2.scale(&third);
    let q = gh
        .g2
        .mul(&gh.g2)
        .add(&gh.g1.scale(&rint(2)))
        .mul(&gh.h2)
        .add(&gh.g2.mul(&gh.h1))
        .add(&gh.h0.scale(&rint(3)))
        .scale(&third);
    let tau = integrate_potential(&p, &q)?;
    let table = gh.to_table()?.shift_t1(&tau);
    let new_gh = table.to_gh()?;
    Ok((new_gh, tau))
}

/// The two normal-form conditions the renormalized frame satisfies.
pub fn is_trace_free(gh: &GhFrame) -> bool {
    let z = gh
        .g1
        .mul(&gh.h2)
        .scale(&rint(2))
        .add(&gh.h0.scale(&rint(3)));
    gh.g2.is_zero() && z.is_zero()
}

/// Reconstructs a table directly from a solve report, for convenience.
pub fn table_from_report(report: &SolveReport) -> Result<MultTable> {
    report.gh.to_table()
}
