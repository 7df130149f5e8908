//! The analytic spectrum as an ideal in the cotangent coordinate ring.
//!
//! Functions on `T*M` that matter here are polynomial in the fiber
//! coordinates `y1, y2, y3` with `t2,t3`-series coefficients. The ideal
//! cutting out the spectrum is generated by `y1 - 1` plus either the three
//! quadratic relations of the multiplication table (`Y`-frame) or the two
//! relations of the power frame (`Z`-frame). The multiplication is an
//! F-manifold structure iff the ideal is closed under the Poisson bracket;
//! closure is tested by reducing each bracket of generators to the normal
//! form `c0 + c2 y2 + c3 y3` and asking for zero.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::rat::{rint, Rat};
use crate::series::{Series2, Var};
use crate::tangent::{GhFrame, MultTable};
use crate::{Error, Result};

/// Exponents of `y1^e1 y2^e2 y3^e3`.
pub type YExp = (u32, u32, u32);

/// Polynomial in the fiber coordinates with `Series2` coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CotangentPoly {
    terms: BTreeMap<YExp, Series2>,
}

impl CotangentPoly {
    pub fn zero() -> Self {
        CotangentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_series(s: Series2) -> Self {
        let mut p = CotangentPoly::zero();
        p.add_term((0, 0, 0), s);
        p
    }

    /// The fiber coordinate `y_k` (`k` in 1..=3) at truncation `d`.
    pub fn y(k: usize, d: u32) -> Self {
        let mut e = (0, 0, 0);
        match k {
            1 => e.0 = 1,
            2 => e.1 = 1,
            3 => e.2 = 1,
            _ => panic!("fiber index out of range"),
        }
        let mut p = CotangentPoly::zero();
        p.add_term(e, Series2::one(d));
        p
    }

    pub fn constant(c: Rat, d: u32) -> Self {
        CotangentPoly::from_series(Series2::constant(c, d))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&YExp, &Series2)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: YExp) -> Series2 {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(|| Series2::zero(self.truncation().unwrap_or(0)))
    }

    /// Minimum truncation over the stored coefficients.
    pub fn truncation(&self) -> Option<u32> {
        self.terms.values().map(Series2::truncation).min()
    }

    pub fn add_term(&mut self, e: YExp, s: Series2) {
        if s.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            None => {
                self.terms.insert(e, s);
            }
            Some(old) => {
                let sum = old.add(&s);
                if !sum.is_zero() {
                    self.terms.insert(e, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (e, s) in &other.terms {
            p.add_term(*e, s.clone());
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut p = CotangentPoly::zero();
        for (e, s) in &self.terms {
            p.terms.insert(*e, s.neg());
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = CotangentPoly::zero();
        for (e1, s1) in &self.terms {
            for (e2, s2) in &other.terms {
                let e = (e1.0 + e2.0, e1.1 + e2.1, e1.2 + e2.2);
                p.add_term(e, s1.mul(s2));
            }
        }
        p
    }

    pub fn scale_series(&self, s: &Series2) -> Self {
        let mut p = CotangentPoly::zero();
        for (e, c) in &self.terms {
            p.add_term(*e, c.mul(s));
        }
        p
    }

    pub fn pow(&self, n: u32) -> Self {
        let d = self.truncation().unwrap_or(1);
        let mut acc = CotangentPoly::from_series(Series2::one(d));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Derivative in a base variable (acts on the series coefficients).
    pub fn deriv_t(&self, var: Var) -> Self {
        let mut p = CotangentPoly::zero();
        for (e, s) in &self.terms {
            p.add_term(*e, s.deriv(var));
        }
        p
    }

    /// Derivative in a fiber variable `y_k`.
    pub fn deriv_y(&self, k: usize) -> Self {
        let mut p = CotangentPoly::zero();
        for (&(e1, e2, e3), s) in &self.terms {
            let (e, n) = match k {
                1 if e1 > 0 => ((e1 - 1, e2, e3), e1),
                2 if e2 > 0 => ((e1, e2 - 1, e3), e2),
                3 if e3 > 0 => ((e1, e2, e3 - 1), e3),
                _ => continue,
            };
            p.add_term(e, s.scale(&rint(n as i64)));
        }
        p
    }

    /// Substitutes `y1 -> 1`.
    pub fn substitute_y1_one(&self) -> Self {
        let mut p = CotangentPoly::zero();
        for (&(_, e2, e3), s) in &self.terms {
            p.add_term((0, e2, e3), s.clone());
        }
        p
    }

    /// Substitutes a polynomial for `y3`.
    pub fn substitute_y3(&self, repl: &CotangentPoly) -> Self {
        let mut p = CotangentPoly::zero();
        for (&(e1, e2, e3), s) in &self.terms {
            let mut acc = CotangentPoly::zero();
            acc.add_term((e1, e2, 0), s.clone());
            for _ in 0..e3 {
                acc = acc.mul(repl);
            }
            p = p.add(&acc);
        }
        p
    }

    /// Total degree in the fiber variables.
    pub fn y_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|&(a, b, c)| a + b + c)
            .max()
            .unwrap_or(0)
    }

    /// Value of the retained polynomial at a full point
    /// `(y1, y2, y3; t2, t3)`.
    pub fn eval(&self, y: &[Rat; 3], t2: &Rat, t3: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (&(e1, e2, e3), s) in &self.terms {
            let mut v = s.eval(t2, t3);
            for _ in 0..e1 {
                v *= &y[0];
            }
            for _ in 0..e2 {
                v *= &y[1];
            }
            for _ in 0..e3 {
                v *= &y[2];
            }
            acc += v;
        }
        acc
    }
}

impl fmt::Display for CotangentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest y-degree first
        let mut keys: Vec<YExp> = self.terms.keys().cloned().collect();
        keys.sort_by_key(|&(a, b, c)| (std::cmp::Reverse(a + b + c), std::cmp::Reverse(c), std::cmp::Reverse(b)));
        let mut first = true;
        for e in keys {
            let s = &self.terms[&e];
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut mono = String::new();
            for (name, exp) in [("y1", e.0), ("y2", e.1), ("y3", e.2)] {
                if !mono.is_empty() && exp > 0 {
                    mono.push('*');
                }
                if exp == 1 {
                    mono.push_str(name);
                } else if exp > 1 {
                    mono.push_str(&format!("{name}^{exp}"));
                }
            }
            if mono.is_empty() {
                write!(f, "({s})")?;
            } else {
                write!(f, "({s})*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Poisson bracket `{f, g} = H_f(g)` with
/// `H_f = sum_k (df/dt_k d/dy_k - df/dy_k d/dt_k)`.
/// The `t1`-terms vanish identically because coefficients are
/// `t1`-independent.
pub fn poisson(f: &CotangentPoly, g: &CotangentPoly) -> CotangentPoly {
    let mut acc = CotangentPoly::zero();
    for (var, k) in [(Var::T2, 2usize), (Var::T3, 3usize)] {
        let a = f.deriv_t(var).mul(&g.deriv_y(k));
        let b = f.deriv_y(k).mul(&g.deriv_t(var));
        acc = acc.add(&a).sub(&b);
    }
    acc
}

/// Which generator presentation an ideal carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameTag {
    /// Quadratic relations of the multiplication table.
    Quadratic,
    /// Cubic-plus-elimination relations of the power frame.
    PowerFrame,
}

/// The defining ideal of the analytic spectrum, with enough table data to
/// reduce to the normal form `c0 + c2 y2 + c3 y3`.
#[derive(Debug, Clone)]
pub struct SpectrumIdeal {
    frame: FrameTag,
    truncation: u32,
    /// Listed generators, `y1 - 1` first.
    generators: Vec<CotangentPoly>,
    /// Rewrite data in the quadratic frame: images of `y2^2`, `y2 y3`,
    /// `y3^2` as normal-form triples `(c0, c2, c3)`.
    quad_rules: Option<[[Series2; 3]; 3]>,
    /// Power-frame data for the cubic reduction.
    gh: Option<GhFrame>,
}

impl SpectrumIdeal {
    /// Builds the quadratic-frame ideal of an associative table, in the
    /// shifted form
    /// `Y22 = (y2-b3)^2 + a3 c3 - a2 (y2-b3) - a3 (y3-b2)` etc.
    pub fn from_table(table: &MultTable) -> Result<Self> {
        if !table.is_associative() {
            return Err(Error::NotAssociative);
        }
        Ok(Self::from_table_unchecked(table))
    }

    /// As [`from_table`](Self::from_table) but without the associativity
    /// gate; reduction is then not confluent and only the listed
    /// generators are meaningful.
    pub fn from_table_unchecked(table: &MultTable) -> Self {
        let d = table.truncation();
        let f = table.abc();
        let y2s = CotangentPoly::y(2, d).sub(&CotangentPoly::from_series(f.b3.clone()));
        let y3s = CotangentPoly::y(3, d).sub(&CotangentPoly::from_series(f.b2.clone()));
        let y22 = y2s
            .mul(&y2s)
            .add(&CotangentPoly::from_series(f.a3.mul(&f.c3)))
            .sub(&y2s.scale_series(&f.a2))
            .sub(&y3s.scale_series(&f.a3));
        let y23 = y2s
            .mul(&y3s)
            .sub(&CotangentPoly::from_series(f.a3.mul(&f.c2)));
        let y33 = y3s
            .mul(&y3s)
            .add(&CotangentPoly::from_series(f.a2.mul(&f.c2)))
            .sub(&y2s.scale_series(&f.c2))
            .sub(&y3s.scale_series(&f.c3));
        let y1m1 = CotangentPoly::y(1, d).sub(&CotangentPoly::from_series(Series2::one(d)));
        let rule = |v: &crate::tangent::Vec3| [v[0].clone(), v[1].clone(), v[2].clone()];
        let quad_rules = [
            rule(&table.basis_product(2, 2)),
            rule(&table.basis_product(2, 3)),
            rule(&table.basis_product(3, 3)),
        ];
        SpectrumIdeal {
            frame: FrameTag::Quadratic,
            truncation: d,
            generators: vec![y1m1, y22, y23, y33],
            quad_rules: Some(quad_rules),
            gh: None,
        }
    }

    /// Builds the power-frame ideal `(y1 - 1, Z2, Z3)` with
    /// `Z2 = y2^3 - g2 y2^2 - g1 y2 - g0`, `Z3 = y3 - h2 y2^2 - h1 y2 - h0`.
    pub fn from_gh(gh: &GhFrame) -> Result<Self> {
        if !gh.h2.is_unit() {
            return Err(Error::FrameDegenerate("h2(0) = 0".into()));
        }
        let d = gh.truncation();
        let (z2, z3) = z_generators(gh, d);
        let y1m1 = CotangentPoly::y(1, d).sub(&CotangentPoly::from_series(Series2::one(d)));
        Ok(SpectrumIdeal {
            frame: FrameTag::PowerFrame,
            truncation: d,
            generators: vec![y1m1, z2, z3],
            quad_rules: None,
            gh: Some(gh.clone()),
        })
    }

    pub fn frame(&self) -> FrameTag {
        self.frame
    }

    pub fn generators(&self) -> &[CotangentPoly] {
        &self.generators
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Normal form of `p` modulo the ideal: `c0 + c2 y2 + c3 y3`.
    /// Membership is `reduce(p).is_zero()`.
    pub fn reduce(&self, p: &CotangentPoly) -> CotangentPoly {
        match self.frame {
            FrameTag::Quadratic => self.reduce_quadratic(p, false),
            FrameTag::PowerFrame => self.reduce_power(p),
        }
    }

    /// Reduction with the opposite monomial-selection strategy: used to
    /// assert confluence on associative tables.
    pub fn reduce_alt(&self, p: &CotangentPoly) -> CotangentPoly {
        match self.frame {
            FrameTag::Quadratic => self.reduce_quadratic(p, true),
            FrameTag::PowerFrame => self.reduce_power(p),
        }
    }

    fn reduce_quadratic(&self, p: &CotangentPoly, lowest_first: bool) -> CotangentPoly {
        let rules = self.quad_rules.as_ref().expect("quadratic frame");
        let mut cur = p.substitute_y1_one();
        loop {
            let mut candidates: Vec<YExp> = cur
                .terms()
                .filter(|(&(_, e2, e3), _)| e2 + e3 >= 2)
                .map(|(e, _)| *e)
                .collect();
            if candidates.is_empty() {
                return cur;
            }
            candidates.sort_by_key(|&(_, e2, e3)| (e3, e2));
            let e = if lowest_first {
                candidates[0]
            } else {
                *candidates.last().unwrap()
            };
            let coeff = cur.coeff(e);
            let (_, e2, e3) = e;
            // choose the quadratic factor to rewrite
            let (rule, rest) = if e3 >= 2 {
                (&rules[2], (e2, e3 - 2))
            } else if e2 >= 1 && e3 >= 1 {
                (&rules[1], (e2 - 1, e3 - 1))
            } else {
                (&rules[0], (e2 - 2, e3))
            };
            let mut repl = CotangentPoly::zero();
            repl.add_term((0, 0, 0), rule[0].clone());
            repl.add_term((0, 1, 0), rule[1].clone());
            repl.add_term((0, 0, 1), rule[2].clone());
            let mut monom = CotangentPoly::zero();
            monom.add_term((0, rest.0, rest.1), coeff.clone());
            let mut next = cur.clone();
            next.add_term(e, coeff.neg());
            cur = next.add(&repl.mul(&monom));
        }
    }

    fn reduce_power(&self, p: &CotangentPoly) -> CotangentPoly {
        let gh = self.gh.as_ref().expect("power frame");
        // eliminate y1, then y3, then cube down by the monic relation
        let mut z3_sub = CotangentPoly::zero();
        z3_sub.add_term((0, 2, 0), gh.h2.clone());
        z3_sub.add_term((0, 1, 0), gh.h1.clone());
        z3_sub.add_term((0, 0, 0), gh.h0.clone());
        let mut cur = p.substitute_y1_one().substitute_y3(&z3_sub);
        loop {
            let top: Option<YExp> = cur
                .terms()
                .filter(|(&(_, e2, _), _)| e2 >= 3)
                .map(|(e, _)| *e)
                .max_by_key(|&(_, e2, _)| e2);
            let Some(e) = top else { break };
            let coeff = cur.coeff(e);
            let mut repl = CotangentPoly::zero();
            repl.add_term((0, 2, 0), gh.g2.clone());
            repl.add_term((0, 1, 0), gh.g1.clone());
            repl.add_term((0, 0, 0), gh.g0.clone());
            let mut monom = CotangentPoly::zero();
            monom.add_term((0, e.1 - 3, 0), coeff.clone());
            let mut next = cur.clone();
            next.add_term(e, coeff.neg());
            cur = next.add(&repl.mul(&monom));
        }
        // re-express y2^2 through y3: y2^2 = h2^-1 (y3 - h1 y2 - h0)
        let h2_inv = gh.h2.invert().expect("unit checked at construction");
        let mut out = CotangentPoly::zero();
        for (&(_, e2, _), s) in cur.terms.iter() {
            match e2 {
                0 => out.add_term((0, 0, 0), s.clone()),
                1 => out.add_term((0, 1, 0), s.clone()),
                2 => {
                    out.add_term((0, 0, 1), s.mul(&h2_inv));
                    out.add_term((0, 1, 0), s.mul(&h2_inv).mul(&gh.h1).neg());
                    out.add_term((0, 0, 0), s.mul(&h2_inv).mul(&gh.h0).neg());
                }
                _ => unreachable!("cube reduction left degree {e2}"),
            }
        }
        out
    }

    /// Bracket-closure test: reduces `{g_i, g_j}` for all generator pairs.
    /// Returns the verdict and the nonzero normal forms with their pair
    /// indices.
    pub fn f_condition_bracket(&self) -> (bool, Vec<((usize, usize), CotangentPoly)>) {
        let mut bad = Vec::new();
        let n = self.generators.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let br = poisson(&self.generators[i], &self.generators[j]);
                let nf = self.reduce(&br);
                if !nf.is_zero() {
                    bad.push(((i, j), nf));
                }
            }
        }
        (bad.is_empty(), bad)
    }
}

/// The `Z`-generators of a power frame at truncation `d`.
pub fn z_generators(gh: &GhFrame, d: u32) -> (CotangentPoly, CotangentPoly) {
    let mut z2 = CotangentPoly::zero();
    z2.add_term((0, 3, 0), Series2::one(d));
    z2.add_term((0, 2, 0), gh.g2.neg());
    z2.add_term((0, 1, 0), gh.g1.neg());
    z2.add_term((0, 0, 0), gh.g0.neg());
    let mut z3 = CotangentPoly::zero();
    z3.add_term((0, 0, 1), Series2::one(d));
    z3.add_term((0, 2, 0), gh.h2.neg());
    z3.add_term((0, 1, 0), gh.h1.neg());
    z3.add_term((0, 0, 0), gh.h0.neg());
    (z2, z3)
}

/// Residual data of the power-frame bracket `{Z3, Z2}`: the cofactor
/// (linear in `y2`) and the degree-2 remainder `r2 y2^2 + r1 y2 + r0` of
/// the division `{Z3, Z2} = cofactor * Z2 + remainder`. The multiplication
/// is an F-manifold structure iff `r2 = r1 = r0 = 0`.
#[derive(Debug, Clone)]
pub struct GhBracketResiduals {
    pub cofactor: CotangentPoly,
    pub r2: Series2,
    pub r1: Series2,
    pub r0: Series2,
}

impl GhBracketResiduals {
    pub fn is_f_manifold(&self) -> bool {
        self.r2.is_zero() && self.r1.is_zero() && self.r0.is_zero()
    }
}

/// Computes the generator bracket and divides by the monic cubic `Z2` in
/// `y2`. The `{Z2, Z3}` order makes the cofactor match the closed form
/// `2 d2(g2) h2 + (3 y2 + g2) d2(h2) + 3 d2(h1)`.
pub fn gh_bracket_residuals(gh: &GhFrame) -> GhBracketResiduals {
    let d = gh.truncation();
    let (z2, z3) = z_generators(gh, d);
    let br = poisson(&z2, &z3);
    let mut rem = br;
    let mut cof = CotangentPoly::zero();
    loop {
        let top = rem
            .terms()
            .filter(|(&(e1, e2, e3), _)| e1 == 0 && e3 == 0 && e2 >= 3)
            .map(|(e, _)| *e)
            .max_by_key(|&(_, e2, _)| e2);
        let Some(e) = top else { break };
        let coeff = rem.coeff(e);
        let mut m = CotangentPoly::zero();
        m.add_term((0, e.1 - 3, 0), coeff);
        cof = cof.add(&m);
        rem = rem.sub(&m.mul(&z2));
    }
    debug_assert!(rem.y_degree() <= 2);
    GhBracketResiduals {
        r2: rem.coeff((0, 2, 0)),
        r1: rem.coeff((0, 1, 0)),
        r0: rem.coeff((0, 0, 0)),
        cofactor: cof,
    }
}

/// The explicit right-hand sides of the three bracket identities between
/// the quadratic generators, as stated in closed form. Returns
/// `({Y22,Y23} - rhs, {Y33,Y23} - rhs, {Y22,Y33} - rhs)`; all three vanish
/// for every associative table.
pub fn quadratic_bracket_identity_residuals(table: &MultTable) -> Result<[CotangentPoly; 3]> {
    let ideal = SpectrumIdeal::from_table(table)?;
    let d = table.truncation();
    let f = table.abc();
    let (a2o, a2d, a3o) = f.obstructions();
    let d2 = |s: &Series2| s.deriv(Var::T2);
    let d3 = |s: &Series2| s.deriv(Var::T3);
    let y22 = &ideal.generators[1];
    let y23 = &ideal.generators[2];
    let y33 = &ideal.generators[3];
    let y2s = CotangentPoly::y(2, d).sub(&CotangentPoly::from_series(f.b3.clone()));
    let y3s = CotangentPoly::y(3, d).sub(&CotangentPoly::from_series(f.b2.clone()));
    let ser = CotangentPoly::from_series;

    // {Y22, Y23}
    let rhs1 = y22
        .scale_series(
            &d2(&f.b2)
                .scale(&rint(2))
                .sub(&d3(&f.b3).scale(&rint(2)))
                .sub(&d3(&f.a2)),
        )
        .sub(&y23.scale_series(&d2(&f.a2).add(&d3(&f.a3))))
        .sub(&y33.scale_series(&d2(&f.a3)))
        .sub(&y2s.scale_series(&a2o))
        .sub(&y3s.scale_series(&f.a3.mul(&a3o)))
        .add(&ser(f.a3.mul(&a2d).add(&f.a3.mul(&f.c3).mul(&a3o))));
    let lhs1 = poisson(y22, y23);

    // {Y33, Y23}
    let rhs2 = y33
        .scale_series(
            &d3(&f.b3)
                .scale(&rint(2))
                .sub(&d2(&f.b2).scale(&rint(2)))
                .sub(&d2(&f.c3)),
        )
        .sub(&y23.scale_series(&d3(&f.c3).add(&d2(&f.c2))))
        .sub(&y22.scale_series(&d3(&f.c2)))
        .sub(&y3s.scale_series(&a2d))
        .add(&y2s.scale_series(&f.c2.mul(&a3o)))
        .add(&ser(f.c2.mul(&a2o).sub(&f.c2.mul(&f.a2).mul(&a3o))));
    let lhs2 = poisson(y33, y23);

    // {Y22, Y33}
    let rhs3 = y22
        .scale_series(&d2(&f.c2).scale(&rint(2)))
        .add(&y23.scale_series(
            &d2(&f.b2)
                .scale(&rint(2))
                .sub(&d3(&f.b3).scale(&rint(2)))
                .sub(&d3(&f.a2))
                .add(&d2(&f.c3))
                .scale(&rint(2)),
        ))
        .sub(&y33.scale_series(&d3(&f.a3).scale(&rint(2))))
        .add(&y2s.scale_series(&a2d.add(&f.c3.mul(&a3o))))
        .add(&y3s.scale_series(&a2o.neg().add(&f.a2.mul(&a3o))))
        .add(&ser(
            f.c3.mul(&a2o)
                .sub(&f.a2.mul(&a2d))
                .sub(&f.a2.mul(&f.c3).add(&f.a3.mul(&f.c2)).mul(&a3o)),
        ));
    let lhs3 = poisson(y22, y33);

    Ok([lhs1.sub(&rhs1), lhs2.sub(&rhs2), lhs3.sub(&rhs3)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::tangent::AbcFrame;

    fn d() -> u32 {
        8
    }

    fn s(entries: &[(u32, u32, Rat)]) -> Series2 {
        Series2::from_entries(entries.iter().cloned(), d())
    }

    fn twisted_cubic_table() -> MultTable {
        AbcFrame {
            a1: s(&[(2, 0, rat(9, 4))]),
            a2: s(&[(0, 1, rat(-3, 2))]),
            a3: s(&[(1, 0, rat(-3, 2))]),
            b1: s(&[(1, 1, rat(3, 4))]),
            b2: s(&[(1, 0, rat(-1, 2))]),
            b3: s(&[(0, 1, rat(1, 2))]),
            c1: s(&[(0, 2, rat(-3, 4))]),
            c2: s(&[(0, 1, rat(-1, 2))]),
            c3: s(&[(1, 0, rat(3, 2))]),
        }
        .to_table()
    }

    #[test]
    fn poisson_conventions() {
        let dd = d();
        let y2 = CotangentPoly::y(2, dd);
        let y3 = CotangentPoly::y(3, dd);
        let t2 = CotangentPoly::from_series(Series2::monomial(1, 0, rat(1, 1), dd));
        // {y2, t2} = -1
        assert_eq!(poisson(&y2, &t2), CotangentPoly::constant(rat(-1, 1), dd - 1));
        // {y2, y3} = 0
        assert!(poisson(&y2, &y3).is_zero());
        // antisymmetry on a nontrivial pair
        let f = y2.mul(&t2).add(&y3.pow(2));
        let g = t2.mul(&y3);
        assert_eq!(poisson(&f, &g), poisson(&g, &f).neg());
    }

    #[test]
    fn reduce_generators_to_zero() {
        let t = twisted_cubic_table();
        let ideal = SpectrumIdeal::from_table(&t).unwrap();
        for g in ideal.generators() {
            assert!(ideal.reduce(g).is_zero(), "generator did not reduce: {g}");
        }
    }

    #[test]
    fn reduce_is_idempotent_and_linear() {
        let t = twisted_cubic_table();
        let ideal = SpectrumIdeal::from_table(&t).unwrap();
        let dd = d();
        let p = CotangentPoly::y(2, dd)
            .pow(3)
            .add(&CotangentPoly::y(3, dd).mul(&CotangentPoly::y(2, dd)));
        let q = CotangentPoly::y(3, dd)
            .pow(2)
            .scale_series(&s(&[(1, 0, rat(2, 1))]));
        let np = ideal.reduce(&p);
        assert_eq!(ideal.reduce(&np), np);
        let nq = ideal.reduce(&q);
        assert_eq!(ideal.reduce(&p.add(&q)), np.add(&nq));
    }

    #[test]
    fn two_path_reduction_agrees() {
        let t = twisted_cubic_table();
        let ideal = SpectrumIdeal::from_table(&t).unwrap();
        let dd = d();
        let p = CotangentPoly::y(2, dd)
            .pow(2)
            .mul(&CotangentPoly::y(3, dd).pow(2))
            .add(&CotangentPoly::y(2, dd).pow(4));
        assert_eq!(ideal.reduce(&p), ideal.reduce_alt(&p));
    }

    #[test]
    fn twisted_cubic_is_bracket_closed() {
        let t = twisted_cubic_table();
        let ideal = SpectrumIdeal::from_table(&t).unwrap();
        let (ok, bad) = ideal.f_condition_bracket();
        assert!(ok, "nonzero normal forms: {bad:?}");
    }

    #[test]
    fn quadratic_bracket_identity_on_twisted_cubic() {
        let t = twisted_cubic_table();
        for r in quadratic_bracket_identity_residuals(&t).unwrap() {
            assert!(r.is_zero(), "identity residual: {r}");
        }
    }

    #[test]
    fn gh_bracket_residuals_a3() {
        let dd = d();
        let gh = GhFrame {
            g2: Series2::zero(dd),
            g1: s(&[(0, 1, rat(-2, 1))]),
            g0: s(&[(1, 0, rat(-1, 1))]),
            h2: Series2::one(dd),
            h1: Series2::zero(dd),
            h0: Series2::zero(dd),
        };
        let res = gh_bracket_residuals(&gh);
        assert!(res.is_f_manifold());
        // non-example: h0 = t3 breaks closure with an explicit residual
        let bad = GhFrame {
            g2: Series2::zero(dd),
            g1: Series2::zero(dd),
            g0: s(&[(1, 0, rat(-1, 1))]),
            h2: Series2::one(dd),
            h1: Series2::zero(dd),
            h0: s(&[(0, 1, rat(1, 1))]),
        };
        let res = gh_bracket_residuals(&bad);
        assert!(!res.is_f_manifold());
    }
}
