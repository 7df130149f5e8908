//! Per-family verification of the catalog constructors: associativity,
//! both integrability checks, Euler residuals, pointwise and generic
//! classification against the expected metadata, and the branchwise
//! spectral-cover identities of the semisimple families.

use fmankit::catalog::{self, BranchData, FamilySpec};
use fmankit::euler::{self, MeroSeries2, VectorField};
use fmankit::rat::{rat, rint, Rat};
use fmankit::series::{ExtSeries, Series2, Var};
use fmankit::spectrum::{self, SpectrumIdeal};
use fmankit::tangent::AlgebraType;
use num_traits::{One, Zero};

const D: u32 = 8;

fn check_build(spec: &FamilySpec) -> catalog::BuildResult {
    let d = catalog::suggested_truncation(spec).max(D);
    let b = catalog::build(spec, d).unwrap_or_else(|e| panic!("build {}: {e}", spec.name()));
    let name = &b.meta.family;
    assert!(b.table.is_associative(), "{name}: not associative");
    let closed = b.table.is_f_manifold_closed_form().unwrap();
    assert!(closed.is_f_manifold, "{name}: closed-form check failed");
    let ideal = SpectrumIdeal::from_table(&b.table).unwrap();
    let (ok, bad) = ideal.f_condition_bracket();
    assert!(ok, "{name}: bracket check failed: {bad:?}");
    for e in &b.euler {
        let res = euler::lie_residuals(&b.table, e).unwrap();
        for r in &res {
            assert!(
                r.is_zero(),
                "{name}: Euler residual at pair {:?}: {:?}",
                r.pair,
                r.components
            );
        }
    }
    assert_eq!(
        b.table.generic_type().unwrap(),
        b.meta.generic_type,
        "{name}: generic type"
    );
    assert_eq!(
        b.table.classify_at(&Rat::zero(), &Rat::zero()).unwrap(),
        b.meta.origin_type,
        "{name}: origin type"
    );
    if let Some(gh) = &b.gh {
        let res = spectrum::gh_bracket_residuals(gh);
        assert!(res.is_f_manifold(), "{name}: power-frame residuals");
        // the two presentations describe the same multiplication
        let t2 = gh.to_table().unwrap();
        let d = t2.truncation().min(b.table.truncation());
        for (x, y) in t2.coeffs().iter().zip(b.table.coeffs().iter()) {
            assert_eq!(x.truncate(d), y.truncate(d), "{name}: frame mismatch");
        }
    }
    b
}

#[test]
fn thm5_2_family() {
    let d = D;
    for b2 in [
        Series2::zero(d),
        Series2::monomial(1, 0, Rat::one(), d),
        Series2::monomial(1, 1, Rat::one(), d),
        Series2::monomial(2, 0, Rat::one(), d)
            .mul(&Series2::one(d).add(&Series2::monomial(0, 1, Rat::one(), d))),
    ] {
        let spec = FamilySpec::Thm5_2 { b2: b2.clone() };
        let b = check_build(&spec);
        assert!(!b.euler.is_empty(), "expected an Euler field for this b2");
        // everywhere type Q1
        assert_eq!(
            b.table.classify_at(&rat(1, 3), &rat(-2, 1)).unwrap(),
            AlgebraType::Q1
        );
        for e in &b.euler {
            assert!(catalog::euler_constraint_check(&spec, e).unwrap());
        }
    }
    // domain violation: b2 with a constant term
    assert!(catalog::build(
        &FamilySpec::Thm5_2 {
            b2: Series2::one(d)
        },
        d
    )
    .is_err());
}

#[test]
fn thm5_2_radical_bracket_note() {
    // For b2 != 0 the reduced ideal (y1-1, y2, y3-b2) is not bracket
    // closed: {y2, y3 - b2} = d2(b2) is a nonzero function.
    let d = D;
    let b2 = Series2::monomial(1, 0, Rat::one(), d);
    let y2 = spectrum::CotangentPoly::y(2, d);
    let y3mb2 = spectrum::CotangentPoly::y(3, d)
        .sub(&spectrum::CotangentPoly::from_series(b2.clone()));
    let br = spectrum::poisson(&y2, &y3mb2);
    // a pure series, equal to d2(b2) = 1 up to sign convention
    assert_eq!(br.y_degree(), 0);
    assert!(!br.is_zero());
}

#[test]
fn thm5_4a_family() {
    let spec = FamilySpec::Thm5_4a;
    let b = check_build(&spec);
    // d2 o d2 = d3 exactly
    let prod = b.table.basis_product(2, 2);
    assert!(prod[0].is_zero() && prod[1].is_zero());
    assert_eq!(prod[2], Series2::one(D));
    // Q2 at every sampled point
    for (x, y) in [(0, 0), (1, 2), (-3, 5)] {
        assert_eq!(
            b.table.classify_at(&rint(x), &rint(y)).unwrap(),
            AlgebraType::Q2
        );
    }
    // Euler family freedom: random eps2, eps30 polynomials
    for (e2, e30) in [
        (vec![(0u32, rat(1, 1))], vec![]),
        (vec![(1, rat(2, 3)), (4, rat(-1, 2))], vec![(0u32, rat(5, 1))]),
        (vec![(2, rat(-7, 5))], vec![(3, rat(1, 4))]),
    ] {
        let eps2 = Series2::from_entries(e2.iter().map(|(i, c)| (*i, 0, c.clone())), D);
        let eps30 = Series2::from_entries(e30.iter().map(|(i, c)| (*i, 0, c.clone())), D);
        let e = catalog::thm5_4a_euler(&eps2, &eps30, D);
        assert!(euler::is_euler_field(&b.table, &e).unwrap());
        assert!(catalog::euler_constraint_check(&spec, &e).unwrap());
    }
    // regularity at the origin iff eps2(0) != 0
    let e_reg = catalog::thm5_4a_euler(&Series2::one(D), &Series2::zero(D), D);
    assert!(euler::regular_at(&b.table, &e_reg, &Rat::zero(), &Rat::zero()).unwrap());
    let e_irr = catalog::thm5_4a_euler(
        &Series2::monomial(1, 0, Rat::one(), D),
        &Series2::zero(D),
        D,
    );
    assert!(!euler::regular_at(&b.table, &e_irr, &Rat::zero(), &Rat::zero()).unwrap());
}

#[test]
fn thm5_4b_family() {
    for f in [
        Series2::monomial(1, 0, Rat::one(), D),
        Series2::monomial(2, 0, Rat::one(), D),
        Series2::monomial(1, 1, rat(3, 2), D),
    ] {
        let spec = FamilySpec::Thm5_4b { f: f.clone() };
        let b = check_build(&spec);
        assert!(!b.euler.is_empty());
        for e in &b.euler {
            assert!(catalog::euler_constraint_check(&spec, e).unwrap());
        }
        // type Q1 exactly on the zero locus of f
        assert_eq!(
            b.table.classify_at(&Rat::zero(), &rat(7, 2)).unwrap(),
            AlgebraType::Q1
        );
    }
    // generic type Q2 for f = t2 (sampled off the locus)
    let b = check_build(&FamilySpec::Thm5_4b {
        f: Series2::monomial(1, 0, Rat::one(), D),
    });
    assert_eq!(
        b.table.classify_at(&rat(1, 1), &rat(0, 1)).unwrap(),
        AlgebraType::Q2
    );
    // non-example: f with a constant term is rejected
    assert!(catalog::build(
        &FamilySpec::Thm5_4b {
            f: Series2::one(D)
        },
        D
    )
    .is_err());
}

#[test]
fn thm5_4c_family() {
    let t2 = Series2::monomial(1, 0, Rat::one(), D);
    let t3 = Series2::monomial(0, 1, Rat::one(), D);
    for (f1, f2, h, expect_euler) in [
        (t2.clone(), t3.clone(), Series2::one(D), true),
        (t2.clone(), t3.mul(&t3), Series2::one(D), true),
        (t2.clone(), t3.clone(), t2.clone(), false),
    ] {
        let spec = FamilySpec::Thm5_4c {
            f1: f1.clone(),
            f2: f2.clone(),
            h: h.clone(),
        };
        let b = check_build(&spec);
        assert_eq!(!b.euler.is_empty(), expect_euler, "Euler attachment");
        for e in &b.euler {
            assert!(catalog::euler_constraint_check(&spec, e).unwrap());
        }
        let v = b.table.is_f_manifold_closed_form().unwrap();
        assert_eq!(
            v.case,
            Some(fmankit::tangent::IntegrabilityCase::VanishingObstructions)
        );
    }
    // the weighted field for (t2, t3^2): w2 = 3/13, w3 = 2/13
    let b = catalog::build(
        &FamilySpec::Thm5_4c {
            f1: t2.clone(),
            f2: t3.mul(&t3),
            h: Series2::one(D),
        },
        D,
    )
    .unwrap();
    let e = &b.euler[0];
    assert_eq!(
        e.eps2.to_series().unwrap(),
        Series2::monomial(1, 0, rat(3, 13), D)
    );
    assert_eq!(
        e.eps3.to_series().unwrap(),
        Series2::monomial(0, 1, rat(2, 13), D)
    );
    // gcd violation
    assert!(catalog::build(
        &FamilySpec::Thm5_4c {
            f1: t2.mul(&t3),
            f2: t3.mul(&t3),
            h: Series2::one(D),
        },
        D
    )
    .is_err());
}

#[test]
fn thm5_6_family() {
    for p in [2u32, 3, 4] {
        let spec = FamilySpec::Thm5_6 { p };
        let b = check_build(&spec);
        // caustic t2 = 0 carries Q2, off-caustic Q3
        assert_eq!(
            b.table.classify_at(&Rat::zero(), &rat(5, 1)).unwrap(),
            AlgebraType::Q2
        );
        assert_eq!(
            b.table.classify_at(&Rat::one(), &Rat::one()).unwrap(),
            AlgebraType::Q3
        );
        // disc vanishes identically, R does not
        let inv = b.table.r_invariants().unwrap();
        assert!(inv.disc.is_zero());
        assert!(!inv.r1.is_zero() || !inv.r2.is_zero() || !inv.r3.is_zero());
        // Euler family freedom in eps30
        for eps30 in [
            Series2::zero(D),
            Series2::monomial(1, 0, rat(2, 7), D),
            Series2::from_entries([(0, 0, rat(1, 3)), (4, 0, rat(-2, 1))], D),
        ] {
            let e = catalog::thm5_6_euler(p, &eps30, D);
            assert!(euler::is_euler_field(&b.table, &e).unwrap(), "p={p}");
            assert!(catalog::euler_constraint_check(&spec, &e).unwrap());
        }
        // perturbation off the family fails
        let mut bad = catalog::thm5_6_euler(p, &Series2::zero(D), D);
        bad.eps2 = bad.eps2.add(&MeroSeries2::holomorphic(Series2::monomial(
            2,
            0,
            Rat::one(),
            D,
        )));
        assert!(!euler::is_euler_field(&b.table, &bad).unwrap());
        assert!(!catalog::euler_constraint_check(&spec, &bad).unwrap());
    }
    // p = 2 matches the closed form d2 o d2 = (2 + 2 t3)^2 d3
    let b = catalog::build(&FamilySpec::Thm5_6 { p: 2 }, D).unwrap();
    let phi = Series2::constant(rint(2), D).add(&Series2::monomial(0, 1, rint(2), D));
    assert_eq!(b.table.basis_product(2, 2)[2], phi.mul(&phi));
}

#[test]
fn thm5_6_power_frame_relations() {
    // d2^o3 = (d2 f) d2^o2 with f = t2^p + t2^(2p-2) t3, and h2 = phi^-2.
    for p in [2u32, 3] {
        let b = catalog::build(&FamilySpec::Thm5_6 { p }, D).unwrap();
        let gh = b.gh.as_ref().unwrap();
        let f = Series2::monomial(p, 0, Rat::one(), D)
            .add(&Series2::monomial(2 * p - 2, 1, Rat::one(), D));
        let d2f = f.deriv(Var::T2);
        assert_eq!(gh.g2, d2f.truncate(gh.g2.truncation()).extend_truncation(gh.g2.truncation()), "p={p}");
        assert!(gh.g1.is_zero() && gh.g0.is_zero());
        let phi = Series2::constant(rint(p as i64), D)
            .add(&Series2::monomial(p - 2, 1, rint(2 * p as i64 - 2), D));
        assert_eq!(gh.h2.mul(&phi.mul(&phi)), Series2::one(D));
    }
}

#[test]
fn lem5_8_family() {
    for p in [2u32, 3, 4] {
        let spec = FamilySpec::Lem5_8 { p };
        let b = check_build(&spec);
        assert_eq!(
            b.table.classify_at(&Rat::one(), &Rat::zero()).unwrap(),
            AlgebraType::Q3
        );
        assert_eq!(
            b.table.classify_at(&Rat::zero(), &rat(5, 1)).unwrap(),
            AlgebraType::Q1
        );
        for e in &b.euler {
            assert!(catalog::euler_constraint_check(&spec, e).unwrap());
        }
        // eps2 must be exactly t2/p
        let bad = VectorField::euler(
            MeroSeries2::holomorphic(Series2::monomial(1, 0, Rat::one(), D)),
            MeroSeries2::holomorphic(Series2::zero(D)),
            D,
        );
        if p != 1 {
            assert!(!catalog::euler_constraint_check(&spec, &bad).unwrap());
        }
    }
}

#[test]
fn coxeter_families() {
    for (spec, disc_entries) in [
        (
            FamilySpec::Ex6_2A3,
            // 9 t2^2 + 32/3 t3^3 (the caustic 27 t2^2 + 32 t3^3 = 0 up to 3)
            vec![(2u32, 0u32, rat(9, 1)), (0, 3, rat(32, 3))],
        ),
        (FamilySpec::Ex6_2B3, vec![]),
        (FamilySpec::Ex6_2H3, vec![]),
    ] {
        let b = check_build(&spec);
        for e in &b.euler {
            assert!(catalog::euler_constraint_check(&spec, e).unwrap());
        }
        if !disc_entries.is_empty() {
            let inv = b.table.r_invariants().unwrap();
            let expected = Series2::from_entries(disc_entries.into_iter(), inv.disc.truncation());
            assert_eq!(inv.disc, expected, "{}", b.meta.family);
        }
    }
}

#[test]
fn coxeter_spectrum_relation() {
    // y3 - y2^2 lies in the ideal for all three reflection tables.
    for spec in [
        FamilySpec::Ex6_2A3,
        FamilySpec::Ex6_2B3,
        FamilySpec::Ex6_2H3,
    ] {
        let b = catalog::build(&spec, D).unwrap();
        let gh = b.gh.as_ref().unwrap();
        let ideal = SpectrumIdeal::from_gh(gh).unwrap();
        let rel = spectrum::CotangentPoly::y(3, D)
            .sub(&spectrum::CotangentPoly::y(2, D).pow(2));
        assert!(ideal.reduce(&rel).is_zero(), "{}", b.meta.family);
        // and through the quadratic-frame ideal of the same table
        let ideal_q = SpectrumIdeal::from_table(&b.table).unwrap();
        assert!(ideal_q.reduce(&rel).is_zero(), "{}", b.meta.family);
    }
}

#[test]
fn b3_caustic_components() {
    // Second caustic component of the B3 orbit space: t2 = 0 away from
    // t3 = 0 keeps two spectral sheets together.
    let b = catalog::build(&FamilySpec::Ex6_2B3, D).unwrap();
    assert_eq!(
        b.table.classify_at(&Rat::zero(), &Rat::one()).unwrap(),
        AlgebraType::Q3
    );
    // discriminant component t2 = t3^2
    assert_eq!(
        b.table.classify_at(&Rat::one(), &Rat::one()).unwrap(),
        AlgebraType::Q3
    );
    // generic point
    assert_eq!(
        b.table.classify_at(&rat(1, 1), &rat(2, 1)).unwrap(),
        AlgebraType::Q4
    );
}

#[test]
fn lem6_4_family() {
    for (p2, p3) in [(2u32, 2u32), (2, 3), (3, 4)] {
        let spec = FamilySpec::Lem6_4 { p2, p3 };
        let b = check_build(&spec);
        for e in &b.euler {
            assert!(catalog::euler_constraint_check(&spec, e).unwrap());
        }
        // caustic components
        assert_eq!(
            b.table.classify_at(&Rat::zero(), &Rat::one()).unwrap(),
            AlgebraType::Q3
        );
        assert_eq!(
            b.table.classify_at(&Rat::one(), &Rat::zero()).unwrap(),
            AlgebraType::Q3
        );
        assert_eq!(
            b.table.classify_at(&Rat::one(), &Rat::one()).unwrap(),
            AlgebraType::Q4
        );
    }
}

#[test]
fn lem6_4_eigenvalue_reading() {
    // At a semisimple point the normal form of the 1-form pairing with E,
    // evaluated on the three spectral points, gives the eigenvalues of
    // E o: the characteristic polynomial factors through them.
    let (p2, p3) = (2u32, 3u32);
    let b = catalog::build(&FamilySpec::Lem6_4 { p2, p3 }, D).unwrap();
    let e = &b.euler[0];
    let ideal = SpectrumIdeal::from_table(&b.table).unwrap();
    let t2v = Rat::one();
    let t3v = Rat::one();
    // alpha(E) with the t1-part dropped (t1 = 0 slice)
    let alpha = spectrum::CotangentPoly::from_series(e.eps1.clone())
        .add(&spectrum::CotangentPoly::y(2, D).scale_series(&e.eps2.to_series().unwrap()))
        .add(&spectrum::CotangentPoly::y(3, D).scale_series(&e.eps3.to_series().unwrap()));
    let nf = ideal.reduce(&alpha);
    // fiber points (y2, y3) over (1,1): (0,0), (p2 t2^(p2-1), 0), (0, p3 t3^(p3-1))
    let fiber = [
        [Rat::one(), Rat::zero(), Rat::zero()],
        [Rat::one(), rint(p2 as i64), Rat::zero()],
        [Rat::one(), Rat::zero(), rint(p3 as i64)],
    ];
    let eigen: Vec<Rat> = fiber
        .iter()
        .map(|y| nf.eval(y, &t2v, &t3v))
        .collect();
    // characteristic polynomial of E o at the point equals prod (x - eigen)
    let m = euler::multiplication_matrix_at(&b.table, e, &t2v, &t3v).unwrap();
    let tr: Rat = (0..3).map(|i| m[i][i].clone()).sum();
    let sum_eigen: Rat = eigen.iter().cloned().sum();
    assert_eq!(tr, sum_eigen);
    let det = m[0][0].clone()
        * (m[1][1].clone() * m[2][2].clone() - m[1][2].clone() * m[2][1].clone())
        - m[0][1].clone() * (m[1][0].clone() * m[2][2].clone() - m[1][2].clone() * m[2][0].clone())
        + m[0][2].clone() * (m[1][0].clone() * m[2][1].clone() - m[1][1].clone() * m[2][0].clone());
    let prod_eigen: Rat = eigen.iter().cloned().product();
    assert_eq!(det, prod_eigen);
}

#[test]
fn lem6_5_family() {
    let spec = FamilySpec::Lem6_5;
    let b = check_build(&spec);
    let inv = b.table.r_invariants().unwrap();
    let expected = Series2::from_entries(
        [(0, 4, rat(9, 4)), (2, 2, rat(27, 2)), (4, 0, rat(-27, 4))],
        inv.disc.truncation(),
    );
    assert_eq!(inv.disc, expected);
    for e in &b.euler {
        assert!(catalog::euler_constraint_check(&spec, e).unwrap());
    }
    assert_eq!(
        b.table.classify_at(&Rat::one(), &Rat::one()).unwrap(),
        AlgebraType::Q4
    );
}

fn ext_eval_eq66(b: &catalog::BuildResult) {
    // Branchwise spectral relation: d3 f = h2 (d2 f)^2 + h1 (d2 f) + h0
    // in the root extension.
    let gh = b.gh.as_ref().unwrap();
    match b.branches.as_ref().unwrap() {
        BranchData::Split(fs) => {
            for f in fs {
                let df = f.deriv(Var::T2);
                let lhs = f.deriv(Var::T3);
                let rhs = gh
                    .h2
                    .mul(&df.mul(&df))
                    .add(&gh.h1.mul(&df))
                    .add(&gh.h0.clone());
                assert!(
                    lhs.sub(&rhs).is_zero(),
                    "{}: split branch relation failed",
                    b.meta.family
                );
            }
        }
        BranchData::Ext(f) => {
            let k = f.k();
            let df = f.deriv_t2().unwrap();
            let lhs = f.deriv_t3();
            let embed = |s: &Series2| ExtSeries::from_series(k, s.clone());
            let rhs = df
                .mul(&df)
                .mul(&embed(&gh.h2))
                .add(&df.mul(&embed(&gh.h1)))
                .add(&embed(&gh.h0));
            assert!(
                lhs.sub(&rhs).is_zero(),
                "{}: extension branch relation failed",
                b.meta.family
            );
        }
    }
}

#[test]
fn thm7_1_families() {
    let g0 = |v: &[i64]| -> Vec<Rat> { v.iter().map(|&n| rint(n)).collect() };
    let cases: Vec<FamilySpec> = vec![
        FamilySpec::Thm7_1a {
            p: 2,
            q: 2,
            gamma: g0(&[2]),
        },
        FamilySpec::Thm7_1a {
            p: 2,
            q: 3,
            gamma: g0(&[1]),
        },
        FamilySpec::Thm7_1a {
            p: 3,
            q: 4,
            gamma: vec![rat(1, 2), rat(-3, 1)],
        },
        FamilySpec::Thm7_1b {
            p: 2,
            gamma: g0(&[0]),
        },
        FamilySpec::Thm7_1b {
            p: 3,
            gamma: vec![rat(2, 3), Rat::zero()],
        },
        FamilySpec::Thm7_1c {
            p: 2,
            q: 2,
            gamma: g0(&[1]),
        },
        FamilySpec::Thm7_1c {
            p: 2,
            q: 3,
            gamma: vec![rat(-5, 2)],
        },
        FamilySpec::Thm7_1d {
            p: 2,
            gamma: g0(&[0]),
        },
        FamilySpec::Thm7_1d {
            p: 3,
            gamma: vec![rat(1, 5), rat(7, 2)],
        },
        FamilySpec::Thm7_1e {
            p: 2,
            gamma: g0(&[3]),
        },
        FamilySpec::Thm7_1e {
            p: 3,
            gamma: vec![Rat::zero(), rat(-1, 4)],
        },
    ];
    for spec in &cases {
        let b = check_build(spec);
        ext_eval_eq66(&b);
        assert_eq!(
            b.table.classify_at(&Rat::zero(), &rat(3, 1)).unwrap(),
            AlgebraType::Q2,
            "{}: caustic type",
            b.meta.family
        );
    }
}

#[test]
fn thm7_1b_p2_closed_form() {
    // p = 2, gamma = (0): rho = t3, f = t2^(5/2) + t2^3 t3,
    // h2 = ((5/2)^2 - 9 t2 t3^2)^-1, h1 = h2 * (-6 t2^2 t3).
    let b = catalog::build(
        &FamilySpec::Thm7_1b {
            p: 2,
            gamma: vec![Rat::zero()],
        },
        D,
    )
    .unwrap();
    let gh = b.gh.as_ref().unwrap();
    let denom = Series2::constant(rat(25, 4), D)
        .sub(&Series2::monomial(1, 2, rint(9), D));
    assert_eq!(gh.h2.mul(&denom), Series2::one(D));
    assert_eq!(
        gh.h1,
        gh.h2.mul(&Series2::monomial(2, 1, rint(-6), D))
    );
}

#[test]
fn cor7_2_families_have_holomorphic_eulers() {
    let cases: Vec<FamilySpec> = vec![
        FamilySpec::Cor7_2ai { tau0: rint(2) },
        FamilySpec::Cor7_2aii {
            q: 3,
            tau0: Rat::one(),
        },
        FamilySpec::Cor7_2aiii {
            p: 3,
            gamma0: rint(2),
        },
        FamilySpec::Cor7_2b { p: 2 },
        FamilySpec::Cor7_2b { p: 3 },
        FamilySpec::Cor7_2c {
            q: 2,
            tau0: Rat::one(),
        },
        FamilySpec::Cor7_2d { p: 2 },
        FamilySpec::Cor7_2e { p: 2 },
    ];
    for spec in &cases {
        let b = check_build(spec);
        for e in &b.euler {
            assert!(
                e.eps2.is_holomorphic() && e.eps3.is_holomorphic(),
                "{}: Euler field should be holomorphic",
                b.meta.family
            );
        }
    }
    // Cor 7.2 (a)(i): eps2 = t2/2, eps3 = 0
    let b = catalog::build(&FamilySpec::Cor7_2ai { tau0: rint(2) }, D).unwrap();
    let e = &b.euler[0];
    assert_eq!(
        e.eps2.to_series().unwrap(),
        Series2::monomial(1, 0, rat(1, 2), D)
    );
    assert!(e.eps3.is_zero());
    // Cor 7.2 (b): eps3 = -(p - 3/2)/(1/2 + p) t3
    for p in [2u32, 3] {
        let b = catalog::build(&FamilySpec::Cor7_2b { p }, D).unwrap();
        let e = &b.euler[0];
        let coeff = -(rint(p as i64) - rat(3, 2)) / (rat(1, 2) + rint(p as i64));
        assert_eq!(
            e.eps3.to_series().unwrap(),
            Series2::monomial(0, 1, coeff, D)
        );
    }
}

#[test]
fn thm7_1_meromorphic_euler_poles() {
    // p >= 3 with q > p: (q - p + t2 d2)(rho) has a nonzero constant term,
    // so the t2^(2-p) factor survives as a genuine pole.
    let spec = FamilySpec::Thm7_1a {
        p: 3,
        q: 4,
        gamma: vec![rint(2), rint(1)],
    };
    let b = catalog::build(&spec, catalog::suggested_truncation(&spec)).unwrap();
    let e = &b.euler[0];
    assert!(e.eps3.pole() > 0, "expected a t2-pole in eps3");
    // the Lie residual still vanishes after clearing poles (checked in
    // check_build for all builds; assert directly once more)
    assert!(euler::is_euler_field(&b.table, e).unwrap());
}

#[test]
fn product_families() {
    for spec in [
        FamilySpec::ProdA1A1A1,
        FamilySpec::ProdA1I2m { m: 3 },
        FamilySpec::ProdA1I2m { m: 4 },
        FamilySpec::ProdA1N2,
    ] {
        let b = check_build(&spec);
        for e in &b.euler {
            assert!(euler::is_euler_field(&b.table, e).unwrap());
        }
    }
    // expected origin types
    let origin = |spec: &FamilySpec| {
        catalog::build(spec, D)
            .unwrap()
            .table
            .classify_at(&Rat::zero(), &Rat::zero())
            .unwrap()
    };
    assert_eq!(origin(&FamilySpec::ProdA1A1A1), AlgebraType::Q4);
    assert_eq!(origin(&FamilySpec::ProdA1I2m { m: 3 }), AlgebraType::Q3);
    assert_eq!(origin(&FamilySpec::ProdA1N2), AlgebraType::Q3);
    // regular Euler field at 0 for the A1 x N2 product
    let b = catalog::build(&FamilySpec::ProdA1N2, D).unwrap();
    assert!(euler::regular_at(&b.table, &b.euler[0], &Rat::zero(), &Rat::zero()).unwrap());
}

#[test]
fn product_partial_units_are_idempotent() {
    // The product tables come from block multiplication: the partial units
    // e1 = d1 - d2, ev1 = d2 - d3 (or d2 itself), ev2 = d3 must square to
    // themselves and annihilate each other where the factors split.
    let b = catalog::build(&FamilySpec::ProdA1A1A1, D).unwrap();
    let z = || Series2::zero(D);
    let one = || Series2::one(D);
    let e1 = [one(), Series2::one(D).neg(), z()];
    let ev1 = [z(), one(), Series2::one(D).neg()];
    let ev2 = [z(), z(), one()];
    for (u, name) in [(&e1, "e1"), (&ev1, "ev1"), (&ev2, "ev2")] {
        let sq = b.table.mult(u, u);
        for k in 0..3 {
            assert_eq!(sq[k], u[k], "{name} not idempotent");
        }
    }
    for (u, v) in [(&e1, &ev1), (&e1, &ev2), (&ev1, &ev2)] {
        let prod = b.table.mult(u, v);
        assert!(prod.iter().all(Series2::is_zero), "cross product nonzero");
    }
    // A1 x I2(m): e1 = d1 - d2 is the first factor's unit
    let b = catalog::build(&FamilySpec::ProdA1I2m { m: 3 }, D).unwrap();
    let sq = b.table.mult(&e1, &e1);
    for k in 0..3 {
        assert_eq!(sq[k], e1[k]);
    }
    // and d2 acts as the unit of the second factor on d3
    let d2 = [z(), one(), z()];
    let d3 = [z(), z(), one()];
    let prod = b.table.mult(&d2, &d3);
    for k in 0..3 {
        assert_eq!(prod[k], d3[k]);
    }
}

#[test]
fn i2m_caustic_classification() {
    let b = catalog::build(&FamilySpec::ProdA1I2m { m: 3 }, D).unwrap();
    // generic point semisimple, on t3 = 0 type Q3
    assert_eq!(
        b.table.classify_at(&rat(1, 2), &rat(1, 3)).unwrap(),
        AlgebraType::Q4
    );
    assert_eq!(
        b.table.classify_at(&rat(1, 2), &Rat::zero()).unwrap(),
        AlgebraType::Q3
    );
}

#[test]
fn psi_cubic_relation_on_catalog_tables() {
    // The trace-free sections satisfy their cubic relations on every
    // catalog table; exercised with polynomial weights on the reflection
    // table of rank B3.
    let b = catalog::build(&FamilySpec::Ex6_2B3, D).unwrap();
    let l1 = Series2::from_entries([(0, 0, rat(1, 2)), (1, 0, rat(2, 1))], D);
    let l2 = Series2::from_entries([(0, 1, rat(-1, 3)), (2, 0, rat(1, 1))], D);
    let res = b.table.psi_relation_residual(&l1, &l2).unwrap();
    assert!(res.iter().all(Series2::is_zero));
}

#[test]
fn unknown_family_constraint_is_reported() {
    let spec = FamilySpec::Thm7_1b {
        p: 2,
        gamma: vec![Rat::zero()],
    };
    let b = catalog::build(&spec, D).unwrap();
    assert!(matches!(
        catalog::euler_constraint_check(&spec, &b.euler[0]),
        Err(fmankit::Error::UnknownFamily(_))
    ));
}
