//! End-to-end acceptance checks. Each test prints a single PASS line once
//! its criterion holds; tolerances and runtimes follow the project contract.

use limcycle::construct::{
    base_field, build_game, build_kolmogorov, christopher, cofactor, compose, epsilon_search,
    har, harnack_curve, hc_bound, known_lower_bound, recurrent_bound, Family,
};
use limcycle::curvegeom::{densify_oval, trace_ovals, Region};
use limcycle::dynamics::{
    count_cycles, green_flux, refine_cycle, FieldEval, VectorField, CYCLE_TOL, HYPERBOLIC_MIN,
};
use limcycle::error::Error;
use limcycle::polycore::{parse_poly, rat, rat_int, LinearPoly, Poly, Var};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TAU: f64 = 2.0 * std::f64::consts::PI;

fn p(s: &str) -> Poly {
    parse_poly(s).unwrap()
}

fn line(s: &str) -> LinearPoly {
    LinearPoly::from_poly(&p(s)).unwrap()
}

fn square(half: f64) -> Region {
    Region::new(-half, half, -half, half).unwrap()
}

fn pass(n: u32, name: &str) {
    println!("[acceptance] criterion {n} ({name}): PASS");
}

/// Criterion 1: certificate cofactor equals alpha*C_x + beta*C_y with zero
/// symbolic remainder for 500 randomized admissible (C, D, alpha, beta).
#[test]
fn criterion_1_cofactor_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1f2e3d4c);
    let region = square(2.0);
    let mut accepted = 0u32;
    let mut attempts = 0u32;
    while accepted < 500 {
        attempts += 1;
        assert!(attempts < 50_000, "admissible sampling stalled");
        // random curve of degree <= 4 with small integer coefficients
        let mut c = Poly::zero();
        for i in 0..=4u32 {
            for j in 0..=(4 - i) {
                let k: i64 = rng.gen_range(-3..=3);
                if k != 0 {
                    c = c.add(&Poly::monomial(i, j, rat_int(k)));
                }
            }
        }
        if c.degree() < 1 {
            continue;
        }
        // a far-off line is disjoint from every oval inside the region
        let a: i64 = rng.gen_range(1..=3);
        let b: i64 = rng.gen_range(-3..=3);
        let c0: i64 = rng.gen_range(100..=200);
        let d = LinearPoly::new(rat_int(a), rat_int(b), rat_int(c0)).unwrap();
        let (alpha, beta) = (rat_int(rng.gen_range(-3..=3)), rat_int(rng.gen_range(-3..=3)));
        if (&alpha * &d.a + &beta * &d.b).is_zero() {
            continue;
        }
        let Ok((_, cert)) = christopher(&c, &d, &alpha, &beta, &region) else {
            continue; // degenerate curve or dividing line: resample
        };
        let expected = c
            .differentiate(Var::X)
            .scale(&alpha)
            .add(&c.differentiate(Var::Y).scale(&beta));
        assert!(
            cert.cofactor.sub(&expected).is_zero(),
            "cofactor mismatch for C = {c}"
        );
        cert.verify().unwrap();
        accepted += 1;
    }
    pass(1, "cofactor exactness, 500 randomized constructions");
}

/// Criterion 2: |divergence exponent| along the circle oval matches the
/// interior flux 2*pi*(2/sqrt(3) - 1), both within 1e-6 relative.
#[test]
fn criterion_2_green_identity() {
    let c = p("x^2 + y^2 - 1");
    let d = line("y - 2");
    let (alpha, beta) = (rat_int(0), rat_int(1));
    let region = square(2.0);
    let (field, _) = christopher(&c, &d, &alpha, &beta, &region).unwrap();

    let ovals = trace_ovals(&c, &region, 512).unwrap();
    assert_eq!(ovals.len(), 1);
    let fine = densify_oval(&c, &ovals[0], 16).unwrap();
    let flux = green_flux(&fine, &d, &alpha, &beta, 1e-9).unwrap();

    let closed_form = TAU * (2.0 / 3.0_f64.sqrt() - 1.0);
    let rel_flux = (flux - closed_form).abs() / closed_form;
    assert!(rel_flux < 1e-6, "flux off the closed form by {rel_flux:e}");

    let fe = FieldEval::new(&field);
    let seed = fine.vertices[0];
    let v = fe.velocity(seed[0], seed[1]);
    let n = v[0].hypot(v[1]);
    let report = refine_cycle(&field, seed, [v[0] / n, v[1] / n]).unwrap();
    let rel = (report.exponent.abs() - flux).abs() / flux;
    assert!(rel < 1e-6, "exponent vs flux off by {rel:e}");
    pass(2, "Green identity on the circle instance");
}

/// Criterion 3: polar-reduction exponents for the catalog fields, and the
/// cycle count of the nested degree-5 field.
#[test]
fn criterion_3_polar_reduction() {
    let x1 = base_field(&[rat_int(1)]).unwrap();
    let r = refine_cycle(&x1, [1.05, 0.0], [0.0, 1.0]).unwrap();
    assert!((r.exponent + 2.0 * TAU).abs() < 1e-4);

    let x2 = base_field(&[rat_int(1), rat_int(4)]).unwrap();
    let inner = refine_cycle(&x2, [1.02, 0.0], [0.0, 1.0]).unwrap();
    assert!((inner.exponent / (-6.0 * TAU) - 1.0).abs() < 1e-4);
    let outer = refine_cycle(&x2, [2.02, 0.0], [0.0, 1.0]).unwrap();
    assert!((outer.exponent / (24.0 * TAU) - 1.0).abs() < 1e-4);

    let cycles = count_cycles(&x2, &square(3.0), 64).unwrap();
    assert_eq!(cycles.len(), 2);
    pass(3, "polar-reduction exponent oracle and cycle count");
}

/// Criterion 4: traced oval counts for the catalog curves match the count
/// formula and are stable under grid doubling.
#[test]
fn criterion_4_harnack_counts() {
    let region = square(4.0);
    for (m, want) in [(2u32, 1usize), (3, 1), (4, 4)] {
        let curve = harnack_curve(m).unwrap();
        assert_eq!(har(m).unwrap() as usize, want);
        let coarse = trace_ovals(&curve, &region, 256).unwrap();
        let fine = trace_ovals(&curve, &region, 512).unwrap();
        assert_eq!(coarse.len(), want, "degree {m} at grid 256");
        assert_eq!(fine.len(), want, "degree {m} at grid 512");
    }
    pass(4, "catalog oval counts, grid-stable");
}

/// Criterion 5: composing the circle with a relocated one-cycle base yields
/// exactly two hyperbolic cycles, and the restriction identity is exact.
#[test]
fn criterion_5_composition_desk_instance() {
    let c = p("x^2 + y^2 - 1");
    let region = Region::new(-2.0, 10.0, -4.0, 4.0).unwrap();
    // a wide relocation scale keeps the base field moderate on the unit
    // circle (the relocated coordinates stay O(1) there), which keeps the
    // transverse growth along the oval within floating-point reach
    let base = limcycle::construct::relocate(
        &base_field(&[rat_int(1)]).unwrap(),
        (&rat_int(5), &rat_int(0)),
        &rat(7, 2),
    )
    .unwrap();
    let (y, _) = christopher(&c, &line("y - 2"), &rat_int(0), &rat_int(1), &region).unwrap();
    let comp = epsilon_search(&c, &base, &y, &region).unwrap();

    assert_eq!(comp.oval_reports.len(), 1);
    assert_eq!(comp.base_reports.len(), 1);
    for report in comp.oval_reports.iter().chain(comp.base_reports.iter()) {
        assert!(report.hyperbolic && report.exponent.abs() > HYPERBOLIC_MIN);
        assert!(report.closure_error < CYCLE_TOL);
    }
    for (zc, yc) in [(&comp.z.p, &y.p), (&comp.z.q, &y.q)] {
        let (_, rem) = zc
            .sub(&yc.scale(&comp.epsilon))
            .divide_with_remainder(&c)
            .unwrap();
        assert!(rem.is_zero(), "restriction identity violated");
    }
    comp.certificate.verify().unwrap();
    pass(5, "two-cycle composition with exact restriction identity");
}

/// Criterion 6: quadrant builder produces a degree-5 system in factored
/// form with a hyperbolic cycle strictly inside the first quadrant.
#[test]
fn criterion_6_kolmogorov_instance() {
    let comp = build_kolmogorov(
        &[rat_int(1)],
        (&rat_int(3), &rat_int(3)),
        &rat(1, 2),
        &line("x + 1"),
        &rat_int(1),
        &rat_int(0),
    )
    .unwrap();
    assert_eq!(comp.z.degree(), 5);
    let (pt, qt) = comp.factors.as_ref().unwrap();
    assert!(comp.z.p.sub(&Poly::x().mul(pt)).is_zero());
    assert!(comp.z.q.sub(&Poly::y().mul(qt)).is_zero());
    assert!(!comp.base_reports.is_empty());
    for report in &comp.base_reports {
        assert!(report.hyperbolic);
        assert!(report.orbit.iter().all(|v| v[0] > 0.0 && v[1] > 0.0));
    }
    pass(6, "factored quadrant system with interior cycle");
}

/// Criterion 7: unit-square builder: components divisible by x(x-1) and
/// y(y-1), with a hyperbolic cycle strictly inside (0,1)^2.
#[test]
fn criterion_7_game_instance() {
    let comp = build_game(
        &[rat_int(1)],
        (&rat(1, 2), &rat(1, 2)),
        &rat(1, 8),
        &line("x - 2"),
        &rat_int(1),
        &rat_int(0),
    )
    .unwrap();
    let (_, rem_p) = comp.z.p.divide_with_remainder(&p("x^2 - x")).unwrap();
    let (_, rem_q) = comp.z.q.divide_with_remainder(&p("y^2 - y")).unwrap();
    assert!(rem_p.is_zero() && rem_q.is_zero());
    assert!(!comp.base_reports.is_empty());
    for report in &comp.base_reports {
        assert!(report.hyperbolic);
        assert!(report
            .orbit
            .iter()
            .all(|v| v[0] > 0.0 && v[0] < 1.0 && v[1] > 0.0 && v[1] < 1.0));
    }
    pass(7, "factored unit-square system with interior cycle");
}

/// Criterion 8: every published table value verbatim plus the two derived
/// bounds.
#[test]
fn criterion_8_tables() {
    let hilbert = [
        (2, 4),
        (3, 13),
        (4, 28),
        (5, 37),
        (6, 53),
        (7, 74),
        (8, 96),
        (9, 120),
        (10, 142),
    ];
    let kolmogorov = [
        (1, 0),
        (2, 0),
        (3, 6),
        (4, 13),
        (5, 22),
        (6, 28),
        (7, 37),
        (8, 53),
    ];
    let square_table = [
        (2, 0),
        (3, 1),
        (4, 5),
        (5, 5),
        (6, 5),
        (7, 13),
        (8, 28),
        (9, 37),
        (10, 53),
    ];
    for (n, v) in hilbert {
        assert_eq!(known_lower_bound(Family::Hilbert, n).unwrap().value, v);
    }
    for (n, v) in kolmogorov {
        assert_eq!(known_lower_bound(Family::Kolmogorov, n).unwrap().value, v);
    }
    for (n, v) in square_table {
        assert_eq!(known_lower_bound(Family::Square, n).unwrap().value, v);
    }
    assert_eq!(recurrent_bound(2, 4).unwrap(), 8);
    assert_eq!(
        hc_bound(2, &p("x^2 + y^2 - 1"), &square(2.0)).unwrap(),
        5
    );
    pass(8, "tables verbatim, derived bounds");
}

/// Criterion 9: every contracted error path yields its named error with the
/// agreed exit-code class, never a panic.
#[test]
fn criterion_9_error_paths() {
    let circle = p("x^2 + y^2 - 1");
    let region = square(2.0);

    let degenerate = circle.mul(&circle);
    let e = christopher(&degenerate, &line("y - 2"), &rat_int(0), &rat_int(1), &region)
        .unwrap_err();
    assert!(matches!(e, Error::DegenerateCurve));
    assert_eq!(e.exit_code(), 2);

    let e = christopher(&p("x y"), &line("x"), &rat_int(1), &rat_int(0), &region).unwrap_err();
    assert!(matches!(e, Error::LineDividesCurve));
    assert_eq!(e.exit_code(), 2);

    let e = christopher(&circle, &line("x - 2"), &rat_int(0), &rat_int(1), &region).unwrap_err();
    assert!(matches!(e, Error::DegenerateParameters));
    assert_eq!(e.exit_code(), 2);

    // base cycle sitting right on C = 0
    let base = base_field(&[rat_int(1)]).unwrap();
    let (y, _) = christopher(&circle, &line("y - 2"), &rat_int(0), &rat_int(1), &region).unwrap();
    let e = epsilon_search(&circle, &base, &y, &region).unwrap_err();
    assert!(matches!(e, Error::RelocationNeeded(_)));
    assert_eq!(e.exit_code(), 2);

    let e = harnack_curve(5).unwrap_err();
    assert!(matches!(e, Error::UnsupportedHarnackDegree(5)));
    assert_eq!(e.exit_code(), 1);

    // not-invariant is a negative verification, not a crash
    let constant_field = VectorField::new(p("1"), Poly::zero()).unwrap();
    let e = cofactor(&circle, &constant_field).unwrap_err();
    assert!(matches!(e, Error::NotInvariant { .. }));
    assert_eq!(e.exit_code(), 2);

    // compose rejects a field with no certificate for the curve
    let e = compose(&circle, &base, &constant_field, &rat(1, 8)).unwrap_err();
    assert!(matches!(e, Error::InvalidCertificate(_)));
    pass(9, "error paths with contracted exit codes");
}
