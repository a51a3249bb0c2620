//! Constructions with prescribed invariant algebraic curves: cofactor
//! certificates, curve-compatible fields whose ovals become hyperbolic limit
//! cycles, compositions that add the cycles of a base field to the ovals of
//! a curve, and the bookkeeping tables for the resulting lower bounds.

use num_traits::{Signed, Zero};

use crate::curvegeom::{line_disjoint_from_ovals, trace_ovals, Oval, Region, DEFAULT_GRID};
use crate::dynamics::{
    count_cycles, refine_cycle_near, CycleReport, FieldEval, VectorField, RETURN_T_MAX,
};
use crate::error::Error;
use crate::polycore::{
    curve_nondegenerate, format_poly, format_rat, gcd_bivariate, parse_poly, rat, rat_int,
    rat_to_f64, FloatPoly, LinearPoly, Poly, Rat, Var,
};
use crate::Result;

fn poly_lit(text: &str) -> Poly {
    parse_poly(text).expect("valid polynomial literal")
}

/// Exact witness that a curve is invariant for a field:
/// C_x·p + C_y·q = K·C as polynomials.
#[derive(Debug, Clone)]
pub struct InvarianceCertificate {
    pub curve: Poly,
    pub field: VectorField,
    pub cofactor: Poly,
}

impl InvarianceCertificate {
    /// Re-derive the identity from scratch; zero tolerance.
    pub fn verify(&self) -> Result<()> {
        let lhs = self
            .curve
            .differentiate(Var::X)
            .mul(&self.field.p)
            .add(&self.curve.differentiate(Var::Y).mul(&self.field.q));
        if lhs.sub(&self.cofactor.mul(&self.curve)).is_zero() {
            Ok(())
        } else {
            Err(Error::InvalidCertificate(
                "cofactor identity does not hold".into(),
            ))
        }
    }
}

/// Output of `compose`/`epsilon_search`: a field carrying both the ovals of
/// the curve and the (relocated) cycles of the base field.
#[derive(Debug, Clone)]
pub struct CompositionResult {
    pub z: VectorField,
    pub epsilon: Rat,
    pub base_reports: Vec<CycleReport>,
    pub oval_reports: Vec<CycleReport>,
    pub certificate: InvarianceCertificate,
    /// (degree of base field, degree of curve); deg z is at most their sum.
    pub degree_budget: (i64, i64),
    /// epsilon = 0 makes every point of C = 0 singular.
    pub degenerate: bool,
    /// Factored components for the quadrant/square builders.
    pub factors: Option<(Poly, Poly)>,
}

impl CompositionResult {
    pub fn cycle_count(&self) -> usize {
        self.base_reports.len() + self.oval_reports.len()
    }
}

/// Divide C_x·p + C_y·q exactly by C; the quotient is the cofactor.
pub fn cofactor(c: &Poly, x: &VectorField) -> Result<InvarianceCertificate> {
    if c.is_constant() {
        return Err(Error::Usage("curve must be nonconstant".into()));
    }
    let lhs = c
        .differentiate(Var::X)
        .mul(&x.p)
        .add(&c.differentiate(Var::Y).mul(&x.q));
    let (k, rem) = lhs.divide_with_remainder(c)?;
    if !rem.is_zero() {
        return Err(Error::NotInvariant {
            remainder: format_poly(&rem),
        });
    }
    if k.degree() > x.degree() - 1 {
        return Err(Error::Internal(format!(
            "cofactor degree {} exceeds field degree {} minus one",
            k.degree(),
            x.degree()
        )));
    }
    Ok(InvarianceCertificate {
        curve: c.clone(),
        field: x.clone(),
        cofactor: k,
    })
}

/// Field Y = (αC − D·C_y, βC + D·C_x) for which C = 0 is invariant with
/// cofactor αC_x + βC_y. Every oval of C is a periodic orbit of Y, and the
/// line D = 0 must stay away from all of them.
pub fn christopher(
    c: &Poly,
    d: &LinearPoly,
    alpha: &Rat,
    beta: &Rat,
    region: &Region,
) -> Result<(VectorField, InvarianceCertificate)> {
    if c.is_constant() {
        return Err(Error::Usage("curve must be nonconstant".into()));
    }
    if !curve_nondegenerate(c)? {
        return Err(Error::DegenerateCurve);
    }
    let dp = d.to_poly();
    let (_, rem) = c.divide_with_remainder(&dp)?;
    if rem.is_zero() {
        return Err(Error::LineDividesCurve);
    }
    if (alpha * &d.a + beta * &d.b).is_zero() {
        return Err(Error::DegenerateParameters);
    }
    let ovals = trace_ovals(c, region, DEFAULT_GRID)?;
    if !line_disjoint_from_ovals(d, &ovals) {
        return Err(Error::LineMeetsOval);
    }
    let cx = c.differentiate(Var::X);
    let cy = c.differentiate(Var::Y);
    let field = VectorField::new(
        c.scale(alpha).sub(&dp.mul(&cy)),
        c.scale(beta).add(&dp.mul(&cx)),
    )?;
    if field.degree() > c.degree() {
        return Err(Error::Internal("construction exceeded the curve degree".into()));
    }
    let cert = cofactor(c, &field)?;
    let expected = cx.scale(alpha).add(&cy.scale(beta));
    if !cert.cofactor.sub(&expected).is_zero() {
        return Err(Error::Internal("cofactor differs from αC_x + βC_y".into()));
    }
    Ok((field, cert))
}

/// Line guaranteed disjoint from every listed oval: x − (right edge + 1),
/// falling back to the region when there are no ovals.
pub fn default_line(ovals: &[Oval], region: &Region) -> LinearPoly {
    let edge = ovals
        .iter()
        .map(|o| o.bbox.xmax)
        .fold(region.xmax, f64::max)
        .ceil() as i64;
    LinearPoly::new(rat_int(1), rat_int(0), rat_int(-(edge + 1))).expect("nonzero linear part")
}

/// (α, β) = (1, 0), switched to (0, 1) when the line has no x-slope, so that
/// αD_x + βD_y is never zero.
pub fn default_coefficients(d: &LinearPoly) -> (Rat, Rat) {
    if d.a.is_zero() {
        (rat_int(0), rat_int(1))
    } else {
        (rat_int(1), rat_int(0))
    }
}

/// X = (−y + x·f(x²+y²), x + y·f(x²+y²)), f(s) = ∏(ρᵢ − s): one hyperbolic
/// limit cycle per listed ρᵢ, on the circle r² = ρᵢ, stabilities alternating
/// outward. Degree 2k+1 for k cycles.
pub fn base_field(square_radii: &[Rat]) -> Result<VectorField> {
    if square_radii.is_empty() {
        return Err(Error::EmptyRadii);
    }
    for (i, r) in square_radii.iter().enumerate() {
        if !r.is_positive() {
            return Err(Error::Usage(format!(
                "squared radius {} must be positive",
                format_rat(r)
            )));
        }
        if square_radii[..i].contains(r) {
            return Err(Error::RepeatedRadius(format_rat(r)));
        }
    }
    let s = poly_lit("x^2 + y^2");
    let mut f = Poly::one();
    for r in square_radii {
        f = f.mul(&Poly::constant(r.clone()).sub(&s));
    }
    VectorField::new(
        poly_lit("-y").add(&Poly::x().mul(&f)),
        Poly::x().add(&Poly::y().mul(&f)),
    )
}

/// Affine pushforward: the portrait of `x` translated by `center` and
/// scaled by `scale` (positive time reparametrization; stability and
/// exponent signs are preserved).
pub fn relocate(x: &VectorField, center: (&Rat, &Rat), scale: &Rat) -> Result<VectorField> {
    if !scale.is_positive() {
        return Err(Error::NonPositiveScale);
    }
    VectorField::new(
        x.p.affine_substitute(center, scale)?.scale(scale),
        x.q.affine_substitute(center, scale)?.scale(scale),
    )
}

/// Z = (C·u + ε·p_y, C·v + ε·q_y). Dynamics are not validated here; the
/// symbolic side (certificate, restriction identity, degree bound) is.
pub fn compose(
    c: &Poly,
    x_base: &VectorField,
    y: &VectorField,
    epsilon: &Rat,
) -> Result<CompositionResult> {
    if epsilon.is_negative() {
        return Err(Error::Usage("epsilon must be nonnegative".into()));
    }
    let cert_y = cofactor(c, y).map_err(|e| match e {
        Error::NotInvariant { remainder } => Error::InvalidCertificate(format!(
            "curve is not invariant for the inner field (remainder {remainder})"
        )),
        other => other,
    })?;
    let z = VectorField::new(
        c.mul(&x_base.p).add(&y.p.scale(epsilon)),
        c.mul(&x_base.q).add(&y.q.scale(epsilon)),
    )?;
    let cert = cofactor(c, &z)?;
    let expected = c
        .differentiate(Var::X)
        .mul(&x_base.p)
        .add(&c.differentiate(Var::Y).mul(&x_base.q))
        .add(&cert_y.cofactor.scale(epsilon));
    if !cert.cofactor.sub(&expected).is_zero() {
        return Err(Error::Internal(
            "composed cofactor differs from C_xU + C_yV + εK".into(),
        ));
    }
    // restriction identity: both components of z − εy vanish on C = 0
    for (zc, yc) in [(&z.p, &y.p), (&z.q, &y.q)] {
        let (_, rem) = zc.sub(&yc.scale(epsilon)).divide_with_remainder(c)?;
        if !rem.is_zero() {
            return Err(Error::Internal("restriction identity failed".into()));
        }
    }
    let budget = (x_base.degree(), c.degree());
    if z.degree() > budget.0 + budget.1 {
        return Err(Error::Internal("composition exceeded the degree budget".into()));
    }
    Ok(CompositionResult {
        z,
        epsilon: epsilon.clone(),
        base_reports: Vec::new(),
        oval_reports: Vec::new(),
        certificate: cert,
        degree_budget: budget,
        degenerate: epsilon.is_zero(),
        factors: None,
    })
}

/// Persistence acceptance radius as a fraction of the cycle diameter.
const PERSIST_FRACTION: f64 = 0.2;
/// Cap on the halving schedule for epsilon.
const EPSILON_ATTEMPTS: u32 = 80;

/// Time to traverse the closed polyline once, estimated from the field
/// speed at each vertex; used to size return-map horizons during the search.
fn circuit_time(fe: &FieldEval, poly: &[[f64; 2]]) -> f64 {
    let mut t = 0.0;
    for (a, b) in poly.iter().zip(poly.iter().cycle().skip(1)).take(poly.len()) {
        let v = fe.velocity(a[0], a[1]);
        let speed = v[0].hypot(v[1]).max(1e-9);
        t += (b[0] - a[0]).hypot(b[1] - a[1]) / speed;
    }
    t
}

/// Give up on a candidate cycle after twenty estimated circuits: a persisted
/// cycle stays near its target, so its period cannot be wildly longer.
fn search_horizon(estimate: f64) -> f64 {
    (20.0 * estimate).clamp(50.0, RETURN_T_MAX)
}

fn seed_direction(fe: &FieldEval, p: [f64; 2]) -> Option<[f64; 2]> {
    let v = fe.velocity(p[0], p[1]);
    let n = v[0].hypot(v[1]);
    if n < 1e-9 {
        None
    } else {
        Some([v[0] / n, v[1] / n])
    }
}

/// Try ε = 1, 1/2, 1/4, …: accept the first candidate for which every oval
/// of C = 0 is a hyperbolic cycle of Z and every cycle of the base field
/// persists nearby. The base cycles must stay off C = 0 entirely.
pub fn epsilon_search(
    c: &Poly,
    x_base: &VectorField,
    y: &VectorField,
    region: &Region,
) -> Result<CompositionResult> {
    let base_cycles = count_cycles(x_base, region, 64)?;
    let fc = FloatPoly::from_poly(c);
    for cycle in &base_cycles {
        let min_abs = cycle
            .orbit
            .iter()
            .map(|p| fc.eval(p[0], p[1]).abs())
            .fold(f64::INFINITY, f64::min);
        if min_abs <= 1e-6 {
            return Err(Error::RelocationNeeded(format!(
                "a base cycle meets C = 0 (min |C| = {min_abs:e}); translate or shrink the base field"
            )));
        }
    }
    let ovals = trace_ovals(c, region, DEFAULT_GRID)?;

    let mut epsilon = rat_int(1);
    let mut diagnostics = String::new();
    for attempt in 0..EPSILON_ATTEMPTS {
        let mut comp = compose(c, x_base, y, &epsilon)?;
        match check_candidate(&comp.z, &ovals, &base_cycles) {
            Ok((oval_reports, base_reports)) => {
                comp.oval_reports = oval_reports;
                comp.base_reports = base_reports;
                return Ok(comp);
            }
            Err(diag) => {
                diagnostics.push_str(&format!(
                    "attempt {attempt} (ε = {}): {diag}\n",
                    format_rat(&epsilon)
                ));
            }
        }
        epsilon = epsilon / rat_int(2);
    }
    Err(Error::SearchFailure {
        attempts: EPSILON_ATTEMPTS,
        diagnostics,
    })
}

/// All-or-nothing dynamic verification of one ε candidate; the Err carries
/// the first failed check for the search diagnostics.
fn check_candidate(
    z: &VectorField,
    ovals: &[Oval],
    base_cycles: &[CycleReport],
) -> std::result::Result<(Vec<CycleReport>, Vec<CycleReport>), String> {
    let fe = FieldEval::new(z);
    let mut oval_reports = Vec::with_capacity(ovals.len());
    for (i, oval) in ovals.iter().enumerate() {
        let seed = oval
            .vertices
            .iter()
            .find_map(|&v| seed_direction(&fe, v).map(|dir| (v, dir)));
        let Some((seed, dir)) = seed else {
            return Err(format!("oval {i}: field vanishes along the oval"));
        };
        let report = refine_cycle_near(
            z,
            seed,
            dir,
            &oval.vertices,
            PERSIST_FRACTION * oval.diameter(),
            search_horizon(circuit_time(&fe, &oval.vertices)),
        )
        .map_err(|e| format!("oval {i}: refinement failed ({e})"))?;
        if !report.hyperbolic {
            return Err(format!("oval {i}: cycle not hyperbolic (Λ = {:e})", report.exponent));
        }
        oval_reports.push(report);
    }
    let mut base_reports = Vec::with_capacity(base_cycles.len());
    for (i, cycle) in base_cycles.iter().enumerate() {
        let Some(dir) = seed_direction(&fe, cycle.anchor) else {
            return Err(format!("base cycle {i}: field vanishes at the old anchor"));
        };
        let report = refine_cycle_near(
            z,
            cycle.anchor,
            dir,
            &cycle.orbit,
            PERSIST_FRACTION * cycle.diameter(),
            search_horizon(circuit_time(&fe, &cycle.orbit)),
        )
        .map_err(|e| format!("base cycle {i}: no nearby cycle persisted ({e})"))?;
        if !report.hyperbolic {
            return Err(format!(
                "base cycle {i}: persisted cycle not hyperbolic (Λ = {:e})",
                report.exponent
            ));
        }
        base_reports.push(report);
    }
    Ok((oval_reports, base_reports))
}

/// (m−1)(m−2)/2 + (1 + (−1)^m)/2: the maximal number of ovals of a
/// non-degenerate real curve of degree m.
pub fn har(m: u32) -> Result<u64> {
    if m == 0 {
        return Err(Error::Usage("degree must be at least 1".into()));
    }
    let parity = if m % 2 == 0 { 1 } else { 0 };
    let m = m as u64;
    Ok(if m < 3 { parity } else { (m - 1) * (m - 2) / 2 + parity })
}

/// Catalog curve of degree m realizing har(m) ovals.
pub fn harnack_curve(m: u32) -> Result<Poly> {
    let text = match m {
        1 => "x",
        2 => "x^2 + y^2 - 1",
        3 => "y^2 - x^3 + 3x^2 - 2x",
        4 => return Ok(poly_lit("x^2 + 2y^2 - 1")
            .mul(&poly_lit("2x^2 + y^2 - 1"))
            .add(&Poly::constant(rat(1, 100)))),
        _ => return Err(Error::UnsupportedHarnackDegree(m)),
    };
    Ok(poly_lit(text))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Hilbert,
    Kolmogorov,
    Square,
}

impl Family {
    pub fn parse(text: &str) -> Result<Family> {
        match text {
            "hilbert" => Ok(Family::Hilbert),
            "kolmogorov" => Ok(Family::Kolmogorov),
            "square" => Ok(Family::Square),
            _ => Err(Error::Usage(format!("unknown family '{text}'"))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Family::Hilbert => "hilbert",
            Family::Kolmogorov => "kolmogorov",
            Family::Square => "square",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    LowerBound,
}

/// One row of the published lower-bound tables.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct BoundsEntry {
    pub family: Family,
    pub n: u32,
    pub value: u64,
    pub exactness: Exactness,
}

/// Best known lower bounds on the maximal number of limit cycles:
/// general degree-n fields (n = 2..10).
const HILBERT_TABLE: [(u32, u64); 9] = [
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
/// Kolmogorov systems ẋ = x·p, ẏ = y·q of degree n+1 (n = 1..8);
/// n = 1, 2 are exact.
const KOLMOGOROV_TABLE: [(u32, u64); 8] = [
    (1, 0),
    (2, 0),
    (3, 6),
    (4, 13),
    (5, 22),
    (6, 28),
    (7, 37),
    (8, 53),
];
/// Fields leaving the unit square invariant (n = 2..10); n = 2, 3 exact.
const SQUARE_TABLE: [(u32, u64); 9] = [
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

pub fn known_lower_bound(family: Family, n: u32) -> Result<BoundsEntry> {
    let (table, exact_upto): (&[(u32, u64)], u32) = match family {
        Family::Hilbert => (&HILBERT_TABLE, 0),
        Family::Kolmogorov => (&KOLMOGOROV_TABLE, 2),
        Family::Square => (&SQUARE_TABLE, 3),
    };
    let Some(&(_, value)) = table.iter().find(|&&(k, _)| k == n) else {
        return Err(Error::OutOfTable {
            family: family.name().into(),
            n: n as i64,
        });
    };
    Ok(BoundsEntry {
        family,
        n,
        value,
        exactness: if n <= exact_upto {
            Exactness::Exact
        } else {
            Exactness::LowerBound
        },
    })
}

/// Lower bound for degree n+m fields: table value at n plus the ovals of a
/// degree-m curve turned into cycles.
pub fn recurrent_bound(n: u32, m: u32) -> Result<u64> {
    Ok(known_lower_bound(Family::Hilbert, n)?.value + har(m)?)
}

/// Lower bound with a caller-supplied curve: table value at n plus the
/// curve's traced oval count.
pub fn hc_bound(n: u32, curve: &Poly, region: &Region) -> Result<u64> {
    let entry = known_lower_bound(Family::Hilbert, n)?;
    let ovals = trace_ovals(curve, region, DEFAULT_GRID)?;
    Ok(entry.value + ovals.len() as u64)
}

/// Shared tail of the quadrant/square builders: run the ε-search, factor the
/// components, check the finiteness of singularities on C = 0, verify line
/// certificates and cycle containment.
#[allow(clippy::too_many_arguments)]
fn build_constrained(
    c: &Poly,
    divisor_p: &Poly,
    divisor_q: &Poly,
    line_certs: &[Poly],
    square_radii: &[Rat],
    center: (&Rat, &Rat),
    scale: &Rat,
    d: &LinearPoly,
    alpha: &Rat,
    beta: &Rat,
    contained: impl Fn(&CycleReport) -> bool,
    containment_name: &str,
) -> Result<CompositionResult> {
    let base = relocate(&base_field(square_radii)?, center, scale)?;
    // search region: a box around the relocated cycles, twice their radius
    let cx = rat_to_f64(center.0);
    let cy = rat_to_f64(center.1);
    let rmax = square_radii
        .iter()
        .map(|r| rat_to_f64(r).sqrt())
        .fold(0.0, f64::max)
        * rat_to_f64(scale);
    let half = (2.0 * rmax).max(0.25);
    let region = Region::new(cx - half, cx + half, cy - half, cy + half)?;

    let (y, _cert) = christopher(c, d, alpha, beta, &region)?;
    let mut comp = epsilon_search(c, &base, &y, &region)?;

    let (pt, rem_p) = comp.z.p.divide_with_remainder(divisor_p)?;
    let (qt, rem_q) = comp.z.q.divide_with_remainder(divisor_q)?;
    if !rem_p.is_zero() || !rem_q.is_zero() {
        return Err(Error::Internal(
            "composed field lost its guaranteed component divisibility".into(),
        ));
    }
    for line in line_certs {
        cofactor(line, &comp.z)?;
    }
    // finitely many singularities on C = 0: no common component of C with
    // both field components
    let shared = gcd_bivariate(&gcd_bivariate(&comp.z.p, &comp.z.q), c);
    if !shared.is_constant() {
        return Err(Error::Internal(format!(
            "C = 0 carries a curve of singular points (common factor {})",
            format_poly(&shared)
        )));
    }
    for report in comp.base_reports.iter().chain(comp.oval_reports.iter()) {
        if !contained(report) {
            return Err(Error::RelocationNeeded(format!(
                "a reported cycle leaves {containment_name}"
            )));
        }
    }
    comp.factors = Some((pt, qt));
    Ok(comp)
}

/// Composition with C = xy: the result has the form ẋ = x·p̃, ẏ = y·q̃ and
/// all reported cycles in the open first quadrant.
pub fn build_kolmogorov(
    square_radii: &[Rat],
    center: (&Rat, &Rat),
    scale: &Rat,
    d: &LinearPoly,
    alpha: &Rat,
    beta: &Rat,
) -> Result<CompositionResult> {
    let c = poly_lit("x y");
    build_constrained(
        &c,
        &Poly::x(),
        &Poly::y(),
        &[Poly::x(), Poly::y()],
        square_radii,
        center,
        scale,
        d,
        alpha,
        beta,
        |report| {
            report
                .orbit
                .iter()
                .all(|p| p[0] > 0.0 && p[1] > 0.0)
        },
        "the open first quadrant",
    )
}

/// Composition with C = x(x−1)y(y−1): components divisible by x(x−1) and
/// y(y−1), all reported cycles strictly inside the open unit square, and the
/// four boundary lines invariant.
pub fn build_game(
    square_radii: &[Rat],
    center: (&Rat, &Rat),
    scale: &Rat,
    d: &LinearPoly,
    alpha: &Rat,
    beta: &Rat,
) -> Result<CompositionResult> {
    let xpart = poly_lit("x^2 - x");
    let ypart = poly_lit("y^2 - y");
    let c = xpart.mul(&ypart);
    build_constrained(
        &c,
        &xpart,
        &ypart,
        &[
            Poly::x(),
            poly_lit("x - 1"),
            Poly::y(),
            poly_lit("y - 1"),
        ],
        square_radii,
        center,
        scale,
        d,
        alpha,
        beta,
        |report| {
            report
                .orbit
                .iter()
                .all(|p| p[0] > 0.0 && p[0] < 1.0 && p[1] > 0.0 && p[1] < 1.0)
        },
        "the open unit square",
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::refine_cycle;
    use crate::polycore::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    fn line(s: &str) -> LinearPoly {
        LinearPoly::from_poly(&p(s)).unwrap()
    }

    fn square(half: f64) -> Region {
        Region::new(-half, half, -half, half).unwrap()
    }

    #[test]
    fn cofactor_examples() {
        let c = p("x^2 + y^2 - 1");
        let x = VectorField::new(p("-2y^2 + 4y"), p("x^2 + y^2 - 1 + 2x y - 4x")).unwrap();
        let cert = cofactor(&c, &x).unwrap();
        assert!(cert.cofactor.sub(&p("2y")).is_zero());
        cert.verify().unwrap();

        let c = p("x y");
        let x = VectorField::new(
            p("x").mul(&p("1 - x - y")),
            p("y").mul(&p("y - x")),
        )
        .unwrap();
        let cert = cofactor(&c, &x).unwrap();
        assert!(cert.cofactor.sub(&p("1 - 2x")).is_zero());

        let c = p("x^2 + y^2 - 1");
        let x = VectorField::new(p("1"), Poly::zero()).unwrap();
        match cofactor(&c, &x) {
            Err(Error::NotInvariant { remainder }) => assert_eq!(remainder, "2x"),
            other => panic!("expected not-invariant, got {other:?}"),
        }
    }

    #[test]
    fn christopher_examples() {
        let c = p("x^2 + y^2 - 1");
        let (field, cert) = christopher(
            &c,
            &line("y - 2"),
            &rat_int(0),
            &rat_int(1),
            &square(2.0),
        )
        .unwrap();
        assert!(field.p.sub(&p("-2y^2 + 4y")).is_zero());
        assert!(field.q.sub(&p("x^2 + y^2 - 1 + 2x y - 4x")).is_zero());
        assert!(cert.cofactor.sub(&p("2y")).is_zero());

        let (field, cert) = christopher(
            &p("x y"),
            &line("x - 2"),
            &rat_int(1),
            &rat_int(0),
            &square(2.0),
        )
        .unwrap();
        assert!(field.p.sub(&p("x y - x^2 + 2x")).is_zero());
        assert!(field.q.sub(&p("x y - 2y")).is_zero());
        assert!(cert.cofactor.sub(&p("y")).is_zero());
    }

    #[test]
    fn christopher_error_paths() {
        let c = p("x^2 + y^2 - 1");
        assert!(matches!(
            christopher(&c, &line("x - 2"), &rat_int(0), &rat_int(1), &square(2.0)),
            Err(Error::DegenerateParameters)
        ));
        assert!(matches!(
            christopher(&c, &line("x"), &rat_int(1), &rat_int(0), &square(2.0)),
            Err(Error::LineMeetsOval)
        ));
        assert!(matches!(
            christopher(&p("x y"), &line("x"), &rat_int(1), &rat_int(0), &square(2.0)),
            Err(Error::LineDividesCurve)
        ));
        let degenerate = c.mul(&c);
        assert!(matches!(
            christopher(&degenerate, &line("y - 5"), &rat_int(0), &rat_int(1), &square(2.0)),
            Err(Error::DegenerateCurve)
        ));
    }

    #[test]
    fn base_field_catalog() {
        let x = base_field(&[rat_int(1)]).unwrap();
        assert_eq!(x.degree(), 3);
        assert!(x.p.sub(&p("-y + x - x^3 - x y^2")).is_zero());

        let x = base_field(&[rat_int(1), rat_int(4)]).unwrap();
        assert_eq!(x.degree(), 5);

        assert!(matches!(base_field(&[]), Err(Error::EmptyRadii)));
        assert!(matches!(
            base_field(&[rat_int(2), rat_int(2)]),
            Err(Error::RepeatedRadius(_))
        ));
    }

    #[test]
    fn relocate_examples() {
        let x = base_field(&[rat_int(1)]).unwrap();
        let same = relocate(&x, (&rat_int(0), &rat_int(0)), &rat_int(1)).unwrap();
        assert!(same.p.sub(&x.p).is_zero() && same.q.sub(&x.q).is_zero());

        let moved = relocate(&x, (&rat_int(3), &rat_int(3)), &rat(1, 2)).unwrap();
        assert_eq!(moved.degree(), 3);
        let report = refine_cycle(&moved, [3.55, 3.0], [0.0, 1.0]).unwrap();
        let r = (report.anchor[0] - 3.0).hypot(report.anchor[1] - 3.0);
        assert!((r - 0.5).abs() < 1e-9);
        assert!(report.stable, "stability preserved under relocation");

        assert!(matches!(
            relocate(&x, (&rat_int(0), &rat_int(0)), &rat_int(0)),
            Err(Error::NonPositiveScale)
        ));
    }

    #[test]
    fn compose_identities() {
        let c = p("x^2 + y^2 - 1");
        let base = relocate(
            &base_field(&[rat_int(1)]).unwrap(),
            (&rat_int(5), &rat_int(0)),
            &rat(1, 2),
        )
        .unwrap();
        let (y, cert_y) = christopher(
            &c,
            &line("y - 2"),
            &rat_int(0),
            &rat_int(1),
            &square(2.0),
        )
        .unwrap();
        let comp = compose(&c, &base, &y, &rat(1, 8)).unwrap();
        assert_eq!(comp.z.degree(), 5);
        comp.certificate.verify().unwrap();

        // cofactor is C_x·u + C_y·v + ε·K exactly
        let expected = c
            .differentiate(Var::X)
            .mul(&base.p)
            .add(&c.differentiate(Var::Y).mul(&base.q))
            .add(&cert_y.cofactor.scale(&rat(1, 8)));
        assert!(comp.certificate.cofactor.sub(&expected).is_zero());

        // ε = 0 composes to C·X and is flagged
        let comp0 = compose(&c, &base, &y, &rat_int(0)).unwrap();
        assert!(comp0.degenerate);
        assert!(comp0.z.p.sub(&c.mul(&base.p)).is_zero());

        // a non-invariant inner field is rejected
        let bogus = VectorField::new(p("1"), Poly::zero()).unwrap();
        assert!(matches!(
            compose(&c, &base, &bogus, &rat(1, 8)),
            Err(Error::InvalidCertificate(_))
        ));
    }

    #[test]
    fn har_and_harnack() {
        assert_eq!(har(1).unwrap(), 0);
        assert_eq!(har(2).unwrap(), 1);
        assert_eq!(har(3).unwrap(), 1);
        assert_eq!(har(4).unwrap(), 4);
        assert_eq!(har(5).unwrap(), 6);
        assert!(har(0).is_err());

        for m in 1..=4u32 {
            let curve = harnack_curve(m).unwrap();
            assert_eq!(curve.degree(), m as i64);
            let ovals = trace_ovals(&curve, &square(4.0), DEFAULT_GRID).unwrap();
            assert_eq!(ovals.len() as u64, har(m).unwrap(), "degree {m}");
        }
        assert!(matches!(
            harnack_curve(5),
            Err(Error::UnsupportedHarnackDegree(5))
        ));
    }

    #[test]
    fn tables_verbatim_and_monotone() {
        assert_eq!(known_lower_bound(Family::Hilbert, 3).unwrap().value, 13);
        assert_eq!(known_lower_bound(Family::Kolmogorov, 5).unwrap().value, 22);
        assert_eq!(known_lower_bound(Family::Square, 4).unwrap().value, 5);
        assert_eq!(
            known_lower_bound(Family::Kolmogorov, 1).unwrap().exactness,
            Exactness::Exact
        );
        assert_eq!(
            known_lower_bound(Family::Kolmogorov, 3).unwrap().exactness,
            Exactness::LowerBound
        );
        assert!(matches!(
            known_lower_bound(Family::Hilbert, 11),
            Err(Error::OutOfTable { .. })
        ));
        for (family, lo, hi) in [
            (Family::Hilbert, 2, 10),
            (Family::Kolmogorov, 1, 8),
            (Family::Square, 2, 10),
        ] {
            let mut prev = 0;
            for n in lo..=hi {
                let v = known_lower_bound(family, n).unwrap().value;
                assert!(v >= prev, "{family:?} not monotone at n = {n}");
                prev = v;
            }
        }
    }

    #[test]
    fn derived_bounds() {
        assert_eq!(recurrent_bound(2, 4).unwrap(), 8);
        assert_eq!(recurrent_bound(3, 1).unwrap(), 13);
        assert_eq!(recurrent_bound(4, 2).unwrap(), 29);

        let circle = p("x^2 + y^2 - 1");
        assert_eq!(hc_bound(2, &circle, &square(2.0)).unwrap(), 5);
        assert_eq!(hc_bound(3, &p("x y"), &square(2.0)).unwrap(), 13);
        let quartic = harnack_curve(4).unwrap();
        assert_eq!(hc_bound(2, &quartic, &square(2.0)).unwrap(), 8);
    }

    #[test]
    fn default_line_and_coefficients() {
        let ovals = trace_ovals(&p("x^2 + y^2 - 1"), &square(2.0), DEFAULT_GRID).unwrap();
        let d = default_line(&ovals, &square(2.0));
        assert!(line_disjoint_from_ovals(&d, &ovals));
        assert_eq!(default_coefficients(&d), (rat_int(1), rat_int(0)));
        assert_eq!(
            default_coefficients(&line("y - 2")),
            (rat_int(0), rat_int(1))
        );
    }
}
