//! Numerical dynamics: trajectory integration, Poincaré return maps,
//! periodic-orbit refinement, divergence exponents and the Green's-theorem
//! flux cross-check.

pub mod ode;
pub mod quad;

use serde::Serialize;

use crate::curvegeom::{Oval, Region, ON_CURVE_TOL};
use crate::error::Error;
use crate::polycore::{rat_to_f64, FloatPoly, LinearPoly, Poly, Rat, Var};
use crate::Result;

use num_traits::Zero;
use ode::{integrate, DenseStep, OdeOptions, OdeResult};

/// Closure tolerance for accepted periodic orbits.
pub const CYCLE_TOL: f64 = 1e-8;
/// Minimal divergence exponent magnitude certifying hyperbolicity.
pub const HYPERBOLIC_MIN: f64 = 1e-6;
/// Default horizon for first-return searches.
pub const RETURN_T_MAX: f64 = 1e3;
/// Number of dense samples stored per orbit polyline.
const ORBIT_SAMPLES: usize = 1024;

/// Planar polynomial vector field (p, q).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub p: Poly,
    pub q: Poly,
}

impl VectorField {
    pub fn new(p: Poly, q: Poly) -> Result<Self> {
        if p.is_zero() && q.is_zero() {
            return Err(Error::Usage("vector field must not be identically zero".into()));
        }
        Ok(VectorField { p, q })
    }

    /// max(deg p, deg q)
    pub fn degree(&self) -> i64 {
        self.p.degree().max(self.q.degree())
    }

    pub fn negate(&self) -> VectorField {
        VectorField {
            p: self.p.neg(),
            q: self.q.neg(),
        }
    }

    pub fn divergence(&self) -> Poly {
        self.p.differentiate(Var::X).add(&self.q.differentiate(Var::Y))
    }
}

/// Compiled float evaluators for a field, its Jacobian and divergence.
pub struct FieldEval {
    p: FloatPoly,
    q: FloatPoly,
    px: FloatPoly,
    py: FloatPoly,
    qx: FloatPoly,
    qy: FloatPoly,
    div: FloatPoly,
}

impl FieldEval {
    pub fn new(field: &VectorField) -> Self {
        FieldEval {
            p: FloatPoly::from_poly(&field.p),
            q: FloatPoly::from_poly(&field.q),
            px: FloatPoly::from_poly(&field.p.differentiate(Var::X)),
            py: FloatPoly::from_poly(&field.p.differentiate(Var::Y)),
            qx: FloatPoly::from_poly(&field.q.differentiate(Var::X)),
            qy: FloatPoly::from_poly(&field.q.differentiate(Var::Y)),
            div: FloatPoly::from_poly(&field.divergence()),
        }
    }

    #[inline]
    pub fn velocity(&self, x: f64, y: f64) -> [f64; 2] {
        [self.p.eval(x, y), self.q.eval(x, y)]
    }

    #[inline]
    fn rhs2(&self, y: &[f64; 2]) -> [f64; 2] {
        self.velocity(y[0], y[1])
    }

    #[inline]
    fn rhs3(&self, s: &[f64; 3]) -> [f64; 3] {
        let v = self.velocity(s[0], s[1]);
        [v[0], v[1], self.div.eval(s[0], s[1])]
    }

    /// State (x, y, phi11, phi21, phi12, phi22, lambda): trajectory,
    /// variational matrix by columns, divergence integral.
    #[inline]
    fn rhs7(&self, s: &[f64; 7]) -> [f64; 7] {
        let (x, y) = (s[0], s[1]);
        let v = self.velocity(x, y);
        let a = self.px.eval(x, y);
        let b = self.py.eval(x, y);
        let c = self.qx.eval(x, y);
        let d = self.qy.eval(x, y);
        [
            v[0],
            v[1],
            a * s[2] + b * s[3],
            c * s[2] + d * s[3],
            a * s[4] + b * s[5],
            c * s[4] + d * s[5],
            a + d,
        ]
    }
}

/// Integrated trajectory with dense output.
pub struct Trajectory {
    steps: Vec<DenseStep<2>>,
    pub t_end: f64,
    pub y_end: [f64; 2],
}

impl Trajectory {
    /// Accepted step endpoints as (t, point).
    pub fn points(&self) -> Vec<(f64, [f64; 2])> {
        let mut out: Vec<(f64, [f64; 2])> = self
            .steps
            .iter()
            .map(|s| (s.t0, s.eval(s.t0)))
            .collect();
        out.push((self.t_end, self.y_end));
        out
    }

    /// Dense evaluation at any t in [0, t_end].
    pub fn eval(&self, t: f64) -> [f64; 2] {
        if self.steps.is_empty() {
            return self.y_end;
        }
        let t = t.clamp(0.0, self.t_end);
        let idx = self
            .steps
            .partition_point(|s| s.t1 < t)
            .min(self.steps.len() - 1);
        self.steps[idx].eval(t)
    }
}

/// Integrate the field from `p0` for time `t_end` with relative tolerance
/// `tol` (absolute tolerance is tol/100).
pub fn flow(field: &VectorField, p0: [f64; 2], t_end: f64, tol: f64) -> Result<Trajectory> {
    if !(tol > 0.0) {
        return Err(Error::Usage("tolerance must be positive".into()));
    }
    let fe = FieldEval::new(field);
    // local tolerances a decade below the requested global accuracy so the
    // accumulated drift over long horizons stays under `tol`
    let opts = OdeOptions::with_tol(tol * 1e-1, tol * 1e-3);
    let r = integrate(|y| fe.rhs2(y), p0, t_end, &opts, true, None)?;
    Ok(Trajectory {
        steps: r.steps,
        t_end: r.t_end,
        y_end: r.y_end,
    })
}

/// A numerically refined periodic orbit.
#[derive(Debug, Clone, Serialize)]
pub struct CycleReport {
    pub anchor: [f64; 2],
    pub period: f64,
    pub exponent: f64,
    pub multiplier: f64,
    pub closure_error: f64,
    pub stable: bool,
    pub hyperbolic: bool,
    pub orbit: Vec<[f64; 2]>,
    /// Estimated integration error of the exponent (not serialized).
    #[serde(skip)]
    pub exponent_error: f64,
    /// Section return-map derivative from the variational flow
    /// (independent of the divergence integral; not serialized).
    #[serde(skip)]
    pub return_derivative: f64,
    /// Set when hyperbolicity could not be resolved (not serialized).
    #[serde(skip)]
    pub warning: Option<String>,
}

impl CycleReport {
    pub fn orbit_bbox(&self) -> Region {
        Region {
            xmin: self.orbit.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min),
            xmax: self.orbit.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max),
            ymin: self.orbit.iter().map(|v| v[1]).fold(f64::INFINITY, f64::min),
            ymax: self.orbit.iter().map(|v| v[1]).fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn diameter(&self) -> f64 {
        self.orbit_bbox().diameter()
    }
}

fn normalize(v: [f64; 2]) -> [f64; 2] {
    let n = v[0].hypot(v[1]);
    [v[0] / n, v[1] / n]
}

/// First return of the orbit started at `start` to the section through
/// `anchor` with unit normal `n` (crossing in the +n direction). With a
/// `leash`, the search is abandoned as soon as the orbit strays farther than
/// that distance from the anchor: callers hunting for a cycle confined to a
/// known neighborhood need not integrate runaway orbits to the horizon.
fn first_return(
    fe: &FieldEval,
    start: [f64; 2],
    anchor: [f64; 2],
    n: [f64; 2],
    opts: &OdeOptions,
    t_max: f64,
    leash: Option<f64>,
) -> Result<(f64, [f64; 2])> {
    let g = |y: &[f64; 2]| (y[0] - anchor[0]) * n[0] + (y[1] - anchor[1]) * n[1];
    // a start point on the section rounds to g ~ +-1e-16, which must not
    // count as an instant return; demand a clearly negative approach side
    let g_eps = 1e-12 * (1.0 + anchor[0].hypot(anchor[1]));
    let mut escaped = false;
    let mut stop = |step: &DenseStep<2>| -> Option<f64> {
        let y0 = step.eval(step.t0);
        let y1 = step.eval(step.t1);
        if let Some(r) = leash {
            if (y1[0] - anchor[0]).hypot(y1[1] - anchor[1]) > r {
                escaped = true;
                return Some(step.t1);
            }
        }
        let g0 = g(&y0);
        let g1 = g(&y1);
        if g0 < -g_eps && g1 >= 0.0 {
            let (mut lo, mut hi) = (step.t0, step.t1);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if g(&step.eval(mid)) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Some(0.5 * (lo + hi))
        } else {
            None
        }
    };
    let r = integrate(|y| fe.rhs2(y), start, t_max, opts, false, Some(&mut stop))
        .map_err(|e| match e {
            // a blowup or stalled step means the orbit never came back
            Error::Integration { .. } => Error::NoReturn { t_max },
            other => other,
        })?;
    match r.event_t {
        Some(_) if escaped => Err(Error::NonConvergence(
            "the orbit left the search neighborhood before returning to the section".into(),
        )),
        Some(t) => Ok((t, r.y_end)),
        None => Err(Error::NoReturn { t_max }),
    }
}

/// Refine a periodic orbit by Newton iteration on the first-return
/// displacement along the section through `seed` transverse to the flow.
///
/// If the forward return map does not converge (strongly unstable cycles
/// blow the integration up), the reversed field is refined instead and the
/// report is mapped back to forward time.
pub fn refine_cycle(
    field: &VectorField,
    seed: [f64; 2],
    section_normal: [f64; 2],
) -> Result<CycleReport> {
    match refine_directed(field, seed, section_normal, false, RETURN_T_MAX, None) {
        Ok(report) => Ok(report),
        Err(e @ Error::Usage(_)) => Err(e),
        Err(first) => match refine_directed(&field.negate(), seed, section_normal, true, RETURN_T_MAX, None) {
            Ok(report) => Ok(report),
            Err(_) => Err(first),
        },
    }
}

/// Refine the periodic orbit near `target`, a closed polyline the sought
/// cycle must stay within `radius` of, giving up after `t_max` time units
/// without a section return. When the cycle is strongly unstable in forward
/// time the Newton iteration either diverges or slides onto a different
/// attractor; in both cases the reversed field is refined and the report
/// mapped back to forward time.
pub fn refine_cycle_near(
    field: &VectorField,
    seed: [f64; 2],
    section_normal: [f64; 2],
    target: &[[f64; 2]],
    radius: f64,
    t_max: f64,
) -> Result<CycleReport> {
    // any orbit outside this ball cannot stay within `radius` of the target
    let leash = target
        .iter()
        .map(|p| (p[0] - seed[0]).hypot(p[1] - seed[1]))
        .fold(0.0, f64::max)
        + 2.0 * radius;
    let forward = refine_directed(field, seed, section_normal, false, t_max, Some(leash));
    match &forward {
        Ok(report) if orbit_distance(report, target) <= radius => return forward,
        Err(Error::Usage(_)) => return forward,
        _ => {}
    }
    match refine_directed(&field.negate(), seed, section_normal, true, t_max, Some(leash)) {
        Ok(report) if orbit_distance(&report, target) <= radius => Ok(report),
        _ => match forward {
            Ok(report) => Err(Error::NonConvergence(format!(
                "refined orbit strayed {:e} from the target cycle in both time directions",
                orbit_distance(&report, target)
            ))),
            Err(e) => Err(e),
        },
    }
}

fn refine_directed(
    field: &VectorField,
    seed: [f64; 2],
    section_normal: [f64; 2],
    reversed: bool,
    t_max: f64,
    leash: Option<f64>,
) -> Result<CycleReport> {
    let fe = FieldEval::new(field);
    let v0 = fe.velocity(seed[0], seed[1]);
    let speed = v0[0].hypot(v0[1]);
    if speed < 1e-12 {
        return Err(Error::Usage("seed is an equilibrium of the field".into()));
    }
    let mut n = normalize(section_normal);
    let vn = v0[0] * n[0] + v0[1] * n[1];
    if vn.abs() < 1e-9 * speed {
        return Err(Error::Usage("section is not transverse to the flow at the seed".into()));
    }
    if vn < 0.0 {
        n = [-n[0], -n[1]];
    }
    let u = [-n[1], n[0]];
    let opts = OdeOptions::default();

    let ret = |s: f64| -> Result<(f64, f64)> {
        let start = [seed[0] + s * u[0], seed[1] + s * u[1]];
        let (t, y) = first_return(&fe, start, seed, n, &opts, t_max, leash)?;
        let s_ret = (y[0] - seed[0]) * u[0] + (y[1] - seed[1]) * u[1];
        Ok((s_ret, t))
    };

    // Newton on F(s) = R(s) - s with a finite-difference derivative
    let scale = 1.0 + seed[0].hypot(seed[1]);
    let mut s = 0.0;
    let mut converged = false;
    for _ in 0..30 {
        let (r0, _) = ret(s)?;
        let f0 = r0 - s;
        if f0.abs() <= 1e-11 * scale {
            converged = true;
            break;
        }
        let delta = 1e-7 * (1.0 + s.abs());
        let (r1, _) = ret(s + delta)?;
        let f1 = r1 - (s + delta);
        let deriv = (f1 - f0) / delta;
        if deriv.abs() < 1e-14 {
            // identically-closed return map (a center): the displacement is
            // pure integration noise, so treat a small one as converged and
            // let the closure gate below decide
            if f0.abs() <= CYCLE_TOL {
                converged = true;
                break;
            }
            return Err(Error::NonConvergence("flat return displacement".into()));
        }
        let mut step = -f0 / deriv;
        let cap = 0.5 * scale;
        if step.abs() > cap {
            step = cap * step.signum();
        }
        s += step;
        if !s.is_finite() || s.abs() > 1e3 * scale {
            return Err(Error::NonConvergence("return-map Newton diverged".into()));
        }
    }
    if !converged {
        return Err(Error::NonConvergence(
            "return-map Newton did not reach tolerance in 30 iterations".into(),
        ));
    }

    let anchor = [seed[0] + s * u[0], seed[1] + s * u[1]];
    // final pass: trajectory + variational matrix + divergence integral
    let g = |y: &[f64; 7]| (y[0] - anchor[0]) * n[0] + (y[1] - anchor[1]) * n[1];
    let g_eps = 1e-12 * (1.0 + anchor[0].hypot(anchor[1]));
    let mut stop = |step: &DenseStep<7>| -> Option<f64> {
        let g0 = g(&step.eval(step.t0));
        let g1 = g(&step.eval(step.t1));
        if g0 < -g_eps && g1 >= 0.0 {
            let (mut lo, mut hi) = (step.t0, step.t1);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if g(&step.eval(mid)) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Some(0.5 * (lo + hi))
        } else {
            None
        }
    };
    let y0 = [anchor[0], anchor[1], 1.0, 0.0, 0.0, 1.0, 0.0];
    let r: OdeResult<7> = integrate(
        |y| fe.rhs7(y),
        y0,
        t_max,
        &opts,
        true,
        Some(&mut stop),
    )?;
    let period = match r.event_t {
        Some(t) => t,
        None => return Err(Error::NoReturn { t_max }),
    };
    let end = r.y_end;
    let closure_error = (end[0] - anchor[0]).hypot(end[1] - anchor[1]);
    if closure_error > CYCLE_TOL {
        return Err(Error::NonConvergence(format!(
            "closure error {closure_error:e} above tolerance"
        )));
    }

    // section return-map derivative from the monodromy matrix
    let phi_u = [
        end[2] * u[0] + end[4] * u[1],
        end[3] * u[0] + end[5] * u[1],
    ];
    let f_end = fe.velocity(end[0], end[1]);
    let nf = n[0] * f_end[0] + n[1] * f_end[1];
    let n_phi_u = n[0] * phi_u[0] + n[1] * phi_u[1];
    let u_phi_u = u[0] * phi_u[0] + u[1] * phi_u[1];
    let u_f = u[0] * f_end[0] + u[1] * f_end[1];
    let deriv_here = u_phi_u - u_f * n_phi_u / nf;

    let lambda_here = end[6];
    let exponent_error = r.err_accum[6].max(1e-14);

    // densified orbit polyline in forward time
    let mut orbit: Vec<[f64; 2]> = (0..ORBIT_SAMPLES)
        .map(|k| {
            let t = period * k as f64 / ORBIT_SAMPLES as f64;
            let idx = r
                .steps
                .partition_point(|st| st.t1 < t)
                .min(r.steps.len() - 1);
            let y = r.steps[idx].eval(t);
            [y[0], y[1]]
        })
        .collect();

    let (exponent, return_derivative) = if reversed {
        orbit.reverse();
        (-lambda_here, 1.0 / deriv_here)
    } else {
        (lambda_here, deriv_here)
    };
    let multiplier = exponent.exp();
    let threshold = HYPERBOLIC_MIN.max(10.0 * exponent_error);
    let hyperbolic = exponent.abs() > threshold;
    let warning = if (return_derivative - 1.0).abs() <= 1e-12 || !hyperbolic {
        Some(format!(
            "hyperbolicity unresolved: |exponent| = {:e} <= threshold {:e}",
            exponent.abs(),
            threshold
        ))
    } else {
        None
    };

    Ok(CycleReport {
        anchor,
        period,
        exponent,
        multiplier,
        closure_error,
        stable: exponent < 0.0,
        hyperbolic,
        orbit,
        exponent_error,
        return_derivative,
        warning,
    })
}

/// Exponent estimate with its integration-error bound.
#[derive(Debug, Clone, Copy)]
pub struct ExponentEstimate {
    pub value: f64,
    pub error: f64,
}

/// Integrate the divergence of the field along the periodic orbit in
/// `report` for one period. Forward time is tried first; if the orbit is
/// repelling and the trajectory drifts off, the reversed field is used and
/// the sign mapped back.
pub fn divergence_exponent(field: &VectorField, report: &CycleReport) -> Result<ExponentEstimate> {
    let diam = report.diameter().max(1e-6);
    let run = |f: &VectorField| -> Result<(f64, f64, f64)> {
        let fe = FieldEval::new(f);
        let y0 = [report.anchor[0], report.anchor[1], 0.0];
        let r = integrate(
            |y| fe.rhs3(y),
            y0,
            report.period,
            &OdeOptions::default(),
            false,
            None,
        )?;
        let drift = (r.y_end[0] - report.anchor[0]).hypot(r.y_end[1] - report.anchor[1]);
        Ok((r.y_end[2], r.err_accum[2].max(1e-14), drift))
    };
    let (value, error, drift) = run(field)?;
    if drift <= 1e-6 * diam.max(1.0) {
        return Ok(ExponentEstimate { value, error });
    }
    let (value, error, drift) = run(&field.negate())?;
    if drift > 1e-6 * diam.max(1.0) {
        return Err(Error::NonConvergence(format!(
            "orbit does not close under either time direction (drift {drift:e})"
        )));
    }
    Ok(ExponentEstimate {
        value: -value,
        error,
    })
}

/// Adaptive quadrature of (alpha*D_x + beta*D_y)/D^2 over the polygonal
/// interior of the oval.
pub fn green_flux(
    interior_of: &Oval,
    d: &LinearPoly,
    alpha: &Rat,
    beta: &Rat,
    quad_tol: f64,
) -> Result<f64> {
    if !(quad_tol > 0.0) {
        return Err(Error::Usage("quadrature tolerance must be positive".into()));
    }
    let constant = alpha * &d.a + beta * &d.b;
    if constant.is_zero() {
        return Err(Error::DegenerateParameters);
    }
    // D is linear, so a uniform strict sign on the polygon vertices
    // certifies D != 0 on the closed interior.
    let mut sign = 0i8;
    for v in &interior_of.vertices {
        let value = d.eval(v[0], v[1]);
        if value.abs() <= ON_CURVE_TOL {
            return Err(Error::InvalidLine);
        }
        let s = if value > 0.0 { 1 } else { -1 };
        if sign == 0 {
            sign = s;
        } else if s != sign {
            return Err(Error::InvalidLine);
        }
    }
    let k = rat_to_f64(&constant);
    let (a, b, c0) = (rat_to_f64(&d.a), rat_to_f64(&d.b), rat_to_f64(&d.c0));
    let integrand = move |x: f64, y: f64| {
        let dv = a * x + b * y + c0;
        k / (dv * dv)
    };
    quad::integrate_polygon(&integrand, &interior_of.vertices, quad_tol)
}

/// Approximate symmetric Hausdorff distance between two closed polylines.
fn hausdorff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let one_sided = |from: &[[f64; 2]], to: &[[f64; 2]]| {
        let stride = (from.len() / 256).max(1);
        from.iter()
            .step_by(stride)
            .map(|p| crate::curvegeom::dist_to_polyline((p[0], p[1]), to))
            .fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Hausdorff distance between two cycle orbits (used for persistence and
/// deduplication checks).
pub fn orbit_distance(a: &CycleReport, b: &[[f64; 2]]) -> f64 {
    hausdorff(&a.orbit, b)
}

/// Lower-bound estimator for the number of hyperbolic limit cycles in the
/// region: integrates lattice seeds forward and backward, refines candidate
/// returns and deduplicates. Never claimed complete.
pub fn count_cycles(
    field: &VectorField,
    region: &Region,
    seed_count: usize,
) -> Result<Vec<CycleReport>> {
    let seed_count = seed_count.max(1);
    let k = (seed_count as f64).sqrt().ceil() as usize;
    let fe = FieldEval::new(field);
    let transient_opts = OdeOptions {
        rtol: 1e-6,
        atol: 1e-9,
        norm_cap: 1e6,
        ..Default::default()
    };
    let pad_x = 0.01 * (region.xmax - region.xmin);
    let pad_y = 0.01 * (region.ymax - region.ymin);
    let expanded = Region {
        xmin: region.xmin - pad_x,
        xmax: region.xmax + pad_x,
        ymin: region.ymin - pad_y,
        ymax: region.ymax + pad_y,
    };

    let mut found: Vec<CycleReport> = Vec::new();
    for jj in 0..k {
        for ii in 0..k {
            let sx = region.xmin + (ii as f64 + 0.5) / k as f64 * (region.xmax - region.xmin);
            let sy = region.ymin + (jj as f64 + 0.5) / k as f64 * (region.ymax - region.ymin);
            for backward in [false, true] {
                let rhs = |y: &[f64; 2]| {
                    let v = fe.rhs2(y);
                    if backward {
                        [-v[0], -v[1]]
                    } else {
                        v
                    }
                };
                let Ok(tr) = integrate(rhs, [sx, sy], 40.0, &transient_opts, false, None)
                else {
                    continue;
                };
                let p1 = tr.y_end;
                if !expanded.contains(p1[0], p1[1]) {
                    continue;
                }
                let v = fe.velocity(p1[0], p1[1]);
                if v[0].hypot(v[1]) < 1e-8 {
                    continue; // settled on an equilibrium
                }
                // the transient settled onto an attractor of the direction it
                // was integrated in, so refine in that same direction; the
                // other direction gets its own pass of this loop
                let refined = if backward {
                    refine_directed(&field.negate(), p1, normalize(v), true, RETURN_T_MAX, None)
                } else {
                    refine_directed(field, p1, normalize(v), false, RETURN_T_MAX, None)
                };
                let Ok(report) = refined else {
                    continue;
                };
                if !report.hyperbolic
                    || report.closure_error > CYCLE_TOL
                    || report.diameter() < 1e-3
                {
                    continue;
                }
                let bbox = report.orbit_bbox();
                if !(expanded.contains(bbox.xmin, bbox.ymin)
                    && expanded.contains(bbox.xmax, bbox.ymax))
                {
                    continue;
                }
                let duplicate = found
                    .iter()
                    .any(|r| hausdorff(&r.orbit, &report.orbit) < 1e-4);
                if !duplicate {
                    found.push(report);
                }
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    fn field(px: &str, qy: &str) -> VectorField {
        VectorField::new(p(px), p(qy)).unwrap()
    }

    const TAU: f64 = 2.0 * std::f64::consts::PI;

    /// Cubic field with the unit circle as attracting cycle:
    /// (-y + x(1-x^2-y^2), x + y(1-x^2-y^2)).
    fn circle_cubic() -> VectorField {
        field(
            "-y + x - x^3 - x y^2",
            "x + y - x^2 y - y^3",
        )
    }

    /// Degree-5 field with cycles at r = 1 (stable) and r = 2 (unstable):
    /// radial part r(1-r^2)(4-r^2).
    fn nested_quintic() -> VectorField {
        let f = p("4 - 5x^2 - 5y^2")
            .add(&p("x^2+y^2").mul(&p("x^2+y^2")));
        let px = p("-y").add(&p("x").mul(&f));
        let qy = p("x").add(&p("y").mul(&f));
        VectorField::new(px, qy).unwrap()
    }

    #[test]
    fn flow_examples() {
        let rot = field("-y", "x");
        let tr = flow(&rot, [1.0, 0.0], TAU, 1e-10).unwrap();
        assert!((tr.y_end[0] - 1.0).abs() < 1e-8);
        assert!(tr.y_end[1].abs() < 1e-8);

        let lin = field("x", "y");
        let tr = flow(&lin, [1.0, 0.0], 1.0, 1e-10).unwrap();
        assert!((tr.y_end[0] - std::f64::consts::E).abs() < 1e-8);

        let tr = flow(&circle_cubic(), [0.1, 0.0], 50.0, 1e-10).unwrap();
        let r = tr.y_end[0].hypot(tr.y_end[1]);
        assert!((r - 1.0).abs() < 1e-6);
    }

    #[test]
    fn energy_preserved_on_rotation() {
        let rot = field("-y", "x");
        let tr = flow(&rot, [1.0, 0.0], 100.0, 1e-10).unwrap();
        for (_, y) in tr.points() {
            let e = y[0] * y[0] + y[1] * y[1];
            assert!((e - 1.0).abs() < 1e-9, "energy drift {:e}", (e - 1.0).abs());
        }
    }

    #[test]
    fn refine_cycle_on_circle_field() {
        let report = refine_cycle(&circle_cubic(), [1.1, 0.0], [0.0, 1.0]).unwrap();
        assert!((report.period - TAU).abs() < 1e-8);
        let r = report.anchor[0].hypot(report.anchor[1]);
        assert!((r - 1.0).abs() < 1e-9);
        assert!(report.stable && report.hyperbolic);
        assert!((report.exponent + 2.0 * TAU).abs() < 1e-6);
    }

    #[test]
    fn refine_cycle_center_warns() {
        let rot = field("-y", "x");
        let report = refine_cycle(&rot, [1.0, 0.0], [0.0, 1.0]).unwrap();
        assert!(!report.hyperbolic);
        assert!(report.warning.is_some());
    }

    #[test]
    fn refine_cycle_no_cycle() {
        let lin = field("x", "y");
        let err = refine_cycle(&lin, [1.0, 0.0], [1.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::NoReturn { .. } | Error::NonConvergence(_)));
    }

    #[test]
    fn divergence_exponent_polar_oracle() {
        // radial part g(r) = r(1-r^2): exponent 2 pi g'(1) = -4 pi
        let report = refine_cycle(&circle_cubic(), [1.05, 0.0], [0.0, 1.0]).unwrap();
        let est = divergence_exponent(&circle_cubic(), &report).unwrap();
        assert!((est.value + 2.0 * TAU).abs() < 1e-4);

        // g(r) = r(1-r^2)(4-r^2): g'(1) = -6, g'(2) = 24
        let quintic = nested_quintic();
        let r1 = refine_cycle(&quintic, [1.02, 0.0], [0.0, 1.0]).unwrap();
        let e1 = divergence_exponent(&quintic, &r1).unwrap();
        assert!((e1.value / (-6.0 * TAU) - 1.0).abs() < 1e-4);

        let r2 = refine_cycle(&quintic, [2.02, 0.0], [0.0, 1.0]).unwrap();
        let e2 = divergence_exponent(&quintic, &r2).unwrap();
        assert!((e2.value / (24.0 * TAU) - 1.0).abs() < 1e-4);
        assert!(!r2.stable);
    }

    #[test]
    fn exponent_multiplier_consistency() {
        // weakly attracting variant, radial part r(1-r^2)/20: exponent -pi/5
        let mild = field(
            "-y + 1/20x - 1/20x^3 - 1/20x y^2",
            "x + 1/20y - 1/20x^2 y - 1/20y^3",
        );
        let r = refine_cycle(&mild, [1.05, 0.0], [0.0, 1.0]).unwrap();
        assert!((r.exponent + 0.2 * std::f64::consts::PI).abs() < 1e-8);
        assert!(((r.exponent.exp() - r.multiplier) / r.multiplier).abs() < 1e-12);
        let rel = ((r.return_derivative - r.multiplier) / r.multiplier).abs();
        assert!(rel < 1e-4, "return derivative off by {rel:e}");

        // strongly attracting cycles leave the exponent reliable but push
        // the variational derivative below absolute double precision
        let quintic = nested_quintic();
        let r = refine_cycle(&quintic, [1.02, 0.0], [0.0, 1.0]).unwrap();
        assert!(((r.exponent.exp() - r.multiplier) / r.multiplier).abs() < 1e-12);
        assert!(r.return_derivative.abs() < 1e-9);
    }

    #[test]
    fn time_reversal_negates_exponent() {
        let cubic = circle_cubic();
        let fwd = refine_cycle(&cubic, [1.05, 0.0], [0.0, 1.0]).unwrap();
        let bwd = refine_cycle(&cubic.negate(), [1.05, 0.0], [0.0, 1.0]).unwrap();
        assert!((fwd.exponent + bwd.exponent).abs() < 1e-8);
    }

    #[test]
    fn count_cycles_examples() {
        let saddle = field("x", "-y");
        let region = Region::new(-2.0, 2.0, -2.0, 2.0).unwrap();
        assert!(count_cycles(&saddle, &region, 16).unwrap().is_empty());

        let quintic = nested_quintic();
        let region = Region::new(-3.0, 3.0, -3.0, 3.0).unwrap();
        let cycles = count_cycles(&quintic, &region, 64).unwrap();
        assert_eq!(cycles.len(), 2);
        let mut radii: Vec<f64> = cycles
            .iter()
            .map(|c| c.anchor[0].hypot(c.anchor[1]))
            .collect();
        radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((radii[0] - 1.0).abs() < 1e-6);
        assert!((radii[1] - 2.0).abs() < 1e-6);
        assert!(cycles.iter().any(|c| c.stable));
        assert!(cycles.iter().any(|c| !c.stable));
    }
}
