//! Embedded Dormand–Prince 5(4) integrator with dense output.
//!
//! The 5th-order solution is propagated; the embedded 4th-order estimate
//! drives the step controller. Dense output is the standard order-4
//! interpolant, queryable at any time inside an accepted step.

use crate::error::Error;
use crate::Result;

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Abort when the solution norm exceeds this (finite-time blowup guard).
    pub norm_cap: f64,
    /// Step-control safety factor.
    pub safety: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 50_000_000,
            norm_cap: 1e8,
            safety: 0.9,
        }
    }
}

impl OdeOptions {
    pub fn with_tol(rtol: f64, atol: f64) -> Self {
        OdeOptions {
            rtol,
            atol,
            ..Default::default()
        }
    }
}

/// One accepted step with its dense-output coefficients.
#[derive(Debug, Clone)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    rcont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    pub fn eval(&self, t: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        let theta = if h != 0.0 { (t - self.t0) / h } else { 0.0 };
        let th1 = 1.0 - theta;
        let mut out = [0.0; N];
        for i in 0..N {
            let r = &self.rcont;
            out[i] = r[0][i]
                + theta
                    * (r[1][i] + th1 * (r[2][i] + theta * (r[3][i] + th1 * r[4][i])));
        }
        out
    }
}

#[derive(Debug)]
pub struct OdeResult<const N: usize> {
    pub steps: Vec<DenseStep<N>>,
    pub t_end: f64,
    pub y_end: [f64; N],
    /// Accumulated magnitude of the embedded local error estimate, per
    /// component; a pessimistic global-error proxy.
    pub err_accum: [f64; N],
    /// Time at which the stop predicate fired, if any.
    pub event_t: Option<f64>,
}

const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const A7: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

fn norm<const N: usize>(y: &[f64; N]) -> f64 {
    y.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Integrate y' = f(y) from t = 0 to `t_end` (> 0). `stop` inspects each
/// accepted dense step and may return an event time inside it; integration
/// then terminates exactly there.
pub fn integrate<const N: usize, F>(
    f: F,
    y0: [f64; N],
    t_end: f64,
    opts: &OdeOptions,
    keep_steps: bool,
    mut stop: Option<&mut dyn FnMut(&DenseStep<N>) -> Option<f64>>,
) -> Result<OdeResult<N>>
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    if !(t_end > 0.0) {
        return Err(Error::Usage("integration horizon must be positive".into()));
    }
    let mut t = 0.0;
    let mut y = y0;
    let mut k1 = f(&y);
    let mut h = initial_step(&y, &k1, opts, t_end);
    let mut steps: Vec<DenseStep<N>> = Vec::new();
    let mut err_accum = [0.0; N];
    let mut nsteps = 0usize;

    while t < t_end {
        nsteps += 1;
        if nsteps > opts.max_steps {
            return Err(Error::Integration {
                message: "step budget exhausted".into(),
                t,
            });
        }
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(Error::Integration {
                message: "step-size underflow (finite-time blowup?)".into(),
                t,
            });
        }
        if t + h > t_end {
            h = t_end - t;
        }

        let mut k = [[0.0; N]; 7];
        k[0] = k1;
        stage(&f, &y, h, &k.clone(), &A2, &mut k, 1);
        stage(&f, &y, h, &k.clone(), &A3, &mut k, 2);
        stage(&f, &y, h, &k.clone(), &A4, &mut k, 3);
        stage(&f, &y, h, &k.clone(), &A5, &mut k, 4);
        stage(&f, &y, h, &k.clone(), &A6, &mut k, 5);
        let mut y1 = [0.0; N];
        for i in 0..N {
            let mut acc = 0.0;
            for (s, a) in A7.iter().enumerate() {
                acc += a * k[s][i];
            }
            y1[i] = y[i] + h * acc;
        }
        k[6] = f(&y1);

        let mut err = 0.0;
        let mut err_components = [0.0; N];
        for i in 0..N {
            let mut e = 0.0;
            for (s, c) in E.iter().enumerate() {
                e += c * k[s][i];
            }
            e *= h;
            err_components[i] = e.abs();
            let sc = opts.atol + opts.rtol * y[i].abs().max(y1[i].abs());
            err += (e / sc) * (e / sc);
        }
        err = (err / N as f64).sqrt();

        if err <= 1.0 {
            // accepted
            let mut rcont = [[0.0; N]; 5];
            for i in 0..N {
                let ydiff = y1[i] - y[i];
                let bspl = h * k[0][i] - ydiff;
                rcont[0][i] = y[i];
                rcont[1][i] = ydiff;
                rcont[2][i] = bspl;
                rcont[3][i] = ydiff - h * k[6][i] - bspl;
                let mut d = 0.0;
                for (s, dc) in D.iter().enumerate() {
                    d += dc * k[s][i];
                }
                rcont[4][i] = h * d;
            }
            let step = DenseStep {
                t0: t,
                t1: t + h,
                rcont,
            };
            for i in 0..N {
                err_accum[i] += err_components[i];
            }
            if let Some(stop_fn) = stop.as_deref_mut() {
                if let Some(te) = stop_fn(&step) {
                    let ye = step.eval(te);
                    if keep_steps {
                        steps.push(step);
                    }
                    return Ok(OdeResult {
                        steps,
                        t_end: te,
                        y_end: ye,
                        err_accum,
                        event_t: Some(te),
                    });
                }
            }
            t += h;
            y = y1;
            k1 = k[6]; // FSAL
            if keep_steps {
                steps.push(step);
            }
            if norm(&y) > opts.norm_cap {
                return Err(Error::Integration {
                    message: "solution norm exceeded the blowup cap".into(),
                    t,
                });
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (opts.safety * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= factor;
        } else {
            h *= (opts.safety * err.powf(-0.2)).clamp(0.2, 1.0);
        }
    }

    Ok(OdeResult {
        steps,
        t_end: t,
        y_end: y,
        err_accum,
        event_t: None,
    })
}

fn stage<const N: usize, F>(
    f: &F,
    y: &[f64; N],
    h: f64,
    k: &[[f64; N]; 7],
    a: &[f64],
    out: &mut [[f64; N]; 7],
    idx: usize,
) where
    F: Fn(&[f64; N]) -> [f64; N],
{
    let mut ytmp = [0.0; N];
    for i in 0..N {
        let mut acc = 0.0;
        for (s, c) in a.iter().enumerate() {
            acc += c * k[s][i];
        }
        ytmp[i] = y[i] + h * acc;
    }
    out[idx] = f(&ytmp);
}

fn initial_step<const N: usize>(
    y0: &[f64; N],
    f0: &[f64; N],
    _opts: &OdeOptions,
    t_end: f64,
) -> f64 {
    let d0 = norm(y0).max(1e-5);
    let d1 = norm(f0);
    let h0 = if d1 > 1e-10 { 0.01 * d0 / d1 } else { 1e-6 };
    h0.min(t_end).min(0.1).max(1e-10)
}
