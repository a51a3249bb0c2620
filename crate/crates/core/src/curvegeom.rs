//! Numerical geometry of the real variety C = 0.
//!
//! Ovals (bounded components free of singular points) are extracted by
//! marching squares on a regular grid, linked into closed polylines and
//! Newton-refined onto the curve. Components touching the query boundary
//! are classified unbounded and dropped; components passing near a
//! singular point are not ovals and are dropped as well.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Error;
use crate::polycore::{common_factor_free, FloatPoly, LinearPoly, Poly, Var};
use crate::Result;

/// Residual tolerance for accepted singular points.
pub const SINGULAR_TOL: f64 = 1e-9;
/// Residual tolerance for oval vertices after Newton refinement.
pub const ON_CURVE_TOL: f64 = 1e-10;
/// Spacing below which singular-point candidates are deduplicated.
pub const DEDUP_SPACING: f64 = 1e-6;
/// Default grid resolution.
pub const DEFAULT_GRID: u32 = 256;

/// Axis-aligned query window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Region {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Region {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self> {
        if !(xmin < xmax && ymin < ymax) {
            return Err(Error::Usage(format!(
                "invalid region [{xmin},{xmax}]x[{ymin},{ymax}]"
            )));
        }
        Ok(Region {
            xmin,
            xmax,
            ymin,
            ymax,
        })
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.xmin <= x && x <= self.xmax && self.ymin <= y && y <= self.ymax
    }

    pub fn diameter(&self) -> f64 {
        (self.xmax - self.xmin).hypot(self.ymax - self.ymin)
    }
}

impl Default for Region {
    fn default() -> Self {
        Region {
            xmin: -10.0,
            xmax: 10.0,
            ymin: -10.0,
            ymax: 10.0,
        }
    }
}

/// A point where C and both partial derivatives vanish (to tolerance).
#[derive(Debug, Clone, Serialize)]
pub struct SingularPoint {
    pub x: f64,
    pub y: f64,
    pub residual_c: f64,
    pub residual_cx: f64,
    pub residual_cy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Ccw,
    Cw,
}

/// Closed polyline approximation of a bounded component of C = 0.
#[derive(Debug, Clone, Serialize)]
pub struct Oval {
    pub vertices: Vec<[f64; 2]>,
    pub orientation: Orientation,
    pub max_residual: f64,
    pub bbox: Region,
}

impl Oval {
    pub fn signed_area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn diameter(&self) -> f64 {
        self.bbox.diameter()
    }

    /// Representative interior point: centroid, validated by parity test.
    pub fn interior_point(&self) -> Option<(f64, f64)> {
        let n = self.vertices.len() as f64;
        let cx = self.vertices.iter().map(|v| v[0]).sum::<f64>() / n;
        let cy = self.vertices.iter().map(|v| v[1]).sum::<f64>() / n;
        match point_in_oval((cx, cy), self) {
            Ok(true) => Some((cx, cy)),
            _ => None,
        }
    }
}

fn signed_area(vertices: &[[f64; 2]]) -> f64 {
    let n = vertices.len();
    let mut acc = 0.0;
    for k in 0..n {
        let a = vertices[k];
        let b = vertices[(k + 1) % n];
        acc += a[0] * b[1] - b[0] * a[1];
    }
    0.5 * acc
}

// ---------------------------------------------------------------------------
// Singular points
// ---------------------------------------------------------------------------

/// Grid-seeded Newton search for singular points of C = 0.
/// Complete only up to grid resolution.
pub fn find_singular_points(
    c: &Poly,
    region: &Region,
    grid_n: u32,
) -> Result<Vec<SingularPoint>> {
    let grid_n = grid_n.max(32);
    let cx = c.differentiate(Var::X);
    let cy = c.differentiate(Var::Y);
    if !common_factor_free(c, &cx, &cy)? {
        return Err(Error::DegenerateCurve);
    }
    let fc = FloatPoly::from_poly(c);
    let fcx = FloatPoly::from_poly(&cx);
    let fcy = FloatPoly::from_poly(&cy);
    let fcxx = FloatPoly::from_poly(&cx.differentiate(Var::X));
    let fcxy = FloatPoly::from_poly(&cx.differentiate(Var::Y));
    let fcyy = FloatPoly::from_poly(&cy.differentiate(Var::Y));

    let n = grid_n as usize;
    let dx = (region.xmax - region.xmin) / grid_n as f64;
    let dy = (region.ymax - region.ymin) / grid_n as f64;
    let xs: Vec<f64> = (0..=n).map(|i| region.xmin + i as f64 * dx).collect();
    let ys: Vec<f64> = (0..=n).map(|j| region.ymin + j as f64 * dy).collect();
    let mut vx = vec![0.0; (n + 1) * (n + 1)];
    let mut vy = vec![0.0; (n + 1) * (n + 1)];
    for j in 0..=n {
        for i in 0..=n {
            vx[j * (n + 1) + i] = fcx.eval(xs[i], ys[j]);
            vy[j * (n + 1) + i] = fcy.eval(xs[i], ys[j]);
        }
    }

    let mut found: Vec<SingularPoint> = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let idx = [
                j * (n + 1) + i,
                j * (n + 1) + i + 1,
                (j + 1) * (n + 1) + i + 1,
                (j + 1) * (n + 1) + i,
            ];
            let changes = |v: &[f64]| {
                let s = v[idx[0]] > 0.0;
                idx.iter().any(|&k| (v[k] > 0.0) != s)
            };
            if !(changes(&vx) && changes(&vy)) {
                continue;
            }
            let (mut px, mut py) = (xs[i] + 0.5 * dx, ys[j] + 0.5 * dy);
            let mut ok = false;
            for _ in 0..50 {
                let gx = fcx.eval(px, py);
                let gy = fcy.eval(px, py);
                if gx.abs() < 1e-13 && gy.abs() < 1e-13 {
                    ok = true;
                    break;
                }
                let a = fcxx.eval(px, py);
                let b = fcxy.eval(px, py);
                let d = fcyy.eval(px, py);
                let det = a * d - b * b;
                if det.abs() < 1e-300 {
                    break;
                }
                let sx = (d * gx - b * gy) / det;
                let sy = (a * gy - b * gx) / det;
                px -= sx;
                py -= sy;
                if !px.is_finite() || !py.is_finite() {
                    break;
                }
                if sx.abs() < 1e-14 && sy.abs() < 1e-14 {
                    ok = true;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let rc = fc.eval(px, py).abs();
            let rcx = fcx.eval(px, py).abs();
            let rcy = fcy.eval(px, py).abs();
            if rc > SINGULAR_TOL || rcx > SINGULAR_TOL || rcy > SINGULAR_TOL {
                continue;
            }
            if !region.contains(px, py) {
                continue;
            }
            if found
                .iter()
                .any(|s| (s.x - px).hypot(s.y - py) < DEDUP_SPACING)
            {
                continue;
            }
            found.push(SingularPoint {
                x: px,
                y: py,
                residual_c: rc,
                residual_cx: rcx,
                residual_cy: rcy,
            });
        }
    }
    found.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    Ok(found)
}

// ---------------------------------------------------------------------------
// Marching squares
// ---------------------------------------------------------------------------

/// Grid edge carrying a sign change. `dir` 0: between nodes (i,j)-(i+1,j),
/// `dir` 1: between (i,j)-(i,j+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct EdgeId {
    i: u32,
    j: u32,
    dir: u8,
}

impl EdgeId {
    fn on_boundary(&self, grid_n: u32) -> bool {
        match self.dir {
            0 => self.j == 0 || self.j == grid_n,
            _ => self.i == 0 || self.i == grid_n,
        }
    }
}

/// Trace the ovals of C = 0 inside `region`, certifying non-degeneracy.
pub fn trace_ovals(c: &Poly, region: &Region, grid_n: u32) -> Result<Vec<Oval>> {
    let singular = find_singular_points(c, region, grid_n.min(512))?;
    trace_ovals_with_singular(c, region, grid_n, &singular)
}

/// Trace ovals without the non-degeneracy certificate (explicit override);
/// no singular-point exclusion is applied.
pub fn trace_ovals_unchecked(c: &Poly, region: &Region, grid_n: u32) -> Result<Vec<Oval>> {
    trace_ovals_with_singular(c, region, grid_n, &[])
}

fn trace_ovals_with_singular(
    c: &Poly,
    region: &Region,
    grid_n: u32,
    singular: &[SingularPoint],
) -> Result<Vec<Oval>> {
    if c.is_constant() {
        return Err(Error::Usage("curve must be nonconstant".into()));
    }
    let grid_n = grid_n.max(32);
    let n = grid_n as usize;
    let fc = FloatPoly::from_poly(c);
    let fcx = FloatPoly::from_poly(&c.differentiate(Var::X));
    let fcy = FloatPoly::from_poly(&c.differentiate(Var::Y));

    let dx = (region.xmax - region.xmin) / grid_n as f64;
    let dy = (region.ymax - region.ymin) / grid_n as f64;
    let xs: Vec<f64> = (0..=n).map(|i| region.xmin + i as f64 * dx).collect();
    let ys: Vec<f64> = (0..=n).map(|j| region.ymin + j as f64 * dy).collect();
    let mut values = vec![0.0; (n + 1) * (n + 1)];
    for j in 0..=n {
        for i in 0..=n {
            values[j * (n + 1) + i] = fc.eval(xs[i], ys[j]);
        }
    }
    let val = |i: usize, j: usize| values[j * (n + 1) + i];
    // treat exact zeros as positive so every sign pattern is unambiguous
    let pos = |i: usize, j: usize| val(i, j) >= 0.0;

    // crossing coordinates per edge
    let mut crossings: BTreeMap<EdgeId, [f64; 2]> = BTreeMap::new();
    let mut cross = |e: EdgeId, v0: f64, v1: f64, p0: [f64; 2], p1: [f64; 2]| {
        let mut t = v0 / (v0 - v1);
        t = t.clamp(1e-9, 1.0 - 1e-9);
        let p = [p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1])];
        crossings.insert(e, p);
    };
    for j in 0..=n {
        for i in 0..n {
            if pos(i, j) != pos(i + 1, j) {
                cross(
                    EdgeId {
                        i: i as u32,
                        j: j as u32,
                        dir: 0,
                    },
                    val(i, j),
                    val(i + 1, j),
                    [xs[i], ys[j]],
                    [xs[i + 1], ys[j]],
                );
            }
        }
    }
    for j in 0..n {
        for i in 0..=n {
            if pos(i, j) != pos(i, j + 1) {
                cross(
                    EdgeId {
                        i: i as u32,
                        j: j as u32,
                        dir: 1,
                    },
                    val(i, j),
                    val(i, j + 1),
                    [xs[i], ys[j]],
                    [xs[i], ys[j + 1]],
                );
            }
        }
    }

    // segments per cell, each pairing two crossed edges
    let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let (iu, ju) = (i as u32, j as u32);
            let bottom = EdgeId { i: iu, j: ju, dir: 0 };
            let top = EdgeId {
                i: iu,
                j: ju + 1,
                dir: 0,
            };
            let left = EdgeId { i: iu, j: ju, dir: 1 };
            let right = EdgeId {
                i: iu + 1,
                j: ju,
                dir: 1,
            };
            let case = (pos(i, j) as u8)
                | ((pos(i + 1, j) as u8) << 1)
                | ((pos(i + 1, j + 1) as u8) << 2)
                | ((pos(i, j + 1) as u8) << 3);
            let mut push = |a: EdgeId, b: EdgeId| segments.push((a, b));
            match case {
                0 | 15 => {}
                1 | 14 => push(left, bottom),
                2 | 13 => push(bottom, right),
                3 | 12 => push(left, right),
                4 | 11 => push(top, right),
                6 | 9 => push(bottom, top),
                7 | 8 => push(left, top),
                5 | 10 => {
                    let center = fc.eval(xs[i] + 0.5 * dx, ys[j] + 0.5 * dy);
                    let bl_pos = pos(i, j);
                    // connect the center's sign region diagonally
                    let join_bl = (center >= 0.0) == bl_pos;
                    if (case == 5) == join_bl {
                        push(left, bottom);
                        push(top, right);
                    } else {
                        push(left, top);
                        push(bottom, right);
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    // adjacency: each edge sees at most two segments
    let mut adjacency: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
    for (sid, (a, b)) in segments.iter().enumerate() {
        adjacency.entry(*a).or_default().push(sid);
        adjacency.entry(*b).or_default().push(sid);
    }

    let mut visited = vec![false; segments.len()];
    let mut loops: Vec<Vec<EdgeId>> = Vec::new();
    for start in 0..segments.len() {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let (e0, e1) = segments[start];
        let mut path = vec![e0, e1];
        let mut closed = false;
        // extend forward from the tail
        loop {
            let tail = *path.last().unwrap();
            let next = adjacency[&tail]
                .iter()
                .copied()
                .find(|&sid| !visited[sid]);
            match next {
                Some(sid) => {
                    visited[sid] = true;
                    let (a, b) = segments[sid];
                    let other = if a == tail { b } else { a };
                    if other == path[0] {
                        closed = true;
                        break;
                    }
                    path.push(other);
                }
                None => break,
            }
        }
        if !closed {
            // extend backward from the head
            loop {
                let head = path[0];
                let next = adjacency[&head]
                    .iter()
                    .copied()
                    .find(|&sid| !visited[sid]);
                match next {
                    Some(sid) => {
                        visited[sid] = true;
                        let (a, b) = segments[sid];
                        let other = if a == head { b } else { a };
                        path.insert(0, other);
                    }
                    None => break,
                }
            }
            let head_ok = path[0].on_boundary(grid_n);
            let tail_ok = path.last().unwrap().on_boundary(grid_n);
            if head_ok || tail_ok {
                continue; // touches the window: classified unbounded
            }
            return Err(Error::ResolutionTooCoarse {
                suggested: grid_n * 2,
            });
        }
        loops.push(path);
    }

    let cell = dx.max(dy);
    let exclusion = 10.0 * cell;
    let mut ovals: Vec<Oval> = Vec::new();
    for path in loops {
        let raw: Vec<[f64; 2]> = path.iter().map(|e| crossings[e]).collect();
        if raw
            .iter()
            .any(|p| singular.iter().any(|s| (s.x - p[0]).hypot(s.y - p[1]) < exclusion))
        {
            continue; // passes a singular point: not an oval
        }
        if raw.len() < 16 {
            return Err(Error::ResolutionTooCoarse {
                suggested: grid_n * 2,
            });
        }
        let mut vertices = Vec::with_capacity(raw.len());
        let mut max_residual: f64 = 0.0;
        for (k, p) in raw.iter().enumerate() {
            let refined = refine_vertex(&fc, &fcx, &fcy, *p).or_else(|| {
                // bisection fallback along the originating grid edge
                bisect_edge(&fc, path[k], &xs, &ys)
            });
            match refined {
                Some(q) => {
                    max_residual = max_residual.max(fc.eval(q[0], q[1]).abs());
                    vertices.push(q);
                }
                None => {
                    return Err(Error::NonConvergence(
                        "oval vertex refinement stalled".into(),
                    ))
                }
            }
        }
        // canonical start: lexicographically smallest vertex
        let pivot = vertices
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(k, _)| k)
            .unwrap_or(0);
        vertices.rotate_left(pivot);
        let orientation = if signed_area(&vertices) >= 0.0 {
            Orientation::Ccw
        } else {
            Orientation::Cw
        };
        let bbox = Region {
            xmin: vertices.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min),
            xmax: vertices.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max),
            ymin: vertices.iter().map(|v| v[1]).fold(f64::INFINITY, f64::min),
            ymax: vertices.iter().map(|v| v[1]).fold(f64::NEG_INFINITY, f64::max),
        };
        ovals.push(Oval {
            vertices,
            orientation,
            max_residual,
            bbox,
        });
    }
    ovals.sort_by(|a, b| {
        (a.bbox.xmin, a.bbox.ymin, a.bbox.xmax, a.bbox.ymax)
            .partial_cmp(&(b.bbox.xmin, b.bbox.ymin, b.bbox.xmax, b.bbox.ymax))
            .unwrap()
    });
    Ok(ovals)
}

/// Newton step along the gradient: p <- p - C grad C / |grad C|^2.
fn refine_vertex(
    fc: &FloatPoly,
    fcx: &FloatPoly,
    fcy: &FloatPoly,
    mut p: [f64; 2],
) -> Option<[f64; 2]> {
    for _ in 0..20 {
        let v = fc.eval(p[0], p[1]);
        if v.abs() <= ON_CURVE_TOL {
            return Some(p);
        }
        let gx = fcx.eval(p[0], p[1]);
        let gy = fcy.eval(p[0], p[1]);
        let g2 = gx * gx + gy * gy;
        if g2 < 1e-300 {
            return None;
        }
        p[0] -= v * gx / g2;
        p[1] -= v * gy / g2;
        if !p[0].is_finite() || !p[1].is_finite() {
            return None;
        }
    }
    if fc.eval(p[0], p[1]).abs() <= ON_CURVE_TOL {
        Some(p)
    } else {
        None
    }
}

fn bisect_edge(fc: &FloatPoly, e: EdgeId, xs: &[f64], ys: &[f64]) -> Option<[f64; 2]> {
    let (mut a, mut b) = match e.dir {
        0 => (
            [xs[e.i as usize], ys[e.j as usize]],
            [xs[e.i as usize + 1], ys[e.j as usize]],
        ),
        _ => (
            [xs[e.i as usize], ys[e.j as usize]],
            [xs[e.i as usize], ys[e.j as usize + 1]],
        ),
    };
    let mut fa = fc.eval(a[0], a[1]);
    let fb = fc.eval(b[0], b[1]);
    if (fa >= 0.0) == (fb >= 0.0) {
        return None;
    }
    for _ in 0..200 {
        let m = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        let fm = fc.eval(m[0], m[1]);
        if fm.abs() <= ON_CURVE_TOL {
            return Some(m);
        }
        if (fm >= 0.0) == (fa >= 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

/// True iff D has a single strict sign on every oval polyline.
/// Subdivide each polyline edge `factor` times and Newton-project the new
/// points back onto C = 0. Quadrature over the polygonal interior converges
/// like the inscribed-area deficit, so flux checks need a finer polygon
/// than oval tracing produces.
pub fn densify_oval(c: &Poly, oval: &Oval, factor: usize) -> Result<Oval> {
    if factor < 2 {
        return Ok(oval.clone());
    }
    let fc = FloatPoly::from_poly(c);
    let fcx = FloatPoly::from_poly(&c.differentiate(Var::X));
    let fcy = FloatPoly::from_poly(&c.differentiate(Var::Y));
    let n = oval.vertices.len();
    let mut vertices = Vec::with_capacity(n * factor);
    let mut max_residual: f64 = 0.0;
    for k in 0..n {
        let a = oval.vertices[k];
        let b = oval.vertices[(k + 1) % n];
        for m in 0..factor {
            let t = m as f64 / factor as f64;
            let guess = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            let p = refine_vertex(&fc, &fcx, &fcy, guess)
                .ok_or_else(|| Error::NonConvergence("densification point left the curve".into()))?;
            max_residual = max_residual.max(fc.eval(p[0], p[1]).abs());
            vertices.push(p);
        }
    }
    let bbox = Region {
        xmin: vertices.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min),
        xmax: vertices.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max),
        ymin: vertices.iter().map(|v| v[1]).fold(f64::INFINITY, f64::min),
        ymax: vertices.iter().map(|v| v[1]).fold(f64::NEG_INFINITY, f64::max),
    };
    Ok(Oval {
        vertices,
        orientation: oval.orientation,
        max_residual: oval.max_residual.max(max_residual),
        bbox,
    })
}

pub fn line_disjoint_from_ovals(d: &LinearPoly, ovals: &[Oval]) -> bool {
    ovals.iter().all(|oval| {
        let mut sign = 0i8;
        oval.vertices.iter().all(|v| {
            let value = d.eval(v[0], v[1]);
            if value.abs() <= ON_CURVE_TOL {
                return false;
            }
            let s = if value > 0.0 { 1 } else { -1 };
            if sign == 0 {
                sign = s;
                true
            } else {
                s == sign
            }
        })
    })
}

fn dist_point_segment(p: (f64, f64), a: [f64; 2], b: [f64; 2]) -> f64 {
    let (px, py) = (p.0 - a[0], p.1 - a[1]);
    let (vx, vy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = vx * vx + vy * vy;
    let t = if len2 > 0.0 {
        ((px * vx + py * vy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (px - t * vx).hypot(py - t * vy)
}

/// Distance from a point to the closed polyline.
pub fn dist_to_polyline(p: (f64, f64), vertices: &[[f64; 2]]) -> f64 {
    let n = vertices.len();
    let mut best = f64::INFINITY;
    for k in 0..n {
        best = best.min(dist_point_segment(p, vertices[k], vertices[(k + 1) % n]));
    }
    best
}

/// Ray-casting parity test. Points within the polyline's resolution of the
/// boundary are ambiguous: the polyline cannot decide which side they are on.
pub fn point_in_oval(pt: (f64, f64), oval: &Oval) -> Result<bool> {
    let n = oval.vertices.len();
    let max_seg = (0..n)
        .map(|k| {
            let a = oval.vertices[k];
            let b = oval.vertices[(k + 1) % n];
            (a[0] - b[0]).hypot(a[1] - b[1])
        })
        .fold(0.0, f64::max);
    let ambiguous_radius = (0.25 * max_seg).max(ON_CURVE_TOL);
    if dist_to_polyline(pt, &oval.vertices) <= ambiguous_radius {
        return Err(Error::AmbiguousPoint);
    }
    let (px, py) = pt;
    let mut inside = false;
    for k in 0..n {
        let a = oval.vertices[k];
        let b = oval.vertices[(k + 1) % n];
        if (a[1] > py) != (b[1] > py) {
            let x_cross = a[0] + (py - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if px < x_cross {
                inside = !inside;
            }
        }
    }
    Ok(inside)
}
