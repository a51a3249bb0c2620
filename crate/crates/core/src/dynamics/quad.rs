//! Adaptive two-dimensional quadrature over polygonal domains.
//!
//! The polygon is ear-clipped into triangles; each triangle is integrated
//! by a 7-point degree-5 rule and subdivided at edge midpoints until the
//! parent/children discrepancy meets the locally allocated tolerance.

use crate::error::Error;
use crate::Result;

type Pt = [f64; 2];

fn tri_area(a: Pt, b: Pt, c: Pt) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

/// 7-point degree-5 rule (Radon) on a triangle.
fn rule7(f: &impl Fn(f64, f64) -> f64, a: Pt, b: Pt, c: Pt) -> f64 {
    const SQRT15: f64 = 3.872983346207417;
    let w0 = 9.0 / 40.0;
    let w1 = (155.0 - SQRT15) / 1200.0;
    let w2 = (155.0 + SQRT15) / 1200.0;
    let l1 = (6.0 - SQRT15) / 21.0;
    let l2 = (6.0 + SQRT15) / 21.0;

    let eval_bary = |u: f64, v: f64, w: f64| {
        let x = u * a[0] + v * b[0] + w * c[0];
        let y = u * a[1] + v * b[1] + w * c[1];
        f(x, y)
    };
    let third = 1.0 / 3.0;
    let mut acc = w0 * eval_bary(third, third, third);
    for (l, w) in [(l1, w1), (l2, w2)] {
        let m = 1.0 - 2.0 * l;
        acc += w * (eval_bary(m, l, l) + eval_bary(l, m, l) + eval_bary(l, l, m));
    }
    acc * tri_area(a, b, c).abs()
}

fn adaptive_triangle(
    f: &impl Fn(f64, f64) -> f64,
    a: Pt,
    b: Pt,
    c: Pt,
    tol: f64,
    depth: u32,
) -> f64 {
    let parent = rule7(f, a, b, c);
    let mab = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    let mbc = [0.5 * (b[0] + c[0]), 0.5 * (b[1] + c[1])];
    let mca = [0.5 * (c[0] + a[0]), 0.5 * (c[1] + a[1])];
    let children = [
        (a, mab, mca),
        (mab, b, mbc),
        (mca, mbc, c),
        (mab, mbc, mca),
    ];
    let refined: f64 = children.iter().map(|&(p, q, r)| rule7(f, p, q, r)).sum();
    // the discrepancy of a tiny triangle bottoms out at roundoff noise while
    // the allocated tolerance keeps shrinking 4x per level; accepting at a
    // few ulps of the local integral prevents runaway subdivision
    let noise_floor = 4e-15 * refined.abs();
    if (parent - refined).abs() <= tol.max(noise_floor) || depth >= 28 {
        return refined;
    }
    children
        .iter()
        .map(|&(p, q, r)| adaptive_triangle(f, p, q, r, 0.25 * tol, depth + 1))
        .sum()
}

/// Ear-clipping triangulation of a simple polygon (either orientation).
pub fn triangulate(vertices: &[Pt]) -> Result<Vec<[Pt; 3]>> {
    if vertices.len() < 3 {
        return Err(Error::Usage("polygon needs at least 3 vertices".into()));
    }
    let mut poly: Vec<Pt> = vertices.to_vec();
    // ensure counterclockwise orientation
    let area: f64 = {
        let n = poly.len();
        (0..n)
            .map(|k| {
                let p = poly[k];
                let q = poly[(k + 1) % n];
                p[0] * q[1] - q[0] * p[1]
            })
            .sum::<f64>()
            * 0.5
    };
    if area < 0.0 {
        poly.reverse();
    }
    // convex fast path: fan triangulation is O(n), which matters for the
    // densified polygons used in flux checks; refinement noise puts tiny
    // negative crosses on smooth ovals, so convexity is judged relative to
    // the largest turn
    let n = poly.len();
    let crosses: Vec<f64> = (0..n)
        .map(|k| tri_area(poly[(k + n - 1) % n], poly[k], poly[(k + 1) % n]))
        .collect();
    let max_cross = crosses.iter().fold(0.0_f64, |a, &b| a.max(b));
    if crosses.iter().all(|&c| c >= -1e-9 * max_cross) {
        // balanced recursion keeps triangle diameters proportional to the
        // chord they span, unlike a fan whose slivers all cross the polygon
        let mut triangles = Vec::with_capacity(n - 2);
        let mut stack = vec![(0usize, n - 1)];
        while let Some((i, j)) = stack.pop() {
            if j - i < 2 {
                continue;
            }
            let k = (i + j) / 2;
            triangles.push([poly[i], poly[k], poly[j]]);
            stack.push((i, k));
            stack.push((k, j));
        }
        return Ok(triangles);
    }
    let mut triangles = Vec::with_capacity(poly.len() - 2);
    let mut guard = 0usize;
    while poly.len() > 3 {
        guard += 1;
        if guard > vertices.len() * vertices.len() + 16 {
            return Err(Error::Internal(
                "ear clipping failed: polygon may be self-intersecting".into(),
            ));
        }
        let n = poly.len();
        let mut clipped = false;
        for k in 0..n {
            let a = poly[(k + n - 1) % n];
            let b = poly[k];
            let c = poly[(k + 1) % n];
            let area = tri_area(a, b, c);
            if area <= 0.0 {
                if area > -1e-18 {
                    // collinear sliver: drop the vertex
                    poly.remove(k);
                    clipped = true;
                    break;
                }
                continue;
            }
            let contains_other = poly.iter().enumerate().any(|(m, &p)| {
                if m == (k + n - 1) % n || m == k || m == (k + 1) % n {
                    return false;
                }
                point_in_triangle(p, a, b, c)
            });
            if contains_other {
                continue;
            }
            triangles.push([a, b, c]);
            poly.remove(k);
            clipped = true;
            break;
        }
        if !clipped {
            return Err(Error::Internal(
                "ear clipping stalled: polygon may be degenerate".into(),
            ));
        }
    }
    if tri_area(poly[0], poly[1], poly[2]).abs() > 0.0 {
        triangles.push([poly[0], poly[1], poly[2]]);
    }
    Ok(triangles)
}

/// Closed containment for a counterclockwise triangle: points exactly on
/// the boundary count as inside (an ear whose diagonal passes through a
/// reflex vertex must be rejected).
fn point_in_triangle(p: Pt, a: Pt, b: Pt, c: Pt) -> bool {
    let eps = 1e-14 * tri_area(a, b, c).abs();
    tri_area(a, b, p) >= -eps && tri_area(b, c, p) >= -eps && tri_area(c, a, p) >= -eps
}

/// Adaptive integral of `f` over the interior of a simple polygon.
pub fn integrate_polygon(
    f: &impl Fn(f64, f64) -> f64,
    vertices: &[Pt],
    tol: f64,
) -> Result<f64> {
    let triangles = triangulate(vertices)?;
    let total_area: f64 = triangles
        .iter()
        .map(|t| tri_area(t[0], t[1], t[2]).abs())
        .sum();
    if total_area <= 0.0 {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    // tolerance budget: proportional to area, with a per-count floor so that
    // boundary slivers of a finely sampled polygon are not driven below
    // their roundoff noise (the floor adds at most tol/16 of total error)
    let floor = 1.0 / (16.0 * triangles.len() as f64);
    for t in &triangles {
        let area = tri_area(t[0], t[1], t[2]).abs();
        let local = tol * (area / total_area + floor);
        acc += adaptive_triangle(f, t[0], t[1], t[2], local.max(1e-300), 0);
    }
    Ok(acc)
}
