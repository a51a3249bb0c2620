//! Command-line front end: every construction and verification as a
//! subcommand with machine-readable, byte-deterministic output.
//!
//! One JSON document per invocation on standard out (CSV/SVG where flagged);
//! diagnostics on standard error. Floats are printed in scientific notation
//! with 17 significant digits, rationals as "num/den".

use std::io::Write;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::construct::{self, CompositionResult, Family};
use crate::curvegeom::{self, Oval, Region, DEFAULT_GRID};
use crate::dynamics::{self, CycleReport, VectorField};
use crate::error::Error;
use crate::polycore::{format_poly, format_rat, parse_poly, parse_rat, LinearPoly, Poly, Rat};
use crate::Result;

/// JSON formatter printing every float with 17 significant digits so that
/// repeated runs are byte-identical and values round-trip exactly.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{:.16e}", value as f64)
    }
}

fn to_json_bytes(value: &Value) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Internal(format!("serialization failed: {e}")))?;
    buf.push(b'\n');
    Ok(buf)
}

#[derive(Parser)]
#[command(
    name = "limcycle",
    version,
    about = "Planar polynomial vector fields with prescribed invariant curves and hyperbolic limit cycles",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct RegionArgs {
    /// Rectangle "xmin,xmax,ymin,ymax" (default -10,10,-10,10)
    #[arg(long, allow_hyphen_values = true)]
    region: Option<String>,
}

impl RegionArgs {
    fn parse(&self) -> Result<Region> {
        match &self.region {
            None => Ok(Region::default()),
            Some(text) => {
                let parts: Vec<&str> = text.split(',').collect();
                if parts.len() != 4 {
                    return Err(Error::Usage(format!(
                        "region must be xmin,xmax,ymin,ymax, got '{text}'"
                    )));
                }
                let mut v = [0.0; 4];
                for (slot, part) in v.iter_mut().zip(&parts) {
                    *slot = part.trim().parse::<f64>().map_err(|_| {
                        Error::Usage(format!("invalid region coordinate '{part}'"))
                    })?;
                }
                Region::new(v[0], v[1], v[2], v[3])
            }
        }
    }
}

#[derive(Args)]
struct FieldArgs {
    /// First component P of the field (dx/dt)
    #[arg(long, allow_hyphen_values = true)]
    px: String,
    /// Second component Q of the field (dy/dt)
    #[arg(long = "qy-field", allow_hyphen_values = true)]
    qy_field: String,
}

impl FieldArgs {
    fn parse(&self) -> Result<VectorField> {
        VectorField::new(parse_poly(&self.px)?, parse_poly(&self.qy_field)?)
    }
}

#[derive(Args)]
struct LineArgs {
    /// Auxiliary line D (degree-one polynomial); defaults to a vertical line
    /// right of every traced oval
    #[arg(long, allow_hyphen_values = true)]
    line: Option<String>,
    /// Coefficient alpha (rational); default chosen so alpha*D_x + beta*D_y != 0
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Coefficient beta (rational)
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
}

impl LineArgs {
    fn parse(&self, ovals: &[Oval], region: &Region) -> Result<(LinearPoly, Rat, Rat)> {
        let d = match &self.line {
            Some(text) => LinearPoly::from_poly(&parse_poly(text)?)?,
            None => construct::default_line(ovals, region),
        };
        let (da, db) = construct::default_coefficients(&d);
        let alpha = match &self.alpha {
            Some(t) => parse_rat(t)?,
            None => da,
        };
        let beta = match &self.beta {
            Some(t) => parse_rat(t)?,
            None => db,
        };
        Ok((d, alpha, beta))
    }
}

#[derive(Args)]
struct BuilderArgs {
    /// Squared radii of the base-field cycles, comma-separated rationals
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    radii: String,
    /// Relocation center "cx,cy" (rationals)
    #[arg(long, allow_hyphen_values = true)]
    center: String,
    /// Relocation scale (positive rational)
    #[arg(long, allow_hyphen_values = true)]
    scale: String,
    #[command(flatten)]
    line: LineArgs,
}

impl BuilderArgs {
    fn parse(&self) -> Result<(Vec<Rat>, (Rat, Rat), Rat, Option<LinearPoly>, Option<Rat>, Option<Rat>)> {
        let radii = self
            .radii
            .split(',')
            .map(|t| parse_rat(t.trim()))
            .collect::<Result<Vec<Rat>>>()?;
        let center_parts: Vec<&str> = self.center.split(',').collect();
        if center_parts.len() != 2 {
            return Err(Error::Usage(format!(
                "center must be cx,cy, got '{}'",
                self.center
            )));
        }
        let cx = parse_rat(center_parts[0].trim())?;
        let cy = parse_rat(center_parts[1].trim())?;
        let scale = parse_rat(&self.scale)?;
        let d = match &self.line.line {
            Some(text) => Some(LinearPoly::from_poly(&parse_poly(text)?)?),
            None => None,
        };
        let alpha = self.line.alpha.as_deref().map(parse_rat).transpose()?;
        let beta = self.line.beta.as_deref().map(parse_rat).transpose()?;
        Ok((radii, (cx, cy), scale, d, alpha, beta))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify invariance of a curve under a field and print the exact cofactor
    Cofactor {
        /// Curve C
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Build the field (alpha*C - D*C_y, beta*C + D*C_x) with C = 0 invariant
    Christopher {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[command(flatten)]
        line: LineArgs,
        #[command(flatten)]
        region: RegionArgs,
        /// Marching-squares grid resolution
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: u32,
    },
    /// Trace the ovals of a curve inside a region
    Ovals {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: u32,
    },
    /// Locate singular points of a curve inside a region
    Singular {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: u32,
    },
    /// Count and refine hyperbolic limit cycles of a field in a region
    Cycles {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        region: RegionArgs,
        /// Seed-lattice size (seeds per axis is the square root of this)
        #[arg(long, default_value_t = 64)]
        grid: u32,
    },
    /// Compose a base field with a curve-preserving field; epsilon "auto"
    /// searches for a value keeping every cycle hyperbolic
    Compose {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        line: LineArgs,
        #[command(flatten)]
        region: RegionArgs,
        /// "auto" or a nonnegative rational
        #[arg(long, default_value = "auto", allow_hyphen_values = true)]
        epsilon: String,
    },
    /// Print the catalog curve of the given degree with its oval count
    Harnack {
        #[arg(long)]
        degree: u32,
    },
    /// Maximal number of ovals of a degree-m real projective curve
    Har {
        #[arg(long)]
        m: u32,
    },
    /// Best known lower bounds on limit-cycle counts by family and degree
    Bounds {
        /// hilbert | kolmogorov | square
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: u32,
    },
    /// Lower bound for degree n+m fields: table value at n plus har(m)
    Recurrent {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
    },
    /// Lower bound with a supplied curve: table value at n plus traced ovals
    Hcbound {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[command(flatten)]
        region: RegionArgs,
    },
    /// Degree-5 system x' = x*p, y' = y*q with cycles in the open first quadrant
    Kolmogorov {
        #[command(flatten)]
        builder: BuilderArgs,
    },
    /// System leaving the unit square invariant with interior cycles
    Game {
        #[command(flatten)]
        builder: BuilderArgs,
    },
    /// Integral of (alpha*D_x + beta*D_y)/D^2 over each traced oval interior
    Flux {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[command(flatten)]
        line: LineArgs,
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: u32,
    },
    /// Phase portrait: sampled trajectories plus detected cycles, CSV or SVG
    Portrait {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        region: RegionArgs,
        /// Seeds per axis of the sampling lattice
        #[arg(long, default_value_t = 6)]
        grid: u32,
        /// csv | svg
        #[arg(long, default_value = "svg")]
        format: String,
        /// Output path; standard out when omitted
        #[arg(long)]
        out: Option<String>,
        /// Curve C to overlay on the portrait (SVG only)
        #[arg(long = "overlay-curve", allow_hyphen_values = true)]
        overlay_curve: Option<String>,
    },
}

/// Entry point shared by the binary and the integration tests. Returns the
/// process exit code; JSON/CSV/SVG goes to `out`, diagnostics to `err`.
pub fn dispatch<O: Write, E: Write>(argv: &[String], out: &mut O, err: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return 0;
                }
                _ => 1,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match run(&cli.cmd) {
        Ok(Outcome { bytes, code }) => {
            if let Err(e) = out.write_all(&bytes) {
                let _ = writeln!(err, "error: {e}");
                return 1;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

struct Outcome {
    bytes: Vec<u8>,
    code: i32,
}

impl Outcome {
    fn json(value: Value) -> Result<Outcome> {
        Ok(Outcome {
            bytes: to_json_bytes(&value)?,
            code: 0,
        })
    }
}

fn run(cmd: &Cmd) -> Result<Outcome> {
    match cmd {
        Cmd::Cofactor { curve, field } => {
            let c = parse_poly(curve)?;
            let x = field.parse()?;
            match construct::cofactor(&c, &x) {
                Ok(cert) => Outcome::json(json!({ "cofactor": format_poly(&cert.cofactor) })),
                Err(Error::NotInvariant { remainder }) => Ok(Outcome {
                    bytes: to_json_bytes(&json!({
                        "invariant": false,
                        "remainder": remainder,
                    }))?,
                    code: 2,
                }),
                Err(e) => Err(e),
            }
        }
        Cmd::Christopher {
            curve,
            line,
            region,
            grid,
        } => {
            let c = parse_poly(curve)?;
            let region = region.parse()?;
            let ovals = curvegeom::trace_ovals(&c, &region, *grid)?;
            let (d, alpha, beta) = line.parse(&ovals, &region)?;
            let (field, cert) = construct::christopher(&c, &d, &alpha, &beta, &region)?;
            Outcome::json(json!({
                "p": format_poly(&field.p),
                "q": format_poly(&field.q),
                "cofactor": format_poly(&cert.cofactor),
                "line": format_poly(&d.to_poly()),
                "alpha": format_rat(&alpha),
                "beta": format_rat(&beta),
                "oval_count": ovals.len(),
            }))
        }
        Cmd::Ovals {
            curve,
            region,
            grid,
        } => {
            let c = parse_poly(curve)?;
            let region = region.parse()?;
            let ovals = curvegeom::trace_ovals(&c, &region, *grid)?;
            let items: Vec<Value> = ovals.iter().map(oval_json).collect();
            Outcome::json(json!({ "count": ovals.len(), "ovals": items }))
        }
        Cmd::Singular {
            curve,
            region,
            grid,
        } => {
            let c = parse_poly(curve)?;
            let region = region.parse()?;
            let points = curvegeom::find_singular_points(&c, &region, *grid)?;
            let items = serde_json::to_value(&points)
                .map_err(|e| Error::Internal(e.to_string()))?;
            Outcome::json(json!({ "count": points.len(), "points": items }))
        }
        Cmd::Cycles {
            field,
            region,
            grid,
        } => {
            let f = field.parse()?;
            let region = region.parse()?;
            let cycles = dynamics::count_cycles(&f, &region, *grid as usize)?;
            let items: Vec<Value> = cycles.iter().map(cycle_json).collect();
            Outcome::json(json!({ "count": cycles.len(), "cycles": items }))
        }
        Cmd::Compose {
            curve,
            field,
            line,
            region,
            epsilon,
        } => {
            let c = parse_poly(curve)?;
            let base = field.parse()?;
            let region = region.parse()?;
            let ovals = curvegeom::trace_ovals(&c, &region, DEFAULT_GRID)?;
            let (d, alpha, beta) = line.parse(&ovals, &region)?;
            let (inner, _) = construct::christopher(&c, &d, &alpha, &beta, &region)?;
            let result = if epsilon == "auto" {
                construct::epsilon_search(&c, &base, &inner, &region)?
            } else {
                construct::compose(&c, &base, &inner, &parse_rat(epsilon)?)?
            };
            Outcome::json(composition_json(&result))
        }
        Cmd::Harnack { degree } => {
            let curve = construct::harnack_curve(*degree)?;
            Outcome::json(json!({
                "degree": degree,
                "curve": format_poly(&curve),
                "oval_count": construct::har(*degree)?,
            }))
        }
        Cmd::Har { m } => Outcome::json(json!({ "m": m, "value": construct::har(*m)? })),
        Cmd::Bounds { family, n } => {
            let entry = construct::known_lower_bound(Family::parse(family)?, *n)?;
            let value =
                serde_json::to_value(entry).map_err(|e| Error::Internal(e.to_string()))?;
            Outcome::json(value)
        }
        Cmd::Recurrent { n, m } => Outcome::json(json!({
            "n": n,
            "m": m,
            "value": construct::recurrent_bound(*n, *m)?,
        })),
        Cmd::Hcbound { n, curve, region } => {
            let c = parse_poly(curve)?;
            let region = region.parse()?;
            Outcome::json(json!({
                "n": n,
                "curve": format_poly(&c),
                "value": construct::hc_bound(*n, &c, &region)?,
            }))
        }
        Cmd::Kolmogorov { builder } => {
            let result = run_builder(builder, true)?;
            Outcome::json(composition_json(&result))
        }
        Cmd::Game { builder } => {
            let result = run_builder(builder, false)?;
            Outcome::json(composition_json(&result))
        }
        Cmd::Flux {
            curve,
            line,
            region,
            grid,
        } => {
            let c = parse_poly(curve)?;
            let region = region.parse()?;
            let ovals = curvegeom::trace_ovals(&c, &region, *grid)?;
            let (d, alpha, beta) = line.parse(&ovals, &region)?;
            let mut fluxes = Vec::new();
            for oval in &ovals {
                let dense = curvegeom::densify_oval(&c, oval, 8)?;
                fluxes.push(dynamics::green_flux(&dense, &d, &alpha, &beta, 1e-8)?);
            }
            Outcome::json(json!({
                "line": format_poly(&d.to_poly()),
                "alpha": format_rat(&alpha),
                "beta": format_rat(&beta),
                "fluxes": fluxes,
            }))
        }
        Cmd::Portrait {
            field,
            region,
            grid,
            format,
            out,
            overlay_curve,
        } => {
            let f = field.parse()?;
            let region = region.parse()?;
            let overlay = overlay_curve.as_deref().map(parse_poly).transpose()?;
            let bytes = match format.as_str() {
                "csv" => portrait_csv(&f, &region, *grid)?,
                "svg" => portrait_svg(&f, &region, *grid, overlay.as_ref())?,
                other => {
                    return Err(Error::Usage(format!(
                        "portrait format must be csv or svg, got '{other}'"
                    )))
                }
            };
            match out {
                Some(path) => {
                    std::fs::write(path, &bytes)?;
                    Outcome::json(json!({ "written": path }))
                }
                None => Ok(Outcome { bytes, code: 0 }),
            }
        }
    }
}

fn run_builder(builder: &BuilderArgs, kolmogorov: bool) -> Result<CompositionResult> {
    let (radii, (cx, cy), scale, line, alpha, beta) = builder.parse()?;
    let default_d = if kolmogorov {
        // x = -1: left of the first quadrant.
        LinearPoly::from_poly(&parse_poly("x + 1")?)?
    } else {
        // x = 2: right of the unit square.
        LinearPoly::from_poly(&parse_poly("x - 2")?)?
    };
    let d = line.unwrap_or(default_d);
    let (da, db) = construct::default_coefficients(&d);
    let alpha = alpha.unwrap_or(da);
    let beta = beta.unwrap_or(db);
    if kolmogorov {
        construct::build_kolmogorov(&radii, (&cx, &cy), &scale, &d, &alpha, &beta)
    } else {
        construct::build_game(&radii, (&cx, &cy), &scale, &d, &alpha, &beta)
    }
}

/// Oval metadata without the (large) vertex list.
fn oval_json(o: &Oval) -> Value {
    json!({
        "orientation": if o.orientation == curvegeom::Orientation::Ccw { "ccw" } else { "cw" },
        "vertices": o.vertices.len(),
        "area": o.signed_area().abs(),
        "max_residual": o.max_residual,
        "bbox": o.bbox,
    })
}

/// Cycle report without the orbit polyline.
fn cycle_json(r: &CycleReport) -> Value {
    json!({
        "anchor": r.anchor,
        "period": r.period,
        "exponent": r.exponent,
        "multiplier": r.multiplier,
        "closure_error": r.closure_error,
        "stable": r.stable,
        "hyperbolic": r.hyperbolic,
    })
}

fn composition_json(result: &CompositionResult) -> Value {
    let (n, c) = result.degree_budget;
    let mut doc = json!({
        "z": {
            "p": format_poly(&result.z.p),
            "q": format_poly(&result.z.q),
        },
        "epsilon": format_rat(&result.epsilon),
        "certificate": { "cofactor": format_poly(&result.certificate.cofactor) },
        "base_reports": result.base_reports.iter().map(cycle_json).collect::<Vec<_>>(),
        "oval_reports": result.oval_reports.iter().map(cycle_json).collect::<Vec<_>>(),
        "degree": { "n": n, "c": c, "total": result.z.degree() },
        "degenerate": result.degenerate,
    });
    if let Some((p_factor, q_factor)) = &result.factors {
        doc["factors"] = json!({
            "p": format_poly(p_factor),
            "q": format_poly(q_factor),
        });
    }
    doc
}

/// Deterministic seed lattice: grid x grid interior points of the region.
fn seed_lattice(region: &Region, grid: u32) -> Vec<[f64; 2]> {
    let n = grid.max(1) as usize;
    let mut seeds = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let fx = (i as f64 + 0.5) / n as f64;
            let fy = (j as f64 + 0.5) / n as f64;
            seeds.push([
                region.xmin + fx * (region.xmax - region.xmin),
                region.ymin + fy * (region.ymax - region.ymin),
            ]);
        }
    }
    seeds
}

/// Sample one streamline per lattice seed; equilibria and escapes are skipped.
fn sample_streamlines(
    field: &VectorField,
    region: &Region,
    grid: u32,
) -> Vec<Vec<(f64, [f64; 2])>> {
    let mut lines = Vec::new();
    for seed in seed_lattice(region, grid) {
        let Ok(traj) = dynamics::flow(field, seed, 10.0, 1e-5) else {
            continue;
        };
        let points: Vec<(f64, [f64; 2])> = traj
            .points()
            .into_iter()
            .take_while(|(_, p)| {
                p[0].is_finite()
                    && p[1].is_finite()
                    && p[0] >= region.xmin - 1.0
                    && p[0] <= region.xmax + 1.0
                    && p[1] >= region.ymin - 1.0
                    && p[1] <= region.ymax + 1.0
            })
            .collect();
        if points.len() > 1 {
            lines.push(points);
        }
    }
    lines
}

fn portrait_csv(field: &VectorField, region: &Region, grid: u32) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    for (k, line) in sample_streamlines(field, region, grid).iter().enumerate() {
        writeln!(buf, "# orbit {k}")?;
        writeln!(buf, "t,x,y")?;
        for (t, p) in line {
            writeln!(buf, "{:.16e},{:.16e},{:.16e}", t, p[0], p[1])?;
        }
    }
    let cycles = dynamics::count_cycles(field, region, 64)?;
    for (k, cycle) in cycles.iter().enumerate() {
        writeln!(buf, "# cycle {k}")?;
        writeln!(buf, "t,x,y")?;
        let m = cycle.orbit.len();
        for (i, p) in cycle.orbit.iter().enumerate() {
            let t = cycle.period * i as f64 / m as f64;
            writeln!(buf, "{:.16e},{:.16e},{:.16e}", t, p[0], p[1])?;
        }
    }
    Ok(buf)
}

fn portrait_svg(
    field: &VectorField,
    region: &Region,
    grid: u32,
    overlay: Option<&Poly>,
) -> Result<Vec<u8>> {
    const W: f64 = 800.0;
    const H: f64 = 800.0;
    let sx = W / (region.xmax - region.xmin);
    let sy = H / (region.ymax - region.ymin);
    let map = |p: [f64; 2]| -> (f64, f64) {
        (
            (p[0] - region.xmin) * sx,
            // SVG y grows downward.
            (region.ymax - p[1]) * sy,
        )
    };
    let path_of = |pts: &mut dyn Iterator<Item = [f64; 2]>| -> String {
        let mut s = String::new();
        for (i, p) in pts.enumerate() {
            let (x, y) = map(p);
            let opcode = if i == 0 { 'M' } else { 'L' };
            s.push_str(&format!("{opcode}{x:.3} {y:.3} "));
        }
        s
    };
    let mut buf = Vec::new();
    writeln!(
        buf,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\">"
    )?;
    writeln!(buf, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>")?;
    for line in sample_streamlines(field, region, grid) {
        let d = path_of(&mut line.iter().map(|(_, p)| *p));
        writeln!(
            buf,
            "<path class=\"streamline\" d=\"{d}\" fill=\"none\" stroke=\"#9bb\" stroke-width=\"0.7\"/>"
        )?;
    }
    if let Some(c) = overlay {
        for oval in curvegeom::trace_ovals_unchecked(c, region, DEFAULT_GRID)? {
            let mut pts = oval.vertices.clone();
            if let Some(&first) = pts.first() {
                pts.push(first);
            }
            let d = path_of(&mut pts.into_iter());
            writeln!(
                buf,
                "<path class=\"curve\" d=\"{d}\" fill=\"none\" stroke=\"#282\" stroke-width=\"1.2\" stroke-dasharray=\"6 4\"/>"
            )?;
        }
    }
    for cycle in dynamics::count_cycles(field, region, 64)? {
        let mut pts = cycle.orbit.clone();
        if let Some(&first) = pts.first() {
            pts.push(first);
        }
        let d = path_of(&mut pts.into_iter());
        writeln!(
            buf,
            "<path class=\"cycle\" d=\"{d}\" fill=\"none\" stroke=\"#c22\" stroke-width=\"2\"/>"
        )?;
    }
    writeln!(buf, "</svg>")?;
    Ok(buf)
}
