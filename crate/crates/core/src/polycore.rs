//! Exact sparse bivariate polynomials over the rationals.
//!
//! `Poly` is a map from exponent pairs `(i, j)` (powers of x and y) to
//! nonzero rational coefficients. All arithmetic is exact; floating point
//! enters only through the evaluation helpers used by the geometry and
//! dynamics layers.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::Result;

/// Exact rational coefficient. `BigRational` keeps values in lowest terms
/// with a positive denominator, which is exactly the invariant we need.
pub type Rat = BigRational;

/// Rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(num: i64) -> Rat {
    Rat::from(BigInt::from(num))
}

/// Parse "num" or "num/den" into a rational.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Usage(format!("invalid rational {text:?}")))?;
    let den: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Usage(format!("invalid rational {text:?}")))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::ZeroDenominator { offset: 0 });
    }
    Ok(Rat::new(num, den))
}

/// Render a rational as "num" or "num/den".
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exponent pair: power of x, power of y.
pub type Exp = (u32, u32);

/// Graded lexicographic comparison with x > y.
fn grlex(a: Exp, b: Exp) -> Ordering {
    let (da, db) = (a.0 + a.1, b.0 + b.1);
    da.cmp(&db).then(a.0.cmp(&b.0))
}

/// Sparse bivariate polynomial with rational coefficients.
///
/// Invariant: no stored coefficient is zero. Two polynomials are equal iff
/// their term maps are identical.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Exp, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Poly::zero();
        p.add_term((0, 0), c);
        p
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    /// The monomial x^i y^j with coefficient c.
    pub fn monomial(i: u32, j: u32, c: Rat) -> Self {
        let mut p = Poly::zero();
        p.add_term((i, j), c);
        p
    }

    pub fn x() -> Self {
        Poly::monomial(1, 0, Rat::one())
    }

    pub fn y() -> Self {
        Poly::monomial(0, 1, Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.degree() <= 0
    }

    /// Total degree; the zero polynomial has degree -1.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|&(i, j)| (i + j) as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exp, &Rat)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, e: Exp) -> Rat {
        self.terms.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    fn add_term(&mut self, e: Exp, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Build from (i, j, coefficient) records, collecting like terms.
    pub fn from_records<I: IntoIterator<Item = (u32, u32, Rat)>>(records: I) -> Self {
        let mut p = Poly::zero();
        for (i, j, c) in records {
            p.add_term((i, j), c);
        }
        p
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly::zero().sub(self)
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    /// Exact partial derivative.
    pub fn differentiate(&self, var: Var) -> Poly {
        let mut out = Poly::zero();
        for (&(i, j), c) in &self.terms {
            match var {
                Var::X if i > 0 => out.add_term((i - 1, j), c * Rat::from(BigInt::from(i))),
                Var::Y if j > 0 => out.add_term((i, j - 1), c * Rat::from(BigInt::from(j))),
                _ => {}
            }
        }
        out
    }

    /// Floating-point evaluation (via the dense Horner form).
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        FloatPoly::from_poly(self).eval(x, y)
    }

    /// Exact rational evaluation.
    pub fn evaluate_exact(&self, x: &Rat, y: &Rat) -> Rat {
        let max_i = self.terms.keys().map(|e| e.0).max().unwrap_or(0) as usize;
        let max_j = self.terms.keys().map(|e| e.1).max().unwrap_or(0) as usize;
        let xpow = powers(x, max_i);
        let ypow = powers(y, max_j);
        let mut acc = Rat::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * &xpow[i as usize] * &ypow[j as usize];
        }
        acc
    }

    /// Leading term under grlex with x > y.
    fn leading_term(&self) -> Option<(Exp, &Rat)> {
        self.terms
            .iter()
            .max_by(|a, b| grlex(*a.0, *b.0))
            .map(|(&e, c)| (e, c))
    }

    /// Single-divisor division: returns (quotient, remainder) with
    /// num = quotient*den + remainder and no remainder term divisible by
    /// the grlex leading term of den.
    pub fn divide_with_remainder(&self, den: &Poly) -> Result<(Poly, Poly)> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (lt_e, lt_c) = den.leading_term().expect("nonzero divisor");
        let mut p = self.clone();
        let mut quotient = Poly::zero();
        let mut remainder = Poly::zero();
        while let Some((e, c)) = p.leading_term().map(|(e, c)| (e, c.clone())) {
            if e.0 >= lt_e.0 && e.1 >= lt_e.1 {
                let factor = Poly::monomial(e.0 - lt_e.0, e.1 - lt_e.1, &c / lt_c);
                quotient = quotient.add(&factor);
                p = p.sub(&factor.mul(den));
            } else {
                remainder.add_term(e, c);
                p.terms.remove(&e);
            }
        }
        Ok((quotient, remainder))
    }

    /// True iff `den` divides self exactly.
    pub fn divisible_by(&self, den: &Poly) -> Result<bool> {
        Ok(self.divide_with_remainder(den)?.1.is_zero())
    }

    /// Substitute x -> (x - cx)/s, y -> (y - cy)/s, expanded exactly.
    pub fn affine_substitute(&self, center: (&Rat, &Rat), scale: &Rat) -> Result<Poly> {
        if !scale.is_positive() {
            return Err(Error::NonPositiveScale);
        }
        let inv = Rat::one() / scale;
        // x' = (x - cx)/s as a degree-1 polynomial, same for y'.
        let xs = Poly::x().scale(&inv).add(&Poly::constant(-center.0 * &inv));
        let ys = Poly::y().scale(&inv).add(&Poly::constant(-center.1 * &inv));
        let max_i = self.terms.keys().map(|e| e.0).max().unwrap_or(0) as usize;
        let max_j = self.terms.keys().map(|e| e.1).max().unwrap_or(0) as usize;
        let xpow = poly_powers(&xs, max_i);
        let ypow = poly_powers(&ys, max_j);
        let mut out = Poly::zero();
        for (&(i, j), c) in &self.terms {
            out = out.add(&xpow[i as usize].mul(&ypow[j as usize]).scale(c));
        }
        Ok(out)
    }

    /// Serialization records [i, j, "num/den"], sorted grlex descending.
    pub fn to_records(&self) -> Vec<(u32, u32, String)> {
        let mut exps: Vec<Exp> = self.terms.keys().copied().collect();
        exps.sort_by(|a, b| grlex(*b, *a));
        exps.into_iter()
            .map(|e| (e.0, e.1, format_rat(&self.terms[&e])))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

fn powers(base: &Rat, up_to: usize) -> Vec<Rat> {
    let mut v = Vec::with_capacity(up_to + 1);
    v.push(Rat::one());
    for k in 1..=up_to {
        let next = &v[k - 1] * base;
        v.push(next);
    }
    v
}

fn poly_powers(base: &Poly, up_to: usize) -> Vec<Poly> {
    let mut v = Vec::with_capacity(up_to + 1);
    v.push(Poly::one());
    for k in 1..=up_to {
        let next = v[k - 1].mul(base);
        v.push(next);
    }
    v
}

/// Degree-one polynomial a*x + b*y + c0 with (a, b) != (0, 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearPoly {
    pub a: Rat,
    pub b: Rat,
    pub c0: Rat,
}

impl LinearPoly {
    pub fn new(a: Rat, b: Rat, c0: Rat) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::Usage(
                "a degree-one line needs a nonzero x or y coefficient".into(),
            ));
        }
        Ok(LinearPoly { a, b, c0 })
    }

    /// Build from a degree-1 polynomial.
    pub fn from_poly(p: &Poly) -> Result<Self> {
        if p.degree() > 1 {
            return Err(Error::Usage(format!(
                "line must have degree one, got degree {}",
                p.degree()
            )));
        }
        LinearPoly::new(p.coeff((1, 0)), p.coeff((0, 1)), p.coeff((0, 0)))
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_records([
            (1, 0, self.a.clone()),
            (0, 1, self.b.clone()),
            (0, 0, self.c0.clone()),
        ])
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        rat_to_f64(&self.a) * x + rat_to_f64(&self.b) * y + rat_to_f64(&self.c0)
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

// ---------------------------------------------------------------------------
// Parsing and formatting
// ---------------------------------------------------------------------------

/// Parse the polynomial grammar:
///
/// ```text
/// poly   := ws term (ws ('+'|'-') ws term)* ws
/// term   := coef? varpart?          (not both absent)
/// coef   := int ('/' posint)?
/// varpart:= ('x' ('^' posint)?)? ws ('y' ('^' posint)?)?
/// ```
///
/// A leading '-' with no digits is accepted as coefficient -1.
pub fn parse_poly(text: &str) -> Result<Poly> {
    Parser::new(text).parse()
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn err(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn parse(&mut self) -> Result<Poly> {
        let mut out = Poly::zero();
        self.skip_ws();
        let mut sign = Rat::one();
        if self.peek() == Some(b'-') && !self.digits_follow(1) {
            // unary minus on the first term
            self.pos += 1;
            sign = -sign;
            self.skip_ws();
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
            self.skip_ws();
        }
        loop {
            let term = self.parse_term()?;
            out = out.add(&term.scale(&sign));
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = Rat::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -Rat::one();
                }
                Some(_) => return Err(self.err("expected '+' or '-'")),
            }
            self.skip_ws();
        }
        Ok(out)
    }

    fn digits_follow(&self, ahead: usize) -> bool {
        matches!(self.bytes.get(self.pos + ahead), Some(b) if b.is_ascii_digit())
    }

    fn parse_term(&mut self) -> Result<Poly> {
        let mut coef: Option<Rat> = None;
        if matches!(self.peek(), Some(b) if b.is_ascii_digit() || b == b'-') {
            coef = Some(self.parse_coef()?);
            self.skip_ws();
        }
        let mut i = 0u32;
        let mut j = 0u32;
        let mut saw_var = false;
        if self.peek() == Some(b'x') {
            self.pos += 1;
            i = self.parse_opt_exponent()?;
            saw_var = true;
            self.skip_ws();
        }
        if self.peek() == Some(b'y') {
            self.pos += 1;
            j = self.parse_opt_exponent()?;
            saw_var = true;
        }
        if coef.is_none() && !saw_var {
            return Err(self.err("expected a term"));
        }
        Ok(Poly::monomial(i, j, coef.unwrap_or_else(Rat::one)))
    }

    fn parse_opt_exponent(&mut self) -> Result<u32> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.parse_uint()?;
            if n == 0 {
                return Err(self.err("exponent must be positive"));
            }
            Ok(n)
        } else {
            Ok(1)
        }
    }

    fn parse_uint(&mut self) -> Result<u32> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer too large"))
    }

    fn parse_coef(&mut self) -> Result<Rat> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        let num: BigInt = std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("expected an integer"))?;
        let mut den = BigInt::one();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let dstart = self.pos;
            while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == dstart {
                return Err(self.err("expected a denominator"));
            }
            den = std::str::from_utf8(&self.bytes[dstart..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("expected a denominator"))?;
            if den.is_zero() {
                return Err(Error::ZeroDenominator { offset: dstart });
            }
        }
        Ok(Rat::new(num, den))
    }
}

/// Canonical text form: terms in grlex-descending order, `parse_poly`
/// round-trips it exactly.
pub fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut exps: Vec<Exp> = p.terms.keys().copied().collect();
    exps.sort_by(|a, b| grlex(*b, *a));
    let mut out = String::new();
    for (k, e) in exps.iter().enumerate() {
        let c = &p.terms[e];
        let neg = c.is_negative();
        let mag = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let has_vars = e.0 > 0 || e.1 > 0;
        if !has_vars || !mag.is_one() {
            out.push_str(&format_rat(&mag));
        }
        if e.0 > 0 {
            out.push('x');
            if e.0 > 1 {
                out.push_str(&format!("^{}", e.0));
            }
            if e.1 > 0 {
                out.push(' ');
            }
        }
        if e.1 > 0 {
            out.push('y');
            if e.1 > 1 {
                out.push_str(&format!("^{}", e.1));
            }
        }
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self))
    }
}

impl fmt::Display for LinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(&self.to_poly()))
    }
}

// ---------------------------------------------------------------------------
// Bivariate gcd (subresultant / primitive PRS) and non-degeneracy
// ---------------------------------------------------------------------------

/// Degree cap for gcd computations.
pub const GCD_DEGREE_CAP: i64 = 10;

/// True iff gcd(c, c_x, c_y) is constant. A true result certifies that
/// C = 0 has at most finitely many singular points.
pub fn common_factor_free(c: &Poly, cx: &Poly, cy: &Poly) -> Result<bool> {
    if c.is_constant() {
        return Err(Error::Usage("curve must be nonconstant".into()));
    }
    for p in [c, cx, cy] {
        if p.degree() > GCD_DEGREE_CAP {
            return Err(Error::UnsupportedDegree {
                degree: p.degree(),
                cap: GCD_DEGREE_CAP,
            });
        }
    }
    let g = gcd_bivariate(&gcd_bivariate(c, cx), cy);
    Ok(g.is_constant())
}

/// Non-degeneracy check straight from the curve.
pub fn curve_nondegenerate(c: &Poly) -> Result<bool> {
    common_factor_free(c, &c.differentiate(Var::X), &c.differentiate(Var::Y))
}

/// gcd of two bivariate polynomials over Q, up to a constant factor.
/// Primitive PRS in (Q[y])[x] with univariate Euclid in Q[y] for contents.
pub fn gcd_bivariate(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let ra = RecPoly::from_poly(a);
    let rb = RecPoly::from_poly(b);
    RecPoly::gcd(ra, rb).to_poly()
}

/// Univariate polynomial in y over Q, dense coefficient vector.
#[derive(Debug, Clone, PartialEq)]
struct UniPoly {
    // coeffs[k] multiplies y^k; no trailing zeros
    coeffs: Vec<Rat>,
}

impl UniPoly {
    fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn one() -> Self {
        UniPoly {
            coeffs: vec![Rat::one()],
        }
    }

    fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    fn trim(mut self) -> Self {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    fn lead(&self) -> &Rat {
        self.coeffs.last().expect("nonzero")
    }

    fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly { coeffs: out }.trim()
    }

    fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[i] += a;
        }
        for (i, b) in other.coeffs.iter().enumerate() {
            out[i] -= b;
        }
        UniPoly { coeffs: out }.trim()
    }

    fn scale(&self, c: &Rat) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Remainder of Euclidean division.
    fn rem(&self, den: &UniPoly) -> UniPoly {
        let mut r = self.clone();
        let dd = den.deg();
        while !r.is_zero() && r.deg() >= dd {
            let shift = (r.deg() - dd) as usize;
            let factor = r.lead() / den.lead();
            let mut sub = vec![Rat::zero(); shift];
            sub.extend(den.coeffs.iter().map(|c| c * &factor));
            r = r.sub(&UniPoly { coeffs: sub });
        }
        r
    }

    /// Exact quotient (panics if not exact; used only after gcd).
    fn div_exact(&self, den: &UniPoly) -> UniPoly {
        let mut r = self.clone();
        let dd = den.deg();
        let mut q = vec![Rat::zero(); (self.deg() - dd + 1).max(0) as usize];
        while !r.is_zero() && r.deg() >= dd {
            let shift = (r.deg() - dd) as usize;
            let factor = r.lead() / den.lead();
            q[shift] = factor.clone();
            let mut sub = vec![Rat::zero(); shift];
            sub.extend(den.coeffs.iter().map(|c| c * &factor));
            r = r.sub(&UniPoly { coeffs: sub });
        }
        debug_assert!(r.is_zero(), "inexact univariate division");
        UniPoly { coeffs: q }.trim()
    }

    fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let inv = Rat::one() / self.lead();
        self.scale(&inv)
    }

    fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// Recursive view: polynomial in x whose coefficients live in Q[y].
#[derive(Debug, Clone)]
struct RecPoly {
    // coeffs[k] multiplies x^k; no trailing zero polys
    coeffs: Vec<UniPoly>,
}

impl RecPoly {
    fn from_poly(p: &Poly) -> Self {
        let max_i = p.terms.keys().map(|e| e.0).max().unwrap_or(0) as usize;
        let mut coeffs = vec![UniPoly::zero(); max_i + 1];
        for (&(i, j), c) in &p.terms {
            let uni = &mut coeffs[i as usize];
            if uni.coeffs.len() <= j as usize {
                uni.coeffs.resize(j as usize + 1, Rat::zero());
            }
            uni.coeffs[j as usize] = c.clone();
        }
        let coeffs = coeffs.into_iter().map(UniPoly::trim).collect();
        RecPoly { coeffs }.trim()
    }

    fn to_poly(&self) -> Poly {
        let mut out = Poly::zero();
        for (i, uni) in self.coeffs.iter().enumerate() {
            for (j, c) in uni.coeffs.iter().enumerate() {
                out.add_term((i as u32, j as u32), c.clone());
            }
        }
        out
    }

    fn trim(mut self) -> Self {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn deg_x(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    fn lead(&self) -> &UniPoly {
        self.coeffs.last().expect("nonzero")
    }

    /// Content: gcd in Q[y] of the x-coefficients.
    fn content(&self) -> UniPoly {
        let mut g = UniPoly::zero();
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            g = if g.is_zero() {
                c.monic()
            } else {
                UniPoly::gcd(&g, c)
            };
            if g.deg() == 0 {
                return UniPoly::one();
            }
        }
        if g.is_zero() {
            UniPoly::one()
        } else {
            g
        }
    }

    fn primitive(&self) -> RecPoly {
        let cont = self.content();
        if cont.deg() == 0 {
            return self.clone();
        }
        RecPoly {
            coeffs: self.coeffs.iter().map(|c| c.div_exact(&cont)).collect(),
        }
        .trim()
    }

    fn scale_uni(&self, u: &UniPoly) -> RecPoly {
        RecPoly {
            coeffs: self.coeffs.iter().map(|c| c.mul(u)).collect(),
        }
        .trim()
    }

    fn sub(&self, other: &RecPoly) -> RecPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![UniPoly::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] = out[i].sub(c);
        }
        RecPoly { coeffs: out }.trim()
    }

    fn shift_mul(&self, shift: usize, u: &UniPoly) -> RecPoly {
        let mut coeffs = vec![UniPoly::zero(); shift];
        coeffs.extend(self.coeffs.iter().map(|c| c.mul(u)));
        RecPoly { coeffs }.trim()
    }

    /// Pseudo-remainder with respect to x.
    fn pseudo_rem(&self, den: &RecPoly) -> RecPoly {
        let dd = den.deg_x();
        let mut r = self.clone();
        while !r.is_zero() && r.deg_x() >= dd {
            let shift = (r.deg_x() - dd) as usize;
            let lead = r.lead().clone();
            // den.lead() * r  -  lead * x^shift * den
            r = r.scale_uni(den.lead()).sub(&den.shift_mul(shift, &lead));
        }
        r
    }

    fn gcd(a: RecPoly, b: RecPoly) -> RecPoly {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let cont_gcd = UniPoly::gcd(&a.content(), &b.content());
        let (mut a, mut b) = (a.primitive(), b.primitive());
        if a.deg_x() < b.deg_x() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() && b.deg_x() > 0 {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        let pp_gcd = if b.is_zero() {
            a
        } else {
            // a nonzero remainder of x-degree 0 that is primitive in y
            // means the primitive parts are coprime
            RecPoly {
                coeffs: vec![UniPoly::one()],
            }
        };
        pp_gcd.scale_uni(&cont_gcd)
    }
}

// ---------------------------------------------------------------------------
// Dense floating-point evaluation
// ---------------------------------------------------------------------------

/// Dense f64 coefficient table for fast repeated evaluation.
/// `rows[i][j]` multiplies x^i y^j; evaluation is nested Horner.
#[derive(Debug, Clone)]
pub struct FloatPoly {
    rows: Vec<Vec<f64>>,
}

impl FloatPoly {
    pub fn from_poly(p: &Poly) -> Self {
        let max_i = p.terms.keys().map(|e| e.0).max().unwrap_or(0) as usize;
        let mut rows = vec![Vec::new(); max_i + 1];
        for (&(i, j), c) in &p.terms {
            let row = &mut rows[i as usize];
            if row.len() <= j as usize {
                row.resize(j as usize + 1, 0.0);
            }
            row[j as usize] = rat_to_f64(c);
        }
        FloatPoly { rows }
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for row in self.rows.iter().rev() {
            let mut ry = 0.0;
            for c in row.iter().rev() {
                ry = ry * y + c;
            }
            acc = acc * x + ry;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn parse_circle() {
        let c = p("x^2+y^2-1");
        assert_eq!(c.coeff((2, 0)), rat_int(1));
        assert_eq!(c.coeff((0, 2)), rat_int(1));
        assert_eq!(c.coeff((0, 0)), rat_int(-1));
        assert_eq!(c.terms.len(), 3);
    }

    #[test]
    fn parse_rational_coeff_and_collection() {
        let q = p("1/2 x y - y");
        assert_eq!(q.coeff((1, 1)), rat(1, 2));
        assert_eq!(q.coeff((0, 1)), rat_int(-1));
        let r = p("x^2 + 2x^2");
        assert_eq!(r.coeff((2, 0)), rat_int(3));
        assert_eq!(r.terms.len(), 1);
    }

    #[test]
    fn parse_unary_minus_and_errors() {
        assert_eq!(p("-x"), p("0-x"));
        assert!(matches!(
            parse_poly("x^2 + @"),
            Err(Error::Syntax { offset: 6, .. })
        ));
        assert!(matches!(
            parse_poly("1/0 x"),
            Err(Error::ZeroDenominator { .. })
        ));
    }

    #[test]
    fn arith_examples() {
        assert_eq!(p("x+y").mul(&p("x-y")), p("x^2-y^2"));
        assert!(p("x^2").add(&p("-x^2")).is_zero());
        assert_eq!(p("x^2+y^2-1").scale(&rat_int(2)), p("2x^2+2y^2-2"));
        assert_eq!(p("x+y").mul(&p("x-y")).degree(), 2);
    }

    #[test]
    fn differentiate_examples() {
        assert_eq!(p("x^2 y + 3y").differentiate(Var::X), p("2x y"));
        assert_eq!(p("x^2+y^2-1").differentiate(Var::Y), p("2y"));
        assert!(p("5").differentiate(Var::X).is_zero());
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(p("x^2+y^2-1").evaluate(1.0, 1.0), 1.0);
        assert_eq!(p("x y").evaluate(0.0, 7.0), 0.0);
        let exact = p("x^2+y^2-1").evaluate_exact(&rat(3, 5), &rat(4, 5));
        assert!(exact.is_zero());
    }

    #[test]
    fn division_examples() {
        let circle = p("x^2+y^2-1");
        let (q, r) = p("2y").mul(&circle).divide_with_remainder(&circle).unwrap();
        assert_eq!(q, p("2y"));
        assert!(r.is_zero());

        let (_, r) = circle.divide_with_remainder(&p("x y")).unwrap();
        assert!(!r.is_zero());

        let (q, r) = p("x^2-y^2").divide_with_remainder(&p("x+y")).unwrap();
        assert_eq!(q, p("x-y"));
        assert!(r.is_zero());

        assert!(matches!(
            p("x").divide_with_remainder(&Poly::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn affine_examples() {
        let circle = p("x^2+y^2-1");
        let t = circle
            .affine_substitute((&rat_int(3), &rat_int(3)), &rat_int(1))
            .unwrap();
        assert_eq!(t, p("x^2 - 6x + y^2 - 6y + 17"));
        let s = p("x")
            .affine_substitute((&rat_int(0), &rat_int(0)), &rat_int(2))
            .unwrap();
        assert_eq!(s, p("1/2 x"));
        let h = circle
            .affine_substitute((&rat_int(0), &rat_int(0)), &rat(1, 2))
            .unwrap();
        assert_eq!(h, p("4x^2+4y^2-1"));
        assert!(matches!(
            p("x").affine_substitute((&rat_int(0), &rat_int(0)), &rat_int(0)),
            Err(Error::NonPositiveScale)
        ));
    }

    #[test]
    fn common_factor_free_examples() {
        let circle = p("x^2+y^2-1");
        assert!(curve_nondegenerate(&circle).unwrap());
        let sq = p("x y").mul(&p("x y"));
        assert!(!curve_nondegenerate(&sq).unwrap());
        assert!(curve_nondegenerate(&p("x y")).unwrap());
        let repeated = p("x^2+y^2-1").mul(&p("x^2+y^2-1"));
        assert!(!curve_nondegenerate(&repeated).unwrap());
    }

    #[test]
    fn gcd_degree_cap() {
        let mut big = Poly::one();
        for _ in 0..11 {
            big = big.mul(&p("x"));
        }
        big = big.add(&p("y"));
        assert!(matches!(
            curve_nondegenerate(&big),
            Err(Error::UnsupportedDegree { .. })
        ));
    }

    #[test]
    fn format_round_trip() {
        for s in [
            "x^2+y^2-1",
            "1/2 x y - y",
            "-x^3 + 2x y^2 - 7/3",
            "0",
            "x y",
            "5",
        ] {
            let q = p(s);
            assert_eq!(parse_poly(&format_poly(&q)).unwrap(), q);
        }
    }

    #[test]
    fn records_round_trip() {
        let q = p("x^2 - 1/2 x y + 3");
        let recs = q.to_records();
        let back = Poly::from_records(
            recs.iter()
                .map(|(i, j, c)| (*i, *j, parse_rat(c).unwrap())),
        );
        assert_eq!(back, q);
    }

    #[test]
    fn zero_poly_degree() {
        assert_eq!(Poly::zero().degree(), -1);
        assert_eq!(p("3").degree(), 0);
    }

    #[test]
    fn float_poly_matches_exact() {
        let q = p("x^3 - 2x y + 1/4 y^2 - 7");
        let f = FloatPoly::from_poly(&q);
        for (x, y) in [(0.3, -1.7), (2.0, 5.0), (-0.1, 0.9)] {
            let exact = q.evaluate_exact(
                &Rat::from_float(x).unwrap(),
                &Rat::from_float(y).unwrap(),
            );
            assert!((f.eval(x, y) - rat_to_f64(&exact)).abs() < 1e-12);
        }
    }
}
