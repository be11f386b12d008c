//! The Hermitian curve x^(q+1) = y^q + y over GF(q²): its q³ affine
//! rational points, planar intersections with lines and parabolas, a
//! constant-time intersection predictor driven by field invariants, and
//! the translation-type automorphism subgroup that the predictor's case
//! analysis rests on.
//!
//! Intersection counting is deliberately brute force (iterate x over
//! GF(q²)): it is the oracle that everything else is checked against.
//! `classify_parabola` is the closed-form path and must agree with the
//! brute count on every parabola; the test suite enforces this
//! exhaustively for small q.

use crate::field::{Elem, FieldCtx, ONE, ZERO};
use crate::{Error, Result};
use serde::Serialize;

/// An affine rational point of the curve. Construction checks membership.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct CurvePoint {
    pub x: Elem,
    pub y: Elem,
}

impl CurvePoint {
    pub fn new(ctx: &FieldCtx, x: Elem, y: Elem) -> Result<CurvePoint> {
        if !on_curve(ctx, x, y) {
            return Err(Error::InvalidParameter(format!(
                "({}, {}) is not a curve point",
                x.0, y.0
            )));
        }
        Ok(CurvePoint { x, y })
    }
}

/// Membership test N(x) = Tr(y).
#[inline]
pub fn on_curve(ctx: &FieldCtx, x: Elem, y: Elem) -> bool {
    ctx.norm(x) == ctx.trace(y)
}

/// A line in the affine plane over GF(q²).
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub enum Line {
    /// x = t
    Vertical { t: Elem },
    /// y = ax + b (horizontal when a = 0)
    Affine { a: Elem, b: Elem },
}

/// A parabola y = ax² + bx + c with a ≠ 0.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Parabola {
    a: Elem,
    b: Elem,
    c: Elem,
}

impl Parabola {
    pub fn new(a: Elem, b: Elem, c: Elem) -> Result<Parabola> {
        if a == ZERO {
            return Err(Error::NotAParabola);
        }
        Ok(Parabola { a, b, c })
    }

    pub fn a(&self) -> Elem {
        self.a
    }

    pub fn b(&self) -> Elem {
        self.b
    }

    pub fn c(&self) -> Elem {
        self.c
    }

    /// y-value at x.
    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        let ax_b = ctx.add(ctx.mul(self.a, x), self.b);
        ctx.add(ctx.mul(ax_b, x), self.c)
    }
}

/// A curve automorphism x ↦ x + γ, y ↦ y + γ^q·x + δ with (γ, δ) on the
/// curve. These q³ translations preserve planar intersection counts.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Automorphism {
    gamma: Elem,
    delta: Elem,
}

impl Automorphism {
    pub fn new(ctx: &FieldCtx, gamma: Elem, delta: Elem) -> Result<Automorphism> {
        if !on_curve(ctx, gamma, delta) {
            return Err(Error::invalid_automorphism(gamma, delta));
        }
        Ok(Automorphism { gamma, delta })
    }

    pub fn gamma(&self) -> Elem {
        self.gamma
    }

    pub fn delta(&self) -> Elem {
        self.delta
    }
}

/// All q³ affine points in canonical order: ascending x-encoding, then
/// ascending y-encoding. This order defines the parity-check columns.
pub fn enumerate_points(ctx: &FieldCtx) -> Vec<CurvePoint> {
    // Group y by trace once; each x then picks the fiber of N(x).
    let q2 = ctx.q2() as usize;
    let mut fibers: Vec<Vec<Elem>> = vec![Vec::new(); q2];
    for y in ctx.elems() {
        fibers[ctx.trace(y).0 as usize].push(y);
    }
    let mut points = Vec::with_capacity((ctx.q() as usize).pow(3));
    for x in ctx.elems() {
        let t = ctx.norm(x);
        for &y in &fibers[t.0 as usize] {
            points.push(CurvePoint { x, y });
        }
    }
    debug_assert_eq!(points.len(), (ctx.q() as usize).pow(3));
    points
}

/// Points of the curve on a line, ascending by (x, y) encoding.
pub fn line_intersection(ctx: &FieldCtx, line: &Line) -> Vec<CurvePoint> {
    let mut out = Vec::new();
    match *line {
        Line::Vertical { t } => {
            let n = ctx.norm(t);
            for y in ctx.elems() {
                if ctx.trace(y) == n {
                    out.push(CurvePoint { x: t, y });
                }
            }
        }
        Line::Affine { a, b } => {
            for x in ctx.elems() {
                let y = ctx.add(ctx.mul(a, x), b);
                if on_curve(ctx, x, y) {
                    out.push(CurvePoint { x, y });
                }
            }
        }
    }
    out
}

pub fn line_intersection_count(ctx: &FieldCtx, line: &Line) -> usize {
    line_intersection(ctx, line).len()
}

/// Points of the curve on a parabola, ascending by x encoding.
pub fn parabola_intersection(ctx: &FieldCtx, par: &Parabola) -> Vec<CurvePoint> {
    let mut out = Vec::new();
    for x in ctx.elems() {
        let y = par.eval(ctx, x);
        if on_curve(ctx, x, y) {
            out.push(CurvePoint { x, y });
        }
    }
    out
}

/// Intersection count only; the allocation-free loop used by the census.
pub fn parabola_intersection_count(ctx: &FieldCtx, par: &Parabola) -> usize {
    let mut n = 0;
    for x in ctx.elems() {
        if on_curve(ctx, x, par.eval(ctx, x)) {
            n += 1;
        }
    }
    n
}

/// The admissible intersection counts for parabolas at this q:
/// {0, 1, q−1, q, q+1, 2q−1, 2q} for odd q, {1, q−1, q+1, 2q−1} for even q.
pub fn admissible_parabola_counts(ctx: &FieldCtx) -> Vec<usize> {
    let q = ctx.q() as usize;
    let mut v = if ctx.even() {
        vec![1, q - 1, q + 1, 2 * q - 1]
    } else {
        vec![0, 1, q - 1, q, q + 1, 2 * q - 1, 2 * q]
    };
    v.sort_unstable();
    v.dedup();
    v
}

/// The subfield-valued form N(x) − Tr(ax²) = x^(q+1) − a^q·x^(2q) − a·x².
/// Intersecting y = ax² + c with the curve asks this to equal Tr(c).
pub fn intersection_form(ctx: &FieldCtx, a: Elem, x: Elem) -> Elem {
    ctx.sub(ctx.norm(x), ctx.trace(ctx.mul(a, ctx.mul(x, x))))
}

/// Image of the GF(q)-linear map x ↦ 2ax − x^q on GF(q²), sorted by
/// encoding. Odd characteristic only. The image is the whole field when
/// the map is injective and a q-element subspace when 4·N(a) = 1.
pub fn image_of_linear_map(ctx: &FieldCtx, a: Elem) -> Result<Vec<Elem>> {
    if ctx.even() {
        return Err(Error::EvenCharacteristic);
    }
    let two_a = ctx.mul(ctx.int(2), a);
    let mut seen = vec![false; ctx.q2() as usize];
    for x in ctx.elems() {
        let v = ctx.sub(ctx.mul(two_a, x), ctx.frobenius(x));
        seen[v.0 as usize] = true;
    }
    Ok(seen
        .iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(i, _)| Elem(i as u32))
        .collect())
}

/// Predicts the parabola's intersection count from field invariants alone,
/// without touching the point set. Must equal `parabola_intersection_count`
/// on every parabola.
///
/// The parabola is first reduced along the automorphism orbit to one with
/// b = 0, tracking only the trace of the reduced constant term; the count
/// is then read off the invariants. For odd q the discriminant-like value
/// Δ = 1 − 4N(a) splits the cases, with the Δ = 0, irreducible-b family
/// meeting the curve in exactly q points; for even q the split is on the
/// GF(2)-trace of N(a).
pub fn classify_parabola(ctx: &FieldCtx, par: &Parabola) -> Result<usize> {
    let (a, b, c) = (par.a, par.b, par.c);
    if a == ZERO {
        return Err(Error::NotAParabola);
    }
    let q = ctx.q() as usize;

    if ctx.even() {
        // gamma = b^q reduces b to zero; the reduced constant term has
        // trace Tr(c) + Tr(a·gamma²) + N(gamma).
        let gamma = ctx.frobenius(b);
        let tbar = ctx.add(
            ctx.add(ctx.trace(c), ctx.trace(ctx.mul(a, ctx.mul(gamma, gamma)))),
            ctx.norm(gamma),
        );
        let t2 = ctx.trace_to_prime(ctx.norm(a))?;
        return Ok(match (tbar == ZERO, t2) {
            (true, 1) => 2 * q - 1,
            (true, _) => 1,
            (false, 1) => q - 1,
            (false, _) => q + 1,
        });
    }

    let two = ctx.int(2);
    let four = ctx.int(4);
    let delta = ctx.sub(ONE, ctx.mul(four, ctx.norm(a)));

    if delta != ZERO {
        // The reduction map gamma ↦ 2a·gamma − gamma^q is bijective here;
        // its unique preimage of b is (2a^q·b + b^q)/(4N(a) − 1).
        let num = ctx.add(ctx.mul(two, ctx.mul(ctx.frobenius(a), b)), ctx.frobenius(b));
        let gamma = ctx.div(num, ctx.neg(delta))?;
        debug_assert_eq!(
            ctx.sub(ctx.mul(ctx.mul(two, a), gamma), ctx.frobenius(gamma)),
            b
        );
        let tbar = ctx.add(
            ctx.sub(ctx.trace(c), ctx.trace(ctx.mul(a, ctx.mul(gamma, gamma)))),
            ctx.norm(gamma),
        );
        let square = ctx.is_subfield_square(delta)?;
        return Ok(match (tbar == ZERO, square) {
            (true, true) => 1,
            (true, false) => 2 * q - 1,
            (false, true) => q + 1,
            (false, false) => q - 1,
        });
    }

    // Δ = 0, i.e. N(2a) = 1. When 2a·b^q + b ≠ 0 the parabola never reaches
    // the b = 0 form; that whole family meets the curve in q points.
    let obstruction = ctx.add(ctx.mul(two, ctx.mul(a, ctx.frobenius(b))), b);
    if obstruction != ZERO {
        return Ok(q);
    }
    // b lies in the image of the reduction map; the reduced trace is
    // Tr(c) − a^q·b².
    let tbar = ctx.sub(ctx.trace(c), ctx.mul(ctx.frobenius(a), ctx.mul(b, b)));
    if tbar == ZERO {
        return Ok(q);
    }
    // −4a·Tr(c̄) is a square; the count is 2q or 0 according to whether a
    // root of it lies in the (q-element) image of x ↦ 2ax − x^q.
    let w = ctx.neg(ctx.mul(four, ctx.mul(a, tbar)));
    let s = ctx.sqrt(w)?;
    let image = image_of_linear_map(ctx, a)?;
    Ok(if image.binary_search(&s).is_ok() {
        2 * q
    } else {
        0
    })
}

/// Pushes a parabola through an automorphism:
/// (a, b, c) ↦ (a, 2aγ − γ^q + b, aγ² + bγ − δ + c).
/// The leading coefficient never changes, so the result is a parabola.
pub fn apply_automorphism(ctx: &FieldCtx, aut: &Automorphism, par: &Parabola) -> Parabola {
    let (gamma, delta) = (aut.gamma, aut.delta);
    let two_a_gamma = ctx.mul(ctx.int(2), ctx.mul(par.a, gamma));
    let b = ctx.add(ctx.sub(two_a_gamma, ctx.frobenius(gamma)), par.b);
    let c = ctx.add(
        ctx.sub(
            ctx.add(ctx.mul(par.a, ctx.mul(gamma, gamma)), ctx.mul(par.b, gamma)),
            delta,
        ),
        par.c,
    );
    Parabola { a: par.a, b, c }
}
