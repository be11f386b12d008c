//! Hermitian code construction on the curve's q³ points.
//!
//! A code is the dual of the evaluation code spanned by the monomials
//! x^r y^s with qr + (q+1)s ≤ m; the evaluation vectors are the rows of
//! its parity-check matrix. First-phase codes (designed distance d ≤ q)
//! carry a second, structural description: the corner code of distance d
//! takes every monomial of total degree ≤ d−2, and the j-th edge code
//! appends the j monomials x^(d-1), x^(d-2)y, …, x^(d-j)y^(j-1).
//!
//! Monomials are kept in a canonical order — the degree triangle row by
//! row in s, then the appended edge monomials — so matrices serialize
//! reproducibly.

use crate::curve::enumerate_points;
use crate::field::FieldCtx;
use crate::linalg::Matrix;
use crate::{Error, Result};
use serde::Serialize;

/// A code identified either by its evaluation bound m or by its
/// first-phase (d, j) coordinates; j = 0 names the corner code.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeSpec {
    MForm { m: u32 },
    CornerEdge { d: u32, j: u32 },
}

impl CodeSpec {
    pub fn corner(d: u32) -> CodeSpec {
        CodeSpec::CornerEdge { d, j: 0 }
    }

    pub fn edge(d: u32, j: u32) -> CodeSpec {
        CodeSpec::CornerEdge { d, j }
    }

    /// True when this spec names an edge code (j ≥ 1).
    pub fn is_edge(&self) -> bool {
        matches!(self, CodeSpec::CornerEdge { j, .. } if *j > 0)
    }
}

/// Ordered exponent pairs (r, s) of the evaluation monomials x^r y^s.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MonomialBasis {
    pub exponents: Vec<(u32, u32)>,
}

impl MonomialBasis {
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }
}

/// Parity-check matrix: one row per basis monomial, one column per curve
/// point in canonical order.
#[derive(Clone, Debug)]
pub struct ParityCheck {
    pub basis: MonomialBasis,
    pub matrix: Matrix,
}

/// Parameters read off the four-phase table. `k` is the exact dimension
/// n − |basis|; in phase 4 the table only bounds the dimension from below
/// and that bound is carried separately.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PhaseParams {
    pub phase: u8,
    pub m: u32,
    pub d: u32,
    pub k: u32,
    pub k_lower_bound: Option<i64>,
}

fn max_m(ctx: &FieldCtx) -> u32 {
    let q = ctx.q();
    q * q * q + q * q - q - 2
}

/// Cost qr + (q+1)s of a monomial; bases are the downsets of this weight.
fn cost(ctx: &FieldCtx, r: u32, s: u32) -> u32 {
    ctx.q() * r + (ctx.q() + 1) * s
}

fn validate_corner_edge(ctx: &FieldCtx, d: u32, j: u32) -> Result<()> {
    if d < 2 || d > ctx.q() {
        return Err(Error::SpecOutOfRange(format!(
            "d={d} outside 2 ≤ d ≤ q = {}",
            ctx.q()
        )));
    }
    if j > d - 1 {
        return Err(Error::SpecOutOfRange(format!("j={j} outside 0 ≤ j ≤ d−1")));
    }
    Ok(())
}

fn corner_edge_exponents(d: u32, j: u32) -> Vec<(u32, u32)> {
    let mut exps = Vec::new();
    for s in 0..=d.saturating_sub(2) {
        for r in 0..=d - 2 - s {
            exps.push((r, s));
        }
    }
    for i in 1..=j {
        exps.push((d - i, i - 1));
    }
    exps
}

/// The unordered monomial set {(r, s) : qr + (q+1)s ≤ m}.
fn m_form_set(ctx: &FieldCtx, m: u32) -> Vec<(u32, u32)> {
    let q = ctx.q();
    let mut set = Vec::new();
    for s in 0..q {
        for r in 0..q * q {
            if cost(ctx, r, s) <= m {
                set.push((r, s));
            }
        }
    }
    set
}

/// Recognizes a monomial set as a corner/edge basis, returning (d, j).
/// Every m ≤ q²−2 produces such a set; anything past that is later-phase.
pub fn first_phase_spec_of_m(ctx: &FieldCtx, m: u32) -> Option<(u32, u32)> {
    let mut set = m_form_set(ctx, m);
    set.sort_unstable();
    for d in 2..=ctx.q() {
        for j in 0..=d - 1 {
            if (d * (d - 1) / 2 + j) as usize != set.len() {
                continue;
            }
            let mut candidate = corner_edge_exponents(d, j);
            candidate.sort_unstable();
            if candidate == set {
                return Some((d, j));
            }
        }
    }
    None
}

/// The basis in canonical order. Corner/edge specs emit the triangle rows
/// then the edge tail; an m-form spec that is first-phase emits the same
/// order, so the two routes agree element for element.
pub fn build_basis(ctx: &FieldCtx, spec: &CodeSpec) -> Result<MonomialBasis> {
    match *spec {
        CodeSpec::CornerEdge { d, j } => {
            validate_corner_edge(ctx, d, j)?;
            Ok(MonomialBasis {
                exponents: corner_edge_exponents(d, j),
            })
        }
        CodeSpec::MForm { m } => {
            if m > max_m(ctx) {
                return Err(Error::SpecOutOfRange(format!(
                    "m={m} outside 0 ≤ m ≤ {}",
                    max_m(ctx)
                )));
            }
            if let Some((d, j)) = first_phase_spec_of_m(ctx, m) {
                return Ok(MonomialBasis {
                    exponents: corner_edge_exponents(d, j),
                });
            }
            let mut set = m_form_set(ctx, m);
            set.sort_unstable_by_key(|&(r, s)| (s, r));
            Ok(MonomialBasis { exponents: set })
        }
    }
}

/// The smallest m whose basis equals the corner/edge basis of (d, j):
/// the cost of the most expensive basis monomial. Verified by set
/// equality before returning.
pub fn corner_edge_m(ctx: &FieldCtx, d: u32, j: u32) -> Result<u32> {
    validate_corner_edge(ctx, d, j)?;
    let q = ctx.q();
    let m = if j == 0 {
        (q + 1) * (d - 2)
    } else {
        q * (d - 1) + (j - 1)
    };
    let via_m = build_basis(ctx, &CodeSpec::MForm { m })?;
    let direct = build_basis(ctx, &CodeSpec::CornerEdge { d, j })?;
    if via_m != direct {
        return Err(Error::NoMatchingM { d, j });
    }
    Ok(m)
}

/// Evaluates every basis monomial at every curve point, columns in
/// canonical point order. For any m the evaluation vectors of distinct
/// monomials are independent, so the rank always equals the row count;
/// the tests confirm this numerically for the first phase.
pub fn build_parity_check(ctx: &FieldCtx, spec: &CodeSpec) -> Result<ParityCheck> {
    let basis = build_basis(ctx, spec)?;
    let points = enumerate_points(ctx);
    let mut matrix = Matrix::zeros(basis.len(), points.len());
    for (row, &(r, s)) in basis.exponents.iter().enumerate() {
        for (col, pt) in points.iter().enumerate() {
            let v = ctx.mul(ctx.pow(pt.x, r as u64), ctx.pow(pt.y, s as u64));
            matrix.set(row, col, v);
        }
    }
    Ok(ParityCheck { basis, matrix })
}

/// Code length, dimension and designed distance for a spec.
pub fn code_params(ctx: &FieldCtx, spec: &CodeSpec) -> Result<PhaseParams> {
    match *spec {
        CodeSpec::MForm { m } => phase_params(ctx, m),
        CodeSpec::CornerEdge { d, j } => {
            let m = corner_edge_m(ctx, d, j)?;
            let params = phase_params(ctx, m)?;
            debug_assert_eq!(params.d, d);
            Ok(params)
        }
    }
}

/// Reads distance and dimension off the four-phase table.
///
/// Phase 1 parameters come from the decomposition m = aq + b with
/// 0 ≤ b ≤ a ≤ q−1 of the largest basis-monomial cost (so values of m
/// that add no monomial report the parameters of the code they equal).
/// Phase 4 decomposes m − q³ = aq + b with b ≤ q−2; the handful of m in
/// range whose remainder is q−1 fall outside the table's parameterization
/// and are rejected.
pub fn phase_params(ctx: &FieldCtx, m: u32) -> Result<PhaseParams> {
    let q = ctx.q();
    let g = q * (q - 1) / 2;
    let n = q * q * q;
    if m > max_m(ctx) {
        return Err(Error::MOutOfRange(format!(
            "m={m} outside 0 ≤ m ≤ {}",
            max_m(ctx)
        )));
    }
    let basis_len = m_form_set(ctx, m).len() as u32;
    let k = n - basis_len;

    if m + 2 <= q * q {
        // phase 1: reduce to the largest cost actually attained
        let canonical = m_form_set(ctx, m)
            .into_iter()
            .map(|(r, s)| cost(ctx, r, s))
            .max()
            .expect("basis contains the constant monomial");
        let (a, b) = (canonical / q, canonical % q);
        assert!(b <= a && a <= q - 1, "phase-1 decomposition is canonical");
        let d = if a > b { a + 1 } else { a + 2 };
        debug_assert_eq!(k, n - a * (a + 1) / 2 - (b + 1));
        return Ok(PhaseParams {
            phase: 1,
            m,
            d,
            k,
            k_lower_bound: None,
        });
    }
    if m <= 2 * q * q - 2 * q - 2 {
        // phase 2: decompose aq + b = 2q² − q − 2 − m. Brute-force minimum
        // distances at q = 3 (m = 8, 9, 10 give d = 4, 6, 6) pin this down
        // and make d continuous at both phase boundaries; the -1 variant
        // fails all three.
        let t = 2 * q * q - q - 2 - m;
        let (a, b) = (t / q, t % q);
        debug_assert!((1..=q - 1).contains(&a));
        let d = if a < b { (q - a) * q - b } else { (q - a) * q };
        debug_assert_eq!(k, n - m + g - 1);
        return Ok(PhaseParams {
            phase: 2,
            m,
            d,
            k,
            k_lower_bound: None,
        });
    }
    if m <= n - 1 {
        let d = m + q + 1 - q * q;
        debug_assert_eq!(k, n - m + g - 1);
        return Ok(PhaseParams {
            phase: 3,
            m,
            d,
            k,
            k_lower_bound: None,
        });
    }
    // phase 4: m = q³ + aq + b with 0 ≤ a ≤ q−1, 0 ≤ b ≤ q−2
    let t = m - n;
    let (a, b) = (t / q, t % q);
    if b > q - 2 {
        return Err(Error::MOutOfRange(format!(
            "m={m} has no phase-4 decomposition with b ≤ q−2"
        )));
    }
    let d = if a < b {
        n + a * q + b - 2 * g
    } else {
        n + a * q + a + 1 - 2 * g
    };
    Ok(PhaseParams {
        phase: 4,
        m,
        d,
        k,
        k_lower_bound: Some(g as i64 - (a * q + b) as i64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldCtx, ONE, ZERO};

    fn gf(q: u32) -> FieldCtx {
        FieldCtx::for_q(q).unwrap()
    }

    fn exps(basis: &MonomialBasis) -> &[(u32, u32)] {
        &basis.exponents
    }

    #[test]
    fn smallest_bases_in_canonical_order() {
        let ctx = gf(3);
        let cases: [(u32, u32, &[(u32, u32)]); 5] = [
            (2, 0, &[(0, 0)]),                                 // {1}
            (2, 1, &[(0, 0), (1, 0)]),                         // {1, x}
            (3, 0, &[(0, 0), (1, 0), (0, 1)]),                 // {1, x, y}
            (3, 1, &[(0, 0), (1, 0), (0, 1), (2, 0)]),         // {1, x, y, x²}
            (3, 2, &[(0, 0), (1, 0), (0, 1), (2, 0), (1, 1)]), // {1, x, y, x², xy}
        ];
        for (d, j, want) in cases {
            let basis = build_basis(&ctx, &CodeSpec::CornerEdge { d, j }).unwrap();
            assert_eq!(exps(&basis), want, "d={d} j={j}");
        }
    }

    #[test]
    fn m_zero_is_the_constant() {
        let ctx = gf(3);
        let basis = build_basis(&ctx, &CodeSpec::MForm { m: 0 }).unwrap();
        assert_eq!(exps(&basis), &[(0, 0)]);
    }

    #[test]
    fn corner_edge_m_values() {
        let ctx = gf(3);
        assert_eq!(corner_edge_m(&ctx, 2, 0).unwrap(), 0);
        assert_eq!(corner_edge_m(&ctx, 3, 0).unwrap(), 4);
        assert_eq!(corner_edge_m(&ctx, 3, 1).unwrap(), 6);
        assert_eq!(corner_edge_m(&ctx, 3, 2).unwrap(), 7);
        assert_eq!(corner_edge_m(&ctx, 2, 1).unwrap(), 3);
    }

    #[test]
    fn m_route_equals_corner_edge_route() {
        for q in [2u32, 3, 4, 5] {
            let ctx = gf(q);
            for d in 2..=q {
                for j in 0..=d - 1 {
                    let m = corner_edge_m(&ctx, d, j).unwrap();
                    let via_m = build_basis(&ctx, &CodeSpec::MForm { m }).unwrap();
                    let direct = build_basis(&ctx, &CodeSpec::CornerEdge { d, j }).unwrap();
                    assert_eq!(via_m, direct, "q={q} d={d} j={j}");
                }
            }
        }
    }

    #[test]
    fn spec_validation() {
        let ctx = gf(3);
        assert!(build_basis(&ctx, &CodeSpec::CornerEdge { d: 4, j: 0 }).is_err());
        assert!(build_basis(&ctx, &CodeSpec::CornerEdge { d: 3, j: 3 }).is_err());
        assert!(build_basis(&ctx, &CodeSpec::MForm { m: 100 }).is_err());
        assert!(build_basis(&ctx, &CodeSpec::CornerEdge { d: 1, j: 0 }).is_err());
    }

    #[test]
    fn all_ones_parity_check() {
        let ctx = gf(2);
        let pc = build_parity_check(&ctx, &CodeSpec::corner(2)).unwrap();
        assert_eq!(pc.matrix.rows(), 1);
        assert_eq!(pc.matrix.cols(), 8);
        assert!((0..8).all(|c| pc.matrix.get(0, c) == ONE));
    }

    #[test]
    fn h13_matrix_shape_and_rank() {
        let ctx = gf(3);
        let pc = build_parity_check(&ctx, &CodeSpec::edge(3, 1)).unwrap();
        assert_eq!((pc.matrix.rows(), pc.matrix.cols()), (4, 27));
        assert_eq!(pc.matrix.rank(&ctx), 4);
    }

    #[test]
    fn origin_column_is_first_unit_vector() {
        let ctx = gf(3);
        let pc = build_parity_check(&ctx, &CodeSpec::edge(3, 2)).unwrap();
        // points are sorted by encoding, so (0,0) is the first column
        assert_eq!(pc.matrix.get(0, 0), ONE);
        for r in 1..5 {
            assert_eq!(pc.matrix.get(r, 0), ZERO);
        }
    }

    #[test]
    fn first_phase_rank_is_maximal() {
        for q in [2u32, 3, 4] {
            let ctx = gf(q);
            for d in 2..=q {
                for j in 0..=d - 1 {
                    let pc = build_parity_check(&ctx, &CodeSpec::CornerEdge { d, j }).unwrap();
                    let expected = (d * (d - 1) / 2 + j) as usize;
                    assert_eq!(pc.matrix.rows(), expected);
                    assert_eq!(pc.matrix.rank(&ctx), expected, "q={q} d={d} j={j}");
                }
            }
        }
    }

    #[test]
    fn phase1_parameters() {
        let ctx = gf(3);
        let p = phase_params(&ctx, 4).unwrap();
        assert_eq!((p.phase, p.d, p.k), (1, 3, 24)); // a = b = 1
        let p = phase_params(&ctx, 0).unwrap();
        assert_eq!((p.phase, p.d, p.k), (1, 2, 26));
        // m = 5 adds nothing over m = 4
        let p5 = phase_params(&ctx, 5).unwrap();
        assert_eq!((p5.d, p5.k), (3, 24));
        // corner/edge route agrees and satisfies k = n − d(d−1)/2 − j
        for q in [2u32, 3, 4, 5] {
            let ctx = gf(q);
            let n = q * q * q;
            for d in 2..=q {
                for j in 0..=d - 1 {
                    let p = code_params(&ctx, &CodeSpec::CornerEdge { d, j }).unwrap();
                    assert_eq!(p.phase, 1);
                    assert_eq!(p.d, d);
                    assert_eq!(p.k, n - d * (d - 1) / 2 - j);
                }
            }
        }
    }

    #[test]
    fn h13_is_a_27_23_3_code() {
        let ctx = gf(3);
        let p = code_params(&ctx, &CodeSpec::edge(3, 1)).unwrap();
        assert_eq!((p.k, p.d), (23, 3));
    }

    #[test]
    fn phase_boundaries_q3() {
        let ctx = gf(3);
        // phase 2: m ∈ [8, 10] with d = 4, 6, 6 (brute-force confirmed)
        for (m, d, k) in [(8, 4, 21), (9, 6, 20), (10, 6, 19)] {
            let p = phase_params(&ctx, m).unwrap();
            assert_eq!((p.phase, p.d, p.k), (2, d, k), "m={m}");
        }
        // phase 3: d grows linearly
        for m in 11..=26 {
            let p = phase_params(&ctx, m).unwrap();
            assert_eq!(p.phase, 3);
            assert_eq!(p.d, m - 5);
            assert_eq!(p.k, 27 - m + 2);
        }
        // phase 4
        let p = phase_params(&ctx, 27).unwrap();
        assert_eq!((p.phase, p.d), (4, 22)); // a = b = 0: d = 27 + 1 − 6
        assert_eq!(p.k_lower_bound, Some(3));
        assert_eq!(p.k, 3); // 24 monomials fit under m = 27; bound is met exactly
        // m = 29 has remainder q−1 = 2: outside the table's parameterization
        assert!(phase_params(&ctx, 29).is_err());
        assert!(phase_params(&ctx, 32).is_err());
    }

    #[test]
    fn dimension_matches_basis_complement_everywhere() {
        for q in [2u32, 3] {
            let ctx = gf(q);
            let n = q * q * q;
            for m in 0..=max_m(&ctx) {
                let Ok(p) = phase_params(&ctx, m) else {
                    continue;
                };
                let basis = build_basis(&ctx, &CodeSpec::MForm { m }).unwrap();
                assert_eq!(p.k, n - basis.len() as u32, "q={q} m={m}");
            }
        }
    }
}
