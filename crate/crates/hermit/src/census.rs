//! Censuses of planar intersection counts: how many parabolas (resp.
//! lines) meet the curve in exactly k points, computed two ways — by
//! exhaustive iteration over the coefficient cube and by the closed-form
//! cell counts. The two must agree cell by cell; `n_k_table` combines
//! them into the N_k input consumed by the weight-4 formula.
//!
//! The brute census is a map-reduce over leading-coefficient strata:
//! strata are independent, histograms merge by addition, so the result
//! is independent of the thread count.

use crate::curve::{
    admissible_parabola_counts, line_intersection_count, parabola_intersection_count, Line,
    Parabola,
};
use crate::field::FieldCtx;
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Largest q the brute parabola census will attempt by default
/// (9⁴·80 ≈ 525k parabolas, 81 evaluations each).
pub const DEFAULT_BRUTE_LIMIT_Q: u32 = 9;

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Universe {
    Parabolas,
    NonVerticalLines,
    VerticalLines,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Brute,
    Formula,
}

/// Intersection-count histogram over one universe of plane curves.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CensusHistogram {
    pub universe: Universe,
    pub q: u32,
    pub mode: Mode,
    /// count k ↦ number of curves attaining k
    pub histogram: BTreeMap<usize, u128>,
    pub total: u128,
}

impl CensusHistogram {
    fn from_counts(
        universe: Universe,
        q: u32,
        mode: Mode,
        histogram: BTreeMap<usize, u128>,
    ) -> CensusHistogram {
        let total = histogram.values().sum();
        CensusHistogram {
            universe,
            q,
            mode,
            histogram,
            total,
        }
    }

    /// The universe size the histogram total must equal.
    pub fn expected_total(&self) -> u128 {
        let q = self.q as u128;
        match self.universe {
            Universe::Parabolas => q.pow(4) * (q * q - 1),
            Universe::NonVerticalLines => q.pow(4),
            Universe::VerticalLines => q * q,
        }
    }
}

fn merge(mut a: BTreeMap<usize, u128>, b: BTreeMap<usize, u128>) -> BTreeMap<usize, u128> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Exhaustive census over all q⁴(q²−1) parabolas. Any intersection count
/// outside the admissible set is reported as an error: it would mean the
/// arithmetic itself is broken.
pub fn parabola_census_brute(ctx: &FieldCtx) -> Result<CensusHistogram> {
    parabola_census_brute_with_limit(ctx, DEFAULT_BRUTE_LIMIT_Q)
}

pub fn parabola_census_brute_with_limit(ctx: &FieldCtx, max_q: u32) -> Result<CensusHistogram> {
    if ctx.q() > max_q {
        return Err(Error::BruteLimitExceeded(format!(
            "parabola census at q={} exceeds the limit q ≤ {max_q}",
            ctx.q()
        )));
    }
    let counted = ctx
        .nonzero_elems()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|a| {
            let mut h = BTreeMap::new();
            for b in ctx.elems() {
                for c in ctx.elems() {
                    let par = Parabola::new(a, b, c).expect("a is nonzero");
                    let n = parabola_intersection_count(ctx, &par);
                    *h.entry(n).or_insert(0u128) += 1;
                }
            }
            h
        })
        .reduce(BTreeMap::new, merge);

    let admissible = admissible_parabola_counts(ctx);
    for &k in counted.keys() {
        if !admissible.contains(&k) {
            return Err(Error::InadmissibleCount { q: ctx.q(), count: k });
        }
    }
    // Keep every admissible cell, zero or not, so modes compare directly.
    let mut histogram: BTreeMap<usize, u128> = admissible.into_iter().map(|k| (k, 0)).collect();
    histogram = merge(histogram, counted);
    Ok(CensusHistogram::from_counts(
        Universe::Parabolas,
        ctx.q(),
        Mode::Brute,
        histogram,
    ))
}

/// The closed-form census cells as (k, count) pairs, before merging cells
/// that land on the same k (which only happens at q = 2).
pub fn parabola_formula_cells(q: u32, even: bool) -> Vec<(usize, u128)> {
    let qu = q as usize;
    let q = q as u128;
    if even {
        let h = q / 2;
        vec![
            (1, q.pow(3) * (q + 1) * (h - 1)),
            (qu - 1, q.pow(3) * (q + 1) * (q - 1) * h),
            (qu + 1, q.pow(3) * (q + 1) * (q - 1) * (h - 1)),
            (2 * qu - 1, q.pow(3) * (q + 1) * h),
        ]
    } else {
        vec![
            (0, q * q * (q + 1) * (q - 1) / 2),
            (1, q * q * (q + 1) * q * (q - 3) / 2),
            (qu - 1, q * q * (q + 1) * q * (q - 1) * (q - 1) / 2),
            (qu, q * q * (q + 1) * (q * q - q + 1)),
            (qu + 1, q * q * (q + 1) * q * (q - 1) * (q - 3) / 2),
            (2 * qu - 1, q * q * (q + 1) * q * (q - 1) / 2),
            (2 * qu, q * q * (q + 1) * (q - 1) / 2),
        ]
    }
}

/// Closed-form parabola census; total is q⁴(q²−1) by construction.
pub fn parabola_census_formula(ctx: &FieldCtx) -> CensusHistogram {
    let mut histogram = BTreeMap::new();
    for (k, v) in parabola_formula_cells(ctx.q(), ctx.even()) {
        *histogram.entry(k).or_insert(0) += v;
    }
    CensusHistogram::from_counts(Universe::Parabolas, ctx.q(), Mode::Formula, histogram)
}

/// Line census over the chosen universe: vertical lines all meet the curve
/// in q points; of the q⁴ non-vertical lines, q³ are tangent and the rest
/// meet it in q+1 points.
pub fn line_census(ctx: &FieldCtx, universe: Universe, mode: Mode) -> Result<CensusHistogram> {
    let q = ctx.q() as usize;
    let histogram = match (universe, mode) {
        (Universe::Parabolas, _) => {
            return Err(Error::InvalidParameter(
                "line_census covers line universes only".into(),
            ))
        }
        (Universe::VerticalLines, Mode::Formula) => {
            BTreeMap::from([(q, (q as u128) * (q as u128))])
        }
        (Universe::NonVerticalLines, Mode::Formula) => {
            let qw = q as u128;
            BTreeMap::from([(1, qw.pow(3)), (q + 1, qw.pow(4) - qw.pow(3))])
        }
        (Universe::VerticalLines, Mode::Brute) => {
            let mut h = BTreeMap::new();
            for t in ctx.elems() {
                let n = line_intersection_count(ctx, &Line::Vertical { t });
                *h.entry(n).or_insert(0u128) += 1;
            }
            h
        }
        (Universe::NonVerticalLines, Mode::Brute) => ctx
            .elems()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|a| {
                let mut h = BTreeMap::new();
                for b in ctx.elems() {
                    let n = line_intersection_count(ctx, &Line::Affine { a, b });
                    *h.entry(n).or_insert(0u128) += 1;
                }
                h
            })
            .reduce(BTreeMap::new, merge),
    };
    Ok(CensusHistogram::from_counts(universe, ctx.q(), mode, histogram))
}

/// N_k for 4 ≤ k ≤ 2q: the number of parabolas plus non-vertical lines
/// meeting the curve in exactly k points. Lines contribute only at
/// k = q + 1 (q³ tangents sit at k = 1, below the range).
pub fn n_k_table(ctx: &FieldCtx, mode: Mode) -> Result<BTreeMap<usize, u128>> {
    let q = ctx.q() as usize;
    let parabolas = match mode {
        Mode::Brute => parabola_census_brute(ctx)?,
        Mode::Formula => parabola_census_formula(ctx),
    };
    let qw = ctx.q() as u128;
    let mut out = BTreeMap::new();
    for k in 4..=2 * q {
        let mut n = parabolas.histogram.get(&k).copied().unwrap_or(0);
        if k == q + 1 {
            n += qw.pow(4) - qw.pow(3);
        }
        out.insert(k, n);
    }
    Ok(out)
}
