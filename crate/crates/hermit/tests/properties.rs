//! Randomized property tests over the larger fields, where exhaustive
//! loops stop being free.

use hermit::field::{Elem, FieldCtx, ONE, ZERO};
use hermit::linalg::Matrix;
use proptest::prelude::*;

fn ctx_for(q: u32) -> &'static FieldCtx {
    // proptest reruns closures; build each context once
    use std::sync::OnceLock;
    static CTX8: OnceLock<FieldCtx> = OnceLock::new();
    static CTX9: OnceLock<FieldCtx> = OnceLock::new();
    match q {
        8 => CTX8.get_or_init(|| FieldCtx::for_q(8).unwrap()),
        9 => CTX9.get_or_init(|| FieldCtx::for_q(9).unwrap()),
        _ => unreachable!(),
    }
}

proptest! {
    #[test]
    fn field_ops_satisfy_ring_axioms(q in prop::sample::select(vec![8u32, 9]), a in 0u32..64, b in 0u32..64, c in 0u32..64) {
        let ctx = ctx_for(q);
        let q2 = ctx.q2();
        let (a, b, c) = (Elem(a % q2), Elem(b % q2), Elem(c % q2));
        prop_assert_eq!(ctx.add(a, b), ctx.add(b, a));
        prop_assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
        prop_assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
        prop_assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
        prop_assert_eq!(ctx.sub(ctx.add(a, b), b), a);
        if a != ZERO {
            prop_assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), ONE);
        }
    }

    #[test]
    fn frobenius_is_an_involution_fixing_norm_and_trace(q in prop::sample::select(vec![8u32, 9]), enc in 0u32..81) {
        let ctx = ctx_for(q);
        let a = Elem(enc % ctx.q2());
        prop_assert_eq!(ctx.frobenius(ctx.frobenius(a)), a);
        prop_assert!(ctx.in_subfield(ctx.norm(a)));
        prop_assert!(ctx.in_subfield(ctx.trace(a)));
        prop_assert_eq!(ctx.norm(ctx.frobenius(a)), ctx.norm(a));
    }

    #[test]
    fn full_support_count_routes_agree(
        rows in 1usize..4,
        cols in 2usize..6,
        seed in 0u32..10_000,
    ) {
        // q = 3 keeps the enumeration route cheap while exercising odd
        // characteristic
        let ctx = FieldCtx::for_q(3).unwrap();
        let data: Vec<Elem> = (0..rows * cols)
            .map(|i| Elem((seed.wrapping_mul(2654435761).wrapping_add(i as u32 * 97)) % 9))
            .collect();
        let m = Matrix::new(rows, cols, data);
        prop_assert_eq!(
            m.count_full_support_kernel(&ctx),
            m.count_full_support_kernel_by_exclusion(&ctx)
        );
    }

    #[test]
    fn rank_stable_under_row_scaling(seed in 0u32..5_000) {
        let ctx = ctx_for(8);
        let q2 = ctx.q2();
        let data: Vec<Elem> = (0..3 * 5)
            .map(|i| Elem(seed.wrapping_mul(31).wrapping_add(i * 13) % q2))
            .collect();
        let m = Matrix::new(3, 5, data);
        let scaled = Matrix::from_rows(
            (0..3)
                .map(|r| {
                    let s = Elem(1 + (seed + r) % (q2 - 1));
                    m.row(r as usize).iter().map(|&v| ctx.mul(s, v)).collect()
                })
                .collect(),
        );
        prop_assert_eq!(m.rank(&ctx), scaled.rank(&ctx));
    }
}
