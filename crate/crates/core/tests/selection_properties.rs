mod common;

use blockcur::oracle::{brute_force_maxvol, volume};
use blockcur::{
    aca_sequential, blockwise_select, decompose, hilbert, random_uniform, relative_error,
    synthetic_lowrank, Axis, BlockwiseSelector, DenseMatrix,
};
use common::*;
use proptest::prelude::*;

fn selection_bits(a: &DenseMatrix, r: usize, b: usize, axis: Axis) -> (Vec<usize>, Vec<u64>) {
    let sel = blockwise_select(a, r, b, axis, 1e-12).unwrap();
    let bits = sel
        .trace
        .pivot_magnitudes
        .iter()
        .map(|x| x.to_bits())
        .collect();
    (sel.indices.as_slice().to_vec(), bits)
}

#[test]
fn aca_matches_transliteration_on_hilbert() {
    let a = hilbert::<f64>(6).unwrap();
    let sel = aca_sequential(&a, 3, 0.0).unwrap();
    let (rows, cols) = aca_transliteration(&a, 3);
    assert_eq!(sel.rows.as_slice(), rows.as_slice());
    assert_eq!(sel.cols.as_slice(), cols.as_slice());
}

#[test]
fn maxvol_matches_direct_enumeration() {
    let a = random_uniform::<f64>(6, 6, 2024).unwrap();
    let res = brute_force_maxvol(&a, 2).unwrap();
    let (best, count) = enumerate_max_volume(&a, 2);
    assert_eq!(count, 225);
    assert_eq!(res.candidates_examined, 225);
    assert!((res.volume - best).abs() <= 1e-14 * best);
    let sub = a.gather(res.rows.as_slice(), res.cols.as_slice()).unwrap();
    assert!((volume(&sub).unwrap() - best).abs() <= 1e-14 * best);
}

#[test]
fn maxvol_dominates_aca_pivots() {
    for seed in 0..15 {
        let a = random_uniform::<f64>(6, 5, seed).unwrap();
        for r in 1..=3 {
            let best = brute_force_maxvol(&a, r).unwrap();
            let aca = aca_sequential(&a, r, 0.0).unwrap();
            let sub = a.gather(aca.rows.as_slice(), aca.cols.as_slice()).unwrap();
            assert!(best.volume >= volume(&sub).unwrap() * (1.0 - 1e-12));
        }
    }
}

#[test]
fn exact_rank_annihilation() {
    for (n, r) in [(16, 3), (24, 5), (40, 2)] {
        let a = synthetic_lowrank::<f64>(n, r).unwrap();
        for axis in [Axis::Rows, Axis::Cols] {
            let sel = BlockwiseSelector::new(r, 3, axis)
                .tol(0.0)
                .keep_vectors(true)
                .run(&a)
                .unwrap();
            assert_eq!(sel.indices.len(), r);
            let res = residual_after_projection(&a, &sel.shared_vectors, axis == Axis::Rows);
            assert!(res <= 1e-10 * a.frobenius_norm(), "n={n} r={r}: {res:e}");
        }
    }
}

#[test]
fn exact_recovery_for_every_block_count() {
    for n in [16usize, 32, 64] {
        for r in 1..=8 {
            let a = synthetic_lowrank::<f64>(n, r).unwrap();
            for b in 1..=n {
                let f = decompose(&a, r, r, b, 1e-12).unwrap();
                let err = relative_error(&a, &f).unwrap();
                assert!(err <= 1e-9, "n={n} r={r} b={b}: {err:e}");
            }
        }
    }
}

#[test]
fn decompose_is_thread_invariant() {
    let a = hilbert::<f64>(90).unwrap();
    let base = with_threads(1, || decompose(&a, 12, 10, 5, 1e-12).unwrap());
    for t in [2, 8] {
        let other = with_threads(t, || decompose(&a, 12, 10, 5, 1e-12).unwrap());
        assert_eq!(base, other);
    }
    assert_eq!(base, decompose(&a, 12, 10, 5, 1e-12).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn block_invariance(seed in any::<u64>(), r in 1usize..=17) {
        let a = random_uniform::<f64>(20, 17, seed).unwrap();
        for axis in [Axis::Rows, Axis::Cols] {
            let dim = if axis == Axis::Rows { 20 } else { 17 };
            let reference = selection_bits(&a, r, 1, axis);
            for b in [2, 3, 5, dim] {
                prop_assert_eq!(&selection_bits(&a, r, b, axis), &reference);
            }
        }
    }

    #[test]
    fn thread_invariance(seed in any::<u64>(), b in 1usize..=17) {
        let a = random_uniform::<f64>(20, 17, seed).unwrap();
        let reference = with_threads(1, || selection_bits(&a, 10, b, Axis::Cols));
        for t in [2, 8] {
            prop_assert_eq!(with_threads(t, || selection_bits(&a, 10, b, Axis::Cols)), reference.clone());
        }
    }

    #[test]
    fn deflation_vectors_are_orthogonal(seed in any::<u64>(), rows in 2usize..25, cols in 2usize..25) {
        let a = random_uniform::<f64>(rows, cols, seed).unwrap();
        for axis in [Axis::Rows, Axis::Cols] {
            let dim = if axis == Axis::Rows { rows } else { cols };
            let sel = BlockwiseSelector::new(dim.min(rows.min(cols)), 1 + seed as usize % dim, axis)
                .keep_vectors(true)
                .run(&a)
                .unwrap();
            let v = &sel.shared_vectors;
            for p in 0..v.len() {
                for q in 0..p {
                    prop_assert!(cosine(&v[p], &v[q]) <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn residual_norms_never_grow(seed in any::<u64>(), n in 4usize..30) {
        let a = random_uniform::<f64>(n, n + 3, seed).unwrap();
        let sel = blockwise_select(&a, n, 3.min(n), Axis::Rows, 0.0).unwrap();
        for w in sel.trace.pivot_magnitudes.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
        let mut seen = sel.indices.as_slice().to_vec();
        seen.sort_unstable();
        seen.dedup();
        prop_assert_eq!(seen.len(), sel.indices.len());
    }

    #[test]
    fn aca_matches_transliteration(seed in any::<u64>(), m in 3usize..10, n in 3usize..10) {
        let a = random_uniform::<f64>(m, n, seed).unwrap();
        let r = m.min(n) / 2 + 1;
        let sel = aca_sequential(&a, r, 0.0).unwrap();
        let (rows, cols) = aca_transliteration(&a, r);
        prop_assert_eq!(sel.rows.as_slice(), rows.as_slice());
        prop_assert_eq!(sel.cols.as_slice(), cols.as_slice());
    }
}
