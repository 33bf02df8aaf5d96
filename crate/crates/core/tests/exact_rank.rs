//! Dimensions from the algebra module against an arbitrary-precision
//! rational Gaussian elimination written here from scratch.

#![allow(clippy::needless_range_loop)]

use jmetric_core::algebra::{build_constraints, subspace_dimension, ModelFiber, SubspaceQuery};
use jmetric_core::linalg::{exact_rank, null_space, LinearConstraintSystem, NULL_SPACE_TOL};
use jmetric_core::AEStructureKind;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rational_rank(rows: &[Vec<f64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&v| {
                    assert_eq!(v, v.trunc(), "non-integer coefficient {v}");
                    BigRational::from_integer(BigInt::from(v as i64))
                })
                .collect()
        })
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = BigRational::one() / m[rank][c].clone();
        let pivot: Vec<BigRational> = m[rank].iter().map(|v| v * &inv).collect();
        for r in rank + 1..m.len() {
            if m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone();
            for (v, pv) in m[r].iter_mut().zip(&pivot).skip(c) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        m[rank] = pivot;
        rank += 1;
    }
    rank
}

fn oracle_dimension(kind: AEStructureKind, n: usize, q: SubspaceQuery) -> usize {
    let fiber = ModelFiber::standard(kind, n).unwrap();
    let sys = build_constraints(&fiber, q).unwrap();
    sys.n_unknowns() - rational_rank(&sys.to_dense())
}

#[test]
fn small_fibers_match_rational_elimination() {
    for kind in AEStructureKind::ALL {
        for n in 1..=2 {
            for q in SubspaceQuery::ALL {
                let fiber = ModelFiber::standard(kind, n).unwrap();
                assert_eq!(
                    subspace_dimension(&fiber, q).unwrap(),
                    oracle_dimension(kind, n, q),
                    "{kind} n={n} {q}"
                );
            }
        }
    }
}

#[test]
fn norden_w_in_dimension_four_is_nonzero() {
    let d = oracle_dimension(AEStructureKind::NORDEN, 2, SubspaceQuery::W);
    assert!(d >= 1);
    let fiber = ModelFiber::standard(AEStructureKind::NORDEN, 2).unwrap();
    assert_eq!(subspace_dimension(&fiber, SubspaceQuery::W).unwrap(), d);
}

#[test]
fn hermitian_w1_in_dimension_six_is_positive() {
    let d = oracle_dimension(AEStructureKind::HERMITIAN, 3, SubspaceQuery::W1);
    assert!(d > 0);
    let fiber = ModelFiber::standard(AEStructureKind::HERMITIAN, 3).unwrap();
    assert_eq!(subspace_dimension(&fiber, SubspaceQuery::W1).unwrap(), d);
}

#[test]
fn codazzi_subspace_vanishes_in_dimension_six() {
    for kind in AEStructureKind::ALL {
        assert_eq!(oracle_dimension(kind, 3, SubspaceQuery::CODAZZI), 0, "{kind}");
    }
}

#[test]
fn null_space_basis_lies_in_w() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for kind in AEStructureKind::ALL {
        let fiber = ModelFiber::standard(kind, 2).unwrap();
        let d = fiber.dim();
        let ae = kind.product_f();
        let ns = null_space(&build_constraints(&fiber, SubspaceQuery::W).unwrap(), NULL_SPACE_TOL).unwrap();
        let j = |v: &[f64]| -> Vec<f64> {
            (0..d)
                .map(|m| (0..d).map(|c| fiber.j0()[m * d + c] as f64 * v[c]).sum())
                .collect()
        };
        let phi = |b: &[f64], x: &[f64], y: &[f64], z: &[f64]| {
            let mut s = 0.0;
            for i in 0..d {
                for jj in 0..d {
                    for k in 0..d {
                        s += b[(i * d + jj) * d + k] * x[i] * y[jj] * z[k];
                    }
                }
            }
            s
        };
        for _ in 0..20 {
            let v: Vec<Vec<f64>> = (0..3)
                .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            let (x, y, z) = (&v[0], &v[1], &v[2]);
            for b in &ns.basis {
                assert!((phi(b, x, y, z) - ae * phi(b, x, z, y)).abs() < 1e-9);
                assert!((phi(b, x, &j(y), z) + ae * phi(b, x, y, &j(z))).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn rank_three_product_has_four_dimensional_kernel() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut trials = 0;
    while trials < 20 {
        let b: Vec<Vec<i64>> = (0..5).map(|_| (0..3).map(|_| rng.random_range(-4..=4)).collect()).collect();
        let c: Vec<Vec<i64>> = (0..3).map(|_| (0..7).map(|_| rng.random_range(-4..=4)).collect()).collect();
        let dense: Vec<Vec<f64>> = (0..5)
            .map(|i| (0..7).map(|j| (0..3).map(|k| b[i][k] * c[k][j]).sum::<i64>() as f64).collect())
            .collect();
        if rational_rank(&dense) != 3 {
            continue;
        }
        trials += 1;
        let mut sys = LinearConstraintSystem::new(7);
        for row in &dense {
            sys.push_row(row.iter().copied().enumerate());
        }
        let ns = null_space(&sys, NULL_SPACE_TOL).unwrap();
        assert_eq!(ns.dimension, 4);
        assert_eq!(exact_rank(&sys).unwrap(), 3);
        for v in &ns.basis {
            assert!(sys.max_residual(v) < 1e-10);
        }
    }
}
