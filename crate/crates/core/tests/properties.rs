use jmetric_core::algebra::{build_constraints, subspace_dimension, ModelFiber, SubspaceQuery};
use jmetric_core::classify::{classify, DEFAULT_TOL};
use jmetric_core::dual::{Dual, Scalar};
use jmetric_core::linalg::{null_space, LinearConstraintSystem, NULL_SPACE_TOL};
use jmetric_core::octonion::Octonion;
use jmetric_core::{catalog, AEStructureKind, SamplePlan};
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = AEStructureKind> {
    prop::sample::select(AEStructureKind::ALL.to_vec())
}

fn octonion() -> impl Strategy<Value = Octonion<f64>> {
    prop::array::uniform8(-1.0..1.0f64).prop_map(Octonion)
}

/// Integer matrix with unit determinant, as a product of shears, with its inverse.
fn unimodular(d: usize) -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
    prop::collection::vec((0..d, 0..d, -2i64..=2), 1..6).prop_map(move |shears| {
        let ident = |d: usize| -> Vec<i64> { (0..d * d).map(|k| i64::from(k / d == k % d)).collect() };
        let mul = |a: &[i64], b: &[i64]| -> Vec<i64> {
            (0..d * d)
                .map(|k| (0..d).map(|m| a[(k / d) * d + m] * b[m * d + k % d]).sum())
                .collect()
        };
        let (mut p, mut inv) = (ident(d), ident(d));
        for (i, j, c) in shears {
            if i == j {
                continue;
            }
            let mut e = ident(d);
            e[i * d + j] = c;
            let mut e_inv = ident(d);
            e_inv[i * d + j] = -c;
            p = mul(&p, &e);
            inv = mul(&e_inv, &inv);
        }
        (p, inv)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn octonions_are_alternative(u in octonion(), v in octonion()) {
        let left = u.mul(&u).mul(&v).sub(&u.mul(&u.mul(&v)));
        let right = v.mul(&u).mul(&u).sub(&v.mul(&u.mul(&u)));
        prop_assert!(left.norm_sqr().sqrt() < 1e-12);
        prop_assert!(right.norm_sqr().sqrt() < 1e-12);
    }

    #[test]
    fn octonion_norm_is_multiplicative(u in octonion(), v in octonion()) {
        let lhs = u.mul(&v).norm_sqr();
        prop_assert!((lhs - u.norm_sqr() * v.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn dual_derivatives_match_finite_differences(x in -2.0..2.0f64, y in -2.0..2.0f64) {
        let f = |x: Dual, y: Dual| (x * x * y + 3.0) / (x * x + y * y + 1.0) - y.powi(3) * 0.5;
        let vars = Dual::seed(&[x, y]);
        let v = f(vars[0], vars[1]);
        let h = 1e-6;
        let at = |a: f64, b: f64| f(Dual::constant(a), Dual::constant(b)).re();
        let dx = (at(x + h, y) - at(x - h, y)) / (2.0 * h);
        let dy = (at(x, y + h) - at(x, y - h)) / (2.0 * h);
        prop_assert!((v.partial(0) - dx).abs() < 1e-5);
        prop_assert!((v.partial(1) - dy).abs() < 1e-5);
    }

    #[test]
    fn null_space_ignores_row_order_and_scale(
        kind in kind(),
        n in 1usize..=2,
        seed in any::<u64>(),
        scales in prop::collection::vec(prop_oneof![-3.0..-0.5f64, 0.5..3.0f64], 1..8),
    ) {
        let fiber = ModelFiber::standard(kind, n).unwrap();
        let sys = build_constraints(&fiber, SubspaceQuery::W).unwrap();
        let mut rows = sys.rows().to_vec();
        let mut state = seed;
        for i in (1..rows.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            rows.swap(i, (state >> 33) as usize % (i + 1));
        }
        let mut shuffled = LinearConstraintSystem::new(sys.n_unknowns());
        for (r, row) in rows.iter().enumerate() {
            let s = scales[r % scales.len()];
            shuffled.push_row(row.iter().map(|&(c, v)| (c, s * v)));
        }
        let a = null_space(&sys, NULL_SPACE_TOL).unwrap();
        let b = null_space(&shuffled, NULL_SPACE_TOL).unwrap();
        prop_assert_eq!(a.dimension, b.dimension);
        for v in &b.basis {
            prop_assert!(sys.max_residual(v) < 1e-9);
        }
    }

    #[test]
    fn dimensions_do_not_depend_on_the_basis(kind in kind(), (p, inv) in unimodular(4)) {
        let fiber = ModelFiber::standard(kind, 2).unwrap();
        let moved = fiber.change_basis(&p, &inv).unwrap();
        for q in SubspaceQuery::ALL {
            prop_assert_eq!(
                subspace_dimension(&fiber, q).unwrap(),
                subspace_dimension(&moved, q).unwrap()
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn six_dimensional_dimensions_do_not_depend_on_the_basis(kind in kind(), (p, inv) in unimodular(6)) {
        let fiber = ModelFiber::standard(kind, 3).unwrap();
        let moved = fiber.change_basis(&p, &inv).unwrap();
        for q in [SubspaceQuery::W1, SubspaceQuery::CODAZZI] {
            prop_assert_eq!(
                subspace_dimension(&fiber, q).unwrap(),
                subspace_dimension(&moved, q).unwrap()
            );
        }
    }

    #[test]
    fn residuals_are_monotone_in_the_sample(seed in any::<u64>(), small in 1usize..6) {
        let m = catalog("random-hermitian-13").unwrap();
        let sub = classify(&m, &SamplePlan::new(seed, small, 5), DEFAULT_TOL).unwrap();
        let all = classify(&m, &SamplePlan::new(seed, small + 4, 5), DEFAULT_TOL).unwrap();
        let (a, b) = (&sub.residuals, &all.residuals);
        prop_assert!(a.kahler <= b.kahler && a.integrable <= b.integrable);
        prop_assert!(a.nearly <= b.nearly && a.codazzi <= b.codazzi);
        prop_assert!(a.torsion0 <= b.torsion0 && a.torsion0_skew_g <= b.torsion0_skew_g);
    }
}
