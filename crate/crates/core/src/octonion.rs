//! Octonions and the cross product on their imaginary part.
//!
//! Multiplication table: imaginary units `e1..e7` with `e_i² = -1` and the
//! oriented triples
//!
//! ```text
//! e1e2 = e3   e1e4 = e5   e1e7 = e6   e2e4 = e6
//! e2e5 = e7   e3e4 = e7   e3e6 = e5
//! ```
//!
//! each read cyclically (`e_a e_b = e_c ⇒ e_b e_c = e_a, e_c e_a = e_b`) and
//! anticommuting (`e_b e_a = -e_c`).

use crate::dual::Scalar;

/// Oriented triples `(a, b, c)` with `e_a e_b = e_c`.
pub const FANO_TRIPLES: [[usize; 3]; 7] = [
    [1, 2, 3],
    [1, 4, 5],
    [1, 7, 6],
    [2, 4, 6],
    [2, 5, 7],
    [3, 4, 7],
    [3, 6, 5],
];

/// `(sign, index)` of the product of basis units `e_i e_j`, with `e_0 = 1`.
pub const fn unit_product(i: usize, j: usize) -> (i8, usize) {
    if i == 0 {
        return (1, j);
    }
    if j == 0 {
        return (1, i);
    }
    if i == j {
        return (-1, 0);
    }
    let mut t = 0;
    while t < FANO_TRIPLES.len() {
        let [a, b, c] = FANO_TRIPLES[t];
        let cyc = [(a, b, c), (b, c, a), (c, a, b)];
        let mut k = 0;
        while k < 3 {
            let (x, y, z) = cyc[k];
            if i == x && j == y {
                return (1, z);
            }
            if i == y && j == x {
                return (-1, z);
            }
            k += 1;
        }
        t += 1;
    }
    panic!("indices outside 0..8");
}

/// An octonion `Σ c_k e_k`, `e_0 = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Octonion<S>(pub [S; 8]);

impl<S: Scalar> Octonion<S> {
    pub fn zero() -> Self {
        Octonion([S::zero(); 8])
    }

    /// Pure imaginary octonion from a vector of `R⁷ = span(e1..e7)`.
    pub fn imaginary(v: &[S; 7]) -> Self {
        let mut c = [S::zero(); 8];
        c[1..].copy_from_slice(v);
        Octonion(c)
    }

    pub fn real(&self) -> S {
        self.0[0]
    }

    pub fn imaginary_part(&self) -> [S; 7] {
        let mut v = [S::zero(); 7];
        v.copy_from_slice(&self.0[1..]);
        v
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = [S::zero(); 8];
        for i in 0..8 {
            for j in 0..8 {
                let (sign, k) = unit_product(i, j);
                let term = self.0[i] * rhs.0[j];
                out[k] = if sign > 0 { out[k] + term } else { out[k] - term };
            }
        }
        Octonion(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0.iter()) {
            *o = *o - *r;
        }
        Octonion(out)
    }

    pub fn norm_sqr(&self) -> S {
        self.0.iter().fold(S::zero(), |acc, &c| acc + c * c)
    }
}

/// Cross product on `R⁷ = Im 𝕆`: `u × v = Im(u v)`.
pub fn cross<S: Scalar>(u: &[S; 7], v: &[S; 7]) -> [S; 7] {
    Octonion::imaginary(u)
        .mul(&Octonion::imaginary(v))
        .imaginary_part()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(k: usize) -> Octonion<f64> {
        let mut c = [0.0; 8];
        c[k] = 1.0;
        Octonion(c)
    }

    #[test]
    fn table_entries_match_triples() {
        assert_eq!(unit_product(1, 2), (1, 3));
        assert_eq!(unit_product(2, 1), (-1, 3));
        assert_eq!(unit_product(2, 3), (1, 1));
        assert_eq!(unit_product(6, 3), (-1, 5));
        assert_eq!(unit_product(1, 7), (1, 6));
        assert_eq!(unit_product(7, 1), (-1, 6));
        assert_eq!(unit_product(5, 5), (-1, 0));
    }

    #[test]
    fn every_pair_of_units_is_covered_once() {
        for i in 1..8 {
            let mut seen = [false; 8];
            for j in 1..8 {
                if i != j {
                    let (_, k) = unit_product(i, j);
                    assert!(k != 0 && k != i && k != j);
                    assert!(!seen[k]);
                    seen[k] = true;
                }
            }
        }
    }

    #[test]
    fn basis_alternativity() {
        for i in 0..8 {
            for j in 0..8 {
                let (u, v) = (unit(i), unit(j));
                let lhs = u.mul(&u).mul(&v);
                let rhs = u.mul(&u.mul(&v));
                assert_eq!(lhs, rhs, "left alternativity fails for e{i}, e{j}");
                let lhs = v.mul(&u).mul(&u);
                let rhs = v.mul(&u.mul(&u));
                assert_eq!(lhs, rhs, "right alternativity fails for e{i}, e{j}");
            }
        }
    }

    #[test]
    fn cross_product_of_orthonormal_units() {
        let mut e1 = [0.0; 7];
        e1[0] = 1.0;
        let mut e2 = [0.0; 7];
        e2[1] = 1.0;
        let c = cross(&e1, &e2);
        assert_eq!(c, [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    }
}
