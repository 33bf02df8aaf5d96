//! Model spaces of 3-tensors with the symmetries of `g((∇_x J)y, z)`.
//!
//! On a model fiber `(V, J₀, ⟨,⟩)` of dimension `2n`, `W` is the space of
//! trilinear forms `φ` with
//!
//! ```text
//! φ(x, y, z)  =  αε·φ(x, z, y)
//! φ(x, Jy, z) = −αε·φ(x, y, Jz)
//! ```
//!
//! `W₁ ⊂ W` adds `φ(x, y, z) + φ(y, x, z) = 0` (equivalently `φ(x, x, y) = 0`)
//! and the Codazzi-symmetric subspace adds `φ(x, y, z) = φ(y, x, z)`.
//! Each is computed as the null space of an explicit integer constraint
//! system over the `(2n)³` components `φ_ijk = φ(e_i, e_j, e_k)`, once in
//! floating point and once exactly.
//!
//! `J₀` acts on a slot by pulling back: `φ(x, Jy, z) = J₀^m_j φ_imk`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{exact_rank, null_space, LinearConstraintSystem, NullSpace, NULL_SPACE_TOL};
use crate::manifold::AEStructureKind;

/// Largest supported half-dimension.
pub const MAX_HALF_DIM: usize = 3;

/// `(V, J₀, ⟨,⟩)` with integer matrices (row-major, `J₀[m * d + j] = J₀^m_j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelFiber {
    n: usize,
    kind: AEStructureKind,
    j0: Vec<i64>,
    inner: Vec<i64>,
}

fn int_matmul(a: &[i64], b: &[i64], d: usize) -> Vec<i64> {
    let mut out = vec![0; d * d];
    for i in 0..d {
        for k in 0..d {
            for j in 0..d {
                out[i * d + j] += a[i * d + k] * b[k * d + j];
            }
        }
    }
    out
}

fn int_transpose(a: &[i64], d: usize) -> Vec<i64> {
    (0..d * d).map(|k| a[(k % d) * d + k / d]).collect()
}

fn int_det(a: &[i64], d: usize) -> i128 {
    // Bareiss
    let mut m: Vec<i128> = a.iter().map(|&v| v as i128).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..d {
        if m[k * d + k] == 0 {
            let Some(swap) = (k + 1..d).find(|&r| m[r * d + k] != 0) else {
                return 0;
            };
            for c in 0..d {
                m.swap(k * d + c, swap * d + c);
            }
            sign = -sign;
        }
        for i in k + 1..d {
            for j in k + 1..d {
                m[i * d + j] = (m[i * d + j] * m[k * d + k] - m[i * d + k] * m[k * d + j]) / prev;
            }
        }
        prev = m[k * d + k];
    }
    sign * m[d * d - 1]
}

impl ModelFiber {
    /// Block-form fiber: rotation blocks (`α = −1`) or `diag(Id, −Id)`
    /// (`α = +1`) for `J₀`; `δ` for `ε = +1`, and for `ε = −1` the neutral
    /// form `diag(1,−1,…)` (Norden) or `[[0, Id], [Id, 0]]` (para-Hermitian).
    pub fn standard(kind: AEStructureKind, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_HALF_DIM {
            return Err(Error::UnsupportedDimension { n });
        }
        let d = 2 * n;
        let mut j0 = vec![0i64; d * d];
        let mut inner = vec![0i64; d * d];
        if kind.alpha() < 0 {
            for b in 0..n {
                j0[(2 * b) * d + 2 * b + 1] = -1;
                j0[(2 * b + 1) * d + 2 * b] = 1;
            }
        } else {
            for i in 0..d {
                j0[i * d + i] = if i < n { 1 } else { -1 };
            }
        }
        match (kind.alpha(), kind.epsilon()) {
            (_, 1) => (0..d).for_each(|i| inner[i * d + i] = 1),
            (-1, -1) => (0..d).for_each(|i| inner[i * d + i] = if i % 2 == 0 { 1 } else { -1 }),
            _ => {
                for i in 0..n {
                    inner[i * d + n + i] = 1;
                    inner[(n + i) * d + i] = 1;
                }
            }
        }
        let fiber = ModelFiber { n, kind, j0, inner };
        fiber.check()?;
        Ok(fiber)
    }

    /// The same fiber in the basis given by the columns of a unimodular
    /// integer matrix `p` (with inverse `p_inv`): `J₀ ↦ P⁻¹J₀P`, `⟨,⟩ ↦ PᵀGP`.
    pub fn change_basis(&self, p: &[i64], p_inv: &[i64]) -> Result<Self> {
        let d = self.dim();
        if p.len() != d * d || p_inv.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: p.len().min(p_inv.len()),
            });
        }
        let id = int_matmul(p, p_inv, d);
        if (0..d * d).any(|k| id[k] != i64::from(k / d == k % d)) {
            return Err(Error::InvalidArgument("p_inv is not the inverse of p"));
        }
        let fiber = ModelFiber {
            n: self.n,
            kind: self.kind,
            j0: int_matmul(p_inv, &int_matmul(&self.j0, p, d), d),
            inner: int_matmul(&int_transpose(p, d), &int_matmul(&self.inner, p, d), d),
        };
        fiber.check()?;
        Ok(fiber)
    }

    fn check(&self) -> Result<()> {
        let d = self.dim();
        let (alpha, eps) = (self.kind.alpha() as i64, self.kind.epsilon() as i64);
        let jj = int_matmul(&self.j0, &self.j0, d);
        let jt_g_j = int_matmul(&int_transpose(&self.j0, d), &int_matmul(&self.inner, &self.j0, d), d);
        for k in 0..d * d {
            let delta = i64::from(k / d == k % d);
            if jj[k] != alpha * delta {
                return Err(Error::InvalidArgument("model J0 does not square to alpha*Id"));
            }
            if jt_g_j[k] != eps * self.inner[k] {
                return Err(Error::InvalidArgument("model inner product is not J0-compatible"));
            }
            if self.inner[k] != self.inner[(k % d) * d + k / d] {
                return Err(Error::InvalidArgument("model inner product is not symmetric"));
            }
        }
        if int_det(&self.inner, d) == 0 {
            return Err(Error::InvalidArgument("model inner product is degenerate"));
        }
        if self.kind == AEStructureKind::PRODUCT_RIEMANNIAN && (0..d).map(|i| self.j0[i * d + i]).sum::<i64>() != 0 {
            return Err(Error::InvalidArgument("model J0 must be trace-free"));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn kind(&self) -> AEStructureKind {
        self.kind
    }

    pub fn j0(&self) -> &[i64] {
        &self.j0
    }

    pub fn inner(&self) -> &[i64] {
        &self.inner
    }

    /// Index of `φ_ijk` among the unknowns.
    pub fn component(&self, i: usize, j: usize, k: usize) -> usize {
        let d = self.dim();
        (i * d + j) * d + k
    }

    pub fn n_components(&self) -> usize {
        let d = self.dim();
        d * d * d
    }
}

/// Extra relation imposed on top of `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubspaceExtra {
    None,
    /// `φ(x,y,z) + φ(y,x,z) = 0`: the nearly-Kähler part `W₁`.
    AlternatingFirstTwo,
    /// `φ(x,y,z) − φ(y,x,z) = 0`: the Codazzi condition read pointwise.
    SymmetricFirstTwo,
}

/// A subspace of `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubspaceQuery {
    pub extra: SubspaceExtra,
}

impl SubspaceQuery {
    pub const W: Self = Self {
        extra: SubspaceExtra::None,
    };
    pub const W1: Self = Self {
        extra: SubspaceExtra::AlternatingFirstTwo,
    };
    pub const CODAZZI: Self = Self {
        extra: SubspaceExtra::SymmetricFirstTwo,
    };
    pub const ALL: [Self; 3] = [Self::W, Self::W1, Self::CODAZZI];

    pub fn label(&self) -> &'static str {
        match self.extra {
            SubspaceExtra::None => "W",
            SubspaceExtra::AlternatingFirstTwo => "W1",
            SubspaceExtra::SymmetricFirstTwo => "codazzi",
        }
    }
}

impl fmt::Display for SubspaceQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Rows of `W`: for every basis triple `(i, j, k)`, first
/// `φ_ijk − αε·φ_ikj = 0`, then `J₀^m_j φ_imk + αε·J₀^m_k φ_ijm = 0`.
fn w_constraints(fiber: &ModelFiber) -> LinearConstraintSystem {
    let d = fiber.dim();
    let ae = fiber.kind.product_f();
    let j0 = |m: usize, j: usize| fiber.j0[m * d + j] as f64;
    let mut sys = LinearConstraintSystem::new(fiber.n_components());
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                sys.push_row([(fiber.component(i, j, k), 1.0), (fiber.component(i, k, j), -ae)]);
            }
        }
    }
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let lhs = (0..d).map(|m| (fiber.component(i, m, k), j0(m, j)));
                let rhs = (0..d).map(|m| (fiber.component(i, j, m), ae * j0(m, k)));
                sys.push_row(lhs.chain(rhs));
            }
        }
    }
    sys
}

/// Constraint system whose null space is the queried subspace.
pub fn build_constraints(fiber: &ModelFiber, q: SubspaceQuery) -> Result<LinearConstraintSystem> {
    if fiber.n > MAX_HALF_DIM {
        return Err(Error::UnsupportedDimension { n: fiber.n });
    }
    let d = fiber.dim();
    let mut sys = w_constraints(fiber);
    let sign = match q.extra {
        SubspaceExtra::None => return Ok(sys),
        SubspaceExtra::AlternatingFirstTwo => 1.0,
        SubspaceExtra::SymmetricFirstTwo => -1.0,
    };
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                sys.push_row([(fiber.component(i, j, k), 1.0), (fiber.component(j, i, k), sign)]);
            }
        }
    }
    Ok(sys)
}

/// `W` plus `φ(x, x, z) = 0` evaluated at `x ∈ {e_i} ∪ {e_i + e_j}`.
fn polarized_w1_constraints(fiber: &ModelFiber) -> LinearConstraintSystem {
    let d = fiber.dim();
    let mut sys = w_constraints(fiber);
    for i in 0..d {
        for j in i..d {
            let mut x = vec![0.0; d];
            x[i] += 1.0;
            if j != i {
                x[j] += 1.0;
            }
            for k in 0..d {
                let mut row = Vec::new();
                for a in 0..d {
                    for b in 0..d {
                        let c = x[a] * x[b];
                        if c != 0.0 {
                            row.push((fiber.component(a, b, k), c));
                        }
                    }
                }
                sys.push_row(row);
            }
        }
    }
    sys
}

fn checked_null_space(sys: &LinearConstraintSystem) -> Result<NullSpace> {
    let ns = null_space(sys, NULL_SPACE_TOL)?;
    let exact = sys.n_unknowns() - exact_rank(sys)?;
    if exact != ns.dimension {
        return Err(Error::RankDisagreement {
            numeric: ns.dimension,
            exact,
        });
    }
    Ok(ns)
}

/// Orthonormal basis of the queried subspace, dimension cross-checked
/// against exact integer elimination.
pub fn subspace_basis(fiber: &ModelFiber, q: SubspaceQuery) -> Result<NullSpace> {
    checked_null_space(&build_constraints(fiber, q)?)
}

/// Dimension of the queried subspace; numeric and exact ranks must agree.
pub fn subspace_dimension(fiber: &ModelFiber, q: SubspaceQuery) -> Result<usize> {
    subspace_basis(fiber, q).map(|ns| ns.dimension)
}

/// Whether `{φ ∈ W : φ(x,x,y) = 0}` and `{φ ∈ W : φ(x,y,z) + φ(y,x,z) = 0}`
/// coincide: equal dimension and each basis satisfies the other's relations.
pub fn equivalent_w1_definitions(fiber: &ModelFiber) -> Result<bool> {
    let polarized = polarized_w1_constraints(fiber);
    let alternating = build_constraints(fiber, SubspaceQuery::W1)?;
    let a = checked_null_space(&polarized)?;
    let b = checked_null_space(&alternating)?;
    if a.dimension != b.dimension {
        return Ok(false);
    }
    let a_in_b = a.basis.iter().all(|v| alternating.max_residual(v) < NULL_SPACE_TOL);
    let b_in_a = b.basis.iter().all(|v| polarized.max_residual(v) < NULL_SPACE_TOL);
    Ok(a_in_b && b_in_a)
}

/// One row of the dimension table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionRow {
    pub kind: AEStructureKind,
    pub n: usize,
    pub query: SubspaceQuery,
    pub dimension: usize,
}

/// Dimensions of `W`, `W₁` and the Codazzi subspace for all four kinds and
/// `n = 1..=3`.
pub fn dimension_table() -> Result<Vec<DimensionRow>> {
    let mut rows = Vec::new();
    for kind in AEStructureKind::ALL {
        for n in 1..=MAX_HALF_DIM {
            let fiber = ModelFiber::standard(kind, n)?;
            for query in SubspaceQuery::ALL {
                rows.push(DimensionRow {
                    kind,
                    n,
                    query,
                    dimension: subspace_dimension(&fiber, query)?,
                });
            }
        }
    }
    Ok(rows)
}

/// Evaluates a component vector as the trilinear form `φ(x, y, z)`.
pub fn evaluate_form(fiber: &ModelFiber, phi: &[f64], x: &[f64], y: &[f64], z: &[f64]) -> f64 {
    let d = fiber.dim();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                s += phi[fiber.component(i, j, k)] * x[i] * y[j] * z[k];
            }
        }
    }
    s
}

/// `J₀ x`.
pub fn apply_j0(fiber: &ModelFiber, x: &[f64]) -> Vec<f64> {
    let d = fiber.dim();
    (0..d)
        .map(|m| (0..d).map(|j| fiber.j0[m * d + j] as f64 * x[j]).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_fibers_are_valid() {
        for kind in AEStructureKind::ALL {
            for n in 1..=3 {
                ModelFiber::standard(kind, n).unwrap();
            }
        }
        assert_eq!(
            ModelFiber::standard(AEStructureKind::NORDEN, 4),
            Err(Error::UnsupportedDimension { n: 4 })
        );
    }

    #[test]
    fn hermitian_w_has_sixteen_rows_in_dimension_two() {
        let fiber = ModelFiber::standard(AEStructureKind::HERMITIAN, 1).unwrap();
        let sys = build_constraints(&fiber, SubspaceQuery::W).unwrap();
        assert_eq!(sys.rows().len(), 16);
        assert_eq!(sys.n_unknowns(), 8);
    }

    #[test]
    fn product_w1_collapses() {
        let fiber = ModelFiber::standard(AEStructureKind::PRODUCT_RIEMANNIAN, 1).unwrap();
        assert_eq!(subspace_dimension(&fiber, SubspaceQuery::W1).unwrap(), 0);
    }

    #[test]
    fn slot_action_convention() {
        // φ(x, y, z) = φ_ijk x^i y^j z^k, so φ(x, J₀y, z) must equal
        // Σ J₀^m_j φ_imk x^i y^j z^k
        let fiber = ModelFiber::standard(AEStructureKind::NORDEN, 2).unwrap();
        let ns = subspace_basis(&fiber, SubspaceQuery::W).unwrap();
        assert!(ns.dimension > 0);
        let x = [0.3, -0.7, 0.2, 0.9];
        let y = [1.0, 0.4, -0.5, 0.1];
        let z = [-0.2, 0.6, 0.8, -0.3];
        for phi in &ns.basis {
            let lhs = evaluate_form(&fiber, phi, &x, &apply_j0(&fiber, &y), &z);
            let rhs = evaluate_form(&fiber, phi, &x, &y, &apply_j0(&fiber, &z));
            assert!((lhs + fiber.kind().product_f() * rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn change_basis_rejects_wrong_inverse() {
        let fiber = ModelFiber::standard(AEStructureKind::HERMITIAN, 1).unwrap();
        assert!(fiber.change_basis(&[1, 1, 0, 1], &[1, 1, 0, 1]).is_err());
        let moved = fiber.change_basis(&[1, 1, 0, 1], &[1, -1, 0, 1]).unwrap();
        assert_ne!(moved.j0(), fiber.j0());
    }
}
