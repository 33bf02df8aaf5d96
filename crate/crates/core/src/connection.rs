//! Levi-Civita connection and the tensors derived from it.
//!
//! Index conventions (all slots stored in the order written):
//!
//! * `Γ^k_ij` with `∇_{∂_i} ∂_j = Γ^k_ij ∂_k`, slots `(k, i, j)`;
//! * `(∇_k J)^i_j`, slots `(k, i, j)`, so `((∇_X J)Y)^i = X^k Y^j (∇_k J)^i_j`;
//! * `T^k_ij = T(∂_i, ∂_j)^k` and `N^k_ij = N_J(∂_i, ∂_j)^k`, slots `(k, i, j)`.
//!
//! Vector arguments in the identity checks are constant-coefficient
//! combinations of coordinate fields; every identity checked is tensorial,
//! so this loses nothing.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Lu, DET_TOL};
use crate::manifold::{eval_with_derivatives, AEStructureKind, ChartedManifold, Jet};
use crate::tensor::{TensorValue, Variance};

/// Agreement required between the three torsion formulas.
pub const TORSION_AGREEMENT_TOL: f64 = 1e-9;
/// Agreement required between the two Nijenhuis computations and the
/// torsion relation.
pub const NIJENHUIS_AGREEMENT_TOL: f64 = 1e-8;

const UPPER_LOWER_LOWER: [Variance; 3] = [Variance::Upper, Variance::Lower, Variance::Lower];
const NABLA_J_VARIANCE: [Variance; 3] = [Variance::Lower, Variance::Upper, Variance::Lower];

/// Connection coefficients `Γ^k_ij` at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionCoefficients {
    pub gamma: TensorValue,
}

impl ConnectionCoefficients {
    fn dim(&self) -> usize {
        self.gamma.dims()[0]
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma.get(&[k, i, j])
    }

    /// `max |Γ^k_ij − Γ^k_ji|`.
    pub fn torsion_free_residual(&self) -> f64 {
        let d = self.dim();
        let mut r = 0.0f64;
        for k in 0..d {
            for i in 0..d {
                for j in 0..d {
                    r = r.max((self.get(k, i, j) - self.get(k, j, i)).abs());
                }
            }
        }
        r
    }

    /// Torsion `T^k_ij = Γ^k_ij − Γ^k_ji`.
    pub fn torsion(&self) -> TensorValue {
        let d = self.dim();
        TensorValue::from_fn(&[d, d, d], &UPPER_LOWER_LOWER, |ix| {
            self.get(ix[0], ix[1], ix[2]) - self.get(ix[0], ix[2], ix[1])
        })
    }

    /// `(∇_k g)_ij = ∂_k g_ij − Γ^l_ki g_lj − Γ^l_kj g_il`, slots `(k, i, j)`.
    pub fn covariant_metric_derivative(&self, jet: &Jet) -> TensorValue {
        covariant_form_derivative(self, &jet.g, &jet.dg)
    }

    /// `max |(∇_k g)_ij|`.
    pub fn metric_compatibility_residual(&self, jet: &Jet) -> f64 {
        self.covariant_metric_derivative(jet).max_abs()
    }

    /// `(∇_k J)^i_j = ∂_k J^i_j + Γ^i_kl J^l_j − Γ^l_kj J^i_l`.
    pub fn covariant_structure_derivative(&self, jet: &Jet) -> TensorValue {
        let d = self.dim();
        let j = |a: usize, b: usize| jet.j.get(&[a, b]);
        TensorValue::from_fn(&[d, d, d], &NABLA_J_VARIANCE, |ix| {
            let (k, i, jj) = (ix[0], ix[1], ix[2]);
            let mut v = jet.dj.get(&[k, i, jj]);
            for l in 0..d {
                v += self.get(i, k, l) * j(l, jj) - self.get(l, k, jj) * j(i, l);
            }
            v
        })
    }
}

/// `(∇_k h)_ij` for a covariant 2-tensor with components `h` and partials `dh` (slots `(k,i,j)`).
fn covariant_form_derivative(
    gamma: &ConnectionCoefficients,
    h: &TensorValue,
    dh: &TensorValue,
) -> TensorValue {
    let d = gamma.dim();
    TensorValue::from_fn(&[d, d, d], &[Variance::Lower; 3], |ix| {
        let (k, i, j) = (ix[0], ix[1], ix[2]);
        let mut v = dh.get(&[k, i, j]);
        for l in 0..d {
            v -= gamma.get(l, k, i) * h.get(&[l, j]) + gamma.get(l, k, j) * h.get(&[i, l]);
        }
        v
    })
}

/// Levi-Civita coefficients from the Koszul formula
/// `Γ^k_ij = ½ g^{kl}(∂_i g_lj + ∂_j g_il − ∂_l g_ij)`.
pub fn christoffel_from_jet(jet: &Jet) -> Result<ConnectionCoefficients> {
    let d = jet.g.dims()[0];
    let lu = Lu::factor(jet.g.data(), d).map_err(|_| Error::NearSingularMetric {
        point: jet.point.clone(),
        det: 0.0,
    })?;
    if lu.det().abs() <= DET_TOL {
        return Err(Error::NearSingularMetric {
            point: jet.point.clone(),
            det: lu.det(),
        });
    }
    let dg = |k: usize, i: usize, j: usize| jet.dg.get(&[k, i, j]);
    let mut gamma = TensorValue::zeros(&[d, d, d], &UPPER_LOWER_LOWER);
    let mut rhs = vec![0.0; d];
    for i in 0..d {
        for j in 0..d {
            for (l, r) in rhs.iter_mut().enumerate() {
                *r = 0.5 * (dg(i, l, j) + dg(j, i, l) - dg(l, i, j));
            }
            for (k, v) in lu.solve(&rhs).into_iter().enumerate() {
                gamma.set(&[k, i, j], v);
            }
        }
    }
    Ok(ConnectionCoefficients { gamma })
}

/// Levi-Civita connection of `m` at `p`.
pub fn christoffel(m: &ChartedManifold, p: &[f64]) -> Result<ConnectionCoefficients> {
    christoffel_from_jet(&eval_with_derivatives(m, p)?)
}

/// `∇^g J` at `p`, slots `(k, i, j)`.
pub fn nabla_j(m: &ChartedManifold, p: &[f64]) -> Result<TensorValue> {
    let jet = eval_with_derivatives(m, p)?;
    Ok(christoffel_from_jet(&jet)?.covariant_structure_derivative(&jet))
}

/// The first canonical connection together with its parallelism residuals.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstCanonical {
    pub coefficients: ConnectionCoefficients,
    /// `max |∇⁰J|`
    pub parallel_j_residual: f64,
    /// `max |∇⁰g|`
    pub parallel_g_residual: f64,
}

/// `Γ⁰^k_ij = Γ^k_ij + (−α/2)(∇_i J)^k_l J^l_j`.
pub fn first_canonical_from(
    kind: AEStructureKind,
    jet: &Jet,
    levi_civita: &ConnectionCoefficients,
    nabla_j: &TensorValue,
) -> FirstCanonical {
    let d = levi_civita.dim();
    let half = -kind.alpha_f() / 2.0;
    let gamma = TensorValue::from_fn(&[d, d, d], &UPPER_LOWER_LOWER, |ix| {
        let (k, i, j) = (ix[0], ix[1], ix[2]);
        let corr: f64 = (0..d)
            .map(|l| nabla_j.get(&[i, k, l]) * jet.j.get(&[l, j]))
            .sum();
        levi_civita.get(k, i, j) + half * corr
    });
    let coefficients = ConnectionCoefficients { gamma };
    FirstCanonical {
        parallel_j_residual: coefficients.covariant_structure_derivative(jet).max_abs(),
        parallel_g_residual: coefficients.metric_compatibility_residual(jet),
        coefficients,
    }
}

pub fn first_canonical(m: &ChartedManifold, p: &[f64]) -> Result<FirstCanonical> {
    let jet = eval_with_derivatives(m, p)?;
    let lc = christoffel_from_jet(&jet)?;
    let nj = lc.covariant_structure_derivative(&jet);
    Ok(first_canonical_from(m.kind(), &jet, &lc, &nj))
}

/// `T⁰(X,Y) = (−α/2)((∇_X J)JY − (∇_Y J)JX)`.
pub fn torsion_from_nabla_j(kind: AEStructureKind, j: &TensorValue, nabla_j: &TensorValue) -> TensorValue {
    let d = j.dims()[0];
    let half = -kind.alpha_f() / 2.0;
    TensorValue::from_fn(&[d, d, d], &UPPER_LOWER_LOWER, |ix| {
        let (k, a, b) = (ix[0], ix[1], ix[2]);
        let v: f64 = (0..d)
            .map(|l| nabla_j.get(&[a, k, l]) * j.get(&[l, b]) - nabla_j.get(&[b, k, l]) * j.get(&[l, a]))
            .sum();
        half * v
    })
}

/// `T⁰(X,Y) = (α/2) J((∇_X J)Y − (∇_Y J)X)`.
pub fn torsion_from_codazzi(kind: AEStructureKind, j: &TensorValue, nabla_j: &TensorValue) -> TensorValue {
    let d = j.dims()[0];
    let codazzi = codazzi_tensor(nabla_j);
    let half = kind.alpha_f() / 2.0;
    TensorValue::from_fn(&[d, d, d], &UPPER_LOWER_LOWER, |ix| {
        let (k, a, b) = (ix[0], ix[1], ix[2]);
        half * (0..d).map(|m| j.get(&[k, m]) * codazzi.get(&[m, a, b])).sum::<f64>()
    })
}

/// `C(X,Y) = (∇_X J)Y − (∇_Y J)X`, slots `(k, i, j)`.
pub fn codazzi_tensor(nabla_j: &TensorValue) -> TensorValue {
    let d = nabla_j.dims()[0];
    TensorValue::from_fn(&[d, d, d], &UPPER_LOWER_LOWER, |ix| {
        let (k, i, j) = (ix[0], ix[1], ix[2]);
        nabla_j.get(&[i, k, j]) - nabla_j.get(&[j, k, i])
    })
}

/// `S(X,Y) = (∇_X J)Y + (∇_Y J)X`, slots `(k, i, j)`.
pub fn nearly_tensor(nabla_j: &TensorValue) -> TensorValue {
    let d = nabla_j.dims()[0];
    TensorValue::from_fn(&[d, d, d], &UPPER_LOWER_LOWER, |ix| {
        let (k, i, j) = (ix[0], ix[1], ix[2]);
        nabla_j.get(&[i, k, j]) + nabla_j.get(&[j, k, i])
    })
}

/// Torsion of the first canonical connection, computed three ways.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionComputation {
    /// Antisymmetrization of `Γ⁰`.
    pub from_coefficients: TensorValue,
    /// From `(∇_X J)JY − (∇_Y J)JX`.
    pub from_nabla_j: TensorValue,
    /// From `J((∇_X J)Y − (∇_Y J)X)`.
    pub from_codazzi: TensorValue,
    /// Largest pairwise disagreement.
    pub agreement: f64,
}

impl TorsionComputation {
    pub fn new(kind: AEStructureKind, jet: &Jet, first: &FirstCanonical, nabla_j: &TensorValue) -> Self {
        let a = first.coefficients.torsion();
        let b = torsion_from_nabla_j(kind, &jet.j, nabla_j);
        let c = torsion_from_codazzi(kind, &jet.j, nabla_j);
        let agreement = a.max_abs_diff(&b).max(a.max_abs_diff(&c)).max(b.max_abs_diff(&c));
        TorsionComputation {
            from_coefficients: a,
            from_nabla_j: b,
            from_codazzi: c,
            agreement,
        }
    }

    pub fn check(self) -> Result<TensorValue> {
        if self.agreement < TORSION_AGREEMENT_TOL {
            Ok(self.from_coefficients)
        } else {
            Err(Error::TorsionFormulaMismatch {
                residual: self.agreement,
            })
        }
    }
}

/// `T⁰` at `p`; fails with [`Error::TorsionFormulaMismatch`] if the three
/// formulas disagree beyond 1e-9.
pub fn torsion0(m: &ChartedManifold, p: &[f64]) -> Result<TensorValue> {
    LocalGeometry::at(m, p).map(|g| g.torsion0)
}

/// `N_J` from `∇J`:
/// `(∇_X J)JY + (∇_{JX} J)Y − (∇_Y J)JX − (∇_{JY} J)X`.
pub fn nijenhuis_from_nabla_j(j: &TensorValue, nabla_j: &TensorValue) -> TensorValue {
    let d = j.dims()[0];
    TensorValue::from_fn(&[d, d, d], &UPPER_LOWER_LOWER, |ix| {
        let (k, a, b) = (ix[0], ix[1], ix[2]);
        (0..d)
            .map(|l| {
                nabla_j.get(&[a, k, l]) * j.get(&[l, b]) + j.get(&[l, a]) * nabla_j.get(&[l, k, b])
                    - nabla_j.get(&[b, k, l]) * j.get(&[l, a])
                    - j.get(&[l, b]) * nabla_j.get(&[l, k, a])
            })
            .sum()
    })
}

/// `N_J` from brackets of coordinate fields, using only `∂J`:
/// `N(X,Y) = J²[X,Y] + [JX,JY] − J[JX,Y] − J[X,JY]`.
pub fn nijenhuis_from_brackets(j: &TensorValue, dj: &TensorValue) -> TensorValue {
    let d = j.dims()[0];
    TensorValue::from_fn(&[d, d, d], &UPPER_LOWER_LOWER, |ix| {
        let (k, a, b) = (ix[0], ix[1], ix[2]);
        (0..d)
            .map(|m| {
                j.get(&[m, a]) * dj.get(&[m, k, b]) - j.get(&[m, b]) * dj.get(&[m, k, a])
                    + j.get(&[k, m]) * (dj.get(&[b, m, a]) - dj.get(&[a, m, b]))
            })
            .sum()
    })
}

/// `max |½N_J(X,Y) + T⁰(JX,JY) + αT⁰(X,Y)|`.
pub fn torsion_relation_residual(
    kind: AEStructureKind,
    j: &TensorValue,
    torsion: &TensorValue,
    nijenhuis: &TensorValue,
) -> f64 {
    let rel = integrability_torsion_form(kind, j, torsion);
    let d = j.dims()[0];
    let mut r = 0.0f64;
    for k in 0..d {
        for a in 0..d {
            for b in 0..d {
                r = r.max((0.5 * nijenhuis.get(&[k, a, b]) + rel.get(&[k, a, b])).abs());
            }
        }
    }
    r
}

/// `T⁰(JX,JY) + α·T⁰(X,Y)`, slots `(k, i, j)`.
pub fn integrability_torsion_form(kind: AEStructureKind, j: &TensorValue, torsion: &TensorValue) -> TensorValue {
    let d = j.dims()[0];
    let alpha = kind.alpha_f();
    TensorValue::from_fn(&[d, d, d], &UPPER_LOWER_LOWER, |ix| {
        let (k, a, b) = (ix[0], ix[1], ix[2]);
        let mut v = alpha * torsion.get(&[k, a, b]);
        for p in 0..d {
            let jpa = j.get(&[p, a]);
            if jpa == 0.0 {
                continue;
            }
            for q in 0..d {
                v += jpa * j.get(&[q, b]) * torsion.get(&[k, p, q]);
            }
        }
        v
    })
}

/// Nijenhuis tensor at `p`; fails with [`Error::NijenhuisFormulaMismatch`]
/// if the two computations or the torsion relation disagree beyond 1e-8.
pub fn nijenhuis(m: &ChartedManifold, p: &[f64]) -> Result<TensorValue> {
    LocalGeometry::at(m, p).map(|g| g.nijenhuis)
}

/// `(r_J, r_g)`: ∞-norms of `(∇_X J)Y − (∇_Y J)X` and
/// `(∇_Z g)(X,Y) − (∇_X g)(Z,Y)` for the Levi-Civita connection.
pub fn codazzi_coupled_residuals(m: &ChartedManifold, p: &[f64]) -> Result<(f64, f64)> {
    let jet = eval_with_derivatives(m, p)?;
    let lc = christoffel_from_jet(&jet)?;
    let nj = lc.covariant_structure_derivative(&jet);
    Ok(codazzi_coupled_from(&jet, &lc, &nj))
}

fn codazzi_coupled_from(jet: &Jet, lc: &ConnectionCoefficients, nabla_j: &TensorValue) -> (f64, f64) {
    let r_j = codazzi_tensor(nabla_j).max_abs();
    let ng = lc.covariant_metric_derivative(jet);
    let d = lc.dim();
    let mut r_g = 0.0f64;
    for z in 0..d {
        for x in 0..d {
            for y in 0..d {
                r_g = r_g.max((ng.get(&[z, x, y]) - ng.get(&[x, z, y])).abs());
            }
        }
    }
    (r_j, r_g)
}

/// Everything the class predicates need at one point, computed once.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalGeometry {
    pub kind: AEStructureKind,
    pub jet: Jet,
    pub levi_civita: ConnectionCoefficients,
    pub nabla_j: TensorValue,
    pub first_canonical: FirstCanonical,
    pub torsion0: TensorValue,
    pub nijenhuis: TensorValue,
    /// Three-way torsion disagreement.
    pub torsion_agreement: f64,
    /// Disagreement between the two Nijenhuis computations.
    pub nijenhuis_agreement: f64,
    /// `max |½N + T⁰(J·,J·) + αT⁰|`.
    pub torsion_relation: f64,
}

impl LocalGeometry {
    pub fn at(m: &ChartedManifold, p: &[f64]) -> Result<Self> {
        let jet = eval_with_derivatives(m, p)?;
        Self::from_jet(m.kind(), jet)
    }

    pub fn from_jet(kind: AEStructureKind, jet: Jet) -> Result<Self> {
        let levi_civita = christoffel_from_jet(&jet)?;
        let nabla_j = levi_civita.covariant_structure_derivative(&jet);
        let first_canonical = first_canonical_from(kind, &jet, &levi_civita, &nabla_j);
        let torsion = TorsionComputation::new(kind, &jet, &first_canonical, &nabla_j);
        let torsion_agreement = torsion.agreement;
        let torsion0 = torsion.check()?;
        let nijenhuis = nijenhuis_from_nabla_j(&jet.j, &nabla_j);
        let bracket = nijenhuis_from_brackets(&jet.j, &jet.dj);
        let nijenhuis_agreement = nijenhuis.max_abs_diff(&bracket);
        let torsion_relation = torsion_relation_residual(kind, &jet.j, &torsion0, &nijenhuis);
        let worst = nijenhuis_agreement.max(torsion_relation);
        if !(worst < NIJENHUIS_AGREEMENT_TOL) {
            return Err(Error::NijenhuisFormulaMismatch { residual: worst });
        }
        Ok(LocalGeometry {
            kind,
            jet,
            levi_civita,
            nabla_j,
            first_canonical,
            torsion0,
            nijenhuis,
            torsion_agreement,
            nijenhuis_agreement,
            torsion_relation,
        })
    }

    pub fn dim(&self) -> usize {
        self.jet.g.dims()[0]
    }

    pub fn codazzi_coupled(&self) -> (f64, f64) {
        codazzi_coupled_from(&self.jet, &self.levi_civita, &self.nabla_j)
    }

    /// `JX`.
    pub fn apply_j(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|i| (0..d).map(|j| self.jet.j.get(&[i, j]) * x[j]).sum())
            .collect()
    }

    /// `g(X, Y)`.
    pub fn g(&self, x: &[f64], y: &[f64]) -> f64 {
        let d = self.dim();
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                s += self.jet.g.get(&[i, j]) * x[i] * y[j];
            }
        }
        s
    }

    /// `(∇_X J)Y`.
    pub fn nabla_j_apply(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let mut s = 0.0;
                for k in 0..d {
                    if x[k] == 0.0 {
                        continue;
                    }
                    for j in 0..d {
                        s += x[k] * y[j] * self.nabla_j.get(&[k, i, j]);
                    }
                }
                s
            })
            .collect()
    }

    /// `T⁰(X, Y)`.
    pub fn torsion_apply(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|k| {
                let mut s = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        s += self.torsion0.get(&[k, i, j]) * x[i] * y[j];
                    }
                }
                s
            })
            .collect()
    }

    /// `(∇_k g̃)_ij` for the twin metric `g̃(X,Y) = g(JX,Y)`, computed from
    /// `∂g`, `∂J` and `Γ` without going through `∇J`.
    pub fn twin_metric_derivative(&self) -> TensorValue {
        let d = self.dim();
        let (g, j, dg, dj) = (&self.jet.g, &self.jet.j, &self.jet.dg, &self.jet.dj);
        let twin = TensorValue::from_fn(&[d, d], &[Variance::Lower; 2], |ix| {
            (0..d).map(|a| j.get(&[a, ix[0]]) * g.get(&[a, ix[1]])).sum()
        });
        let dtwin = TensorValue::from_fn(&[d, d, d], &[Variance::Lower; 3], |ix| {
            let (k, i, jj) = (ix[0], ix[1], ix[2]);
            (0..d)
                .map(|a| dj.get(&[k, a, i]) * g.get(&[a, jj]) + j.get(&[a, i]) * dg.get(&[k, a, jj]))
                .sum()
        });
        covariant_form_derivative(&self.levi_civita, &twin, &dtwin)
    }
}

/// Residuals of the pointwise identities satisfied by every
/// `(α, ε)`-structure, maximized over points and vector triples.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    /// `g(JX,Y) − αε·g(X,JY)`
    pub alternative_isometry: f64,
    /// `(∇_X J)JY + J(∇_X J)Y`
    pub nabla_j_anticommutes: f64,
    /// `g((∇_X J)Y,Z) − αε·g((∇_X J)Z,Y)`
    pub nabla_j_symmetry: f64,
    /// `g((∇_X J)JY,Z) + αε·g((∇_X J)Y,JZ)`
    pub nabla_j_j_symmetry: f64,
    /// `(∇_X g̃)(Y,Z) − (∇_Y g̃)(X,Z) − g((∇_X J)Y − (∇_Y J)X, Z)`
    pub twin_codazzi_equivalence: f64,
    /// `|Γ^k_ij − Γ^k_ji|` for Levi-Civita
    pub levi_civita_torsion_free: f64,
    /// `|∇g|` for Levi-Civita
    pub levi_civita_metric: f64,
    /// `|∇⁰J|`
    pub canonical_parallel_j: f64,
    /// `|∇⁰g|`
    pub canonical_parallel_g: f64,
    /// Three-way torsion disagreement
    pub torsion_agreement: f64,
    /// Two-way Nijenhuis disagreement
    pub nijenhuis_agreement: f64,
    /// `½N_J + T⁰(J·,J·) + αT⁰`
    pub torsion_nijenhuis_relation: f64,
    /// `ω(X,Y) + ω(Y,X)`; only when `αε = −1`
    pub fundamental_form_skew: Option<f64>,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        [
            self.alternative_isometry,
            self.nabla_j_anticommutes,
            self.nabla_j_symmetry,
            self.nabla_j_j_symmetry,
            self.twin_codazzi_equivalence,
            self.levi_civita_torsion_free,
            self.levi_civita_metric,
            self.canonical_parallel_j,
            self.canonical_parallel_g,
            self.torsion_agreement,
            self.nijenhuis_agreement,
            self.torsion_nijenhuis_relation,
            self.fundamental_form_skew.unwrap_or(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn merge(&mut self, o: &IdentityResiduals) {
        self.alternative_isometry = self.alternative_isometry.max(o.alternative_isometry);
        self.nabla_j_anticommutes = self.nabla_j_anticommutes.max(o.nabla_j_anticommutes);
        self.nabla_j_symmetry = self.nabla_j_symmetry.max(o.nabla_j_symmetry);
        self.nabla_j_j_symmetry = self.nabla_j_j_symmetry.max(o.nabla_j_j_symmetry);
        self.twin_codazzi_equivalence = self.twin_codazzi_equivalence.max(o.twin_codazzi_equivalence);
        self.levi_civita_torsion_free = self.levi_civita_torsion_free.max(o.levi_civita_torsion_free);
        self.levi_civita_metric = self.levi_civita_metric.max(o.levi_civita_metric);
        self.canonical_parallel_j = self.canonical_parallel_j.max(o.canonical_parallel_j);
        self.canonical_parallel_g = self.canonical_parallel_g.max(o.canonical_parallel_g);
        self.torsion_agreement = self.torsion_agreement.max(o.torsion_agreement);
        self.nijenhuis_agreement = self.nijenhuis_agreement.max(o.nijenhuis_agreement);
        self.torsion_nijenhuis_relation = self.torsion_nijenhuis_relation.max(o.torsion_nijenhuis_relation);
        self.fundamental_form_skew = match (self.fundamental_form_skew, o.fundamental_form_skew) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }
}

fn max_abs_vec(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Identity residuals at one point over the given vector triples.
pub fn identity_residuals(geom: &LocalGeometry, triples: &[[Vec<f64>; 3]]) -> IdentityResiduals {
    let ae = geom.kind.product_f();
    let twin = geom.twin_metric_derivative();
    let d = geom.dim();
    let mut r = IdentityResiduals {
        levi_civita_torsion_free: geom.levi_civita.torsion_free_residual(),
        levi_civita_metric: geom.levi_civita.metric_compatibility_residual(&geom.jet),
        canonical_parallel_j: geom.first_canonical.parallel_j_residual,
        canonical_parallel_g: geom.first_canonical.parallel_g_residual,
        torsion_agreement: geom.torsion_agreement,
        nijenhuis_agreement: geom.nijenhuis_agreement,
        torsion_nijenhuis_relation: geom.torsion_relation,
        fundamental_form_skew: (geom.kind.product() < 0).then_some(0.0),
        ..Default::default()
    };
    let twin_apply = |x: &[f64], y: &[f64], z: &[f64]| {
        let mut s = 0.0;
        for k in 0..d {
            for i in 0..d {
                for j in 0..d {
                    s += twin.get(&[k, i, j]) * x[k] * y[i] * z[j];
                }
            }
        }
        s
    };
    for [x, y, z] in triples {
        let (jx, jy, jz) = (geom.apply_j(x), geom.apply_j(y), geom.apply_j(z));
        r.alternative_isometry = r
            .alternative_isometry
            .max((geom.g(&jx, y) - ae * geom.g(x, &jy)).abs());

        let nxy = geom.nabla_j_apply(x, y);
        let nx_jy = geom.nabla_j_apply(x, &jy);
        let j_nxy = geom.apply_j(&nxy);
        let anti: Vec<f64> = nx_jy.iter().zip(&j_nxy).map(|(a, b)| a + b).collect();
        r.nabla_j_anticommutes = r.nabla_j_anticommutes.max(max_abs_vec(&anti));

        let nxz = geom.nabla_j_apply(x, z);
        r.nabla_j_symmetry = r
            .nabla_j_symmetry
            .max((geom.g(&nxy, z) - ae * geom.g(&nxz, y)).abs());
        r.nabla_j_j_symmetry = r
            .nabla_j_j_symmetry
            .max((geom.g(&nx_jy, z) + ae * geom.g(&nxy, &jz)).abs());

        let nyx = geom.nabla_j_apply(y, x);
        let codazzi: Vec<f64> = nxy.iter().zip(&nyx).map(|(a, b)| a - b).collect();
        let lhs = twin_apply(x, y, z) - twin_apply(y, x, z);
        r.twin_codazzi_equivalence = r
            .twin_codazzi_equivalence
            .max((lhs - geom.g(&codazzi, z)).abs());

        if let Some(skew) = r.fundamental_form_skew.as_mut() {
            *skew = skew.max((geom.g(&jx, y) + geom.g(&jy, x)).abs());
        }
    }
    r
}

/// `max |(∇_X ω)(Y,Z) + (∇_Y ω)(X,Z)|` for `ω = g(J·,·)` over the triples.
pub fn fundamental_form_nearly_residual(geom: &LocalGeometry, triples: &[[Vec<f64>; 3]]) -> f64 {
    let omega = geom.twin_metric_derivative();
    let d = geom.dim();
    let eval = |x: &[f64], y: &[f64], z: &[f64]| {
        let mut s = 0.0;
        for k in 0..d {
            for i in 0..d {
                for j in 0..d {
                    s += omega.get(&[k, i, j]) * x[k] * y[i] * z[j];
                }
            }
        }
        s
    };
    triples
        .iter()
        .map(|[x, y, z]| (eval(x, y, z) + eval(y, x, z)).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::catalog::catalog;

    #[test]
    fn flat_entries_have_vanishing_connection() {
        for name in [
            "flat-kahler",
            "flat-para-kahler",
            "flat-anti-kahler",
            "flat-product-riemannian",
        ] {
            let m = catalog(name).unwrap();
            let geom = LocalGeometry::at(&m, &[0.3, -0.2]).unwrap();
            assert_eq!(geom.levi_civita.gamma.max_abs(), 0.0, "{name}");
            assert_eq!(geom.nabla_j.max_abs(), 0.0);
            assert_eq!(geom.first_canonical.coefficients.gamma.max_abs(), 0.0);
            assert_eq!(geom.torsion0.max_abs(), 0.0);
            assert_eq!(geom.nijenhuis.max_abs(), 0.0);
            assert_eq!(geom.codazzi_coupled(), (0.0, 0.0));
        }
    }

    #[test]
    fn torsion_is_antisymmetric() {
        let m = catalog("random-hermitian-13").unwrap();
        let geom = LocalGeometry::at(&m, &[0.1, 0.2, -0.3, 0.4]).unwrap();
        let t = &geom.torsion0;
        let n = &geom.nijenhuis;
        assert!(t.max_abs() > 1e-3);
        let swapped = t.permuted(&[0, 2, 1]);
        assert!(t.max_abs_diff(&swapped.scaled(-1.0)) < 1e-10);
        assert!(n.max_abs_diff(&n.permuted(&[0, 2, 1]).scaled(-1.0)) < 1e-10);
    }

    #[test]
    fn mismatch_is_detected() {
        let m = catalog("random-norden-42").unwrap();
        let jet = eval_with_derivatives(&m, &[0.1, 0.2]).unwrap();
        let lc = christoffel_from_jet(&jet).unwrap();
        let nj = lc.covariant_structure_derivative(&jet);
        let mut first = first_canonical_from(m.kind(), &jet, &lc, &nj);
        first.coefficients.gamma.data_mut()[1] += 1e-3;
        let tc = TorsionComputation::new(m.kind(), &jet, &first, &nj);
        assert!(matches!(tc.check(), Err(Error::TorsionFormulaMismatch { .. })));
    }
}
