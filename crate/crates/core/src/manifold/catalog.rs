//! Built-in example manifolds.
//!
//! | name | dim | construction |
//! |------|-----|--------------|
//! | `flat-kahler` | 2 | `J₀` rotation, `g = δ` |
//! | `flat-para-kahler` | 2 | `J = diag(1,-1)`, `g = dx⊗dy + dy⊗dx` |
//! | `flat-anti-kahler` | 2 | `J₀` rotation, `g = diag(1,-1)` |
//! | `flat-product-riemannian` | 2 | `J = diag(1,-1)`, `g = δ` |
//! | `s6-nearly-kahler` | 6 | round `S⁶`, octonionic `J`, stereographic chart |
//! | `pullback-integrable-<kind>` | 4 | `J = φ*J₀` for a quadratic diffeomorphism `φ`, `g` polarized from a fixed `h` |
//! | `random-<kind>-<seed>[-dim<N>]` | 2 or 4 | `J = A J₀ A⁻¹`, `g` polarized from a seeded `h` |
//!
//! Polarization: `g = h + ε·h(J·,J·)`, which satisfies `g(J·,J·) = ε·g` for
//! any `h` because `J² = ±Id`.
//!
//! Random entries default to dimension 2 when `αε = +1` and 4 when
//! `αε = -1` (every 2-dimensional almost Hermitian or para-Hermitian
//! manifold is Kähler type, so dimension 2 would be uninteresting there).

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AEStructureKind, ChartedManifold, Domain, StructureFields};
use crate::dual::{Dual, Scalar};
use crate::error::{Error, Result};
use crate::linalg::{determinant, inverse, matmul};
use crate::octonion::cross;

/// Perturbation magnitude for seeded structures.
const PERTURBATION: f64 = 0.1;
/// Retry budget for degenerate random metrics.
const MAX_ATTEMPTS: usize = 20;
/// `|det g|` floor on the check points of a random construction.
const MIN_RANDOM_DET: f64 = 1e-4;

/// Names of the fixed catalog entries plus the seeded entries used by the
/// acceptance runs.
pub fn standard_entries() -> Vec<String> {
    let mut names: Vec<String> = [
        "flat-kahler",
        "flat-para-kahler",
        "flat-anti-kahler",
        "flat-product-riemannian",
        "s6-nearly-kahler",
    ]
    .iter()
    .map(|s| String::from(*s))
    .collect();
    for k in AEStructureKind::ALL {
        names.push(format!("pullback-integrable-{}", k.name()));
    }
    names.extend(
        [
            "random-hermitian-13",
            "random-product-riemannian-7",
            "random-norden-42",
            "random-para-hermitian-5",
            "random-norden-3-dim4",
            "random-product-riemannian-11-dim4",
        ]
        .iter()
        .map(|s| String::from(*s)),
    );
    names
}

/// Looks up a catalog entry by name.
pub fn catalog(name: &str) -> Result<ChartedManifold> {
    let unknown = || Error::UnknownCatalogName(String::from(name));
    match name {
        "flat-kahler" => flat(name, AEStructureKind::HERMITIAN),
        "flat-para-kahler" => flat(name, AEStructureKind::PARA_HERMITIAN),
        "flat-anti-kahler" => flat(name, AEStructureKind::NORDEN),
        "flat-product-riemannian" => flat(name, AEStructureKind::PRODUCT_RIEMANNIAN),
        "s6-nearly-kahler" => s6(),
        _ => {
            if let Some(rest) = name.strip_prefix("pullback-integrable-") {
                let kind = AEStructureKind::from_name(rest).ok_or_else(unknown)?;
                pullback_integrable(name, kind)
            } else if let Some(rest) = name.strip_prefix("random-") {
                let (rest, dim) = match rest.rsplit_once("-dim") {
                    Some((head, d)) => (head, Some(d.parse::<usize>().map_err(|_| unknown())?)),
                    None => (rest, None),
                };
                let (kind_name, seed) = rest.rsplit_once('-').ok_or_else(unknown)?;
                let kind = AEStructureKind::from_name(kind_name).ok_or_else(unknown)?;
                let seed: u64 = seed.parse().map_err(|_| unknown())?;
                let dim = dim.unwrap_or(if kind.product() > 0 { 2 } else { 4 });
                if dim == 0 || dim % 2 != 0 || dim > 6 {
                    return Err(unknown());
                }
                random(name, kind, seed, dim)
            } else {
                Err(unknown())
            }
        }
    }
}

/// Constant model `(J₀, g₀)` on `R^{2n}`: `n` copies of the 2-dimensional
/// flat model of `kind`, block diagonal.
pub fn flat_model(kind: AEStructureKind, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (jb, gb): ([f64; 4], [f64; 4]) = match (kind.alpha(), kind.epsilon()) {
        (-1, 1) => ([0.0, -1.0, 1.0, 0.0], [1.0, 0.0, 0.0, 1.0]),
        (1, 1) => ([1.0, 0.0, 0.0, -1.0], [1.0, 0.0, 0.0, 1.0]),
        (-1, -1) => ([0.0, -1.0, 1.0, 0.0], [1.0, 0.0, 0.0, -1.0]),
        _ => ([1.0, 0.0, 0.0, -1.0], [0.0, 1.0, 1.0, 0.0]),
    };
    (block_diag(&jb, n), block_diag(&gb, n))
}

/// Base symmetric form `h₀` for polarization; its `J₀`-anti-invariant part
/// is large when `ε = -1` so that `g = h - h(J·,J·)` stays non-degenerate.
fn base_h(kind: AEStructureKind, n: usize) -> Vec<f64> {
    let hb: [f64; 4] = match (kind.alpha(), kind.epsilon()) {
        (-1, -1) => [2.0, 0.0, 0.0, 1.0],
        (1, -1) => [1.0, 0.5, 0.5, 1.0],
        _ => [1.0, 0.0, 0.0, 1.0],
    };
    block_diag(&hb, n)
}

fn block_diag(block: &[f64; 4], n: usize) -> Vec<f64> {
    let d = 2 * n;
    let mut m = vec![0.0; d * d];
    for b in 0..n {
        for r in 0..2 {
            for c in 0..2 {
                m[(2 * b + r) * d + 2 * b + c] = block[r * 2 + c];
            }
        }
    }
    m
}

fn constants(v: &[f64]) -> Vec<Dual> {
    v.iter().map(|&x| Dual::constant(x)).collect()
}

fn flat(name: &str, kind: AEStructureKind) -> Result<ChartedManifold> {
    let (j0, g0) = flat_model(kind, 1);
    ChartedManifold::from_fns(
        name,
        kind,
        Domain::cube(2, 1.0),
        move |_| constants(&g0),
        move |_| constants(&j0),
    )
}

/// `g = h + ε·Jᵀ h J` (row-major, `J^i_j = J[i*d+j]`).
fn polarize<S: Scalar>(h: &[S], j: &[S], d: usize, eps: f64) -> Vec<S> {
    let hj = matmul(h, j, d);
    let mut g = vec![S::zero(); d * d];
    for a in 0..d {
        for b in 0..d {
            let mut jthj = S::zero();
            for p in 0..d {
                jthj = jthj + j[p * d + a] * hj[p * d + b];
            }
            g[a * d + b] = h[a * d + b] + jthj * eps;
        }
    }
    g
}

struct SixSphere;

impl SixSphere {
    /// Point `σ(u)` of `S⁶ ⊂ R⁷` and the tangent vectors `∂σ/∂u_j`.
    fn frame(x: &[Dual]) -> ([Dual; 7], [[Dual; 7]; 6]) {
        let r2 = x.iter().fold(Dual::zero(), |acc, &v| acc + v * v);
        let s = r2 + 1.0;
        let inv = s.recip();
        let inv2 = inv * inv;
        let mut p = [Dual::zero(); 7];
        p[0] = (-r2 + 1.0) * inv;
        for k in 0..6 {
            p[k + 1] = x[k] * 2.0 * inv;
        }
        let mut t = [[Dual::zero(); 7]; 6];
        for (j, tj) in t.iter_mut().enumerate() {
            tj[0] = x[j] * inv2 * -4.0;
            for k in 0..6 {
                let mut c = x[k] * x[j] * inv2 * -4.0;
                if k == j {
                    c += inv * 2.0;
                }
                tj[k + 1] = c;
            }
        }
        (p, t)
    }
}

fn dot7(a: &[Dual; 7], b: &[Dual; 7]) -> Dual {
    a.iter().zip(b).fold(Dual::zero(), |acc, (&x, &y)| acc + x * y)
}

impl StructureFields for SixSphere {
    fn metric(&self, x: &[Dual]) -> Vec<Dual> {
        let (_, t) = Self::frame(x);
        let mut g = Vec::with_capacity(36);
        for ti in &t {
            for tj in &t {
                g.push(dot7(ti, tj));
            }
        }
        g
    }

    fn structure(&self, x: &[Dual]) -> Vec<Dual> {
        let (p, t) = Self::frame(x);
        let r2 = x.iter().fold(Dual::zero(), |acc, &v| acc + v * v);
        let s = r2 + 1.0;
        // |∂σ/∂u_j|² = 4 / (1 + |u|²)²
        let inv_lambda = s * s / 4.0;
        let images: Vec<[Dual; 7]> = t.iter().map(|tj| cross(&p, tj)).collect();
        let mut j = vec![Dual::zero(); 36];
        for (i, ti) in t.iter().enumerate() {
            for (c, img) in images.iter().enumerate() {
                j[i * 6 + c] = dot7(ti, img) * inv_lambda;
            }
        }
        j
    }
}

fn s6() -> Result<ChartedManifold> {
    ChartedManifold::new(
        "s6-nearly-kahler",
        AEStructureKind::HERMITIAN,
        Domain::Ball {
            center: vec![0.0; 6],
            radius: 2.0,
        },
        Arc::new(SixSphere),
    )
}

/// `J = Dφ⁻¹ J₀ Dφ` for `φ(x) = x + 0.1·q(x)`, `g = h + ε·h(J·,J·)`.
struct Pullback {
    kind: AEStructureKind,
    j0: Vec<f64>,
    h: Vec<f64>,
}

impl Pullback {
    /// Jacobian of φ₁ = x₁ + 0.1x₂², φ₂ = x₂ + 0.1x₃x₄, φ₃ = x₃ + 0.1x₁², φ₄ = x₄ + 0.1x₁x₂.
    fn jacobian(x: &[Dual]) -> Vec<Dual> {
        let c = PERTURBATION;
        let (o, z) = (Dual::one(), Dual::zero());
        vec![
            o, x[1] * (2.0 * c), z, z, //
            z, o, x[3] * c, x[2] * c, //
            x[0] * (2.0 * c), z, o, z, //
            x[1] * c, x[0] * c, z, o,
        ]
    }
}

impl StructureFields for Pullback {
    fn metric(&self, x: &[Dual]) -> Vec<Dual> {
        let j = self.structure(x);
        polarize(&constants(&self.h), &j, 4, self.kind.epsilon_f())
    }

    fn structure(&self, x: &[Dual]) -> Vec<Dual> {
        let dphi = Self::jacobian(x);
        let inv = inverse(&dphi, 4).expect("Dφ is invertible on the unit box");
        matmul(&inv, &matmul(&constants(&self.j0), &dphi, 4), 4)
    }
}

fn pullback_integrable(name: &str, kind: AEStructureKind) -> Result<ChartedManifold> {
    let (j0, _) = flat_model(kind, 2);
    // fixed symmetric perturbation, so that g is not the pullback of the flat metric
    let bump = [
        0.0, 0.3, 0.1, 0.2, //
        0.3, 0.4, 0.2, 0.1, //
        0.1, 0.2, -0.3, 0.3, //
        0.2, 0.1, 0.3, 0.2,
    ];
    let h: Vec<f64> = base_h(kind, 2)
        .iter()
        .zip(bump)
        .map(|(b, p)| b + 0.5 * PERTURBATION * p)
        .collect();
    ChartedManifold::new(name, kind, Domain::cube(4, 1.0), Arc::new(Pullback { kind, j0, h }))
}

/// Entry of a seeded degree-≤2 polynomial matrix: `(c₀ + c₁x_a + c₂x_bx_c)/(3d)`.
#[derive(Clone, Copy, Debug)]
struct PolyEntry {
    c: [f64; 3],
    a: usize,
    b: usize,
    e: usize,
}

impl PolyEntry {
    fn sample(rng: &mut ChaCha8Rng, d: usize) -> Self {
        PolyEntry {
            c: [
                rng.random_range(-1.0..=1.0),
                rng.random_range(-1.0..=1.0),
                rng.random_range(-1.0..=1.0),
            ],
            a: rng.random_range(0..d),
            b: rng.random_range(0..d),
            e: rng.random_range(0..d),
        }
    }

    fn eval(&self, x: &[Dual], d: usize) -> Dual {
        let v = x[self.a] * self.c[1] + x[self.b] * x[self.e] * self.c[2] + self.c[0];
        v / (3.0 * d as f64)
    }
}

struct RandomStructure {
    kind: AEStructureKind,
    d: usize,
    j0: Vec<f64>,
    h0: Vec<f64>,
    /// `A(x) = Id + 0.1·P(x)`
    p: Vec<PolyEntry>,
    /// `h(x) = h₀ + 0.1·S(x)`, upper triangle mirrored
    s: Vec<PolyEntry>,
}

impl RandomStructure {
    fn h(&self, x: &[Dual]) -> Vec<Dual> {
        let d = self.d;
        let mut h = constants(&self.h0);
        for a in 0..d {
            for b in a..d {
                let v = self.s[a * d + b].eval(x, d) * PERTURBATION;
                h[a * d + b] += v;
                if a != b {
                    h[b * d + a] += v;
                }
            }
        }
        h
    }
}

impl StructureFields for RandomStructure {
    fn metric(&self, x: &[Dual]) -> Vec<Dual> {
        let j = self.structure(x);
        polarize(&self.h(x), &j, self.d, self.kind.epsilon_f())
    }

    fn structure(&self, x: &[Dual]) -> Vec<Dual> {
        let d = self.d;
        let a: Vec<Dual> = (0..d * d)
            .map(|k| {
                let pert = self.p[k].eval(x, d) * PERTURBATION;
                if k / d == k % d {
                    pert + 1.0
                } else {
                    pert
                }
            })
            .collect();
        let a_inv = inverse(&a, d).expect("A(x) = Id + small perturbation is invertible");
        matmul(&a, &matmul(&constants(&self.j0), &a_inv, d), d)
    }
}

fn random(name: &str, kind: AEStructureKind, seed: u64, dim: usize) -> Result<ChartedManifold> {
    let n = dim / 2;
    let (j0, _) = flat_model(kind, n);
    let h0 = base_h(kind, n);
    let domain = Domain::cube(dim, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let fields = RandomStructure {
            kind,
            d: dim,
            j0: j0.clone(),
            h0: h0.clone(),
            p: (0..dim * dim).map(|_| PolyEntry::sample(&mut rng, dim)).collect(),
            s: (0..dim * dim).map(|_| PolyEntry::sample(&mut rng, dim)).collect(),
        };
        let m = ChartedManifold::new(name, kind, domain.clone(), Arc::new(fields))?;
        if metric_is_nondegenerate(&m, seed) {
            return Ok(m);
        }
    }
    Err(Error::DegenerateConstruction {
        name: String::from(name),
        attempts: MAX_ATTEMPTS,
    })
}

/// `|det g| ≥ MIN_RANDOM_DET` at the vertices of the inner 98% box and at
/// seeded interior points.
fn metric_is_nondegenerate(m: &ChartedManifold, seed: u64) -> bool {
    let d = m.dim();
    let mut points: Vec<Vec<f64>> = (0..1usize << d)
        .map(|mask| (0..d).map(|i| if mask >> i & 1 == 1 { 0.98 } else { -0.98 }).collect())
        .collect();
    points.extend(super::SamplePlan::new(seed ^ 0x5eed, 128, 0).points(m.domain()));
    points.iter().all(|p| match m.eval(p) {
        Ok((g, _)) => determinant(&g, d).abs() >= MIN_RANDOM_DET,
        Err(_) => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{eval_with_derivatives, validate_structure, SamplePlan};

    #[test]
    fn flat_entries_are_exact() {
        for name in [
            "flat-kahler",
            "flat-para-kahler",
            "flat-anti-kahler",
            "flat-product-riemannian",
        ] {
            let m = catalog(name).unwrap();
            let r = validate_structure(&m, &SamplePlan::new(1, 10, 1)).unwrap();
            assert!(r.valid, "{name}");
            assert_eq!(r.residuals.j_squared, 0.0);
            assert_eq!(r.residuals.isometry, 0.0);
            let jet = eval_with_derivatives(&m, &[0.2, -0.4]).unwrap();
            assert_eq!(jet.dg.max_abs(), 0.0);
            assert_eq!(jet.dj.max_abs(), 0.0);
        }
    }

    #[test]
    fn unknown_names() {
        for bad in [
            "flat-something",
            "pullback-integrable-kahler",
            "random-norden",
            "random-norden-x",
            "random-foo-3",
            "random-norden-3-dim5",
        ] {
            assert!(matches!(catalog(bad), Err(Error::UnknownCatalogName(_))), "{bad}");
        }
    }

    #[test]
    fn random_entries_have_requested_dimension() {
        assert_eq!(catalog("random-norden-42").unwrap().dim(), 2);
        assert_eq!(catalog("random-hermitian-13").unwrap().dim(), 4);
        assert_eq!(catalog("random-norden-42-dim4").unwrap().dim(), 4);
    }

    #[test]
    fn s6_at_origin() {
        let m = catalog("s6-nearly-kahler").unwrap();
        let (g, j) = m.eval(&[0.0; 6]).unwrap();
        let r = crate::manifold::structure_residuals_at(m.kind(), &g, &j, 6);
        assert!(r.j_squared < 1e-10);
        assert!(r.isometry < 1e-10);
        // g = 4δ at the origin
        assert!((g[0] - 4.0).abs() < 1e-15);
    }
}
