//! Charted (J² = ±1)-metric manifolds.
//!
//! A [`ChartedManifold`] is a single coordinate chart together with the
//! component functions `g_ij(x)` and `J^i_j(x)`, evaluated over [`Dual`]
//! numbers so that first derivatives come for free. Matrices are row-major:
//! `J[i * dim + j] = J^i_j`, so `(JX)^i = J^i_j X^j`.

pub mod catalog;

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::linalg::{determinant, DET_TOL};
use crate::tensor::{TensorValue, Variance};

/// Residual threshold for the structure axioms.
pub const STRUCTURE_TOL: f64 = 1e-8;

/// The pair `(α, ε)`: `J² = α·Id` and `g(J·,J·) = ε·g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawKind")]
pub struct AEStructureKind {
    alpha: i8,
    epsilon: i8,
}

#[derive(Deserialize)]
struct RawKind {
    alpha: i8,
    epsilon: i8,
}

impl TryFrom<RawKind> for AEStructureKind {
    type Error = &'static str;
    fn try_from(raw: RawKind) -> core::result::Result<Self, Self::Error> {
        AEStructureKind::new(raw.alpha, raw.epsilon).ok_or("alpha and epsilon must be -1 or 1")
    }
}

impl AEStructureKind {
    /// Almost Hermitian.
    pub const HERMITIAN: Self = Self { alpha: -1, epsilon: 1 };
    /// Almost product Riemannian (trace-free `J`).
    pub const PRODUCT_RIEMANNIAN: Self = Self { alpha: 1, epsilon: 1 };
    /// Almost Norden (almost anti-Hermitian).
    pub const NORDEN: Self = Self { alpha: -1, epsilon: -1 };
    /// Almost para-Hermitian.
    pub const PARA_HERMITIAN: Self = Self { alpha: 1, epsilon: -1 };

    pub const ALL: [Self; 4] = [
        Self::HERMITIAN,
        Self::PRODUCT_RIEMANNIAN,
        Self::NORDEN,
        Self::PARA_HERMITIAN,
    ];

    pub const fn new(alpha: i8, epsilon: i8) -> Option<Self> {
        match (alpha, epsilon) {
            (-1 | 1, -1 | 1) => Some(Self { alpha, epsilon }),
            _ => None,
        }
    }

    pub const fn alpha(self) -> i8 {
        self.alpha
    }

    pub const fn epsilon(self) -> i8 {
        self.epsilon
    }

    /// `α·ε`: `-1` for the Hermitian/para-Hermitian family, `+1` for Norden/product.
    pub const fn product(self) -> i8 {
        self.alpha * self.epsilon
    }

    pub fn alpha_f(self) -> f64 {
        self.alpha as f64
    }

    pub fn epsilon_f(self) -> f64 {
        self.epsilon as f64
    }

    pub fn product_f(self) -> f64 {
        self.product() as f64
    }

    /// Short name used in catalog labels.
    pub const fn name(self) -> &'static str {
        match (self.alpha, self.epsilon) {
            (-1, 1) => "hermitian",
            (1, 1) => "product-riemannian",
            (-1, -1) => "norden",
            _ => "para-hermitian",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "hermitian" => Some(Self::HERMITIAN),
            "product-riemannian" => Some(Self::PRODUCT_RIEMANNIAN),
            "norden" | "anti-hermitian" => Some(Self::NORDEN),
            "para-hermitian" => Some(Self::PARA_HERMITIAN),
            _ => None,
        }
    }
}

impl fmt::Display for AEStructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (α={:+}, ε={:+})", self.name(), self.alpha, self.epsilon)
    }
}

/// Coordinate domain of a chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
}

impl Domain {
    pub fn cube(dim: usize, half_width: f64) -> Self {
        Domain::Box {
            lo: vec![-half_width; dim],
            hi: vec![half_width; dim],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Box { lo, .. } => lo.len(),
            Domain::Ball { center, .. } => center.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Domain::Box { lo, hi } => {
                lo.len() != hi.len() || lo.is_empty() || lo.iter().zip(hi).any(|(l, h)| !(l < h))
            }
            Domain::Ball { center, radius } => center.is_empty() || !(*radius > 0.0),
        }
    }

    pub fn contains_strictly(&self, p: &[f64]) -> bool {
        if p.len() != self.dim() {
            return false;
        }
        match self {
            Domain::Box { lo, hi } => p
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(x, (l, h))| l < x && x < h),
            Domain::Ball { center, radius } => {
                let r2: f64 = p.iter().zip(center).map(|(x, c)| (x - c) * (x - c)).sum();
                r2 < radius * radius
            }
        }
    }

    /// A point strictly inside, drawn from the inner 90% of the domain.
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        match self {
            Domain::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(l, h)| l + (h - l) * (0.05 + 0.9 * rng.random::<f64>()))
                .collect(),
            Domain::Ball { center, radius } => {
                let r = 0.95 * radius;
                loop {
                    let offset: Vec<f64> = center
                        .iter()
                        .map(|_| r * (2.0 * rng.random::<f64>() - 1.0))
                        .collect();
                    if offset.iter().map(|v| v * v).sum::<f64>() < r * r {
                        break center.iter().zip(offset).map(|(c, o)| c + o).collect();
                    }
                }
            }
        }
    }
}

/// Component functions of `g` and `J` in chart coordinates.
pub trait StructureFields: Send + Sync {
    /// `g_ij(x)`, row-major `dim × dim`.
    fn metric(&self, x: &[Dual]) -> Vec<Dual>;
    /// `J^i_j(x)`, row-major `dim × dim`.
    fn structure(&self, x: &[Dual]) -> Vec<Dual>;
}

type FieldFn = dyn Fn(&[Dual]) -> Vec<Dual> + Send + Sync;

struct FnFields {
    metric: Arc<FieldFn>,
    structure: Arc<FieldFn>,
}

impl StructureFields for FnFields {
    fn metric(&self, x: &[Dual]) -> Vec<Dual> {
        (self.metric)(x)
    }

    fn structure(&self, x: &[Dual]) -> Vec<Dual> {
        (self.structure)(x)
    }
}

/// A single-chart manifold carrying an `(α, ε)`-structure.
#[derive(Clone)]
pub struct ChartedManifold {
    name: String,
    dim: usize,
    kind: AEStructureKind,
    domain: Domain,
    fields: Arc<dyn StructureFields>,
}

impl fmt::Debug for ChartedManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartedManifold")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("kind", &self.kind)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl ChartedManifold {
    pub fn new(
        name: impl Into<String>,
        kind: AEStructureKind,
        domain: Domain,
        fields: Arc<dyn StructureFields>,
    ) -> Result<Self> {
        let dim = domain.dim();
        if dim == 0 || !dim.is_multiple_of(2) || dim > crate::dual::MAX_VARS {
            return Err(Error::InvalidArgument(
                "manifold dimension must be even and at most 8",
            ));
        }
        Ok(ChartedManifold {
            name: name.into(),
            dim,
            kind,
            domain,
            fields,
        })
    }

    /// Builds a manifold from closures for `g` and `J`.
    pub fn from_fns(
        name: impl Into<String>,
        kind: AEStructureKind,
        domain: Domain,
        metric: impl Fn(&[Dual]) -> Vec<Dual> + Send + Sync + 'static,
        structure: impl Fn(&[Dual]) -> Vec<Dual> + Send + Sync + 'static,
    ) -> Result<Self> {
        let fields = FnFields {
            metric: Arc::new(metric),
            structure: Arc::new(structure),
        };
        Self::new(name, kind, domain, Arc::new(fields))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> AEStructureKind {
        self.kind
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Same structure, different coordinate domain.
    pub fn with_domain(&self, domain: Domain) -> Result<Self> {
        if domain.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: domain.dim(),
            });
        }
        let mut out = self.clone();
        out.domain = domain;
        Ok(out)
    }

    /// Same fields under a different declared kind (used to test validation).
    pub fn with_kind(&self, kind: AEStructureKind) -> Self {
        let mut out = self.clone();
        out.kind = kind;
        out
    }

    fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        if !self.domain.contains_strictly(p) {
            return Err(Error::PointOutsideDomain { point: p.to_vec() });
        }
        Ok(())
    }

    fn check_len(&self, v: &[Dual]) -> Result<()> {
        if v.len() != self.dim * self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim * self.dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `g` and `J` at `p` with derivatives seeded along every coordinate.
    pub fn eval_dual(&self, p: &[f64]) -> Result<(Vec<Dual>, Vec<Dual>)> {
        self.check_point(p)?;
        let x = Dual::seed(p);
        let g = self.fields.metric(&x);
        let j = self.fields.structure(&x);
        self.check_len(&g)?;
        self.check_len(&j)?;
        Ok((g, j))
    }

    /// Plain values of `g` and `J` at `p`.
    pub fn eval(&self, p: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_point(p)?;
        let x: Vec<Dual> = p.iter().map(|&v| Dual::constant(v)).collect();
        let g = self.fields.metric(&x);
        let j = self.fields.structure(&x);
        self.check_len(&g)?;
        self.check_len(&j)?;
        Ok((g.iter().map(Dual::re).collect(), j.iter().map(Dual::re).collect()))
    }
}

/// `g`, `J` and their first partial derivatives at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub point: Vec<f64>,
    /// `g_ij`, slots `(i, j)`.
    pub g: TensorValue,
    /// `∂_k g_ij`, slots `(k, i, j)`.
    pub dg: TensorValue,
    /// `J^i_j`, slots `(i, j)`.
    pub j: TensorValue,
    /// `∂_k J^i_j`, slots `(k, i, j)`.
    pub dj: TensorValue,
}

pub fn eval_with_derivatives(m: &ChartedManifold, p: &[f64]) -> Result<Jet> {
    use Variance::{Lower, Upper};
    let (g, j) = m.eval_dual(p)?;
    let d = m.dim();
    let gt = TensorValue::from_data(&[d, d], &[Lower, Lower], g.iter().map(Dual::re).collect())?;
    let jt = TensorValue::from_data(&[d, d], &[Upper, Lower], j.iter().map(Dual::re).collect())?;
    let dg = TensorValue::from_fn(&[d, d, d], &[Lower, Lower, Lower], |ix| {
        g[ix[1] * d + ix[2]].partial(ix[0])
    });
    let dj = TensorValue::from_fn(&[d, d, d], &[Lower, Upper, Lower], |ix| {
        j[ix[1] * d + ix[2]].partial(ix[0])
    });
    Ok(Jet {
        point: p.to_vec(),
        g: gt,
        dg,
        j: jt,
        dj,
    })
}

/// Seed and sizes of a deterministic sampling run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub seed: u64,
    pub n_points: usize,
    pub n_vector_triples: usize,
}

impl SamplePlan {
    pub fn new(seed: u64, n_points: usize, n_vector_triples: usize) -> Self {
        SamplePlan {
            seed,
            n_points,
            n_vector_triples,
        }
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// Points strictly inside `domain`. A smaller `n_points` with the same
    /// seed yields a prefix of the same sequence.
    pub fn points(&self, domain: &Domain) -> Vec<Vec<f64>> {
        let mut rng = self.rng(0);
        (0..self.n_points).map(|_| domain.sample(&mut rng)).collect()
    }

    /// Vector triples `(X, Y, Z)` with ∞-norms in `[0.1, 1]`.
    pub fn vector_triples(&self, dim: usize) -> Vec<[Vec<f64>; 3]> {
        let mut rng = self.rng(1);
        let vector = |rng: &mut ChaCha8Rng| {
            let mut v: Vec<f64> = (0..dim).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
            let norm = v.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
            let target = rng.random_range(0.1..=1.0);
            v.iter_mut().for_each(|x| *x *= target / norm);
            v
        };
        (0..self.n_vector_triples)
            .map(|_| [vector(&mut rng), vector(&mut rng), vector(&mut rng)])
            .collect()
    }
}

/// A failed structure axiom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureIssue {
    JSquared,
    Isometry,
    AlternativeIsometry,
    MetricAsymmetric,
    TraceNonZero,
}

/// Max residuals of the structure axioms over the sample points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureResiduals {
    /// `‖J² − α·Id‖`.
    pub j_squared: f64,
    /// `‖g(J·,J·) − ε·g‖`.
    pub isometry: f64,
    /// `‖g(J·,·) − αε·g(·,J·)‖`.
    pub alternative_isometry: f64,
    pub metric_symmetry: f64,
    /// `|tr J|`, only for `α = ε = +1`.
    pub trace_j: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub manifold: String,
    pub kind: AEStructureKind,
    pub seed: u64,
    pub n_points: usize,
    pub residuals: StructureResiduals,
    pub min_abs_det: f64,
    pub issues: Vec<StructureIssue>,
    pub valid: bool,
}

/// Residuals of the structure axioms at a single point.
pub fn structure_residuals_at(kind: AEStructureKind, g: &[f64], j: &[f64], d: usize) -> StructureResiduals {
    let (alpha, eps) = (kind.alpha_f(), kind.epsilon_f());
    let mut r = StructureResiduals {
        j_squared: 0.0,
        isometry: 0.0,
        alternative_isometry: 0.0,
        metric_symmetry: 0.0,
        trace_j: None,
    };
    for a in 0..d {
        for b in 0..d {
            let jj: f64 = (0..d).map(|m| j[a * d + m] * j[m * d + b]).sum();
            let delta = if a == b { 1.0 } else { 0.0 };
            r.j_squared = r.j_squared.max((jj - alpha * delta).abs());
            // J^p_a J^q_b g_pq
            let mut gjj = 0.0;
            for p in 0..d {
                for q in 0..d {
                    gjj += j[p * d + a] * j[q * d + b] * g[p * d + q];
                }
            }
            r.isometry = r.isometry.max((gjj - eps * g[a * d + b]).abs());
            // g(J e_a, e_b) - αε g(e_a, J e_b)
            let gj_left: f64 = (0..d).map(|p| j[p * d + a] * g[p * d + b]).sum();
            let gj_right: f64 = (0..d).map(|q| g[a * d + q] * j[q * d + b]).sum();
            r.alternative_isometry = r
                .alternative_isometry
                .max((gj_left - alpha * eps * gj_right).abs());
            r.metric_symmetry = r.metric_symmetry.max((g[a * d + b] - g[b * d + a]).abs());
        }
    }
    if kind == AEStructureKind::PRODUCT_RIEMANNIAN {
        r.trace_j = Some((0..d).map(|i| j[i * d + i]).sum::<f64>().abs());
    }
    r
}

fn merge(acc: &mut StructureResiduals, r: &StructureResiduals) {
    acc.j_squared = acc.j_squared.max(r.j_squared);
    acc.isometry = acc.isometry.max(r.isometry);
    acc.alternative_isometry = acc.alternative_isometry.max(r.alternative_isometry);
    acc.metric_symmetry = acc.metric_symmetry.max(r.metric_symmetry);
    acc.trace_j = match (acc.trace_j, r.trace_j) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
}

/// Checks the `(α, ε)` axioms at every point of `plan`.
pub fn validate_structure(m: &ChartedManifold, plan: &SamplePlan) -> Result<ValidationReport> {
    if m.domain().is_empty() {
        return Err(Error::DomainEmpty);
    }
    let d = m.dim();
    let mut acc = StructureResiduals {
        j_squared: 0.0,
        isometry: 0.0,
        alternative_isometry: 0.0,
        metric_symmetry: 0.0,
        trace_j: None,
    };
    let mut min_abs_det = f64::INFINITY;
    for p in plan.points(m.domain()) {
        let (g, j) = m.eval(&p)?;
        let det = determinant(&g, d);
        if det.abs() <= DET_TOL {
            return Err(Error::NearSingularMetric { point: p, det });
        }
        min_abs_det = min_abs_det.min(det.abs());
        merge(&mut acc, &structure_residuals_at(m.kind(), &g, &j, d));
    }
    let mut issues = Vec::new();
    if !(acc.j_squared < STRUCTURE_TOL) {
        issues.push(StructureIssue::JSquared);
    }
    if !(acc.isometry < STRUCTURE_TOL) {
        issues.push(StructureIssue::Isometry);
    }
    if !(acc.alternative_isometry < STRUCTURE_TOL) {
        issues.push(StructureIssue::AlternativeIsometry);
    }
    if !(acc.metric_symmetry < STRUCTURE_TOL) {
        issues.push(StructureIssue::MetricAsymmetric);
    }
    if acc.trace_j.is_some_and(|t| !(t < STRUCTURE_TOL)) {
        issues.push(StructureIssue::TraceNonZero);
    }
    Ok(ValidationReport {
        manifold: m.name().to_string(),
        kind: m.kind(),
        seed: plan.seed,
        n_points: plan.n_points,
        residuals: acc,
        min_abs_det,
        valid: issues.is_empty(),
        issues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::Scalar;

    fn constant_fields(values: &'static [f64]) -> impl Fn(&[Dual]) -> Vec<Dual> + Send + Sync {
        move |_x: &[Dual]| values.iter().map(|&v| Dual::constant(v)).collect()
    }

    #[test]
    fn kinds_and_products() {
        assert_eq!(AEStructureKind::HERMITIAN.product(), -1);
        assert_eq!(AEStructureKind::PARA_HERMITIAN.product(), -1);
        assert_eq!(AEStructureKind::NORDEN.product(), 1);
        assert_eq!(AEStructureKind::PRODUCT_RIEMANNIAN.product(), 1);
        assert!(AEStructureKind::new(0, 1).is_none());
        for k in AEStructureKind::ALL {
            assert_eq!(AEStructureKind::from_name(k.name()), Some(k));
        }
    }

    #[test]
    fn trace_free_condition_for_product_kind() {
        let m = ChartedManifold::from_fns(
            "identity-product",
            AEStructureKind::PRODUCT_RIEMANNIAN,
            Domain::cube(2, 1.0),
            constant_fields(&[1.0, 0.0, 0.0, 1.0]),
            constant_fields(&[1.0, 0.0, 0.0, 1.0]),
        )
        .unwrap();
        let report = validate_structure(&m, &SamplePlan::new(0, 5, 1)).unwrap();
        assert!(!report.valid);
        assert_eq!(report.issues, vec![StructureIssue::TraceNonZero]);
        assert_eq!(report.residuals.trace_j, Some(2.0));
    }

    #[test]
    fn wrong_alpha_is_flagged() {
        let m = ChartedManifold::from_fns(
            "mislabelled",
            AEStructureKind::PRODUCT_RIEMANNIAN,
            Domain::cube(2, 1.0),
            constant_fields(&[1.0, 0.0, 0.0, 1.0]),
            constant_fields(&[0.0, -1.0, 1.0, 0.0]),
        )
        .unwrap();
        let report = validate_structure(&m, &SamplePlan::new(0, 3, 1)).unwrap();
        assert!(!report.valid);
        assert!(report.issues.contains(&StructureIssue::JSquared));
        assert_eq!(report.residuals.j_squared, 2.0);
    }

    #[test]
    fn empty_domain_and_singular_metric() {
        let m = ChartedManifold::from_fns(
            "empty",
            AEStructureKind::HERMITIAN,
            Domain::Box {
                lo: vec![0.0, 0.0],
                hi: vec![0.0, 1.0],
            },
            constant_fields(&[1.0, 0.0, 0.0, 1.0]),
            constant_fields(&[0.0, -1.0, 1.0, 0.0]),
        )
        .unwrap();
        assert_eq!(validate_structure(&m, &SamplePlan::new(0, 3, 1)), Err(Error::DomainEmpty));

        let m = ChartedManifold::from_fns(
            "degenerate",
            AEStructureKind::HERMITIAN,
            Domain::cube(2, 1.0),
            constant_fields(&[1.0, 0.0, 0.0, 0.0]),
            constant_fields(&[0.0, -1.0, 1.0, 0.0]),
        )
        .unwrap();
        assert!(matches!(
            validate_structure(&m, &SamplePlan::new(0, 3, 1)),
            Err(Error::NearSingularMetric { .. })
        ));
    }

    #[test]
    fn outside_domain_is_rejected() {
        let m = catalog::catalog("flat-kahler").unwrap();
        assert!(matches!(
            eval_with_derivatives(&m, &[1.0, 0.0]),
            Err(Error::PointOutsideDomain { .. })
        ));
    }

    #[test]
    fn sampling_is_deterministic_and_inside() {
        let plan = SamplePlan::new(9, 40, 30);
        let dom = Domain::Ball {
            center: vec![0.0; 6],
            radius: 2.0,
        };
        let a = plan.points(&dom);
        assert_eq!(a, plan.points(&dom));
        assert!(a.iter().all(|p| dom.contains_strictly(p)));
        let prefix = SamplePlan::new(9, 10, 30).points(&dom);
        assert_eq!(&a[..10], &prefix[..]);
        for t in plan.vector_triples(4) {
            for v in t.iter() {
                let n = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                assert!((0.1 - 1e-12..=1.0 + 1e-12).contains(&n));
            }
        }
    }

    #[test]
    fn derivatives_of_polar_metric() {
        let m = ChartedManifold::from_fns(
            "polar",
            AEStructureKind::HERMITIAN,
            Domain::Box {
                lo: vec![0.5, -3.0],
                hi: vec![3.0, 3.0],
            },
            |x| {
                let r = x[0];
                vec![Dual::one(), Dual::zero(), Dual::zero(), r * r]
            },
            |x| {
                let r = x[0];
                vec![Dual::zero(), -r, r.recip(), Dual::zero()]
            },
        )
        .unwrap();
        let jet = eval_with_derivatives(&m, &[2.0, 0.3]).unwrap();
        assert_eq!(jet.dg.get(&[0, 1, 1]), 4.0);
        assert_eq!(jet.dg.get(&[1, 1, 1]), 0.0);
        assert_eq!(jet.dj.get(&[0, 0, 1]), -1.0);
        assert_eq!(jet.dj.get(&[0, 1, 0]), -0.25);
    }
}
