//! Class predicates and the implications between them.
//!
//! [`classify`] samples a manifold and records, as maxima over the sample,
//! the residuals of the Kähler, integrability, nearly Kähler and
//! Kähler-Codazzi conditions together with `‖T⁰‖` and
//! `max |g(T⁰(X,Y),X)|`. The `verify_*` functions then test each implication
//! on that data; a failed implication is an [`Error::TheoremViolation`]
//! because the statements are theorems, so only a bug can break them.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::algebra::{subspace_dimension, ModelFiber, SubspaceQuery, MAX_HALF_DIM};
use crate::connection::{codazzi_tensor, integrability_torsion_form, nearly_tensor, LocalGeometry};
use crate::error::{Error, Result};
use crate::manifold::{catalog, validate_structure, AEStructureKind, ChartedManifold, SamplePlan};

pub const DEFAULT_TOL: f64 = 1e-8;

/// Implication slack: `hypothesis < tol` must give `conclusion < SLACK·tol`.
pub const IMPLICATION_SLACK: f64 = 10.0;

/// `(∇_Z g)(X,Y) − (∇_X g)(Z,Y)` vanishes identically for Levi-Civita.
pub const LEVI_CIVITA_COUPLING_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn at(residual: f64, tol: f64) -> Self {
        if residual < tol {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

/// Maxima over the sample. Tensor norms are max-abs over components.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `‖∇J‖`
    pub kahler: f64,
    /// `‖N_J‖`
    pub integrable: f64,
    /// `‖(∇_X J)Y + (∇_Y J)X‖`
    pub nearly: f64,
    /// `‖(∇_X J)Y − (∇_Y J)X‖`
    pub codazzi: f64,
    /// `‖T⁰‖`
    pub torsion0: f64,
    /// `max |g(T⁰(X,Y),X)|` over the sampled vectors
    pub torsion0_skew_g: f64,
}

/// Further sampled quantities used by the theorem checks.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Auxiliary {
    /// `‖T⁰(J·,J·) + αT⁰‖`
    pub torsion_integrability_form: f64,
    /// Worst disagreement among the three torsion formulas.
    pub torsion_agreement: f64,
    /// `max |(∇_Z J)X − (∇_X J)Z|` in the coupled Codazzi form.
    pub codazzi_coupled_j: f64,
    /// `max |(∇_Z g)(X,Y) − (∇_X g)(Z,Y)|`.
    pub codazzi_coupled_g: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub kahler: Verdict,
    pub integrable: Verdict,
    pub nearly: Verdict,
    pub codazzi: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    /// The statement was tested and held.
    Holds,
    /// The hypothesis was false on this manifold; nothing was tested.
    HypothesisNotMet,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub quantity: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub theorem: String,
    pub status: CheckStatus,
    pub note: String,
    pub evidence: Vec<Evidence>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub manifold: String,
    pub kind: AEStructureKind,
    pub seed: u64,
    pub n_points: usize,
    pub n_vector_triples: usize,
    pub tol: f64,
    pub residuals: Residuals,
    pub auxiliary: Auxiliary,
    pub verdicts: Verdicts,
    pub theorem_checks: Vec<CheckResult>,
}

pub const TORSION_CHARACTERIZATIONS: &str = "torsion-characterizations";
pub const NEARLY_IMPLIES_KAHLER: &str = "nearly-implies-kahler";
pub const NEARLY_TORSION_CHARACTERIZATION: &str = "nearly-torsion-characterization";
pub const CODAZZI_IMPLIES_KAHLER: &str = "codazzi-implies-kahler";

fn evidence(quantity: &str, value: f64) -> Evidence {
    Evidence {
        quantity: quantity.to_string(),
        value,
    }
}

/// Samples residuals without running the theorem checks.
pub fn sample_residuals(m: &ChartedManifold, plan: &SamplePlan) -> Result<(Residuals, Auxiliary)> {
    let report = validate_structure(m, plan)?;
    if !report.valid {
        return Err(Error::InvalidStructure {
            manifold: m.name().to_string(),
        });
    }
    let triples = plan.vector_triples(m.dim());
    let mut r = Residuals::default();
    let mut aux = Auxiliary::default();
    for p in plan.points(m.domain()) {
        let geom = LocalGeometry::at(m, &p)?;
        r.kahler = r.kahler.max(geom.nabla_j.max_abs());
        r.integrable = r.integrable.max(geom.nijenhuis.max_abs());
        r.nearly = r.nearly.max(nearly_tensor(&geom.nabla_j).max_abs());
        r.codazzi = r.codazzi.max(codazzi_tensor(&geom.nabla_j).max_abs());
        r.torsion0 = r.torsion0.max(geom.torsion0.max_abs());
        for [x, y, _] in &triples {
            let t = geom.torsion_apply(x, y);
            r.torsion0_skew_g = r.torsion0_skew_g.max(geom.g(&t, x).abs());
        }
        let form = integrability_torsion_form(geom.kind, &geom.jet.j, &geom.torsion0);
        aux.torsion_integrability_form = aux.torsion_integrability_form.max(form.max_abs());
        aux.torsion_agreement = aux.torsion_agreement.max(geom.torsion_agreement);
        let (cj, cg) = geom.codazzi_coupled();
        aux.codazzi_coupled_j = aux.codazzi_coupled_j.max(cj);
        aux.codazzi_coupled_g = aux.codazzi_coupled_g.max(cg);
    }
    Ok((r, aux))
}

/// Classifies `m` at tolerance `tol` and runs every theorem check that
/// applies to its kind.
pub fn classify(m: &ChartedManifold, plan: &SamplePlan, tol: f64) -> Result<ClassificationReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    let (residuals, auxiliary) = sample_residuals(m, plan)?;
    let verdicts = Verdicts {
        kahler: Verdict::at(residuals.kahler, tol),
        integrable: Verdict::at(residuals.integrable, tol),
        nearly: Verdict::at(residuals.nearly, tol),
        codazzi: Verdict::at(residuals.codazzi, tol),
    };
    let mut report = ClassificationReport {
        manifold: m.name().to_string(),
        kind: m.kind(),
        seed: plan.seed,
        n_points: plan.n_points,
        n_vector_triples: plan.n_vector_triples,
        tol,
        residuals,
        auxiliary,
        verdicts,
        theorem_checks: Vec::new(),
    };
    let mut checks = Vec::with_capacity(3);
    checks.push(verify_theorem_torsion_characterizations(&report)?);
    if m.kind().product() > 0 {
        checks.push(verify_theorem_nearly_implies_kahler(&report)?);
    } else {
        checks.push(verify_theorem_nearly_torsion_characterization(&report)?);
    }
    checks.push(verify_theorem_codazzi_implies_kahler(&report)?);
    report.theorem_checks = checks;
    Ok(report)
}

fn violation(theorem: &'static str, detail: String) -> Error {
    Error::TheoremViolation { theorem, detail }
}

/// `a < tol ⇔ b < tol`, up to slack: one side below `tol` with the other
/// above `SLACK·tol` is a violation. Returns whether both sides hold.
fn biconditional(theorem: &'static str, (la, a): (&str, f64), (lb, b): (&str, f64), tol: f64) -> Result<bool> {
    let slack = IMPLICATION_SLACK * tol;
    if a < tol && !(b < slack) {
        return Err(violation(theorem, format!("{la} = {a:e} < {tol:e} but {lb} = {b:e}")));
    }
    if b < tol && !(a < slack) {
        return Err(violation(theorem, format!("{lb} = {b:e} < {tol:e} but {la} = {a:e}")));
    }
    Ok(a < tol && b < tol)
}

fn sides(both: bool) -> &'static str {
    if both {
        "both sides hold"
    } else {
        "both sides fail"
    }
}

/// `T⁰ = 0 ⇔ ∇J = 0` and `T⁰(J·,J·) + αT⁰ = 0 ⇔ N_J = 0`.
pub fn verify_theorem_torsion_characterizations(report: &ClassificationReport) -> Result<CheckResult> {
    let r = &report.residuals;
    let form = report.auxiliary.torsion_integrability_form;
    let first = biconditional(
        TORSION_CHARACTERIZATIONS,
        ("|T0|", r.torsion0),
        ("|nabla J|", r.kahler),
        report.tol,
    )?;
    let second = biconditional(
        TORSION_CHARACTERIZATIONS,
        ("|T0(J,J) + alpha T0|", form),
        ("|N_J|", r.integrable),
        report.tol,
    )?;
    Ok(CheckResult {
        theorem: TORSION_CHARACTERIZATIONS.to_string(),
        status: CheckStatus::Holds,
        note: format!("kahler: {}; integrable: {}", sides(first), sides(second)),
        evidence: alloc::vec![
            evidence("torsion0", r.torsion0),
            evidence("kahler", r.kahler),
            evidence("torsion_integrability_form", form),
            evidence("integrable", r.integrable),
        ],
    })
}

fn require_product(report: &ClassificationReport, expected: i8) -> Result<()> {
    let found = report.kind.product();
    if found != expected {
        return Err(Error::KindMismatch {
            expected_product: expected,
            found_product: found,
        });
    }
    Ok(())
}

fn fiber_dimensions(kind: AEStructureKind, q: SubspaceQuery) -> Result<Vec<Evidence>> {
    (1..=MAX_HALF_DIM)
        .map(|n| {
            let dim = subspace_dimension(&ModelFiber::standard(kind, n)?, q)?;
            Ok(evidence(&format!("dim {q} (n = {n})"), dim as f64))
        })
        .collect()
}

/// For `αε = +1`: nearly Kähler type implies Kähler type.
pub fn verify_theorem_nearly_implies_kahler(report: &ClassificationReport) -> Result<CheckResult> {
    require_product(report, 1)?;
    let r = &report.residuals;
    let mut ev = alloc::vec![evidence("nearly", r.nearly), evidence("kahler", r.kahler)];
    let algebra = fiber_dimensions(report.kind, SubspaceQuery::W1)?;
    if let Some(e) = algebra.iter().find(|e| e.value != 0.0) {
        return Err(violation(
            NEARLY_IMPLIES_KAHLER,
            format!("{} = {} for alpha*epsilon = 1", e.quantity, e.value),
        ));
    }
    ev.extend(algebra);
    let (status, note) = if r.nearly < report.tol {
        if !(r.kahler < IMPLICATION_SLACK * report.tol) {
            return Err(violation(
                NEARLY_IMPLIES_KAHLER,
                format!("nearly = {:e} but kahler = {:e}", r.nearly, r.kahler),
            ));
        }
        (CheckStatus::Holds, "hypothesis and conclusion hold".to_string())
    } else {
        (CheckStatus::HypothesisNotMet, "hypothesis not met".to_string())
    };
    Ok(CheckResult {
        theorem: NEARLY_IMPLIES_KAHLER.to_string(),
        status,
        note,
        evidence: ev,
    })
}

/// For `αε = −1`: nearly Kähler type iff `g(T⁰(X,Y),X) = 0`.
pub fn verify_theorem_nearly_torsion_characterization(report: &ClassificationReport) -> Result<CheckResult> {
    require_product(report, -1)?;
    let r = &report.residuals;
    let both = biconditional(
        NEARLY_TORSION_CHARACTERIZATION,
        ("nearly", r.nearly),
        ("|g(T0(X,Y),X)|", r.torsion0_skew_g),
        report.tol,
    )?;
    Ok(CheckResult {
        theorem: NEARLY_TORSION_CHARACTERIZATION.to_string(),
        status: CheckStatus::Holds,
        note: sides(both).to_string(),
        evidence: alloc::vec![
            evidence("nearly", r.nearly),
            evidence("torsion0_skew_g", r.torsion0_skew_g),
        ],
    })
}

/// Kähler-Codazzi type implies Kähler type, for all four kinds.
pub fn verify_theorem_codazzi_implies_kahler(report: &ClassificationReport) -> Result<CheckResult> {
    let r = &report.residuals;
    let coupled_g = report.auxiliary.codazzi_coupled_g;
    if !(coupled_g < LEVI_CIVITA_COUPLING_TOL) {
        return Err(violation(
            CODAZZI_IMPLIES_KAHLER,
            format!("Levi-Civita coupled metric residual {coupled_g:e}"),
        ));
    }
    let mut ev = alloc::vec![
        evidence("codazzi", r.codazzi),
        evidence("kahler", r.kahler),
        evidence("codazzi_coupled_g", coupled_g),
    ];
    let algebra = fiber_dimensions(report.kind, SubspaceQuery::CODAZZI)?;
    if let Some(e) = algebra.iter().find(|e| e.value != 0.0) {
        return Err(violation(
            CODAZZI_IMPLIES_KAHLER,
            format!("{} = {}", e.quantity, e.value),
        ));
    }
    ev.extend(algebra);
    let (status, note) = if r.codazzi < report.tol {
        if !(r.kahler < IMPLICATION_SLACK * report.tol) {
            return Err(violation(
                CODAZZI_IMPLIES_KAHLER,
                format!("codazzi = {:e} but kahler = {:e}", r.codazzi, r.kahler),
            ));
        }
        (CheckStatus::Holds, "hypothesis and conclusion hold".to_string())
    } else if r.kahler < report.tol {
        // ∇J = 0 forces the Codazzi residual to vanish too
        return Err(violation(
            CODAZZI_IMPLIES_KAHLER,
            format!("kahler = {:e} but codazzi = {:e}", r.kahler, r.codazzi),
        ));
    } else {
        (
            CheckStatus::HypothesisNotMet,
            "hypothesis not met; contrapositive: kahler fails and codazzi fails".to_string(),
        )
    };
    Ok(CheckResult {
        theorem: CODAZZI_IMPLIES_KAHLER.to_string(),
        status,
        note,
        evidence: ev,
    })
}

/// Which of the two conditions `(∇_X J)Y ± (∇_Y J)X = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignCondition {
    /// `+`: nearly Kähler type.
    Plus,
    /// `−`: Kähler-Codazzi type.
    Minus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryCheck {
    pub manifold: String,
    pub kind: AEStructureKind,
    pub theorem: String,
    pub status: CheckStatus,
    /// The condition holds while `∇J ≠ 0`.
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub alpha_epsilon: i8,
    pub condition: SignCondition,
    /// The class the condition forces.
    pub verdict: String,
    /// `dim W₁` (plus) or `dim` of the Codazzi subspace (minus) per kind and `n`.
    pub algebra: Vec<Evidence>,
    pub entries: Vec<EntryCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub seed: u64,
    pub n_points: usize,
    pub tol: f64,
    pub cells: Vec<TableCell>,
}

impl TableReport {
    pub fn cell(&self, alpha_epsilon: i8, condition: SignCondition) -> Option<&TableCell> {
        self.cells
            .iter()
            .find(|c| c.alpha_epsilon == alpha_epsilon && c.condition == condition)
    }
}

pub const KAHLER_TYPE: &str = "Kähler type";
pub const NEARLY_KAHLER_TYPE: &str = "nearly Kähler type";

/// The 2×2 table of what `(∇_X J)Y ± (∇_Y J)X = 0` forces for `αε = ±1`,
/// derived from the model-space dimensions and checked on every standard
/// catalog entry.
pub fn table1_summary(plan: &SamplePlan, tol: f64) -> Result<TableReport> {
    let mut reports = Vec::new();
    for name in catalog::standard_entries() {
        let m = catalog::catalog(&name)?;
        reports.push(classify(&m, plan, tol)?);
    }
    let mut cells = Vec::new();
    for ae in [1i8, -1] {
        let kinds: Vec<_> = AEStructureKind::ALL.into_iter().filter(|k| k.product() == ae).collect();
        for condition in [SignCondition::Plus, SignCondition::Minus] {
            let (query, theorem) = match (condition, ae) {
                (SignCondition::Plus, 1) => (SubspaceQuery::W1, NEARLY_IMPLIES_KAHLER),
                (SignCondition::Plus, _) => (SubspaceQuery::W1, NEARLY_TORSION_CHARACTERIZATION),
                (SignCondition::Minus, _) => (SubspaceQuery::CODAZZI, CODAZZI_IMPLIES_KAHLER),
            };
            let mut algebra = Vec::new();
            for &kind in &kinds {
                for mut e in fiber_dimensions(kind, query)? {
                    e.quantity = format!("{}: {}", kind.name(), e.quantity);
                    algebra.push(e);
                }
            }
            let verdict = if algebra.iter().all(|e| e.value == 0.0) {
                KAHLER_TYPE
            } else {
                NEARLY_KAHLER_TYPE
            };
            let entries = reports
                .iter()
                .filter(|r| r.kind.product() == ae)
                .filter_map(|r| {
                    let check = r.theorem_checks.iter().find(|c| c.theorem == theorem)?;
                    let condition_holds = match condition {
                        SignCondition::Plus => r.verdicts.nearly.holds(),
                        SignCondition::Minus => r.verdicts.codazzi.holds(),
                    };
                    Some(EntryCheck {
                        manifold: r.manifold.clone(),
                        kind: r.kind,
                        theorem: theorem.to_string(),
                        status: check.status,
                        strict: condition_holds && !r.verdicts.kahler.holds(),
                    })
                })
                .collect();
            cells.push(TableCell {
                alpha_epsilon: ae,
                condition,
                verdict: verdict.to_string(),
                algebra,
                entries,
            });
        }
    }
    Ok(TableReport {
        seed: plan.seed,
        n_points: plan.n_points,
        tol,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::catalog::catalog;

    fn plan() -> SamplePlan {
        SamplePlan::new(0, 10, 10)
    }

    #[test]
    fn flat_anti_kahler_is_kahler_and_codazzi() {
        let r = classify(&catalog("flat-anti-kahler").unwrap(), &plan(), DEFAULT_TOL).unwrap();
        assert_eq!(r.residuals, Residuals::default());
        assert!(r.verdicts.kahler.holds() && r.verdicts.integrable.holds() && r.verdicts.codazzi.holds());
        assert!(r.theorem_checks.iter().all(|c| c.status == CheckStatus::Holds));
    }

    #[test]
    fn kind_mismatch() {
        let r = classify(&catalog("flat-kahler").unwrap(), &plan(), DEFAULT_TOL).unwrap();
        assert_eq!(
            verify_theorem_nearly_implies_kahler(&r),
            Err(Error::KindMismatch {
                expected_product: 1,
                found_product: -1
            })
        );
        let r = classify(&catalog("flat-product-riemannian").unwrap(), &plan(), DEFAULT_TOL).unwrap();
        assert!(matches!(
            verify_theorem_nearly_torsion_characterization(&r),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn tampered_report_is_a_violation() {
        let mut r = classify(&catalog("random-norden-42").unwrap(), &plan(), DEFAULT_TOL).unwrap();
        r.residuals.codazzi = 0.0;
        assert!(matches!(
            verify_theorem_codazzi_implies_kahler(&r),
            Err(Error::TheoremViolation { .. })
        ));
        r.residuals.torsion0 = 0.0;
        assert!(matches!(
            verify_theorem_torsion_characterizations(&r),
            Err(Error::TheoremViolation { .. })
        ));
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let m = catalog("flat-kahler").unwrap();
        assert!(classify(&m, &plan(), 0.0).is_err());
        assert!(classify(&m, &plan(), f64::NAN).is_err());
    }
}
