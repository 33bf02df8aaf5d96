//! Report types emitted by the CLI and their fixed-width text rendering.

use std::fmt::Write;

use jmetric_core::algebra::DimensionRow;
use jmetric_core::classify::{
    CheckResult, CheckStatus, ClassificationReport, SignCondition, TableReport, Verdict,
};
use jmetric_core::connection::IdentityResiduals;
use jmetric_core::manifold::ValidationReport;
use jmetric_core::AEStructureKind;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: AEStructureKind,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub entries: Vec<CatalogEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub manifold: String,
    pub kind: AEStructureKind,
    pub seed: u64,
    pub n_points: usize,
    pub tol: f64,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct W1Definitions {
    pub kind: AEStructureKind,
    pub n: usize,
    pub equivalent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub dimensions: Vec<DimensionRow>,
    pub w1_definitions: Vec<W1Definitions>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentitiesReport {
    pub manifold: String,
    pub kind: AEStructureKind,
    pub seed: u64,
    pub n_points: usize,
    pub n_vector_triples: usize,
    pub tol: f64,
    pub residuals: IdentityResiduals,
    pub holds: bool,
}

/// Fixed-width text form of a report.
pub trait Render {
    fn render(&self) -> String;
}

fn sci(v: f64) -> String {
    format!("{v:>11.3e}")
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
    }
}

fn status(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Holds => "holds",
        CheckStatus::HypothesisNotMet => "hypothesis not met",
    }
}

fn header(out: &mut String, title: &str, manifold: &str, kind: AEStructureKind) {
    let _ = writeln!(out, "{title}: {manifold}");
    let _ = writeln!(out, "kind: {kind}");
}

impl Render for CatalogReport {
    fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<40} {:<20} {:>3}", "name", "kind", "dim");
        for e in &self.entries {
            let _ = writeln!(out, "{:<40} {:<20} {:>3}", e.name, e.kind.name(), e.dim);
        }
        out
    }
}

impl Render for ValidationReport {
    fn render(&self) -> String {
        let mut out = String::new();
        header(&mut out, "validate", &self.manifold, self.kind);
        let _ = writeln!(out, "seed {} points {}", self.seed, self.n_points);
        let r = &self.residuals;
        let rows = [
            ("J^2 - alpha Id", Some(r.j_squared)),
            ("g(J,J) - eps g", Some(r.isometry)),
            ("g(J,) - ae g(,J)", Some(r.alternative_isometry)),
            ("g - g^T", Some(r.metric_symmetry)),
            ("trace J", r.trace_j),
        ];
        for (label, v) in rows {
            if let Some(v) = v {
                let _ = writeln!(out, "  {label:<20}{}", sci(v));
            }
        }
        let _ = writeln!(out, "  {:<20}{}", "min |det g|", sci(self.min_abs_det));
        for issue in &self.issues {
            let _ = writeln!(out, "  issue: {issue:?}");
        }
        let _ = writeln!(out, "valid: {}", self.valid);
        out
    }
}

fn render_checks(out: &mut String, checks: &[CheckResult]) {
    for c in checks {
        let _ = writeln!(out, "  {:<34}{:<20}{}", c.theorem, status(c.status), c.note);
        for e in &c.evidence {
            let value = if e.value.fract() == 0.0 && e.value.abs() < 1e6 {
                format!("{:>11}", e.value as i64)
            } else {
                sci(e.value)
            };
            let _ = writeln!(out, "      {:<40}{value}", e.quantity);
        }
    }
}

impl Render for ClassificationReport {
    fn render(&self) -> String {
        let mut out = String::new();
        header(&mut out, "classify", &self.manifold, self.kind);
        let _ = writeln!(
            out,
            "seed {} points {} vectors {} tol {:e}",
            self.seed, self.n_points, self.n_vector_triples, self.tol
        );
        let (r, v) = (&self.residuals, &self.verdicts);
        let _ = writeln!(out, "  {:<18}{:>11}  verdict", "predicate", "residual");
        for (label, res, ver) in [
            ("kahler", r.kahler, Some(v.kahler)),
            ("integrable", r.integrable, Some(v.integrable)),
            ("nearly", r.nearly, Some(v.nearly)),
            ("codazzi", r.codazzi, Some(v.codazzi)),
            ("torsion0", r.torsion0, None),
            ("torsion0_skew_g", r.torsion0_skew_g, None),
        ] {
            let _ = match ver {
                Some(v) => writeln!(out, "  {label:<18}{}  {}", sci(res), verdict(v)),
                None => writeln!(out, "  {label:<18}{}", sci(res)),
            };
        }
        let _ = writeln!(out, "theorem checks:");
        render_checks(&mut out, &self.theorem_checks);
        out
    }
}

impl Render for VerifyReport {
    fn render(&self) -> String {
        let mut out = String::new();
        header(&mut out, "verify", &self.manifold, self.kind);
        let _ = writeln!(out, "seed {} points {} tol {:e}", self.seed, self.n_points, self.tol);
        render_checks(&mut out, &self.checks);
        out
    }
}

impl Render for TableReport {
    fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "seed {} points {} tol {:e}", self.seed, self.n_points, self.tol);
        let row = |a: &str, b: &str, c: &str| format!("{a:<12}{b:<30}{c}\n");
        out.push_str(&row("", "(nabla_X J)Y + (nabla_Y J)X", "(nabla_X J)Y - (nabla_Y J)X"));
        for ae in [1i8, -1] {
            let cell = |c| self.cell(ae, c).map_or("?", |c| c.verdict.as_str());
            out.push_str(&row(
                &format!("ae = {ae:+}"),
                cell(SignCondition::Plus),
                cell(SignCondition::Minus),
            ));
        }
        for c in &self.cells {
            let _ = writeln!(out, "\nae = {:+}, {:?}: {}", c.alpha_epsilon, c.condition, c.verdict);
            for e in &c.algebra {
                let _ = writeln!(out, "  {:<44}{:>4}", e.quantity, e.value);
            }
            for e in &c.entries {
                let strict = if e.strict { "  strict" } else { "" };
                let _ = writeln!(out, "  {:<44}{}{strict}", e.manifold, status(e.status));
            }
        }
        out
    }
}

impl Render for AlgebraReport {
    fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<20}{:>3}{:>8}{:>8}{:>9}", "kind", "n", "W", "W1", "codazzi");
        for chunk in self.dimensions.chunks(3) {
            let first = &chunk[0];
            let _ = write!(out, "{:<20}{:>3}", first.kind.name(), first.n);
            for row in chunk {
                let width = if row.query.label() == "codazzi" { 9 } else { 8 };
                let _ = write!(out, "{:>width$}", row.dimension);
            }
            out.push('\n');
        }
        let agree = self.w1_definitions.iter().all(|w| w.equivalent);
        let _ = writeln!(out, "W1 definitions agree: {agree}");
        out
    }
}

impl Render for IdentitiesReport {
    fn render(&self) -> String {
        let mut out = String::new();
        header(&mut out, "identities", &self.manifold, self.kind);
        let _ = writeln!(
            out,
            "seed {} points {} vectors {} tol {:e}",
            self.seed, self.n_points, self.n_vector_triples, self.tol
        );
        let r = &self.residuals;
        let rows = [
            ("alternative_isometry", Some(r.alternative_isometry)),
            ("nabla_j_anticommutes", Some(r.nabla_j_anticommutes)),
            ("nabla_j_symmetry", Some(r.nabla_j_symmetry)),
            ("nabla_j_j_symmetry", Some(r.nabla_j_j_symmetry)),
            ("twin_codazzi_equivalence", Some(r.twin_codazzi_equivalence)),
            ("levi_civita_torsion_free", Some(r.levi_civita_torsion_free)),
            ("levi_civita_metric", Some(r.levi_civita_metric)),
            ("canonical_parallel_j", Some(r.canonical_parallel_j)),
            ("canonical_parallel_g", Some(r.canonical_parallel_g)),
            ("torsion_agreement", Some(r.torsion_agreement)),
            ("nijenhuis_agreement", Some(r.nijenhuis_agreement)),
            ("torsion_nijenhuis_relation", Some(r.torsion_nijenhuis_relation)),
            ("fundamental_form_skew", r.fundamental_form_skew),
        ];
        for (label, v) in rows {
            if let Some(v) = v {
                let _ = writeln!(out, "  {label:<28}{}", sci(v));
            }
        }
        let _ = writeln!(out, "holds: {}", self.holds);
        out
    }
}
