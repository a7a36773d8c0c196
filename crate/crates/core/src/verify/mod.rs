//! Named, seeded verification checks for the library's mathematical
//! invariants: geometric inequalities and convergence behavior, spectral
//! monotonicity/continuity/homogeneity, resistance oracles, and optimizer
//! contracts. The CLI exposes these as `verify` suites; the acceptance test
//! suite runs the same checks.

mod geometry_checks;
mod newton_checks;
mod optimizer_checks;
mod spectral_checks;

use serde::Serialize;

/// Which suite a check belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Geometry,
    Spectral,
    Newton,
    Optimizer,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Geometry => "geometry",
            Suite::Spectral => "spectral",
            Suite::Newton => "newton",
            Suite::Optimizer => "optimizer",
        }
    }

    pub fn parse(name: &str) -> Option<Option<Suite>> {
        match name {
            "all" => Some(None),
            "geometry" => Some(Some(Suite::Geometry)),
            "spectral" => Some(Some(Suite::Spectral)),
            "newton" => Some(Some(Suite::Newton)),
            "optimizer" => Some(Some(Suite::Optimizer)),
            _ => None,
        }
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub suite: Suite,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(id: &'static str, suite: Suite, passed: bool, detail: String) -> Self {
        CheckResult {
            id,
            suite,
            passed,
            detail,
        }
    }
}

/// Helper: a check asserting `condition`, reporting measured numbers either way.
pub(crate) fn check(id: &'static str, suite: Suite, condition: bool, detail: String) -> CheckResult {
    CheckResult::new(id, suite, condition, detail)
}

type CheckFn = fn(u64) -> CheckResult;

/// The full registry, in canonical (id-sorted) order.
pub fn registry() -> Vec<(&'static str, Suite, CheckFn)> {
    let mut checks: Vec<(&'static str, Suite, CheckFn)> = vec![
        (
            "geometry.bonnesen_positive_slack",
            Suite::Geometry,
            geometry_checks::bonnesen_positive_slack,
        ),
        (
            "geometry.perimeter_monotone_inclusion",
            Suite::Geometry,
            geometry_checks::perimeter_monotone_inclusion,
        ),
        (
            "geometry.measure_convergence",
            Suite::Geometry,
            geometry_checks::measure_convergence,
        ),
        (
            "geometry.hausdorff_metric",
            Suite::Geometry,
            geometry_checks::hausdorff_metric,
        ),
        (
            "geometry.dilation_inclusion",
            Suite::Geometry,
            geometry_checks::dilation_inclusion,
        ),
        (
            "geometry.normal_convergence",
            Suite::Geometry,
            geometry_checks::normal_convergence,
        ),
        (
            "geometry.radial_reconstruction_ladder",
            Suite::Geometry,
            geometry_checks::radial_reconstruction_ladder,
        ),
        (
            "spectral.expr_print_parse_roundtrip",
            Suite::Spectral,
            spectral_checks::expr_print_parse_roundtrip,
        ),
        (
            "spectral.expr_eval_reference",
            Suite::Spectral,
            spectral_checks::expr_eval_reference,
        ),
        (
            "spectral.square_eigen_oracle",
            Suite::Spectral,
            spectral_checks::square_eigen_oracle,
        ),
        (
            "spectral.disk_eigen_oracle",
            Suite::Spectral,
            spectral_checks::disk_eigen_oracle,
        ),
        (
            "spectral.monotonicity_inclusion",
            Suite::Spectral,
            spectral_checks::monotonicity_inclusion,
        ),
        (
            "spectral.homogeneity_scaling",
            Suite::Spectral,
            spectral_checks::homogeneity_scaling,
        ),
        (
            "spectral.continuity_bracket",
            Suite::Spectral,
            spectral_checks::continuity_bracket,
        ),
        (
            "spectral.nonconstant_coeff_continuity",
            Suite::Spectral,
            spectral_checks::nonconstant_coeff_continuity,
        ),
        (
            "spectral.zero_order_shift",
            Suite::Spectral,
            spectral_checks::zero_order_shift,
        ),
        (
            "spectral.domain_bracket",
            Suite::Spectral,
            spectral_checks::domain_bracket,
        ),
        (
            "spectral.mesh_convergence_order",
            Suite::Spectral,
            spectral_checks::mesh_convergence_order,
        ),
        (
            "spectral.torsion_disk_oracle",
            Suite::Spectral,
            spectral_checks::torsion_disk_oracle,
        ),
        (
            "newton.flat_disk_resistance",
            Suite::Newton,
            newton_checks::flat_disk_resistance,
        ),
        (
            "newton.cone_resistance",
            Suite::Newton,
            newton_checks::cone_resistance,
        ),
        (
            "newton.hemisphere_boundary",
            Suite::Newton,
            newton_checks::hemisphere_boundary,
        ),
        (
            "newton.profile_boundary_agreement",
            Suite::Newton,
            newton_checks::profile_boundary_agreement,
        ),
        (
            "newton.positivity_flat_bound",
            Suite::Newton,
            newton_checks::positivity_flat_bound,
        ),
        (
            "newton.optimized_profile_slope_law",
            Suite::Newton,
            newton_checks::optimized_profile_slope_law,
        ),
        (
            "newton.boundary_lsc",
            Suite::Newton,
            newton_checks::boundary_lsc,
        ),
        (
            "optimizer.feasibility_preservation",
            Suite::Optimizer,
            optimizer_checks::feasibility_preservation,
        ),
        (
            "optimizer.inradius_floor",
            Suite::Optimizer,
            optimizer_checks::inradius_floor,
        ),
        (
            "optimizer.monotone_trace",
            Suite::Optimizer,
            optimizer_checks::monotone_trace,
        ),
        (
            "optimizer.determinism",
            Suite::Optimizer,
            optimizer_checks::determinism,
        ),
        (
            "optimizer.blaschke_nesting",
            Suite::Optimizer,
            optimizer_checks::blaschke_nesting,
        ),
    ];
    checks.sort_by_key(|(id, _, _)| *id);
    checks
}

/// Run one suite (or all), in canonical id order.
pub fn run_suite(suite: Option<Suite>, seed: u64) -> Vec<CheckResult> {
    registry()
        .into_iter()
        .filter(|(_, s, _)| suite.is_none() || suite == Some(*s))
        .map(|(_, _, f)| f(seed))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_are_unique_and_sorted() {
        let reg = registry();
        for w in reg.windows(2) {
            assert!(w[0].0 < w[1].0, "{} !< {}", w[0].0, w[1].0);
        }
    }

    #[test]
    fn suite_parsing() {
        assert_eq!(Suite::parse("all"), Some(None));
        assert_eq!(Suite::parse("geometry"), Some(Some(Suite::Geometry)));
        assert_eq!(Suite::parse("bogus"), None);
    }

    #[test]
    fn geometry_suite_passes() {
        for r in run_suite(Some(Suite::Geometry), 7) {
            assert!(r.passed, "{}: {}", r.id, r.detail);
        }
    }
}
