//! Executes the analyses of a scenario and assembles the structured report.

use serde::Serialize;
use serde_json::{json, Value};

use bures_core::estimators::{
    arithmetic_mean_value, double_system_value, geometric_mean_value, minimize_arithmetic,
    projection_decomposition_value, sequence_criterion, Decomposition, DescentConfig, DoubleSystem,
    StepRule,
};
use bures_core::fidelity::{
    check_bounds, check_uhlmann_formula, gamma_member_value, gamma_sup, gamma_supremizer,
    transition_probability,
};
use bures_core::minimizers::{
    inverse_perturbation_identity, is_minimizing_element, min_set, EmptyReason, MinSetStatus,
};
use bures_core::par::Parallelism;
use bures_core::seminorms::{bures_variational, factorization_fidelity, subadditivity_check, tau};
use bures_core::subalgebras::{
    compression_identity, hereditary_compression, intersect, is_minimizing_subalgebra,
    is_projective, least_minimizing_algebra, projective_equivalence, rank_one_sweep,
    relative_radon_nikodym, restricted_transition_probability, support_case_analysis, Automorphism,
    AutomorphismProbe, LeastAlgebraDecision, LeastAlgebraProbes,
};

use crate::scenario::{
    to_wire, AnalysisRequest, LeastExpectation, MinsetExpectation, Scenario, Tolerances,
};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, Serialize)]
pub struct FailureEntry {
    pub invariant: String,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub op: String,
    pub status: Status,
    pub values: Value,
    pub failures: Vec<FailureEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: String,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub analyses: Vec<AnalysisReport>,
    pub passes: usize,
    pub failures: usize,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.failures == 0
    }
}

struct Outcome {
    values: Value,
    failures: Vec<FailureEntry>,
    verdict: bool, // whether this op carries a pass/fail verdict at all
}

impl Outcome {
    fn info(values: Value) -> Outcome {
        Outcome {
            values,
            failures: Vec::new(),
            verdict: false,
        }
    }

    fn checked(values: Value) -> Outcome {
        Outcome {
            values,
            failures: Vec::new(),
            verdict: true,
        }
    }

    fn fail(mut self, invariant: &str, residual: f64) -> Outcome {
        self.failures.push(FailureEntry {
            invariant: invariant.into(),
            residual,
        });
        self.verdict = true;
        self
    }

    fn check(self, invariant: &str, ok: bool, residual: f64) -> Outcome {
        if ok {
            let mut o = self;
            o.verdict = true;
            o
        } else {
            self.fail(invariant, residual)
        }
    }
}

pub fn run_scenario(scenario: &Scenario) -> Result<Report, CliError> {
    let tol = scenario.tolerances;
    let mut analyses = Vec::with_capacity(scenario.analyses.len());
    let mut passes = 0;
    let mut failures = 0;
    for request in &scenario.analyses {
        let op = op_name(request);
        let outcome = match run_analysis(scenario, request, &tol) {
            Ok(outcome) => outcome,
            // violated internal identities are analysis failures, not
            // input errors
            Err(CliError::Core(bures_core::Error::RoutesDisagree { context, lhs, rhs })) => {
                Outcome::checked(json!({ "lhs": lhs, "rhs": rhs })).fail(
                    &format!("independent routes disagree in {context}"),
                    (lhs - rhs).abs(),
                )
            }
            Err(other) => return Err(other),
        };
        let status = if !outcome.failures.is_empty() {
            failures += 1;
            Status::Fail
        } else if outcome.verdict {
            passes += 1;
            Status::Pass
        } else {
            Status::Info
        };
        analyses.push(AnalysisReport {
            op: op.to_string(),
            status,
            values: outcome.values,
            failures: outcome.failures,
        });
    }
    Ok(Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: scenario.seed,
        tolerances: tol,
        analyses,
        passes,
        failures,
    })
}

fn op_name(request: &AnalysisRequest) -> &'static str {
    match request {
        AnalysisRequest::Fidelity { .. } => "fidelity",
        AnalysisRequest::GammaSup { .. } => "gamma_sup",
        AnalysisRequest::Uhlmann { .. } => "uhlmann",
        AnalysisRequest::Bounds { .. } => "bounds",
        AnalysisRequest::GeometricMean { .. } => "geometric_mean",
        AnalysisRequest::ArithmeticMean { .. } => "arithmetic_mean",
        AnalysisRequest::Minimize { .. } => "minimize",
        AnalysisRequest::DecompositionValue { .. } => "decomposition_value",
        AnalysisRequest::DoubleSystemValue { .. } => "double_system_value",
        AnalysisRequest::Sequence { .. } => "sequence",
        AnalysisRequest::Tau { .. } => "tau",
        AnalysisRequest::FactorizationFidelity { .. } => "factorization_fidelity",
        AnalysisRequest::BuresVariational { .. } => "bures_variational",
        AnalysisRequest::Subadditivity { .. } => "subadditivity",
        AnalysisRequest::Minset { .. } => "minset",
        AnalysisRequest::MinimizingElement { .. } => "minimizing_element",
        AnalysisRequest::InverseIdentity { .. } => "inverse_identity",
        AnalysisRequest::RestrictedP { .. } => "restricted_p",
        AnalysisRequest::MinimizingSubalgebra { .. } => "minimizing_subalgebra",
        AnalysisRequest::Projective { .. } => "projective",
        AnalysisRequest::RelativeRn { .. } => "relative_rn",
        AnalysisRequest::CompressionIdentity { .. } => "compression_identity",
        AnalysisRequest::Intersect { .. } => "intersect",
        AnalysisRequest::LeastAlgebra { .. } => "least_algebra",
        AnalysisRequest::Hereditary { .. } => "hereditary",
        AnalysisRequest::SupportCase { .. } => "support_case",
        AnalysisRequest::ProjectiveEquivalence { .. } => "projective_equivalence",
        AnalysisRequest::Sweep { .. } => "sweep",
    }
}

fn run_analysis(
    sc: &Scenario,
    request: &AnalysisRequest,
    tol: &Tolerances,
) -> Result<Outcome, CliError> {
    Ok(match request {
        AnalysisRequest::Fidelity {
            nu,
            rho,
            expect_sqrt_p,
        } => {
            let fid = transition_probability(sc.form(nu)?, sc.form(rho)?)?;
            let values = json!({
                "sqrt_p": fid.sqrt_p,
                "p": fid.p(),
                "bures_distance": fid.bures_distance,
                "norms": [fid.norms.0, fid.norms.1],
            });
            match expect_sqrt_p {
                Some(expected) => {
                    let residual = (fid.sqrt_p - expected).abs();
                    Outcome::checked(values).check(
                        "sqrt_p matches the expectation",
                        residual <= tol.check * (1.0 + expected.abs()),
                        residual,
                    )
                }
                None => Outcome::info(values),
            }
        }
        AnalysisRequest::GammaSup { nu, rho, z } => {
            let value = gamma_sup(sc.form(nu)?, sc.form(rho)?, sc.element(z)?)?;
            Outcome::checked(json!({ "sup": value }))
        }
        AnalysisRequest::Uhlmann { mu, a, b } => {
            let verdict = check_uhlmann_formula(sc.form(mu)?, sc.element(a)?, sc.element(b)?)?;
            let values = json!({
                "sqrt_p": verdict.sqrt_p,
                "pairing": verdict.pairing,
                "residual": verdict.residual,
            });
            Outcome::checked(values).check(
                "inner-derivation fidelity formula",
                verdict.pass,
                verdict.residual,
            )
        }
        AnalysisRequest::Bounds {
            nu,
            rho,
            a,
            f_value,
        } => {
            let nu = sc.form(nu)?;
            let rho = sc.form(rho)?;
            let f = match f_value {
                Some(f) => *f,
                None => {
                    let one = nu.algebra().identity();
                    let k = gamma_supremizer(nu, rho, &one)?;
                    gamma_member_value(nu, rho, &k, &one)?.norm()
                }
            };
            let verdict = check_bounds(nu, rho, f, sc.element(a)?)?;
            let values = json!({
                "f_value": f,
                "fidelity_lower_slack": verdict.fidelity_lower,
                "fidelity_upper_slack": verdict.fidelity_upper,
                "metric_lower_slack": verdict.metric_lower,
                "metric_upper_slack": verdict.metric_upper,
            });
            Outcome::checked(values).check(
                "all slacks non-negative",
                verdict.pass(1e-9),
                (-verdict.min_slack()).max(0.0),
            )
        }
        AnalysisRequest::GeometricMean { nu, rho, x } => Outcome::info(json!({
            "value": geometric_mean_value(sc.form(nu)?, sc.form(rho)?, sc.element(x)?)?,
        })),
        AnalysisRequest::ArithmeticMean { nu, rho, x } => Outcome::info(json!({
            "value": arithmetic_mean_value(sc.form(nu)?, sc.form(rho)?, sc.element(x)?)?,
        })),
        AnalysisRequest::Minimize {
            nu,
            rho,
            max_iters,
            tol: dtol,
            initial_step,
        } => {
            let defaults = DescentConfig::default();
            let StepRule::Backtracking {
                initial_step: default_step,
            } = defaults.step_rule;
            let config = DescentConfig {
                max_iters: max_iters.unwrap_or(defaults.max_iters),
                tol: dtol.unwrap_or(defaults.tol),
                step_rule: StepRule::Backtracking {
                    initial_step: initial_step.unwrap_or(default_step),
                },
            };
            let trace = minimize_arithmetic(sc.form(nu)?, sc.form(rho)?, &config)?;
            Outcome::info(json!({
                "converged": trace.converged,
                "stop": trace.stop,
                "value": trace.final_value(),
                "iterations": trace.iterates.len(),
                "witness": to_wire(&trace.final_x),
            }))
        }
        AnalysisRequest::DecompositionValue { nu, rho, partition } => {
            let d = Decomposition::new(sc.partition(partition)?.atoms().to_vec())?;
            Outcome::info(json!({
                "value": projection_decomposition_value(sc.form(nu)?, sc.form(rho)?, &d)?,
            }))
        }
        AnalysisRequest::DoubleSystemValue { nu, rho, pairs } => {
            let mut resolved = Vec::new();
            for (y, x) in pairs {
                resolved.push((sc.element(y)?.clone(), sc.element(x)?.clone()));
            }
            let system = DoubleSystem::new(resolved, sc.algebra.identity())?;
            Outcome::info(json!({
                "value": double_system_value(sc.form(nu)?, sc.form(rho)?, &system)?,
            }))
        }
        AnalysisRequest::Sequence { nu, rho, xs } => {
            let mut elements = Vec::new();
            for name in xs {
                elements.push(sc.element(name)?.clone());
            }
            let report = sequence_criterion(sc.form(nu)?, sc.form(rho)?, &elements, tol.sequence)?;
            let consistent = report.consistent;
            Outcome::checked(serde_json::to_value(&report).expect("serializable report")).check(
                "attainment criteria are equivalent",
                consistent,
                if consistent { 0.0 } else { 1.0 },
            )
        }
        AnalysisRequest::Tau { nu, rho, z } => {
            let report = tau(sc.form(nu)?, sc.form(rho)?, sc.element(z)?)?;
            let gap = report.upsilon_witness_value - report.tau;
            let values = json!({
                "tau": report.tau,
                "gamma_witness_value": report.gamma_witness_value,
                "witness_value": report.upsilon_witness_value,
                "witness": [to_wire(&report.upsilon_witness.0), to_wire(&report.upsilon_witness.1)],
            });
            Outcome::checked(values).check("minimal witness within 1e-4", report.witness_ok, gap)
        }
        AnalysisRequest::FactorizationFidelity { nu, rho, a, b } => Outcome::checked(json!({
            "value": factorization_fidelity(sc.form(nu)?, sc.form(rho)?, sc.element(a)?, sc.element(b)?)?,
        })),
        AnalysisRequest::BuresVariational {
            nu,
            rho,
            a,
            b,
            witnesses,
        } => {
            let mut gs = Vec::new();
            for name in witnesses {
                gs.push(sc.element(name)?.clone());
            }
            let report = bures_variational(
                sc.form(nu)?,
                sc.form(rho)?,
                sc.element(a)?,
                sc.element(b)?,
                &gs,
            )?;
            let values = json!({
                "oracle_sq": report.oracle_sq,
                "witness_values": report.witness_values,
                "best_gap": report.best_gap,
            });
            let ok = report.upper_violations.is_empty();
            Outcome::checked(values).check(
                "witness values stay below the oracle",
                ok,
                report.upper_violations.len() as f64,
            )
        }
        AnalysisRequest::Subadditivity {
            nu,
            rho,
            a,
            b,
            split,
        } => {
            let mut resolved = Vec::new();
            for (aj, bj) in split {
                resolved.push((sc.element(aj)?.clone(), sc.element(bj)?.clone()));
            }
            let verdict = subadditivity_check(
                sc.form(nu)?,
                sc.form(rho)?,
                &resolved,
                sc.element(a)?,
                sc.element(b)?,
            )?;
            let values = json!({
                "lhs": verdict.lhs,
                "rhs_sum": verdict.rhs_sum,
                "slack": verdict.slack,
            });
            Outcome::checked(values).check("subadditivity", verdict.pass, (-verdict.slack).max(0.0))
        }
        AnalysisRequest::Minset { nu, rho, expect } => {
            let desc = min_set(sc.form(nu)?, sc.form(rho)?)?;
            let status_label = match &desc.status {
                MinSetStatus::NonEmpty => "non_empty".to_string(),
                MinSetStatus::Empty(reason) => format!("empty: {reason}"),
            };
            let values = json!({
                "status": status_label,
                "unique": desc.unique,
                "kernel_dimension": desc.kernel_dimension,
                "representative": desc.representative.as_ref().map(to_wire),
            });
            match expect {
                Some(expected) => {
                    let ok = matches!(
                        (expected, &desc.status),
                        (MinsetExpectation::NonEmpty, MinSetStatus::NonEmpty)
                            | (
                                MinsetExpectation::OrthogonalForms,
                                MinSetStatus::Empty(EmptyReason::OrthogonalForms)
                            )
                            | (
                                MinsetExpectation::FaithfulnessMismatch,
                                MinSetStatus::Empty(EmptyReason::FaithfulnessMismatch)
                            )
                            | (
                                MinsetExpectation::SupportMismatch,
                                MinSetStatus::Empty(EmptyReason::SupportMismatch)
                            )
                    );
                    Outcome::checked(values).check(
                        "minimizing-set status matches the expectation",
                        ok,
                        if ok { 0.0 } else { 1.0 },
                    )
                }
                None => Outcome::info(values),
            }
        }
        AnalysisRequest::MinimizingElement { nu, rho, x, expect } => {
            let is_min = is_minimizing_element(
                sc.form(nu)?,
                sc.form(rho)?,
                sc.element(x)?,
                tol.minimizing_element,
            )?;
            let values = json!({ "minimizing": is_min });
            match expect {
                Some(expected) => Outcome::checked(values).check(
                    "membership matches the expectation",
                    is_min == *expected,
                    if is_min == *expected { 0.0 } else { 1.0 },
                ),
                None => Outcome::info(values),
            }
        }
        AnalysisRequest::InverseIdentity { nu, rho, z, x } => {
            let res = inverse_perturbation_identity(
                sc.form(nu)?,
                sc.form(rho)?,
                sc.element(z)?,
                sc.element(x)?,
            )?;
            let worst = res.max();
            Outcome::checked(serde_json::to_value(&res).expect("serializable residuals")).check(
                "perturbation identities",
                worst <= 1e-9,
                worst,
            )
        }
        AnalysisRequest::RestrictedP { nu, rho, partition } => Outcome::info(json!({
            "value": restricted_transition_probability(sc.form(nu)?, sc.form(rho)?, sc.partition(partition)?)?,
        })),
        AnalysisRequest::MinimizingSubalgebra {
            nu,
            rho,
            partition,
            expect,
        } => {
            let is_min = is_minimizing_subalgebra(
                sc.form(nu)?,
                sc.form(rho)?,
                sc.partition(partition)?,
                tol.minimizing,
            )?;
            let values = json!({ "minimizing": is_min });
            match expect {
                Some(expected) => Outcome::checked(values).check(
                    "verdict matches the expectation",
                    is_min == *expected,
                    if is_min == *expected { 0.0 } else { 1.0 },
                ),
                None => Outcome::info(values),
            }
        }
        AnalysisRequest::Projective {
            nu,
            rho,
            partition,
            expect,
        } => {
            let is_proj = is_projective(
                sc.form(nu)?,
                sc.form(rho)?,
                sc.partition(partition)?,
                bures_core::tol::PROJECTIVE_REL,
            )?;
            let values = json!({ "projective": is_proj });
            match expect {
                Some(expected) => Outcome::checked(values).check(
                    "verdict matches the expectation",
                    is_proj == *expected,
                    if is_proj == *expected { 0.0 } else { 1.0 },
                ),
                None => Outcome::info(values),
            }
        }
        AnalysisRequest::RelativeRn { nu, rho, partition } => {
            let z = relative_radon_nikodym(sc.form(nu)?, sc.form(rho)?, sc.partition(partition)?)?;
            Outcome::info(json!({ "witness": to_wire(&z) }))
        }
        AnalysisRequest::CompressionIdentity {
            nu,
            rho,
            partition,
            p,
        } => {
            let verdict = compression_identity(
                sc.form(nu)?,
                sc.form(rho)?,
                sc.partition(partition)?,
                sc.element(p)?,
            )?;
            Outcome::checked(json!({ "residual": verdict.residual })).check(
                "compression identity",
                verdict.pass,
                verdict.residual,
            )
        }
        AnalysisRequest::Intersect { r1, r2 } => {
            let meet = intersect(sc.partition(r1)?, sc.partition(r2)?)?;
            Outcome::info(json!({
                "atoms": meet.atoms().iter().map(to_wire).collect::<Vec<_>>(),
                "count": meet.len(),
                "trivial": meet.is_trivial(),
            }))
        }
        AnalysisRequest::LeastAlgebra {
            nu,
            rho,
            probes,
            expect,
        } => {
            let mut resolved = LeastAlgebraProbes::default();
            if let Some(spec) = probes {
                if let Some(name) = &spec.generator {
                    resolved.generator = Some(sc.element(name)?.clone());
                }
                for name in &spec.kernel_elements {
                    resolved.kernel_elements.push(sc.element(name)?.clone());
                }
                for auto in &spec.automorphisms {
                    let map =
                        match (&auto.unitary, &auto.permutation) {
                            (Some(u), None) => Automorphism::Unitary(sc.element(u)?.clone()),
                            (None, Some(p)) => Automorphism::BlockPermutation(p.clone()),
                            _ => return Err(CliError::Validation(
                                "automorphism probe needs exactly one of `unitary`, `permutation`"
                                    .into(),
                            )),
                        };
                    resolved.automorphisms.push(AutomorphismProbe {
                        map,
                        k: sc.element(&auto.k)?.clone(),
                    });
                }
                resolved.extra_shifts = spec.shifts.clone();
            }
            let verdict = least_minimizing_algebra(sc.form(nu)?, sc.form(rho)?, &resolved)?;
            let (label, reason) = match &verdict.decision {
                LeastAlgebraDecision::Exists(_) => ("exists".to_string(), String::new()),
                LeastAlgebraDecision::NotExists(r) => ("not_exists".to_string(), r.to_string()),
                LeastAlgebraDecision::Undecided(r) => ("undecided".to_string(), r.to_string()),
            };
            let algebra_atoms = match &verdict.decision {
                LeastAlgebraDecision::Exists(r) => {
                    Some(r.atoms().iter().map(to_wire).collect::<Vec<_>>())
                }
                _ => None,
            };
            let values = json!({
                "decision": label,
                "reason": reason,
                "lambda0": verdict.lambda0,
                "spectrum_cardinality_ok": verdict.spectrum_cardinality_ok,
                "candidate_atoms": verdict.candidate.len(),
                "r_infinity_atoms": verdict.r_infinity.len(),
                "probe_shifts": verdict.probe_shifts,
                "algebra": algebra_atoms,
            });
            match expect {
                Some(expected) => {
                    let ok = matches!(
                        (expected, &verdict.decision),
                        (LeastExpectation::Exists, LeastAlgebraDecision::Exists(_))
                            | (
                                LeastExpectation::NotExists,
                                LeastAlgebraDecision::NotExists(_)
                            )
                            | (
                                LeastExpectation::Undecided,
                                LeastAlgebraDecision::Undecided(_)
                            )
                    );
                    Outcome::checked(values).check(
                        "decision matches the expectation",
                        ok,
                        if ok { 0.0 } else { 1.0 },
                    )
                }
                None => Outcome::info(values),
            }
        }
        AnalysisRequest::Hereditary { nu, rho } => {
            let comp = hereditary_compression(sc.form(nu)?, sc.form(rho)?)?;
            let values = json!({
                "compressed_block_dims": comp.algebra.block_dims(),
                "spectrum": comp.spectrum,
                "spectrum_compressed": comp.spectrum_q,
            });
            Outcome::checked(values).check(
                "point-spectrum relation",
                comp.spectrum_relation_ok,
                if comp.spectrum_relation_ok { 0.0 } else { 1.0 },
            )
        }
        AnalysisRequest::SupportCase { x } => {
            let report = support_case_analysis(sc.element(x)?)?;
            let values = json!({
                "case": report.case,
                "r0_atoms": report.r0.len(),
                "probes": report.probes,
            });
            Outcome::checked(values).check(
                "case relation",
                report.relation_ok,
                if report.relation_ok { 0.0 } else { 1.0 },
            )
        }
        AnalysisRequest::ProjectiveEquivalence { nu, rho, partition } => {
            let report =
                projective_equivalence(sc.form(nu)?, sc.form(rho)?, sc.partition(partition)?)?;
            let values = json!({
                "inner_projective_exists": report.lhs_exists,
                "compression_identity_holds": report.rhs_holds,
                "rhs_residual": report.rhs_residual,
            });
            Outcome::checked(values).check(
                "two sides agree",
                report.agree,
                if report.agree { 0.0 } else { 1.0 },
            )
        }
        AnalysisRequest::Sweep {
            nu,
            rho,
            grid,
            tol: sweep_tol,
        } => {
            let report = rank_one_sweep(
                sc.form(nu)?,
                sc.form(rho)?,
                *grid,
                sweep_tol.unwrap_or(1e-7),
                Parallelism::default(),
            )?;
            Outcome::info(json!({
                "p_m": report.p_m,
                "attained": report.attained,
                "trivial_gap": report.trivial_gap,
            }))
        }
    })
}
