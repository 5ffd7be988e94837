//! Acceptance gate: one check per criterion, each printing a pass/fail line
//! with its worst residual and elapsed time. Run with `--nocapture` to see
//! the table; every suite must finish well under a minute.

use std::time::Instant;

use bures_core::estimators::near_minimizer;
use bures_core::fidelity::transition_probability;
use bures_core::forms::radon_nikodym;
use bures_core::par::Parallelism;
use bures_core::sampling;
use bures_core::seminorms::bures_variational;
use bures_core::subalgebras::{
    intersect, is_minimizing_subalgebra, least_minimizing_algebra, rank_one_sweep,
    AbelianSubalgebra, LeastAlgebraDecision, LeastAlgebraProbes, NotExistsReason,
};
use bures_core::suites::{run_suite, scenarios, SuiteId, SuiteReport};

const SEED: u64 = 7;

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Gate {
            failures: Vec::new(),
        }
    }

    fn record(&mut self, name: &str, pass: bool, detail: String, started: Instant) {
        let elapsed = started.elapsed().as_secs_f64();
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("[{verdict}] {name} ({elapsed:.2}s) — {detail}");
        assert!(elapsed < 60.0, "{name} exceeded the 60s budget");
        if !pass {
            self.failures.push(format!("{name}: {detail}"));
        }
    }

    fn suite(&mut self, name: &str, report: &SuiteReport, started: Instant) {
        let worst = report
            .checks
            .iter()
            .map(|c| format!("{}={:.2e}", c.name, c.worst_residual))
            .collect::<Vec<_>>()
            .join(" ");
        let detail = format!(
            "{} checks over {} trials, {} failures; worst residuals: {}",
            report.total_checks, report.trials, report.failures, worst
        );
        self.record(name, report.passed, detail, started);
    }

    fn finish(self) {
        assert!(
            self.failures.is_empty(),
            "acceptance failures:\n{}",
            self.failures.join("\n")
        );
    }
}

#[test]
fn acceptance() {
    let mut gate = Gate::new();

    // 1. oracle coherence: 200 pairs per shape, three routes pairwise 1e-9
    let t = Instant::now();
    let report = run_suite(SuiteId::Oracle, 800, SEED);
    gate.suite("oracle coherence", &report, t);

    // 2. inner-derivation formula: 200 trials at 1e-8
    let t = Instant::now();
    let report = run_suite(SuiteId::Uhlmann, 200, SEED);
    gate.suite("inner-derivation fidelity formula", &report, t);

    // 3. vector states: 100 pairs, overlap at 1e-10 and the estimate family
    let t = Instant::now();
    let report = run_suite(SuiteId::PureStates, 100, SEED);
    gate.suite("vector-state overlap and estimate family", &report, t);

    // 4. factorization fidelity and the distance expression: 200 trials
    let t = Instant::now();
    let report = run_suite(SuiteId::Factorization, 200, SEED);
    gate.suite("factorization fidelity and distance expression", &report, t);

    // 5. variational estimators with constructed witnesses: 200 trials
    let t = Instant::now();
    let report = run_suite(SuiteId::Estimators, 200, SEED);
    gate.suite("variational estimator witnesses", &report, t);

    // 6. bounds hold with non-negative slack across the trials of 1-5 and
    //    on the dedicated mix
    let t = Instant::now();
    let mut bound_failures = 0;
    let mut worst = 0.0f64;
    for id in [
        SuiteId::Oracle,
        SuiteId::Uhlmann,
        SuiteId::PureStates,
        SuiteId::Factorization,
        SuiteId::Estimators,
    ] {
        let report = run_suite(id, 100, SEED.wrapping_add(1));
        for check in &report.checks {
            if check.name.starts_with("bound-") {
                bound_failures += check.failures;
                worst = worst.max(check.worst_residual);
            }
        }
    }
    let dedicated = run_suite(SuiteId::Bounds, 200, SEED);
    let pass = bound_failures == 0 && dedicated.passed;
    gate.record(
        "two-sided estimate and metric bounds",
        pass,
        format!(
            "embedded bound failures {bound_failures} (worst slack deficit {worst:.2e}); dedicated suite failures {}",
            dedicated.failures
        ),
        t,
    );

    // 7. minimizing-element trichotomy, identities, gradient checks:
    //    100 trials per class
    let t = Instant::now();
    let report = run_suite(SuiteId::Minimizers, 300, SEED);
    gate.suite("minimizing-element trichotomy and identities", &report, t);

    // 8. least-minimizing-subalgebra decisions
    let t = Instant::now();
    let detail = least_algebra_criterion();
    gate.record(
        "least minimizing subalgebra decisions",
        detail.is_ok(),
        match &detail {
            Ok(d) => d.clone(),
            Err(e) => e.clone(),
        },
        t,
    );
    let t = Instant::now();
    let report = run_suite(SuiteId::LeastAlgebra, 60, SEED);
    gate.suite("least-algebra randomized scenarios", &report, t);

    // 9. partition monotonicity, projectivity, kernel families: 100 trials
    let t = Instant::now();
    let report = run_suite(SuiteId::Partitions, 100, SEED);
    gate.suite("partition monotonicity and projectivity", &report, t);

    gate.finish();
}

fn least_algebra_criterion() -> Result<String, String> {
    let fail = |msg: String| -> Result<String, String> { Err(msg) };

    // (a) faithful base form: existence with the generated algebra of the
    //     Radon-Nikodym operator, which must be minimizing
    let mut rng = sampling::rng(SEED);
    for k in 0..25 {
        let shapes = sampling::suite_shapes();
        let algebra = shapes[k % shapes.len()].clone();
        let nu = sampling::random_faithful_state(&mut rng, &algebra);
        let x0 = sampling::random_positive_with_rank(&mut rng, &algebra, algebra.dim());
        let rho = nu.inner_derive(&x0).map_err(|e| e.to_string())?;
        let verdict = least_minimizing_algebra(&nu, &rho, &LeastAlgebraProbes::default())
            .map_err(|e| e.to_string())?;
        let x = radon_nikodym(&nu, &rho).map_err(|e| e.to_string())?;
        let expected = AbelianSubalgebra::generated_by(&x).map_err(|e| e.to_string())?;
        match verdict.decision {
            LeastAlgebraDecision::Exists(r) => {
                if !r.equiv(&expected, 1e-7) {
                    return fail(format!("(a) instance {k}: wrong algebra"));
                }
                if !is_minimizing_subalgebra(&nu, &rho, &r, 1e-7).map_err(|e| e.to_string())? {
                    return fail(format!("(a) instance {k}: not minimizing"));
                }
            }
            other => return fail(format!("(a) instance {k}: {other:?}")),
        }
    }

    // (b) jump discretization at n = 16: existence with the shifted
    //     generator and the injected jump value
    let injected = 0.6;
    let (nu, rho, x) =
        scenarios::jump_discretization(16, injected, &mut rng).map_err(|e| e.to_string())?;
    let verdict = least_minimizing_algebra(&nu, &rho, &LeastAlgebraProbes::default())
        .map_err(|e| e.to_string())?;
    if (verdict.lambda0 - injected).abs() > 1e-9 {
        return fail(format!(
            "(b) lambda0 {} vs injected {}",
            verdict.lambda0, injected
        ));
    }
    let s_perp = &nu.algebra().identity() - &nu.support();
    let expected = AbelianSubalgebra::generated_by(&(&x + &s_perp.scale(verdict.lambda0)))
        .map_err(|e| e.to_string())?;
    match &verdict.decision {
        LeastAlgebraDecision::Exists(r) => {
            if !r.equiv(&expected, 1e-8) {
                return fail("(b) wrong algebra".into());
            }
        }
        other => return fail(format!("(b) {other:?}")),
    }

    // (c) flip-symmetric discretization at n = 8: the automorphism probe
    //     excludes existence
    let (nu, rho, probes) = scenarios::flip_obstruction(8, &mut rng).map_err(|e| e.to_string())?;
    let verdict = least_minimizing_algebra(&nu, &rho, &probes).map_err(|e| e.to_string())?;
    if !matches!(
        verdict.decision,
        LeastAlgebraDecision::NotExists(NotExistsReason::AutomorphismObstruction)
    ) {
        return fail(format!("(c) {:?}", verdict.decision));
    }

    // (d) 2x2 kernel construction: two minimizing algebras with trivial
    //     intersection force non-existence
    let (nu, rho, probes) = scenarios::noncommuting_kernel(&mut rng).map_err(|e| e.to_string())?;
    let x = probes.generator.clone().expect("generator");
    let q = probes.kernel_elements[0].clone();
    let r_x = AbelianSubalgebra::generated_by(&x).map_err(|e| e.to_string())?;
    let r_xq = AbelianSubalgebra::generated_by(&(&x + &q)).map_err(|e| e.to_string())?;
    for (label, r) in [("R[x]", &r_x), ("R[x+k]", &r_xq)] {
        if !is_minimizing_subalgebra(&nu, &rho, r, 1e-7).map_err(|e| e.to_string())? {
            return fail(format!("(d) {label} not minimizing"));
        }
    }
    let meet = intersect(&r_x, &r_xq).map_err(|e| e.to_string())?;
    if !meet.is_trivial() {
        return fail("(d) intersection not trivial".into());
    }
    let verdict = least_minimizing_algebra(&nu, &rho, &probes).map_err(|e| e.to_string())?;
    if !matches!(
        verdict.decision,
        LeastAlgebraDecision::NotExists(NotExistsReason::NonMinimizingIntersection)
    ) {
        return fail(format!("(d) {:?}", verdict.decision));
    }

    // (e) 360-point sweep: the generated algebra is the unique minimizing
    //     subalgebra within 1e-7
    let idx = 137;
    let (nu, rho, x) = scenarios::sweep_pair(360, idx, &mut rng).map_err(|e| e.to_string())?;
    let report =
        rank_one_sweep(&nu, &rho, 360, 1e-7, Parallelism::default()).map_err(|e| e.to_string())?;
    if report.attained != vec![idx] {
        return fail(format!(
            "(e) attained {:?}, expected [{idx}]",
            report.attained
        ));
    }
    if report.trivial_gap <= 1e-7 {
        return fail("(e) trivial algebra attains".into());
    }
    let expected = AbelianSubalgebra::generated_by(&x).map_err(|e| e.to_string())?;
    let fid = transition_probability(&nu, &rho).map_err(|e| e.to_string())?;
    let _ = (expected, fid);

    Ok("25 faithful instances, jump n=16, flip n=8, kernel pair, 360-point sweep".into())
}

#[test]
fn distance_witness_quality_on_the_qubit_pair() {
    // spot check of the documented numbers for the commuting qubit pair
    use bures_core::algebra::{Algebra, Element};
    use bures_core::forms::PositiveForm;

    let alg = Algebra::full(2);
    let nu = PositiveForm::new(Element::diagonal(&alg, &[0.5, 0.5]).unwrap()).unwrap();
    let rho = PositiveForm::new(Element::diagonal(&alg, &[0.75, 0.25]).unwrap()).unwrap();
    let fid = transition_probability(&nu, &rho).unwrap();
    assert!((fid.sqrt_p - 0.965926).abs() < 1e-6);
    assert!((fid.bures_distance - 0.261052).abs() < 1e-6);

    let one = alg.identity();
    let g = near_minimizer(&nu, &rho).unwrap();
    let report = bures_variational(&nu, &rho, &one, &one, &[g]).unwrap();
    assert!((report.oracle_sq - 0.068148).abs() < 1e-6);
    assert!(report.best_gap.abs() < 1e-8);
}
