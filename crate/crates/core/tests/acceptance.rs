//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{binary_entropy, random_depth1, random_depth2, random_sft, rng, second_differences};
use rand::Rng;
use thermo_core::dimension::Branch;
use thermo_core::estimators::katok_entropy_by_types;
use thermo_core::{
    brute_force_constrained, constrained_pressure, dimension_spectrum, flow_entropy_spectrum,
    flow_topological_entropy, full_pressure_point, higher_block_recode, katok_entropy_estimate,
    level_set_dimension, level_set_pressure_estimate, pressure, spectrum_curve, spectrum_domain,
    IntervalMapModel, MarkovMeasure, Potential, SftSystem, SuspensionSystem,
};

struct Check {
    ok: bool,
    detail: String,
}

impl Check {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Check { ok, detail: detail.into() }
    }
}

fn run(id: u32, title: &str, budget: Option<Duration>, body: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let (mut ok, mut detail) = match outcome {
        Ok(c) => (c.ok, c.detail),
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        }
    };
    if let Some(limit) = budget {
        if elapsed > limit {
            ok = false;
            detail = format!("{detail}; over time budget {limit:?}");
        }
    }
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("{tag} criterion {id}: {title} [{:.2?}] {detail}", elapsed);
    ok
}

fn full2() -> SftSystem {
    SftSystem::full_shift(2).unwrap()
}

fn binomial_sum(n: u64, lo: u64, hi: u64) -> f64 {
    (lo..=hi)
        .map(|k| (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64))
        .sum()
}

fn criterion_1() -> Check {
    let sft = full2();
    let phi = Potential::indicator(&sft, 1);
    let zero = Potential::zero(&sft);
    let mut worst: f64 = 0.0;
    for alpha in [0.1, 0.3, 0.5, 0.7] {
        let c = constrained_pressure(&sft, &phi, &zero, alpha).unwrap();
        worst = worst.max((c.value - binary_entropy(alpha)).abs());
    }
    let at_03 = constrained_pressure(&sft, &phi, &zero, 0.3).unwrap().value;
    Check::new(
        worst <= 1e-8 && (at_03 - 0.610864).abs() < 5e-7,
        format!("max error {worst:.2e}, F(0.3) = {at_03:.9}"),
    )
}

fn criterion_2() -> Check {
    let mut r = rng(0x5eed_0002);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for i in 0..25 {
        let sft = random_sft(&mut r, 2 + i % 2);
        let phi = random_depth1(&mut r, &sft, 1.0);
        let psi = random_depth1(&mut r, &sft, 1.0);
        let d = spectrum_domain(&sft, &phi).unwrap();
        for _ in 0..3 {
            let alpha = d.min + r.gen_range(0.1..0.9) * d.width();
            let dual = constrained_pressure(&sft, &phi, &psi, alpha).unwrap().value;
            let oracle = brute_force_constrained(&sft, &phi, &psi, alpha, 200).unwrap();
            worst = worst.max((dual - oracle).abs());
            cases += 1;
        }
    }
    Check::new(worst <= 1e-4, format!("{cases} cases, max |duality - oracle| = {worst:.2e}"))
}

fn criterion_3() -> Check {
    let sft = full2();
    let phi = Potential::indicator(&sft, 1);
    let zero = Potential::zero(&sft);
    let f = constrained_pressure(&sft, &phi, &zero, 0.3).unwrap().value;

    let at_20 = level_set_pressure_estimate(&sft, &phi, &zero, 0.3, 0.05, 20).unwrap();
    let v20 = at_20.value.unwrap();
    let exact = binomial_sum(20, 5, 7).ln() / 20.0;
    let exact_ok = (v20 - exact).abs() <= 1e-9;
    let near_ok = (v20 - f).abs() <= 0.06;

    let gaps: Vec<f64> = [10, 14, 18, 22]
        .iter()
        .map(|&n| {
            let e = level_set_pressure_estimate(&sft, &phi, &zero, 0.3, 0.05, n).unwrap();
            (e.value.unwrap() - f).abs()
        })
        .collect();
    let trend_ok = gaps.windows(2).all(|w| w[1] <= w[0]);
    Check::new(
        exact_ok && near_ok && trend_ok,
        format!(
            "n=20 value {v20:.10} (exact {exact:.10}, {}), |value - F| = {:.4} ({}), gaps n=10,14,18,22: {} ({})",
            if exact_ok { "ok" } else { "mismatch" },
            (v20 - f).abs(),
            if near_ok { "ok" } else { "too far" },
            gaps.iter().map(|g| format!("{g:.5}")).collect::<Vec<_>>().join(", "),
            if trend_ok { "nonincreasing" } else { "not nonincreasing" },
        ),
    )
}

fn criterion_4() -> Check {
    let sft = full2();
    let golden = SftSystem::golden_mean();
    let cases = [
        (sft.clone(), Potential::indicator(&sft, 1), Potential::zero(&sft)),
        (sft.clone(), Potential::indicator(&sft, 1), Potential::indicator(&sft, 1)),
        (golden.clone(), Potential::indicator(&golden, 1), Potential::zero(&golden)),
    ];
    let mut worst: f64 = 0.0;
    let mut all = true;
    for (s, phi, psi) in &cases {
        let p = full_pressure_point(s, phi, psi).unwrap();
        worst = worst.max(p.check);
        all &= p.passes();
    }
    Check::new(all && worst <= 1e-8, format!("max |F(alpha*) - P(psi)| = {worst:.2e}"))
}

fn criterion_5() -> Check {
    let sft = full2();
    let phi = Potential::indicator(&sft, 1);
    let zero = Potential::zero(&sft);

    let unit = SuspensionSystem::new(sft.clone(), Potential::constant(&sft, 1.0), phi.clone()).unwrap();
    let mut unit_err: f64 = 0.0;
    for alpha in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let flow = flow_entropy_spectrum(&unit, alpha).unwrap().entropy;
        let base = constrained_pressure(&sft, &phi, &zero, alpha).unwrap().value;
        unit_err = unit_err.max((flow - base).abs());
    }

    let double = SuspensionSystem::new(sft.clone(), Potential::constant(&sft, 2.0), phi.clone()).unwrap();
    let mut double_err: f64 = 0.0;
    for alpha in [0.05, 0.15, 0.25, 0.35] {
        let flow = flow_entropy_spectrum(&double, alpha).unwrap().entropy;
        double_err = double_err.max((flow - binary_entropy(2.0 * alpha) / 2.0).abs());
    }
    let at_015 = flow_entropy_spectrum(&double, 0.15).unwrap().entropy;

    let roof = Potential::from_symbol_values(&sft, &[1.0, 2.0]).unwrap();
    let two_level = SuspensionSystem::new(sft.clone(), roof, phi).unwrap();
    let h = flow_entropy_spectrum(&two_level, 1.0 / 3.0).unwrap().entropy;
    let two_err = (h - 2f64.ln() / 1.5).abs();

    Check::new(
        unit_err <= 1e-8 && double_err <= 1e-8 && two_err <= 1e-8 && (at_015 - 0.305432).abs() < 5e-7,
        format!(
            "unit roof {unit_err:.2e}, roof 2 {double_err:.2e} (h(0.15) = {at_015:.9}), two-level {two_err:.2e} (h = {h:.9})"
        ),
    )
}

fn criterion_6() -> Check {
    let sft = full2();
    let golden = SftSystem::golden_mean();
    let systems = [
        SuspensionSystem::new(
            sft.clone(),
            Potential::from_symbol_values(&sft, &[1.0, 2.0]).unwrap(),
            Potential::indicator(&sft, 1),
        )
        .unwrap(),
        SuspensionSystem::new(
            sft.clone(),
            Potential::from_fn(&sft, 2, |w| 0.5 + w[0] as f64 + 0.25 * w[1] as f64).unwrap(),
            Potential::from_symbol_values(&sft, &[0.3, -0.4]).unwrap(),
        )
        .unwrap(),
        SuspensionSystem::with_fiber_constant(
            golden.clone(),
            Potential::from_symbol_values(&golden, &[0.7, 1.9]).unwrap(),
            &Potential::indicator(&golden, 1),
        )
        .unwrap(),
    ];
    // roof (1, 2): h_top solves e^-h + e^-2h = 1
    let golden_log = (0.5 * (1.0 + 5f64.sqrt())).ln();
    let mut worst = (flow_topological_entropy(&systems[0]).unwrap() - golden_log).abs();
    for sys in &systems {
        let (alpha, h_top) = sys.maximal_entropy_level().unwrap();
        let direct = flow_topological_entropy(sys).unwrap();
        let at = flow_entropy_spectrum(sys, alpha).unwrap().entropy;
        worst = worst.max((at - h_top).abs()).max((direct - h_top).abs());
    }
    Check::new(worst <= 1e-8, format!("3 roofs, max |spectrum(alpha_max) - h_top| = {worst:.2e}"))
}

fn criterion_7() -> Check {
    let map = IntervalMapModel::doubling();
    let sft = full2();
    let phi = Potential::indicator(&sft, 1);
    let mut worst: f64 = 0.0;
    let mut worst_residual: f64 = 0.0;
    for alpha in [0.25, 0.5, 0.75] {
        let d = level_set_dimension(&map, &phi, alpha).unwrap();
        worst = worst.max((d.dim - binary_entropy(alpha) / 2f64.ln()).abs());
        worst_residual = worst_residual.max(d.residual.abs());
    }
    for d in dimension_spectrum(&map, &phi, 9).unwrap() {
        worst_residual = worst_residual.max(d.residual.abs());
    }

    let model = IntervalMapModel::new(vec![
        Branch { left: 0.0, right: 0.5, slope: 2.0 },
        Branch { left: 0.5, right: 0.75, slope: 4.0 },
        Branch { left: 0.75, right: 1.0, slope: 4.0 },
    ])
    .unwrap();
    let three = SftSystem::full_shift(3).unwrap();
    let lyapunov = Potential::from_symbol_values(&three, &[2f64.ln(), 4f64.ln(), 4f64.ln()]).unwrap();
    let d = level_set_dimension(&model, &lyapunov, 1.5 * 2f64.ln()).unwrap();
    worst_residual = worst_residual.max(d.residual.abs());
    let lebesgue_err = (d.dim - 1.0).abs();

    Check::new(
        worst <= 1e-6 && lebesgue_err <= 1e-8 && worst_residual <= 1e-8,
        format!(
            "Eggleston error {worst:.2e}, (2,4,4) dim error {lebesgue_err:.2e}, max residual {worst_residual:.2e}"
        ),
    )
}

fn criterion_8() -> Check {
    let sft = full2();
    let zero = Potential::zero(&sft);
    let fair = MarkovMeasure::bernoulli(&sft, &[0.5, 0.5]).unwrap();
    let biased = MarkovMeasure::bernoulli(&sft, &[0.8, 0.2]).unwrap();
    let h_biased = -(0.8f64 * 0.8f64.ln() + 0.2 * 0.2f64.ln());

    let fair_20 = katok_entropy_estimate(&sft, &fair, &zero, 0.1, 20).unwrap().value.unwrap();
    let fair_target = 943_719f64.ln() / 20.0;
    let fair_ok = (fair_20 - fair_target).abs() <= 1e-9;

    let biased_14 = katok_entropy_estimate(&sft, &biased, &zero, 0.1, 14).unwrap().value.unwrap();
    let biased_ok = (biased_14 - h_biased).abs() <= 0.08;

    let fair_gaps: Vec<f64> = [8, 12, 16, 20]
        .iter()
        .map(|&n| {
            let v = katok_entropy_estimate(&sft, &fair, &zero, 0.1, n).unwrap().value.unwrap();
            (v - 2f64.ln()).abs()
        })
        .collect();
    let biased_gaps: Vec<f64> = [48, 96, 192]
        .iter()
        .map(|&n| {
            let v = katok_entropy_by_types(&sft, &biased, &zero, 0.1, n).unwrap().value.unwrap();
            (v - h_biased).abs()
        })
        .collect();
    let decreasing = |g: &[f64]| g.windows(2).all(|w| w[1] < w[0]);
    let trend_ok = decreasing(&fair_gaps) && decreasing(&biased_gaps);

    let fmt = |g: &[f64]| g.iter().map(|x| format!("{x:.5}")).collect::<Vec<_>>().join(", ");
    Check::new(
        fair_ok && biased_ok && trend_ok,
        format!(
            "fair n=20 {fair_20:.10} (target {fair_target:.10}), biased n=14 {biased_14:.6} vs h {h_biased:.6}; \
             gaps fair n=8..20: {}; biased n=48,96,192: {}",
            fmt(&fair_gaps),
            fmt(&biased_gaps)
        ),
    )
}

fn criterion_9() -> Check {
    let mut r = rng(0x5eed_0009);
    let instances = 24;
    let mut failures = Vec::new();

    let mut convex_worst = f64::INFINITY;
    let mut concave_worst = f64::NEG_INFINITY;
    let mut shift_worst: f64 = 0.0;
    let mut monotone_worst = f64::NEG_INFINITY;
    let mut recode_worst: f64 = 0.0;
    let mut cohomology_worst: f64 = 0.0;

    for i in 0..instances {
        let size = 2 + i % 3;
        let sft = random_sft(&mut r, size);
        let phi = random_depth1(&mut r, &sft, 1.0);
        let psi = random_depth2(&mut r, &sft, 1.0);

        let qs: Vec<f64> = (0..25).map(|k| -3.0 + 0.25 * k as f64).collect();
        let ps: Vec<f64> = qs
            .iter()
            .map(|&q| {
                let t = Potential::linear_combination(&sft, &[(1.0, &psi), (q, &phi)]).unwrap();
                pressure(&sft, &t).unwrap()
            })
            .collect();
        convex_worst = second_differences(&ps).into_iter().fold(convex_worst, f64::min);

        let curve = spectrum_curve(&sft, &phi, &psi, 21).unwrap();
        let values: Vec<f64> = curve.points.iter().map(|p| p.value).collect();
        concave_worst = second_differences(&values).into_iter().fold(concave_worst, f64::max);

        let p = pressure(&sft, &psi).unwrap();
        let c = r.gen_range(-5.0..5.0);
        let shifted = Potential::linear_combination(&sft, &[(1.0, &psi), (c, &Potential::constant(&sft, 1.0))]).unwrap();
        shift_worst = shift_worst.max((pressure(&sft, &shifted).unwrap() - (p + c)).abs());

        let bump = random_depth2(&mut r, &sft, 1.0);
        let above = Potential::from_fn(&sft, 2, |w| psi.value(w).unwrap() + bump.value(w).unwrap().abs()).unwrap();
        monotone_worst = monotone_worst.max(p - pressure(&sft, &above).unwrap());

        // Recoding: view the data as depth-3 potentials and recode to 2-blocks.
        let phi3 = phi.lift(&sft, 3).unwrap();
        let psi3 = psi.lift(&sft, 3).unwrap();
        let rec = higher_block_recode(&sft, &[phi3, psi3]).unwrap();
        let (rphi, rpsi) = (&rec.potentials[0], &rec.potentials[1]);
        let d0 = spectrum_domain(&sft, &phi).unwrap();
        let d1 = spectrum_domain(&rec.sft, rphi).unwrap();
        let mid = d0.min + 0.4 * d0.width();
        let f0 = constrained_pressure(&sft, &phi, &psi, mid).unwrap().value;
        let f1 = constrained_pressure(&rec.sft, rphi, rpsi, mid).unwrap().value;
        let p1 = pressure(&rec.sft, rpsi).unwrap();
        recode_worst = recode_worst
            .max((d0.min - d1.min).abs())
            .max((d0.max - d1.max).abs())
            .max((f0 - f1).abs())
            .max((p - p1).abs());

        let h: Vec<f64> = (0..size).map(|_| r.gen_range(-2.0..2.0)).collect();
        let cob = Potential::from_fn(&sft, 2, |w| phi.value(&w[..1]).unwrap() + h[w[0]] - h[w[1]]).unwrap();
        let d2 = spectrum_domain(&sft, &cob).unwrap();
        cohomology_worst = cohomology_worst.max((d0.min - d2.min).abs()).max((d0.max - d2.max).abs());
    }

    let mut check = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
    };
    check("convexity", convex_worst >= -1e-9);
    check("concavity", concave_worst <= 1e-7);
    check("constant shift", shift_worst <= 1e-10);
    check("monotonicity", monotone_worst <= 1e-12);
    check("recoding", recode_worst <= 1e-10);
    check("cohomology", cohomology_worst <= 1e-10);

    Check::new(
        failures.is_empty(),
        format!(
            "{instances} instances; min d2P {convex_worst:.1e}, max d2F {concave_worst:.1e}, shift {shift_worst:.1e}, \
             monotone {monotone_worst:.1e}, recoding {recode_worst:.1e}, cohomology {cohomology_worst:.1e}{}",
            if failures.is_empty() { String::new() } else { format!("; failed: {}", failures.join(", ")) }
        ),
    )
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let results = [
        run(1, "binary entropy closed form", Some(secs(1)), criterion_1),
        run(2, "duality vs brute-force oracle", Some(secs(120)), criterion_2),
        run(3, "definition-level level-set estimate", None, criterion_3),
        run(4, "full pressure point", None, criterion_4),
        run(5, "suspension flow spectra", None, criterion_5),
        run(6, "maximal-entropy level of flows", None, criterion_6),
        run(7, "Bowen-formula dimensions", None, criterion_7),
        run(8, "Katok estimator", None, criterion_8),
        run(9, "property suites", Some(secs(300)), criterion_9),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
