//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; the process fails if any criterion does.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex64;

use coherence_lab::figures::{argmax, coherence_curve, figure, FigureId, FigureOptions};
use coherence_lab::infinite::{
    certainty_limit_sweep_populations, default_xi_grid, fock_report, gaussian_coherence_estimate,
};
use coherence_lab::oracle::{beam_splitter_oracle, canonical_sign, relabel_second_mode};
use coherence_lab::overcomplete::{orthogonality_violation, PhaseBasisConfig};
use coherence_lab::quantifiers::{qubit_closed_forms, Evaluator};
use coherence_lab::random::{suite_sample, SampleKind};
use coherence_lab::states::{
    beam_splitter_coefficients, finite_phase_state, qubit_from_bloch, sg_phase_state,
    squeezed_coherent_number_stats, squeezed_coherent_state_with, tmsv_state, Construction,
    TruncationConfig,
};
use coherence_lab::verify::{bloch_grid, DIMENSIONS};
use coherence_lab::{DensityMatrix, PureState, QuantifierReport};

const TRIALS: usize = 1000;
const SEED: u64 = 20240601;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn random_suite() -> Vec<(SampleKind, DensityMatrix)> {
    DIMENSIONS
        .iter()
        .flat_map(|&n| (0..TRIALS).map(move |i| suite_sample(SEED, n, i).unwrap()))
        .collect()
}

fn pythagorean_identity() -> Outcome {
    let start = Instant::now();
    let eval = Evaluator::fast();
    let (mut worst_h, mut worst_hs, mut count) = (0.0f64, 0.0f64, 0usize);
    for &n in &DIMENSIONS {
        let mixed = coherence_lab::density::maximally_mixed(n).unwrap();
        for i in 0..TRIALS {
            let (_, rho) = suite_sample(SEED, n, i).unwrap();
            worst_h = worst_h.max(eval.pythagoras(&rho, &mixed).unwrap().residual.abs());
            worst_hs = worst_hs.max(eval.hs_quantifiers(&rho).unwrap().residual.abs());
            count += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst_h < 1e-10 && worst_hs < 1e-10 && secs < 30.0 && count == 5 * TRIALS,
        format!("{count} states, worst residual H {worst_h:.2e}, HS {worst_hs:.2e}, {secs:.2} s"),
    )
}

fn closed_form_agreement() -> Outcome {
    let mut qubit = 0.0f64;
    let grid = bloch_grid();
    for &s in &grid {
        let cf = qubit_closed_forms(s).unwrap();
        let r = QuantifierReport::from_density(&qubit_from_bloch(s).unwrap()).unwrap();
        qubit = qubit
            .max((r.c_h - cf.c_h).abs())
            .max((r.s_h - cf.s_h).abs())
            .max((r.nc_h - cf.nc_h).abs());
    }
    let trunc = TruncationConfig::default();
    let mut sg = 0.0f64;
    for k in 1..=9 {
        let x = k as f64 / 10.0;
        let t = sg_phase_state(Complex64::new(x, 0.0), &trunc).unwrap();
        sg = sg.max((QuantifierReport::from_pure(&t.state).c_h - 2.0 * x / (1.0 - x)).abs());
    }
    // Mean photon number 1 per mode: |xi|^2 / (1 - |xi|^2) = 1.
    let xi = Complex64::new(0.5f64.sqrt(), 0.0);
    let twin = QuantifierReport::from_pure(&tmsv_state(xi, &trunc).unwrap().state).c_h;
    let twin_err = (twin - 2.0 * (1.0 + 2f64.sqrt())).abs();
    let sg_tol = 10.0 * trunc.tail_mass_tol;
    outcome(
        grid.len() == 1000 && qubit < 1e-12 && sg < sg_tol && twin_err < sg_tol,
        format!(
            "qubit grid {} pts worst {qubit:.2e}; phase state worst {sg:.2e} (tol {sg_tol:.0e}); twin nbar=1 C_H {twin:.12} err {twin_err:.2e}",
            grid.len()
        ),
    )
}

fn bounds() -> Outcome {
    let mut constructive = 0.0f64;
    for &n in &DIMENSIONS {
        let nf = n as f64;
        let phase = QuantifierReport::from_density(&finite_phase_state(n, &[]).unwrap().to_density()).unwrap();
        let mut e0 = vec![0.0; n];
        e0[0] = 1.0;
        let basis = QuantifierReport::from_density(&PureState::from_real(&e0, "computational").unwrap().to_density())
            .unwrap();
        constructive = constructive
            .max((phase.c_h - (nf - 1.0)).abs())
            .max((basis.s_h - 2.0 * (1.0 - 1.0 / nf.sqrt())).abs())
            .max((phase.c_hs - (1.0 - 1.0 / nf)).abs())
            .max((basis.nc_hs - (1.0 - 1.0 / nf)).abs());
    }
    let mut excess = 0.0f64;
    let suite = random_suite();
    for (_, rho) in &suite {
        let r = QuantifierReport::from_density_with(rho, &Evaluator::fast()).unwrap();
        let nf = r.dim as f64;
        excess = excess
            .max(r.c_h - (nf - 1.0))
            .max(r.nc_h - (nf - 1.0))
            .max(r.s_h - 2.0 * (1.0 - 1.0 / nf.sqrt()))
            .max(r.c_hs - (1.0 - 1.0 / nf))
            .max(r.s_hs - (1.0 - 1.0 / nf))
            .max(r.nc_hs - (1.0 - 1.0 / nf));
    }
    outcome(
        constructive < 1e-12 && excess <= 1e-10,
        format!(
            "maxima attained to {constructive:.2e}; largest excess over {} random states {excess:.2e}",
            suite.len()
        ),
    )
}

fn beam_splitter_oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut pairs = 0;
    for total in 0..=60u32 {
        for m in 0..=total {
            let mut a = beam_splitter_coefficients(total - m, m).unwrap();
            canonical_sign(&mut a);
            let b = relabel_second_mode(&beam_splitter_oracle(total - m, m).unwrap());
            worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(worst, f64::max);
            pairs += 1;
        }
    }
    let t = figure(FigureId::Fig3, &FigureOptions::default()).unwrap();
    let mut curve = coherence_curve(&t, &[(0, 50.0)], 2);
    curve.sort_by(|a, b| a.0.total_cmp(&b.0));
    let c = |m: usize| curve[m].1;
    let max = curve.iter().map(|p| p.1).fold(0.0, f64::max);
    let dip_local = c(25) < c(24) && c(25) < c(26);
    let dip_deep = c(25) < 0.9 * c(24).min(c(26));
    let dip_unique = (1..50).all(|m| m == 25 || c(m) >= 0.9 * c(m - 1).min(c(m + 1)));
    let near_max = c(24).min(c(26)) >= 0.95 * max;
    outcome(
        worst < 1e-10 && curve.len() == 51 && dip_local && dip_deep && dip_unique && near_max,
        format!(
            "{pairs} (n, m) pairs worst {worst:.2e}; NT=50 C_H(24, 25, 26) = {:.4}, {:.4}, {:.4}, max {max:.4}",
            c(24),
            c(25),
            c(26)
        ),
    )
}

fn fig2_crossover() -> Outcome {
    let t = figure(FigureId::Fig2, &FigureOptions::default()).unwrap();
    let mut su2 = coherence_curve(&t, &[(2, 0.0)], 0);
    su2.sort_by(|a, b| a.0.total_cmp(&b.0));
    let twin: Vec<(f64, f64)> = t
        .valid_rows()
        .filter(|(p, _)| p[1].as_f64() == p[2].as_f64())
        .map(|(p, r)| (p[0].as_f64(), r.c_h))
        .collect();
    let mut diffs = Vec::new();
    for (nt, c_twin) in &twin {
        if let Some((_, c_su2)) = su2.iter().find(|(x, _)| x == nt) {
            diffs.push((*nt, c_twin - c_su2));
        }
    }
    diffs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let changes: Vec<f64> = diffs
        .windows(2)
        .filter(|w| (w[0].1 < 0.0) != (w[1].1 < 0.0))
        .map(|w| w[1].0)
        .collect();
    let first_below = diffs.first().is_some_and(|d| d.1 < 0.0);
    let last_above = diffs.last().is_some_and(|d| d.1 > 0.0);
    let span = diffs.first().map(|d| d.0) == Some(2.0) && diffs.last().map(|d| d.0) == Some(60.0);
    outcome(
        first_below && last_above && changes.len() == 1 && span,
        format!("{} NT values; sign changes at NT = {changes:?}", diffs.len()),
    )
}

fn infinite_limit() -> Outcome {
    let grid = default_xi_grid();
    let mut number = 0.0f64;
    for n in [0usize, 1, 2, 5, 10, 30] {
        let mut p = vec![0.0; n + 1];
        p[n] = 1.0;
        let s = certainty_limit_sweep_populations(&p, 0.0, &grid).unwrap();
        number = number.max((s.nc_h_limit - 2.0).abs());
    }
    let t = sg_phase_state(Complex64::new(0.5, 0.0), &TruncationConfig::default()).unwrap();
    let r = fock_report(&t).unwrap();
    let sg_err = (r.nc_h - 4.0).abs();
    outcome(
        number < 1e-4 && sg_err < 1e-3 && (r.c_h - 2.0).abs() < 1e-9,
        format!("number states worst |NC_H - 2| {number:.2e}; phase state xi=0.5 NC_H {:.8} (C_H {:.8})", r.nc_h, r.c_h),
    )
}

fn gaussian_approximation() -> Outcome {
    let trunc = TruncationConfig::default();
    let mut worst = (0.0f64, 0.0, 0.0);
    for big_r in [8.0, 10.0, 12.0, 16.0] {
        for k in 0..=5 {
            let r = k as f64 / 10.0;
            let t = squeezed_coherent_state_with(big_r, r, &trunc, Construction::ClosedForm).unwrap();
            let c_h = QuantifierReport::from_pure(&t.state).c_h;
            let (_, var) = squeezed_coherent_number_stats(big_r, r);
            let est = gaussian_coherence_estimate(var).unwrap();
            let rel = (c_h - est).abs() / est;
            if rel > worst.0 {
                worst = (rel, big_r, r);
            }
        }
    }
    outcome(
        worst.0 < 0.05,
        format!("worst relative gap {:.3}% at R={}, r={}", 100.0 * worst.0, worst.1, worst.2),
    )
}

fn increasing(curve: &[(f64, f64)]) -> bool {
    curve.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-9)
}

fn sorted(mut c: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    c.sort_by(|a, b| a.0.total_cmp(&b.0));
    c
}

fn fig6_optimum_and_trends() -> Outcome {
    let opts = FigureOptions::default().with_sets(&["nbar=30"]).unwrap();
    let t6 = figure(FigureId::Fig6, &opts).unwrap();
    let curve = sorted(coherence_curve(&t6, &[(0, 30.0)], 1));
    let (f_best, c_best) = argmax(&curve).unwrap();
    let optimum = (0.2..=0.4).contains(&f_best) && curve.len() == 101;

    let t4 = figure(FigureId::Fig4, &FigureOptions::default()).unwrap();
    let fig4 = [0.0, 0.5, 1.0]
        .iter()
        .all(|&r| increasing(&sorted(coherence_curve(&t4, &[(0, r)], 1))));
    let t5 = figure(FigureId::Fig5, &FigureOptions::default()).unwrap();
    let fig5 = [1.0, 2.0, 4.0]
        .iter()
        .all(|&big_r| increasing(&sorted(coherence_curve(&t5, &[(0, big_r)], 1))));
    let t7 = figure(FigureId::Fig7, &FigureOptions::default()).unwrap();
    let fig7_curves: Vec<Vec<(f64, f64)>> = [0.0, 1.0, 2.0, 4.0]
        .iter()
        .map(|&n0| sorted(coherence_curve(&t7, &[(0, n0)], 1)))
        .collect();
    let fig7 = fig7_curves.iter().all(|c| increasing(c));
    let softer = fig7_curves[1..].iter().all(|c| {
        fig7_curves[0]
            .iter()
            .zip(c)
            .filter(|(a, _)| a.0 >= 1.0)
            .all(|(a, b)| a.1 < b.1)
    });
    outcome(
        optimum && fig4 && fig5 && fig7 && softer,
        format!(
            "nbar=30 argmax f = {f_best:.2} (C_H {c_best:.4}), wanted [0.2, 0.4]; trends fig4 {fig4}, fig5 {fig5}, fig7 {fig7}, n0=0 softer {softer}"
        ),
    )
}

fn phase_basis_counterexample() -> Outcome {
    let cfg = PhaseBasisConfig::default();
    let v = orthogonality_violation(&qubit_from_bloch([0.0, 0.0, 0.5]).unwrap(), &cfg).unwrap();
    let mixed = orthogonality_violation(&qubit_from_bloch([0.0, 0.0, 0.0]).unwrap(), &cfg).unwrap();
    // Positive means distinguishable from the quadrature noise floor.
    let positive = v.violation > 1e-8;
    let stable = v.quadrature_change <= 1e-8;
    let zero = mixed.violation.abs() < 1e-12;
    outcome(
        positive && stable && zero,
        format!(
            "s=(0,0,0.5) violation {:.3e} (quadrature change {:.1e}, {} nodes); I/2 violation {:.1e}",
            v.violation, v.quadrature_change, v.nodes, mixed.violation
        ),
    )
}

fn duality_gap() -> Outcome {
    let eval = Evaluator::fast();
    let (mut most_negative, mut pure_worst, mut pure_count) = (0.0f64, 0.0f64, 0);
    let suite = random_suite();
    for (kind, rho) in &suite {
        let gap = eval.duality_gap(rho).unwrap();
        most_negative = most_negative.min(gap);
        if *kind == SampleKind::Pure {
            pure_worst = pure_worst.max(gap.abs());
            pure_count += 1;
        }
    }
    outcome(
        most_negative >= -1e-10 && pure_worst < 1e-10 && pure_count > 0,
        format!(
            "{} states, min gap {most_negative:.2e}; {pure_count} pure states max |gap| {pure_worst:.2e}",
            suite.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("pythagorean identity", pythagorean_identity),
        ("closed-form agreement", closed_form_agreement),
        ("bounds", bounds),
        ("beam-splitter oracle and equal-split dip", beam_splitter_oracle_equivalence),
        ("twin vs SU(2) crossover", fig2_crossover),
        ("infinite-dimension limit", infinite_limit),
        ("gaussian approximation", gaussian_approximation),
        ("squeeze-fraction optimum and figure trends", fig6_optimum_and_trends),
        ("phase-basis counterexample", phase_basis_counterexample),
        ("duality gap", duality_gap),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                outcome(false, format!("panicked: {msg}"))
            });
        if !o.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({})",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            name,
            o.detail
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
