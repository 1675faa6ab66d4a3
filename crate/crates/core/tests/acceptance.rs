//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use witnesslab::circuits::{superdense_run, Message};
use witnesslab::optim::{generalized_robustness, gr_oracle_bd, optimal_witness};
use witnesslab::qmat::{
    expectation, fidelity, ComplexMatrix, DensityMatrix, HermitianOp, Pauli, Spin, C64,
};
use witnesslab::readout::{measure_correlations, measure_yy, noisy_pauli_vector, pauli_tomography};
use witnesslab::relax::{
    crossing_time, relax_channel, spin_kraus, sweep, Quantity, RelaxationParams, GR_FLOOR,
};
use witnesslab::states::{bell_diagonal, bell_state, is_ppt, is_separable_bd};
use witnesslab::witness::{eval_witness, f_witness_state, table1_witness};
use witnesslab::{BellDiagonalParams, BellKind, ThermalParams, Tolerances};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn secs(d: Duration) -> String {
    format!("{:.3} s", d.as_secs_f64())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn f_values() -> Outcome {
    let cases = [
        ("|Phi->", bell_state(BellKind::PhiMinus), -0.5),
        (
            "bd(-0.2,1,0.2)",
            bell_diagonal(&BellDiagonalParams::new(-0.2, 1.0, 0.2)).unwrap(),
            0.14,
        ),
        ("I/4", DensityMatrix::maximally_mixed(4).unwrap(), 0.25),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, rho, want) in cases {
        let start = Instant::now();
        let f = f_witness_state(&rho).unwrap();
        let took = start.elapsed();
        pass &= close(f, want, 1e-9) && took < Duration::from_millis(1);
        parts.push(format!("{name}: F = {f:.12} ({} us)", took.as_micros()));
    }
    outcome(pass, parts.join("; "))
}

fn table1() -> Outcome {
    let tol = Tolerances::default();
    let start = Instant::now();
    let rows: Vec<_> = BellKind::ALL
        .iter()
        .map(|&k| (k, optimal_witness(k)))
        .collect();
    let took = start.elapsed();
    let mut pass = took < Duration::from_millis(100);
    for (kind, (w, obj)) in &rows {
        pass &= w.as_array() == table1_witness(*kind).as_array();
        pass &= close(*obj, -1.0, 1e-9);
        pass &= w.is_valid(&tol).unwrap();
    }
    let text: Vec<String> = rows.iter().map(|(k, (w, _))| format!("{k} {w}")).collect();
    outcome(pass, format!("{} in {}", text.join(", "), secs(took)))
}

fn w_values() -> Outcome {
    let w = table1_witness(BellKind::PhiMinus);
    let cases = [
        (bell_state(BellKind::PhiMinus), -1.0),
        (
            bell_diagonal(&BellDiagonalParams::new(-0.2, 1.0, 0.2)).unwrap(),
            -0.2,
        ),
        (DensityMatrix::maximally_mixed(4).unwrap(), 0.5),
    ];
    let values: Vec<f64> = cases
        .iter()
        .map(|(rho, _)| eval_witness(&w, rho).unwrap())
        .collect();
    let pass = values
        .iter()
        .zip(&cases)
        .all(|(v, (_, want))| close(*v, *want, 1e-9));
    outcome(pass, format!("W(Phi-) on Phi-, bd, I/4 = {values:?}"))
}

/// λ_min of the partial transpose of `(1−p)ρ + pω`.
fn pt_min(rho: &ComplexMatrix, omega: &ComplexMatrix, p: f64) -> f64 {
    let m = &rho.scale_real(1.0 - p) + &omega.scale_real(p);
    HermitianOp::new(m.partial_transpose(Spin::I).unwrap())
        .unwrap()
        .min_eigenvalue()
}

/// Smallest `s = p/(1−p)` making `(1−p)ρ + pω` PPT, if any. The minimum
/// eigenvalue is concave in `p`, so the feasible set is an interval.
fn brute_force_weight(rho: &ComplexMatrix, omega: &ComplexMatrix, best: f64) -> Option<f64> {
    if pt_min(rho, omega, 0.0) >= 0.0 {
        return Some(0.0);
    }
    let p_cap = best / (1.0 + best);
    if pt_min(rho, omega, p_cap) < 0.0 {
        // feasible interval, if any, starts after the current best
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if pt_min(rho, omega, m1) < pt_min(rho, omega, m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        let peak = 0.5 * (lo + hi);
        if peak >= p_cap || pt_min(rho, omega, peak) < 0.0 {
            return None;
        }
        return Some(bisect(rho, omega, peak));
    }
    Some(bisect(rho, omega, p_cap))
}

fn bisect(rho: &ComplexMatrix, omega: &ComplexMatrix, feasible: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, feasible);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if pt_min(rho, omega, mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi / (1.0 - hi)
}

fn brute_force_gr(c: &BellDiagonalParams, rng: &mut ChaCha8Rng) -> f64 {
    const N: usize = 20;
    let rho = *bell_diagonal(c).unwrap().matrix();
    let bell: Vec<ComplexMatrix> = BellKind::ALL
        .iter()
        .map(|&k| *bell_state(k).matrix())
        .collect();
    let mut candidates = Vec::new();
    for a in 0..=N {
        for b in 0..=(N - a) {
            for d in 0..=(N - a - b) {
                let e = N - a - b - d;
                let w = [a, b, d, e].map(|k| k as f64 / N as f64);
                let mut m = ComplexMatrix::zeros(4).unwrap();
                for (wk, pk) in w.iter().zip(&bell) {
                    m = &m + &pk.scale_real(*wk);
                }
                candidates.push(m);
            }
        }
    }
    for _ in 0..200 {
        candidates.push(*common::random_state(rng).matrix());
    }
    // a trivially feasible start: mixing with I/4 at weight 3 always suffices
    let mut best = 3.0;
    for omega in &candidates {
        if let Some(s) = brute_force_weight(&rho, omega, best) {
            best = best.min(s);
        }
    }
    best
}

fn robustness_oracle() -> Outcome {
    let start = Instant::now();
    let picks = [
        (-1.0, 1.0, 1.0),
        (-0.2, 1.0, 0.2),
        (1.0, -1.0, 1.0),
        (1.0, 1.0, -1.0),
        (-1.0, -1.0, -1.0),
        (0.0, 0.0, 0.0),
        (0.5, 0.0, 0.4),
        (-0.6, 0.6, 0.6),
        (0.7, -0.7, 0.7),
        (-0.9, 0.5, 0.6),
        (0.3, 0.3, 0.3),
        (-0.3, -0.3, -0.3),
        (-0.5, -0.5, -0.5),
        (0.9, 0.1, -0.1),
        (0.2, -0.9, 0.3),
        (-0.4, 0.5, 0.1),
        (0.6, 0.6, -0.6),
        (-0.8, -0.2, -0.1),
        (0.1, -0.1, 0.95),
        (-0.35, 0.35, 0.35),
        (0.34, -0.33, 0.33),
        (-0.1, 0.9, 0.0),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut oracle_dev: f64 = 0.0;
    for (c1, c2, c3) in picks {
        let c = BellDiagonalParams::new(c1, c2, c3);
        assert!(c.is_physical(), "hand-picked vector {c} is unphysical");
        let brute = brute_force_gr(&c, &mut rng);
        oracle_dev = oracle_dev.max((brute - gr_oracle_bd(&c).unwrap()).abs());
    }
    let validated = oracle_dev < 1e-3;

    let mut solver_dev: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..1000 {
        let c = common::random_physical_c(&mut rng);
        match generalized_robustness(&bell_diagonal(&c).unwrap()) {
            Ok(r) => solver_dev = solver_dev.max((r.value - gr_oracle_bd(&c).unwrap()).abs()),
            Err(_) => failures += 1,
        }
    }
    let took = start.elapsed();
    let pass = validated && failures == 0 && solver_dev < 1e-5 && took < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "brute force vs 2λmax−1: max dev {oracle_dev:.2e} on {} vectors; solver vs oracle: max dev {solver_dev:.2e} on 1000, {failures} failures ({})",
            picks.len(),
            secs(took)
        ),
    )
}

fn ppt_octahedron() -> Outcome {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut disagreements = 0;
    let mut banded = 0;
    for _ in 0..10_000 {
        let c = common::random_physical_c(&mut rng);
        if (c.l1_norm() - 1.0).abs() < 1e-9 {
            banded += 1;
            continue;
        }
        let ppt = is_ppt(&bell_diagonal(&c).unwrap(), &tol).unwrap();
        if ppt != is_separable_bd(&c) {
            disagreements += 1;
        }
    }
    outcome(
        disagreements == 0,
        format!("{disagreements} disagreements on 10000 vectors ({banded} in boundary band)"),
    )
}

fn superdense() -> Outcome {
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut worst: f64 = 0.0;
    for &ei in &grid {
        for &es in &grid {
            let thermal = ThermalParams::new(ei, es).unwrap();
            for m in Message::ALL {
                let run = superdense_run(&thermal, m).unwrap();
                let want_i = if m.z { -ei } else { ei };
                let want_s = if m.x { -es } else { es };
                worst = worst
                    .max((run.mz_i - want_i).abs())
                    .max((run.mz_s - want_s).abs());
            }
        }
    }
    outcome(
        worst <= 1e-10,
        format!("max deviation {worst:.2e} over 4 messages x 25 polarizations"),
    )
}

fn readout() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let rho = common::random_state(&mut rng);
        let direct = |p: Pauli| expectation(&rho, &HermitianOp::pauli_string(p, p)).unwrap();
        let c = measure_correlations(&rho).unwrap();
        let yy = measure_yy(&rho).unwrap();
        worst = worst
            .max((c.w1 - direct(Pauli::X)).abs())
            .max((c.w2 - direct(Pauli::Z)).abs())
            .max((yy - direct(Pauli::Y)).abs());
    }
    outcome(
        worst <= 1e-9,
        format!("max deviation {worst:.2e} on 100 random states"),
    )
}

fn relaxation() -> Outcome {
    let start = Instant::now();
    let rho0 = bell_state(BellKind::PhiMinus);
    let params = RelaxationParams::with_t2(0.31, 0.11).unwrap();
    let s = sweep(
        &rho0,
        &params,
        &table1_witness(BellKind::PhiMinus),
        1.0,
        200,
    )
    .unwrap();
    let took = start.elapsed();

    let Some(tau_c) = s.tau_c else {
        return outcome(false, "F never crosses zero");
    };
    let a = (0.24..=0.40).contains(&tau_c);

    let gr_at_tau_c = generalized_robustness(&relax_channel(&rho0, tau_c, &params).unwrap())
        .unwrap()
        .value;
    let vanishes_later = s
        .times
        .iter()
        .zip(&s.gr_values)
        .any(|(&t, &g)| t > tau_c && g <= GR_FLOOR);
    let b = gr_at_tau_c > GR_FLOOR && vanishes_later;

    let crossings: Vec<f64> = [Quantity::F, Quantity::W]
        .into_iter()
        .filter_map(|q| crossing_time(&s, q))
        .collect();
    let mismatches = (0..s.len())
        .filter(|&k| crossings.iter().all(|tc| (s.times[k] - tc).abs() > 1e-6))
        .filter(|&k| (s.f_values[k] < 0.0) != (s.w_values[k] < 0.0))
        .count();
    let c = mismatches == 0;

    let pass = a && b && c && took < Duration::from_secs(120);
    outcome(
        pass,
        format!(
            "(a) tau_c = {tau_c:.4} s; (b) GR(tau_c) = {gr_at_tau_c:.2e}, GR end = {:.4} s; (c) {mismatches} sign mismatches; W crossing {:.4} s, tau_R = {:.4} s, tau_W = {:.4} s ({})",
            crossing_time(&s, Quantity::GR).unwrap_or(f64::NAN),
            crossing_time(&s, Quantity::W).unwrap_or(f64::NAN),
            s.tau_r.unwrap_or(f64::NAN),
            s.tau_w.unwrap_or(f64::NAN),
            secs(took)
        ),
    )
}

/// Choi matrix `Σᵢⱼ |i⟩⟨j| ⊗ E(|i⟩⟨j|)` of the single-spin channel.
fn choi(t: f64, t1: f64, t2: f64) -> ComplexMatrix {
    let ks = spin_kraus(t, t1, t2);
    let mut out = ComplexMatrix::zeros(4).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let mut eij = ComplexMatrix::zeros(2).unwrap();
            eij.set(i, j, C64::new(1.0, 0.0));
            let mut image = ComplexMatrix::zeros(2).unwrap();
            for k in &ks {
                image = &image + &(&(k * &eij) * &k.adjoint());
            }
            out = &out + &eij.kron(&image).unwrap();
        }
    }
    out
}

fn channel() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_trace: f64 = 0.0;
    let mut worst_eig: f64 = 0.0;
    let mut worst_semigroup: f64 = 0.0;
    let mut worst_choi: f64 = 0.0;
    for _ in 0..100 {
        let rho = common::random_state(&mut rng);
        let t1 = rng.random_range(0.05..20.0);
        let t2 = rng.random_range(0.01..=2.0 * t1);
        let t1s = rng.random_range(0.05..20.0);
        let t2s = rng.random_range(0.01..=2.0 * t1s);
        let p = RelaxationParams::new(t1, t2, t1s, t2s).unwrap();
        for t in [0.01, 0.1, 1.0, 10.0] {
            let out = relax_channel(&rho, t, &p).unwrap();
            worst_trace = worst_trace.max((out.op().trace() - 1.0).abs());
            worst_eig = worst_eig.min(out.op().min_eigenvalue());
            let c = HermitianOp::new(choi(t, t1, t2)).unwrap();
            worst_choi = worst_choi.min(c.min_eigenvalue());
        }
        let (ta, tb) = (rng.random_range(0.0..2.0), rng.random_range(0.0..2.0));
        let two_step = relax_channel(&relax_channel(&rho, ta, &p).unwrap(), tb, &p).unwrap();
        let one_step = relax_channel(&rho, ta + tb, &p).unwrap();
        worst_semigroup = worst_semigroup.max(two_step.matrix().max_abs_diff(one_step.matrix()));
    }
    let pass =
        worst_trace <= 1e-9 && worst_eig >= -1e-9 && worst_choi >= -1e-9 && worst_semigroup <= 1e-9;
    outcome(
        pass,
        format!(
            "trace dev {worst_trace:.2e}, min eigenvalue {worst_eig:.2e}, min Choi eigenvalue {worst_choi:.2e}, semigroup dev {worst_semigroup:.2e} on 100 states"
        ),
    )
}

fn tomography() -> Outcome {
    let phi = bell_state(BellKind::PhiMinus);
    let trials = 1000;
    let mut good = 0;
    let mut lowest: f64 = 1.0;
    for seed in 0..trials {
        let e = noisy_pauli_vector(&phi, 0.01, seed).unwrap();
        let f = fidelity(&pauli_tomography(&e).unwrap().state, &phi).unwrap();
        lowest = lowest.min(f);
        if f >= 0.98 {
            good += 1;
        }
    }
    let share = good as f64 / trials as f64;
    outcome(
        share >= 0.95,
        format!("{good}/{trials} trials with fidelity >= 0.98 (lowest {lowest:.4})"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("F values", f_values),
        ("optimal Bell witnesses", table1),
        ("W evaluations", w_values),
        ("robustness oracle validation", robustness_oracle),
        ("PPT <-> octahedron", ppt_octahedron),
        ("superdense coding", superdense),
        ("readout equivalence", readout),
        ("relaxation phenomenology", relaxation),
        ("channel correctness", channel),
        ("tomography noise study", tomography),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
