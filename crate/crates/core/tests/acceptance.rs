//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dmexp_core::applications::{
    add_states, discriminate, orthogonality_test, overlap_angle, phase_estimate, sample_grover, DiscriminationTask,
    EigenTarget, GroverTask, OrthogonalityConfig, PhaseEstimationConfig, Protocol, SearchVerdict, Verdict,
};
use dmexp_core::gadgets::{
    commutator_gadget, eval_jordan_lie, jordan_lie_expand, polynomial_gadget, polynomial_matrix, simulate_polynomial,
    HermitianPolynomial, Mode, PolynomialTerm,
};
use dmexp_core::linalg::random::{haar_state, random_state_with};
use dmexp_core::linalg::tensor::{kron, trace_first};
use dmexp_core::linalg::{
    herm_exp, paulis, trace_distance, unitary_diamond_distance, ComplexMatrix, DensityMatrix, PureState, C64, I,
};
use dmexp_core::lmr::{ideal_conjugation, lmr_simulate, lmr_step, LmrConfig};
use dmexp_core::rng::StreamRng;
use dmexp_core::stats::{loglog_slope, rate_sigma};
use dmexp_core::universal::{run_circuit, Axis, ChainMachine, Circuit, RotationRequest};
use dmexp_core::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn product(ms: &[&ComplexMatrix]) -> ComplexMatrix {
    ms.iter().skip(1).fold(ms[0].clone(), |acc, m| &acc * *m)
}

fn lmr_step_identity() -> Result<Outcome> {
    let mut rng = StreamRng::new(101);
    let mut worst: f64 = 0.0;
    for dim in [2, 4] {
        for _ in 0..50 {
            let rho = random_state_with(dim, 1 + rng.below(dim as u64) as usize, &mut rng);
            let sigma = random_state_with(dim * 2, 1 + rng.below(4) as usize, &mut rng);
            let delta = rng.uniform() * FRAC_PI_2;
            let (s, c) = delta.sin_cos();
            let ext = kron(rho.matrix(), &ComplexMatrix::identity(2));
            let comm = ComplexMatrix::commutator(&ext, sigma.matrix());
            let expected = sigma.matrix().scale_real(c * c) - comm.scale(I * (s * c))
                + kron(rho.matrix(), &trace_first(sigma.matrix(), dim)?).scale_real(s * s);
            let got = lmr_step(&sigma, &rho, delta)?;
            worst = worst.max(got.matrix().max_abs_diff(&expected));
        }
    }
    outcome(worst <= 1e-12, format!("max deviation {worst:.2e} over 100 pairs"))
}

fn lmr_convergence() -> Result<Outcome> {
    let mut rng = StreamRng::new(202);
    let sigma = haar_state(2, &mut rng).to_density();
    let rho = haar_state(2, &mut rng).to_density();
    let t = PI;
    let ideal = ideal_conjugation(rho.matrix(), t, &sigma)?;
    let base = LmrConfig::new(t, 0.1)?;
    let mut curve = Vec::new();
    for k in 4..=10 {
        let n = 1u64 << k;
        let (out, _) = lmr_simulate(&sigma, &rho, &base.with_steps(n)?)?;
        curve.push((n as f64, trace_distance(&out, &ideal)?));
    }
    let slope = loglog_slope(&curve)?;
    let mut budget_ok = true;
    let mut errs = Vec::new();
    for delta in [0.1, 0.01] {
        let (out, n) = lmr_simulate(&sigma, &rho, &LmrConfig::new(t, delta)?)?;
        let err = trace_distance(&out, &ideal)?;
        budget_ok &= err <= delta;
        errs.push(format!("delta {delta}: n {n}, err {err:.2e}"));
    }
    outcome(
        (slope + 1.0).abs() <= 0.1 && budget_ok,
        format!("slope {slope:.3}; {}", errs.join("; ")),
    )
}

fn discrimination() -> Result<Outcome> {
    let task = DiscriminationTask::new(0.25, 0.5, 0.4, 1000, 31)?;
    let budget = LmrConfig::new(1.0, 1.0 / 3.0)?;
    let ideal = discriminate(&task, Protocol::Ideal, &budget)?;
    let lmr = discriminate(&task, Protocol::Lmr, &budget)?;
    let floor = 2.0 / 3.0 - 3.0 * rate_sigma(2.0 / 3.0, task.trials);
    outcome(
        ideal.success_rate == 1.0 && lmr.success_rate >= floor,
        format!(
            "ideal {:.3}, lmr {:.3} (floor {floor:.3}, {} copies/trial)",
            ideal.success_rate, lmr.success_rate, lmr.copies_per_trial
        ),
    )
}

fn controlled_lmr() -> Result<Outcome> {
    let rho = DensityMatrix::diagonal(&[0.8, 0.2])?;
    let config = PhaseEstimationConfig::new(0.05, Protocol::Lmr)?;
    let est = phase_estimate(&rho, &config, EigenTarget::Eigenvector(0), 41)?;
    let value = est.estimates[0];
    let mut points = Vec::new();
    for eps in [0.2, 0.1, 0.05] {
        let c = PhaseEstimationConfig::new(eps, Protocol::Lmr)?;
        let run = phase_estimate(&rho, &c, EigenTarget::Eigenvector(0), 42)?;
        points.push((eps, run.steps_per_pass as f64));
    }
    let slope = loglog_slope(&points)?;
    outcome(
        (value - 0.8).abs() <= 0.05 && (slope + 2.0).abs() <= 0.3,
        format!("estimate {value:.4}; step-count exponent {slope:.3}"),
    )
}

fn gadget_blocks() -> Result<Outcome> {
    let mut rng = StreamRng::new(505);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let k = 1 + case % 4;
        let dim = 2 + rng.below(2) as usize;
        let states: Vec<DensityMatrix> =
            (0..k).map(|_| random_state_with(dim, 1 + rng.below(dim as u64) as usize, &mut rng)).collect();
        let phi = if k == 1 { 0.0 } else { rng.uniform() * 2.0 * PI };
        let refs: Vec<&DensityMatrix> = states.iter().collect();
        let pair = if k == 2 {
            commutator_gadget(&states[0], &states[1], phi)?
        } else {
            polynomial_gadget(&refs, phi)?
        };
        let ms: Vec<&ComplexMatrix> = states.iter().map(|s| s.matrix()).collect();
        let prod = product(&ms).scale(C64::from_polar(0.5, phi));
        let expected = &prod + &prod.adjoint();
        worst = worst.max(pair.hamiltonian().max_abs_diff(&expected));
        let sum = pair.plus() + pair.minus();
        let half = (states[0].matrix() + states[k - 1].matrix()).scale_real(0.5);
        worst = worst.max(sum.max_abs_diff(&half));
    }
    outcome(worst <= 1e-12, format!("max deviation {worst:.2e} over 100 instances"))
}

fn polynomial_oracle() -> Result<Outcome> {
    let mut rng = StreamRng::new(606);
    let delta = 0.02;
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let states: Vec<DensityMatrix> = (0..3).map(|_| haar_state(2, &mut rng).to_density()).collect();
        let terms = (0..2)
            .map(|_| {
                let degree = 1 + rng.below(3) as usize;
                let indices: Vec<usize> = (0..degree).map(|_| rng.below(3) as usize).collect();
                let phase = if degree == 1 { 0.0 } else { rng.uniform() * 2.0 * PI };
                let sign = if rng.bernoulli(0.5) { 1.0 } else { -1.0 };
                PolynomialTerm::new(indices, phase, sign * (0.2 + 0.8 * rng.uniform()))
            })
            .collect::<Result<Vec<_>>>()?;
        let poly = HermitianPolynomial::new(3, terms)?;
        let sigma = haar_state(2, &mut rng).to_density();
        let ideal = ideal_conjugation(&polynomial_matrix(&poly, &states)?, 1.0, &sigma)?;
        let run = simulate_polynomial(&sigma, &poly, &states, &LmrConfig::new(1.0, delta)?, Mode::Exact, 0)?;
        worst = worst.max(trace_distance(&run.state, &ideal)?);
    }
    outcome(worst <= delta, format!("max trace distance {worst:.2e} over 10 polynomials"))
}

fn jordan_lie() -> Result<Outcome> {
    let mut rng = StreamRng::new(707);
    let mut worst: f64 = 0.0;
    for case in 0..50 {
        let len = 1 + case % 4;
        let states: Vec<DensityMatrix> = (0..4).map(|_| random_state_with(3, 2, &mut rng)).collect();
        let r: Vec<usize> = (0..len).map(|_| rng.below(4) as usize).collect();
        let z = C64::new(rng.normal(), rng.normal());
        let expr = jordan_lie_expand(&r, z)?;
        let ms: Vec<&ComplexMatrix> = r.iter().map(|&j| states[j].matrix()).collect();
        let mono = product(&ms).scale(z);
        let expected = &mono + &mono.adjoint();
        worst = worst.max(eval_jordan_lie(&expr, &states)?.max_abs_diff(&expected));
    }
    outcome(worst <= 1e-10, format!("max deviation {worst:.2e} over 50 cases"))
}

fn state_addition() -> Result<Outcome> {
    let delta = 0.01;
    let budget = LmrConfig::new(1.0, delta)?;
    let zero = PureState::basis(2, 0);
    let plus = PureState::plus();
    let angle = overlap_angle(&zero, &plus)?;
    let sum = PureState::normalized(
        zero.amplitudes().iter().zip(plus.amplitudes()).map(|(a, b)| a + b).collect(),
    )?;
    let mid = add_states(&zero, &plus, angle / 2.0, Protocol::Lmr, &budget)?.fidelity_with_pure(&sum);
    let start = add_states(&zero, &plus, 0.0, Protocol::Lmr, &budget)?.fidelity_with_pure(&zero);
    let end = add_states(&zero, &plus, angle, Protocol::Lmr, &budget)?.fidelity_with_pure(&plus);
    let pass = mid >= 1.0 - delta && start >= 1.0 - delta && end >= 1.0 - delta;
    outcome(pass, format!("fidelity midpoint {mid:.5}, chi=0 {start:.5}, chi=Delta {end:.5}"))
}

/// `|psi2|^2`-overlap exactly `w` with `psi1`, random otherwise.
fn pair_with_overlap(dim: usize, w: f64, rng: &mut StreamRng) -> Result<(PureState, PureState)> {
    let a = haar_state(dim, rng);
    let b = haar_state(dim, rng);
    let ov = a.inner(&b);
    let perp: Vec<C64> = b.amplitudes().iter().zip(a.amplitudes()).map(|(y, x)| y - x * ov).collect();
    let perp = PureState::normalized(perp)?;
    let phase = C64::from_polar(1.0, rng.uniform() * 2.0 * PI);
    let amps = a
        .amplitudes()
        .iter()
        .zip(perp.amplitudes())
        .map(|(x, y)| x * phase * w.sqrt() + y * (1.0 - w).sqrt())
        .collect();
    Ok((a, PureState::normalized(amps)?))
}

fn orthogonality() -> Result<Outcome> {
    let mut rng = StreamRng::new(909);
    let ideal = OrthogonalityConfig::new(0.5, 0.05, Protocol::Ideal)?;
    let mut false_alarms = 0;
    for run in 0..500 {
        let (a, b) = pair_with_overlap(2 + run % 3, 0.0, &mut rng)?;
        if orthogonality_test(&a, &b, &ideal, run as u64)?.verdict != Verdict::Orthogonal {
            false_alarms += 1;
        }
    }
    let lmr = OrthogonalityConfig::new(0.5, 0.05, Protocol::Lmr)?;
    let mut detected = [0usize; 2];
    for run in 0..200 {
        let (a, b) = pair_with_overlap(2, 0.5, &mut rng)?;
        for (slot, config) in [&ideal, &lmr].into_iter().enumerate() {
            if orthogonality_test(&a, &b, config, 10_000 + run as u64)?.verdict == Verdict::Overlapping {
                detected[slot] += 1;
            }
        }
    }
    let rates = detected.map(|d| d as f64 / 200.0);
    outcome(
        false_alarms == 0 && rates.iter().all(|&r| r >= 0.9),
        format!(
            "orthogonal misreported {false_alarms}/500; overlap detected ideal {:.3}, lmr {:.3}",
            rates[0], rates[1]
        ),
    )
}

fn grover() -> Result<Outcome> {
    let target = PureState::basis(4, 3).projector();
    let w = 0.25;
    let task = GroverTask::new(target, w, 0.05, w.sqrt() / 10.0)?;
    let uniform = PureState::from_real(&[1.0, 1.0, 1.0, 1.0])?;
    let mut found = 0;
    let mut missed = 0;
    let orthogonal = PureState::from_real(&[1.0, 1.0, 1.0, 0.0])?;
    for seed in 0..200 {
        if sample_grover(&task, &uniform, Protocol::Lmr, seed)?.verdict == SearchVerdict::Found {
            found += 1;
        }
        if sample_grover(&task, &orthogonal, Protocol::Lmr, seed)?.verdict == SearchVerdict::Found {
            missed += 1;
        }
    }
    let rate = found as f64 / 200.0;
    outcome(rate >= 0.9 && missed == 0, format!("found {rate:.3} at lambda 1/4; {missed}/200 at lambda 0"))
}

fn universality() -> Result<Outcome> {
    let plus = PureState::plus().to_density();
    let angle = 1.0;
    let u = herm_exp(&PureState::basis(2, 0).projector(), angle)?;
    let ideal = DensityMatrix::from_channel_output(plus.matrix().conjugate_by(&u))?;
    let mut curve = Vec::new();
    for delta in [0.2, 0.1, 0.05, 0.02, 0.01, 0.005] {
        let mut m = ChainMachine::with_state(1, &plus)?;
        let n = m.resource_rotation(&RotationRequest::new(0, Axis::Z, angle, delta)?)?;
        curve.push((n as f64, trace_distance(&m.data_state()?, &ideal)?));
    }
    let slope = loglog_slope(&curve)?;

    let mut bell_machine = ChainMachine::new(2)?;
    let bell = run_circuit(&mut bell_machine, &Circuit::bell(), 0.002)?;
    let phi_plus = PureState::from_real(&[1.0, 0.0, 0.0, 1.0])?;
    let fidelity = bell.state.fidelity_with_pure(&phi_plus);

    let total_error = 0.2;
    let mut ratios = Vec::new();
    for blocks in [1, 2, 4] {
        let circuit = Circuit::hadamard_cnot_blocks(blocks);
        let gates = circuit.gates.len() as f64;
        let mut m = ChainMachine::new(2)?;
        let run = run_circuit(&mut m, &circuit, total_error / gates)?;
        ratios.push(run.cost.resource_total as f64 / (gates * gates));
    }
    let spread = ratios.iter().cloned().fold(f64::MIN, f64::max) / ratios.iter().cloned().fold(f64::MAX, f64::min);
    outcome(
        (slope + 1.0).abs() <= 0.15 && fidelity >= 0.98 && spread <= 3.0,
        format!(
            "rotation slope {slope:.3}; Bell fidelity {fidelity:.5}; resources/(M+M')^2 {:.0}/{:.0}/{:.0} (spread {spread:.2})",
            ratios[0], ratios[1], ratios[2]
        ),
    )
}

fn diamond_closed_form() -> Result<Outcome> {
    let mut rng = StreamRng::new(1212);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let eps = 0.05 + rng.uniform();
        let t = rng.uniform() * FRAC_PI_2 / eps;
        let v = herm_exp(&paulis::z().scale_real(eps), t)?;
        let d = unitary_diamond_distance(&ComplexMatrix::identity(2), &v)?;
        worst = worst.max((d - (eps * t).sin()).abs());
    }
    // Small-parameter regime: the distance approaches ||rho_hat - rho||_1 t.
    let (eps, t) = (1e-4, 1.0);
    let v = herm_exp(&paulis::z().scale_real(eps), t)?;
    let small = unitary_diamond_distance(&ComplexMatrix::identity(2), &v)? / (eps * t);
    outcome(
        worst <= 1e-10 && (small - 1.0).abs() < 1e-6,
        format!("max deviation {worst:.2e} over 20 pairs; small-parameter ratio {small:.8}"),
    )
}

type Criterion = (&'static str, fn() -> Result<Outcome>, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("lmr step identity", lmr_step_identity, Duration::from_secs(1)),
        ("lmr convergence", lmr_convergence, Duration::from_secs(10)),
        ("discrimination", discrimination, Duration::from_secs(30)),
        ("controlled lmr", controlled_lmr, Duration::from_secs(60)),
        ("gadget blocks", gadget_blocks, Duration::from_secs(5)),
        ("polynomial oracle", polynomial_oracle, Duration::from_secs(60)),
        ("jordan-lie round trip", jordan_lie, Duration::from_secs(5)),
        ("state addition", state_addition, Duration::from_secs(10)),
        ("orthogonality testing", orthogonality, Duration::from_secs(60)),
        ("sample-based grover", grover, Duration::from_secs(60)),
        ("universality", universality, Duration::from_secs(120)),
        ("diamond closed form", diamond_closed_form, Duration::from_secs(1)),
    ];
    let mut failures = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && elapsed <= *limit, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{} {:>2} {name}: {detail} [{:.2}s / {}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
