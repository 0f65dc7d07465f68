use std::f64::consts::PI;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use dmexp_core::applications::{
    add_states, compare_budgets, discriminate, hit_probabilities, orthogonality_test, overlap_angle, phase_estimate,
    run_schedule, superposition_target, DiscriminationTask, EigenTarget, GroverTask, OrthogonalityConfig,
    PhaseEstimationConfig, Protocol, SearchVerdict, Verdict,
};
use dmexp_core::gadgets::{
    eval_jordan_lie, format_indices, jordan_lie_expand, monomial_plus_adjoint, polynomial_matrix,
    simulate_polynomial, HermitianPolynomial, Mode,
};
use dmexp_core::linalg::random::{haar_state, random_state_with};
use dmexp_core::linalg::{trace_distance, DensityMatrix, PureState, C64};
use dmexp_core::lmr::{ideal_conjugation, lmr_simulate, LmrConfig};
use dmexp_core::rng::StreamRng;
use dmexp_core::stats::{loglog_slope, rate_sigma};
use dmexp_core::universal::{run_circuit, ChainMachine, Circuit};
use dmexp_core::{Error, Result};

use crate::parse;
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProtocolArg {
    Ideal,
    Lmr,
}

impl From<ProtocolArg> for Protocol {
    fn from(p: ProtocolArg) -> Self {
        match p {
            ProtocolArg::Ideal => Protocol::Ideal,
            ProtocolArg::Lmr => Protocol::Lmr,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Sampled,
}

fn protocol_name(p: ProtocolArg) -> &'static str {
    match p {
        ProtocolArg::Ideal => "ideal",
        ProtocolArg::Lmr => "lmr",
    }
}

fn need_seed(seed: Option<u64>) -> Result<u64> {
    seed.ok_or_else(|| invalid("this subcommand is stochastic: pass --seed or set DMEXP_SEED"))
}

#[derive(Args, Debug, Clone)]
pub struct LmrConverge {
    /// Dimension of the simulated state.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Evolution time.
    #[arg(long, default_value_t = PI)]
    pub t: f64,
    /// Step counts, e.g. `16,32,...,1024`.
    #[arg(long, value_parser = parse::u64_list, default_value = "16,32,...,1024")]
    pub ns: ::std::vec::Vec<u64>,
    /// Rank of the generator state.
    #[arg(long, default_value_t = 1)]
    pub rank: usize,
    /// Allowed deviation of the fitted slope from -1.
    #[arg(long, default_value_t = 0.1)]
    pub tolerance: f64,
}

pub fn lmr_converge(a: &LmrConverge, seed: Option<u64>) -> Result<Report> {
    let seed = need_seed(seed)?;
    if a.dim < 2 || a.rank == 0 || a.rank > a.dim {
        return Err(invalid("need dim >= 2 and 1 <= rank <= dim"));
    }
    let ns = a.ns.as_slice();
    if ns.len() < 2 {
        return Err(invalid("--ns needs at least two step counts"));
    }
    let mut rng = StreamRng::new(seed);
    let sigma = haar_state(a.dim, &mut rng).to_density();
    let rho = random_state_with(a.dim, a.rank, &mut rng);
    let ideal = ideal_conjugation(rho.matrix(), a.t, &sigma)?;
    let base = LmrConfig::new(a.t, 1.0)?;
    let mut report = Report::new("lmr-converge", Some(seed), &["n", "trace_distance"])
        .param("dim", a.dim)
        .param("t", a.t)
        .param("rank", a.rank)
        .param("ns", ns);
    let mut curve = Vec::new();
    for &n in ns {
        let (out, _) = lmr_simulate(&sigma, &rho, &base.with_steps(n)?)?;
        let d = trace_distance(&out, &ideal)?;
        curve.push((n as f64, d));
        report.push(vec![json!(n), json!(d)]);
    }
    let slope = loglog_slope(&curve)?;
    report.record.curve = curve.iter().map(|&(x, y)| [x, y]).collect();
    report.record.slope = Some(slope);
    report.set_passed((slope + 1.0).abs() <= a.tolerance);
    report.summary = format!("fitted slope {slope:.4}");
    Ok(report)
}

#[derive(Args, Debug, Clone)]
pub struct Discriminate {
    /// Smaller candidate parameter `x` of `diag(x, 1 - x)`.
    #[arg(long, default_value_t = 0.25)]
    pub x: f64,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    /// Margin `eta`; only reported.
    #[arg(long, default_value_t = 0.25)]
    pub eta: f64,
    #[arg(long, value_enum, default_value_t = ProtocolArg::Ideal)]
    pub protocol: ProtocolArg,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Simulation error target for the lmr protocol.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub delta: f64,
}

pub fn discriminate_cmd(a: &Discriminate, seed: Option<u64>) -> Result<Report> {
    let seed = need_seed(seed)?;
    let task = DiscriminationTask::new(a.x, a.eps, a.eta, a.trials, seed)?;
    let out = discriminate(&task, a.protocol.into(), &LmrConfig::new(1.0, a.delta)?)?;
    let mut report = Report::new(
        "discriminate",
        Some(seed),
        &["protocol", "x", "eps", "trials", "successes", "success_rate", "copies_per_trial"],
    )
    .param("x", a.x)
    .param("eps", a.eps)
    .param("eta", a.eta)
    .param("protocol", protocol_name(a.protocol))
    .param("delta", a.delta);
    report.push(vec![
        json!(protocol_name(a.protocol)),
        json!(a.x),
        json!(a.eps),
        json!(out.trials),
        json!(out.successes),
        json!(out.success_rate),
        json!(out.copies_per_trial),
    ]);
    let expected = match a.protocol {
        ProtocolArg::Ideal => 1.0,
        ProtocolArg::Lmr => 1.0 - a.delta,
    };
    let floor = expected - 3.0 * rate_sigma(expected, a.trials);
    report.record.trials = out.trials;
    report.record.success_rate = Some(out.success_rate);
    report.extra("correct_probabilities", out.correct_probabilities);
    report.extra("in_margin_regime", task.in_margin_regime());
    report.set_passed(out.success_rate >= floor);
    report.summary = format!("success rate {:.4} (floor {floor:.4})", out.success_rate);
    Ok(report)
}

#[derive(Args, Debug, Clone)]
pub struct PhaseEst {
    /// Eigenvalues of the diagonal state `rho`.
    #[arg(long, value_parser = parse::f64_list, default_value = "0.8,0.2")]
    pub eigenvalues: ::std::vec::Vec<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub precision: f64,
    #[arg(long, value_enum, default_value_t = ProtocolArg::Lmr)]
    pub protocol: ProtocolArg,
    /// Eigenvector index (decreasing order), `all`, or `spectrum:N`.
    #[arg(long, default_value = "0")]
    pub target: String,
}

fn eigen_target(s: &str) -> Result<EigenTarget> {
    if s == "all" {
        return Ok(EigenTarget::All);
    }
    if let Some(n) = s.strip_prefix("spectrum:") {
        let samples = n.parse().map_err(|_| Error::Parse(format!("bad sample count {n:?}")))?;
        return Ok(EigenTarget::Spectrum { samples });
    }
    s.parse().map(EigenTarget::Eigenvector).map_err(|_| Error::Parse(format!("bad target {s:?}")))
}

pub fn phase_est(a: &PhaseEst, seed: Option<u64>) -> Result<Report> {
    let seed = need_seed(seed)?;
    let eigenvalues = a.eigenvalues.as_slice();
    let rho = DensityMatrix::diagonal(eigenvalues)?;
    let mut sorted = eigenvalues.to_vec();
    sorted.sort_by(|x, y| y.total_cmp(x));
    let config = PhaseEstimationConfig::new(a.precision, a.protocol.into())?;
    config.validate()?;
    let est = phase_estimate(&rho, &config, eigen_target(&a.target)?, seed)?;
    let mut report = Report::new("phase-est", Some(seed), &["run", "target", "eigenvalue", "estimate", "error"])
        .param("eigenvalues", eigenvalues)
        .param("precision", a.precision)
        .param("protocol", protocol_name(a.protocol))
        .param("target", &a.target);
    let mut worst: f64 = 0.0;
    for (i, (&e, &t)) in est.estimates.iter().zip(&est.targets).enumerate() {
        let err = e - sorted[t];
        worst = worst.max(err.abs());
        report.push(vec![json!(i), json!(t), json!(sorted[t]), json!(e), json!(err)]);
    }
    report.record.trials = est.estimates.len();
    report.extra("steps_per_pass", est.steps_per_pass);
    report.extra("copies", est.copies);
    report.set_passed(worst <= a.precision);
    report.summary = format!("max error {worst:.4}, {} copies", est.copies);
    Ok(report)
}

#[derive(Args, Debug, Clone)]
pub struct OrthoTest {
    /// Amplitudes of the first state, e.g. `1,0`.
    #[arg(long, default_value = "1,0")]
    pub psi1: String,
    #[arg(long, default_value = "1,1")]
    pub psi2: String,
    /// Promise: overlap is 0 or at least `w`.
    #[arg(long, default_value_t = 0.5)]
    pub w: f64,
    #[arg(long, default_value_t = 0.05)]
    pub eps_fail: f64,
    #[arg(long, value_enum, default_value_t = ProtocolArg::Ideal)]
    pub protocol: ProtocolArg,
    /// Independent runs; run `i` uses seed `seed + i`.
    #[arg(long, default_value_t = 1)]
    pub runs: u64,
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Orthogonal => "orthogonal",
        Verdict::Overlapping => "overlapping",
    }
}

pub fn ortho_test(a: &OrthoTest, seed: Option<u64>) -> Result<Report> {
    let seed = need_seed(seed)?;
    let psi1 = parse::amplitudes(&a.psi1)?;
    let psi2 = parse::amplitudes(&a.psi2)?;
    let config = OrthogonalityConfig::new(a.w, a.eps_fail, a.protocol.into())?;
    let overlap = psi1.inner(&psi2).norm_sqr();
    let mut report = Report::new(
        "ortho-test",
        Some(seed),
        &["run", "verdict", "overlapping_votes", "repetitions", "copies"],
    )
    .param("psi1", &a.psi1)
    .param("psi2", &a.psi2)
    .param("w", a.w)
    .param("eps_fail", a.eps_fail)
    .param("protocol", protocol_name(a.protocol));
    let mut correct = 0;
    for run in 0..a.runs {
        let out = orthogonality_test(&psi1, &psi2, &config, seed.wrapping_add(run))?;
        let truth = if overlap < 1e-12 { Verdict::Orthogonal } else { Verdict::Overlapping };
        correct += usize::from(out.verdict == truth);
        report.push(vec![
            json!(run),
            json!(verdict_name(out.verdict)),
            json!(out.overlapping_votes),
            json!(out.repetitions),
            json!(out.copies),
        ]);
        if run == 0 {
            report.extra("fire_probabilities", &out.fire_probabilities);
        }
    }
    let rate = correct as f64 / a.runs.max(1) as f64;
    report.record.trials = a.runs as usize;
    report.record.success_rate = Some(rate);
    report.extra("overlap", overlap);
    // Only promise-respecting inputs carry a guarantee.
    let in_promise = overlap < 1e-12 || overlap >= a.w;
    let floor = 1.0 - a.eps_fail - 3.0 * rate_sigma(1.0 - a.eps_fail, a.runs as usize);
    report.set_passed(!in_promise || rate >= floor);
    report.summary = format!("overlap {overlap:.4}, correct verdicts {rate:.3}");
    Ok(report)
}

#[derive(Args, Debug, Clone)]
pub struct AddStates {
    #[arg(long, default_value = "1,0")]
    pub psi1: String,
    #[arg(long, default_value = "1,1")]
    pub psi2: String,
    /// Rotation angle; half the overlap angle if omitted.
    #[arg(long)]
    pub chi: Option<f64>,
    #[arg(long, value_enum, default_value_t = ProtocolArg::Lmr)]
    pub protocol: ProtocolArg,
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
}

pub fn add_states_cmd(a: &AddStates, seed: Option<u64>) -> Result<Report> {
    let psi1 = parse::amplitudes(&a.psi1)?;
    let psi2 = parse::amplitudes(&a.psi2)?;
    let angle = overlap_angle(&psi1, &psi2)?;
    let chi = a.chi.unwrap_or(angle / 2.0);
    let out = add_states(&psi1, &psi2, chi, a.protocol.into(), &LmrConfig::new(1.0, a.delta)?)?;
    let target = superposition_target(&psi1, &psi2, chi)?;
    let fidelity = out.fidelity_with_pure(&target);
    let mut report = Report::new("add-states", seed, &["chi", "overlap_angle", "fidelity", "purity"])
        .param("psi1", &a.psi1)
        .param("psi2", &a.psi2)
        .param("protocol", protocol_name(a.protocol))
        .param("delta", a.delta);
    report.push(vec![json!(chi), json!(angle), json!(fidelity), json!(out.purity())]);
    report.extra("state", out.to_json());
    let tol = match a.protocol {
        ProtocolArg::Ideal => 1e-12,
        ProtocolArg::Lmr => a.delta,
    };
    report.set_passed(fidelity >= 1.0 - tol);
    report.summary = format!("fidelity {fidelity:.6}");
    Ok(report)
}

#[derive(Args, Debug, Clone)]
pub struct Grover {
    #[arg(long, default_value_t = 2)]
    pub n_qubits: u32,
    /// Marked basis states.
    #[arg(long, value_parser = parse::u64_list, default_value = "3")]
    pub marked: ::std::vec::Vec<u64>,
    /// Start state amplitudes; uniform if omitted.
    #[arg(long)]
    pub start: Option<String>,
    /// Promised lower bound on the overlap; the actual overlap if omitted.
    #[arg(long)]
    pub w: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub eps_fail: f64,
    #[arg(long, value_enum, default_value_t = ProtocolArg::Lmr)]
    pub protocol: ProtocolArg,
    /// Per-reflection error target; `sqrt(w) / 10` if omitted.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub runs: u64,
}

pub fn grover(a: &Grover, seed: Option<u64>) -> Result<Report> {
    let seed = need_seed(seed)?;
    if a.n_qubits == 0 || a.n_qubits > 6 {
        return Err(invalid("--n-qubits must lie in 1..=6"));
    }
    let dim = 1usize << a.n_qubits;
    let marked = a.marked.as_slice();
    if let Some(&m) = marked.iter().find(|&&m| m as usize >= dim) {
        return Err(invalid(format!("marked state {m} out of range for dimension {dim}")));
    }
    let probs: Vec<f64> = (0..dim).map(|k| if marked.contains(&(k as u64)) { 1.0 } else { 0.0 }).collect();
    let projector = dmexp_core::ComplexMatrix::real_diagonal(&probs);
    let start = match &a.start {
        Some(s) => parse::amplitudes(s)?,
        None => PureState::from_real(&vec![1.0; dim])?,
    };
    let lambda = start.to_density().expectation(&projector).re;
    let w = a.w.unwrap_or(if lambda > 1e-12 { lambda } else { 1.0 / dim as f64 });
    let delta = a.delta.unwrap_or(w.sqrt() / 10.0);
    let task = GroverTask::new(projector, w, a.eps_fail, delta)?;
    let schedule = task.schedule();
    let max_j = schedule.iter().copied().max().unwrap_or(1);
    let (table, per_reflection) = hit_probabilities(&task, &start, a.protocol.into(), max_j)?;
    let mut report = Report::new("grover", Some(seed), &["run", "verdict", "rounds", "iterates", "copies"])
        .param("n_qubits", a.n_qubits)
        .param("marked", marked)
        .param("w", w)
        .param("eps_fail", a.eps_fail)
        .param("protocol", protocol_name(a.protocol))
        .param("delta", delta);
    let root = StreamRng::new(seed);
    let mut found = 0;
    for run in 0..a.runs {
        let out = run_schedule(&schedule, &table, per_reflection, &mut root.substream(run));
        let hit = out.verdict == SearchVerdict::Found;
        found += usize::from(hit);
        report.push(vec![
            json!(run),
            json!(if hit { "found" } else { "not_found" }),
            json!(out.rounds),
            json!(out.iterates),
            json!(out.copies),
        ]);
    }
    let rate = found as f64 / a.runs.max(1) as f64;
    report.record.trials = a.runs as usize;
    report.record.success_rate = Some(rate);
    report.extra("overlap", lambda);
    report.extra("copies_per_reflection", per_reflection);
    let passed = if lambda < 1e-12 {
        found == 0
    } else if lambda >= w {
        rate >= 1.0 - a.eps_fail - 3.0 * rate_sigma(1.0 - a.eps_fail, a.runs as usize)
    } else {
        true
    };
    report.set_passed(passed);
    report.summary = format!("overlap {lambda:.4}, found rate {rate:.3}");
    Ok(report)
}

pub const DEFAULT_POLY: &str = r#"{"K":2,"terms":[{"r":"12","phi":1.5707963267948966,"c":1.0},{"r":"1","phi":0.0,"c":0.5}]}"#;

#[derive(Args, Debug, Clone)]
pub struct PolySim {
    /// Polynomial as JSON (or `@file`): `{"K":k,"terms":[{"r":"12","phi":..,"c":..}]}`.
    #[arg(long, default_value = DEFAULT_POLY)]
    pub poly: String,
    /// Dimension of the random generator states.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 0.02)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
}

pub fn poly_sim(a: &PolySim, seed: Option<u64>) -> Result<Report> {
    let seed = need_seed(seed)?;
    let poly = HermitianPolynomial::from_json_str(&parse::inline_or_file(&a.poly)?)?;
    if a.dim < 2 {
        return Err(invalid("--dim must be at least 2"));
    }
    let mut rng = StreamRng::new(seed);
    let states: Vec<DensityMatrix> = (0..poly.k()).map(|_| haar_state(a.dim, &mut rng).to_density()).collect();
    let sigma = haar_state(a.dim, &mut rng).to_density();
    let mode = match a.mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Sampled => Mode::Sampled,
    };
    let ideal = ideal_conjugation(&polynomial_matrix(&poly, &states)?, a.t, &sigma)?;
    let run = simulate_polynomial(&sigma, &poly, &states, &LmrConfig::new(a.t, a.delta)?, mode, seed)?;
    let d = trace_distance(&run.state, &ideal)?;
    let mode_name = if mode == Mode::Exact { "exact" } else { "sampled" };
    let mut report = Report::new("poly-sim", Some(seed), &["mode", "t", "delta", "steps", "trace_distance"])
        .param("poly", poly.to_json_string())
        .param("dim", a.dim)
        .param("mode", mode_name);
    report.push(vec![json!(mode_name), json!(a.t), json!(a.delta), json!(run.steps), json!(d)]);
    report.extra("usage", &run.usage);
    // Sampled mode carries no deterministic guarantee.
    report.set_passed(mode == Mode::Sampled || d <= a.delta);
    report.summary = format!("trace distance to oracle {d:.3e} after {} steps", run.steps);
    Ok(report)
}

#[derive(Args, Debug, Clone)]
pub struct JordanLie {
    #[arg(long, default_value_t = 50)]
    pub cases: usize,
    #[arg(long, default_value_t = 4)]
    pub max_len: usize,
    /// Number of distinct states indices are drawn from.
    #[arg(long, default_value_t = 3)]
    pub states: usize,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
}

pub fn jordan_lie(a: &JordanLie, seed: Option<u64>) -> Result<Report> {
    let seed = need_seed(seed)?;
    if a.max_len == 0 || a.states == 0 || a.dim < 2 {
        return Err(invalid("need max_len >= 1, states >= 1 and dim >= 2"));
    }
    let mut rng = StreamRng::new(seed);
    let states: Vec<DensityMatrix> = (0..a.states).map(|_| random_state_with(a.dim, 2.min(a.dim), &mut rng)).collect();
    let mut report = Report::new("jordan-lie", Some(seed), &["case", "r", "z_re", "z_im", "expression", "deviation"])
        .param("cases", a.cases)
        .param("max_len", a.max_len)
        .param("states", a.states)
        .param("dim", a.dim);
    let mut worst: f64 = 0.0;
    for case in 0..a.cases {
        let len = 1 + rng.below(a.max_len as u64) as usize;
        let r: Vec<usize> = (0..len).map(|_| rng.below(a.states as u64) as usize).collect();
        let z = C64::new(rng.normal(), rng.normal());
        let expr = jordan_lie_expand(&r, z)?;
        let dev = eval_jordan_lie(&expr, &states)?.max_abs_diff(&monomial_plus_adjoint(&r, z, &states)?);
        worst = worst.max(dev);
        report.push(vec![
            json!(case),
            json!(format_indices(&r)),
            json!(z.re),
            json!(z.im),
            json!(expr.to_string()),
            json!(dev),
        ]);
    }
    report.record.trials = a.cases;
    report.set_passed(worst <= 1e-10);
    report.summary = format!("max deviation {worst:.2e} over {} cases", a.cases);
    Ok(report)
}

#[derive(Args, Debug, Clone)]
pub struct UniversalDemo {
    /// Circuit as JSON (or `@file`); the Bell circuit if omitted.
    #[arg(long)]
    pub circuit: Option<String>,
    /// Data qubits; the largest index used plus one if omitted (at least 2).
    #[arg(long)]
    pub n_qubits: Option<usize>,
    /// Error budget per gate.
    #[arg(long, default_value_t = 0.002)]
    pub delta: f64,
    /// Depolarizing probability of the resource states.
    #[arg(long, default_value_t = 0.0)]
    pub depolarize: f64,
}

pub fn universal_demo(a: &UniversalDemo, seed: Option<u64>) -> Result<Report> {
    let circuit = match &a.circuit {
        Some(s) => Circuit::from_json_str(&parse::inline_or_file(s)?)?,
        None => Circuit::bell(),
    };
    let used = Value::from(circuit.to_json_string());
    let width = circuit
        .gates
        .iter()
        .flat_map(|g| match g {
            dmexp_core::universal::Gate::Unitary { q, .. } => vec![*q],
            dmexp_core::universal::Gate::Cnot { c, t } => vec![*c, *t],
        })
        .max()
        .map_or(1, |q| q + 1);
    let n = a.n_qubits.unwrap_or(width.max(2));
    let mut machine = ChainMachine::new(n)?.with_depolarize(a.depolarize)?;
    let input = machine.data_state()?;
    let run = run_circuit(&mut machine, &circuit, a.delta)?;
    let ideal = circuit.ideal_output(n, &input)?;
    let d = trace_distance(&run.state, &ideal)?;
    let fidelity = run.state.matrix().matmul(ideal.matrix()).trace().re;
    let budget = a.delta * circuit.gates.len() as f64;
    let c = &run.cost;
    let mut report = Report::new(
        "universal-demo",
        seed,
        &[
            "fidelity",
            "trace_distance",
            "error_budget",
            "exchange_pulses",
            "swaps",
            "rotations",
            "resource_zeros",
            "resource_pluses",
            "resource_total",
            "predicted_shape",
        ],
    )
    .param("circuit", used)
    .param("n_qubits", n)
    .param("delta", a.delta)
    .param("depolarize", a.depolarize);
    report.push(vec![
        json!(fidelity),
        json!(d),
        json!(budget),
        json!(c.exchange_pulses),
        json!(c.swaps),
        json!(c.rotations),
        json!(c.resources.zeros),
        json!(c.resources.pluses),
        json!(c.resource_total),
        json!(c.predicted_shape),
    ]);
    report.extra("cost", c);
    report.set_passed(d <= budget.max(1e-12));
    report.summary = format!("fidelity {fidelity:.5}, {} resource states", c.resource_total);
    Ok(report)
}

#[derive(Args, Debug, Clone)]
pub struct TomoCompare {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, value_parser = parse::f64_list, default_value = "0.1,0.01,0.001")]
    pub deltas: ::std::vec::Vec<f64>,
}

pub fn tomo_compare(a: &TomoCompare, seed: Option<u64>) -> Result<Report> {
    let deltas = a.deltas.as_slice();
    let rows = compare_budgets(a.d, a.r, a.t, deltas)?;
    let mut report = Report::new("tomo-compare", seed, &["delta", "lmr_budget", "tomography", "ratio"])
        .param("d", a.d)
        .param("r", a.r)
        .param("t", a.t)
        .param("deltas", deltas);
    for row in &rows {
        report.push(vec![json!(row.delta), json!(row.lmr_budget), json!(row.tomography), json!(row.ratio)]);
    }
    let mut by_delta = rows.clone();
    by_delta.sort_by(|x, y| y.delta.total_cmp(&x.delta));
    let monotone = by_delta.windows(2).all(|w| w[1].ratio > w[0].ratio);
    report.set_passed(monotone);
    report.summary = format!("ratio {} as delta shrinks", if monotone { "grows" } else { "does not grow" });
    Ok(report)
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
