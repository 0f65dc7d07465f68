//! Deterministic identity checks behind `--selftest`.

use serde_json::json;

use dmexp_core::applications::{
    add_states, commutator_polynomial, compare_budgets, discriminate, hit_probabilities, padded_states,
    superposition_target, tomography_bound, DiscriminationTask, GroverTask, Protocol,
};
use dmexp_core::gadgets::{eval_jordan_lie, jordan_lie_expand, monomial_plus_adjoint, polynomial_matrix, HermitianPolynomial};
use dmexp_core::linalg::random::{haar_state, haar_unitary, random_state_with};
use dmexp_core::linalg::{herm_exp, DensityMatrix, PureState, C64};
use dmexp_core::lmr::{lmr_step, lmr_step_explicit, LmrConfig};
use dmexp_core::rng::StreamRng;
use dmexp_core::universal::{cnot_construction_defect, euler_decompose};
use dmexp_core::{ComplexMatrix, Result};

use crate::commands::DEFAULT_POLY;
use crate::report::Report;
use crate::Command;

const SEED: u64 = 0x5e1f_7e57;

struct Checks(Vec<(String, f64, f64)>);

impl Checks {
    fn add(&mut self, name: impl Into<String>, deviation: f64, tolerance: f64) {
        self.0.push((name.into(), deviation, tolerance));
    }
}

pub fn run(command: &Command) -> Result<Report> {
    let mut c = Checks(Vec::new());
    let mut rng = StreamRng::new(SEED);
    match command {
        Command::LmrConverge(_) => {
            for dim in [2, 3] {
                let sigma = random_state_with(dim, dim, &mut rng);
                let rho = random_state_with(dim, 1, &mut rng);
                let a = lmr_step(&sigma, &rho, 0.3)?;
                let b = lmr_step_explicit(&sigma, &rho, 0.3)?;
                c.add(format!("step_closed_form_d{dim}"), a.matrix().max_abs_diff(b.matrix()), 1e-12);
            }
            let rho = random_state_with(3, 2, &mut rng);
            let out = lmr_step(&rho, &rho, 0.5)?;
            c.add("generator_fixed_point", out.matrix().max_abs_diff(rho.matrix()), 1e-12);
        }
        Command::Discriminate(_) => {
            let task = DiscriminationTask::new(0.25, 0.25, 0.25, 20, SEED)?;
            let out = discriminate(&task, Protocol::Ideal, &LmrConfig::new(1.0, 0.1)?)?;
            let worst = out.correct_probabilities.iter().fold(0.0f64, |m, p| m.max(1.0 - p));
            c.add("ideal_correct_probability", worst, 1e-12);
        }
        Command::PhaseEst(_) => {
            let rho = DensityMatrix::diagonal(&[0.8, 0.2])?;
            let t = 2.0;
            let u = herm_exp(rho.matrix(), t)?;
            let mut dev: f64 = 0.0;
            for (k, lambda) in [0.8, 0.2].into_iter().enumerate() {
                dev = dev.max((u.get(k, k) - C64::from_polar(1.0, -lambda * t)).norm());
            }
            c.add("eigenphases", dev, 1e-12);
            c.add("unitarity", u.unitarity_defect(), 1e-12);
        }
        Command::OrthoTest(_) => {
            let poly = commutator_polynomial();
            let (a, b) = padded_states(&PureState::basis(2, 0), &PureState::basis(2, 1))?;
            c.add("orthogonal_commutator_vanishes", polynomial_matrix(&poly, &[a, b])?.max_abs(), 1e-12);
            let (a, b) = padded_states(&haar_state(2, &mut rng), &haar_state(2, &mut rng))?;
            let pa = a.matrix().clone();
            let pb = b.matrix().clone();
            let direct = ComplexMatrix::commutator(&pa, &pb).scale(C64::new(0.0, 1.0));
            c.add("commutator_form", polynomial_matrix(&poly, &[a, b])?.max_abs_diff(&direct), 1e-12);
        }
        Command::AddStates(_) => {
            let psi1 = haar_state(3, &mut rng);
            let psi2 = haar_state(3, &mut rng);
            let chi = 0.4;
            let out = add_states(&psi1, &psi2, chi, Protocol::Ideal, &LmrConfig::new(1.0, 0.1)?)?;
            let target = superposition_target(&psi1, &psi2, chi)?;
            c.add("ideal_fidelity", 1.0 - out.fidelity_with_pure(&target), 1e-12);
        }
        Command::Grover(_) => {
            let projector = ComplexMatrix::real_diagonal(&[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
            let start = PureState::from_real(&[1.0; 8])?;
            let task = GroverTask::new(projector, 0.125, 0.05, 0.1)?;
            let (table, _) = hit_probabilities(&task, &start, Protocol::Ideal, 6)?;
            let theta = 0.125f64.sqrt().asin();
            let dev = table
                .iter()
                .enumerate()
                .fold(0.0f64, |m, (j, p)| m.max((p - ((2 * j + 1) as f64 * theta).sin().powi(2)).abs()));
            c.add("ideal_hit_table", dev, 1e-12);
        }
        Command::PolySim(_) => {
            let poly = HermitianPolynomial::from_json_str(DEFAULT_POLY)?;
            let states: Vec<DensityMatrix> = (0..poly.k()).map(|_| random_state_with(3, 2, &mut rng)).collect();
            let m = polynomial_matrix(&poly, &states)?;
            c.add("hermitian", m.hermiticity_defect(), 1e-12);
            let (a, b) = (states[0].matrix(), states[1].matrix());
            let direct = (ComplexMatrix::commutator(a, b).scale(C64::new(0.0, 1.0)) + a.clone()).scale_real(0.5);
            c.add("matches_operator_form", m.max_abs_diff(&direct), 1e-12);
        }
        Command::JordanLie(_) => {
            let states: Vec<DensityMatrix> = (0..3).map(|_| random_state_with(2, 2, &mut rng)).collect();
            for r in [vec![0], vec![0, 1], vec![0, 1, 2], vec![2, 0, 1, 0]] {
                let z = C64::new(0.3, -1.1);
                let expr = jordan_lie_expand(&r, z)?;
                let dev = eval_jordan_lie(&expr, &states)?.max_abs_diff(&monomial_plus_adjoint(&r, z, &states)?);
                c.add(format!("expansion_len{}", r.len()), dev, 1e-10);
            }
        }
        Command::UniversalDemo(_) => {
            c.add("cnot_construction", cnot_construction_defect(), 1e-10);
            let u = haar_unitary(2, &mut rng);
            c.add("euler_round_trip", euler_decompose(&u)?.reconstruction_error(&u), 1e-10);
        }
        Command::TomoCompare(_) => {
            let rows = compare_budgets(2, 1, 1.0, &[0.01])?;
            let direct = tomography_bound(2, 1, 1.0, 0.01)? / LmrConfig::new(1.0, 0.01)?.steps() as f64;
            c.add("ratio", (rows[0].ratio - direct).abs(), 1e-12);
        }
    }
    let mut report = Report::new(command.name(), None, &["check", "deviation", "tolerance", "pass"]).param("selftest", true);
    let mut all = true;
    for (name, dev, tol) in &c.0 {
        let ok = dev.is_finite() && *dev <= *tol;
        all &= ok;
        report.push(vec![json!(name), json!(dev), json!(tol), json!(ok)]);
    }
    report.set_passed(all);
    report.summary = format!("selftest {} of {} checks passed", c.0.iter().filter(|(_, d, t)| d <= t).count(), c.0.len());
    Ok(report)
}
