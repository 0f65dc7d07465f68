use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::block::{BlockPair, Mode, SignedKernel};
use super::gadget::{polynomial_gadget, product_term};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix};
use crate::lmr::LmrConfig;
use crate::rng::StreamRng;

/// Largest state-set size addressable by single-digit index strings.
pub const MAX_STATES: usize = 9;

/// One term `c * (e^{i phi} rho_{r_1}...rho_{r_k} + h.c.) / 2`. Indices are 0-based.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialTerm {
    indices: Vec<usize>,
    phase: f64,
    coeff: f64,
}

fn normalize_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    if r >= TAU { 0.0 } else { r }
}

impl PolynomialTerm {
    pub fn new(indices: Vec<usize>, phase: f64, coeff: f64) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::invalid("term needs at least one index"));
        }
        if !phase.is_finite() || !coeff.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            indices,
            phase: normalize_angle(phase),
            coeff,
        })
    }

    /// Parses a 1-based digit string such as `"12"`.
    pub fn parse(r: &str, phase: f64, coeff: f64) -> Result<Self> {
        let indices = parse_indices(r)?;
        Self::new(indices, phase, coeff)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    pub fn degree(&self) -> usize {
        self.indices.len()
    }

    /// The 1-based index string.
    pub fn label(&self) -> String {
        format_indices(&self.indices)
    }

    /// Phase with the coefficient's sign folded in (`phi + pi` when `c < 0`).
    pub fn signed_phase(&self) -> f64 {
        if self.coeff < 0.0 {
            normalize_angle(self.phase + PI)
        } else {
            self.phase
        }
    }

    /// How many copies of state `j` one use of this term consumes.
    pub fn usage(&self, j: usize) -> usize {
        self.indices.iter().filter(|&&i| i == j).count()
    }
}

/// 1-based digit string to 0-based indices.
pub fn parse_indices(r: &str) -> Result<Vec<usize>> {
    if r.is_empty() {
        return Err(Error::Parse("empty index string".into()));
    }
    r.chars()
        .map(|ch| match ch.to_digit(10) {
            Some(v) if v >= 1 => Ok(v as usize - 1),
            _ => Err(Error::Parse(format!("bad index character {ch:?} in {r:?}"))),
        })
        .collect()
}

pub fn format_indices(indices: &[usize]) -> String {
    indices.iter().map(|i| char::from_digit((i + 1) as u32, 10).unwrap_or('?')).collect()
}

/// `H = sum_r c_r H_r` over `k` generator states.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianPolynomial {
    k: usize,
    terms: Vec<PolynomialTerm>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    r: String,
    phi: f64,
    c: f64,
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    #[serde(rename = "K")]
    k: usize,
    terms: Vec<TermJson>,
}

impl HermitianPolynomial {
    pub fn new(k: usize, terms: Vec<PolynomialTerm>) -> Result<Self> {
        if k == 0 || k > MAX_STATES {
            return Err(Error::invalid(format!("K = {k} outside [1, {MAX_STATES}]")));
        }
        if terms.is_empty() {
            return Err(Error::invalid("polynomial has no terms"));
        }
        for t in &terms {
            if let Some(i) = t.indices.iter().find(|&&i| i >= k) {
                return Err(Error::invalid(format!("index {} exceeds K = {k}", i + 1)));
            }
        }
        let poly = Self { k, terms };
        if poly.norm() <= 0.0 {
            return Err(Error::invalid("sum of |c_r| must be positive"));
        }
        Ok(poly)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &[PolynomialTerm] {
        &self.terms
    }

    /// `c = sum_r |c_r|`.
    pub fn norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    /// `L = max_r |r|`.
    pub fn max_degree(&self) -> usize {
        self.terms.iter().map(PolynomialTerm::degree).max().unwrap_or(0)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let c = self.norm();
        self.terms.iter().map(|t| t.coeff.abs() / c).collect()
    }

    /// Expected copies of state `j` per step: `kappa_j = sum_r v_j(r) |c_r| / c`.
    pub fn kappa(&self, j: usize) -> f64 {
        self.terms
            .iter()
            .zip(self.probabilities())
            .map(|(t, p)| t.usage(j) as f64 * p)
            .sum()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: PolynomialJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let terms = json
            .terms
            .into_iter()
            .map(|t| PolynomialTerm::parse(&t.r, t.phi, t.c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(json.k, terms)
    }

    pub fn to_json_string(&self) -> String {
        let json = PolynomialJson {
            k: self.k,
            terms: self
                .terms
                .iter()
                .map(|t| TermJson { r: t.label(), phi: t.phase, c: t.coeff })
                .collect(),
        };
        serde_json::to_string(&json).expect("plain data serializes")
    }

    fn check_states(&self, states: &[DensityMatrix]) -> Result<usize> {
        if states.len() < self.k {
            return Err(Error::invalid(format!(
                "polynomial over {} states given {}",
                self.k,
                states.len()
            )));
        }
        let d = states[0].dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: bad.dim() });
        }
        Ok(d)
    }

    /// Gadget output for one term, sign folded into the phase. Degree-1 terms
    /// become `cos(phi) rho` split across the blocks.
    pub fn term_pair(&self, index: usize, states: &[DensityMatrix]) -> Result<BlockPair> {
        self.check_states(states)?;
        let term = self.terms.get(index).ok_or_else(|| Error::invalid("term index out of range"))?;
        let phi = term.signed_phase();
        let picked: Vec<&DensityMatrix> = term.indices.iter().map(|&i| &states[i]).collect();
        if let [rho] = picked.as_slice() {
            let c = phi.cos();
            let rho = rho.matrix();
            return BlockPair::new(rho.scale_real(0.5 * (1.0 + c)), rho.scale_real(0.5 * (1.0 - c)));
        }
        polynomial_gadget(&picked, phi)
    }
}

/// Exact `H` by direct multiplication.
pub fn polynomial_matrix(poly: &HermitianPolynomial, states: &[DensityMatrix]) -> Result<ComplexMatrix> {
    let d = poly.check_states(states)?;
    let mut h = ComplexMatrix::zeros(d, d);
    for term in &poly.terms {
        let mats: Vec<&ComplexMatrix> = term.indices.iter().map(|&i| states[i].matrix()).collect();
        h += &product_term(&mats, term.phase)?.scale_real(term.coeff);
    }
    Ok(h.hermitian_part())
}

/// Output of [`simulate_polynomial`].
#[derive(Clone, Debug)]
pub struct PolynomialRun {
    pub state: DensityMatrix,
    pub steps: u64,
    /// Copies of each generator state consumed (expected counts in exact mode).
    pub usage: Vec<f64>,
}

/// Simulates `e^{-iHt}` for `H = poly(states)`: `n = budget(c t)` signed steps
/// of size `c t / n`, each fed by a term gadget (exact: the mixture over terms;
/// sampled: one seeded draw `r ~ |c_r| / c` per step).
pub fn simulate_polynomial(
    sigma: &DensityMatrix,
    poly: &HermitianPolynomial,
    states: &[DensityMatrix],
    config: &LmrConfig,
    mode: Mode,
    seed: u64,
) -> Result<PolynomialRun> {
    let d = poly.check_states(states)?;
    if sigma.dim() % d != 0 {
        return Err(Error::DimensionMismatch { expected: d, found: sigma.dim() });
    }
    let scaled = config.with_time(poly.norm() * config.t)?;
    let n = scaled.steps();
    let delta = scaled.t / n as f64;
    let pairs = (0..poly.terms.len())
        .map(|i| poly.term_pair(i, states))
        .collect::<Result<Vec<_>>>()?;
    let probs = poly.probabilities();
    let mut usage = vec![0.0; poly.k];
    let out = match mode {
        Mode::Exact => {
            let kernel = SignedKernel::new(&BlockPair::mixture(&probs, &pairs)?, sigma.dim())?;
            for (j, u) in usage.iter_mut().enumerate() {
                *u = poly.kappa(j) * n as f64;
            }
            (0..n).fold(sigma.matrix().clone(), |s, _| kernel.apply(&s, delta))
        }
        Mode::Sampled => {
            let mut rng = StreamRng::new(seed);
            let mut kernels: HashMap<usize, SignedKernel> = HashMap::new();
            let mut state = sigma.matrix().clone();
            for _ in 0..n {
                let r = rng.weighted_index(&probs);
                for &j in &poly.terms[r].indices {
                    usage[j] += 1.0;
                }
                let kernel = match kernels.entry(r) {
                    std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(SignedKernel::new(&pairs[r], sigma.dim())?)
                    }
                };
                state = kernel.apply(&state, delta);
            }
            state
        }
    };
    Ok(PolynomialRun {
        state: DensityMatrix::from_channel_output(out)?,
        steps: n,
        usage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::random_state;
    use crate::linalg::{trace_distance, PureState, I};
    use crate::lmr::{ideal_conjugation, lmr_simulate};
    use std::f64::consts::FRAC_PI_2;

    fn qubit_states(seed: u64, k: usize) -> Vec<DensityMatrix> {
        (0..k as u64).map(|i| random_state(2, 1 + (i as usize % 2), seed + i).unwrap()).collect()
    }

    #[test]
    fn index_strings_round_trip() {
        assert_eq!(parse_indices("123").unwrap(), vec![0, 1, 2]);
        assert_eq!(format_indices(&[0, 8]), "19");
        assert!(parse_indices("").is_err());
        assert!(parse_indices("102").is_err());
        assert!(parse_indices("1a").is_err());
    }

    #[test]
    fn validation() {
        let t = PolynomialTerm::parse("13", 0.0, 1.0).unwrap();
        assert!(HermitianPolynomial::new(2, vec![t.clone()]).is_err());
        assert!(HermitianPolynomial::new(3, vec![t]).is_ok());
        let zero = PolynomialTerm::parse("1", 0.0, 0.0).unwrap();
        assert!(HermitianPolynomial::new(1, vec![zero]).is_err());
        assert!(HermitianPolynomial::new(10, vec![]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"K":2,"terms":[{"r":"12","phi":1.5,"c":2.0},{"r":"1","phi":0.0,"c":-0.5}]}"#;
        let poly = HermitianPolynomial::from_json_str(s).unwrap();
        assert_eq!(poly.k(), 2);
        assert_eq!(poly.norm(), 2.5);
        assert_eq!(poly.max_degree(), 2);
        assert_eq!(poly.to_json_string(), s);
        assert!(HermitianPolynomial::from_json_str(r#"{"K":1,"terms":[{"r":"2","phi":0,"c":1}]}"#).is_err());
        assert!(HermitianPolynomial::from_json_str("{").is_err());
    }

    #[test]
    fn phases_normalized() {
        let t = PolynomialTerm::parse("1", -FRAC_PI_2, -1.0).unwrap();
        assert!((t.phase() - 3.0 * FRAC_PI_2).abs() < 1e-15);
        assert!((t.signed_phase() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn matrix_reference_cases() {
        let states = vec![DensityMatrix::basis(2, 0), PureState::plus().to_density()];
        let single = HermitianPolynomial::new(2, vec![PolynomialTerm::parse("1", 0.0, 1.0).unwrap()]).unwrap();
        assert!(polynomial_matrix(&single, &states).unwrap().max_abs_diff(states[0].matrix()) < 1e-15);
        let (a, b) = (states[0].matrix(), states[1].matrix());
        let comm = HermitianPolynomial::new(2, vec![PolynomialTerm::parse("12", FRAC_PI_2, 1.0).unwrap()]).unwrap();
        let expected = ComplexMatrix::commutator(a, b).scale(I * 0.5);
        assert!(polynomial_matrix(&comm, &states).unwrap().max_abs_diff(&expected) < 1e-15);
        let anti = HermitianPolynomial::new(2, vec![PolynomialTerm::parse("12", 0.0, 1.0).unwrap()]).unwrap();
        let expected = ComplexMatrix::anticommutator(a, b).scale_real(0.5);
        assert!(polynomial_matrix(&anti, &states).unwrap().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn term_pairs_encode_signed_terms() {
        let states = qubit_states(40, 3);
        let terms = vec![
            PolynomialTerm::parse("2", 0.7, -0.4).unwrap(),
            PolynomialTerm::parse("312", 2.0, -1.2).unwrap(),
            PolynomialTerm::parse("21", 0.1, 0.9).unwrap(),
        ];
        let poly = HermitianPolynomial::new(3, terms).unwrap();
        for (i, term) in poly.terms().iter().enumerate() {
            let pair = poly.term_pair(i, &states).unwrap();
            let single = HermitianPolynomial::new(3, vec![term.clone()]).unwrap();
            let h = polynomial_matrix(&single, &states).unwrap().scale_real(1.0 / term.coeff().abs());
            assert!(pair.hamiltonian().max_abs_diff(&h) < 1e-12);
        }
    }

    #[test]
    fn degree_one_polynomial_matches_plain_simulation() {
        let rho = random_state(2, 2, 1).unwrap();
        let sigma = random_state(2, 1, 2).unwrap();
        let poly = HermitianPolynomial::new(1, vec![PolynomialTerm::parse("1", 0.0, 1.0).unwrap()]).unwrap();
        let config = LmrConfig::new(1.3, 0.02).unwrap();
        let run = simulate_polynomial(&sigma, &poly, &[rho.clone()], &config, Mode::Exact, 0).unwrap();
        let (plain, _) = lmr_simulate(&sigma, &rho, &config).unwrap();
        assert!(trace_distance(&run.state, &plain).unwrap() <= 2.0 * 0.02);
    }

    #[test]
    fn commutator_polynomial_matches_oracle() {
        let states = vec![DensityMatrix::basis(2, 0), PureState::plus().to_density()];
        let poly = HermitianPolynomial::new(2, vec![PolynomialTerm::parse("12", FRAC_PI_2, 2.0).unwrap()]).unwrap();
        let sigma = random_state(2, 1, 3).unwrap();
        let delta = 0.02;
        let config = LmrConfig::new(2.0, delta).unwrap();
        let run = simulate_polynomial(&sigma, &poly, &states, &config, Mode::Exact, 0).unwrap();
        let h = polynomial_matrix(&poly, &states).unwrap();
        let ideal = ideal_conjugation(&h, 2.0, &sigma).unwrap();
        assert!(trace_distance(&run.state, &ideal).unwrap() <= delta);
        assert_eq!(run.usage, vec![run.steps as f64, run.steps as f64]);
    }

    #[test]
    fn exact_mode_is_deterministic_and_sampled_mode_is_seeded() {
        let states = qubit_states(50, 2);
        let poly = HermitianPolynomial::new(
            2,
            vec![
                PolynomialTerm::parse("12", 0.3, 1.0).unwrap(),
                PolynomialTerm::parse("2", 0.0, -0.5).unwrap(),
            ],
        )
        .unwrap();
        let sigma = random_state(2, 1, 60).unwrap();
        let config = LmrConfig::new(0.5, 0.1).unwrap();
        let a = simulate_polynomial(&sigma, &poly, &states, &config, Mode::Exact, 1).unwrap();
        let b = simulate_polynomial(&sigma, &poly, &states, &config, Mode::Exact, 2).unwrap();
        assert_eq!(a.state, b.state);
        let c = simulate_polynomial(&sigma, &poly, &states, &config, Mode::Sampled, 3).unwrap();
        let d = simulate_polynomial(&sigma, &poly, &states, &config, Mode::Sampled, 3).unwrap();
        assert_eq!(c.state, d.state);
        assert_eq!(c.usage, d.usage);
        let total = c.usage.iter().sum::<f64>();
        assert!(total >= c.steps as f64 && total <= 2.0 * c.steps as f64);
    }
}
