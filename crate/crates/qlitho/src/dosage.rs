//! The substrate field operator and multi-photon dosage expectations.
//!
//! At the recombination point the two arms form the local field
//!
//! ```text
//! e(phi) = sqrt(mix) * c * exp(+i phi)  +  sqrt(1-mix) * d * exp(-i phi)
//! ```
//!
//! and the K-photon exposure ("dosage") of a state is the normally ordered
//! expectation `<(e†)^K e^K> / K!`, equal to `||e^K psi||^2 / K!` for pure
//! states. Three independent evaluation paths are provided: a fast
//! combinatorial expansion, a dense-matrix brute-force oracle for
//! cross-checking, and a closed form for coherent input.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::ops::RangeInclusive;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fock::{PhotonPair, TwoModeState, MAX_TOTAL};
use crate::numeric;

/// Largest per-mode occupation the dense oracle will represent; the product
/// basis has dimension `(cutoff+1)^2`.
pub const MAX_ORACLE_CUTOFF: u32 = 12;

/// Negative dosage values above this threshold are floating-point artifacts
/// and clamp to zero; anything below it indicates an internal inconsistency.
const NEG_CLAMP: f64 = 1e-14;

/// The local field at substrate position phase `phi`.
///
/// `mix` is the power fraction carried by mode C; the balanced interferometer
/// has `mix = 1/2`. The two arms pick up opposite position phases `±phi`, so
/// one fringe of an N-photon pattern spans `Δphi = π/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubstrateField {
    phi: f64,
    mix: f64,
}

impl SubstrateField {
    pub fn new(phi: f64, mix: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::InvalidInput(format!(
                "substrate phase must be finite, got {phi}"
            )));
        }
        if !(mix > 0.0 && mix < 1.0) {
            return Err(Error::InvalidInput(format!(
                "mode-C power fraction must lie strictly between 0 and 1, got {mix}"
            )));
        }
        Ok(Self { phi, mix })
    }

    /// Equal-power field, the default configuration.
    pub fn balanced(phi: f64) -> Result<Self> {
        Self::new(phi, 0.5)
    }

    pub fn phi(self) -> f64 {
        self.phi
    }

    pub fn mix(self) -> f64 {
        self.mix
    }

    /// Coefficient of the mode-C annihilation operator in `e(phi)`.
    pub fn coeff_c(self) -> Complex64 {
        Complex64::from_polar(self.mix.sqrt(), self.phi)
    }

    /// Coefficient of the mode-D annihilation operator in `e(phi)`.
    pub fn coeff_d(self) -> Complex64 {
        Complex64::from_polar((1.0 - self.mix).sqrt(), -self.phi)
    }
}

/// An absorption order `k >= 1` together with the field configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DosageQuery {
    k: u32,
    field: SubstrateField,
}

impl DosageQuery {
    pub fn new(k: u32, field: SubstrateField) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidInput(
                "absorption order k must be at least 1".into(),
            ));
        }
        Ok(Self { k, field })
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub fn field(self) -> SubstrateField {
        self.field
    }
}

/// One evaluated dosage expectation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DosageResult {
    pub value: f64,
    pub k: u32,
    pub phi: f64,
}

/// Apply `e(phi)^K` to a state via the binomial expansion
/// `e^K = Σ_j C(K,j) (sqrt(mix) e^{i phi})^j (sqrt(1-mix) e^{-i phi})^{K-j} c^j d^{K-j}`.
///
/// Annihilation only lowers photon numbers, so the result is exact up to
/// floating point — no truncation occurs. The image is generally
/// unnormalized and may be the zero state.
pub fn apply_field_power(state: &TwoModeState, query: DosageQuery) -> TwoModeState {
    let k = query.k;
    let field = query.field;
    let mut out: BTreeMap<PhotonPair, Complex64> = BTreeMap::new();
    for j in 0..=k {
        // C(K,j) * mix^{j/2} * (1-mix)^{(K-j)/2} * e^{i phi (2j - K)}
        let magnitude = numeric::binomial(k, j)
            * field.mix.sqrt().powi(j as i32)
            * (1.0 - field.mix).sqrt().powi((k - j) as i32);
        let phase = field.phi * (2.0 * f64::from(j) - f64::from(k));
        let coeff = Complex64::from_polar(magnitude, phase);
        for (pair, amp) in state.terms() {
            let factor =
                numeric::falling_sqrt(pair.n_c(), j) * numeric::falling_sqrt(pair.n_d(), k - j);
            if factor == 0.0 {
                continue;
            }
            let target = PhotonPair::new_unchecked(pair.n_c() - j, pair.n_d() - (k - j));
            *out.entry(target).or_insert(Complex64::ZERO) += coeff * amp * factor;
        }
    }
    TwoModeState::from_map_raw(out)
}

/// The dosage expectation `<(e†)^K e^K> / K! = ||e^K psi||^2 / K!`.
///
/// The state is assumed normalized; the result is exact up to floating point
/// and non-negative by construction.
pub fn dosage_expectation(state: &TwoModeState, query: DosageQuery) -> DosageResult {
    let image = apply_field_power(state, query);
    DosageResult {
        value: numeric::div_by_factorial(image.norm_sq(), query.k),
        k: query.k,
        phi: query.field.phi,
    }
}

/// Clamp floating-point noise: tiny negatives become 0, real negatives are an
/// internal-consistency failure.
fn clamp_dosage(value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -NEG_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::Internal(format!(
            "dosage expectation came out negative beyond tolerance: {value}"
        )))
    }
}

/// Dense-matrix brute force on the truncated product basis.
///
/// Precomputes `M = (E^K)† E^K` for one query so many states can be checked
/// against it cheaply.
struct DenseOracle {
    matrix: DMatrix<Complex64>,
    cutoff: u32,
    k: u32,
}

impl DenseOracle {
    fn new(query: DosageQuery, cutoff: u32) -> Result<Self> {
        if cutoff > MAX_ORACLE_CUTOFF {
            return Err(Error::InvalidInput(format!(
                "oracle cutoff {cutoff} exceeds the supported maximum {MAX_ORACLE_CUTOFF}"
            )));
        }
        let side = (cutoff + 1) as usize;
        let dim = side * side;
        let idx = |n_c: usize, n_d: usize| n_c * side + n_d;
        let mut op_c = DMatrix::<Complex64>::zeros(dim, dim);
        let mut op_d = DMatrix::<Complex64>::zeros(dim, dim);
        for n_c in 0..side {
            for n_d in 0..side {
                if n_c > 0 {
                    op_c[(idx(n_c - 1, n_d), idx(n_c, n_d))] =
                        Complex64::new((n_c as f64).sqrt(), 0.0);
                }
                if n_d > 0 {
                    op_d[(idx(n_c, n_d - 1), idx(n_c, n_d))] =
                        Complex64::new((n_d as f64).sqrt(), 0.0);
                }
            }
        }
        let field = query.field;
        let e_matrix = op_c * field.coeff_c() + op_d * field.coeff_d();
        let mut e_power = DMatrix::<Complex64>::identity(dim, dim);
        for _ in 0..query.k {
            e_power = &e_matrix * e_power;
        }
        let matrix = e_power.adjoint() * e_power;
        Ok(Self {
            matrix,
            cutoff,
            k: query.k,
        })
    }

    fn expectation(&self, state: &TwoModeState) -> Result<f64> {
        let needed = state.max_mode_occupation();
        if needed > self.cutoff {
            return Err(Error::CutoffTooSmall {
                cutoff: self.cutoff,
                needed,
            });
        }
        let side = (self.cutoff + 1) as usize;
        let mut psi = DVector::<Complex64>::zeros(side * side);
        for (pair, amp) in state.terms() {
            psi[pair.n_c() as usize * side + pair.n_d() as usize] = amp;
        }
        let quad = (psi.adjoint() * &self.matrix * &psi)[(0, 0)].re;
        clamp_dosage(numeric::div_by_factorial(quad, self.k))
    }
}

/// Independent dosage evaluation by explicit dense-matrix products.
///
/// Builds matrices for the two mode operators on the `(cutoff+1)^2` product
/// basis, forms the field matrix `E`, and evaluates `<psi|(E†)^K E^K|psi>/K!`
/// directly. Intended as a verification path for [`dosage_expectation`];
/// requires the state's support to fit within `cutoff` per mode.
pub fn dosage_matrix_oracle(state: &TwoModeState, query: DosageQuery, cutoff: u32) -> Result<f64> {
    DenseOracle::new(query, cutoff)?.expectation(state)
}

/// Closed-form dosage of the coherent product state `|alpha>_C |beta>_D`:
/// `|alpha_e|^{2K}/K!` with `alpha_e = sqrt(mix) alpha e^{i phi} + sqrt(1-mix) beta e^{-i phi}`,
/// since coherent states are eigenstates of the field operator.
pub fn coherent_dosage_closed_form(alpha: Complex64, beta: Complex64, query: DosageQuery) -> f64 {
    let field = query.field;
    let alpha_e = field.coeff_c() * alpha + field.coeff_d() * beta;
    numeric::div_by_factorial(alpha_e.norm_sqr().powi(query.k as i32), query.k)
}

/// The fringe law for a NOON state probed at its own order:
/// `<delta_N> = 2^{-N} (1 + cos(2 N phi - theta))`.
pub fn noon_fringe_law(n: u32, theta: f64, phi: f64) -> f64 {
    2f64.powi(-(n as i32)) * (1.0 + (2.0 * f64::from(n) * phi - theta).cos())
}

/// The flat level of a NOON state probed below its order (`K < N`):
/// `<delta_K> = 2^{-K} C(N,K)`, independent of position.
pub fn noon_flat_level(n: u32, k: u32) -> f64 {
    2f64.powi(-(k as i32)) * numeric::binomial(n, k)
}

/// Deterministic pseudo-random normalized states for cross-check sweeps.
///
/// Each state has up to four terms with total photon number at most
/// `max_total` per term. The same seed always reproduces the same states.
pub fn random_states(count: usize, max_total: u32, seed: u64) -> Vec<TwoModeState> {
    assert!(max_total <= MAX_TOTAL);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = Vec::with_capacity(count);
    while states.len() < count {
        let term_count = rng.random_range(1..=4usize);
        let terms: Vec<(PhotonPair, Complex64)> = (0..term_count)
            .map(|_| {
                let n_c = rng.random_range(0..=max_total);
                let n_d = rng.random_range(0..=(max_total - n_c));
                let amp = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                (PhotonPair::new_unchecked(n_c, n_d), amp)
            })
            .collect();
        if let Ok(state) = TwoModeState::new(terms, true) {
            states.push(state);
        }
    }
    states
}

/// Outcome of an oracle-equivalence sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepReport {
    /// Largest |fast − oracle| observed.
    pub max_deviation: f64,
    /// Number of (state, k, phi) combinations compared.
    pub comparisons: usize,
}

/// Compare the combinatorial dosage against the dense oracle for every
/// combination of state, absorption order, and position on a uniform
/// `phi_points`-point grid over `[0, 2π)`.
pub fn equivalence_sweep(
    states: &[TwoModeState],
    k_range: RangeInclusive<u32>,
    phi_points: usize,
    mix: f64,
    cutoff: u32,
) -> Result<SweepReport> {
    if phi_points == 0 {
        return Err(Error::InvalidInput(
            "equivalence sweep needs at least one phi point".into(),
        ));
    }
    let mut max_deviation = 0.0f64;
    let mut comparisons = 0;
    for i in 0..phi_points {
        let phi = TAU * i as f64 / phi_points as f64;
        for k in k_range.clone() {
            let query = DosageQuery::new(k, SubstrateField::new(phi, mix)?)?;
            let oracle = DenseOracle::new(query, cutoff)?;
            for state in states {
                let fast = dosage_expectation(state, query).value;
                let brute = oracle.expectation(state)?;
                max_deviation = max_deviation.max((fast - brute).abs());
                comparisons += 1;
            }
        }
    }
    Ok(SweepReport {
        max_deviation,
        comparisons,
    })
}
