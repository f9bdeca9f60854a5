//! Canonical input states and JSON state-file I/O.
//!
//! Provides constructors for the path-entangled "NOON" states, plain number
//! states, and truncated two-mode coherent (classical-light) states, plus a
//! load/save pair for arbitrary states supplied as JSON files. Externally
//! defined families (e.g. reciprocal-binomial states) are deliberately not
//! built in; they are supplied via the file loader instead.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::FRAC_1_SQRT_2;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{PhotonPair, TruncationReport, TwoModeState, MAX_TOTAL};
use crate::numeric;

/// Parameters of a NOON state `(|n,0> + e^{i theta}|0,n>)/sqrt(2)`.
///
/// The branch phase `theta` is a free preparation parameter, independent of
/// the substrate position phase applied later by the field operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoonSpec {
    n: u32,
    theta: f64,
}

impl NoonSpec {
    pub fn new(n: u32, theta: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidInput(
                "NOON photon number must be at least 1".into(),
            ));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidInput(format!(
                "NOON branch phase must be finite, got {theta}"
            )));
        }
        Ok(Self { n, theta })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn theta(self) -> f64 {
        self.theta
    }
}

/// The two-branch path-entangled state `(|n,0> + e^{i theta}|0,n>)/sqrt(2)`.
pub fn noon(spec: NoonSpec) -> Result<TwoModeState> {
    let high = PhotonPair::new(spec.n, 0)?;
    let low = PhotonPair::new(0, spec.n)?;
    TwoModeState::new(
        [
            (high, Complex64::new(FRAC_1_SQRT_2, 0.0)),
            (low, Complex64::from_polar(FRAC_1_SQRT_2, spec.theta)),
        ],
        false,
    )
}

/// The single number state `|n_c, n_d>`.
pub fn fock_product(n_c: u32, n_d: u32) -> Result<TwoModeState> {
    let pair = PhotonPair::new(n_c, n_d)?;
    TwoModeState::new([(pair, Complex64::ONE)], false)
}

/// Product of two coherent states, truncated to `cutoff` photons per mode.
///
/// Amplitudes follow the Poisson law `alpha^j beta^k / sqrt(j! k!)` (up to
/// the overall Gaussian prefactor) and are evaluated in log space so large
/// cutoffs cannot overflow. The retained state is renormalized; the report
/// carries the probability mass of the exact product state that fell outside
/// the truncation (including any pairs beyond the `MAX_TOTAL` cap).
pub fn coherent_truncated(
    alpha: Complex64,
    beta: Complex64,
    cutoff: u32,
) -> (TwoModeState, TruncationReport) {
    // alpha^n / sqrt(n!), with 0^0 = 1.
    let weight = |amp: Complex64, n: u32| -> Complex64 {
        let mag = amp.norm();
        if mag == 0.0 {
            return if n == 0 {
                Complex64::ONE
            } else {
                Complex64::ZERO
            };
        }
        let ln_mag = f64::from(n) * mag.ln() - 0.5 * numeric::ln_factorial(n);
        Complex64::from_polar(ln_mag.exp(), f64::from(n) * amp.arg())
    };
    let prefactor = (-(alpha.norm_sqr() + beta.norm_sqr()) / 2.0).exp();
    let mut map: BTreeMap<PhotonPair, Complex64> = BTreeMap::new();
    let mut kept_mass = 0.0;
    for j in 0..=cutoff {
        for k in 0..=cutoff {
            if j.saturating_add(k) > MAX_TOTAL {
                continue;
            }
            let amp = prefactor * weight(alpha, j) * weight(beta, k);
            if amp.norm() == 0.0 {
                continue;
            }
            kept_mass += amp.norm_sqr();
            map.insert(PhotonPair::new_unchecked(j, k), amp);
        }
    }
    let state =
        TwoModeState::new(map, true).expect("coherent product always retains at least one term");
    let report = TruncationReport {
        discarded_mass: (1.0 - kept_mass).max(0.0),
        cutoff,
    };
    (state, report)
}

/// On-disk record of one basis term.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRecord {
    nc: u32,
    nd: u32,
    re: f64,
    im: f64,
}

/// On-disk state schema: a term list plus the claimed normalization flag.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    terms: Vec<TermRecord>,
    normalized: bool,
}

/// Load a state from the JSON schema.
///
/// Terms must be unique by `(nc, nd)`; the `normalized` flag, when set, must
/// agree with the stored amplitudes within the usual `1e-12` tolerance.
pub fn load_state(path: impl AsRef<Path>) -> Result<TwoModeState> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let file: StateFile = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let mut seen: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut terms = Vec::with_capacity(file.terms.len());
    for record in &file.terms {
        if !seen.insert((record.nc, record.nd)) {
            return Err(Error::DuplicateTerm {
                n_c: record.nc,
                n_d: record.nd,
            });
        }
        let pair = PhotonPair::new(record.nc, record.nd)?;
        terms.push((pair, Complex64::new(record.re, record.im)));
    }
    let state = TwoModeState::new(terms, false)?;
    if file.normalized && !state.is_normalized() {
        return Err(Error::Parse(format!(
            "{}: field 'normalized' is true but the squared norm is {:.6e}",
            path.display(),
            state.norm_sq()
        )));
    }
    Ok(state)
}

/// Save a state in the JSON schema; amplitudes round-trip bit-exactly.
pub fn save_state(state: &TwoModeState, path: impl AsRef<Path>) -> Result<()> {
    let file = StateFile {
        terms: state
            .terms()
            .map(|(pair, amp)| TermRecord {
                nc: pair.n_c(),
                nd: pair.n_d(),
                re: amp.re,
                im: amp.im,
            })
            .collect(),
        normalized: state.is_normalized(),
    };
    let mut text = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::Internal(format!("state serialization failed: {e}")))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
