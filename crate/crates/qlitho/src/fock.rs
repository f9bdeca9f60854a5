//! Two-mode bosonic Fock-state algebra.
//!
//! States live in the number basis `|n_c, n_d>` of two field modes C and D
//! and are stored as a finite map from photon pairs to complex amplitudes.
//! The mode operators act in the standard way:
//!
//! ```text
//! a |n> = sqrt(n) |n-1>        a† |n> = sqrt(n+1) |n+1>
//! ```
//!
//! Every operation is a pure function over immutable values, so states can be
//! shared freely across threads.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Cap on the total photon number of any stored basis pair.
pub const MAX_TOTAL: u32 = 64;

/// Tolerance for treating a squared norm as exactly 1.
pub(crate) const NORM_TOL: f64 = 1e-12;

/// Relative magnitude below which a term is dropped as numerical debris.
const DROP_REL: f64 = 1e-15;

/// One of the two interferometer arms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    C,
    D,
}

/// Photon occupation `(n_c, n_d)` of the two modes.
///
/// Ordering is lexicographic in `(n_c, n_d)`, which fixes the serialization
/// order of state files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhotonPair {
    n_c: u32,
    n_d: u32,
}

impl PhotonPair {
    /// Build a pair, enforcing the `MAX_TOTAL` cap.
    pub fn new(n_c: u32, n_d: u32) -> Result<Self> {
        if n_c.saturating_add(n_d) > MAX_TOTAL {
            return Err(Error::CapExceeded {
                n_c,
                n_d,
                max: MAX_TOTAL,
            });
        }
        Ok(Self { n_c, n_d })
    }

    /// Pair known to satisfy the cap (e.g. obtained by lowering a valid pair).
    pub(crate) fn new_unchecked(n_c: u32, n_d: u32) -> Self {
        debug_assert!(n_c + n_d <= MAX_TOTAL);
        Self { n_c, n_d }
    }

    pub fn n_c(self) -> u32 {
        self.n_c
    }

    pub fn n_d(self) -> u32 {
        self.n_d
    }

    pub fn total(self) -> u32 {
        self.n_c + self.n_d
    }

    fn count(self, mode: Mode) -> u32 {
        match mode {
            Mode::C => self.n_c,
            Mode::D => self.n_d,
        }
    }

    fn with_count(self, mode: Mode, n: u32) -> Self {
        match mode {
            Mode::C => Self { n_c: n, ..self },
            Mode::D => Self { n_d: n, ..self },
        }
    }
}

impl fmt::Display for PhotonPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{}>", self.n_c, self.n_d)
    }
}

/// Mass removed by a truncation, as probability of the normalized input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationReport {
    pub discarded_mass: f64,
    pub cutoff: u32,
}

/// A finite superposition of two-mode number states.
///
/// The zero state (empty term map) is representable so that annihilating the
/// vacuum stays total. `normalized` records whether the squared amplitudes
/// sum to 1 within `1e-12`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    terms: BTreeMap<PhotonPair, Complex64>,
    normalized: bool,
}

impl TwoModeState {
    /// Build a state from `(pair, amplitude)` terms.
    ///
    /// Duplicate pairs accumulate. Exact zeros and terms below `1e-15` of the
    /// largest magnitude are dropped. With `normalize` set the result is
    /// rescaled to unit norm; otherwise amplitudes are kept as given.
    pub fn new<I>(terms: I, normalize: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (PhotonPair, Complex64)>,
    {
        let mut map: BTreeMap<PhotonPair, Complex64> = BTreeMap::new();
        for (pair, amp) in terms {
            *map.entry(pair).or_insert(Complex64::ZERO) += amp;
        }
        let mut state = Self::from_map_raw(map);
        if state.terms.is_empty() {
            return Err(Error::EmptyState);
        }
        if normalize {
            let norm = state.norm_sq().sqrt();
            if norm == 0.0 {
                return Err(Error::EmptyState);
            }
            for amp in state.terms.values_mut() {
                *amp /= norm;
            }
            state.normalized = true;
        }
        Ok(state)
    }

    /// The zero state: no terms, zero norm.
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
            normalized: false,
        }
    }

    /// Internal constructor: prune debris terms and detect normalization.
    /// An empty map yields the zero state.
    pub(crate) fn from_map_raw(mut map: BTreeMap<PhotonPair, Complex64>) -> Self {
        let max_mag = map.values().map(|a| a.norm()).fold(0.0f64, f64::max);
        map.retain(|_, amp| {
            let mag = amp.norm();
            mag > 0.0 && mag >= DROP_REL * max_mag
        });
        let norm_sq: f64 = map.values().map(|a| a.norm_sqr()).sum();
        Self {
            normalized: (norm_sq - 1.0).abs() <= NORM_TOL,
            terms: map,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Number of stored basis terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic `(n_c, n_d)` order.
    pub fn terms(&self) -> impl Iterator<Item = (PhotonPair, Complex64)> + '_ {
        self.terms.iter().map(|(&p, &a)| (p, a))
    }

    /// Amplitude of one basis pair (zero if absent).
    pub fn amplitude(&self, pair: PhotonPair) -> Complex64 {
        self.terms.get(&pair).copied().unwrap_or(Complex64::ZERO)
    }

    /// Largest single-mode occupation over the support; 0 for the zero state.
    pub fn max_mode_occupation(&self) -> u32 {
        self.terms
            .keys()
            .map(|p| p.n_c.max(p.n_d))
            .max()
            .unwrap_or(0)
    }

    /// `<self|self>`, always real and non-negative.
    pub fn norm_sq(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &Self) -> Complex64 {
        self.terms
            .iter()
            .filter_map(|(pair, amp)| other.terms.get(pair).map(|b| amp.conj() * b))
            .sum()
    }

    /// Apply the annihilation operator of one mode.
    ///
    /// Total by construction: annihilating the vacuum component drops it, and
    /// a fully annihilated state comes back as the zero state. The result is
    /// generally unnormalized.
    pub fn annihilate(&self, mode: Mode) -> Self {
        let mut out: BTreeMap<PhotonPair, Complex64> = BTreeMap::new();
        for (pair, amp) in &self.terms {
            let n = pair.count(mode);
            if n == 0 {
                continue;
            }
            let target = pair.with_count(mode, n - 1);
            *out.entry(target).or_insert(Complex64::ZERO) += amp * f64::from(n).sqrt();
        }
        Self::from_map_raw(out)
    }

    /// Apply the creation operator of one mode.
    ///
    /// Fails with `CapExceeded` if raising any occupied term would push its
    /// total past `MAX_TOTAL`.
    pub fn create(&self, mode: Mode) -> Result<Self> {
        let mut out: BTreeMap<PhotonPair, Complex64> = BTreeMap::new();
        for (pair, amp) in &self.terms {
            let n = pair.count(mode);
            if pair.total() + 1 > MAX_TOTAL {
                return Err(Error::CapExceeded {
                    n_c: pair.n_c,
                    n_d: pair.n_d,
                    max: MAX_TOTAL,
                });
            }
            let target = pair.with_count(mode, n + 1);
            *out.entry(target).or_insert(Complex64::ZERO) += amp * f64::from(n + 1).sqrt();
        }
        Ok(Self::from_map_raw(out))
    }

    /// Drop every term with a single-mode occupation above `cutoff`.
    ///
    /// `discarded_mass` is the probability removed from the normalized input;
    /// the retained remainder is renormalized. Removing everything is an
    /// `EmptyState` error.
    pub fn truncate(&self, cutoff: u32) -> Result<(Self, TruncationReport)> {
        let total = self.norm_sq();
        if total == 0.0 {
            return Err(Error::EmptyState);
        }
        let mut kept: BTreeMap<PhotonPair, Complex64> = BTreeMap::new();
        let mut removed = 0.0;
        for (pair, amp) in &self.terms {
            if pair.n_c <= cutoff && pair.n_d <= cutoff {
                kept.insert(*pair, *amp);
            } else {
                removed += amp.norm_sqr();
            }
        }
        if kept.is_empty() {
            return Err(Error::EmptyState);
        }
        let state = Self::new(kept, true)?;
        Ok((
            state,
            TruncationReport {
                discarded_mass: removed / total,
                cutoff,
            },
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair(n_c: u32, n_d: u32) -> PhotonPair {
        PhotonPair::new(n_c, n_d).unwrap()
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn make_state_keeps_already_normalized_terms() {
        let amp = re(1.0 / 2f64.sqrt());
        let s = TwoModeState::new([(pair(2, 0), amp), (pair(0, 2), amp)], false).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.is_normalized());
        assert_eq!(s.amplitude(pair(2, 0)), amp);
    }

    #[test]
    fn make_state_normalizes_single_term() {
        let s = TwoModeState::new([(pair(1, 0), re(2.0))], true).unwrap();
        assert!((s.amplitude(pair(1, 0)) - re(1.0)).norm() < 1e-15);
        assert!(s.is_normalized());
    }

    #[test]
    fn make_state_rejects_all_zero_amplitudes() {
        let r = TwoModeState::new([(pair(0, 0), Complex64::ZERO)], false);
        assert!(matches!(r, Err(Error::EmptyState)));
    }

    #[test]
    fn photon_pair_enforces_cap() {
        assert!(PhotonPair::new(32, 32).is_ok());
        assert!(matches!(
            PhotonPair::new(33, 32),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn annihilate_scales_by_sqrt_n() {
        let s = TwoModeState::new([(pair(2, 0), re(1.0))], true).unwrap();
        let lowered = s.annihilate(Mode::C);
        assert_eq!(lowered.len(), 1);
        assert!((lowered.amplitude(pair(1, 0)) - re(2f64.sqrt())).norm() < 1e-15);
        assert!(!lowered.is_normalized());
    }

    #[test]
    fn annihilate_vacuum_mode_gives_zero_state() {
        let s = TwoModeState::new([(pair(2, 0), re(1.0))], true).unwrap();
        let lowered = s.annihilate(Mode::D);
        assert!(lowered.is_zero());
        assert_eq!(lowered.norm_sq(), 0.0);
    }

    #[test]
    fn annihilate_acts_linearly_on_superposition() {
        let amp = re(1.0 / 2f64.sqrt());
        let s = TwoModeState::new([(pair(1, 0), amp), (pair(0, 1), amp)], false).unwrap();
        let lowered = s.annihilate(Mode::C);
        assert_eq!(lowered.len(), 1);
        assert!((lowered.amplitude(pair(0, 0)) - amp).norm() < 1e-15);
    }

    #[test]
    fn inner_product_on_basis_states() {
        let a = TwoModeState::new([(pair(2, 0), re(1.0))], true).unwrap();
        let b = TwoModeState::new([(pair(0, 2), re(1.0))], true).unwrap();
        assert_eq!(a.inner_product(&a), re(1.0));
        assert_eq!(a.inner_product(&b), Complex64::ZERO);
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first_slot() {
        let i = Complex64::I;
        let a = TwoModeState::new([(pair(1, 1), i)], false).unwrap();
        let b = TwoModeState::new([(pair(1, 1), re(1.0))], false).unwrap();
        assert!((a.inner_product(&b) - (-i)).norm() < 1e-15);
        assert!((a.inner_product(&b) - b.inner_product(&a).conj()).norm() < 1e-15);
    }

    #[test]
    fn norm_sq_examples() {
        let s = TwoModeState::new([(pair(1, 0), re(2.0))], false).unwrap();
        assert_eq!(s.norm_sq(), 4.0);
        assert_eq!(TwoModeState::zero().norm_sq(), 0.0);
    }

    #[test]
    fn truncate_below_support_is_identity() {
        let amp = re(1.0 / 2f64.sqrt());
        let s = TwoModeState::new([(pair(2, 0), amp), (pair(0, 2), amp)], true).unwrap();
        let (t, report) = s.truncate(2).unwrap();
        assert_eq!(report.discarded_mass, 0.0);
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn truncate_that_removes_everything_errors() {
        let amp = re(1.0 / 2f64.sqrt());
        let s = TwoModeState::new([(pair(4, 0), amp), (pair(0, 4), amp)], true).unwrap();
        assert!(matches!(s.truncate(3), Err(Error::EmptyState)));
    }

    #[test]
    fn truncate_preserves_relative_weight_ordering() {
        let s = TwoModeState::new(
            [
                (pair(0, 0), re(0.1)),
                (pair(1, 0), re(0.5)),
                (pair(0, 2), re(0.3)),
                (pair(5, 0), re(0.8)),
            ],
            true,
        )
        .unwrap();
        let (t, _) = s.truncate(2).unwrap();
        let before: Vec<f64> = s
            .terms()
            .filter(|(p, _)| p.n_c() <= 2 && p.n_d() <= 2)
            .map(|(_, a)| a.norm())
            .collect();
        let after: Vec<f64> = t.terms().map(|(_, a)| a.norm()).collect();
        for i in 1..before.len() {
            for j in 0..i {
                assert_eq!(
                    before[i] > before[j],
                    after[i] > after[j],
                    "ordering changed at ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn commutator_is_identity_on_basis_states() {
        // a a† - a† a = 1, term by term.
        for (n_c, n_d) in [(0, 0), (1, 0), (2, 3), (5, 5)] {
            let s = TwoModeState::new([(pair(n_c, n_d), re(1.0))], true).unwrap();
            for mode in [Mode::C, Mode::D] {
                let up_down = s.create(mode).unwrap().annihilate(mode);
                let down_up = s.annihilate(mode).create(mode).unwrap();
                let diff = up_down.amplitude(pair(n_c, n_d)) - down_up.amplitude(pair(n_c, n_d));
                assert!((diff - re(1.0)).norm() < 1e-12, "{n_c},{n_d} {mode:?}");
            }
        }
    }

    #[test]
    fn create_past_cap_is_rejected() {
        let s = TwoModeState::new([(pair(40, 24), re(1.0))], true).unwrap();
        assert!(matches!(s.create(Mode::C), Err(Error::CapExceeded { .. })));
    }

    fn arb_terms() -> impl Strategy<Value = Vec<(u32, u32, f64, f64)>> {
        prop::collection::vec((0u32..6, 0u32..6, -1.0f64..1.0, -1.0f64..1.0), 1..5)
    }

    fn build(terms: &[(u32, u32, f64, f64)]) -> Option<TwoModeState> {
        TwoModeState::new(
            terms
                .iter()
                .map(|&(nc, nd, x, y)| (pair(nc, nd), Complex64::new(x, y))),
            false,
        )
        .ok()
    }

    proptest! {
        #[test]
        fn normalized_construction_has_unit_norm(terms in arb_terms()) {
            let built = TwoModeState::new(
                terms.iter().map(|&(nc, nd, x, y)| (pair(nc, nd), Complex64::new(x, y))),
                true,
            );
            if let Ok(s) = built {
                prop_assert!((s.norm_sq() - 1.0).abs() <= 1e-12);
                prop_assert!(s.is_normalized());
            }
        }

        #[test]
        fn annihilation_is_linear(ta in arb_terms(), tb in arb_terms()) {
            let (Some(a), Some(b)) = (build(&ta), build(&tb)) else {
                return Ok(());
            };
            let alpha = Complex64::new(0.6, -0.3);
            let beta = Complex64::new(-0.2, 0.9);
            let combo_terms = a
                .terms()
                .map(|(p, amp)| (p, alpha * amp))
                .chain(b.terms().map(|(p, amp)| (p, beta * amp)));
            let Ok(combo) = TwoModeState::new(combo_terms, false) else {
                return Ok(());
            };
            for mode in [Mode::C, Mode::D] {
                let lhs = combo.annihilate(mode);
                let la = a.annihilate(mode);
                let lb = b.annihilate(mode);
                let pairs: std::collections::BTreeSet<_> = lhs
                    .terms()
                    .map(|(p, _)| p)
                    .chain(la.terms().map(|(p, _)| p))
                    .chain(lb.terms().map(|(p, _)| p))
                    .collect();
                for p in pairs {
                    let want = alpha * la.amplitude(p) + beta * lb.amplitude(p);
                    prop_assert!((lhs.amplitude(p) - want).norm() <= 1e-12);
                }
            }
        }
    }
}
