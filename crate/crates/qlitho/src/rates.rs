//! Photon-flux feasibility arithmetic for entangled N-photon exposure.
//!
//! Given a wavelength, wave-packet geometry, and a molecular absorption
//! cross-section, this module computes the critical intensity `I_c = ħω/(Aτ)`
//! above which uncorrelated multi-photon absorption competes, the maximum
//! entangled flux (N photons per coherence time), the minimal spot area
//! `(λ/2N)²`, the molecular coverage ratio `r = σ/(λ/2N)²`, and the joint
//! N-photon absorption bound `r^{N-1}`.
//!
//! The photon energy ħω is evaluated as `h·c/λ`, the natural form when the
//! wavelength is the input. The supplied cross-section is treated as an
//! upper bound, so every derived probability is itself an upper bound.

use serde::Serialize;

use crate::error::{Error, Result};

/// Planck constant, J·s (exact by definition).
pub const PLANCK_CONSTANT: f64 = 6.62607015e-34;

/// Speed of light in vacuum, m/s (exact by definition).
pub const SPEED_OF_LIGHT: f64 = 299792458.0;

/// Convert nanometers to meters (correctly rounded: divides by the exactly
/// representable 1e9).
pub fn nm_to_m(nanometers: f64) -> f64 {
    nanometers / 1e9
}

/// Convert meters to nanometers.
pub fn m_to_nm(meters: f64) -> f64 {
    meters * 1e9
}

/// Convert femtoseconds to seconds (divides by the exactly representable 1e15).
pub fn fs_to_s(femtoseconds: f64) -> f64 {
    femtoseconds / 1e15
}

/// Convert seconds to femtoseconds.
pub fn s_to_fs(seconds: f64) -> f64 {
    seconds * 1e15
}

fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositiveInput { name, value })
    }
}

/// Validated physical inputs, all in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityParams {
    wavelength: f64,
    packet_area: f64,
    coherence_time: f64,
    cross_section: f64,
    n: u32,
}

impl FeasibilityParams {
    /// Build a parameter set; every physical quantity must be positive and
    /// finite, and the photon number at least 1.
    pub fn new(
        wavelength: f64,
        packet_area: f64,
        coherence_time: f64,
        cross_section: f64,
        n: u32,
    ) -> Result<Self> {
        require_positive("wavelength", wavelength)?;
        require_positive("packet_area", packet_area)?;
        require_positive("coherence_time", coherence_time)?;
        require_positive("cross_section", cross_section)?;
        if n < 1 {
            return Err(Error::NonPositiveInput {
                name: "n",
                value: 0.0,
            });
        }
        Ok(Self {
            wavelength,
            packet_area,
            coherence_time,
            cross_section,
            n,
        })
    }

    pub fn wavelength(self) -> f64 {
        self.wavelength
    }

    pub fn packet_area(self) -> f64 {
        self.packet_area
    }

    pub fn coherence_time(self) -> f64 {
        self.coherence_time
    }

    pub fn cross_section(self) -> f64 {
        self.cross_section
    }

    pub fn n(self) -> u32 {
        self.n
    }
}

impl Default for FeasibilityParams {
    /// The reference scenario: 200 nm light, 1 μm² packet cross-section,
    /// 1 ps coherence time, cross-section at its 1e-19 m² upper bound,
    /// two-photon absorption.
    fn default() -> Self {
        Self {
            wavelength: 2e-7,
            packet_area: 1e-12,
            coherence_time: 1e-12,
            cross_section: 1e-19,
            n: 2,
        }
    }
}

fn energy_of(wavelength: f64) -> f64 {
    PLANCK_CONSTANT * SPEED_OF_LIGHT / wavelength
}

/// Single-photon energy `h·c/λ` in joules.
pub fn photon_energy(wavelength: f64) -> Result<f64> {
    require_positive("wavelength", wavelength)?;
    Ok(energy_of(wavelength))
}

/// Critical intensity `I_c = ħω/(Aτ)` in W/m²: one photon energy per packet
/// cross-section per coherence time.
pub fn critical_intensity(params: &FeasibilityParams) -> f64 {
    energy_of(params.wavelength) / (params.packet_area * params.coherence_time)
}

/// Maximum entangled flux: `N` photons per coherence time, in photons/s.
pub fn max_flux(params: &FeasibilityParams) -> f64 {
    f64::from(params.n) / params.coherence_time
}

/// Intensity of the maximum entangled flux: `N·I_c` in W/m².
pub fn max_intensity(params: &FeasibilityParams) -> f64 {
    f64::from(params.n) * critical_intensity(params)
}

/// Minimal spot area `(λ/2N)²` in m².
pub fn spot_area(wavelength: f64, n: u32) -> Result<f64> {
    require_positive("wavelength", wavelength)?;
    if n < 1 {
        return Err(Error::NonPositiveInput {
            name: "n",
            value: 0.0,
        });
    }
    let half_period = wavelength / f64::from(2 * n);
    Ok(half_period * half_period)
}

/// Coverage ratio `r = σ / (λ/2N)²`: the fraction of the minimal spot covered
/// by one molecule. Values above 1 are meaningful as arithmetic but void the
/// geometric picture; [`feasibility_report`] flags them.
pub fn coverage_ratio(params: &FeasibilityParams) -> f64 {
    params.cross_section
        / spot_area(params.wavelength, params.n).expect("params validated at construction")
}

/// Upper bound `r^{N-1}` on one molecule absorbing the remaining `N-1`
/// photons after the first; the empty product at `N = 1` is exactly 1.
pub fn joint_absorption_bound(r: f64, n: u32) -> Result<f64> {
    require_positive("coverage ratio", r)?;
    if n < 1 {
        return Err(Error::NonPositiveInput {
            name: "n",
            value: 0.0,
        });
    }
    Ok(r.powi((n - 1) as i32))
}

/// All derived feasibility quantities for one parameter set.
///
/// `coverage_warning` is set when the coverage ratio exceeds 1 and the
/// geometric spot interpretation no longer holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub photon_energy: f64,
    pub critical_intensity: f64,
    pub max_flux: f64,
    pub max_intensity: f64,
    pub spot_area: f64,
    pub coverage_ratio: f64,
    pub joint_bound: f64,
    pub coverage_warning: bool,
}

/// Evaluate every feasibility quantity from one validated parameter set.
pub fn feasibility_report(params: &FeasibilityParams) -> FeasibilityReport {
    let r = coverage_ratio(params);
    FeasibilityReport {
        photon_energy: energy_of(params.wavelength),
        critical_intensity: critical_intensity(params),
        max_flux: max_flux(params),
        max_intensity: max_intensity(params),
        spot_area: spot_area(params.wavelength, params.n)
            .expect("params validated at construction"),
        coverage_ratio: r,
        joint_bound: joint_absorption_bound(r, params.n)
            .expect("coverage ratio of valid params is positive"),
        coverage_warning: r > 1.0,
    }
}

#[derive(Serialize)]
struct UnitsJson {
    photon_energy: &'static str,
    critical_intensity: &'static str,
    max_flux: &'static str,
    max_intensity: &'static str,
    spot_area: &'static str,
    coverage_ratio: &'static str,
    joint_bound: &'static str,
}

const UNITS: UnitsJson = UnitsJson {
    photon_energy: "J",
    critical_intensity: "W/m^2",
    max_flux: "photons/s",
    max_intensity: "W/m^2",
    spot_area: "m^2",
    coverage_ratio: "dimensionless",
    joint_bound: "dimensionless",
};

#[derive(Serialize)]
struct ReportJson {
    photon_energy: f64,
    critical_intensity: f64,
    max_flux: f64,
    max_intensity: f64,
    spot_area: f64,
    coverage_ratio: f64,
    joint_bound: f64,
    coverage_warning: bool,
    units: UnitsJson,
}

impl FeasibilityReport {
    /// JSON with the report fields in declaration order plus a `units`
    /// sub-object.
    pub fn to_json(&self) -> Result<String> {
        let body = ReportJson {
            photon_energy: self.photon_energy,
            critical_intensity: self.critical_intensity,
            max_flux: self.max_flux,
            max_intensity: self.max_intensity,
            spot_area: self.spot_area,
            coverage_ratio: self.coverage_ratio,
            joint_bound: self.joint_bound,
            coverage_warning: self.coverage_warning,
            units: UNITS,
        };
        let mut text = serde_json::to_string_pretty(&body)
            .map_err(|e| Error::Internal(format!("report serialization failed: {e}")))?;
        text.push('\n');
        Ok(text)
    }

    /// Human-readable aligned table with the upper-bound caveat.
    pub fn render_table(&self) -> String {
        let rows: [(&str, f64, &str); 7] = [
            ("photon_energy", self.photon_energy, "J"),
            ("critical_intensity", self.critical_intensity, "W/m^2"),
            ("max_flux", self.max_flux, "photons/s"),
            ("max_intensity", self.max_intensity, "W/m^2"),
            ("spot_area", self.spot_area, "m^2"),
            ("coverage_ratio", self.coverage_ratio, "dimensionless"),
            ("joint_bound", self.joint_bound, "dimensionless"),
        ];
        let mut out = String::new();
        for (name, value, unit) in rows {
            out.push_str(&format!(
                "{name:<20} {:>14}  {unit}\n",
                format!("{value:.6e}")
            ));
        }
        if self.coverage_warning {
            out.push_str(
                "WARN: coverage ratio exceeds 1; the geometric spot interpretation breaks down\n",
            );
        }
        out.push_str(
            "note: cross-section is an upper bound, so derived probabilities are upper bounds\n",
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const REL_TOL: f64 = 1e-12;

    fn assert_rel(got: f64, want: f64, label: &str) {
        assert!(
            (got - want).abs() <= REL_TOL * want.abs(),
            "{label}: got {got}, want {want}"
        );
    }

    #[test]
    fn photon_energy_at_200_nm() {
        // h·c/λ evaluated once by hand: 6.62607015e-34 · 299792458 / 2e-7.
        assert_eq!(photon_energy(2e-7).unwrap(), 9.932229285744644e-19);
    }

    #[test]
    fn photon_energy_halves_when_wavelength_doubles() {
        let e200 = photon_energy(2e-7).unwrap();
        let e400 = photon_energy(4e-7).unwrap();
        assert_eq!(e400, e200 / 2.0);
    }

    #[test]
    fn photon_energy_rejects_non_positive_wavelength() {
        assert!(matches!(
            photon_energy(0.0),
            Err(Error::NonPositiveInput {
                name: "wavelength",
                ..
            })
        ));
        assert!(photon_energy(-1e-7).is_err());
        assert!(photon_energy(f64::NAN).is_err());
    }

    #[test]
    fn critical_intensity_reference_scenario() {
        let params = FeasibilityParams::default();
        assert_eq!(critical_intensity(&params), 9.932229285744645e5);
    }

    #[test]
    fn critical_intensity_scales_inversely_with_area_and_time() {
        let base = FeasibilityParams::default();
        let double_area = FeasibilityParams::new(2e-7, 2e-12, 1e-12, 1e-19, 2).unwrap();
        assert_eq!(
            critical_intensity(&double_area),
            critical_intensity(&base) / 2.0
        );
        let double_time = FeasibilityParams::new(2e-7, 1e-12, 2e-12, 1e-19, 2).unwrap();
        assert_eq!(
            critical_intensity(&double_time),
            critical_intensity(&base) / 2.0
        );
    }

    #[test]
    fn max_flux_examples() {
        assert_eq!(max_flux(&FeasibilityParams::default()), 2e12);
        let four = FeasibilityParams::new(2e-7, 1e-12, 1e-9, 1e-19, 4).unwrap();
        assert_rel(max_flux(&four), 4e9, "flux n=4");
    }

    #[test]
    fn single_photon_threshold_reduces_to_critical_intensity() {
        let one = FeasibilityParams::new(2e-7, 1e-12, 1e-12, 1e-19, 1).unwrap();
        assert_eq!(max_intensity(&one), critical_intensity(&one));
    }

    #[test]
    fn max_intensity_is_n_times_critical() {
        for n in 1..=10 {
            let p = FeasibilityParams::new(2e-7, 1e-12, 1e-12, 1e-19, n).unwrap();
            let ratio = max_intensity(&p) / critical_intensity(&p);
            assert_rel(ratio, f64::from(n), "intensity ratio");
        }
    }

    #[test]
    fn spot_area_examples() {
        assert_rel(spot_area(2e-7, 1).unwrap(), 1e-14, "200 nm, n=1");
        assert_rel(spot_area(2e-7, 2).unwrap(), 2.5e-15, "200 nm, n=2");
        assert_rel(spot_area(4e-7, 2).unwrap(), 1e-14, "400 nm, n=2");
        assert!(spot_area(-1.0, 2).is_err());
        assert!(spot_area(2e-7, 0).is_err());
    }

    #[test]
    fn spot_area_invariant_under_joint_rescaling() {
        for n in 1..=10 {
            let a = spot_area(2e-7, n).unwrap();
            let b = spot_area(4e-7, 2 * n).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn coverage_ratio_reference_values() {
        let two = FeasibilityParams::default();
        assert_eq!(coverage_ratio(&two), 4e-5);
        let one = FeasibilityParams::new(2e-7, 1e-12, 1e-12, 1e-19, 1).unwrap();
        assert_rel(coverage_ratio(&one), 1e-5, "n=1 coverage");
    }

    #[test]
    fn coverage_ratio_follows_square_law() {
        for n in 1..=10 {
            let p = FeasibilityParams::new(2e-7, 1e-12, 1e-12, 1e-19, n).unwrap();
            assert_rel(coverage_ratio(&p), f64::from(n * n) * 1e-5, "square law");
        }
    }

    #[test]
    fn coverage_ratio_of_matching_cross_section_is_one() {
        let spot = spot_area(2e-7, 2).unwrap();
        let p = FeasibilityParams::new(2e-7, 1e-12, 1e-12, spot, 2).unwrap();
        assert_eq!(coverage_ratio(&p), 1.0);
    }

    #[test]
    fn joint_bound_examples() {
        assert_eq!(joint_absorption_bound(4e-5, 2).unwrap(), 4e-5);
        assert_eq!(joint_absorption_bound(0.73, 1).unwrap(), 1.0);
        assert_rel(joint_absorption_bound(9e-5, 3).unwrap(), 8.1e-9, "n=3");
        assert!(joint_absorption_bound(0.0, 2).is_err());
        assert!(joint_absorption_bound(0.5, 0).is_err());
    }

    #[test]
    fn joint_bound_is_log_linear_in_n() {
        let r = 4e-5;
        for n in 1..=10 {
            let bound = joint_absorption_bound(r, n).unwrap();
            let log_direct = f64::from(n - 1) * r.ln();
            if n == 1 {
                assert_eq!(bound, 1.0);
            } else {
                assert_rel(bound.ln(), log_direct, "log linearity");
            }
            if n >= 2 {
                assert!(bound < joint_absorption_bound(r, n - 1).unwrap());
            }
        }
    }

    #[test]
    fn report_is_internally_consistent() {
        let params = FeasibilityParams::default();
        let report = feasibility_report(&params);
        assert_eq!(report.photon_energy, 9.932229285744644e-19);
        assert_eq!(report.coverage_ratio, 4e-5);
        assert_eq!(report.joint_bound, 4e-5);
        assert_eq!(report.max_intensity, 2.0 * report.critical_intensity);
        assert_eq!(
            report.joint_bound,
            joint_absorption_bound(report.coverage_ratio, 2).unwrap()
        );
        assert!(!report.coverage_warning);
    }

    #[test]
    fn degenerate_single_photon_report() {
        let params = FeasibilityParams::new(2e-7, 1e-12, 1e-12, 1e-19, 1).unwrap();
        let report = feasibility_report(&params);
        assert_eq!(report.joint_bound, 1.0);
        assert_rel(report.spot_area, 1e-14, "classical diffraction limit");
    }

    #[test]
    fn oversized_cross_section_raises_warning() {
        let params = FeasibilityParams::new(2e-7, 1e-12, 1e-12, 1e-13, 2).unwrap();
        let report = feasibility_report(&params);
        assert!(report.coverage_ratio > 1.0);
        assert!(report.coverage_warning);
    }

    #[test]
    fn params_validation_rejects_bad_inputs() {
        assert!(FeasibilityParams::new(0.0, 1e-12, 1e-12, 1e-19, 2).is_err());
        assert!(FeasibilityParams::new(2e-7, -1e-12, 1e-12, 1e-19, 2).is_err());
        assert!(FeasibilityParams::new(2e-7, 1e-12, f64::INFINITY, 1e-19, 2).is_err());
        assert!(FeasibilityParams::new(2e-7, 1e-12, 1e-12, 0.0, 2).is_err());
        assert!(matches!(
            FeasibilityParams::new(2e-7, 1e-12, 1e-12, 1e-19, 0),
            Err(Error::NonPositiveInput { name: "n", .. })
        ));
    }

    #[test]
    fn unit_conversions_round_trip() {
        assert_eq!(nm_to_m(200.0), 2e-7);
        for x in [200.0, 123.456, 0.37, 1550.0] {
            assert_rel(m_to_nm(nm_to_m(x)), x, "nm round trip");
            assert_rel(s_to_fs(fs_to_s(x)), x, "fs round trip");
        }
    }

    #[test]
    fn json_report_carries_units_and_field_order() {
        let report = feasibility_report(&FeasibilityParams::default());
        let text = report.to_json().unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["units"]["photon_energy"], "J");
        assert_eq!(value["units"]["critical_intensity"], "W/m^2");
        assert_eq!(value["coverage_ratio"].as_f64().unwrap(), 4e-5);
        assert_eq!(value["coverage_warning"], false);
        let first = text.find("\"photon_energy\"").unwrap();
        let last = text.find("\"units\"").unwrap();
        assert!(first < last);
    }

    #[test]
    fn table_lists_reference_numbers_and_caveat() {
        let report = feasibility_report(&FeasibilityParams::default());
        let table = report.render_table();
        assert!(table.contains("4.000000e-5"));
        assert!(table.contains("W/m^2"));
        assert!(table.contains("upper bound"));
        assert!(!table.contains("WARN"));
        let warned =
            feasibility_report(&FeasibilityParams::new(2e-7, 1e-12, 1e-12, 1e-13, 2).unwrap());
        assert!(warned.render_table().contains("WARN"));
    }
}
