//! Scenario parameters, unit conversions and the derived link budget.
//!
//! Everything stored here is linear: watts, meters and dimensionless power or
//! amplitude gains. Decibel quantities only appear at the I/O boundary through
//! the conversion helpers below.

use std::fmt;

use crate::error::{invalid, Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Element layout of a uniform planar array parallel to the x-z plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UpaShape {
    pub nx: usize,
    pub nz: usize,
}

impl UpaShape {
    pub fn new(nx: usize, nz: usize) -> Self {
        Self { nx, nz }
    }

    /// The most square `nx × nz` factorization of `n` with `nx <= nz`.
    pub fn near_square(n: usize) -> Self {
        let mut nx = (n as f64).sqrt().floor() as usize;
        while nx > 1 && !n.is_multiple_of(nx) {
            nx -= 1;
        }
        let nx = nx.max(1);
        Self { nx, nz: n / nx }
    }

    pub fn count(&self) -> usize {
        self.nx * self.nz
    }
}

/// All scalar inputs of the cascaded link.
///
/// IRSs are numbered `1..=irs_count` from the BS towards the user. Exactly one
/// of them is active; its position is the decision variable and is therefore
/// not part of the parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Number of IRSs on the path (one active, the rest passive).
    pub irs_count: usize,
    /// BS antennas (ULA).
    pub bs_antennas: usize,
    pub active_elements: usize,
    pub active_shape: UpaShape,
    pub passive_elements: usize,
    pub passive_shape: UpaShape,
    /// BS to IRS 1, meters.
    pub bs_distance: f64,
    /// IRS J to user, meters.
    pub user_distance: f64,
    /// Between adjacent IRSs, meters.
    pub irs_distance: f64,
    /// BS transmit power, W.
    pub tx_power: f64,
    /// Per-element amplification power budget of the active IRS, W.
    pub amp_power: f64,
    /// Noise power, W. Shared by the active-IRS amplification noise and the
    /// receiver AWGN.
    pub noise_power: f64,
    pub path_loss_exponent: f64,
    /// Linear path gain at 1 m.
    pub ref_path_gain: f64,
    pub wavelength: f64,
    /// IRS element spacing, meters.
    pub element_spacing: f64,
    /// BS antenna spacing, meters.
    pub antenna_spacing: f64,
    /// Distance below which a hop is flagged as not far-field. `None` selects
    /// the Fraunhofer distance `2 D² / λ` of the largest array aperture.
    pub far_field_threshold: Option<f64>,
}

impl Default for SystemParams {
    /// Seven IRSs at 3.5 GHz, 4 m / 10 m / 4 m hop distances, 30 dBm transmit
    /// power, -10 dBm per-element amplification budget, -60 dBm noise, a
    /// 10-antenna BS, 150 active and 100 passive elements.
    fn default() -> Self {
        let wavelength = SPEED_OF_LIGHT / 3.5e9;
        Self {
            irs_count: 7,
            bs_antennas: 10,
            active_elements: 150,
            active_shape: UpaShape::near_square(150),
            passive_elements: 100,
            passive_shape: UpaShape::near_square(100),
            bs_distance: 4.0,
            user_distance: 4.0,
            irs_distance: 10.0,
            tx_power: dbm_to_watts(30.0),
            amp_power: dbm_to_watts(-10.0),
            noise_power: dbm_to_watts(-60.0),
            path_loss_exponent: 2.0,
            ref_path_gain: db_to_linear(-43.0),
            wavelength,
            element_spacing: wavelength / 2.0,
            antenna_spacing: wavelength / 2.0,
            far_field_threshold: None,
        }
    }
}

impl SystemParams {
    /// Sets the passive element count together with a near-square layout.
    pub fn with_passive_elements(mut self, n: usize) -> Self {
        self.passive_elements = n;
        self.passive_shape = UpaShape::near_square(n);
        self
    }

    /// Sets the active element count together with a near-square layout.
    pub fn with_active_elements(mut self, n: usize) -> Self {
        self.active_elements = n;
        self.active_shape = UpaShape::near_square(n);
        self
    }

    /// Sets the wavelength and rescales both spacings to half of it.
    pub fn with_wavelength(mut self, wavelength: f64) -> Self {
        self.wavelength = wavelength;
        self.element_spacing = wavelength / 2.0;
        self.antenna_spacing = wavelength / 2.0;
        self
    }

    /// Amplitude gain `sqrt(β0) / d^(α/2)` of a LoS hop of the given length.
    pub fn hop_gain(&self, distance: f64) -> f64 {
        self.ref_path_gain.sqrt() / distance.powf(self.path_loss_exponent / 2.0)
    }

    /// Largest physical aperture over the BS and both IRS types, meters.
    pub fn largest_aperture(&self) -> f64 {
        let upa = |s: UpaShape| {
            let (x, z) = (s.nx as f64, s.nz as f64);
            self.element_spacing * (x * x + z * z).sqrt()
        };
        let ula = self.antenna_spacing * self.bs_antennas as f64;
        ula.max(upa(self.active_shape)).max(upa(self.passive_shape))
    }

    pub fn far_field_distance(&self) -> f64 {
        self.far_field_threshold.unwrap_or_else(|| {
            let d = self.largest_aperture();
            2.0 * d * d / self.wavelength
        })
    }

    /// Checks every invariant and reports each violation.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut err = |invariant: &'static str, message: String| {
            out.push(Diagnostic {
                severity: Severity::Error,
                invariant,
                message,
            })
        };

        for (name, v) in [
            ("irs_count", self.irs_count),
            ("bs_antennas", self.bs_antennas),
            ("active_elements", self.active_elements),
            ("passive_elements", self.passive_elements),
        ] {
            if v == 0 {
                err(name, format!("{name} must be at least 1"));
            }
        }
        if self.active_shape.count() != self.active_elements {
            err(
                "active_shape",
                format!(
                    "active layout {}x{} does not give {} elements",
                    self.active_shape.nx, self.active_shape.nz, self.active_elements
                ),
            );
        }
        if self.passive_shape.count() != self.passive_elements {
            err(
                "passive_shape",
                format!(
                    "passive layout {}x{} does not give {} elements",
                    self.passive_shape.nx, self.passive_shape.nz, self.passive_elements
                ),
            );
        }
        for (name, v) in [
            ("bs_distance", self.bs_distance),
            ("user_distance", self.user_distance),
            ("irs_distance", self.irs_distance),
            ("tx_power", self.tx_power),
            ("amp_power", self.amp_power),
            ("noise_power", self.noise_power),
            ("path_loss_exponent", self.path_loss_exponent),
            ("ref_path_gain", self.ref_path_gain),
            ("wavelength", self.wavelength),
            ("element_spacing", self.element_spacing),
            ("antenna_spacing", self.antenna_spacing),
        ] {
            if !(v.is_finite() && v > 0.0) {
                err(name, format!("{name} must be finite and positive, got {v}"));
            }
        }
        if let Some(t) = self.far_field_threshold {
            if !(t.is_finite() && t >= 0.0) {
                err(
                    "far_field_threshold",
                    format!("far-field threshold must be finite and non-negative, got {t}"),
                );
            }
        }
        if out.iter().any(|d| d.severity == Severity::Error) {
            return out;
        }

        let limit = self.far_field_distance();
        for (name, d) in [
            ("bs_distance", self.bs_distance),
            ("user_distance", self.user_distance),
            ("irs_distance", self.irs_distance),
        ] {
            if d <= limit {
                out.push(Diagnostic {
                    severity: Severity::Warning,
                    invariant: "far_field",
                    message: format!("{name} = {d} m is within the far-field limit {limit:.3} m"),
                });
            }
        }

        let np_kappa = self.passive_elements as f64 * self.hop_gain(self.irs_distance);
        if np_kappa >= 1.0 {
            out.push(Diagnostic {
                severity: Severity::Warning,
                invariant: "f_decreasing",
                message: format!(
                    "f(l) non-decreasing regime: Np*kappa_I = {np_kappa:.6} >= 1, \
                     closed-form placement falls back to exhaustive search"
                ),
            });
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Name of the violated invariant.
    pub invariant: &'static str,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}[{}]: {}", self.invariant, self.message)
    }
}

/// Path gains and composite constants that drive every closed-form result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// BS to IRS 1 amplitude gain.
    pub kappa_bs: f64,
    /// Inter-IRS amplitude gain.
    pub kappa_irs: f64,
    /// IRS J to user amplitude gain.
    pub kappa_user: f64,
    /// `P_a · N_a · κ_U²`.
    pub c_active: f64,
    /// `P_t · M · κ_B²`.
    pub c_transmit: f64,
    /// `N_p · κ_I`.
    pub np_kappa_irs: f64,
}

impl LinkBudget {
    /// True when the BS-to-AIRS gain strictly decreases with the AIRS index,
    /// which the closed-form placement rules rely on.
    pub fn f_decreasing(&self) -> bool {
        self.np_kappa_irs < 1.0
    }
}

pub fn derive_link_budget(p: &SystemParams) -> Result<LinkBudget> {
    for (name, v) in [
        ("bs_distance", p.bs_distance),
        ("user_distance", p.user_distance),
        ("irs_distance", p.irs_distance),
        ("tx_power", p.tx_power),
        ("amp_power", p.amp_power),
        ("path_loss_exponent", p.path_loss_exponent),
        ("ref_path_gain", p.ref_path_gain),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(invalid(name, format!("must be finite and positive, got {v}")));
        }
    }
    if p.bs_antennas == 0 || p.active_elements == 0 || p.passive_elements == 0 {
        return Err(invalid("element counts", "must be at least 1"));
    }
    let kappa_bs = p.hop_gain(p.bs_distance);
    let kappa_irs = p.hop_gain(p.irs_distance);
    let kappa_user = p.hop_gain(p.user_distance);
    Ok(LinkBudget {
        kappa_bs,
        kappa_irs,
        kappa_user,
        c_active: p.amp_power * p.active_elements as f64 * kappa_user * kappa_user,
        c_transmit: p.tx_power * p.bs_antennas as f64 * kappa_bs * kappa_bs,
        np_kappa_irs: p.passive_elements as f64 * kappa_irs,
    })
}

/// A validated parameter set together with its link budget.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    params: SystemParams,
    budget: LinkBudget,
}

impl Scenario {
    /// Fails on the first error-severity diagnostic; warnings are accepted.
    pub fn new(params: SystemParams) -> Result<Self> {
        if let Some(d) = params
            .validate()
            .into_iter()
            .find(|d| d.severity == Severity::Error)
        {
            return Err(invalid(d.invariant, d.message));
        }
        let budget = derive_link_budget(&params)?;
        Ok(Self { params, budget })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn budget(&self) -> &LinkBudget {
        &self.budget
    }

    pub fn irs_count(&self) -> usize {
        self.params.irs_count
    }

    pub fn check_index(&self, l: usize) -> Result<()> {
        if l == 0 || l > self.params.irs_count {
            Err(Error::IndexOutOfRange {
                l,
                irs_count: self.params.irs_count,
            })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn unit_conversions() {
        assert_eq!(dbm_to_watts(30.0), 1.0);
        assert_eq!(db_to_linear(0.0), 1.0);
        assert_relative_eq!(db_to_linear(-43.0), 5.011_872_336_272_725e-5, max_relative = 1e-9);
        assert_relative_eq!(dbm_to_watts(-60.0), 1e-9, max_relative = 1e-12);
    }

    proptest! {
        #[test]
        fn watts_dbm_round_trip(w in 1e-30f64..1e6) {
            let back = dbm_to_watts(watts_to_dbm(w));
            prop_assert!(((back - w) / w).abs() < 1e-12);
        }
    }

    #[test]
    fn default_link_budget() {
        let lb = derive_link_budget(&SystemParams::default()).unwrap();
        // sqrt(10^-4.3) / 10
        assert_relative_eq!(lb.kappa_irs, 7.079_457_843_841_38e-4, max_relative = 1e-12);
        assert_relative_eq!(lb.c_transmit, 3.132_420_210_170_452_6e-5, max_relative = 1e-12);
        assert_relative_eq!(lb.c_active, 4.698_630_315_255_68e-8, max_relative = 1e-12);
        assert!(lb.f_decreasing());
        assert!(1412.0 * lb.kappa_irs < 1.0 && 1413.0 * lb.kappa_irs > 1.0);
    }

    #[test]
    fn unit_reference_distance() {
        let p = SystemParams {
            ref_path_gain: 1.0,
            bs_distance: 1.0,
            ..SystemParams::default()
        };
        assert_eq!(derive_link_budget(&p).unwrap().kappa_bs, 1.0);
    }

    #[test]
    fn link_budget_scales_with_ref_gain() {
        let p = SystemParams::default();
        let a = derive_link_budget(&p).unwrap();
        let b = derive_link_budget(&SystemParams {
            ref_path_gain: 2.0 * p.ref_path_gain,
            ..p
        })
        .unwrap();
        for (x, y) in [
            (a.kappa_bs, b.kappa_bs),
            (a.kappa_irs, b.kappa_irs),
            (a.kappa_user, b.kappa_user),
        ] {
            assert_relative_eq!(y * y, 2.0 * x * x, max_relative = 1e-14);
        }
        assert_relative_eq!(b.c_active, 2.0 * a.c_active, max_relative = 1e-14);
        assert_relative_eq!(b.c_transmit, 2.0 * a.c_transmit, max_relative = 1e-14);
    }

    #[test]
    fn rejects_nonpositive_inputs() {
        let p = SystemParams {
            bs_distance: 0.0,
            ..SystemParams::default()
        };
        assert!(derive_link_budget(&p).is_err());
        assert!(Scenario::new(p).is_err());
    }

    #[test]
    fn defaults_have_no_errors() {
        let diags = SystemParams::default().validate();
        assert!(diags.iter().all(|d| d.severity == Severity::Warning));
        // Only the aperture-based far-field check can fire on the defaults.
        assert!(diags.iter().all(|d| d.invariant == "far_field"));
    }

    #[test]
    fn defaults_clean_with_relaxed_far_field() {
        let p = SystemParams {
            far_field_threshold: Some(1.0),
            ..SystemParams::default()
        };
        assert!(p.validate().is_empty());
    }

    #[test]
    fn zero_irs_is_one_error() {
        let p = SystemParams {
            irs_count: 0,
            ..SystemParams::default()
        };
        let diags = p.validate();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].severity, Severity::Error);
        assert_eq!(diags[0].invariant, "irs_count");
    }

    #[test]
    fn large_passive_array_warns_about_regime() {
        let p = SystemParams {
            far_field_threshold: Some(1.0),
            ..SystemParams::default()
        }
        .with_passive_elements(2000);
        let diags = p.validate();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].severity, Severity::Warning);
        assert!(diags[0].message.contains("f(l) non-decreasing regime"));
    }

    #[test]
    fn layout_mismatch_is_error() {
        let p = SystemParams {
            passive_shape: UpaShape::new(3, 3),
            ..SystemParams::default()
        };
        assert!(p
            .validate()
            .iter()
            .any(|d| d.invariant == "passive_shape" && d.severity == Severity::Error));
    }

    #[test]
    fn near_square_layouts() {
        assert_eq!(UpaShape::near_square(100), UpaShape::new(10, 10));
        assert_eq!(UpaShape::near_square(150), UpaShape::new(10, 15));
        assert_eq!(UpaShape::near_square(101), UpaShape::new(1, 101));
        assert_eq!(UpaShape::near_square(1), UpaShape::new(1, 1));
    }
}
