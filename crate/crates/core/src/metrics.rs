//! Closed-form objectives under optimal beamforming.
//!
//! With `x = N_p κ_I`:
//!
//! ```text
//! γ(l) = C_a C_t N_a x^{2(J-1)} / (σ² C_a x^{2(J-l)} + σ² C_t x^{2(l-1)} + σ⁴)
//! Q(l) = (C_a C_t N_a x^{2(J-1)} + σ² C_a x^{2(J-l)}) / (C_t x^{2(l-1)} + σ²)
//! ```
//!
//! Powers of `x` reach ~1e-40 for long cascades, so every term is assembled
//! as a natural log and combined with log-sum-exp.

use std::fmt;

use crate::error::Result;
use crate::logspace::ln_sum_exp;
use crate::params::{linear_to_db, watts_to_dbm, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Information transfer: maximize SNR.
    Wit,
    /// Power transfer: maximize received power.
    Wpt,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Wit => "wit",
            Mode::Wpt => "wpt",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "wit" => Ok(Mode::Wit),
            "wpt" => Ok(Mode::Wpt),
            other => Err(format!("unknown mode `{other}` (expected wit or wpt)")),
        }
    }
}

/// SNR (linear) for WIT or received power (W) for WPT at AIRS index `l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveValue {
    pub value: f64,
    pub l: usize,
    pub mode: Mode,
}

impl ObjectiveValue {
    /// dB for SNR, dBm for power.
    pub fn db(&self) -> f64 {
        match self.mode {
            Mode::Wit => linear_to_db(self.value),
            Mode::Wpt => watts_to_dbm(self.value),
        }
    }
}

struct LnTerms {
    ln_x: f64,
    ln_ca: f64,
    ln_ct: f64,
    ln_na: f64,
    ln_s2: f64,
    j: f64,
}

impl LnTerms {
    fn new(s: &Scenario) -> Self {
        let p = s.params();
        let lb = s.budget();
        Self {
            ln_x: lb.np_kappa_irs.ln(),
            ln_ca: lb.c_active.ln(),
            ln_ct: lb.c_transmit.ln(),
            ln_na: (p.active_elements as f64).ln(),
            ln_s2: p.noise_power.ln(),
            j: p.irs_count as f64,
        }
    }

    /// `ln(C_a C_t N_a x^{2(J-1)})`
    fn signal(&self) -> f64 {
        self.ln_ca + self.ln_ct + self.ln_na + 2.0 * (self.j - 1.0) * self.ln_x
    }

    /// `ln(C_a x^{2(J-l)})`
    fn amp_noise(&self, l: f64) -> f64 {
        self.ln_ca + 2.0 * (self.j - l) * self.ln_x
    }

    /// `ln(C_t x^{2(l-1)})`
    fn incident(&self, l: f64) -> f64 {
        self.ln_ct + 2.0 * (l - 1.0) * self.ln_x
    }
}

/// `f(l) = κ_B² (N_p κ_I)^{2(l-1)}`.
pub fn effective_gain_f(s: &Scenario, l: usize) -> Result<f64> {
    s.check_index(l)?;
    let lb = s.budget();
    Ok((2.0 * lb.kappa_bs.ln() + 2.0 * (l - 1) as f64 * lb.np_kappa_irs.ln()).exp())
}

pub fn snr_closed(s: &Scenario, l: usize) -> Result<f64> {
    s.check_index(l)?;
    Ok(ln_snr(s, l as f64).exp())
}

/// `ln γ(l)`, also defined for non-integer `l`.
pub(crate) fn ln_snr(s: &Scenario, l: f64) -> f64 {
    let t = LnTerms::new(s);
    let den = ln_sum_exp(&[
        t.ln_s2 + t.amp_noise(l),
        t.ln_s2 + t.incident(l),
        2.0 * t.ln_s2,
    ]);
    t.signal() - den
}

pub fn power_closed(s: &Scenario, l: usize) -> Result<f64> {
    s.check_index(l)?;
    Ok(ln_power(s, l as f64).exp())
}

pub(crate) fn ln_power(s: &Scenario, l: f64) -> f64 {
    let t = LnTerms::new(s);
    let num = ln_sum_exp(&[t.signal(), t.ln_s2 + t.amp_noise(l)]);
    let den = ln_sum_exp(&[t.incident(l), t.ln_s2]);
    num - den
}

pub fn objective(s: &Scenario, mode: Mode, l: usize) -> Result<ObjectiveValue> {
    let value = match mode {
        Mode::Wit => snr_closed(s, l)?,
        Mode::Wpt => power_closed(s, l)?,
    };
    Ok(ObjectiveValue { value, l, mode })
}

/// Exponent of `N_p` in `γ(l)` as `N_p → ∞`.
pub fn snr_scaling_order(l: usize, irs_count: usize) -> i64 {
    let (l, j) = (l as i64, irs_count as i64);
    // l < (J+1)/2  <=>  2l < J+1
    if 2 * l < j + 1 {
        2 * (l - 1)
    } else {
        2 * (j - l)
    }
}

/// Exponent of `N_p` in `Q(l)` as `N_p → ∞`.
pub fn power_scaling_order(l: usize, irs_count: usize) -> i64 {
    2 * (irs_count as i64 - l as i64)
}
