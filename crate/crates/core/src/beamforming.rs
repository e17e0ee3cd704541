//! Transmit beamforming, reflection phase alignment and the AIRS
//! amplification factor.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::channel::{
    arrival_response, cascade_terms, departure_response, ComplexVector, HopGeometry, PhaseConfig,
};
use crate::error::{Error, Result};
use crate::logspace::ln_sum_exp;
use crate::params::{Scenario, SystemParams};

/// Maximum-ratio transmit beam `w = sqrt(P_t) h / ‖h‖`.
pub fn optimal_transmit_beam(h_tilde: &ComplexVector, tx_power: f64) -> Result<ComplexVector> {
    let n = h_tilde.norm();
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(h_tilde * Complex64::new(tx_power.sqrt() / n, 0.0))
}

/// Maps a phase into `[0, 2π)`; both `-π` and `π` map to `π`.
pub fn canonical_phase(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

fn canonical_arg(z: Complex64) -> f64 {
    // atan2 gives -π for a negative real axis with a -0.0 imaginary part.
    if z.im == 0.0 && z.re < 0.0 {
        return std::f64::consts::PI;
    }
    canonical_phase(z.arg())
}

/// Phases that co-phase every term of `txᴴ Φ rx` onto the positive real axis,
/// so `|txᴴ Φ rx| = Σ |tx_n| |rx_n|`.
pub fn optimal_pirs_phases(rx: &ComplexVector, tx: &ComplexVector) -> Result<Vec<f64>> {
    if rx.len() != tx.len() {
        return Err(Error::DimensionMismatch {
            expected: rx.len(),
            found: tx.len(),
        });
    }
    Ok(rx
        .iter()
        .zip(tx.iter())
        .map(|(r, t)| canonical_arg(t * r.conj()))
        .collect())
}

/// `A = txᴴ diag(e^{jθ}) rx`.
pub fn reflection_gain(rx: &ComplexVector, tx: &ComplexVector, theta: &[f64]) -> Complex64 {
    rx.iter()
        .zip(tx.iter())
        .zip(theta)
        .map(|((r, t), &th)| t.conj() * Complex64::from_polar(1.0, th) * r)
        .sum()
}

/// `η` that meets the per-element power budget with equality for a given
/// incident power per element.
pub fn amplification_for_incident(incident: f64, noise_power: f64, amp_power: f64) -> f64 {
    (amp_power / (incident + noise_power)).sqrt()
}

/// Closed-form `η` at AIRS index `l` under optimal beamforming:
/// `η² = P_a / (κ_B² κ_I^{2(l-1)} P_t M N_p^{2(l-1)} + σ²)`.
pub fn amplification_factor(s: &Scenario, l: usize) -> Result<f64> {
    s.check_index(l)?;
    let p = s.params();
    let lb = s.budget();
    let ln_incident = lb.c_transmit.ln() + 2.0 * (l - 1) as f64 * lb.np_kappa_irs.ln();
    let ln_den = ln_sum_exp(&[ln_incident, p.noise_power.ln()]);
    Ok((0.5 * (p.amp_power.ln() - ln_den)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerCheck {
    pub feasible: bool,
    /// `P_a - η² (incident + σ²)`; negative when violated.
    pub slack: f64,
}

/// Per-element reflect power constraint `η² (incident + σ²) <= P_a`, with a
/// `1e-12` relative tolerance on `P_a`.
pub fn check_power_constraint(eta: f64, incident: f64, noise_power: f64, amp_power: f64) -> PowerCheck {
    let slack = amp_power - eta * eta * (incident + noise_power);
    PowerCheck {
        feasible: slack >= -1e-12 * amp_power,
        slack,
    }
}

/// Beam, phases and amplification factor designed from the matrix model.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformingDesign {
    pub l: usize,
    pub w: ComplexVector,
    pub phases: PhaseConfig,
    /// Largest incident power over the AIRS elements, W.
    pub incident_power: f64,
}

impl BeamformingDesign {
    /// Aligns the BS beam and every IRS (the AIRS included) to the geometry,
    /// then sets `η` so the most-illuminated AIRS element uses its full power
    /// budget.
    pub fn optimal(l: usize, geometry: &HopGeometry, p: &SystemParams) -> Result<Self> {
        let j = p.irs_count;
        if geometry.irs_count() != j {
            return Err(Error::HopCount {
                expected: j + 1,
                found: geometry.hops().len(),
            });
        }
        if l == 0 || l > j {
            return Err(Error::IndexOutOfRange { l, irs_count: j });
        }
        let h_tilde = departure_response(p, geometry, 0, l)?;
        let w = optimal_transmit_beam(&h_tilde, p.tx_power)?;
        let theta = (1..=j)
            .map(|k| {
                let rx = arrival_response(p, geometry, k - 1, l)?;
                let tx = departure_response(p, geometry, k, l)?;
                optimal_pirs_phases(&rx, &tx)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut phases = PhaseConfig { theta, eta: 0.0 };
        let terms = cascade_terms(l, geometry, &phases, &w, p)?;
        let incident_power = terms.incident_power();
        phases.eta = amplification_for_incident(incident_power, p.noise_power, p.amp_power);
        Ok(Self {
            l,
            w,
            phases,
            incident_power,
        })
    }

    pub fn snr(&self, geometry: &HopGeometry, p: &SystemParams) -> Result<f64> {
        crate::channel::full_snr(self.l, geometry, &self.phases, &self.w, p)
    }

    pub fn power(&self, geometry: &HopGeometry, p: &SystemParams) -> Result<f64> {
        crate::channel::full_power(self.l, geometry, &self.phases, &self.w, p)
    }
}
