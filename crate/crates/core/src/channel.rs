//! Per-hop LoS channel synthesis and the explicit matrix model of the cascade.
//!
//! Node 0 is the BS (ULA), nodes `1..=J` are the IRSs (UPAs parallel to the
//! x-z plane) and node `J + 1` is the single-antenna user. Hop `k` connects
//! node `k` to node `k + 1`. The AIRS sits at node `l`; every other IRS is
//! passive.
//!
//! The matrix evaluation here is intentionally independent of the closed-form
//! expressions in [`crate::metrics`]: it builds every hop matrix and pushes the
//! beam through the cascade. Vectors are renormalized after each hop and the
//! magnitude is carried as a natural log, so long cascades never underflow.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::logspace::ln_sum_exp;
use crate::params::{SystemParams, UpaShape};

pub type ComplexVector = DVector<Complex64>;
pub type ComplexMatrix = DMatrix<Complex64>;

/// `u(ς, M')`: entry `m` is `exp(-j π m ς)`.
pub fn steering_vector(varsigma: f64, len: usize) -> Result<ComplexVector> {
    if len == 0 {
        return Err(invalid("len", "steering vector needs at least one entry"));
    }
    Ok(DVector::from_iterator(
        len,
        (0..len).map(|m| Complex64::from_polar(1.0, -PI * m as f64 * varsigma)),
    ))
}

/// UPA response: `u(2d/λ cos(az) sin(el), Nx) ⊗ u(2d/λ cos(el), Nz)`.
pub fn upa_response(
    azimuth: f64,
    elevation: f64,
    shape: UpaShape,
    spacing: f64,
    wavelength: f64,
) -> Result<ComplexVector> {
    let scale = 2.0 * spacing / wavelength;
    let ux = steering_vector(scale * azimuth.cos() * elevation.sin(), shape.nx)?;
    let uz = steering_vector(scale * elevation.cos(), shape.nz)?;
    Ok(ux.kronecker(&uz))
}

/// Antenna array at one node of the path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArrayKind {
    /// BS uniform linear array along x.
    Ula { antennas: usize, spacing: f64 },
    /// IRS uniform planar array.
    Upa { shape: UpaShape, spacing: f64 },
    /// Single-antenna receiver.
    Single,
}

impl ArrayKind {
    pub fn len(&self) -> usize {
        match *self {
            ArrayKind::Ula { antennas, .. } => antennas,
            ArrayKind::Upa { shape, .. } => shape.count(),
            ArrayKind::Single => 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Array response towards `(azimuth, elevation)`. The ULA only uses the
    /// azimuth, measured from the array axis.
    pub fn response(&self, azimuth: f64, elevation: f64, wavelength: f64) -> Result<ComplexVector> {
        match *self {
            ArrayKind::Ula { antennas, spacing } => {
                steering_vector(2.0 * spacing / wavelength * azimuth.cos(), antennas)
            }
            ArrayKind::Upa { shape, spacing } => {
                upa_response(azimuth, elevation, shape, spacing, wavelength)
            }
            ArrayKind::Single => Ok(DVector::from_element(1, Complex64::new(1.0, 0.0))),
        }
    }
}

/// Array at node `k` when the AIRS is IRS `l`.
pub fn node_array(p: &SystemParams, k: usize, l: usize) -> ArrayKind {
    if k == 0 {
        ArrayKind::Ula {
            antennas: p.bs_antennas,
            spacing: p.antenna_spacing,
        }
    } else if k > p.irs_count {
        ArrayKind::Single
    } else {
        let shape = if k == l {
            p.active_shape
        } else {
            p.passive_shape
        };
        ArrayKind::Upa {
            shape,
            spacing: p.element_spacing,
        }
    }
}

/// One LoS hop: its length and the departure/arrival directions at its ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hop {
    pub distance: f64,
    pub departure_azimuth: f64,
    pub departure_elevation: f64,
    pub arrival_azimuth: f64,
    pub arrival_elevation: f64,
}

impl Hop {
    /// Hop along the unit direction `dir = (x, y, z)` in the global frame.
    /// Angles follow the UPA convention: `cos(az) sin(el) = x`, `cos(el) = z`.
    /// For the BS ULA the departure azimuth is the angle to the x axis.
    fn along(distance: f64, dir: [f64; 3], from_bs: bool) -> Self {
        let angles = |v: [f64; 3]| {
            let el = v[2].clamp(-1.0, 1.0).acos();
            let s = el.sin();
            let az = if s > 0.0 {
                (v[0] / s).clamp(-1.0, 1.0).acos()
            } else {
                0.0
            };
            (az, el)
        };
        let (dep_az, dep_el) = if from_bs {
            (dir[0].clamp(-1.0, 1.0).acos(), PI / 2.0)
        } else {
            angles(dir)
        };
        let (arr_az, arr_el) = angles([-dir[0], -dir[1], -dir[2]]);
        Hop {
            distance,
            departure_azimuth: dep_az,
            departure_elevation: dep_el,
            arrival_azimuth: arr_az,
            arrival_elevation: arr_el,
        }
    }
}

/// Geometry of the whole path: hops `0..=J`.
#[derive(Debug, Clone, PartialEq)]
pub struct HopGeometry {
    hops: Vec<Hop>,
}

impl HopGeometry {
    pub fn new(hops: Vec<Hop>) -> Result<Self> {
        if hops.len() < 2 {
            return Err(Error::HopCount {
                expected: 2,
                found: hops.len(),
            });
        }
        for h in &hops {
            if !(h.distance.is_finite() && h.distance > 0.0) {
                return Err(invalid("distance", format!("hop distance {} is not positive", h.distance)));
            }
            let angles = [
                h.departure_azimuth,
                h.departure_elevation,
                h.arrival_azimuth,
                h.arrival_elevation,
            ];
            if angles.iter().any(|a| !a.is_finite()) {
                return Err(invalid("angle", "hop angles must be finite"));
            }
        }
        Ok(Self { hops })
    }

    pub fn hops(&self) -> &[Hop] {
        &self.hops
    }

    /// Number of IRSs on the path described by this geometry.
    pub fn irs_count(&self) -> usize {
        self.hops.len() - 1
    }

    fn distances(p: &SystemParams) -> impl Iterator<Item = f64> + '_ {
        (0..=p.irs_count).map(move |k| {
            if k == 0 {
                p.bs_distance
            } else if k == p.irs_count {
                p.user_distance
            } else {
                p.irs_distance
            }
        })
    }

    /// Default placement: the path advances along y while alternating left
    /// and right in x and up and down in z, so no steering argument vanishes.
    pub fn zigzag(p: &SystemParams) -> Self {
        let hops = Self::distances(p)
            .enumerate()
            .map(|(k, d)| {
                let side = if k % 2 == 0 { 1.0 } else { -1.0 };
                let v: [f64; 3] = [0.45 * side, 0.85, 0.25 * -side];
                let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                Hop::along(d, [v[0] / n, v[1] / n, v[2] / n], k == 0)
            })
            .collect();
        Self { hops }
    }

    /// Distances from `p` with independent uniformly drawn angles.
    pub fn random<R: Rng + ?Sized>(p: &SystemParams, rng: &mut R) -> Self {
        let hops = Self::distances(p)
            .map(|distance| Hop {
                distance,
                departure_azimuth: rng.gen_range(0.0..TAU),
                departure_elevation: rng.gen_range(0.0..PI),
                arrival_azimuth: rng.gen_range(0.0..TAU),
                arrival_elevation: rng.gen_range(0.0..PI),
            })
            .collect();
        Self { hops }
    }
}

/// Rank-one LoS matrix of one hop, `rx_len × tx_len`:
/// `sqrt(β0)/d^(α/2) · exp(-j 2π d/λ) · a_rx · a_txᴴ`.
pub fn los_channel(
    hop: &Hop,
    p: &SystemParams,
    tx: ArrayKind,
    rx: ArrayKind,
) -> Result<ComplexMatrix> {
    if let ArrayKind::Single = tx {
        return Err(invalid("tx", "the single-antenna user cannot transmit on the path"));
    }
    if let ArrayKind::Ula { .. } = rx {
        return Err(invalid("rx", "the BS cannot receive on the path"));
    }
    let a_tx = tx.response(hop.departure_azimuth, hop.departure_elevation, p.wavelength)?;
    let a_rx = rx.response(hop.arrival_azimuth, hop.arrival_elevation, p.wavelength)?;
    let scale = Complex64::from_polar(
        p.hop_gain(hop.distance),
        -TAU * hop.distance / p.wavelength,
    );
    Ok((a_rx * a_tx.adjoint()) * scale)
}

/// Transmit response of node `k` on hop `k`.
pub fn departure_response(p: &SystemParams, geometry: &HopGeometry, k: usize, l: usize) -> Result<ComplexVector> {
    let hop = &geometry.hops[k];
    node_array(p, k, l).response(hop.departure_azimuth, hop.departure_elevation, p.wavelength)
}

/// Receive response of node `k + 1` on hop `k`.
pub fn arrival_response(p: &SystemParams, geometry: &HopGeometry, k: usize, l: usize) -> Result<ComplexVector> {
    let hop = &geometry.hops[k];
    node_array(p, k + 1, l).response(hop.arrival_azimuth, hop.arrival_elevation, p.wavelength)
}

/// Per-IRS reflection phases and the AIRS amplification factor.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseConfig {
    /// `theta[k - 1][n]` is the phase of element `n` of IRS `k`, radians.
    pub theta: Vec<Vec<f64>>,
    pub eta: f64,
}

impl PhaseConfig {
    /// Diagonal of the unit-modulus reflection matrix of IRS `k`.
    pub fn reflection(&self, k: usize) -> ComplexVector {
        let t = &self.theta[k - 1];
        DVector::from_iterator(t.len(), t.iter().map(|&th| Complex64::from_polar(1.0, th)))
    }
}

/// A vector stored as a unit-norm direction times `exp(ln_norm)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledVector {
    pub unit: ComplexVector,
    pub ln_norm: f64,
}

impl ScaledVector {
    pub fn new(v: ComplexVector) -> Self {
        let n = v.norm();
        if n == 0.0 {
            return Self {
                unit: v,
                ln_norm: f64::NEG_INFINITY,
            };
        }
        Self {
            unit: v / Complex64::new(n, 0.0),
            ln_norm: n.ln(),
        }
    }

    fn map(self, f: impl FnOnce(ComplexVector) -> ComplexVector) -> Self {
        let ln = self.ln_norm;
        let mut next = Self::new(f(self.unit));
        next.ln_norm += ln;
        next
    }

    /// Plain vector; may underflow for long cascades.
    pub fn to_vector(&self) -> ComplexVector {
        if self.ln_norm == f64::NEG_INFINITY {
            return self.unit.clone();
        }
        &self.unit * Complex64::new(self.ln_norm.exp(), 0.0)
    }

    pub fn ln_norm_sqr(&self) -> f64 {
        2.0 * self.ln_norm
    }
}

/// Effective channels around the AIRS. `h_ar` is the column vector whose
/// conjugate transpose is the AIRS-to-user row channel.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveChannels {
    pub h_ta: ScaledVector,
    pub h_ar: ScaledVector,
}

fn check_config(l: usize, geometry: &HopGeometry, phases: &PhaseConfig, w: &ComplexVector, p: &SystemParams) -> Result<()> {
    let j = p.irs_count;
    if geometry.irs_count() != j {
        return Err(Error::HopCount {
            expected: j + 1,
            found: geometry.hops.len(),
        });
    }
    if l == 0 || l > j {
        return Err(Error::IndexOutOfRange { l, irs_count: j });
    }
    if phases.theta.len() != j {
        return Err(Error::PhaseCount {
            expected: j,
            found: phases.theta.len(),
        });
    }
    for k in 1..=j {
        let n = node_array(p, k, l).len();
        if phases.theta[k - 1].len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: phases.theta[k - 1].len(),
            });
        }
    }
    if w.len() != p.bs_antennas {
        return Err(Error::DimensionMismatch {
            expected: p.bs_antennas,
            found: w.len(),
        });
    }
    Ok(())
}

/// Every hop matrix of the path with the AIRS at IRS `l`, in hop order:
/// `H_{0,1}, S_{1,2}, …, S_{J-1,J}, g_{J,J+1}ᴴ`.
pub fn hop_matrices(l: usize, geometry: &HopGeometry, p: &SystemParams) -> Result<Vec<ComplexMatrix>> {
    geometry
        .hops
        .iter()
        .enumerate()
        .map(|(k, hop)| los_channel(hop, p, node_array(p, k, l), node_array(p, k + 1, l)))
        .collect()
}

/// `h_TA = (Π_{k=1}^{l-1} S_{k,k+1} Φ_k) H_{0,1} w` and
/// `h_ARᴴ = gᴴ Π_{k=l}^{J-1} Φ_{k+1} S_{k,k+1}`, evaluated hop by hop.
pub fn effective_channels(
    l: usize,
    geometry: &HopGeometry,
    phases: &PhaseConfig,
    w: &ComplexVector,
    p: &SystemParams,
) -> Result<EffectiveChannels> {
    check_config(l, geometry, phases, w, p)?;
    let mats = hop_matrices(l, geometry, p)?;
    Ok(cascade(l, &mats, phases, w, p.irs_count))
}

fn cascade(l: usize, mats: &[ComplexMatrix], phases: &PhaseConfig, w: &ComplexVector, j: usize) -> EffectiveChannels {
    let mut h_ta = ScaledVector::new(&mats[0] * w);
    for (k, m) in mats.iter().enumerate().take(l).skip(1) {
        let phi = phases.reflection(k);
        h_ta = h_ta.map(|v| m * v.component_mul(&phi));
    }

    // h_AR = S_{l,l+1}ᴴ Φ_{l+1}ᴴ … S_{J-1,J}ᴴ Φ_Jᴴ g
    let mut h_ar = ScaledVector::new(mats[j].adjoint().column(0).into_owned());
    for k in (l..j).rev() {
        let phi_conj = phases.reflection(k + 1).map(|z| z.conj());
        h_ar = h_ar.map(|v| mats[k].ad_mul(&v.component_mul(&phi_conj)));
    }
    EffectiveChannels { h_ta, h_ar }
}

/// Log-domain quantities of one matrix evaluation, independent of `η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeTerms {
    /// `ln |h_ARᴴ Φ_l h_TA|²`.
    pub ln_signal: f64,
    /// `ln ‖h_ARᴴ Φ_l‖²`.
    pub ln_noise_gain: f64,
    /// `ln ‖h_ARᴴ‖²`.
    pub ln_ar_gain: f64,
    /// `ln max_n |[h_TA]_n|²`, the incident power per AIRS element.
    pub ln_incident: f64,
}

impl CascadeTerms {
    pub fn from_channels(ch: &EffectiveChannels, phases: &PhaseConfig, l: usize) -> Self {
        let phi = phases.reflection(l);
        let reflected = ch.h_ta.unit.component_mul(&phi);
        let a = ch.h_ar.unit.dotc(&reflected);
        // Row vector h_ARᴴ Φ_l, stored conjugated.
        let row = ch.h_ar.unit.component_mul(&phi.map(|z| z.conj()));
        let max_entry = ch.h_ta.unit.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
        Self {
            ln_signal: a.norm_sqr().ln() + ch.h_ta.ln_norm_sqr() + ch.h_ar.ln_norm_sqr(),
            ln_noise_gain: row.norm_squared().ln() + ch.h_ar.ln_norm_sqr(),
            ln_ar_gain: ch.h_ar.unit.norm_squared().ln() + ch.h_ar.ln_norm_sqr(),
            ln_incident: max_entry.ln() + ch.h_ta.ln_norm_sqr(),
        }
    }

    /// `η² |·|² / (η² ‖·‖² σ² + σ²)`.
    pub fn snr(&self, eta: f64, noise_power: f64) -> f64 {
        if eta == 0.0 {
            return 0.0;
        }
        let ln_eta2 = 2.0 * eta.ln();
        let ln_s2 = noise_power.ln();
        let den = ln_sum_exp(&[ln_eta2 + self.ln_noise_gain + ln_s2, ln_s2]);
        (ln_eta2 + self.ln_signal - den).exp()
    }

    /// `η² (|·|² + σ² ‖h_ARᴴ‖²)`.
    pub fn power(&self, eta: f64, noise_power: f64) -> f64 {
        if eta == 0.0 {
            return 0.0;
        }
        let ln_eta2 = 2.0 * eta.ln();
        (ln_eta2 + ln_sum_exp(&[self.ln_signal, noise_power.ln() + self.ln_ar_gain])).exp()
    }

    pub fn incident_power(&self) -> f64 {
        self.ln_incident.exp()
    }
}

/// Matrix-model terms for the AIRS at IRS `l`.
pub fn cascade_terms(
    l: usize,
    geometry: &HopGeometry,
    phases: &PhaseConfig,
    w: &ComplexVector,
    p: &SystemParams,
) -> Result<CascadeTerms> {
    let ch = effective_channels(l, geometry, phases, w, p)?;
    Ok(CascadeTerms::from_channels(&ch, phases, l))
}

/// Received SNR from explicit matrices, using `p.noise_power` for both the
/// amplification noise and the receiver noise.
pub fn full_snr(
    l: usize,
    geometry: &HopGeometry,
    phases: &PhaseConfig,
    w: &ComplexVector,
    p: &SystemParams,
) -> Result<f64> {
    Ok(cascade_terms(l, geometry, phases, w, p)?.snr(phases.eta, p.noise_power))
}

/// Received signal-plus-amplification-noise power from explicit matrices, W.
pub fn full_power(
    l: usize,
    geometry: &HopGeometry,
    phases: &PhaseConfig,
    w: &ComplexVector,
    p: &SystemParams,
) -> Result<f64> {
    Ok(cascade_terms(l, geometry, phases, w, p)?.power(phases.eta, p.noise_power))
}
