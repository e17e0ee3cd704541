//! Active-IRS placement: closed-form optima for SNR and received power, an
//! exhaustive oracle, and comparisons with the baseline deployments.
//!
//! For SNR the placement balances two terms of the denominator
//! `G(l) = C_a κ_B² x^{2(J-1)} / f(l) + C_t f(l) / κ_B²`, where `f` falls
//! geometrically in `l` while `x = N_p κ_I < 1`. `G` is convex in a relaxed
//! `l` with stationary point
//!
//! ```text
//! l̃ = (J+1)/2 + ln(C_a / C_t) / (2 ln(x²))
//! ```
//!
//! so the integer optimum is one of the two neighbours of `l̃` (clamped to
//! `1..=J`). Received power is increasing in `l` in the same regime and is
//! always maximized at the last IRS.

use std::fmt;

use crate::logspace::ln_sum_exp;
use crate::metrics::{ln_power, ln_snr, Mode, ObjectiveValue};
use crate::params::{Scenario, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    /// `C_a < C_t`.
    CaseI,
    /// `C_a = C_t`.
    CaseII,
    /// `C_a > C_t`.
    CaseIII,
    /// `N_p κ_I >= 1`: closed form not applicable, exhaustive search used.
    BruteForceFallback,
    /// Power transfer: AIRS at the last IRS.
    Final,
    /// Result of [`brute_force_index`].
    Exhaustive,
}

impl CaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseLabel::CaseI => "I",
            CaseLabel::CaseII => "II",
            CaseLabel::CaseIII => "III",
            CaseLabel::BruteForceFallback => "brute-force-fallback",
            CaseLabel::Final => "final",
            CaseLabel::Exhaustive => "brute-force",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeploymentSolution {
    pub l_star: usize,
    pub objective: ObjectiveValue,
    pub case: CaseLabel,
    /// Stationary point of the relaxed SNR problem, when it was used.
    pub l_tilde: Option<f64>,
    /// Exhaustive-search answer for the same problem.
    pub brute_force_l: usize,
    pub brute_force_agrees: bool,
}

fn ln_objective(s: &Scenario, mode: Mode, l: usize) -> f64 {
    match mode {
        Mode::Wit => ln_snr(s, l as f64),
        Mode::Wpt => ln_power(s, l as f64),
    }
}

/// Ordering key, larger is better. For SNR the numerator and the `σ⁴` term do
/// not depend on `l`, so candidates are ranked by `-ln G(l)` with
/// `G(l) = C_a x^{2(J-l)} + C_t x^{2(l-1)}`. When `σ⁴` dominates the
/// denominator, `γ(l)` itself is flat to machine precision while `G` still
/// separates the candidates.
fn rank_key(s: &Scenario, mode: Mode, l: usize) -> f64 {
    match mode {
        Mode::Wit => {
            let lb = s.budget();
            let ln_x = lb.np_kappa_irs.ln();
            let (j, l) = (s.irs_count() as f64, l as f64);
            -ln_sum_exp(&[
                lb.c_active.ln() + 2.0 * (j - l) * ln_x,
                lb.c_transmit.ln() + 2.0 * (l - 1.0) * ln_x,
            ])
        }
        Mode::Wpt => ln_power(s, l as f64),
    }
}

/// Best candidate; ties go to the smaller index.
fn argmax(s: &Scenario, mode: Mode, candidates: impl IntoIterator<Item = usize>) -> usize {
    let mut best: Option<(usize, f64)> = None;
    for l in candidates {
        let v = rank_key(s, mode, l);
        best = match best {
            Some((bl, bv)) if v < bv || (v == bv && bl <= l) => Some((bl, bv)),
            _ => Some((l, v)),
        };
    }
    best.expect("at least one candidate").0
}

fn solution(s: &Scenario, mode: Mode, l_star: usize, case: CaseLabel, l_tilde: Option<f64>) -> DeploymentSolution {
    let brute_force_l = argmax(s, mode, 1..=s.irs_count());
    DeploymentSolution {
        l_star,
        objective: ObjectiveValue {
            value: ln_objective(s, mode, l_star).exp(),
            l: l_star,
            mode,
        },
        case,
        l_tilde,
        brute_force_l,
        brute_force_agrees: brute_force_l == l_star,
    }
}

/// Exhaustive search over every AIRS position.
pub fn brute_force_index(s: &Scenario, mode: Mode) -> DeploymentSolution {
    let l = argmax(s, mode, 1..=s.irs_count());
    solution(s, mode, l, CaseLabel::Exhaustive, None)
}

/// `l̃`; `None` for a single IRS or when `N_p κ_I = 1`.
pub fn relaxed_optimum(s: &Scenario) -> Option<f64> {
    let lb = s.budget();
    let j = s.irs_count();
    let ln_x2 = 2.0 * lb.np_kappa_irs.ln();
    if j < 2 || ln_x2 == 0.0 {
        return None;
    }
    Some((j as f64 + 1.0) / 2.0 + (lb.c_active / lb.c_transmit).ln() / (2.0 * ln_x2))
}

/// `N_p` at which the SNR optimum snaps to the boundary index:
/// `(min(C_a,C_t)/max(C_a,C_t))^{1/(2(J-1))} / κ_I`. Infinite for `J = 1`.
pub fn wit_boundary_threshold(s: &Scenario) -> f64 {
    let lb = s.budget();
    let j = s.irs_count();
    if j < 2 {
        return f64::INFINITY;
    }
    let ratio = lb.c_active.min(lb.c_transmit) / lb.c_active.max(lb.c_transmit);
    ratio.powf(1.0 / (2.0 * (j - 1) as f64)) / lb.kappa_irs
}

/// Relative tolerance under which `C_a` and `C_t` count as equal.
const EQUAL_COMPOSITES_TOL: f64 = 1e-12;

fn wit_case(s: &Scenario) -> CaseLabel {
    let lb = s.budget();
    let (a, t) = (lb.c_active, lb.c_transmit);
    if (a - t).abs() <= EQUAL_COMPOSITES_TOL * a.max(t) {
        CaseLabel::CaseII
    } else if a < t {
        CaseLabel::CaseI
    } else {
        CaseLabel::CaseIII
    }
}

fn neighbours(x: f64, j: usize) -> Vec<usize> {
    let clamp = |v: f64| (v.max(1.0).min(j as f64)) as usize;
    let lo = clamp(x.floor());
    let hi = clamp(x.ceil());
    if lo == hi {
        vec![lo]
    } else {
        vec![lo, hi]
    }
}

/// SNR-optimal AIRS index from the closed-form case analysis.
pub fn optimal_index_wit(s: &Scenario) -> DeploymentSolution {
    let j = s.irs_count();
    let lb = s.budget();
    if !lb.f_decreasing() {
        let l = argmax(s, Mode::Wit, 1..=j);
        return solution(s, Mode::Wit, l, CaseLabel::BruteForceFallback, None);
    }
    let case = wit_case(s);
    if j == 1 {
        return solution(s, Mode::Wit, 1, case, None);
    }
    let np = s.params().passive_elements as f64;
    let l_tilde = relaxed_optimum(s);
    let l_star = match case {
        CaseLabel::CaseII => argmax(s, Mode::Wit, neighbours((j as f64 + 1.0) / 2.0, j)),
        CaseLabel::CaseI | CaseLabel::CaseIII => {
            if np < wit_boundary_threshold(s) {
                let lt = l_tilde.expect("x < 1 and J >= 2");
                argmax(s, Mode::Wit, neighbours(lt, j))
            } else if case == CaseLabel::CaseI {
                j
            } else {
                1
            }
        }
        _ => unreachable!("wit_case only returns I, II or III"),
    };
    solution(s, Mode::Wit, l_star, case, l_tilde)
}

/// Power-optimal AIRS index: the last IRS whenever `N_p κ_I < 1`.
pub fn optimal_index_wpt(s: &Scenario) -> DeploymentSolution {
    let j = s.irs_count();
    if !s.budget().f_decreasing() {
        let l = argmax(s, Mode::Wpt, 1..=j);
        return solution(s, Mode::Wpt, l, CaseLabel::BruteForceFallback, None);
    }
    solution(s, Mode::Wpt, j, CaseLabel::Final, None)
}

pub fn optimal_index(s: &Scenario, mode: Mode) -> DeploymentSolution {
    match mode {
        Mode::Wit => optimal_index_wit(s),
        Mode::Wpt => optimal_index_wpt(s),
    }
}

/// Middle IRS `(J+1)/2`, rounded down for even `J`.
pub fn middle_index(irs_count: usize) -> usize {
    irs_count.div_ceil(2)
}

/// Objective with the AIRS at the middle IRS.
pub fn scheme_middle(s: &Scenario, mode: Mode) -> ObjectiveValue {
    let l = middle_index(s.irs_count());
    ObjectiveValue {
        value: ln_objective(s, mode, l).exp(),
        l,
        mode,
    }
}

/// `ln` of the all-passive baseline with the BS power raised to
/// `P_t + N_a P_a`.
fn ln_all_pirs(s: &Scenario, mode: Mode) -> f64 {
    let p = s.params();
    let lb = s.budget();
    let j = p.irs_count as f64;
    let boosted = p.tx_power + p.active_elements as f64 * p.amp_power;
    let ln_np = (p.passive_elements as f64).ln();
    let ln_q = boosted.ln()
        + (p.bs_antennas as f64).ln()
        + 2.0 * lb.kappa_bs.ln()
        + 2.0 * lb.kappa_user.ln()
        + 2.0 * ln_np
        + 2.0 * (j - 1.0) * lb.np_kappa_irs.ln();
    match mode {
        Mode::Wit => ln_q - p.noise_power.ln(),
        Mode::Wpt => ln_q,
    }
}

/// All IRSs passive, BS power `P_t + N_a P_a`. SNR for WIT; received power
/// (receiver noise excluded) in W for WPT.
pub fn scheme_all_pirs(s: &Scenario, mode: Mode) -> f64 {
    ln_all_pirs(s, mode).exp()
}

/// `N_p` below which the optimal hybrid link delivers more power than the
/// all-passive link in the vanishing-noise limit.
pub fn wpt_crossover_np(s: &Scenario) -> f64 {
    let p = s.params();
    let lb = s.budget();
    let j = p.irs_count as f64;
    let na = p.active_elements as f64;
    let m = p.bs_antennas as f64;
    let kb2 = lb.kappa_bs * lb.kappa_bs;
    let base = na * na * p.amp_power / (p.tx_power * m * kb2 + p.amp_power * na * m * kb2);
    base.powf(1.0 / (2.0 * j)) * lb.kappa_irs.powf((1.0 - j) / j)
}

/// Gains of the optimal deployment over the baselines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RatioReport {
    Wit(WitRatios),
    Wpt(WptRatios),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitRatios {
    pub l_star: usize,
    pub l_mid: usize,
    /// `γ(l*) / γ(l_mid)`.
    pub exact_mid: f64,
    /// Lower bound `γ(J) / γ(l_mid)`.
    pub bound_mid: f64,
    /// `σ² → 0` limit of `exact_mid`.
    pub limit_mid: f64,
    /// `σ² → 0` limit of `bound_mid` for odd `J`:
    /// `x^{1-J} (1 + (C_a - C_a x^{2(1-J)}) / (C_a x^{2(1-J)} + C_t))`.
    pub bound_limit_mid: f64,
    /// `γ(l*) / γ_P`.
    pub exact_all_pirs: f64,
    /// Lower bound of `exact_all_pirs` obtained with `γ(J)`.
    pub bound_all_pirs: f64,
    /// `σ² → 0` limit of `exact_all_pirs`.
    pub limit_all_pirs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WptRatios {
    pub l_mid: usize,
    /// `Q(J) / Q(l_mid)`.
    pub exact_mid: f64,
    pub rho1: f64,
    /// `x^{1-J} (1 + ρ1)`; equals `exact_mid` for odd `J`.
    pub formula_mid: f64,
    /// `x^{1-J}`.
    pub limit_mid: f64,
    /// `Q(J) / Q_P`.
    pub exact_all_pirs: f64,
    pub rho2: f64,
    /// `C_a N_a / (N_p^{2J} κ_I^{2(J-1)} (C_t κ_U² + C_a M κ_B²)) (1 + ρ2)`.
    pub formula_all_pirs: f64,
    /// The same without `(1 + ρ2)`.
    pub limit_all_pirs: f64,
}

pub fn ratio_diagnostics(s: &Scenario, mode: Mode) -> RatioReport {
    let p = s.params();
    let lb = s.budget();
    let j = p.irs_count;
    let jf = j as f64;
    let l_mid = middle_index(j);
    let (ca, ct, s2) = (lb.c_active, lb.c_transmit, p.noise_power);
    let na = p.active_elements as f64;
    let np = p.passive_elements as f64;
    let x = lb.np_kappa_irs;
    let ln_x = x.ln();

    match mode {
        Mode::Wit => {
            let l_star = optimal_index_wit(s).l_star;
            let ln_star = ln_snr(s, l_star as f64);
            // C_a x^{2(J-l)} + C_t x^{2(l-1)}
            let ln_terms = |l: usize| {
                let l = l as f64;
                ln_sum_exp(&[
                    ca.ln() + 2.0 * (jf - l) * ln_x,
                    ct.ln() + 2.0 * (l - 1.0) * ln_x,
                ])
            };
            let y_inv2 = (2.0 * (1.0 - jf) * ln_x).exp();
            let y_inv = (1.0 - jf) * ln_x;
            let boosted = p.tx_power + na * p.amp_power;
            let ln_lead = 2.0 * na.ln() + p.tx_power.ln() + p.amp_power.ln()
                - boosted.ln()
                - 2.0 * np.ln();
            let ln_term_j = ln_sum_exp(&[ca.ln(), ct.ln() + 2.0 * (jf - 1.0) * ln_x, s2.ln()]);
            RatioReport::Wit(WitRatios {
                l_star,
                l_mid,
                exact_mid: (ln_star - ln_snr(s, l_mid as f64)).exp(),
                bound_mid: (ln_snr(s, jf) - ln_snr(s, l_mid as f64)).exp(),
                limit_mid: (ln_terms(l_mid) - ln_terms(l_star)).exp(),
                bound_limit_mid: y_inv.exp() * (1.0 + (ca - ca * y_inv2) / (ca * y_inv2 + ct)),
                exact_all_pirs: (ln_star - ln_all_pirs(s, Mode::Wit)).exp(),
                bound_all_pirs: (ln_lead - ln_term_j).exp(),
                limit_all_pirs: (ln_lead - ln_terms(l_star)).exp(),
            })
        }
        Mode::Wpt => {
            let ln_best = ln_power(s, jf);
            let y = x.powf(jf - 1.0);
            let rho1 = s2 * ct * y * (1.0 - y) * (1.0 - na)
                / (ct * ct * na * y.powi(3) + ct * s2 * y * (na + y) + s2 * s2);
            let x2 = y * y;
            let rho2 = s2 * (1.0 - na) / (ct * na * x2 + na * s2);
            let ku2 = lb.kappa_user * lb.kappa_user;
            let kb2 = lb.kappa_bs * lb.kappa_bs;
            let ln_limit_p = (ca * na).ln()
                - (2.0 * jf * np.ln()
                    + 2.0 * (jf - 1.0) * lb.kappa_irs.ln()
                    + (ct * ku2 + ca * p.bs_antennas as f64 * kb2).ln());
            let limit_mid = ((1.0 - jf) * ln_x).exp();
            let limit_all_pirs = ln_limit_p.exp();
            RatioReport::Wpt(WptRatios {
                l_mid,
                exact_mid: (ln_best - ln_power(s, l_mid as f64)).exp(),
                rho1,
                formula_mid: limit_mid * (1.0 + rho1),
                limit_mid,
                exact_all_pirs: (ln_best - ln_all_pirs(s, Mode::Wpt)).exp(),
                rho2,
                formula_all_pirs: limit_all_pirs * (1.0 + rho2),
                limit_all_pirs,
            })
        }
    }
}

/// Parameter grid for checking the closed-form placements against exhaustive
/// search: `J = 1..=9`, `N_p` log-spaced over `2..=1024`, and `P_a`, `P_t`,
/// `N_a` at `-20`, `0` and `+20` dB around `base`. Points with `N_p κ_I >= 1`
/// are dropped.
pub fn proposition_grid(base: &SystemParams) -> Vec<SystemParams> {
    let mut nps: Vec<usize> = (0..12)
        .map(|i| (2f64 * 512f64.powf(i as f64 / 11.0)).round() as usize)
        .collect();
    nps.dedup();
    let factors = [0.01, 1.0, 100.0];
    let mut out = Vec::new();
    for j in 1..=9 {
        for &np in &nps {
            for fa in factors {
                for ft in factors {
                    for fn_ in factors {
                        let na = ((base.active_elements as f64 * fn_).round() as usize).max(1);
                        let p = SystemParams {
                            irs_count: j,
                            amp_power: base.amp_power * fa,
                            tx_power: base.tx_power * ft,
                            ..base.clone()
                        }
                        .with_passive_elements(np)
                        .with_active_elements(na);
                        if np as f64 * p.hop_gain(p.irs_distance) < 1.0 {
                            out.push(p);
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub mode: Mode,
    pub irs_count: usize,
    pub passive_elements: usize,
    pub active_elements: usize,
    pub closed_form_l: usize,
    pub brute_force_l: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PropositionReport {
    pub checked: usize,
    pub case_counts: [usize; 3],
    pub mismatches: Vec<Mismatch>,
}

/// Compares both closed-form placements with exhaustive search on every
/// parameter set. Sets that fail validation are skipped.
pub fn check_propositions(grid: &[SystemParams]) -> PropositionReport {
    let mut report = PropositionReport::default();
    for p in grid {
        let Ok(s) = crate::params::Scenario::new(p.clone()) else {
            continue;
        };
        report.checked += 1;
        for mode in [Mode::Wit, Mode::Wpt] {
            let sol = optimal_index(&s, mode);
            match sol.case {
                CaseLabel::CaseI => report.case_counts[0] += 1,
                CaseLabel::CaseII => report.case_counts[1] += 1,
                CaseLabel::CaseIII => report.case_counts[2] += 1,
                _ => {}
            }
            if !sol.brute_force_agrees {
                report.mismatches.push(Mismatch {
                    mode,
                    irs_count: p.irs_count,
                    passive_elements: p.passive_elements,
                    active_elements: p.active_elements,
                    closed_form_l: sol.l_star,
                    brute_force_l: sol.brute_force_l,
                });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{power_closed, snr_closed};
    use approx::assert_relative_eq;

    fn scenario(np: usize) -> Scenario {
        Scenario::new(SystemParams::default().with_passive_elements(np)).unwrap()
    }

    #[test]
    fn single_irs() {
        let s = Scenario::new(SystemParams {
            irs_count: 1,
            ..SystemParams::default()
        })
        .unwrap();
        for mode in [Mode::Wit, Mode::Wpt] {
            assert_eq!(brute_force_index(&s, mode).l_star, 1);
            assert_eq!(optimal_index(&s, mode).l_star, 1);
        }
    }

    #[test]
    fn default_wit_at_100() {
        let s = scenario(100);
        let sol = optimal_index_wit(&s);
        assert_eq!(sol.case, CaseLabel::CaseI);
        assert_eq!(sol.l_star, 5);
        assert!(sol.brute_force_agrees);
        // l̃ = 4 + ln(Ca/Ct) / (2 ln((100 κ_I)²)) = 4.6136...
        assert_relative_eq!(sol.l_tilde.unwrap(), 4.613_6, epsilon = 1e-3);
        assert_eq!(brute_force_index(&s, Mode::Wit).l_star, 5);
    }

    #[test]
    fn default_wit_boundary() {
        let s = scenario(100);
        assert_relative_eq!(wit_boundary_threshold(&s), 821.626_184_872_844_6, max_relative = 1e-9);
        for np in [822, 900, 1200, 1412] {
            let sol = optimal_index_wit(&scenario(np));
            assert_eq!(sol.l_star, 7, "np = {np}");
            assert!(sol.brute_force_agrees);
        }
    }

    #[test]
    fn equal_composites_pick_middle() {
        // d_U = d_B so C_a = C_t iff P_a N_a = P_t M.
        let p = SystemParams {
            tx_power: 1.0,
            amp_power: 1.0,
            ..SystemParams::default()
        }
        .with_active_elements(10);
        let s = Scenario::new(p).unwrap();
        let sol = optimal_index_wit(&s);
        assert_eq!(sol.case, CaseLabel::CaseII);
        assert_eq!(sol.l_star, 4);
        assert!(sol.brute_force_agrees);
    }

    #[test]
    fn case_three_mirrors_case_one() {
        let p = SystemParams {
            tx_power: 1e-6,
            amp_power: 1.0,
            ..SystemParams::default()
        };
        let s = Scenario::new(p.clone()).unwrap();
        let sol = optimal_index_wit(&s);
        assert_eq!(sol.case, CaseLabel::CaseIII);
        assert!(sol.l_star <= 4);
        assert!(sol.brute_force_agrees);
        let big = Scenario::new(p.with_passive_elements(1400)).unwrap();
        let t = wit_boundary_threshold(&big);
        assert!(1400.0 >= t);
        assert_eq!(optimal_index_wit(&big).l_star, 1);
    }

    #[test]
    fn fallback_outside_decreasing_regime() {
        let s = scenario(2000);
        let sol = optimal_index_wit(&s);
        assert_eq!(sol.case, CaseLabel::BruteForceFallback);
        assert!(sol.brute_force_agrees);
        let sol = optimal_index_wpt(&s);
        assert_eq!(sol.case, CaseLabel::BruteForceFallback);
        assert_eq!(sol.l_star, brute_force_index(&s, Mode::Wpt).l_star);
    }

    #[test]
    fn wpt_always_last() {
        for np in [4, 16, 64, 256, 1000] {
            let s = scenario(np);
            let sol = optimal_index_wpt(&s);
            assert_eq!(sol.l_star, 7);
            assert_eq!(sol.case, CaseLabel::Final);
            assert!(sol.brute_force_agrees);
            assert_relative_eq!(sol.objective.value, power_closed(&s, 7).unwrap(), max_relative = 1e-14);
        }
    }

    #[test]
    fn middle_scheme() {
        assert_eq!(middle_index(7), 4);
        assert_eq!(middle_index(6), 3);
        assert_eq!(middle_index(1), 1);
        let s = scenario(100);
        let mid = scheme_middle(&s, Mode::Wit);
        assert_eq!(mid.l, 4);
        assert!(mid.value <= optimal_index_wit(&s).objective.value);
        assert!(scheme_middle(&s, Mode::Wpt).value < power_closed(&s, 7).unwrap());
    }

    #[test]
    fn all_pirs_unit_gain_single_irs() {
        // J = 1 and N_p κ_I = 1: γ_P = (P_t + N_a P_a) M κ_B² κ_U² N_p² / σ²
        let p = SystemParams {
            irs_count: 1,
            ref_path_gain: 1e-4,
            irs_distance: 1.0,
            ..SystemParams::default()
        };
        let s = Scenario::new(p.clone()).unwrap();
        let lb = s.budget();
        let want = (p.tx_power + 150.0 * p.amp_power)
            * 10.0
            * lb.kappa_bs.powi(2)
            * lb.kappa_user.powi(2)
            * 1e4
            / p.noise_power;
        assert_relative_eq!(scheme_all_pirs(&s, Mode::Wit), want, max_relative = 1e-12);
    }

    #[test]
    fn hybrid_beats_all_passive_only_for_small_arrays() {
        let small = scenario(16);
        assert!(optimal_index_wit(&small).objective.value > scheme_all_pirs(&small, Mode::Wit));
        let large = scenario(1400);
        assert!(optimal_index_wit(&large).objective.value < scheme_all_pirs(&large, Mode::Wit));
    }

    #[test]
    fn crossover_formula() {
        let s = scenario(100);
        assert_relative_eq!(wpt_crossover_np(&s), 1_112.799_418_124_055_8, max_relative = 1e-9);

        // κ_I^{(1-J)/J}: doubling 1/κ_I scales by 2^{(J-1)/J}
        let p = SystemParams {
            irs_distance: 20.0,
            ..SystemParams::default()
        };
        let far = Scenario::new(p).unwrap();
        assert_relative_eq!(
            wpt_crossover_np(&far) / wpt_crossover_np(&s),
            2f64.powf(6.0 / 7.0),
            max_relative = 1e-12
        );

        let tiny = Scenario::new(SystemParams::default().with_active_elements(1)).unwrap();
        assert!(wpt_crossover_np(&tiny) < wpt_crossover_np(&s));
    }

    #[test]
    fn ratio_formulas_match_exact_ratios() {
        for np in [10, 100, 500, 1300] {
            let s = scenario(np);
            let RatioReport::Wpt(r) = ratio_diagnostics(&s, Mode::Wpt) else {
                panic!()
            };
            assert_relative_eq!(r.formula_mid, r.exact_mid, max_relative = 1e-10);
            assert_relative_eq!(r.formula_all_pirs, r.exact_all_pirs, max_relative = 1e-10);
            let RatioReport::Wit(w) = ratio_diagnostics(&s, Mode::Wit) else {
                panic!()
            };
            assert!(w.exact_mid >= 1.0);
            assert!(w.exact_mid >= w.bound_mid * (1.0 - 1e-12));
            assert!(w.exact_all_pirs >= w.bound_all_pirs * (1.0 - 1e-12));
            let direct = snr_closed(&s, w.l_star).unwrap() / scheme_all_pirs(&s, Mode::Wit);
            assert_relative_eq!(w.exact_all_pirs, direct, max_relative = 1e-10);
        }
    }

    #[test]
    fn ratio_limits_with_vanishing_noise() {
        let p = SystemParams {
            noise_power: 1e-40,
            ..SystemParams::default()
        }
        .with_passive_elements(300);
        let s = Scenario::new(p).unwrap();
        let RatioReport::Wpt(r) = ratio_diagnostics(&s, Mode::Wpt) else {
            panic!()
        };
        let x = s.budget().np_kappa_irs;
        assert_relative_eq!(r.exact_mid, x.powi(-6), max_relative = 1e-9);
        assert_relative_eq!(r.exact_all_pirs, r.limit_all_pirs, max_relative = 1e-9);
        let RatioReport::Wit(w) = ratio_diagnostics(&s, Mode::Wit) else {
            panic!()
        };
        assert_relative_eq!(w.exact_mid, w.limit_mid, max_relative = 1e-9);
        assert_relative_eq!(w.bound_mid, w.bound_limit_mid, max_relative = 1e-9);
        assert_relative_eq!(w.exact_all_pirs, w.limit_all_pirs, max_relative = 1e-9);
    }

    #[test]
    fn single_irs_ratio_is_one() {
        let s = Scenario::new(SystemParams {
            irs_count: 1,
            ..SystemParams::default()
        })
        .unwrap();
        let RatioReport::Wpt(r) = ratio_diagnostics(&s, Mode::Wpt) else {
            panic!()
        };
        assert_eq!(r.exact_mid, 1.0);
        assert_eq!(r.formula_mid, 1.0);
    }

    #[test]
    fn grid_is_large_and_agrees() {
        let grid = proposition_grid(&SystemParams::default());
        assert!(grid.len() >= 500);
        let report = check_propositions(&grid);
        assert_eq!(report.checked, grid.len());
        assert!(report.mismatches.is_empty(), "{:?}", &report.mismatches[..report.mismatches.len().min(5)]);
        assert!(report.case_counts[0] > 0 && report.case_counts[2] > 0);
    }

    #[test]
    fn wit_optimum_in_second_half_for_case_one() {
        for np in [2, 10, 50, 100, 400, 821] {
            let s = scenario(np);
            let sol = optimal_index_wit(&s);
            assert_eq!(sol.case, CaseLabel::CaseI);
            assert!(sol.l_star >= 4 && sol.l_star <= 7, "np = {np}");
        }
    }
}
