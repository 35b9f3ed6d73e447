//! Two-slot wireless-powered relaying and jamming.
//!
//! Slot 1: the H-AP transmits. The helping node (HN) sends a fraction γ of
//! its received power to the harvester and `1 - γ` to the information
//! receiver. Slot 2 has the same length. The HN spends everything it
//! harvested: a fraction β on AN aimed at the ER and `1 - β` on forwarding
//! the slot-1 message to the IN.
//!
//! Modelling conventions:
//! - The ER overhears only the slot-2 transmission.
//! - When the HN does not relay (β = 1) the H-AP uses slot 2 for a direct
//!   transmission to the IN while the HN jams. This is the harvest-then-jam
//!   mode.
//! - The IN shares the AN key, so it cancels AN from both the H-AP and the HN.
//! - DF helpers know the key and cancel the H-AP's AN (Type-I). AF helpers
//!   do not decode and see it as interference (Type-II).
//! - The direct H-AP to IN link is not combined with the relayed signal.

use rayon::prelude::*;

use crate::error::{ensure_non_negative, ensure_unit_interval, Error, Result};
use crate::optim;
use crate::swipt_siso::{secrecy_rate, ReceiverType, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelayProtocol {
    AmplifyForward,
    DecodeForward,
    /// The HN only harvests and jams.
    None,
}

impl RelayProtocol {
    pub fn label(&self) -> &'static str {
        match self {
            RelayProtocol::AmplifyForward => "af",
            RelayProtocol::DecodeForward => "df",
            RelayProtocol::None => "none",
        }
    }
}

/// HN receive split γ (harvested fraction), transmit split β (jamming
/// fraction) and relaying protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelperSchedule {
    gamma: f64,
    beta: f64,
    protocol: RelayProtocol,
}

impl HelperSchedule {
    pub fn new(gamma: f64, beta: f64, protocol: RelayProtocol) -> Result<Self> {
        ensure_unit_interval("HelperSchedule::new", "gamma", gamma)?;
        ensure_unit_interval("HelperSchedule::new", "beta", beta)?;
        if protocol == RelayProtocol::None && beta != 1.0 {
            return Err(Error::domain(
                "HelperSchedule::new",
                format!("protocol none requires beta = 1, got {beta}"),
            ));
        }
        Ok(Self {
            gamma,
            beta,
            protocol,
        })
    }

    /// Jamming-only helper (β = 1, no relaying).
    pub fn jam_only(gamma: f64) -> Result<Self> {
        Self::new(gamma, 1.0, RelayProtocol::None)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn protocol(&self) -> RelayProtocol {
        self.protocol
    }
}

/// Power gains of the relay network. `g_ah`: H-AP to HN, `g_hi`: HN to IN,
/// `g_he`: HN to ER, `g_ai`: H-AP to IN, `g_ae`: H-AP to ER.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayTopology {
    pub g_ah: f64,
    pub g_hi: f64,
    pub g_he: f64,
    pub g_ai: f64,
    pub g_ae: f64,
}

impl RelayTopology {
    pub fn new(g_ah: f64, g_hi: f64, g_he: f64, g_ai: f64, g_ae: f64) -> Result<Self> {
        for (name, g) in [
            ("g_ah", g_ah),
            ("g_hi", g_hi),
            ("g_he", g_he),
            ("g_ai", g_ai),
            ("g_ae", g_ae),
        ] {
            ensure_non_negative("RelayTopology::new", name, g)?;
        }
        Ok(Self {
            g_ah,
            g_hi,
            g_he,
            g_ai,
            g_ae,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperationMode {
    HarvestThenJam,
    HarvestThenRelay,
    HarvestThenRelayAndJam,
}

impl OperationMode {
    pub fn label(&self) -> &'static str {
        match self {
            OperationMode::HarvestThenJam => "harvest_then_jam",
            OperationMode::HarvestThenRelay => "harvest_then_relay",
            OperationMode::HarvestThenRelayAndJam => "harvest_then_relay_and_jam",
        }
    }
}

pub fn classify_mode(s: &HelperSchedule) -> Result<OperationMode> {
    let (gamma, beta) = (s.gamma, s.beta);
    let interior = |x: f64| x > 0.0 && x < 1.0;
    let reason = if beta == 1.0 && gamma == 1.0 {
        return Ok(OperationMode::HarvestThenJam);
    } else if beta == 0.0 && interior(gamma) {
        return Ok(OperationMode::HarvestThenRelay);
    } else if interior(gamma) && interior(beta) {
        return Ok(OperationMode::HarvestThenRelayAndJam);
    } else if gamma == 0.0 {
        "gamma = 0 harvests no energy"
    } else if gamma == 1.0 {
        "gamma = 1 receives no information, so only beta = 1 is a mode"
    } else {
        "beta = 1 with gamma < 1 receives information that is never relayed"
    };
    Err(Error::Classification {
        gamma,
        beta,
        reason,
    })
}

/// Average HN transmit power available in slot 2: `eta * gamma * P * g_ah`.
pub fn hn_harvest(params: &SystemParams, gamma: f64, g_ah: f64) -> f64 {
    params.efficiency() * gamma * params.power() * g_ah
}

/// Slot-2 power split of the HN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotTwoBudget {
    pub harvested: f64,
    pub relay: f64,
    pub jamming: f64,
}

impl SlotTwoBudget {
    /// `harvested - (relay + jamming)`; never negative.
    pub fn slack(&self) -> f64 {
        self.harvested - (self.relay + self.jamming)
    }
}

pub fn slot_two_budget(params: &SystemParams, s: &HelperSchedule, g_ah: f64) -> SlotTwoBudget {
    let harvested = hn_harvest(params, s.gamma, g_ah);
    let jamming = s.beta * harvested;
    // the relay share is what is left after jamming, nudged down when
    // rounding would push the sum past the harvest
    let mut relay = harvested - jamming;
    while relay > 0.0 && relay + jamming > harvested {
        relay = relay.next_down();
    }
    SlotTwoBudget {
        harvested,
        relay,
        jamming,
    }
}

/// First-hop SINR at the HN's information branch.
pub fn hn_receive_snr(params: &SystemParams, gamma: f64, g_ah: f64, rx: ReceiverType) -> f64 {
    let (p, a, n) = (params.power(), params.alpha(), params.noise());
    let signal = (1.0 - gamma) * p * (1.0 - a) * g_ah;
    match rx {
        ReceiverType::TypeI => signal / n,
        ReceiverType::TypeII => signal / ((1.0 - gamma) * p * a * g_ah + n),
    }
}

/// End-to-end SNR of a two-hop AF cascade.
pub fn af_cascade_snr(first: f64, second: f64) -> f64 {
    if first == 0.0 || second == 0.0 {
        return 0.0;
    }
    first * second / (first + second + 1.0)
}

/// Second-hop SNR at the IN and SINR at the ER for the HN's forwarded signal.
pub fn second_hop_sinrs(params: &SystemParams, topo: &RelayTopology, s: &HelperSchedule) -> (f64, f64) {
    let budget = slot_two_budget(params, s, topo.g_ah);
    let n = params.noise();
    let legit = budget.relay * topo.g_hi / n;
    let eve = budget.relay * topo.g_he / (budget.jamming * topo.g_he + n);
    (legit, eve)
}

fn ensure_protocol(op: &'static str, s: &HelperSchedule, want: RelayProtocol) -> Result<()> {
    if s.protocol == want {
        Ok(())
    } else {
        Err(Error::domain(
            op,
            format!("schedule protocol is {}, expected {}", s.protocol.label(), want.label()),
        ))
    }
}

/// `1/2 log2(1 + min(gamma_1, gamma_2))`: DF rate without secrecy.
pub fn df_legitimate_rate(params: &SystemParams, topo: &RelayTopology, s: &HelperSchedule) -> f64 {
    let first = hn_receive_snr(params, s.gamma, topo.g_ah, ReceiverType::TypeI);
    let (second, _) = second_hop_sinrs(params, topo, s);
    0.5 * first.min(second).log2_1p()
}

pub fn df_secrecy_rate(params: &SystemParams, topo: &RelayTopology, s: &HelperSchedule) -> Result<f64> {
    ensure_protocol("df_secrecy_rate", s, RelayProtocol::DecodeForward)?;
    let first = hn_receive_snr(params, s.gamma, topo.g_ah, ReceiverType::TypeI);
    let (second, eve) = second_hop_sinrs(params, topo, s);
    Ok(0.5 * secrecy_rate(first.min(second), eve))
}

pub fn af_secrecy_rate(params: &SystemParams, topo: &RelayTopology, s: &HelperSchedule) -> Result<f64> {
    ensure_protocol("af_secrecy_rate", s, RelayProtocol::AmplifyForward)?;
    let first = hn_receive_snr(params, s.gamma, topo.g_ah, ReceiverType::TypeII);
    let (second, second_eve) = second_hop_sinrs(params, topo, s);
    let legit = af_cascade_snr(first, second);
    let eve = af_cascade_snr(first, second_eve);
    Ok(0.5 * secrecy_rate(legit, eve))
}

/// Slot-2 secrecy rate of the H-AP's direct transmission to the IN while the
/// HN spends `beta` of its harvest on jamming the ER.
pub fn direct_jam_secrecy_rate(params: &SystemParams, topo: &RelayTopology, s: &HelperSchedule) -> f64 {
    let (p, a, n) = (params.power(), params.alpha(), params.noise());
    let budget = slot_two_budget(params, s, topo.g_ah);
    let legit = p * (1.0 - a) * topo.g_ai / n;
    let eve = p * (1.0 - a) * topo.g_ae / (p * a * topo.g_ae + budget.jamming * topo.g_he + n);
    0.5 * secrecy_rate(legit, eve)
}

/// Secrecy rate the schedule delivers: the direct link protected by jamming
/// when β = 1, otherwise the relayed link of the schedule's protocol.
pub fn schedule_secrecy_rate(params: &SystemParams, topo: &RelayTopology, s: &HelperSchedule) -> f64 {
    if s.beta == 1.0 {
        return direct_jam_secrecy_rate(params, topo, s);
    }
    match s.protocol {
        RelayProtocol::DecodeForward => df_secrecy_rate(params, topo, s),
        RelayProtocol::AmplifyForward => af_secrecy_rate(params, topo, s),
        RelayProtocol::None => unreachable!("protocol none always has beta = 1"),
    }
    .expect("protocol checked above")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleOptimum {
    pub schedule: HelperSchedule,
    pub rate: f64,
    pub evaluations: usize,
    /// Smallest `harvested - spent` over every evaluated schedule.
    pub min_budget_slack: f64,
}

/// Exhaustive (γ, β) grid search at spacing `step`, boundaries included.
///
/// Rows of the grid are evaluated in parallel and merged in grid order; ties
/// go to the smaller γ, then the smaller β. For [`RelayProtocol::None`] only
/// β = 1 is searched.
pub fn optimize_schedule(
    params: &SystemParams,
    topo: &RelayTopology,
    protocol: RelayProtocol,
    step: f64,
) -> Result<ScheduleOptimum> {
    let gammas = optim::grid_points(0.0, 1.0, step)
        .map_err(|_| Error::domain("optimize_schedule", format!("step = {step} must be > 0")))?;
    let betas = match protocol {
        RelayProtocol::None => vec![1.0],
        _ => gammas.clone(),
    };

    let rows: Vec<(f64, HelperSchedule, f64)> = gammas
        .par_iter()
        .map(|&gamma| {
            let mut best: Option<(f64, HelperSchedule)> = None;
            let mut slack = f64::INFINITY;
            for &beta in &betas {
                let s = HelperSchedule {
                    gamma,
                    beta,
                    protocol,
                };
                slack = slack.min(slot_two_budget(params, &s, topo.g_ah).slack());
                let rate = schedule_secrecy_rate(params, topo, &s);
                if best.is_none_or(|(r, _)| rate > r) {
                    best = Some((rate, s));
                }
            }
            let (rate, s) = best.expect("beta grid is never empty");
            (rate, s, slack)
        })
        .collect();

    let mut best = rows[0];
    let mut min_slack = f64::INFINITY;
    for row in &rows {
        min_slack = min_slack.min(row.2);
        if row.0 > best.0 {
            best = *row;
        }
    }
    Ok(ScheduleOptimum {
        schedule: best.1,
        rate: best.0,
        evaluations: gammas.len() * betas.len(),
        min_budget_slack: min_slack,
    })
}

trait Log2OnePlus {
    fn log2_1p(self) -> f64;
}

impl Log2OnePlus for f64 {
    fn log2_1p(self) -> f64 {
        self.ln_1p() / std::f64::consts::LN_2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(alpha: f64) -> SystemParams {
        SystemParams::new(1.0, 0.5, 1e-11, alpha).unwrap()
    }

    fn midway() -> RelayTopology {
        // H-AP -- 10 m -- HN -- 10 m -- IN, ER 8 m from the HN, unit reference gain
        RelayTopology::new(1e-3, 1e-3, 8f64.powi(-3), 20f64.powi(-3), 2f64.powi(-3)).unwrap()
    }

    fn sched(g: f64, b: f64, p: RelayProtocol) -> HelperSchedule {
        HelperSchedule::new(g, b, p).unwrap()
    }

    #[test]
    fn classify_examples() {
        use OperationMode::*;
        let df = RelayProtocol::DecodeForward;
        assert_eq!(classify_mode(&sched(1.0, 1.0, df)).unwrap(), HarvestThenJam);
        assert_eq!(classify_mode(&sched(0.5, 0.0, df)).unwrap(), HarvestThenRelay);
        assert_eq!(classify_mode(&sched(0.5, 0.5, df)).unwrap(), HarvestThenRelayAndJam);
        for (g, b) in [(0.0, 0.5), (1.0, 0.3), (0.4, 1.0)] {
            let e = classify_mode(&sched(g, b, df)).unwrap_err();
            assert!(matches!(e, Error::Classification { .. }), "{e}");
        }
        assert!(classify_mode(&sched(0.0, 0.5, df))
            .unwrap_err()
            .to_string()
            .contains("gamma = 0"));
    }

    #[test]
    fn schedule_validation() {
        assert!(HelperSchedule::new(1.1, 0.0, RelayProtocol::DecodeForward).is_err());
        assert!(HelperSchedule::new(0.5, -0.1, RelayProtocol::DecodeForward).is_err());
        assert!(HelperSchedule::new(0.5, 0.5, RelayProtocol::None).is_err());
        assert_eq!(HelperSchedule::jam_only(0.7).unwrap().beta(), 1.0);
    }

    #[test]
    fn harvest_examples() {
        assert_eq!(hn_harvest(&params(0.0), 0.0, 0.1), 0.0);
        assert!((hn_harvest(&params(0.0), 1.0, 0.1) - 0.05).abs() < 1e-17);
        let b = slot_two_budget(&params(0.0), &sched(0.6, 0.3, RelayProtocol::DecodeForward), 0.1);
        assert_eq!(b.relay + b.jamming, b.harvested);
    }

    #[test]
    fn receive_snr_examples() {
        let p = params(0.3);
        assert_eq!(hn_receive_snr(&p, 1.0, 0.1, ReceiverType::TypeI), 0.0);
        assert_eq!(hn_receive_snr(&p, 1.0, 0.1, ReceiverType::TypeII), 0.0);
        let p0 = params(0.0);
        assert_eq!(
            hn_receive_snr(&p0, 0.4, 0.1, ReceiverType::TypeI),
            hn_receive_snr(&p0, 0.4, 0.1, ReceiverType::TypeII)
        );
        // oracle: 0.6 * 1 * 0.7 * 0.1 / 1e-11 and 0.042 / (0.6 * 0.3 * 0.1 + 1e-11)
        assert!((hn_receive_snr(&p, 0.4, 0.1, ReceiverType::TypeI) - 4.2e9).abs() < 1e-3);
        let t2 = hn_receive_snr(&p, 0.4, 0.1, ReceiverType::TypeII);
        assert!((t2 - 0.042 / (0.018 + 1e-11)).abs() < 1e-12);
    }

    #[test]
    fn df_examples() {
        let t = midway();
        let p = params(0.0);
        assert_eq!(df_secrecy_rate(&p, &t, &sched(0.5, 1.0, RelayProtocol::DecodeForward)).unwrap(), 0.0);

        let mut no_eve = t;
        no_eve.g_he = 0.0;
        let s = sched(0.5, 0.2, RelayProtocol::DecodeForward);
        let r = df_secrecy_rate(&p, &no_eve, &s).unwrap();
        assert!((r - df_legitimate_rate(&p, &no_eve, &s)).abs() < 1e-15);

        // oracle for the midway geometry at gamma = 0.5, beta = 0.2
        let ph: f64 = 0.5 * 0.5 * 1.0 * 1e-3;
        let g1: f64 = 0.5 * 1.0 * 1e-3 / 1e-11;
        let g2 = 0.8 * ph * 1e-3 / 1e-11;
        let ghe = 8f64.powi(-3);
        let ge = 0.8 * ph * ghe / (0.2 * ph * ghe + 1e-11);
        let expected = 0.5 * ((1.0 + g1.min(g2)).log2() - (1.0 + ge).log2());
        assert!((df_secrecy_rate(&p, &t, &s).unwrap() - expected).abs() < 1e-12);

        assert!(df_secrecy_rate(&p, &t, &sched(0.5, 0.2, RelayProtocol::AmplifyForward)).is_err());
    }

    #[test]
    fn af_examples() {
        assert_eq!(af_cascade_snr(0.0, 5.0), 0.0);
        let g2 = 3.7;
        assert!((af_cascade_snr(1e6 * g2, g2) - g2).abs() <= 0.01 * g2);

        let t = midway();
        let p = params(0.2);
        let s = sched(0.5, 0.2, RelayProtocol::AmplifyForward);
        let ph: f64 = 0.5 * 0.5 * 1.0 * 1e-3;
        let g1 = 0.5 * 0.8 * 1e-3 / (0.5 * 0.2 * 1e-3 + 1e-11);
        let g2 = 0.8 * ph * 1e-3 / 1e-11;
        let ghe = 8f64.powi(-3);
        let g2e = 0.8 * ph * ghe / (0.2 * ph * ghe + 1e-11);
        let legit = g1 * g2 / (g1 + g2 + 1.0);
        let eve = g1 * g2e / (g1 + g2e + 1.0);
        let expected = (0.5 * ((1.0 + legit).log2() - (1.0 + eve).log2())).max(0.0);
        assert!((af_secrecy_rate(&p, &t, &s).unwrap() - expected).abs() < 1e-12);
        assert!(af_secrecy_rate(&p, &t, &sched(0.5, 0.2, RelayProtocol::DecodeForward)).is_err());
        assert_eq!(af_secrecy_rate(&p, &t, &sched(0.0, 0.2, RelayProtocol::AmplifyForward)).unwrap(), 0.0);
    }

    #[test]
    fn jam_only_uses_direct_link() {
        let t = midway();
        let p = params(0.0);
        let s = HelperSchedule::jam_only(1.0).unwrap();
        assert_eq!(schedule_secrecy_rate(&p, &t, &s), direct_jam_secrecy_rate(&p, &t, &s));
        // more jamming never hurts the direct link
        let weak = HelperSchedule::jam_only(0.2).unwrap();
        assert!(direct_jam_secrecy_rate(&p, &t, &s) >= direct_jam_secrecy_rate(&p, &t, &weak));
    }

    #[test]
    fn optimizer_budget_and_refined_agreement() {
        let t = midway();
        let p = params(0.0);
        let coarse = optimize_schedule(&p, &t, RelayProtocol::DecodeForward, 0.02).unwrap();
        assert!(coarse.min_budget_slack >= 0.0);
        let fine = optimize_schedule(&p, &t, RelayProtocol::DecodeForward, 0.01).unwrap();
        assert!((coarse.schedule.gamma() - fine.schedule.gamma()).abs() <= 0.02 + 1e-12);
        assert!((coarse.schedule.beta() - fine.schedule.beta()).abs() <= 0.02 + 1e-12);
        assert!(fine.rate >= coarse.rate);
        assert!(optimize_schedule(&p, &t, RelayProtocol::DecodeForward, 0.0).is_err());
        let jam = optimize_schedule(&p, &t, RelayProtocol::None, 0.05).unwrap();
        assert_eq!(jam.schedule.beta(), 1.0);
        assert_eq!(jam.evaluations, 21);
    }

    proptest! {
        #[test]
        fn relay_rate_bounds(gamma in 0f64..=1.0, beta in 0f64..=1.0, alpha in 0f64..=1.0,
                             gah in 1e-8f64..1e-1, ghi in 1e-8f64..1e-1, ghe in 0f64..1e-1) {
            let p = params(alpha);
            let t = RelayTopology::new(gah, ghi, ghe, 1e-4, 1e-1).unwrap();
            let df = sched(gamma, beta, RelayProtocol::DecodeForward);
            let g1 = hn_receive_snr(&p, gamma, gah, ReceiverType::TypeI);
            let (g2, _) = second_hop_sinrs(&p, &t, &df);
            let legit = df_legitimate_rate(&p, &t, &df);
            prop_assert!(legit <= 0.5 * g1.log2_1p() && legit <= 0.5 * g2.log2_1p());
            let g1af = hn_receive_snr(&p, gamma, gah, ReceiverType::TypeII);
            prop_assert!(af_cascade_snr(g1af, g2) <= g1af.min(g2));
            prop_assert!(df_secrecy_rate(&p, &t, &df).unwrap() >= 0.0);
            let af = sched(gamma, beta, RelayProtocol::AmplifyForward);
            prop_assert!(af_secrecy_rate(&p, &t, &af).unwrap() >= 0.0);
            prop_assert!(slot_two_budget(&p, &df, gah).slack() >= 0.0);
        }

        #[test]
        fn jamming_lowers_eve_sinr(b1 in 0.01f64..0.98, d in 0.001f64..0.01, gamma in 0.1f64..=1.0) {
            let p = params(0.0);
            let t = midway();
            let (_, e1) = second_hop_sinrs(&p, &t, &sched(gamma, b1, RelayProtocol::DecodeForward));
            let (_, e2) = second_hop_sinrs(&p, &t, &sched(gamma, b1 + d, RelayProtocol::DecodeForward));
            prop_assert!(e2 < e1);
        }
    }
}
