//! Feasibility of deadline scheduling with per-slot processor bounds.
//!
//! An instance with bounds `l_t <= vol(t) <= m_t` is feasible exactly when the
//! maximum flow of its [`FlowNetwork`] equals the total volume `P`. When it
//! falls short, a minimum cut names a slot set with positive deficiency (if
//! the relief node lies on the sink side) or whose complement has positive
//! excess (if it lies on the source side). Certificates are re-checked with
//! the formulas in [`crate::volume`] before they are returned.

mod dinic;
mod network;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use dinic::{EdgeId, FlowGraph};
pub use network::{max_flow, BuildIssue, FlowNetwork, MaxFlow, TimeInterval};

use crate::error::{Error, Result};
use crate::model::{BoundProfile, Instance};
use crate::volume::{self, SlotSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Deficiency,
    Excess,
}

/// A slot set proving infeasibility.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutCertificate {
    pub kind: CertificateKind,
    #[serde(rename = "Q")]
    pub slots: SlotSet,
    pub value: i64,
}

impl CutCertificate {
    /// Recomputes the deficiency or excess of the witness set.
    pub fn recompute(&self, instance: &Instance, bounds: &BoundProfile) -> i64 {
        match self.kind {
            CertificateKind::Deficiency => volume::deficiency(instance, bounds, &self.slots),
            CertificateKind::Excess => volume::excess(instance, bounds, &self.slots),
        }
    }

    /// True when the recomputed value is positive and matches `value`.
    pub fn verify(&self, instance: &Instance, bounds: &BoundProfile) -> bool {
        let v = self.recompute(instance, bounds);
        v > 0 && v == self.value
    }
}

impl fmt::Display for CutCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            CertificateKind::Deficiency => "deficiency",
            CertificateKind::Excess => "excess",
        };
        write!(f, "{kind} {} on Q = {}", self.value, self.slots)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Feasible,
    Infeasible(CutCertificate),
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible)
    }
}

/// Builds the network for `instance` under `bounds`.
///
/// Bounds that make the network ill-defined surface as errors; a lower-bound
/// total above `P` surfaces as an excess certificate on the whole horizon.
pub fn build_network(instance: &Instance, bounds: &BoundProfile, compressed: bool) -> Result<FlowNetwork> {
    FlowNetwork::build(instance, bounds, compressed).map_err(|issue| match issue {
        BuildIssue::LowerExceedsVolume { .. } => Error::Infeasible(whole_horizon_excess(instance, bounds)),
        BuildIssue::InvertedBounds { slot } => Error::InvalidBounds(format!(
            "lower bound {} exceeds upper bound {} at slot {slot}",
            bounds.lower_at(slot),
            bounds.upper_at(slot)
        )),
        BuildIssue::ShortBounds { bounds, horizon } => {
            Error::InvalidBounds(format!("bounds cover {bounds} slots, horizon has {horizon}"))
        }
    })
}

fn whole_horizon_excess(instance: &Instance, bounds: &BoundProfile) -> CutCertificate {
    let slots = SlotSet::full(bounds.len());
    let value = volume::excess(instance, bounds, &slots);
    CutCertificate {
        kind: CertificateKind::Excess,
        slots,
        value,
    }
}

/// Decides feasibility and, if infeasible, returns a verified certificate.
///
/// Bounds must satisfy `l_t <= m_t` and cover the horizon.
pub fn check(instance: &Instance, bounds: &BoundProfile) -> Result<Verdict> {
    let network = match build_network(instance, bounds, true) {
        Ok(network) => network,
        Err(Error::Infeasible(cert)) => {
            if !cert.verify(instance, bounds) {
                return Err(Error::CertificateVerification(format!("{cert} does not hold")));
            }
            return Ok(Verdict::Infeasible(cert));
        }
        Err(e) => return Err(e),
    };
    let flow = max_flow(&network);
    if flow.value == network.total_volume() {
        return Ok(Verdict::Feasible);
    }
    extract_certificate(instance, bounds, &network, &flow).map(Verdict::Infeasible)
}

/// Fast yes/no check. Bounds with `l_t > m_t` or `sum l_t > P` are infeasible.
pub fn is_feasible(instance: &Instance, bounds: &BoundProfile) -> bool {
    match FlowNetwork::build(instance, bounds, true) {
        Ok(network) => max_flow(&network).value == network.total_volume(),
        Err(BuildIssue::ShortBounds { .. }) => panic!("bounds do not cover the horizon"),
        Err(_) => false,
    }
}

/// Reads a deficiency or excess witness off the min cut of a short flow.
pub fn extract_certificate(
    instance: &Instance,
    bounds: &BoundProfile,
    network: &FlowNetwork,
    flow: &MaxFlow,
) -> Result<CutCertificate> {
    if flow.value >= network.total_volume() {
        return Err(Error::InvariantBroken(
            "certificate requested for a saturating flow".into(),
        ));
    }
    let side = &flow.source_side;
    let on_source = |i: &usize| side[network.interval_node(*i)];
    let intervals = network.intervals();
    let relief_on_source = side[network.relief()];
    let slots: SlotSet = (0..intervals.len())
        .filter(|i| on_source(i) != relief_on_source)
        .flat_map(|i| intervals[i].slots())
        .collect();
    let (kind, value) = if relief_on_source {
        // Witness is Q(S̄), the time nodes on the sink side.
        (CertificateKind::Excess, volume::excess(instance, bounds, &slots))
    } else {
        (
            CertificateKind::Deficiency,
            volume::deficiency(instance, bounds, &slots),
        )
    };
    let cert = CutCertificate { kind, slots, value };
    if value <= 0 {
        return Err(Error::CertificateVerification(format!(
            "{cert} is not positive (flow {} < P = {})",
            flow.value,
            network.total_volume()
        )));
    }
    Ok(cert)
}

/// True when the per-slot and the compressed network have equal max flow.
pub fn equivalent_networks_check(instance: &Instance, bounds: &BoundProfile) -> Result<bool> {
    let per_slot = build_network(instance, bounds, false)?;
    let compressed = build_network(instance, bounds, true)?;
    Ok(max_flow(&per_slot).value == max_flow(&compressed).value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Job;

    fn fixture_a() -> Instance {
        Instance::new(vec![Job::new("j1", 0, 4, 2)], 1, 2).unwrap()
    }

    fn fixture_b() -> Instance {
        Instance::new(vec![Job::new("j1", 0, 1, 2), Job::new("j2", 0, 1, 2)], 2, 1).unwrap()
    }

    fn fixture_inf() -> Instance {
        Instance::new(vec![Job::new("j1", 0, 1, 3)], 1, 0).unwrap()
    }

    fn set(slots: &[usize]) -> SlotSet {
        slots.iter().copied().collect()
    }

    #[test]
    fn feasibility_examples() {
        assert!(is_feasible(&fixture_a(), &BoundProfile::uniform(5, 0, 1)));
        assert!(!is_feasible(&fixture_inf(), &BoundProfile::uniform(2, 0, 1)));
        assert!(is_feasible(&fixture_b(), &BoundProfile::uniform(2, 2, 2)));
    }

    #[test]
    fn fixture_inf_flow_value() {
        let net = build_network(&fixture_inf(), &BoundProfile::uniform(2, 0, 1), true).unwrap();
        assert_eq!(max_flow(&net).value, 2);
    }

    #[test]
    fn certificate_for_fixture_inf() {
        let verdict = check(&fixture_inf(), &BoundProfile::uniform(2, 0, 1)).unwrap();
        assert_eq!(
            verdict,
            Verdict::Infeasible(CutCertificate {
                kind: CertificateKind::Deficiency,
                slots: set(&[0, 1]),
                value: 1
            })
        );
    }

    #[test]
    fn certificate_for_lower_bound_without_jobs() {
        let empty = Instance::new(vec![], 1, 0).unwrap();
        let bounds = BoundProfile::uniform(1, 1, 1);
        let Verdict::Infeasible(cert) = check(&empty, &bounds).unwrap() else {
            panic!("expected infeasible");
        };
        assert_eq!(
            (cert.kind, cert.slots.clone(), cert.value),
            (CertificateKind::Excess, set(&[0]), 1)
        );
        assert!(cert.verify(&empty, &bounds));
    }

    #[test]
    fn certificate_for_fixture_b_with_narrow_slot() {
        let bounds = BoundProfile::from_per_slot(&[0, 0], &[1, 2]).unwrap();
        let Verdict::Infeasible(cert) = check(&fixture_b(), &bounds).unwrap() else {
            panic!("expected infeasible");
        };
        assert_eq!(
            (cert.kind, cert.slots.clone(), cert.value),
            (CertificateKind::Deficiency, set(&[0, 1]), 1)
        );
    }

    #[test]
    fn excess_certificate_from_cut() {
        // Slot 2 demands a busy processor but no job can run there.
        let inst = Instance::new(vec![Job::new("a", 0, 0, 1), Job::new("b", 0, 1, 1)], 1, 0).unwrap();
        let bounds = BoundProfile::from_per_slot(&[1, 0, 1], &[1, 1, 1]).unwrap();
        let Verdict::Infeasible(cert) = check(&inst, &bounds).unwrap() else {
            panic!("expected infeasible");
        };
        assert_eq!(cert.kind, CertificateKind::Excess);
        assert!(cert.verify(&inst, &bounds));
    }

    #[test]
    fn large_lower_bound_short_circuits() {
        let one = Instance::new(vec![Job::new("j", 0, 0, 2)], 8, 0).unwrap();
        let bounds = BoundProfile::uniform(1, 7, 8);
        let Verdict::Infeasible(cert) = check(&one, &bounds).unwrap() else {
            panic!("expected infeasible");
        };
        assert_eq!(cert.kind, CertificateKind::Excess);
        assert_eq!(cert.slots, set(&[0]));
        assert!(!is_feasible(&one, &bounds));
    }

    #[test]
    fn inverted_bounds() {
        let bounds = BoundProfile::from_per_slot(&[2, 0], &[1, 2]).unwrap();
        assert!(!is_feasible(&fixture_b(), &bounds));
        assert!(matches!(check(&fixture_b(), &bounds), Err(Error::InvalidBounds(_))));
    }

    #[test]
    fn networks_agree_on_fixtures() {
        assert!(equivalent_networks_check(&fixture_a(), &BoundProfile::uniform(5, 0, 1)).unwrap());
        assert!(equivalent_networks_check(&fixture_b(), &BoundProfile::uniform(2, 0, 2)).unwrap());
    }
}
