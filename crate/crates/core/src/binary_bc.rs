//! Capacity regions for three binary broadcast channel families —
//! symmetric/symmetric, erasure/erasure, and symmetric/erasure — with
//! optional message side information at one receiver.
//!
//! Conventions: receiver 1 sees the first (stronger or symmetric)
//! component channel, receiver 2 the second. All regions are exact
//! closed-form or parametric characterizations; the symmetric/erasure
//! family splits into three erasure regimes with transcendental
//! thresholds alpha_hat and alpha_tilde.

use crate::error::{Error, Result};
use crate::infotheory::{bconv, binary_entropy, Bits, Probability};
use crate::optim;
use crate::region::Region2D;

/// Channel family and parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BinaryBroadcastSpec {
    /// Two binary symmetric channels, crossovers p1 <= p2 <= 1/2.
    Bsbc(Probability, Probability),
    /// Two binary erasure channels, erasures e1 <= e2.
    Bebc(Probability, Probability),
    /// BSC(p) to receiver 1, BEC(eps) to receiver 2; p <= 1/2.
    BscBec(Probability, Probability),
}

impl BinaryBroadcastSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            BinaryBroadcastSpec::Bsbc(p1, p2) => {
                if p1.value() > p2.value() {
                    return Err(Error::Ordering(format!(
                        "need p1 <= p2, got {} > {}",
                        p1.value(),
                        p2.value()
                    )));
                }
                if p2.value() > 0.5 {
                    return Err(Error::Domain(format!("crossover {} > 1/2", p2.value())));
                }
            }
            BinaryBroadcastSpec::Bebc(e1, e2) => {
                if e1.value() > e2.value() {
                    return Err(Error::Ordering(format!(
                        "need e1 <= e2, got {} > {}",
                        e1.value(),
                        e2.value()
                    )));
                }
            }
            BinaryBroadcastSpec::BscBec(p, _) => {
                if p.value() > 0.5 {
                    return Err(Error::Domain(format!("crossover {} > 1/2", p.value())));
                }
            }
        }
        Ok(())
    }

    /// Point-to-point capacities of the two component channels.
    pub fn channel_capacities(&self) -> (Bits, Bits) {
        match *self {
            BinaryBroadcastSpec::Bsbc(p1, p2) => (
                Bits::new(1.0 - binary_entropy(p1).value()).unwrap(),
                Bits::new(1.0 - binary_entropy(p2).value()).unwrap(),
            ),
            BinaryBroadcastSpec::Bebc(e1, e2) => (
                Bits::new(1.0 - e1.value()).unwrap(),
                Bits::new(1.0 - e2.value()).unwrap(),
            ),
            BinaryBroadcastSpec::BscBec(p, e) => (
                Bits::new(1.0 - binary_entropy(p).value()).unwrap(),
                Bits::new(1.0 - e.value()).unwrap(),
            ),
        }
    }
}

/// Which message, if any, is available as receiver side information.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideInfoMode {
    None,
    /// Message 2 known at receiver 1 (region C1).
    Msg2AtRx1,
    /// Message 1 known at receiver 2 (region C2).
    Msg1AtRx2,
}

/// Erasure regime of the symmetric/erasure family at fixed p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeLabel {
    /// eps in [0, 4p(1-p)]: erasure channel is less noisy.
    ErasureLow,
    /// eps in (4p(1-p), H_b(p)): more capable but not less noisy.
    ErasureMid,
    /// eps in [H_b(p), 1]: time sharing is optimal.
    ErasureHigh,
}

fn hb(p: f64) -> f64 {
    binary_entropy(Probability::new(p).unwrap()).value()
}

fn conv(a: f64, b: f64) -> f64 {
    bconv(Probability::new(a).unwrap(), Probability::new(b).unwrap()).value()
}

pub fn regime_classify(p: Probability, eps: Probability) -> RegimeLabel {
    let (p, e) = (p.value(), eps.value());
    if e <= 4.0 * p * (1.0 - p) {
        RegimeLabel::ErasureLow
    } else if e < hb(p) {
        RegimeLabel::ErasureMid
    } else {
        RegimeLabel::ErasureHigh
    }
}

/// The threshold where the two mid-regime boundary pieces meet: the
/// unique root in (0, 1/2) of
/// 1 - H_b(a*p) + (1-eps) H_b(a) = 1 - eps.
///
/// The left side also touches 1-eps at a = 1/2, so the bisection is
/// bracketed on (0, alpha_tilde], where the function is positive.
pub fn alpha_hat(p: Probability, eps: Probability) -> Result<Probability> {
    let (pv, e) = (p.value(), eps.value());
    if regime_classify(p, eps) != RegimeLabel::ErasureMid {
        return Err(Error::Regime(format!(
            "alpha_hat needs eps in (4p(1-p), H_b(p)); got p={pv}, eps={e}"
        )));
    }
    let at = alpha_tilde(p, eps)?.value();
    let f = |a: f64| 1.0 - hb(conv(a, pv)) + (1.0 - e) * hb(a) - (1.0 - e);
    let root = optim::bisect(&f, 1e-15, at, 200);
    Probability::new(root)
}

/// The unique maximizer in (0, 1/2) of 1 - H_b(a*p) + (1-eps) H_b(a),
/// i.e. the root of
/// (1-2p) log((1 - a*p)/(a*p)) = (1-eps) log((1-a)/a).
pub fn alpha_tilde(p: Probability, eps: Probability) -> Result<Probability> {
    let (pv, e) = (p.value(), eps.value());
    if pv == 0.0 || e <= 4.0 * pv * (1.0 - pv) || e >= 1.0 {
        return Err(Error::Regime(format!(
            "alpha_tilde needs eps in (4p(1-p), 1) and p != 0; got p={pv}, eps={e}"
        )));
    }
    let g = |a: f64| {
        let c = conv(a, pv);
        (1.0 - 2.0 * pv) * ((1.0 - c) / c).log2() - (1.0 - e) * ((1.0 - a) / a).log2()
    };
    let root = optim::bisect(&g, 1e-9, 0.5 - 1e-9, 200);
    Probability::new(root)
}

/// Exact capacity region of the given family, with or without receiver
/// side information.
pub fn capacity_region(spec: BinaryBroadcastSpec, mode: SideInfoMode) -> Result<Region2D> {
    spec.validate()?;
    match spec {
        BinaryBroadcastSpec::Bsbc(p1, p2) => bsbc_region(p1.value(), p2.value(), mode),
        BinaryBroadcastSpec::Bebc(e1, e2) => bebc_region(e1.value(), e2.value(), mode),
        BinaryBroadcastSpec::BscBec(p, e) => bscbec_region(p, e, mode),
    }
}

fn bsbc_region(p1: f64, p2: f64, mode: SideInfoMode) -> Result<Region2D> {
    match mode {
        // side information at the stronger receiver changes nothing:
        // it can decode the coarse message anyway
        SideInfoMode::None | SideInfoMode::Msg2AtRx1 => Region2D::from_parametric(
            |a| (hb(conv(a, p1)) - hb(p1), 1.0 - hb(conv(a, p2))),
            0.0,
            0.5,
        ),
        SideInfoMode::Msg1AtRx2 => {
            let c1 = 1.0 - hb(p1);
            let c2 = 1.0 - hb(p2);
            Region2D::from_pentagon(c1, c2, c1)
        }
    }
}

fn bebc_region(e1: f64, e2: f64, mode: SideInfoMode) -> Result<Region2D> {
    match mode {
        SideInfoMode::None | SideInfoMode::Msg2AtRx1 => {
            Region2D::from_triangle(1.0 - e1, 1.0 - e2)
        }
        SideInfoMode::Msg1AtRx2 => Region2D::from_pentagon(1.0 - e1, 1.0 - e2, 1.0 - e1),
    }
}

fn bscbec_region(p: Probability, eps: Probability, mode: SideInfoMode) -> Result<Region2D> {
    let (pv, e) = (p.value(), eps.value());
    let regime = regime_classify(p, eps);
    match mode {
        SideInfoMode::None => match regime {
            RegimeLabel::ErasureLow => Region2D::from_parametric(
                |a| (1.0 - hb(conv(a, pv)), (1.0 - e) * hb(a)),
                0.0,
                0.5,
            ),
            RegimeLabel::ErasureMid => {
                let ah = alpha_hat(p, eps)?.value();
                // the two pieces agree at alpha_hat by its definition,
                // so a single parametric sweep traces the boundary
                Region2D::from_parametric(
                    |a| {
                        let r1 = 1.0 - hb(conv(a, pv));
                        if a <= ah {
                            (r1, (1.0 - e) * hb(a))
                        } else {
                            (r1, hb(conv(a, pv)) - e)
                        }
                    },
                    0.0,
                    0.5,
                )
            }
            RegimeLabel::ErasureHigh => Region2D::from_triangle(1.0 - hb(pv), 1.0 - e),
        },
        SideInfoMode::Msg2AtRx1 => {
            if e <= hb(pv) {
                Region2D::from_pentagon(1.0 - hb(pv), 1.0 - e, 1.0 - e)
            } else {
                bscbec_region(p, eps, SideInfoMode::None)
            }
        }
        SideInfoMode::Msg1AtRx2 => {
            if e <= 4.0 * pv * (1.0 - pv) {
                bscbec_region(p, eps, SideInfoMode::None)
            } else if e >= 1.0 || pv == 0.0 {
                Region2D::from_pentagon(1.0 - hb(pv), 1.0 - e, 1.0 - hb(pv))
            } else {
                let at = alpha_tilde(p, eps)?.value();
                let curve = Region2D::from_parametric(
                    |a| (1.0 - hb(conv(a, pv)), (1.0 - e) * hb(a)),
                    0.0,
                    at,
                )?;
                let pent = Region2D::from_pentagon(
                    1.0 - hb(conv(at, pv)),
                    1.0 - e,
                    1.0 - hb(conv(at, pv)) + (1.0 - e) * hb(at),
                )?;
                let mut pts = curve.vertices().to_vec();
                pts.extend_from_slice(pent.vertices());
                Region2D::from_points(&pts)
            }
        }
    }
}
