//! Binary uniform source under Hamming distortion, broadcast to two
//! receivers: source rate regions, the bandwidth-expansion thresholds
//! kappa_star (region inclusion) and kappa_dagger (per-link
//! separation), gap classification, and boundary slopes.

use crate::binary_bc::{capacity_region, BinaryBroadcastSpec, SideInfoMode};
use crate::error::{Error, Result};
use crate::infotheory::{
    bconv, binary_entropy, compound_capacity, DiscreteChannel, Probability,
};
use crate::optim;
use crate::region::{min_scale, MinScale, Region2D};
use serde::Serialize;

/// Per-receiver Hamming distortion targets, each in [0, 1/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HammingDistortionPair {
    pub d1: Probability,
    pub d2: Probability,
}

impl HammingDistortionPair {
    pub fn new(d1: f64, d2: f64) -> Result<Self> {
        for d in [d1, d2] {
            if !(0.0..0.5).contains(&d) {
                return Err(Error::Domain(format!("distortion {d} outside [0, 1/2)")));
            }
        }
        Ok(HammingDistortionPair {
            d1: Probability::new(d1)?,
            d2: Probability::new(d2)?,
        })
    }
}

/// Which of the two source-region shapes to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceRegionVariant {
    /// The convex curve region traced by a symmetric auxiliary channel.
    C,
    /// The time-sharing region between the two single-user rates.
    CTilde,
}

/// Outcome of the equality/gap classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KappaBranch {
    #[serde(rename = "trivial_branch_1")]
    TrivialBranch1,
    #[serde(rename = "trivial_branch_2")]
    TrivialBranch2,
    #[serde(rename = "nontrivial_gap")]
    NontrivialGap,
    #[serde(rename = "undetermined")]
    Undetermined,
}

#[derive(Debug, Clone, Serialize)]
pub struct KappaVerdict {
    pub kappa_star: f64,
    pub kappa_dagger: f64,
    pub gap: f64,
    pub branch: KappaBranch,
    /// Provenance notes for numerically obtained slope thresholds.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Closed-form evaluation outcome (the mixed-family reversed-ordering
/// case is only pinned down when the per-link bound is at least 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedFormKappa {
    Value(f64),
    Undetermined,
}

fn hb(p: f64) -> f64 {
    binary_entropy(Probability::new(p).unwrap()).value()
}

fn conv(a: f64, b: f64) -> f64 {
    bconv(Probability::new(a).unwrap(), Probability::new(b).unwrap()).value()
}

/// (1-2d) log2((1-d)/d); +inf at d = 0.
fn log_slope(d: f64) -> f64 {
    if d == 0.0 {
        f64::INFINITY
    } else {
        (1.0 - 2.0 * d) * ((1.0 - d) / d).log2()
    }
}

/// Exact source rate region for sorted distortions (variant C needs
/// d1 <= d2; the kappa solvers swap roles and mirror otherwise).
pub fn source_region(d: HammingDistortionPair, variant: SourceRegionVariant) -> Result<Region2D> {
    let (d1, d2) = (d.d1.value(), d.d2.value());
    match variant {
        SourceRegionVariant::C => {
            if d1 > d2 {
                return Err(Error::Ordering(format!(
                    "variant C needs d1 <= d2, got {d1} > {d2}"
                )));
            }
            Region2D::from_parametric(
                |a| (hb(conv(a, d1)) - hb(d1), 1.0 - hb(conv(a, d2))),
                0.0,
                0.5,
            )
        }
        SourceRegionVariant::CTilde => {
            Region2D::from_triangle(1.0 - hb(d1), 1.0 - hb(d2))
        }
    }
}

/// Point-to-point separation bound:
/// max over receivers of (1 - H_b(d_i)) / C_i. Infinite when a link has
/// zero capacity (each numerator is positive for d_i < 1/2).
pub fn kappa_dagger(d: HammingDistortionPair, spec: BinaryBroadcastSpec) -> Result<f64> {
    spec.validate()?;
    let (c1, c2) = spec.channel_capacities();
    let r1 = 1.0 - hb(d.d1.value());
    let r2 = 1.0 - hb(d.d2.value());
    let ratio = |num: f64, cap: f64| if cap <= 0.0 { f64::INFINITY } else { num / cap };
    Ok(ratio(r1, c1.value()).max(ratio(r2, c2.value())))
}

/// The smallest kappa such that the source region fits inside kappa
/// times the relevant side-information capacity region: C1 when
/// d1 <= d2, C2 (with the source region mirrored) when d1 > d2.
pub fn kappa_star(d: HammingDistortionPair, spec: BinaryBroadcastSpec) -> Result<f64> {
    spec.validate()?;
    let (d1, d2) = (d.d1.value(), d.d2.value());
    let (src, target) = if d1 <= d2 {
        (
            source_region(d, SourceRegionVariant::C)?,
            capacity_region(spec, SideInfoMode::Msg2AtRx1)?,
        )
    } else {
        // relabel receivers: the sorted curve region, mirrored back
        let sorted = HammingDistortionPair::new(d2, d1)?;
        (
            source_region(sorted, SourceRegionVariant::C)?.mirror(),
            capacity_region(spec, SideInfoMode::Msg1AtRx2)?,
        )
    };
    Ok(match min_scale(&src, &target) {
        MinScale::Finite(k) => k,
        MinScale::Unbounded => f64::INFINITY,
    })
}

/// Closed-form kappa_star for the erasure and mixed families.
///
/// Erasure pair: max over alpha of
///   (H_b(a*d1) - H_b(d1))/(1-e1) + (1 - H_b(a*d2))/(1-e2),
/// with receiver roles swapped when d1 > d2. Mixed family with
/// d1 <= d2: the same with 1-e1 replaced by 1-H_b(p). Mixed family
/// with d1 > d2: equals kappa_dagger when that is >= 1, otherwise
/// the closed form is undetermined.
pub fn kappa_star_closed_form(
    d: HammingDistortionPair,
    spec: BinaryBroadcastSpec,
) -> Result<ClosedFormKappa> {
    spec.validate()?;
    let (d1, d2) = (d.d1.value(), d.d2.value());
    let max_objective = |da: f64, db: f64, ca: f64, cb: f64| -> f64 {
        if ca <= 0.0 || cb <= 0.0 {
            return f64::INFINITY;
        }
        let f = |a: f64| (hb(conv(a, da)) - hb(da)) / ca + (1.0 - hb(conv(a, db))) / cb;
        let (_, v) = optim::grid_then_golden(&f, 0.0, 0.5, 4097, 1e-12);
        v
    };
    match spec {
        BinaryBroadcastSpec::Bebc(e1, e2) => {
            let (c1, c2) = (1.0 - e1.value(), 1.0 - e2.value());
            let v = if d1 <= d2 {
                max_objective(d1, d2, c1, c2)
            } else {
                max_objective(d2, d1, c2, c1)
            };
            Ok(ClosedFormKappa::Value(v))
        }
        BinaryBroadcastSpec::BscBec(p, e) => {
            let (c1, c2) = (1.0 - hb(p.value()), 1.0 - e.value());
            if d1 <= d2 {
                Ok(ClosedFormKappa::Value(max_objective(d1, d2, c1, c2)))
            } else {
                let kd = kappa_dagger(d, spec)?;
                if kd >= 1.0 {
                    Ok(ClosedFormKappa::Value(kd))
                } else {
                    Ok(ClosedFormKappa::Undetermined)
                }
            }
        }
        BinaryBroadcastSpec::Bsbc(..) => Err(Error::Unsupported(
            "no closed-form kappa_star for the symmetric pair".into(),
        )),
    }
}

/// Endpoint slopes of the sorted source curve (dR2/dR1 at the two
/// parameter extremes). Both ratios are 1 in magnitude when
/// d1 = d2 = 0, per the defining convention.
pub fn boundary_slopes(d: HammingDistortionPair) -> (f64, f64) {
    let (d1, d2) = (d.d1.value(), d.d2.value());
    let at_zero = if d1 == 0.0 && d2 == 0.0 {
        -1.0
    } else {
        -(log_slope(d2) / log_slope(d1))
    };
    let at_half = if d1 == 0.0 && d2 == 0.0 {
        -1.0
    } else {
        -((1.0 - 2.0 * d2).powi(2) / (1.0 - 2.0 * d1).powi(2))
    };
    (at_zero, at_half)
}

/// Sufficient bandwidth ratio via the compound channel:
/// max_i (1 - H_b(d_i)) / C(compound).
pub fn kappa_compound_sufficient(
    d: HammingDistortionPair,
    spec: BinaryBroadcastSpec,
) -> Result<f64> {
    spec.validate()?;
    let (ch1, ch2) = match spec {
        BinaryBroadcastSpec::Bsbc(p1, p2) => {
            (DiscreteChannel::bsc(p1), DiscreteChannel::bsc(p2))
        }
        BinaryBroadcastSpec::Bebc(e1, e2) => {
            (DiscreteChannel::bec(e1), DiscreteChannel::bec(e2))
        }
        BinaryBroadcastSpec::BscBec(p, e) => {
            (DiscreteChannel::bsc(p), DiscreteChannel::bec(e))
        }
    };
    let cc = compound_capacity(&ch1, &ch2)?.value();
    let num = (1.0 - hb(d.d1.value())).max(1.0 - hb(d.d2.value()));
    Ok(if cc <= 0.0 { f64::INFINITY } else { num / cc })
}

/// Right and left boundary slope thresholds of the side-information
/// region used by the gap test when d1 <= d2 (the C1 boundary, viewed
/// as R2 as a function of R1). Closed form for all three families.
fn phi_thresholds(spec: BinaryBroadcastSpec) -> (f64, f64) {
    match spec {
        BinaryBroadcastSpec::Bsbc(p1, p2) => {
            let (p1, p2) = (p1.value(), p2.value());
            let plus = if p1 == 0.0 && p2 == 0.0 {
                1.0
            } else {
                log_slope(p2) / log_slope(p1)
            };
            let minus = (1.0 - 2.0 * p2).powi(2) / (1.0 - 2.0 * p1).powi(2);
            (plus, minus)
        }
        BinaryBroadcastSpec::Bebc(e1, e2) => {
            let r = (1.0 - e2.value()) / (1.0 - e1.value());
            (r, r)
        }
        BinaryBroadcastSpec::BscBec(p, e) => {
            let (pv, ev) = (p.value(), e.value());
            if ev < hb(pv) {
                // pentagon {R1 <= 1-H_b(p), R1+R2 <= 1-eps}: unit slope
                // at the left end, flat at the right end
                (1.0, f64::INFINITY)
            } else if ev == hb(pv) {
                (1.0, 1.0)
            } else {
                let r = (1.0 - ev) / (1.0 - hb(pv));
                (r, r)
            }
        }
    }
}

/// Same thresholds for the mirrored problem (d1 > d2): the C2 boundary
/// viewed as R1 as a function of R2. Closed form for the pure
/// pentagons; one-sided finite differences on the mixed family's
/// kinked boundary (the chosen side is reported in the note).
fn varphi_thresholds(spec: BinaryBroadcastSpec) -> Result<(f64, f64, Option<String>)> {
    match spec {
        BinaryBroadcastSpec::Bsbc(..) | BinaryBroadcastSpec::Bebc(..) => {
            let (c1, c2) = spec.channel_capacities();
            let minus = if c1.value() > c2.value() + 1e-12 {
                f64::INFINITY
            } else {
                1.0
            };
            Ok((1.0, minus, None))
        }
        BinaryBroadcastSpec::BscBec(..) => {
            let region = capacity_region(spec, SideInfoMode::Msg1AtRx2)?;
            let (c1, c2) = spec.channel_capacities();
            let (c1, c2) = (c1.value(), c2.value());
            let h = 1e-5;
            // varphi(r2) = max r1 on the boundary at height r2
            let varphi = |r2: f64| -> f64 {
                let (mut lo, mut hi) = (0.0, region.max_r1());
                if region.envelope(hi).map_or(false, |v| v >= r2) {
                    return hi;
                }
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if region.envelope(mid).map_or(false, |v| v >= r2) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            };
            let plus = (c1 - varphi(h)) / h;
            let minus = varphi(c2 - h) / h;
            Ok((
                plus,
                minus,
                Some(format!(
                    "varphi slopes by one-sided differences, step {h}: right side at 0, left side at {c2}"
                )),
            ))
        }
    }
}

/// Classify whether the region bound improves on the per-link bound:
/// the two sufficient-equality branches, the sufficient strict-gap
/// test, or undetermined. kappa values are always computed
/// geometrically.
pub fn check_kappa_gap(
    d: HammingDistortionPair,
    spec: BinaryBroadcastSpec,
) -> Result<KappaVerdict> {
    spec.validate()?;
    let ks = kappa_star(d, spec)?;
    let kd = kappa_dagger(d, spec)?;
    let (c1, c2) = spec.channel_capacities();
    let (c1, c2) = (c1.value(), c2.value());

    // work with sorted distortions; swap channel roles for d1 > d2
    let (da, db, ca, cb) = if d.d1.value() <= d.d2.value() {
        (d.d1.value(), d.d2.value(), c1, c2)
    } else {
        (d.d2.value(), d.d1.value(), c2, c1)
    };
    let cap_ratio = if cb > 0.0 { ca / cb } else { f64::INFINITY };
    let sq_ratio = (1.0 - 2.0 * da).powi(2) / (1.0 - 2.0 * db).powi(2);
    let log_ratio = if da == 0.0 && db == 0.0 {
        1.0
    } else {
        log_slope(da) / log_slope(db)
    };

    let mut notes = Vec::new();
    let branch = if sq_ratio >= cap_ratio {
        KappaBranch::TrivialBranch1
    } else if log_ratio <= cap_ratio {
        KappaBranch::TrivialBranch2
    } else {
        let (plus, minus, note) = if d.d1.value() <= d.d2.value() {
            let (p, m) = phi_thresholds(spec);
            (p, m, None)
        } else {
            varphi_thresholds(spec)?
        };
        if let Some(n) = note {
            notes.push(n);
        }
        // strict-gap test on the sorted curve's endpoint slopes
        let inv_log = if da == 0.0 && db == 0.0 {
            1.0
        } else {
            log_slope(db) / log_slope(da)
        };
        let inv_sq = (1.0 - 2.0 * db).powi(2) / (1.0 - 2.0 * da).powi(2);
        if da < db && inv_log < plus && inv_sq > minus {
            KappaBranch::NontrivialGap
        } else {
            KappaBranch::Undetermined
        }
    };

    Ok(KappaVerdict {
        kappa_star: ks,
        kappa_dagger: kd,
        gap: ks - kd,
        branch,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{contains_scaled, oracle_min_scale, Direction};

    fn p(v: f64) -> Probability {
        Probability::new(v).unwrap()
    }

    fn dp(d1: f64, d2: f64) -> HammingDistortionPair {
        HammingDistortionPair::new(d1, d2).unwrap()
    }

    #[test]
    fn distortion_validation() {
        assert!(HammingDistortionPair::new(0.5, 0.1).is_err());
        assert!(HammingDistortionPair::new(-0.1, 0.1).is_err());
        assert!(HammingDistortionPair::new(0.0, 0.49).is_ok());
    }

    #[test]
    fn lossless_source_region_corners() {
        let r = source_region(dp(0.0, 0.0), SourceRegionVariant::C).unwrap();
        assert!((r.support(Direction(1.0)) - 1.0).abs() < 1e-9);
        assert!((r.support(Direction(0.0)) - 1.0).abs() < 1e-9);
        // curve (H_b(a), 1 - H_b(a)): sum of coordinates is 1
        for &(x, y) in r.vertices() {
            assert!((x + y - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn time_sharing_region_dominated() {
        let c = source_region(dp(0.05, 0.2), SourceRegionVariant::C).unwrap();
        let t = source_region(dp(0.05, 0.2), SourceRegionVariant::CTilde).unwrap();
        assert!(contains_scaled(&t, &c, 1.0, 1e-9));
        // equal single-user corners
        assert!((t.max_r1() - c.max_r1()).abs() < 1e-9);
        assert!((t.max_r2() - c.max_r2()).abs() < 1e-9);
        // symmetric time-sharing segment
        let t = source_region(dp(0.1, 0.1), SourceRegionVariant::CTilde).unwrap();
        let c1 = 1.0 - hb(0.1);
        assert_eq!(t.vertices(), &[(0.0, c1), (c1, 0.0)]);
        assert!(source_region(dp(0.2, 0.1), SourceRegionVariant::C).is_err());
    }

    #[test]
    fn kappa_dagger_examples() {
        let k = kappa_dagger(
            dp(0.15, 0.2),
            BinaryBroadcastSpec::Bsbc(p(0.15), p(0.2)),
        )
        .unwrap();
        assert!((k - 1.0).abs() < 1e-12);
        let k = kappa_dagger(dp(0.0, 0.0), BinaryBroadcastSpec::Bebc(p(0.0), p(0.5))).unwrap();
        assert!((k - 2.0).abs() < 1e-12);
        let k = kappa_dagger(
            dp(0.035, 0.095),
            BinaryBroadcastSpec::Bsbc(p(0.15), p(0.2)),
        )
        .unwrap();
        let expect = ((1.0 - hb(0.035)) / (1.0 - hb(0.15)))
            .max((1.0 - hb(0.095)) / (1.0 - hb(0.2)));
        assert!((k - expect).abs() < 1e-12);
        // zero-capacity link
        let k = kappa_dagger(dp(0.1, 0.1), BinaryBroadcastSpec::Bebc(p(0.5), p(1.0)))
            .unwrap();
        assert!(k.is_infinite());
    }

    #[test]
    fn matched_distortions_give_unit_kappa() {
        let spec = BinaryBroadcastSpec::Bsbc(p(0.15), p(0.2));
        let k = kappa_star(dp(0.15, 0.2), spec).unwrap();
        assert!((k - 1.0).abs() < 1e-6, "k={k}");
    }

    #[test]
    fn equal_distortions_collapse_to_dagger() {
        let cases = [
            BinaryBroadcastSpec::Bsbc(p(0.1), p(0.2)),
            BinaryBroadcastSpec::Bebc(p(0.1), p(0.6)),
            BinaryBroadcastSpec::BscBec(p(0.3), p(0.87)),
        ];
        for spec in cases {
            for d in [0.02, 0.1, 0.3] {
                let ks = kappa_star(dp(d, d), spec).unwrap();
                let kd = kappa_dagger(dp(d, d), spec).unwrap();
                assert!((ks - kd).abs() < 1e-6, "{spec:?} d={d}: {ks} vs {kd}");
            }
        }
    }

    #[test]
    fn star_dominates_dagger() {
        let cases = [
            (dp(0.035, 0.095), BinaryBroadcastSpec::Bsbc(p(0.15), p(0.2))),
            (dp(0.02, 0.2), BinaryBroadcastSpec::Bebc(p(0.1), p(0.6))),
            (dp(0.2, 0.02), BinaryBroadcastSpec::Bebc(p(0.1), p(0.6))),
            (dp(0.01, 0.05), BinaryBroadcastSpec::BscBec(p(0.3), p(0.9))),
            (dp(0.05, 0.01), BinaryBroadcastSpec::BscBec(p(0.3), p(0.9))),
        ];
        for (d, spec) in cases {
            let ks = kappa_star(d, spec).unwrap();
            let kd = kappa_dagger(d, spec).unwrap();
            assert!(ks >= kd - 1e-9, "{spec:?} {d:?}: {ks} < {kd}");
        }
    }

    #[test]
    fn closed_form_matches_geometry() {
        let cases = [
            (dp(0.02, 0.2), BinaryBroadcastSpec::Bebc(p(0.1), p(0.6))),
            (dp(0.2, 0.02), BinaryBroadcastSpec::Bebc(p(0.1), p(0.6))),
            (dp(0.05, 0.15), BinaryBroadcastSpec::Bebc(p(0.3), p(0.4))),
            (dp(0.01, 0.05), BinaryBroadcastSpec::BscBec(p(0.3), p(0.9))),
            (dp(0.1, 0.3), BinaryBroadcastSpec::BscBec(p(0.1), p(0.42))),
        ];
        for (d, spec) in cases {
            let geo = kappa_star(d, spec).unwrap();
            match kappa_star_closed_form(d, spec).unwrap() {
                ClosedFormKappa::Value(v) => {
                    assert!((geo - v).abs() < 1e-6, "{spec:?} {d:?}: {geo} vs {v}")
                }
                ClosedFormKappa::Undetermined => panic!("unexpected undetermined"),
            }
        }
        assert!(kappa_star_closed_form(
            dp(0.1, 0.2),
            BinaryBroadcastSpec::Bsbc(p(0.1), p(0.2))
        )
        .is_err());
    }

    #[test]
    fn closed_form_endpoint_identity() {
        // objective at the endpoints reproduces the per-link ratios
        let (d1, d2, e1, e2) = (0.02, 0.2, 0.1, 0.6);
        let obj = |a: f64| {
            (hb(conv(a, d1)) - hb(d1)) / (1.0 - e1) + (1.0 - hb(conv(a, d2))) / (1.0 - e2)
        };
        assert!((obj(0.0) - (1.0 - hb(d2)) / (1.0 - e2)).abs() < 1e-12);
        assert!((obj(0.5) - (1.0 - hb(d1)) / (1.0 - e1)).abs() < 1e-12);
        let kd = kappa_dagger(dp(d1, d2), BinaryBroadcastSpec::Bebc(p(e1), p(e2))).unwrap();
        assert!((obj(0.0).max(obj(0.5)) - kd).abs() < 1e-12);
    }

    #[test]
    fn mixed_family_reversed_ordering_shortcut() {
        let spec = BinaryBroadcastSpec::BscBec(p(0.3), p(0.9));
        // high distortions drive kappa_dagger below 1: undetermined
        let d = dp(0.45, 0.34);
        let kd = kappa_dagger(d, spec).unwrap();
        assert!(kd < 1.0);
        assert_eq!(
            kappa_star_closed_form(d, spec).unwrap(),
            ClosedFormKappa::Undetermined
        );
        // low distortions: equals kappa_dagger, and geometry agrees
        let d = dp(0.05, 0.01);
        let kd = kappa_dagger(d, spec).unwrap();
        assert!(kd >= 1.0);
        match kappa_star_closed_form(d, spec).unwrap() {
            ClosedFormKappa::Value(v) => {
                assert!((v - kd).abs() < 1e-12);
                let geo = kappa_star(d, spec).unwrap();
                assert!((geo - v).abs() < 1e-6, "geo={geo} cf={v}");
            }
            _ => panic!(),
        }
    }

    #[test]
    fn symmetry_reduction_to_plain_region() {
        // min-scale against the no-side-information region agrees with
        // kappa_star for circularly symmetric components
        let cases = [
            (dp(0.035, 0.095), BinaryBroadcastSpec::Bsbc(p(0.15), p(0.2))),
            (dp(0.02, 0.2), BinaryBroadcastSpec::Bebc(p(0.1), p(0.6))),
            (dp(0.01, 0.05), BinaryBroadcastSpec::BscBec(p(0.3), p(0.9))),
            (dp(0.1, 0.3), BinaryBroadcastSpec::BscBec(p(0.1), p(0.42))),
        ];
        for (d, spec) in cases {
            let ks = kappa_star(d, spec).unwrap();
            let src = source_region(d, SourceRegionVariant::C).unwrap();
            let c = capacity_region(spec, SideInfoMode::None).unwrap();
            let against_c = min_scale(&src, &c).finite().unwrap();
            assert!((ks - against_c).abs() < 1e-6, "{spec:?} {d:?}");
        }
    }

    #[test]
    fn oracle_cross_check() {
        let d = dp(0.035, 0.095);
        let spec = BinaryBroadcastSpec::Bsbc(p(0.15), p(0.2));
        let ks = kappa_star(d, spec).unwrap();
        let src = source_region(d, SourceRegionVariant::C).unwrap();
        let target = capacity_region(spec, SideInfoMode::Msg2AtRx1).unwrap();
        let oracle = oracle_min_scale(&src, &target).finite().unwrap();
        assert!((ks - oracle).abs() < 1e-5, "ks={ks} oracle={oracle}");
    }

    #[test]
    fn boundary_slope_values() {
        assert_eq!(boundary_slopes(dp(0.0, 0.0)), (-1.0, -1.0));
        let (s0, sh) = boundary_slopes(dp(0.1, 0.1));
        assert!((s0 + 1.0).abs() < 1e-12 && (sh + 1.0).abs() < 1e-12);
        let (s0, sh) = boundary_slopes(dp(0.035, 0.095));
        // the curve steepens toward alpha = 1/2
        assert!(s0.abs() < sh.abs());
        // finite-difference agreement on the parametric curve
        let (d1, d2) = (0.035, 0.095);
        let r1 = |a: f64| hb(conv(a, d1)) - hb(d1);
        let r2 = |a: f64| 1.0 - hb(conv(a, d2));
        let h = 1e-6;
        let fd0 = (r2(h) - r2(0.0)) / (r1(h) - r1(0.0));
        assert!(((fd0 - s0) / s0).abs() < 1e-4, "fd0={fd0} s0={s0}");
        let fdh = (r2(0.5) - r2(0.5 - h)) / (r1(0.5) - r1(0.5 - h));
        assert!(((fdh - sh) / sh).abs() < 1e-4, "fdh={fdh} sh={sh}");
    }

    #[test]
    fn slope_monotone_and_bounded() {
        let (d1, d2) = (0.05, 0.2);
        let r1 = |a: f64| hb(conv(a, d1)) - hb(d1);
        let r2 = |a: f64| 1.0 - hb(conv(a, d2));
        let mut prev = 0.0;
        let mut a = 1e-3;
        let mut first = true;
        while a < 0.5 - 1e-3 {
            let h = 5e-4;
            let s = (r2(a + h) - r2(a - h)) / (r1(a + h) - r1(a - h));
            assert!((-1.0 - 1e-6..=1e-9).contains(&s), "slope {s} at a={a}");
            if !first {
                assert!(s <= prev + 1e-6, "slope not decreasing at a={a}");
            }
            prev = s;
            first = false;
            a += 1e-3;
        }
    }

    #[test]
    fn gap_classification() {
        // the documented strict-gap instance
        let v = check_kappa_gap(
            dp(0.035, 0.095),
            BinaryBroadcastSpec::Bsbc(p(0.15), p(0.2)),
        )
        .unwrap();
        assert_eq!(v.branch, KappaBranch::NontrivialGap);
        assert!(v.gap > 1e-4, "gap={}", v.gap);
        // equal distortions can never produce the strict gap
        let v = check_kappa_gap(dp(0.1, 0.1), BinaryBroadcastSpec::Bsbc(p(0.15), p(0.2)))
            .unwrap();
        assert!(matches!(
            v.branch,
            KappaBranch::TrivialBranch1 | KappaBranch::TrivialBranch2
        ));
        assert!(v.gap.abs() < 1e-6);
        // equality branch fires when the squared-slope ratio dominates
        let v = check_kappa_gap(dp(0.05, 0.3), BinaryBroadcastSpec::Bsbc(p(0.1), p(0.15)))
            .unwrap();
        assert_eq!(v.branch, KappaBranch::TrivialBranch1);
        assert!(v.gap.abs() < 1e-6);
    }

    #[test]
    fn verdict_serialization() {
        let v = check_kappa_gap(
            dp(0.035, 0.095),
            BinaryBroadcastSpec::Bsbc(p(0.15), p(0.2)),
        )
        .unwrap();
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["branch"], "nontrivial_gap");
        assert!(j["kappa_star"].as_f64().unwrap() > j["kappa_dagger"].as_f64().unwrap());
        assert!(j["gap"].as_f64().is_some());
    }

    #[test]
    fn compound_sufficient_dominates_star() {
        let cases = [
            (dp(0.035, 0.095), BinaryBroadcastSpec::Bsbc(p(0.15), p(0.2))),
            (dp(0.02, 0.2), BinaryBroadcastSpec::Bebc(p(0.1), p(0.6))),
            (dp(0.1, 0.3), BinaryBroadcastSpec::BscBec(p(0.1), p(0.42))),
        ];
        for (d, spec) in cases {
            let suff = kappa_compound_sufficient(d, spec).unwrap();
            let ks = kappa_star(d, spec).unwrap();
            assert!(suff >= ks - 1e-6, "{spec:?}: sufficient {suff} < necessary {ks}");
        }
    }
}
