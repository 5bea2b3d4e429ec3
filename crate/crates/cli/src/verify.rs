//! Self-check suite behind `srcbc verify`: deterministic oracle
//! cross-checks with a machine-readable report.

use clap::ValueEnum;
use serde::Serialize;
use srcbc_core::binary_bc::{
    alpha_hat, alpha_tilde, capacity_region, BinaryBroadcastSpec, SideInfoMode,
};
use srcbc_core::infotheory::{
    bconv, binary_entropy, binary_entropy_inv, discrete_capacity, Bits, DiscreteChannel,
    Probability,
};
use srcbc_core::linalg::SpdMatrix;
use srcbc_core::region::{min_scale, oracle_min_scale, Direction, Region2D};
use srcbc_core::source_hamming::{
    check_kappa_gap, kappa_dagger, kappa_star, HammingDistortionPair, KappaBranch,
};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Core,
    Regions,
    Binary,
    Gaussian,
    All,
}

/// A single named check: `measured` compared against `tolerance`
/// according to `comparison` ("le": error bound, "ge": strictness).
#[derive(Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub comparison: &'static str,
    pub pass: bool,
}

fn le(name: &str, measured: f64, tolerance: f64) -> Check {
    Check {
        name: name.into(),
        measured,
        tolerance,
        comparison: "le",
        pass: measured <= tolerance,
    }
}

fn ge(name: &str, measured: f64, tolerance: f64) -> Check {
    Check {
        name: name.into(),
        measured,
        tolerance,
        comparison: "ge",
        pass: measured >= tolerance,
    }
}

fn p(v: f64) -> Probability {
    Probability::new(v).unwrap()
}

fn hb(x: f64) -> f64 {
    binary_entropy(p(x)).value()
}

fn core_checks(out: &mut Vec<Check>) {
    // entropy inverse round trip
    let mut worst = 0.0f64;
    for i in 0..=1000 {
        let h = i as f64 / 1000.0;
        let x = binary_entropy_inv(Bits::new(h).unwrap()).unwrap();
        worst = worst.max((binary_entropy(x).value() - h).abs());
    }
    out.push(le("entropy_inverse_round_trip", worst, 1e-10));
    // Blahut-Arimoto vs the two closed forms
    let mut worst = 0.0f64;
    for i in 0..=20 {
        let pv = 0.5 * i as f64 / 20.0;
        let c = discrete_capacity(&DiscreteChannel::bsc(p(pv)));
        worst = worst.max((c.value() - (1.0 - hb(pv))).abs());
    }
    out.push(le("blahut_arimoto_bsc", worst, 1e-6));
    let mut worst = 0.0f64;
    for i in 0..=20 {
        let e = i as f64 / 20.0;
        let c = discrete_capacity(&DiscreteChannel::bec(p(e)));
        worst = worst.max((c.value() - (1.0 - e)).abs());
    }
    out.push(le("blahut_arimoto_bec", worst, 1e-6));
    // convolution fixed point
    let mut worst = 0.0f64;
    for i in 0..=50 {
        let a = i as f64 / 100.0;
        worst = worst.max((bconv(p(a), p(0.5)).value() - 0.5).abs());
    }
    out.push(le("binary_convolution_fixed_point", worst, 1e-15));
}

fn region_checks(out: &mut Vec<Check>) {
    let pairs = [
        (
            Region2D::from_pentagon(0.9, 1.4, 1.7).unwrap(),
            Region2D::from_triangle(0.5, 0.8).unwrap(),
        ),
        (
            Region2D::from_rect(1.0, 0.5).unwrap(),
            Region2D::from_pentagon(0.7, 0.7, 1.1).unwrap(),
        ),
        (
            Region2D::from_triangle(2.0, 1.0).unwrap(),
            Region2D::from_rect(0.4, 0.9).unwrap(),
        ),
    ];
    let mut worst = 0.0f64;
    for (a, b) in &pairs {
        let exact = min_scale(a, b).finite().unwrap();
        let oracle = oracle_min_scale(a, b).finite().unwrap();
        worst = worst.max((exact - oracle).abs());
    }
    out.push(le("min_scale_vs_oracle", worst, 1e-3));
    // scaling inverts exactly
    let a = Region2D::from_pentagon(0.9, 1.4, 1.7).unwrap();
    let k = min_scale(&a, &a.scale(0.25).unwrap()).finite().unwrap();
    out.push(le("min_scale_scaling_identity", (k - 4.0).abs(), 1e-12));
    // triangle support closed form
    let t = Region2D::from_triangle(1.0, 2.0).unwrap();
    let diff = (t.support(Direction(0.25)) - 1.5).abs();
    out.push(le("triangle_support_value", diff, 1e-12));
}

fn binary_checks(out: &mut Vec<Check>) {
    // mid-regime strict gain of side information at receiver 2
    let spec = BinaryBroadcastSpec::BscBec(p(0.3), p(0.87));
    let c = capacity_region(spec, SideInfoMode::None).unwrap();
    let c2 = capacity_region(spec, SideInfoMode::Msg1AtRx2).unwrap();
    let mut gap = 0.0f64;
    for i in 0..=4096 {
        let l = Direction(i as f64 / 4096.0);
        gap = gap.max(c2.support(l) - c.support(l));
    }
    out.push(ge("mid_regime_c2_strict_gain", gap, 1e-3));
    // high-regime gain over the plain pentagon
    let spec_hi = BinaryBroadcastSpec::BscBec(p(0.3), p(0.9));
    let c2_hi = capacity_region(spec_hi, SideInfoMode::Msg1AtRx2).unwrap();
    let pent = Region2D::from_pentagon(1.0 - hb(0.3), 0.1, 1.0 - hb(0.3)).unwrap();
    let mut gap_hi = 0.0f64;
    for i in 0..=4096 {
        let l = Direction(i as f64 / 4096.0);
        gap_hi = gap_hi.max(c2_hi.support(l) - pent.support(l));
    }
    out.push(ge("high_regime_c2_strict_gain", gap_hi, 1e-3));
    // defining residuals of the two interior roots
    let at = alpha_tilde(p(0.3), p(0.87)).unwrap().value();
    let cpt = bconv(p(at), p(0.3)).value();
    let res_tilde = ((1.0 - 0.6) * ((1.0 - cpt) / cpt).log2()
        - (1.0 - 0.87) * ((1.0 - at) / at).log2())
    .abs();
    out.push(le("alpha_tilde_residual", res_tilde, 1e-12));
    let ah = alpha_hat(p(0.1), p(0.42)).unwrap().value();
    let cv = bconv(p(ah), p(0.1)).value();
    let res_hat = (1.0 - hb(cv) + (1.0 - 0.42) * hb(ah) - (1.0 - 0.42)).abs();
    out.push(le("alpha_hat_residual", res_hat, 1e-12));
    // the canonical gap instance
    let verdict = check_kappa_gap(
        HammingDistortionPair::new(0.035, 0.095).unwrap(),
        BinaryBroadcastSpec::Bsbc(p(0.15), p(0.2)),
    )
    .unwrap();
    out.push(ge(
        "nontrivial_gap_margin",
        verdict.kappa_star - verdict.kappa_dagger,
        1e-4,
    ));
    out.push(le(
        "nontrivial_gap_branch",
        if verdict.branch == KappaBranch::NontrivialGap { 0.0 } else { 1.0 },
        0.5,
    ));
    // uncoded operating point
    let d = HammingDistortionPair::new(0.1, 0.2).unwrap();
    let spec = BinaryBroadcastSpec::Bsbc(p(0.1), p(0.2));
    out.push(le(
        "uncoded_kappa_is_one",
        (kappa_star(d, spec).unwrap() - 1.0).abs(),
        1e-6,
    ));
    // equal distortions collapse
    let d = HammingDistortionPair::new(0.15, 0.15).unwrap();
    let diff =
        (kappa_star(d, spec).unwrap() - kappa_dagger(d, spec).unwrap()).abs();
    out.push(le("equal_distortion_collapse", diff, 1e-6));
}

fn gaussian_checks(out: &mut Vec<Check>) {
    let s1 = |v: f64| SpdMatrix::from_rows(vec![vec![v]]).unwrap();
    // uncoded tightness at kappa = 1
    let b = srcbc_core::gaussian::p_star(1.0, &s1(1.0), &s1(0.5), &s1(2.0 / 3.0), 1.0, 2.0)
        .unwrap();
    out.push(le("scalar_uncoded_tightness", (b.value - 1.0).abs(), 1e-5));
    out.push(le(
        "scalar_endpoint_limits",
        (b.endpoint_values[0] - 1.0).abs().max((b.endpoint_values[1] - 1.0).abs()),
        1e-9,
    ));
    // determinant identity on fixed PD instances
    let fixtures: [(SpdMatrix, SpdMatrix, SpdMatrix); 2] = [
        (
            SpdMatrix::from_rows(vec![vec![2.0, 0.3], vec![0.3, 1.0]]).unwrap(),
            SpdMatrix::from_rows(vec![vec![0.5, 0.1], vec![0.1, 0.4]]).unwrap(),
            SpdMatrix::from_rows(vec![vec![1.0, -0.2], vec![-0.2, 0.8]]).unwrap(),
        ),
        (
            SpdMatrix::from_rows(vec![
                vec![3.0, 0.5, 0.2],
                vec![0.5, 2.0, -0.1],
                vec![0.2, -0.1, 1.0],
            ])
            .unwrap(),
            SpdMatrix::from_rows(vec![
                vec![0.6, 0.1, 0.0],
                vec![0.1, 0.5, 0.1],
                vec![0.0, 0.1, 0.3],
            ])
            .unwrap(),
            SpdMatrix::from_rows(vec![
                vec![1.2, 0.0, 0.1],
                vec![0.0, 0.9, 0.0],
                vec![0.1, 0.0, 0.7],
            ])
            .unwrap(),
        ),
    ];
    let mut worst = 0.0f64;
    for (s, d, z) in &fixtures {
        let mmse = |m: &SpdMatrix| {
            let sum_inv = m.mat().add(z.mat()).unwrap().inverse().unwrap();
            m.mat()
                .sub(&m.mat().mul(&sum_inv).unwrap().mul(m.mat()).unwrap())
                .unwrap()
                .det()
                .unwrap()
        };
        let zs = |m: &SpdMatrix| m.mat().add(z.mat()).unwrap().det().unwrap();
        let lhs = mmse(s) * d.det() * zs(s);
        let rhs = s.det() * zs(d) * mmse(d);
        worst = worst.max((lhs - rhs).abs() / rhs.abs());
    }
    out.push(le("determinant_identity", worst, 1e-9));
    // conditional rates on the scalar auxiliary construction
    let (ss, d1, d2, zz) = (1.0, 0.25, 0.5, 0.7);
    let sigma = SpdMatrix::from_rows(vec![vec![ss, ss], vec![ss, ss + zz]]).unwrap();
    let dt1 = SpdMatrix::from_rows(vec![vec![d1, d1], vec![d1, d1 + zz]]).unwrap();
    let dt2 = s1(d2 + zz);
    let (r1, r2) =
        srcbc_core::gaussian::conditional_rate_pair(&sigma, (1, 1), &dt1, &dt2).unwrap();
    let e1 = 0.5 * ((ss * (d1 + zz)) / (d1 * (ss + zz))).log2();
    let e2 = 0.5 * ((ss + zz) / (d2 + zz)).log2();
    out.push(le(
        "conditional_rate_construction",
        (r1.value() - e1).abs().max((r2.value() - e2).abs()),
        1e-10,
    ));
    // partitioned sup dominates its block-diagonal restriction
    let s = SpdMatrix::from_rows(vec![vec![1.0, 0.6], vec![0.6, 1.5]]).unwrap();
    let pb = srcbc_core::gaussian::p_lower_bound_partitioned(
        1.0,
        &s,
        (1, 1),
        &s1(0.3),
        &s1(0.4),
        1.0,
        2.0,
    )
    .unwrap();
    out.push(ge(
        "partitioned_full_vs_restricted",
        pb.value - pb.block_diagonal_value,
        -1e-9,
    ));
}

/// Run a suite; returns the JSON report and the overall verdict.
pub fn run(suite: Suite) -> (serde_json::Value, bool) {
    let mut checks = Vec::new();
    let name = match suite {
        Suite::Core => "core",
        Suite::Regions => "regions",
        Suite::Binary => "binary",
        Suite::Gaussian => "gaussian",
        Suite::All => "all",
    };
    if matches!(suite, Suite::Core | Suite::All) {
        core_checks(&mut checks);
    }
    if matches!(suite, Suite::Regions | Suite::All) {
        region_checks(&mut checks);
    }
    if matches!(suite, Suite::Binary | Suite::All) {
        binary_checks(&mut checks);
    }
    if matches!(suite, Suite::Gaussian | Suite::All) {
        gaussian_checks(&mut checks);
    }
    let all_pass = checks.iter().all(|c| c.pass);
    let report = serde_json::json!({
        "schema": 1,
        "suite": name,
        "checks": checks.iter().map(|c| serde_json::to_value(c).unwrap()).collect::<Vec<_>>(),
        "pass": all_pass,
    });
    (report, all_pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        for suite in [Suite::Core, Suite::Regions, Suite::Binary, Suite::Gaussian, Suite::All] {
            let (report, ok) = run(suite);
            assert!(ok, "{report}");
        }
    }

    #[test]
    fn failed_check_flips_verdict() {
        // a corrupted measurement must fail the gate
        let bad = le("injected_fault", 1.0, 1e-6);
        assert!(!bad.pass);
        let good = ge("margin", 0.5, 1e-3);
        assert!(good.pass);
    }
}
