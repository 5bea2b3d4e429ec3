//! Quadratic-Gaussian machinery: scalar Gaussian broadcast-channel
//! regions, vector source rate regions indexed by a Gaussian auxiliary
//! noise covariance, the conditional rate-pair formula, and the power
//! lower bounds obtained by optimizing over that auxiliary covariance.
//!
//! All rates are in bits (logs base 2); power expressions are
//! base-free since they only involve determinant ratios raised to 1/κ.

use crate::binary_bc::SideInfoMode;
use crate::error::{Error, Result};
use crate::infotheory::Bits;
use crate::linalg::{Mat, SpdMatrix};
use crate::optim;
use crate::region::Region2D;
use serde::Serialize;

fn log2(x: f64) -> f64 {
    x.log2()
}

/// Scalar Gaussian broadcast channel capacity region, power `p`,
/// noise variances `n1 <= n2`. Modes none and C1 coincide (power-split
/// curve); C2 is the pentagon with the single-user and sum caps.
pub fn gbc_capacity_region(p: f64, n1: f64, n2: f64, mode: SideInfoMode) -> Result<Region2D> {
    if !(p >= 0.0) {
        return Err(Error::Domain(format!("power {p} negative")));
    }
    if !(n1 > 0.0) || n2 < n1 {
        return Err(Error::Ordering(format!("need 0 < N1 <= N2, got {n1}, {n2}")));
    }
    match mode {
        SideInfoMode::None | SideInfoMode::Msg2AtRx1 => Region2D::from_parametric(
            |b| {
                (
                    0.5 * log2((b * p + n1) / n1),
                    0.5 * log2((p + n2) / (b * p + n2)),
                )
            },
            0.0,
            1.0,
        ),
        SideInfoMode::Msg1AtRx2 => {
            let c1 = 0.5 * log2((p + n1) / n1);
            let c2 = 0.5 * log2((p + n2) / n2);
            Region2D::from_pentagon(c1, c2, c1)
        }
    }
}

/// Which receiver's conditional-rate form the source region takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceRegionSide {
    R1Set,
    R2Set,
}

fn validate_dominated(inner: &SpdMatrix, outer: &SpdMatrix, what: &str) -> Result<()> {
    let diff = outer.mat().sub(inner.mat())?;
    let (evals, _) = diff.sym_eigen()?;
    if evals[0] < -1e-10 {
        return Err(Error::Ordering(format!(
            "{what}: ordering violated (eigenvalue {})",
            evals[0]
        )));
    }
    Ok(())
}

fn require_pd(m: &SpdMatrix, what: &str) -> Result<()> {
    if !m.is_positive_definite() {
        let (evals, _) = m.mat().sym_eigen()?;
        return Err(Error::NotPsd(evals[0])).map_err(|_| {
            Error::Domain(format!("{what} must be positive definite (eigenvalue {})", evals[0]))
        });
    }
    Ok(())
}

fn det_sum(a: &SpdMatrix, z: &Mat) -> f64 {
    a.mat().add(z).unwrap().det().unwrap()
}

/// Rate region of the vector Gaussian source at distortion pair
/// (d1, d2), traced by the auxiliary noise covariance.
///
/// `R1Set` rectangles:
///   R1 <= 1/2 log(|S||D1+Z| / (|D1||S+Z|)),
///   R2 <= 1/2 log(|S+Z| / |D2+Z|);
/// `R2Set` swaps the two forms. Scalar inputs use a dense logarithmic
/// grid in the auxiliary variance (exact for support purposes); matrix
/// inputs sample scaled copies of a fixed direction family.
pub fn source_rd_region(
    sigma_s: &SpdMatrix,
    d1: &SpdMatrix,
    d2: &SpdMatrix,
    side: SourceRegionSide,
) -> Result<Region2D> {
    let l = sigma_s.dim();
    if d1.dim() != l || d2.dim() != l {
        return Err(Error::Dimension("distortion dimension mismatch".into()));
    }
    require_pd(d1, "D1")?;
    require_pd(d2, "D2")?;
    validate_dominated(d1, sigma_s, "D1 vs SigmaS")?;
    validate_dominated(d2, sigma_s, "D2 vs SigmaS")?;
    let dets = (sigma_s.det(), d1.det(), d2.det());
    let rates = |z: &Mat| -> (f64, f64) {
        let r1 = 0.5 * log2(dets.0 * det_sum(d1, z) / (dets.1 * det_sum(sigma_s, z)));
        let r2 = 0.5 * log2(det_sum(sigma_s, z) / det_sum(d2, z));
        match side {
            SourceRegionSide::R1Set => (r1.max(0.0), r2.max(0.0)),
            SourceRegionSide::R2Set => {
                let r1b = 0.5 * log2(det_sum(sigma_s, z) / det_sum(d1, z));
                let r2b =
                    0.5 * log2(dets.0 * det_sum(d2, z) / (dets.2 * det_sum(sigma_s, z)));
                (r1b.max(0.0), r2b.max(0.0))
            }
        }
    };
    // analytic Z -> 0 and Z -> infinity corners
    let corners = match side {
        SourceRegionSide::R1Set => [
            (0.0, 0.5 * log2(dets.0 / dets.2)),
            (0.5 * log2(dets.0 / dets.1), 0.0),
        ],
        SourceRegionSide::R2Set => [
            (0.5 * log2(dets.0 / dets.1), 0.0),
            (0.0, 0.5 * log2(dets.0 / dets.2)),
        ],
    };
    let mut pts: Vec<(f64, f64)> = corners.to_vec();
    let directions: Vec<Mat> = if l == 1 {
        vec![Mat::eye(1)]
    } else {
        // deterministic direction family: identity plus the problem's
        // own shapes, normalized to unit trace
        let mut dirs = vec![Mat::eye(l)];
        for m in [sigma_s.mat(), d1.mat(), d2.mat()] {
            let tr: f64 = (0..l).map(|i| m.get(i, i)).sum();
            dirs.push(m.scale(l as f64 / tr));
        }
        dirs
    };
    for dir in &directions {
        for i in 0..=4096 {
            let t = -9.0 + 18.0 * i as f64 / 4096.0;
            let z = dir.scale(10f64.powf(t));
            pts.push(rates(&z));
        }
    }
    Region2D::from_points(&pts)
}

/// Conditional rate pair for a jointly Gaussian pair of source blocks:
///   R1 = 1/2 log(|Schur(S~, block 1)| / |D11 - K D21|)
///   R2 = 1/2 log(|S~2| / |D2|)
/// where K solves K D22 = D12 (pseudoinverse solve when D22 is
/// singular; the system must be consistent to residual 1e-9).
pub fn conditional_rate_pair(
    sigma_tilde: &SpdMatrix,
    split: (usize, usize),
    d_tilde1: &SpdMatrix,
    d_tilde2: &SpdMatrix,
) -> Result<(Bits, Bits)> {
    let (l1, l2) = split;
    let l = l1 + l2;
    if l1 == 0 || l2 == 0 || sigma_tilde.dim() != l || d_tilde1.dim() != l || d_tilde2.dim() != l2
    {
        return Err(Error::Dimension(format!(
            "split ({l1},{l2}) incompatible with inputs"
        )));
    }
    let s2 = sigma_tilde.block(l1, l)?;
    require_pd(&s2, "second source block covariance")?;
    // conditional covariance of block 1 given block 2
    let s1 = sigma_tilde.block(0, l1)?;
    let s12 = sigma_tilde.cross_block(0, l1, l1, l)?;
    let schur = s1
        .mat()
        .sub(&s12.mul(&s2.mat().inverse()?)?.mul(&s12.transpose())?)?;

    let d11 = d_tilde1.block(0, l1)?;
    let d22 = d_tilde1.block(l1, l)?;
    let d12 = d_tilde1.cross_block(0, l1, l1, l)?;
    let d21 = d_tilde1.cross_block(l1, l, 0, l1)?;
    let k = match d22.mat().inverse() {
        Ok(inv) => d12.mul(&inv)?,
        Err(Error::Singular) => d12.mul(&d22.mat().sym_pinv(1e-12)?)?,
        Err(e) => return Err(e),
    };
    let residual = k.mul(d22.mat())?.sub(&d12)?;
    let resid_norm = residual.a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if resid_norm >= 1e-9 {
        return Err(Error::Inconsistent(resid_norm));
    }
    let denom = d11.mat().sub(&k.mul(&d21)?)?.det()?;
    if denom <= 0.0 {
        return Err(Error::Singular);
    }
    let r1 = 0.5 * log2(schur.det()? / denom);
    let r2 = 0.5 * log2(s2.det() / d_tilde2.det());
    Ok((Bits::new(r1.max(0.0))?, Bits::new(r2.max(0.0))?))
}

/// Result of a power-bound optimization.
#[derive(Debug, Clone, Serialize)]
pub struct PowerBound {
    /// Supremum value, clamped below at zero.
    pub value: f64,
    /// The best auxiliary covariance found by the interior search
    /// (absent when an analytic endpoint dominates), row-major.
    pub optimizer_sigma_z: Option<Vec<Vec<f64>>>,
    /// Analytic values at the zero and infinite auxiliary-noise limits.
    pub endpoint_values: [f64; 2],
}

fn validate_channel(kappa: f64, n1: f64, n2: f64) -> Result<()> {
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!("kappa {kappa} must be positive")));
    }
    if !(n1 > 0.0) || n2 < n1 {
        return Err(Error::Ordering(format!("need 0 < N1 <= N2, got {n1}, {n2}")));
    }
    Ok(())
}

/// Lower-triangular factor from an unconstrained parameter vector
/// (diagonal entries exponentiated).
fn cholesky_from_params(l: usize, params: &[f64]) -> Mat {
    let mut m = Mat::zeros(l, l);
    let mut k = 0;
    for i in 0..l {
        for j in 0..=i {
            let v = params[k];
            k += 1;
            m.set(i, j, if i == j { v.exp() } else { v });
        }
    }
    m
}

fn maximize_over_spd<F: Fn(&Mat) -> f64>(l: usize, f: &F) -> (f64, Option<Mat>) {
    let nparams = l * (l + 1) / 2;
    let mut best = f64::NEG_INFINITY;
    let mut best_z: Option<Mat> = None;
    // 8 multistarts, log-spaced scales
    for s in 0..8 {
        let log_scale = -4.0 * std::f64::consts::LN_10 + s as f64 * (8.0 * std::f64::consts::LN_10) / 7.0;
        let mut x0 = vec![0.0; nparams];
        let mut k = 0;
        for i in 0..l {
            for j in 0..=i {
                if i == j {
                    // chol factor scale: half the covariance log-scale
                    x0[k] = 0.5 * log_scale;
                }
                k += 1;
            }
        }
        let obj = |p: &[f64]| {
            let c = cholesky_from_params(l, p);
            f(&c.mul(&c.transpose()).unwrap())
        };
        let (xb, vb) = optim::nelder_mead_max(&obj, &x0, 0.5, 4000);
        if vb > best {
            best = vb;
            let c = cholesky_from_params(l, &xb);
            best_z = Some(c.mul(&c.transpose()).unwrap());
        }
    }
    (best, best_z)
}

/// Minimal transmit power compatible with the distortion pair:
///   sup over Z > 0 of
///     N1 (|S||D1+Z| / (|D1||D2+Z|))^{1/kappa}
///   + (N2-N1) (|S+Z| / |D2+Z|)^{1/kappa} - N2,
/// clamped below at 0. Scalar inputs use a logarithmic grid with
/// golden-section refinement; matrix inputs a multistart simplex
/// search over a Cholesky parameterization. The zero and infinite
/// limits are evaluated analytically and included in the max.
pub fn p_star(
    kappa: f64,
    sigma_s: &SpdMatrix,
    d1: &SpdMatrix,
    d2: &SpdMatrix,
    n1: f64,
    n2: f64,
) -> Result<PowerBound> {
    validate_channel(kappa, n1, n2)?;
    let l = sigma_s.dim();
    if d1.dim() != l || d2.dim() != l {
        return Err(Error::Dimension("distortion dimension mismatch".into()));
    }
    require_pd(d1, "D1")?;
    validate_dominated(d1, d2, "D1 vs D2")?;
    validate_dominated(d2, sigma_s, "D2 vs SigmaS")?;
    let (ds, dd1, dd2) = (sigma_s.det(), d1.det(), d2.det());
    let pow = |x: f64| x.powf(1.0 / kappa);
    // limits: Z -> 0 and Z -> infinity
    let at_zero = n2 * (pow(ds / dd2) - 1.0);
    let at_inf = n1 * (pow(ds / dd1) - 1.0);
    let objective = |z: &Mat| -> f64 {
        let q1 = ds * det_sum(d1, z) / (dd1 * det_sum(d2, z));
        let q2 = det_sum(sigma_s, z) / det_sum(d2, z);
        n1 * pow(q1) + (n2 - n1) * pow(q2) - n2
    };
    let (interior, opt_z) = if l == 1 {
        let f = |t: f64| objective(&Mat::eye(1).scale(10f64.powf(t)));
        let (t, v) = optim::grid_then_golden(&f, -8.0, 8.0, 4097, 1e-12);
        (v, Some(Mat::eye(1).scale(10f64.powf(t))))
    } else {
        maximize_over_spd(l, &objective)
    };
    let value = interior.max(at_zero).max(at_inf).max(0.0);
    let optimizer = if interior >= at_zero && interior >= at_inf {
        opt_z.map(|m| mat_rows(&m))
    } else {
        None
    };
    Ok(PowerBound {
        value,
        optimizer_sigma_z: optimizer,
        endpoint_values: [at_zero, at_inf],
    })
}

fn mat_rows(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.n).map(|i| (0..m.m).map(|j| m.get(i, j)).collect()).collect()
}

/// Power bound for rectangle distortion sets {0 <= D_i <= Theta_i}:
/// the inf-sup collapses to the supremum with Theta_i in place of D_i.
pub fn p_lower_bound_rect(
    kappa: f64,
    sigma_s: &SpdMatrix,
    theta1: &SpdMatrix,
    theta2: &SpdMatrix,
    n1: f64,
    n2: f64,
) -> Result<PowerBound> {
    p_star(kappa, sigma_s, theta1, theta2, n1, n2)
}

/// Power bound for the partitioned problem.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionedBound {
    /// Supremum over all positive definite auxiliary covariances.
    pub value: f64,
    /// Supremum restricted to block-diagonal auxiliary covariances.
    pub block_diagonal_value: f64,
    pub optimizer_sigma_z: Option<Vec<Vec<f64>>>,
}

/// Partitioned power bound: block i of the source is reconstructed at
/// receiver i under covariance distortion cap Lambda_i. The objective
///   N1 (|S+Z| / (|L1+Z1||L2+Z2|))^{1/kappa}
/// + (N2-N1) (|S2+Z2| / |L2+Z2|)^{1/kappa} - N2
/// is maximized over full Z > 0; the block-diagonal restricted value
/// is reported alongside (it can only be smaller).
pub fn p_lower_bound_partitioned(
    kappa: f64,
    sigma_s: &SpdMatrix,
    split: (usize, usize),
    lambda1: &SpdMatrix,
    lambda2: &SpdMatrix,
    n1: f64,
    n2: f64,
) -> Result<PartitionedBound> {
    validate_channel(kappa, n1, n2)?;
    let (l1, l2) = split;
    let l = l1 + l2;
    if l1 == 0 || l2 == 0 || sigma_s.dim() != l || lambda1.dim() != l1 || lambda2.dim() != l2 {
        return Err(Error::Dimension(format!(
            "partition ({l1},{l2}) incompatible with inputs"
        )));
    }
    require_pd(lambda1, "Lambda1")?;
    require_pd(lambda2, "Lambda2")?;
    let s2 = sigma_s.block(l1, l)?;
    let pow = |x: f64| x.powf(1.0 / kappa);
    let objective = |z: &Mat| -> f64 {
        let z1 = sub_block(z, 0, l1);
        let z2 = sub_block(z, l1, l);
        let num = det_sum(sigma_s, z);
        let den1 = lambda1.mat().add(&z1).unwrap().det().unwrap();
        let den2 = lambda2.mat().add(&z2).unwrap().det().unwrap();
        let q2 = s2.mat().add(&z2).unwrap().det().unwrap() / den2;
        n1 * pow(num / (den1 * den2)) + (n2 - n1) * pow(q2) - n2
    };
    // Z -> 0 endpoint
    let at_zero = n1 * pow(sigma_s.det() / (lambda1.det() * lambda2.det()))
        + (n2 - n1) * pow(s2.det() / lambda2.det())
        - n2;
    let (full_search, opt_z) = maximize_over_spd(l, &objective);
    // block-diagonal restriction: zero the cross block of the factor
    let restricted_obj = |p: &[f64]| {
        let z1 = {
            let c = cholesky_from_params(l1, &p[..l1 * (l1 + 1) / 2]);
            c.mul(&c.transpose()).unwrap()
        };
        let z2 = {
            let c = cholesky_from_params(l2, &p[l1 * (l1 + 1) / 2..]);
            c.mul(&c.transpose()).unwrap()
        };
        let mut z = Mat::zeros(l, l);
        for i in 0..l1 {
            for j in 0..l1 {
                z.set(i, j, z1.get(i, j));
            }
        }
        for i in 0..l2 {
            for j in 0..l2 {
                z.set(l1 + i, l1 + j, z2.get(i, j));
            }
        }
        objective(&z)
    };
    let nparams = l1 * (l1 + 1) / 2 + l2 * (l2 + 1) / 2;
    let mut restricted = f64::NEG_INFINITY;
    for s in 0..8 {
        let log_scale =
            -4.0 * std::f64::consts::LN_10 + s as f64 * (8.0 * std::f64::consts::LN_10) / 7.0;
        let mut x0 = vec![0.0; nparams];
        // diagonal positions of the two stacked factors
        let mut k = 0;
        for i in 0..l1 {
            for j in 0..=i {
                if i == j {
                    x0[k] = 0.5 * log_scale;
                }
                k += 1;
            }
        }
        for i in 0..l2 {
            for j in 0..=i {
                if i == j {
                    x0[k] = 0.5 * log_scale;
                }
                k += 1;
            }
        }
        let (_, v) = optim::nelder_mead_max(&restricted_obj, &x0, 0.5, 4000);
        restricted = restricted.max(v);
    }
    let restricted = restricted.max(at_zero).max(0.0);
    // every block-diagonal candidate is also a full candidate
    let value = full_search.max(restricted).max(at_zero).max(0.0);
    Ok(PartitionedBound {
        value,
        block_diagonal_value: restricted,
        optimizer_sigma_z: opt_z.map(|m| mat_rows(&m)),
    })
}

fn sub_block(m: &Mat, lo: usize, hi: usize) -> Mat {
    let k = hi - lo;
    let mut b = Mat::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            b.set(i, j, m.get(lo + i, lo + j));
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{contains_scaled, Direction};
    use rand::{Rng, SeedableRng};

    fn spd1(v: f64) -> SpdMatrix {
        SpdMatrix::from_rows(vec![vec![v]]).unwrap()
    }

    fn random_pd(rng: &mut impl Rng, l: usize, scale: f64) -> SpdMatrix {
        // A A^T + small ridge
        let mut a = Mat::zeros(l, l);
        for i in 0..l {
            for j in 0..l {
                a.set(i, j, rng.gen_range(-1.0..1.0) * scale);
            }
        }
        let mut m = a.mul(&a.transpose()).unwrap();
        for i in 0..l {
            m.set(i, i, m.get(i, i) + 0.05 * scale * scale);
        }
        SpdMatrix::new(m).unwrap()
    }

    #[test]
    fn gbc_region_shapes() {
        // zero power: the origin
        let r = gbc_capacity_region(0.0, 1.0, 1.0, SideInfoMode::None).unwrap();
        assert!(r.max_r1() < 1e-12 && r.max_r2() < 1e-12);
        // unit power, equal noises, with side information
        let r = gbc_capacity_region(1.0, 1.0, 1.0, SideInfoMode::Msg1AtRx2).unwrap();
        assert!((r.support(Direction(1.0)) - 0.5).abs() < 1e-12);
        assert!((r.max_r2() - 0.5).abs() < 1e-12);
        assert!((r.support(Direction(0.5)) - 0.25).abs() < 1e-12);
        // power-split endpoint
        let r = gbc_capacity_region(3.0, 1.0, 2.0, SideInfoMode::None).unwrap();
        assert!((r.max_r1() - 0.5 * (1.0 + 3.0f64).log2()).abs() < 1e-9);
        assert!((r.max_r2() - 0.5 * (2.5f64).log2()).abs() < 1e-9);
        // modes none and C1 coincide
        let a = gbc_capacity_region(3.0, 1.0, 2.0, SideInfoMode::None).unwrap();
        let b = gbc_capacity_region(3.0, 1.0, 2.0, SideInfoMode::Msg2AtRx1).unwrap();
        for i in 0..=256 {
            let lam = Direction(i as f64 / 256.0);
            assert!((a.support(lam) - b.support(lam)).abs() < 1e-9);
        }
        assert!(gbc_capacity_region(1.0, 2.0, 1.0, SideInfoMode::None).is_err());
    }

    #[test]
    fn scalar_source_region_corners() {
        let s = spd1(1.0);
        let d = spd1(0.25);
        let r = source_rd_region(&s, &d, &d, SourceRegionSide::R1Set).unwrap();
        let full = 0.5 * (4.0f64).log2(); // 1 bit
        assert!((r.max_r1() - full).abs() < 1e-9);
        assert!((r.max_r2() - full).abs() < 1e-9);
        // degenerate: no compression slack
        let r = source_rd_region(&s, &s, &s, SourceRegionSide::R1Set).unwrap();
        assert!(r.max_r1() < 1e-9 && r.max_r2() < 1e-9);
    }

    #[test]
    fn source_region_nested_in_rectangle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let s = spd1(rng.gen_range(0.5..2.0));
            let d1v = rng.gen_range(0.05..0.5) * s.det();
            let d2v = rng.gen_range(d1v / s.det()..1.0) * s.det();
            let (d1, d2) = (spd1(d1v), spd1(d2v));
            let r = source_rd_region(&s, &d1, &d2, SourceRegionSide::R1Set).unwrap();
            let rect = Region2D::from_rect(
                0.5 * (s.det() / d1v).log2(),
                0.5 * (s.det() / d2v).log2(),
            )
            .unwrap();
            assert!(contains_scaled(&r, &rect, 1.0, 1e-9));
            // sum-rate cap from the R1 corner
            assert!(r.support(Direction(0.5)) <= 0.25 * (s.det() / d1v).log2() + 1e-9);
        }
    }

    #[test]
    fn conditional_rate_scalar_construction() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let ss: f64 = rng.gen_range(0.5..3.0);
            let d1: f64 = rng.gen_range(0.05..0.9) * ss;
            let d2: f64 = rng.gen_range(d1 / ss..1.0) * ss;
            let zz: f64 = rng.gen_range(0.01..10.0);
            let sigma_tilde =
                SpdMatrix::from_rows(vec![vec![ss, ss], vec![ss, ss + zz]]).unwrap();
            let dt1 = SpdMatrix::from_rows(vec![vec![d1, d1], vec![d1, d1 + zz]]).unwrap();
            let dt2 = spd1(d2 + zz);
            let (r1, r2) = conditional_rate_pair(&sigma_tilde, (1, 1), &dt1, &dt2).unwrap();
            let expect1 = 0.5 * ((ss * (d1 + zz)) / (d1 * (ss + zz))).log2();
            let expect2 = 0.5 * ((ss + zz) / (d2 + zz)).log2();
            assert!((r1.value() - expect1).abs() < 1e-10, "r1");
            assert!((r2.value() - expect2).abs() < 1e-10, "r2");
        }
    }

    #[test]
    fn conditional_rate_block_diagonal_and_degenerate() {
        // zero cross-distortion: K = 0
        let sigma = SpdMatrix::from_rows(vec![vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let dt1 = SpdMatrix::from_rows(vec![vec![0.5, 0.0], vec![0.0, 0.4]]).unwrap();
        let dt2 = spd1(0.8);
        let (r1, r2) = conditional_rate_pair(&sigma, (1, 1), &dt1, &dt2).unwrap();
        let schur = 2.0 - 0.25;
        assert!((r1.value() - 0.5 * (schur / 0.5f64).log2()).abs() < 1e-12);
        assert!((r2.value() - 0.5 * (1.0 / 0.8f64).log2()).abs() < 1e-12);
        // matched second-block distortion: R2 = 0
        let (_, r2) = conditional_rate_pair(&sigma, (1, 1), &dt1, &spd1(1.0)).unwrap();
        assert_eq!(r2.value(), 0.0);
        // inconsistent system: D22 = 0 but D12 != 0
        let bad = SpdMatrix::new(Mat::new(2, 2, vec![0.5, 0.1, 0.1, 0.0]).unwrap());
        if let Ok(bad) = bad {
            assert!(matches!(
                conditional_rate_pair(&sigma, (1, 1), &bad, &dt2),
                Err(Error::Inconsistent(_)) | Err(Error::NotPsd(_))
            ));
        }
    }

    #[test]
    fn p_star_trivial_and_uncoded() {
        let s = spd1(1.0);
        // D = SigmaS: zero power needed
        let b = p_star(1.0, &s, &s, &s, 1.0, 2.0).unwrap();
        assert_eq!(b.value, 0.0);
        // uncoded operating point is exactly tight
        let (p, n1, n2) = (1.0f64, 1.0f64, 2.0f64);
        let d1 = spd1(n1 / (p + n1));
        let d2 = spd1(n2 / (p + n2));
        let b = p_star(1.0, &s, &d1, &d2, n1, n2).unwrap();
        assert!((b.value - 1.0).abs() < 1e-5, "value {}", b.value);
        assert!((b.endpoint_values[0] - 1.0).abs() < 1e-9);
        assert!((b.endpoint_values[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn p_star_equal_noises_reduces_to_point_to_point() {
        // N1 = N2: the bound collapses to the single-user requirement,
        // attained in the large-noise limit
        let s = spd1(1.0);
        let d1 = spd1(0.25);
        let d2 = spd1(0.5);
        let b = p_star(2.0, &s, &d1, &d2, 1.5, 1.5).unwrap();
        let expect = 1.5 * ((1.0f64 / 0.25).powf(0.5) - 1.0);
        assert!((b.value - expect).abs() < 1e-9, "{} vs {expect}", b.value);
        assert!((b.endpoint_values[1] - expect).abs() < 1e-12);
    }

    #[test]
    fn p_star_monotone_in_distortions() {
        // enlarging either distortion never increases the power bound
        let s = spd1(1.0);
        let grid: Vec<f64> = (1..=20).map(|i| 0.04 * i as f64).collect();
        for (i, &d1v) in grid.iter().enumerate() {
            let mut prev = f64::INFINITY;
            for &d2v in grid.iter().skip(i) {
                let b = p_star(1.0, &s, &spd1(d1v), &spd1(d2v), 1.0, 2.0).unwrap();
                assert!(b.value <= prev + 1e-9, "d1={d1v} d2={d2v}");
                assert!(b.value >= b.endpoint_values[0].max(0.0) - 1e-9);
                assert!(b.value >= b.endpoint_values[1].max(0.0) - 1e-9);
                prev = b.value;
            }
        }
    }

    #[test]
    fn p_star_ordering_errors() {
        let s = spd1(1.0);
        assert!(p_star(1.0, &s, &spd1(0.5), &spd1(0.4), 1.0, 2.0).is_err());
        assert!(p_star(0.0, &s, &spd1(0.5), &spd1(0.5), 1.0, 2.0).is_err());
        assert!(p_star(1.0, &s, &spd1(0.5), &spd1(0.5), 2.0, 1.0).is_err());
        assert!(p_star(1.0, &s, &spd1(0.5), &spd1(1.2), 1.0, 2.0).is_err());
    }

    #[test]
    fn rect_bound_matches_p_star_and_monotone() {
        let s = spd1(1.0);
        let t1 = spd1(0.3);
        let t2 = spd1(0.6);
        let a = p_lower_bound_rect(1.5, &s, &t1, &t2, 1.0, 3.0).unwrap();
        let b = p_star(1.5, &s, &t1, &t2, 1.0, 3.0).unwrap();
        assert_eq!(a.value, b.value);
        let bigger = p_lower_bound_rect(1.5, &s, &t1, &spd1(0.66), 1.0, 3.0).unwrap();
        assert!(bigger.value <= a.value + 1e-9);
        // theta = sigma: zero
        let z = p_lower_bound_rect(1.5, &s, &s, &s, 1.0, 3.0).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn matrix_p_star_diagonal_agrees_with_scalar_product_structure() {
        // diagonal everything with equal entries reduces to the scalar
        // problem with squared determinant ratios
        let s = SpdMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let d1 = SpdMatrix::from_rows(vec![vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        let d2 = SpdMatrix::from_rows(vec![vec![2.0 / 3.0, 0.0], vec![0.0, 2.0 / 3.0]]).unwrap();
        // with kappa = 2 the per-coordinate exponents match the scalar
        // kappa = 1 case at P = 1
        let b = p_star(2.0, &s, &d1, &d2, 1.0, 2.0).unwrap();
        assert!((b.value - 1.0).abs() < 1e-4, "value {}", b.value);
    }

    #[test]
    fn partitioned_bound_basics() {
        // block-diagonal source with matched caps: nothing to send
        let s = SpdMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let b = p_lower_bound_partitioned(1.0, &s, (1, 1), &spd1(1.0), &spd1(2.0), 1.0, 2.0)
            .unwrap();
        assert_eq!(b.value, 0.0);
        // full optimization dominates the block-diagonal restriction
        let s = SpdMatrix::from_rows(vec![vec![1.0, 0.6], vec![0.6, 1.5]]).unwrap();
        let b = p_lower_bound_partitioned(1.0, &s, (1, 1), &spd1(0.3), &spd1(0.4), 1.0, 2.0)
            .unwrap();
        assert!(b.value >= b.block_diagonal_value - 1e-9);
        assert!(b.value > 0.0);
        // N1 = N2 drops the second term
        let b2 =
            p_lower_bound_partitioned(1.0, &s, (1, 1), &spd1(0.3), &spd1(0.4), 1.0, 1.0).unwrap();
        assert!(b2.value > 0.0);
        // dimension mismatch
        assert!(p_lower_bound_partitioned(1.0, &s, (1, 1), &spd1(0.3), &s, 1.0, 2.0).is_err());
    }

    #[test]
    fn partitioned_bound_matches_grid_oracle() {
        let s = SpdMatrix::from_rows(vec![vec![1.0, 0.6], vec![0.6, 1.5]]).unwrap();
        let (lam1, lam2) = (spd1(0.3), spd1(0.4));
        let (n1, n2) = (1.0, 2.0);
        let b = p_lower_bound_partitioned(1.0, &s, (1, 1), &lam1, &lam2, n1, n2).unwrap();
        // independent 3-parameter oracle over (z1, z2, correlation)
        let mut oracle = f64::NEG_INFINITY;
        for i in 0..=60 {
            let z1 = 10f64.powf(-4.0 + 8.0 * i as f64 / 60.0);
            for j in 0..=60 {
                let z2 = 10f64.powf(-4.0 + 8.0 * j as f64 / 60.0);
                for k in 0..=40 {
                    let rho = -0.99 + 1.98 * k as f64 / 40.0;
                    let c = rho * (z1 * z2).sqrt();
                    let det_sz = (1.0 + z1) * (1.5 + z2) - (0.6 + c) * (0.6 + c);
                    let v = n1 * det_sz / ((0.3 + z1) * (0.4 + z2))
                        + (n2 - n1) * (1.5 + z2) / (0.4 + z2)
                        - n2;
                    oracle = oracle.max(v);
                }
            }
        }
        let oracle = oracle.max(0.0);
        assert!(
            (b.value - oracle).abs() < 1e-4 || b.value > oracle,
            "bound {} vs oracle {oracle}",
            b.value
        );
        assert!(b.value >= oracle - 1e-4);
    }

    #[test]
    fn determinant_identity_random_pd() {
        // |S - S(S+Z)^{-1}S| |D||S+Z| == |S||D+Z| |D - D(D+Z)^{-1}D|
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let l = rng.gen_range(1..=4);
            let s = random_pd(&mut rng, l, 1.0);
            let d = random_pd(&mut rng, l, 0.7);
            let z = random_pd(&mut rng, l, 0.9);
            let lhs_a = {
                let inner = s
                    .mat()
                    .sub(&s.mat().mul(&s.mat().add(z.mat()).unwrap().inverse().unwrap()).unwrap().mul(s.mat()).unwrap())
                    .unwrap();
                inner.det().unwrap() * d.det() * s.mat().add(z.mat()).unwrap().det().unwrap()
            };
            let rhs = {
                let inner = d
                    .mat()
                    .sub(&d.mat().mul(&d.mat().add(z.mat()).unwrap().inverse().unwrap()).unwrap().mul(d.mat()).unwrap())
                    .unwrap();
                s.det() * d.mat().add(z.mat()).unwrap().det().unwrap() * inner.det().unwrap()
            };
            let rel = (lhs_a - rhs).abs() / rhs.abs().max(1e-300);
            assert!(rel < 1e-9, "l={l} rel={rel}");
        }
    }
}
