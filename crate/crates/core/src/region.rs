//! Convex, downward-comprehensive rate regions in the nonnegative
//! quadrant, represented by the vertices of their Pareto (upper-right)
//! boundary.
//!
//! The key operation is `min_scale(a, b)`: the smallest kappa with
//! a ⊆ kappa·b. Both support functions are piecewise linear in the
//! direction parameter, so the ratio is maximized at a breakpoint of
//! either one and the computation is exact up to floating point.

use crate::error::{Error, Result};

const GEOM_TOL: f64 = 1e-9;

/// Direction λ ∈ [0,1]; support is taken against (λ, 1-λ).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Direction(pub f64);

impl Direction {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Domain(format!("direction {lambda} outside [0,1]")));
        }
        Ok(Direction(lambda))
    }
}

/// Result of a minimal-scaling query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinScale {
    Finite(f64),
    /// No finite scaling works (the target region has zero extent in a
    /// direction where the source does not).
    Unbounded,
}

impl MinScale {
    pub fn finite(self) -> Option<f64> {
        match self {
            MinScale::Finite(v) => Some(v),
            MinScale::Unbounded => None,
        }
    }
}

/// A convex downward-comprehensive region, stored as the vertices of
/// its concave Pareto boundary sorted by increasing first coordinate.
#[derive(Debug, Clone)]
pub struct Region2D {
    /// Pareto vertices: strictly increasing in x, strictly decreasing
    /// in y, forming a concave chain.
    verts: Vec<(f64, f64)>,
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

impl Region2D {
    /// Downward-comprehensive convex hull of a point set.
    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        let mut pts: Vec<(f64, f64)> = points
            .iter()
            .map(|&(x, y)| (x.max(0.0), y.max(0.0)))
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .collect();
        if pts.is_empty() {
            return Err(Error::EmptyGrid);
        }
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Pareto filter: sweep x descending keeping strictly rising y.
        let mut pareto: Vec<(f64, f64)> = Vec::new();
        let mut best_y = f64::NEG_INFINITY;
        for &p in pts.iter().rev() {
            if p.1 > best_y + 1e-15 {
                pareto.push(p);
                best_y = p.1;
            }
        }
        pareto.reverse(); // now x ascending, y descending
        // upper concave chain over the Pareto points
        let mut hull: Vec<(f64, f64)> = Vec::new();
        for &p in &pareto {
            while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) >= -1e-15
            {
                hull.pop();
            }
            hull.push(p);
        }
        Ok(Region2D { verts: hull })
    }

    /// Region traced by a parametric boundary map on `[t_lo, t_hi]`.
    ///
    /// Evaluates a 4097-point grid, then refines the five cells with the
    /// largest chord sag by 256 extra samples each, so hull support
    /// error from discretization is negligible for smooth curves.
    pub fn from_parametric<F: Fn(f64) -> (f64, f64)>(f: F, t_lo: f64, t_hi: f64) -> Result<Self> {
        if !(t_hi > t_lo) {
            return Err(Error::Domain("empty parameter interval".into()));
        }
        let n = 4097usize;
        let ts: Vec<f64> = (0..n)
            .map(|i| t_lo + (t_hi - t_lo) * i as f64 / (n - 1) as f64)
            .collect();
        let mut pts: Vec<(f64, f64)> = ts.iter().map(|&t| f(t)).collect();
        // chord sag per cell, measured at the cell midpoint
        let mut sags: Vec<(f64, usize)> = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let (a, b) = (pts[i], pts[i + 1]);
            let m = f(0.5 * (ts[i] + ts[i + 1]));
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let len = (dx * dx + dy * dy).sqrt().max(1e-300);
            let sag = ((m.0 - a.0) * dy - (m.1 - a.1) * dx).abs() / len;
            sags.push((sag, i));
        }
        sags.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        for &(_, i) in sags.iter().take(5) {
            for k in 1..=256 {
                let t = ts[i] + (ts[i + 1] - ts[i]) * k as f64 / 257.0;
                pts.push(f(t));
            }
        }
        Region2D::from_points(&pts)
    }

    /// Pentagon {R1 <= a, R2 <= b, R1 + R2 <= c} intersected with the
    /// nonnegative quadrant.
    pub fn from_pentagon(a: f64, b: f64, c: f64) -> Result<Self> {
        if a < -GEOM_TOL || b < -GEOM_TOL || c < -GEOM_TOL {
            return Err(Error::Domain(format!("pentagon caps ({a},{b},{c}) negative")));
        }
        let (a, b, c) = (a.max(0.0), b.max(0.0), c.max(0.0));
        let pts = [
            (a.min(c), 0.0),
            (0.0, b.min(c)),
            (a.min((c - b).max(0.0)), b.min(c)),
            (a.min(c), b.min((c - a).max(0.0))),
        ];
        Region2D::from_points(&pts)
    }

    /// Rectangle {R1 <= a, R2 <= b}.
    pub fn from_rect(a: f64, b: f64) -> Result<Self> {
        Region2D::from_points(&[(a, b)])
    }

    /// Time-sharing triangle between (a, 0) and (0, b).
    pub fn from_triangle(a: f64, b: f64) -> Result<Self> {
        Region2D::from_points(&[(a, 0.0), (0.0, b)])
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.verts
    }

    pub fn max_r1(&self) -> f64 {
        self.verts.last().unwrap().0
    }

    pub fn max_r2(&self) -> f64 {
        self.verts.first().unwrap().1
    }

    /// True when the region has zero area (a segment or a point).
    pub fn is_degenerate(&self) -> bool {
        self.max_r1() <= GEOM_TOL || self.max_r2() <= GEOM_TOL
    }

    /// Support value h(λ) = max over the region of λR1 + (1-λ)R2.
    pub fn support(&self, dir: Direction) -> f64 {
        let l = dir.0;
        self.verts
            .iter()
            .map(|&(x, y)| l * x + (1.0 - l) * y)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Direction values where the support function changes slope,
    /// including the endpoints 0 and 1, sorted ascending.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut bp = vec![0.0];
        for w in self.verts.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            // lines y_v + λ(x_v - y_v) cross at this λ
            let denom = (y0 - y1) + (x1 - x0);
            if denom > 1e-300 {
                let l = (y0 - y1) / denom;
                if l > 0.0 && l < 1.0 {
                    bp.push(l);
                }
            }
        }
        bp.push(1.0);
        bp
    }

    /// Region scaled by a nonnegative factor.
    pub fn scale(&self, kappa: f64) -> Result<Region2D> {
        if !(kappa >= 0.0) {
            return Err(Error::Domain(format!("scale factor {kappa} negative")));
        }
        Ok(Region2D { verts: self.verts.iter().map(|&(x, y)| (kappa * x, kappa * y)).collect() })
    }

    /// Region with the two rate coordinates swapped.
    pub fn mirror(&self) -> Region2D {
        let pts: Vec<(f64, f64)> = self.verts.iter().map(|&(x, y)| (y, x)).collect();
        Region2D::from_points(&pts).unwrap()
    }

    /// Upper boundary value at abscissa x (the region is
    /// {0 <= x <= max_r1, 0 <= y <= envelope(x)}).
    pub fn envelope(&self, x: f64) -> Option<f64> {
        if x < -GEOM_TOL || x > self.max_r1() + GEOM_TOL {
            return None;
        }
        let x = x.clamp(0.0, self.max_r1());
        if x <= self.verts[0].0 {
            return Some(self.verts[0].1);
        }
        // vertices are sorted by x: binary search for the segment
        let hi = self.verts.partition_point(|v| v.0 < x - 1e-15);
        if hi >= self.verts.len() {
            return Some(self.verts.last().unwrap().1);
        }
        let (x1, y1) = self.verts[hi];
        if hi == 0 {
            return Some(y1);
        }
        let (x0, y0) = self.verts[hi - 1];
        let t = if x1 > x0 { (x - x0) / (x1 - x0) } else { 1.0 };
        Some(y0 + t * (y1 - y0))
    }

    pub fn contains_point(&self, x: f64, y: f64, tol: f64) -> bool {
        if x < -tol || y < -tol {
            return false;
        }
        match self.envelope(x.min(self.max_r1())) {
            Some(env) => x <= self.max_r1() + tol && y <= env + tol,
            None => false,
        }
    }

    /// Full boundary polyline from (0, max_r2) down to (max_r1, 0),
    /// including the axis-parallel closing segments when needed.
    pub fn boundary_polyline(&self) -> Vec<(f64, f64)> {
        let mut poly = Vec::with_capacity(self.verts.len() + 2);
        let first = self.verts[0];
        if first.0 > GEOM_TOL {
            poly.push((0.0, first.1));
        }
        poly.extend_from_slice(&self.verts);
        let last = *self.verts.last().unwrap();
        if last.1 > GEOM_TOL {
            poly.push((last.0, 0.0));
        }
        poly
    }

    /// `n` points spaced evenly by arc length along the boundary
    /// polyline (endpoints included).
    pub fn sample_boundary(&self, n: usize) -> Vec<(f64, f64)> {
        let poly = self.boundary_polyline();
        if n == 0 {
            return Vec::new();
        }
        if poly.len() == 1 || n == 1 {
            return vec![poly[0]; n.min(1)];
        }
        let mut cum = vec![0.0];
        for w in poly.windows(2) {
            let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            cum.push(cum.last().unwrap() + (dx * dx + dy * dy).sqrt());
        }
        let total = *cum.last().unwrap();
        let mut out = Vec::with_capacity(n);
        let mut seg = 0;
        for i in 0..n {
            let s = total * i as f64 / (n - 1) as f64;
            while seg + 2 < cum.len() && cum[seg + 1] < s {
                seg += 1;
            }
            let den = (cum[seg + 1] - cum[seg]).max(1e-300);
            let t = ((s - cum[seg]) / den).clamp(0.0, 1.0);
            let (a, b) = (poly[seg], poly[seg + 1]);
            out.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
        }
        out
    }

    /// JSON export: boundary polyline resampled at `points` points plus
    /// a small metadata object.
    pub fn to_json(&self, points: usize) -> serde_json::Value {
        let samples = self.sample_boundary(points);
        serde_json::json!({
            "boundary": samples.iter().map(|&(x, y)| vec![x, y]).collect::<Vec<_>>(),
            "meta": {
                "max_r1": self.max_r1(),
                "max_r2": self.max_r2(),
                "vertices": self.verts.len(),
                "degenerate": self.is_degenerate(),
            }
        })
    }

    /// CSV export with an `r1,r2` header row.
    pub fn to_csv(&self, points: usize) -> String {
        let mut s = String::from("r1,r2\n");
        for (x, y) in self.sample_boundary(points) {
            s.push_str(&format!("{x:.12},{y:.12}\n"));
        }
        s
    }
}

/// Smallest kappa >= 0 with a ⊆ kappa·b.
///
/// Evaluated as sup over λ of h_a(λ) / h_b(λ) at the merged support
/// breakpoints of both regions; the ratio of two linear functions is
/// monotone on each interval, so this is exact.
pub fn min_scale(a: &Region2D, b: &Region2D) -> MinScale {
    let mut lambdas = a.breakpoints();
    lambdas.extend(b.breakpoints());
    lambdas.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut best = 0.0f64;
    for &l in &lambdas {
        let ha = a.support(Direction(l));
        let hb = b.support(Direction(l));
        if hb <= GEOM_TOL * GEOM_TOL {
            if ha > GEOM_TOL {
                return MinScale::Unbounded;
            }
            continue;
        }
        best = best.max(ha / hb);
    }
    MinScale::Finite(best)
}

/// Check a ⊆ kappa·b by support comparison on a 4097-direction grid
/// merged with both regions' breakpoints, with slack `tol`.
pub fn contains_scaled(a: &Region2D, b: &Region2D, kappa: f64, tol: f64) -> bool {
    let mut lambdas: Vec<f64> = (0..4097).map(|i| i as f64 / 4096.0).collect();
    lambdas.extend(a.breakpoints());
    lambdas.extend(b.breakpoints());
    for &l in &lambdas {
        let ha = a.support(Direction(l));
        let hb = b.support(Direction(l));
        if ha > kappa * hb + tol {
            return false;
        }
    }
    true
}

/// Independent scaling oracle for cross-checking `min_scale`: sample
/// the boundary of `a` densely and, for each point, bisect on the
/// smallest kappa whose scaled copy of `b` contains it.
pub fn oracle_min_scale(a: &Region2D, b: &Region2D) -> MinScale {
    // scaling cannot create extent b lacks
    if (a.max_r1() > GEOM_TOL && b.max_r1() <= GEOM_TOL)
        || (a.max_r2() > GEOM_TOL && b.max_r2() <= GEOM_TOL)
    {
        return MinScale::Unbounded;
    }
    let mut samples = a.sample_boundary(10_000);
    samples.extend(a.boundary_polyline());
    let mut best = 0.0f64;
    for &(x, y) in &samples {
        if x <= GEOM_TOL && y <= GEOM_TOL {
            continue;
        }
        // bracket: grow until contained
        let mut hi = 1.0;
        let mut ok = false;
        for _ in 0..80 {
            if b.contains_point(x / hi, y / hi, GEOM_TOL) {
                ok = true;
                break;
            }
            hi *= 2.0;
        }
        if !ok {
            return MinScale::Unbounded;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= 0.0 {
                break;
            }
            if b.contains_point(x / mid, y / mid, GEOM_TOL) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        best = best.max(hi);
    }
    MinScale::Finite(best)
}
