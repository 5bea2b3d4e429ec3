//! Scalar and low-dimensional optimization helpers: bisection,
//! golden-section maximization, and a plain Nelder-Mead simplex.

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Root of a continuous function by bisection.
///
/// Requires `f(lo)` and `f(hi)` with opposite signs; returns the midpoint
/// after the bracket has shrunk below machine resolution (at most `iters`
/// halvings).
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    let rising = flo < 0.0;
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        }
    }
    let xm = 0.5 * (lo + hi);
    (xm, f(xm))
}

/// Grid scan followed by golden-section refinement in the best bracket.
///
/// Returns `(argmax, max)` over `[lo, hi]`. The function need not be
/// globally unimodal; the grid localizes the maximum and the refinement
/// polishes it.
pub fn grid_then_golden<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, n: usize, tol: f64) -> (f64, f64) {
    assert!(n >= 2);
    let step = (hi - lo) / (n - 1) as f64;
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..n {
        let x = lo + step * i as f64;
        let v = f(x);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let blo = lo + step * best_i.saturating_sub(1) as f64;
    let bhi = lo + step * (best_i + 1).min(n - 1) as f64;
    let (xg, vg) = golden_max(f, blo, bhi, tol);
    if vg >= best_v {
        (xg, vg)
    } else {
        (lo + step * best_i as f64, best_v)
    }
}

/// Nelder-Mead maximization (standard reflection/expansion/contraction
/// coefficients). Deterministic given the initial simplex.
pub fn nelder_mead_max<F: Fn(&[f64]) -> f64>(
    f: &F,
    x0: &[f64],
    scale: f64,
    max_iter: usize,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += scale;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    for _ in 0..max_iter {
        // sort descending by value (best first)
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
        let ordered: Vec<Vec<f64>> = idx.iter().map(|&i| simplex[i].clone()).collect();
        let ovals: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
        simplex = ordered;
        values = ovals;

        if values[0] - values[n] < 1e-13 {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = (0..n).map(|j| 2.0 * centroid[j] - worst[j]).collect();
        let fr = f(&reflect);

        if fr > values[0] {
            let expand: Vec<f64> = (0..n).map(|j| 3.0 * centroid[j] - 2.0 * worst[j]).collect();
            let fe = f(&expand);
            if fe > fr {
                simplex[n] = expand;
                values[n] = fe;
            } else {
                simplex[n] = reflect;
                values[n] = fr;
            }
        } else if fr > values[n - 1] {
            simplex[n] = reflect;
            values[n] = fr;
        } else {
            let contract: Vec<f64> = (0..n).map(|j| 0.5 * (centroid[j] + worst[j])).collect();
            let fc = f(&contract);
            if fc > values[n] {
                simplex[n] = contract;
                values[n] = fc;
            } else {
                // shrink toward best
                for i in 1..=n {
                    for j in 0..n {
                        simplex[i][j] = 0.5 * (simplex[0][j] + simplex[i][j]);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if values[i] > values[best] {
            best = i;
        }
    }
    (simplex[best].clone(), values[best])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 100);
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!(v > -1e-12);
    }

    #[test]
    fn nelder_mead_quadratic() {
        let f = |x: &[f64]| -((x[0] - 1.0).powi(2) + (x[1] + 2.0).powi(2));
        let (x, v) = nelder_mead_max(&f, &[0.0, 0.0], 0.5, 2000);
        assert!((x[0] - 1.0).abs() < 1e-5, "{x:?}");
        assert!((x[1] + 2.0).abs() < 1e-5);
        assert!(v > -1e-9);
    }
}
