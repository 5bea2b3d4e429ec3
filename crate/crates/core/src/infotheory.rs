//! Scalar information-theoretic primitives and discrete-channel oracles:
//! binary entropy and its inverse, binary convolution, and capacity
//! computation for arbitrary discrete memoryless channels via
//! Blahut-Arimoto. All rates are in bits.

use crate::error::{Error, Result};
use crate::optim;

/// Slack accepted on probability-domain checks before rejecting input.
const DOMAIN_SLACK: f64 = 1e-12;

/// A probability value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < -DOMAIN_SLACK || value > 1.0 + DOMAIN_SLACK {
            return Err(Error::Domain(format!("probability {value} outside [0,1]")));
        }
        Ok(Probability(value.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A nonnegative rate in bits per symbol or per channel use.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Bits(f64);

impl Bits {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < -DOMAIN_SLACK {
            return Err(Error::Domain(format!("rate {value} is negative")));
        }
        Ok(Bits(value.max(0.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A discrete memoryless channel given by its transition matrix
/// (rows = input letters, columns = output letters).
#[derive(Debug, Clone)]
pub struct DiscreteChannel {
    inputs: usize,
    outputs: usize,
    /// Row-major transition probabilities.
    p: Vec<f64>,
}

impl DiscreteChannel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidChannel("empty transition matrix".into()));
        }
        let outputs = rows[0].len();
        let mut p = Vec::with_capacity(rows.len() * outputs);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != outputs {
                return Err(Error::InvalidChannel(format!("ragged row {i}")));
            }
            let mut sum = 0.0;
            for &v in row {
                if !(v >= 0.0) {
                    return Err(Error::InvalidChannel(format!("negative entry in row {i}")));
                }
                sum += v;
            }
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidChannel(format!("row {i} sums to {sum}")));
            }
            p.extend_from_slice(row);
        }
        Ok(DiscreteChannel { inputs: rows.len(), outputs, p })
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn bsc(p: Probability) -> Self {
        let p = p.value();
        DiscreteChannel { inputs: 2, outputs: 2, p: vec![1.0 - p, p, p, 1.0 - p] }
    }

    /// Binary erasure channel with erasure probability `eps`
    /// (outputs ordered 0, 1, e).
    pub fn bec(eps: Probability) -> Self {
        let e = eps.value();
        DiscreteChannel { inputs: 2, outputs: 3, p: vec![1.0 - e, 0.0, e, 0.0, 1.0 - e, e] }
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    fn row(&self, x: usize) -> &[f64] {
        &self.p[x * self.outputs..(x + 1) * self.outputs]
    }

    /// Mutual information I(X;Y) in bits for the input distribution `r`.
    pub fn mutual_information(&self, r: &[f64]) -> f64 {
        debug_assert_eq!(r.len(), self.inputs);
        let mut q = vec![0.0; self.outputs];
        for x in 0..self.inputs {
            for (y, qy) in q.iter_mut().enumerate() {
                *qy += r[x] * self.row(x)[y];
            }
        }
        let mut info = 0.0;
        for x in 0..self.inputs {
            if r[x] <= 0.0 {
                continue;
            }
            for y in 0..self.outputs {
                let pyx = self.row(x)[y];
                if pyx > 0.0 && q[y] > 0.0 {
                    info += r[x] * pyx * (pyx / q[y]).log2();
                }
            }
        }
        info.max(0.0)
    }
}

fn xlog2x(p: f64) -> f64 {
    // stable branch near the endpoints; 0 log 0 := 0
    if p < DOMAIN_SLACK {
        0.0
    } else {
        p * p.log2()
    }
}

/// Binary entropy H_b(p) in bits.
pub fn binary_entropy(p: Probability) -> Bits {
    let p = p.value();
    Bits((-xlog2x(p) - xlog2x(1.0 - p)).max(0.0))
}

fn hb(p: f64) -> f64 {
    (-xlog2x(p) - xlog2x(1.0 - p)).max(0.0)
}

/// Inverse of the binary entropy on `[0, 1/2]`: the unique `p` with
/// H_b(p) = h. Bisection to absolute tolerance 1e-12 in `h`.
pub fn binary_entropy_inv(h: Bits) -> Result<Probability> {
    let h = h.value();
    if h > 1.0 + DOMAIN_SLACK {
        return Err(Error::Domain(format!("entropy value {h} outside [0,1]")));
    }
    let h = h.min(1.0);
    if h <= 0.0 {
        return Ok(Probability(0.0));
    }
    if h >= 1.0 {
        return Ok(Probability(0.5));
    }
    let p = optim::bisect(|p| hb(p) - h, 0.0, 0.5, 200);
    Ok(Probability(p))
}

/// Binary convolution a*b = a(1-b) + (1-a)b.
pub fn bconv(a: Probability, b: Probability) -> Probability {
    let (a, b) = (a.value(), b.value());
    Probability((a * (1.0 - b) + (1.0 - a) * b).clamp(0.0, 1.0))
}

/// Capacity of a discrete memoryless channel by Blahut-Arimoto.
///
/// Iterates until the capacity upper/lower duality gap is below 1e-10
/// bits or 1e5 iterations; the gap is monotone nonincreasing.
pub fn discrete_capacity(ch: &DiscreteChannel) -> Bits {
    let n = ch.inputs;
    let mut r = vec![1.0 / n as f64; n];
    let mut t = vec![0.0; n];
    let mut lower = 0.0;
    for _ in 0..100_000 {
        // output marginal
        let mut q = vec![0.0; ch.outputs];
        for x in 0..n {
            for (y, qy) in q.iter_mut().enumerate() {
                *qy += r[x] * ch.row(x)[y];
            }
        }
        // per-letter divergence t(x) = D(p(.|x) || q) in bits
        for x in 0..n {
            let mut d = 0.0;
            for y in 0..ch.outputs {
                let pyx = ch.row(x)[y];
                if pyx > 0.0 {
                    d += pyx * (pyx / q[y]).log2();
                }
            }
            t[x] = d;
        }
        let upper = t.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let z: f64 = (0..n).map(|x| r[x] * (t[x] * std::f64::consts::LN_2).exp()).sum();
        lower = z.ln() / std::f64::consts::LN_2;
        if upper - lower < 1e-10 {
            break;
        }
        for x in 0..n {
            r[x] *= (t[x] * std::f64::consts::LN_2).exp() / z;
        }
    }
    Bits(lower.max(0.0))
}

/// Compound-channel capacity max_{p_X} min(I(X;Y1), I(X;Y2)) for two
/// channels sharing a binary input alphabet.
///
/// The objective is concave in the input distribution, so a grid over
/// the 1-D simplex followed by golden-section refinement suffices.
pub fn compound_capacity(ch1: &DiscreteChannel, ch2: &DiscreteChannel) -> Result<Bits> {
    if ch1.inputs != ch2.inputs {
        return Err(Error::Dimension(format!(
            "input alphabets differ: {} vs {}",
            ch1.inputs, ch2.inputs
        )));
    }
    if ch1.inputs != 2 {
        return Err(Error::Unsupported(
            "compound capacity implemented for binary input alphabets".into(),
        ));
    }
    let f = |p0: f64| {
        let r = [p0, 1.0 - p0];
        ch1.mutual_information(&r).min(ch2.mutual_information(&r))
    };
    let (_, v) = optim::grid_then_golden(&f, 0.0, 1.0, 1001, 1e-12);
    Ok(Bits(v))
}
