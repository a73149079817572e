//! Lattice rearrangements and counting: the combinatorics behind diagonal
//! symbols, plus the lower-bound envelope and block-budget schedule used by
//! the triangular estimates.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use crate::error::{Error, Result};

struct Node {
    key: f64, // sum of lambda_k n_k, smallest first
    index: Vec<u32>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.index == other.index
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap via reversal; ties broken on the index for determinism.
        other
            .key
            .partial_cmp(&self.key)
            .expect("finite keys")
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// First `count` values of the non-increasing rearrangement of
/// `exp(-sum_k lambda_k n_k)` over multi-indices `n` with non-negative
/// entries, expanded lazily from the origin.
pub fn rearrangement_oracle(lambdas: &[f64], count: usize) -> Result<Vec<f64>> {
    if lambdas.is_empty() || lambdas.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::InvalidParameter(
            "rearrangement needs positive log-weights".into(),
        ));
    }
    let mut heap = BinaryHeap::new();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let origin = vec![0u32; lambdas.len()];
    seen.insert(origin.clone());
    heap.push(Node {
        key: 0.0,
        index: origin,
    });
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let node = heap
            .pop()
            .expect("heap never empties on an infinite lattice");
        out.push((-node.key).exp());
        for k in 0..lambdas.len() {
            let mut next = node.index.clone();
            next[k] += 1;
            if seen.insert(next.clone()) {
                let key: f64 = next.iter().zip(lambdas).map(|(&n, &l)| n as f64 * l).sum();
                heap.push(Node { key, index: next });
            }
        }
    }
    Ok(out)
}

/// Exact number of multi-indices with `sum_k lambda_k n_k <= a`, plus the
/// ratio of the count to the asymptotic equivalent
/// `a^m / (lambda_1 ... lambda_m m!)`.
pub fn count_lattice(lambdas: &[f64], a: f64) -> Result<(u64, f64)> {
    if lambdas.is_empty() || lambdas.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::InvalidParameter(
            "lattice count needs positive weights".into(),
        ));
    }
    if !(a > 0.0) {
        return Err(Error::InvalidParameter("threshold must be positive".into()));
    }
    const CAP: u64 = 100_000_000;
    fn recurse(lambdas: &[f64], budget: f64, cap: u64) -> Result<u64> {
        if lambdas.len() == 1 {
            return Ok((budget / lambdas[0]).floor() as u64 + 1);
        }
        let mut total = 0u64;
        let head = lambdas[0];
        let mut n = 0u64;
        loop {
            let used = n as f64 * head;
            if used > budget {
                break;
            }
            total += recurse(&lambdas[1..], budget - used, cap)?;
            if total > cap {
                return Err(Error::CountOverflow { cap });
            }
            n += 1;
        }
        Ok(total)
    }
    let count = recurse(lambdas, a, CAP)?;
    let m = lambdas.len();
    let m_fact: f64 = (1..=m).map(|k| k as f64).product();
    let product: f64 = lambdas.iter().product();
    let asymptotic = a.powi(m as i32) / (product * m_fact);
    Ok((count, count as f64 / asymptotic))
}

/// One level feeding the lower-bound envelope: a circle radius `r`, a
/// weight floor `delta` on it, and the capacity parameter `gamma` of the
/// image set (possibly only a growth proxy).
#[derive(Debug, Clone, Copy)]
pub struct Level {
    pub r: f64,
    pub delta: f64,
    pub gamma: f64,
    /// Set when `gamma` came from the diameter growth proxy rather than a
    /// closed-form capacity.
    pub proxy: bool,
}

/// Lower-bound envelope
/// `sup_l sqrt(1 - r_l) exp(-8 sqrt(N) sqrt(log 1/delta_l) sqrt(log 1/Gamma_l))`.
///
/// Each level must satisfy `delta_l <= Gamma_l`. Returns the value and
/// whether any contributing level was proxy-flagged.
pub fn estim_inf_bound(n: usize, levels: &[Level]) -> Result<(f64, bool)> {
    if levels.is_empty() {
        return Err(Error::InvalidParameter("need at least one level".into()));
    }
    let mut best = f64::NEG_INFINITY;
    let mut best_proxy = false;
    for (i, level) in levels.iter().enumerate() {
        if !(0.0..1.0).contains(&level.r)
            || !(level.delta > 0.0 && level.delta <= 1.0)
            || !(level.gamma > 0.0 && level.gamma < 1.0)
        {
            return Err(Error::InvalidParameter(format!(
                "level {i} parameters out of range"
            )));
        }
        if level.delta > level.gamma {
            return Err(Error::HypothesisViolated(format!(
                "level {i}: delta {} exceeds Gamma {}",
                level.delta, level.gamma
            )));
        }
        let value = (1.0 - level.r).sqrt()
            * (-8.0
                * (n as f64).sqrt()
                * (1.0 / level.delta).ln().sqrt()
                * (1.0 / level.gamma).ln().sqrt())
            .exp();
        if value > best {
            best = value;
            best_proxy = level.proxy;
        }
    }
    Ok((best, best_proxy))
}

/// Block budget for the counterexample estimate: per block `k = 1..=n` the
/// schedule `m_k = floor(log(b n / k) / (theta^2 log 2)) + 1` (clamped at 0,
/// the smallest non-negative integer with `k delta^2 2^(m theta^2) >= a n`)
/// with `b = a / delta^2` and `a = log(sqrt(16 C^2 + 1) / (4C))`; returns
/// the schedule and the total dimension `d = sum_k n * m_k`.
///
/// `delta` is the weight-decay constant; for the lens-based counterexample
/// it is `cos(theta pi / 2)`.
pub fn chobou_budget(n: usize, theta: f64, c: f64, delta: f64) -> Result<(Vec<usize>, usize)> {
    if !(theta > 0.0 && theta < 1.0) || !(c >= 1.0) || n == 0 || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(
            "budget needs theta in (0,1), C >= 1, delta in (0,1), n >= 1".into(),
        ));
    }
    let a = ((16.0 * c * c + 1.0).sqrt() / (4.0 * c)).ln();
    let b = a / (delta * delta);
    let denom = theta * theta * 2.0f64.ln();
    let mut schedule = Vec::with_capacity(n);
    let mut total = 0usize;
    for k in 1..=n {
        let raw = ((b * n as f64 / k as f64).ln() / denom).floor() + 1.0;
        let m_k = if raw > 0.0 { raw as usize } else { 0 };
        schedule.push(m_k);
        total += n * m_k;
    }
    Ok((schedule, total))
}
