//! Singular values of a tensor product: the non-increasing rearrangement of
//! all pairwise products, produced lazily by a bounded heap merge.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use crate::error::{Error, Result};
use crate::hardy1d::SingularSpectrum;

struct Frontier {
    value: f64,
    i: usize,
    j: usize,
}

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.i == other.i && self.j == other.j
    }
}
impl Eq for Frontier {}
impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap on the product value; indices break ties deterministically.
        self.value
            .partial_cmp(&other.value)
            .expect("finite products")
            .then_with(|| (other.i, other.j).cmp(&(self.i, self.j)))
    }
}

/// First `count` values of the non-increasing rearrangement of
/// `{ s_i * t_j }` without materializing the full product set.
///
/// Both inputs must be sorted non-increasing. `count` may not exceed the
/// number of available products.
pub fn tensor_spectrum(
    s: &SingularSpectrum,
    t: &SingularSpectrum,
    count: usize,
) -> Result<SingularSpectrum> {
    for spec in [s, t] {
        if spec.values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(
                "tensor factors must be sorted non-increasing".into(),
            ));
        }
    }
    let available = s.values.len() * t.values.len();
    if count > available {
        return Err(Error::InsufficientData {
            needed: count,
            got: available,
        });
    }

    let mut heap = BinaryHeap::new();
    let mut seen = HashSet::new();
    let push = |heap: &mut BinaryHeap<Frontier>, seen: &mut HashSet<(usize, usize)>, i, j| {
        if i < s.values.len() && j < t.values.len() && seen.insert((i, j)) {
            heap.push(Frontier {
                value: s.values[i] * t.values[j],
                i,
                j,
            });
        }
    };
    push(&mut heap, &mut seen, 0, 0);

    let mut values = Vec::with_capacity(count);
    let mut rel_change = Vec::with_capacity(count);
    while values.len() < count {
        let top = heap.pop().expect("heap exhausted before count");
        values.push(top.value);
        // Relative perturbations of a product add to first order.
        let rs = s.rel_change.get(top.i).copied().unwrap_or(1.0);
        let rt = t.rel_change.get(top.j).copied().unwrap_or(1.0);
        rel_change.push(rs + rt);
        push(&mut heap, &mut seen, top.i + 1, top.j);
        push(&mut heap, &mut seen, top.i, top.j + 1);
    }

    let certificate = rel_change.iter().copied().fold(0.0, f64::max);
    Ok(SingularSpectrum {
        values,
        truncation: s.truncation * t.truncation,
        rel_change,
        certificate,
        tail_budget: s.tail_budget * t.values.first().copied().unwrap_or(0.0)
            + t.tail_budget * s.values.first().copied().unwrap_or(0.0),
        blocks: None,
    })
}
