//! Dynamic-programming count of partitions, independent of the residue path.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::roots::{RootSystem, Weight};

/// Table of `k(a)` for every `a` with simple-root coordinates in `[0, bound]`.
pub struct DpTable {
    bound: Vec<usize>,
    strides: Vec<usize>,
    values: Vec<BigUint>,
}

impl DpTable {
    /// Unbounded knapsack over the positive roots, one root at a time.
    pub fn new(rs: &RootSystem, bound: &[usize]) -> Self {
        let r = bound.len();
        let mut strides = vec![1usize; r];
        for k in (0..r.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * (bound[k + 1] + 1);
        }
        let size: usize = bound.iter().map(|b| b + 1).product();
        let mut values = vec![BigUint::zero(); size];
        values[0] = BigUint::one();
        for root in rs.positive_simple_coords() {
            if root.iter().zip(bound).any(|(&c, &b)| c as usize > b) {
                continue;
            }
            let shift: usize = root.iter().zip(&strides).map(|(&c, &s)| c as usize * s).sum();
            // increasing index order visits x - root before x
            for idx in 0..size {
                let mut rem = idx;
                let mut fits = true;
                for (k, &s) in strides.iter().enumerate() {
                    let x = rem / s;
                    rem %= s;
                    if x < root[k] as usize {
                        fits = false;
                        break;
                    }
                }
                if fits {
                    let prev = values[idx - shift].clone();
                    values[idx] += prev;
                }
            }
        }
        DpTable { bound: bound.to_vec(), strides, values }
    }

    pub fn get(&self, s: &[usize]) -> Option<&BigUint> {
        if s.iter().zip(&self.bound).any(|(x, b)| x > b) {
            return None;
        }
        Some(&self.values[s.iter().zip(&self.strides).map(|(x, st)| x * st).sum::<usize>()])
    }

    /// All points of the box, in row-major order.
    pub fn points(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.values.len()).map(|mut idx| {
            self.strides
                .iter()
                .map(|&s| {
                    let x = idx / s;
                    idx %= s;
                    x
                })
                .collect()
        })
    }
}

/// `k(a)` by dynamic programming over the box below `a`.
pub fn kostant_partition_dp(rs: &RootSystem, a: &Weight) -> BigUint {
    if !rs.in_root_lattice(a) {
        return BigUint::zero();
    }
    let Some(s) = rs.simple_coords_int(a) else {
        return BigUint::zero();
    };
    if s.iter().any(|&x| x < 0) {
        return BigUint::zero();
    }
    let s: Vec<usize> = s.iter().map(|&x| x as usize).collect();
    DpTable::new(rs, &s).get(&s).cloned().unwrap_or_default()
}
