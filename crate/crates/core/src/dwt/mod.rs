//! Periodized dyadic wavelet transform and the binary coefficient tree.
//!
//! A signal of length `2^J` decomposes into one scaling coefficient `u0` and
//! `2^J - 1` details. Details are stored in heap order: node `i = 2^j + k`
//! holds `d_{j,k}` (scale `j`, position `k`), so the parent of `i` is `i / 2`
//! and its children are `2i` and `2i + 1`. Slot 0 holds `u0`.

mod filters;

pub use filters::{filter_bank, Wavelet, WaveletFilterBank};

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signalgen::{dyadic_levels, Signal};

/// Flat index of the detail at scale `j`, position `k`.
pub fn node_index(j: usize, k: usize) -> Result<usize> {
    if j >= usize::BITS as usize - 1 || k >= 1 << j {
        return Err(Error::MalformedTree("position outside its scale"));
    }
    Ok((1 << j) + k)
}

/// Predecessor `ρ(i) = ⌊i/2⌋`.
pub fn parent(i: usize) -> Result<usize> {
    match i {
        0 => Err(Error::MalformedTree("node 0 is the scaling coefficient")),
        1 => Err(Error::RootHasNoParent),
        _ => Ok(i / 2),
    }
}

#[inline]
pub fn children(i: usize) -> [usize; 2] {
    [2 * i, 2 * i + 1]
}

/// Scale of node `i >= 1`.
#[inline]
pub fn scale_of(i: usize) -> usize {
    debug_assert!(i >= 1);
    (usize::BITS - 1 - i.leading_zeros()) as usize
}

/// Scaling coefficient plus `2^J - 1` detail coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "TreeRepr", try_from = "TreeRepr")]
pub struct WaveletTree {
    levels: usize,
    coeffs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TreeRepr {
    #[serde(rename = "J")]
    levels: usize,
    u0: f64,
    details: Vec<Vec<f64>>,
}

impl From<WaveletTree> for TreeRepr {
    fn from(t: WaveletTree) -> Self {
        TreeRepr {
            levels: t.levels,
            u0: t.u0(),
            details: (0..t.levels).map(|j| t.scale(j).to_vec()).collect(),
        }
    }
}

impl TryFrom<TreeRepr> for WaveletTree {
    type Error = Error;

    fn try_from(r: TreeRepr) -> Result<Self> {
        WaveletTree::from_scales(r.u0, r.details).and_then(|t| {
            if t.levels == r.levels {
                Ok(t)
            } else {
                Err(Error::MalformedTree("J disagrees with the number of scales"))
            }
        })
    }
}

impl WaveletTree {
    /// Builds a tree from `u0` and per-scale detail vectors (scale `j` must
    /// have exactly `2^j` entries).
    pub fn from_scales(u0: f64, details: Vec<Vec<f64>>) -> Result<Self> {
        let levels = details.len();
        if levels == 0 {
            return Err(Error::MalformedTree("no detail scales"));
        }
        let mut coeffs = Vec::with_capacity(1 << levels);
        coeffs.push(u0);
        for (j, d) in details.into_iter().enumerate() {
            if d.len() != 1 << j {
                return Err(Error::MalformedTree("scale j must hold 2^j coefficients"));
            }
            coeffs.extend(d);
        }
        Self::from_flat(coeffs)
    }

    /// Builds a tree from heap-ordered coefficients (`[u0, d_1, d_2, ...]`).
    pub fn from_flat(coeffs: Vec<f64>) -> Result<Self> {
        let n = coeffs.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::MalformedTree("coefficient count must be 2^J, J >= 1"));
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(WaveletTree { levels: n.trailing_zeros() as usize, coeffs })
    }

    pub fn zeros(levels: usize) -> Self {
        WaveletTree { levels, coeffs: vec![0.0; 1 << levels] }
    }

    /// Number of detail scales `J`.
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Number of detail nodes, `2^J - 1`.
    pub fn node_count(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn u0(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn set_u0(&mut self, u0: f64) {
        self.coeffs[0] = u0;
    }

    /// Details of scale `j`, positions `0..2^j`.
    pub fn scale(&self, j: usize) -> &[f64] {
        &self.coeffs[1 << j..2 << j]
    }

    pub fn scale_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.coeffs[1 << j..2 << j]
    }

    pub fn detail(&self, j: usize, k: usize) -> f64 {
        self.scale(j)[k]
    }

    /// Detail of heap node `i` (`1 <= i < 2^J`).
    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i >= 1);
        self.coeffs[i]
    }

    /// Heap-ordered coefficients; index 0 is `u0`.
    pub fn as_flat(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn as_flat_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// Full-depth periodized decomposition of a `2^J`-sample signal.
pub fn forward(signal: &Signal, bank: &WaveletFilterBank) -> Result<WaveletTree> {
    let levels = signal.dyadic_levels()?;
    let n = signal.len();
    let mut coeffs = vec![0.0; n];
    let mut approx = signal.samples().to_vec();
    let mut next = vec![0.0; n / 2];
    let mut len = n;
    while len > 1 {
        let half = len / 2;
        bank.analyze(&approx[..len], &mut next[..half], &mut coeffs[half..len]);
        approx[..half].copy_from_slice(&next[..half]);
        len = half;
    }
    coeffs[0] = approx[0];
    Ok(WaveletTree { levels, coeffs })
}

/// Synthesis from a full-depth tree.
pub fn inverse(tree: &WaveletTree, bank: &WaveletFilterBank) -> Result<Signal> {
    let n = tree.coeffs.len();
    if n != 1 << tree.levels {
        return Err(Error::MalformedTree("coefficient count disagrees with J"));
    }
    let mut approx = vec![0.0; n];
    let mut next = vec![0.0; n];
    approx[0] = tree.coeffs[0];
    let mut len = 1;
    while len < n {
        bank.synthesize(&approx[..len], &tree.coeffs[len..2 * len], &mut next[..2 * len]);
        approx[..2 * len].copy_from_slice(&next[..2 * len]);
        len *= 2;
    }
    Signal::new(approx)
}

/// Checks that `len` is an admissible analysis length and returns `J`.
pub fn levels_for(len: usize) -> Result<usize> {
    dyadic_levels(len)
}
