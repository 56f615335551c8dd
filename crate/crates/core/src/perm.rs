//! Exact permutation arithmetic on the point set `{1..k}` and deterministic,
//! shardable enumeration of symmetric groups.
//!
//! Points are 1-based everywhere: edge labels of a map double as points of
//! the permutations that encode it, and the canonical boundary reads
//! `1, 2, ..., k`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard ceiling for full symmetric-group sweeps. `12! ~ 4.8e8` is the
/// practical desk-scale limit; anything above gets a resource error.
pub const ENUMERATION_CAP: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("permutations act on different point sets ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
    #[error("images are not a bijection on 1..={k}")]
    NotABijection { k: usize },
    #[error("permutations act on at least one point; got k = 0")]
    Empty,
    #[error("enumerating S_{k} exceeds the cap of {cap}")]
    OverCap { k: usize, cap: usize },
    #[error("shard index {index} is not below the shard total {total}")]
    BadShard { index: usize, total: usize },
    #[error("cycles must be disjoint, non-empty and contained in 1..={k}")]
    BadCycles { k: usize },
    #[error("cannot parse permutation from {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// A bijection on `{1..k}`, stored as its image array.
///
/// `images[x-1]` is the image of the point `x`. Composition is fixed as
/// `compose(p, q)(x) = p(q(x))`: the right factor acts first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Identity on `{1..k}`.
    pub fn identity(k: usize) -> Self {
        assert!(k >= 1, "permutations act on at least one point");
        Permutation {
            images: (1..=k).collect(),
        }
    }

    /// The cycle `1 -> 2 -> ... -> k -> 1`. For `k = 1` this is the identity.
    pub fn long_cycle(k: usize) -> Self {
        assert!(k >= 1, "permutations act on at least one point");
        let mut images: Vec<usize> = (2..=k).collect();
        images.push(1);
        Permutation { images }
    }

    /// Builds a permutation from an image array (1-based values).
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let k = images.len();
        if k == 0 {
            return Err(PermError::Empty);
        }
        let mut seen = vec![false; k];
        for &v in &images {
            if v < 1 || v > k || seen[v - 1] {
                return Err(PermError::NotABijection { k });
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation on `{1..k}` from disjoint cycles; points not
    /// mentioned are fixed.
    pub fn from_cycles(k: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        if k == 0 {
            return Err(PermError::Empty);
        }
        let mut images: Vec<usize> = (1..=k).collect();
        let mut seen = vec![false; k];
        for cycle in cycles {
            if cycle.is_empty() {
                return Err(PermError::BadCycles { k });
            }
            for &p in cycle {
                if p < 1 || p > k || seen[p - 1] {
                    return Err(PermError::BadCycles { k });
                }
                seen[p - 1] = true;
            }
            for i in 0..cycle.len() {
                images[cycle[i] - 1] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses canonical cycle text such as `"(1 3)(2 4 5)"`; `"()"` is the
    /// identity. Points not mentioned are fixed.
    pub fn parse_cycles(k: usize, input: &str) -> Result<Self, PermError> {
        let parse_err = |reason: &str| PermError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = input.trim();
        if trimmed == "()" {
            if k == 0 {
                return Err(PermError::Empty);
            }
            return Ok(Self::identity(k));
        }
        let mut cycles = Vec::new();
        let mut rest = trimmed;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| parse_err("expected '('"))?;
            let close = open.find(')').ok_or_else(|| parse_err("missing ')'"))?;
            let body = &open[..close];
            let cycle: Vec<usize> = body
                .split_whitespace()
                .map(|w| w.parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| parse_err("cycle entries must be integers"))?;
            if cycle.is_empty() {
                return Err(parse_err("empty cycle"));
            }
            cycles.push(cycle);
            rest = open[close + 1..].trim_start();
        }
        Self::from_cycles(k, &cycles)
    }

    /// Number of points the permutation acts on.
    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `x`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1]
    }

    /// The underlying image array (1-based values, indexed from 0).
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// `compose(p, q)(x) = p(q(x))`; the right factor acts first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.size() != other.size() {
            return Err(PermError::SizeMismatch {
                left: self.size(),
                right: other.size(),
            });
        }
        let images = other.images.iter().map(|&v| self.images[v - 1]).collect();
        Ok(Permutation { images })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0usize; self.size()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v - 1] = i + 1;
        }
        Permutation { images }
    }

    /// Canonical cycle decomposition: every cycle starts at its minimum and
    /// the cycles are sorted by their minima. Fixed points are kept, since a
    /// singleton cycle of a rotation is a degree-one vertex.
    pub fn cycle_decomposition(&self) -> CycleDecomposition {
        let k = self.size();
        let mut seen = vec![false; k];
        let mut cycles = Vec::new();
        for start in 1..=k {
            if seen[start - 1] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p - 1] {
                seen[p - 1] = true;
                cycle.push(p);
                p = self.images[p - 1];
            }
            cycles.push(cycle);
        }
        CycleDecomposition { cycles }
    }

    /// Number of cycles, fixed points included; cheaper than materializing
    /// the decomposition.
    pub fn cycle_count(&self) -> usize {
        cycle_count_of_images(&self.images)
    }
}

/// Cycle count of a raw image array. Used by the enumeration kernels,
/// which work on reusable buffers instead of `Permutation` values.
pub fn cycle_count_of_images(images: &[usize]) -> usize {
    debug_assert!(images.len() <= 64);
    let mut seen: u64 = 0;
    let mut count = 0;
    for start in 1..=images.len() {
        if seen & (1 << (start - 1)) != 0 {
            continue;
        }
        count += 1;
        let mut p = start;
        while seen & (1 << (p - 1)) == 0 {
            seen |= 1 << (p - 1);
            p = images[p - 1];
        }
    }
    count
}

impl fmt::Display for Permutation {
    /// Canonical cycle text: fixed points omitted, identity printed as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let decomposition = self.cycle_decomposition();
        let mut printed = false;
        for cycle in &decomposition.cycles {
            if cycle.len() == 1 {
                continue;
            }
            write!(f, "(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
            printed = true;
        }
        if !printed {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]({})", self.size(), self)
    }
}

/// Canonical cycle decomposition of a permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }
}

/// A `(index, total)` slice of an enumeration. Shard `i` owns the
/// permutations whose image of the point 1 is congruent to `i` round-robin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shard {
    pub index: usize,
    pub total: usize,
}

impl Shard {
    pub fn whole() -> Self {
        Shard { index: 0, total: 1 }
    }

    pub fn new(index: usize, total: usize) -> Result<Self, PermError> {
        if total == 0 || index >= total {
            return Err(PermError::BadShard { index, total });
        }
        Ok(Shard { index, total })
    }
}

/// Streams the elements of `S_k` belonging to one shard, in lexicographic
/// order on image arrays. The shards partition `S_k`: a permutation with
/// image `v` of the point 1 lands in shard `(v - 1) mod total`.
pub fn enumerate_symmetric_group(k: usize, shard: Shard) -> Result<SymmetricGroupIter, PermError> {
    enumerate_symmetric_group_with_cap(k, shard, ENUMERATION_CAP)
}

pub fn enumerate_symmetric_group_with_cap(
    k: usize,
    shard: Shard,
    cap: usize,
) -> Result<SymmetricGroupIter, PermError> {
    if k == 0 {
        return Err(PermError::Empty);
    }
    if k > cap || k > ENUMERATION_CAP {
        return Err(PermError::OverCap {
            k,
            cap: cap.min(ENUMERATION_CAP),
        });
    }
    if shard.total == 0 || shard.index >= shard.total {
        return Err(PermError::BadShard {
            index: shard.index,
            total: shard.total,
        });
    }
    Ok(SymmetricGroupIter {
        k,
        shard,
        first: None,
        buffer: Vec::new(),
    })
}

pub struct SymmetricGroupIter {
    k: usize,
    shard: Shard,
    /// Current image of the point 1; `None` before the first item.
    first: Option<usize>,
    /// Images of the points `2..=k`, a permutation of `{1..k} \ {first}`.
    buffer: Vec<usize>,
}

impl SymmetricGroupIter {
    fn reset_tail(&mut self, v: usize) {
        self.first = Some(v);
        self.buffer.clear();
        self.buffer.extend((1..=self.k).filter(|&x| x != v));
    }

    /// Smallest shard-owned image of the point 1 strictly above `from`.
    fn next_first(&self, from: usize) -> Option<usize> {
        (from + 1..=self.k).find(|v| (v - 1) % self.shard.total == self.shard.index)
    }

    /// Advances `buffer` to its lexicographic successor; false when the tail
    /// was already the last arrangement.
    fn advance_tail(&mut self) -> bool {
        let tail = &mut self.buffer;
        if tail.len() < 2 {
            return false;
        }
        let mut i = tail.len() - 1;
        while i > 0 && tail[i - 1] >= tail[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = tail.len() - 1;
        while tail[j] <= tail[i - 1] {
            j -= 1;
        }
        tail.swap(i - 1, j);
        tail[i..].reverse();
        true
    }

    fn current(&self) -> Permutation {
        let mut images = Vec::with_capacity(self.k);
        images.push(self.first.expect("iterator positioned on an element"));
        images.extend_from_slice(&self.buffer);
        Permutation { images }
    }

    /// Moves to the next element; false once the shard is exhausted.
    fn step(&mut self) -> bool {
        match self.first {
            None => match self.next_first(0) {
                Some(v) => {
                    self.reset_tail(v);
                    true
                }
                None => false,
            },
            Some(v) => {
                if self.advance_tail() {
                    true
                } else {
                    match self.next_first(v) {
                        Some(next) => {
                            self.reset_tail(next);
                            true
                        }
                        None => false,
                    }
                }
            }
        }
    }

    /// Drives the remaining elements through a visitor without allocating a
    /// `Permutation` per element; the slice is the image array.
    pub fn visit<F: FnMut(&[usize])>(mut self, mut f: F) {
        let mut assembled = vec![0usize; self.k];
        while self.step() {
            assembled[0] = self.first.expect("positioned");
            assembled[1..].copy_from_slice(&self.buffer);
            f(&assembled);
        }
    }
}

impl Iterator for SymmetricGroupIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.step() {
            Some(self.current())
        } else {
            None
        }
    }
}
