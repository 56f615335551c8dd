//! Brute-force enumeration of factorization families. Every coefficient
//! here is a count: pairs for linear coefficients, triples for square
//! coefficients, and the expander families realized as maps. The sweeps
//! iterate `sigma_1` only and derive `sigma_2` from the long cycle, and they
//! run sharded with one independent counter per shard.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cache::CacheStore;
use crate::perm::{
    cycle_count_of_images, enumerate_symmetric_group_with_cap, Permutation, Shard, ENUMERATION_CAP,
};
use crate::ratpoly::Rational;
use crate::rmap::{MapError, RootedBipartiteMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("k = {k} exceeds the enumeration limit of {max_k}")]
    CapExceeded { k: usize, max_k: usize },
    #[error("invalid parameters: {reason}")]
    BadParams { reason: String },
    #[error(transparent)]
    Map(#[from] MapError),
}

fn bad_params(reason: impl Into<String>) -> EnumError {
    EnumError::BadParams {
        reason: reason.into(),
    }
}

/// Which counted family a result belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "linear-pairs")]
    LinearPairs,
    #[serde(rename = "square-triples")]
    SquareTriples,
    #[serde(rename = "X")]
    ExpanderX,
    #[serde(rename = "Y")]
    ExpanderY,
}

/// A family instance: the family tag, the edge count and the named
/// parameters, e.g. `(l)` for linear pairs or `(i, j)` for `X_k(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub k: usize,
    pub params: Vec<(&'static str, usize)>,
}

impl FamilySpec {
    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::LinearPairs => "linear-pairs",
            Family::SquareTriples => "square-triples",
            Family::ExpanderX => "X",
            Family::ExpanderY => "Y",
        }
    }

    fn file_prefix(&self) -> &'static str {
        match self.family {
            Family::LinearPairs => "linear",
            Family::SquareTriples => "square",
            Family::ExpanderX => "x",
            Family::ExpanderY => "y",
        }
    }

    pub fn cache_file_name(&self) -> String {
        let mut name = format!("{}_k{}", self.file_prefix(), self.k);
        for (key, value) in &self.params {
            name.push('_');
            name.push_str(key);
            name.push_str(&value.to_string());
        }
        name.push_str(".json");
        name
    }

    pub fn params_json(&self) -> serde_json::Value {
        let mut object = serde_json::Map::new();
        for (key, value) in &self.params {
            object.insert(key.to_string(), serde_json::Value::from(*value));
        }
        serde_json::Value::Object(object)
    }
}

impl std::fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}(k={}", self.family_name(), self.k)?;
        for (key, value) in &self.params {
            write!(f, ", {key}={value}")?;
        }
        write!(f, ")")
    }
}

/// An exact count together with how it was produced.
#[derive(Debug, Clone)]
pub struct CountResult {
    pub spec: FamilySpec,
    pub count: u64,
    pub elapsed: Duration,
    pub shards: usize,
}

/// Shared configuration for the enumeration entry points: the advisory
/// cache, the shard granularity, and the `k` guard.
#[derive(Debug, Clone)]
pub struct EnumContext {
    pub cache: CacheStore,
    pub shard_count: usize,
    pub max_k: usize,
}

impl Default for EnumContext {
    fn default() -> Self {
        EnumContext {
            cache: CacheStore::disabled(),
            shard_count: 8,
            max_k: ENUMERATION_CAP,
        }
    }
}

impl EnumContext {
    pub fn with_cache(cache: CacheStore) -> Self {
        EnumContext {
            cache,
            ..Self::default()
        }
    }

    fn check_k(&self, k: usize) -> Result<(), EnumError> {
        if k < 1 {
            return Err(bad_params("k must be at least 1"));
        }
        if k > self.max_k || k > ENUMERATION_CAP {
            return Err(EnumError::CapExceeded {
                k,
                max_k: self.max_k.min(ENUMERATION_CAP),
            });
        }
        Ok(())
    }

    /// Runs `shard_work` over every shard of `S_k` in parallel and sums the
    /// per-shard counts. Large sweeps report shard completion on stderr,
    /// keeping stdout machine-parseable.
    fn sharded_count<F>(&self, k: usize, shard_work: F) -> u64
    where
        F: Fn(Shard) -> u64 + Sync,
    {
        let shards = self.shard_count.max(1);
        (0..shards)
            .into_par_iter()
            .map(|index| {
                let count = shard_work(Shard::new(index, shards).expect("index < total"));
                if k >= 11 {
                    eprintln!("[kerov] k={k}: shard {}/{shards} done", index + 1);
                }
                count
            })
            .sum()
    }

    fn cached_count<F>(&self, spec: FamilySpec, compute: F) -> CountResult
    where
        F: FnOnce() -> u64,
    {
        let started = Instant::now();
        if let Some(count) = self.cache.load_count(&spec) {
            return CountResult {
                spec,
                count,
                elapsed: started.elapsed(),
                shards: self.shard_count,
            };
        }
        let count = compute();
        self.cache.store_count(&spec, count);
        CountResult {
            spec,
            count,
            elapsed: started.elapsed(),
            shards: self.shard_count,
        }
    }

    /// The number of pairs `(sigma_1, sigma_2)` with `sigma_1 o sigma_2`
    /// equal to the long cycle, `sigma_2` a single cycle and `sigma_1`
    /// having `l - 1` cycles. This is the coefficient of `R_l` in the
    /// character polynomial for a `k`-cycle.
    pub fn count_linear(&self, k: usize, l: usize) -> Result<CountResult, EnumError> {
        self.check_k(k)?;
        if l < 2 {
            return Err(bad_params("l must be at least 2"));
        }
        let spec = FamilySpec {
            family: Family::LinearPairs,
            k,
            params: vec![("l", l)],
        };
        Ok(self.cached_count(spec, || {
            self.sharded_count(k, |shard| {
                let mut kernel = Kernel::new(k);
                let mut count = 0u64;
                enumerate_symmetric_group_with_cap(k, shard, self.max_k)
                    .expect("k checked against the cap")
                    .visit(|sigma1| {
                        if cycle_count_of_images(sigma1) != l - 1 {
                            return;
                        }
                        kernel.derive_sigma2(sigma1);
                        if kernel.sigma2_cycles() == 1 {
                            count += 1;
                        }
                    });
                count
            })
        }))
    }

    /// The number of triples `(sigma_1, sigma_2, q)` with `sigma_1` of two
    /// cycles, `sigma_2` of `l1 + l2 - 2` cycles, and `q` assigning `l1`,
    /// `l2` to the two cycles of `sigma_1` so that each cycle meets at least
    /// `q(c)` cycles of `sigma_2`. For `l1 = l2` there is one candidate
    /// assignment; otherwise both are tested and each valid one counts.
    pub fn count_square(&self, k: usize, l1: usize, l2: usize) -> Result<CountResult, EnumError> {
        self.check_k(k)?;
        if l1 < 2 || l2 < 2 {
            return Err(bad_params("l1 and l2 must be at least 2"));
        }
        let spec = FamilySpec {
            family: Family::SquareTriples,
            k,
            params: vec![("l1", l1), ("l2", l2)],
        };
        Ok(self.cached_count(spec, || {
            self.sharded_count(k, |shard| {
                let mut kernel = Kernel::new(k);
                let mut count = 0u64;
                enumerate_symmetric_group_with_cap(k, shard, self.max_k)
                    .expect("k checked against the cap")
                    .visit(|sigma1| {
                        if cycle_count_of_images(sigma1) != 2 {
                            return;
                        }
                        kernel.derive_sigma2(sigma1);
                        if kernel.sigma2_cycles() != l1 + l2 - 2 {
                            return;
                        }
                        let (n1, n2) = kernel.intersection_counts(sigma1);
                        if l1 == l2 {
                            if n1 >= l1 && n2 >= l1 {
                                count += 1;
                            }
                        } else {
                            if n1 >= l1 && n2 >= l2 {
                                count += 1;
                            }
                            if n1 >= l2 && n2 >= l1 {
                                count += 1;
                            }
                        }
                    });
                count
            })
        }))
    }

    /// All expanders with `k` edges, `u - 1` white vertices and one black
    /// vertex of weight `u - 1`, in deterministic order. The stream length
    /// equals `count_linear(k, u)`.
    pub fn enumerate_y(&self, k: usize, u: usize) -> Result<Vec<RootedBipartiteMap>, EnumError> {
        self.check_k(k)?;
        if u < 2 {
            return Err(bad_params("u must be at least 2"));
        }
        let shards = self.shard_count.max(1);
        let per_shard: Vec<Vec<RootedBipartiteMap>> = (0..shards)
            .into_par_iter()
            .map(|index| {
                let shard = Shard::new(index, shards).expect("index < total");
                let mut kernel = Kernel::new(k);
                let mut maps = Vec::new();
                enumerate_symmetric_group_with_cap(k, shard, self.max_k)
                    .expect("k checked against the cap")
                    .visit(|sigma1| {
                        if cycle_count_of_images(sigma1) != u - 1 {
                            return;
                        }
                        kernel.derive_sigma2(sigma1);
                        if kernel.sigma2_cycles() != 1 {
                            return;
                        }
                        let map = kernel.build_map(sigma1, None);
                        debug_assert!(map.is_expander());
                        maps.push(map);
                    });
                maps
            })
            .collect();
        Ok(per_shard.into_iter().flatten().collect())
    }

    /// All expanders with `k` edges, `i + j - 2` white vertices and two
    /// black vertices carrying the weights `i - 1` and `j - 1`, together
    /// with the weight assignment: for `i != j` a map with both assignments
    /// valid appears once per assignment. The stream length equals
    /// `count_square(k, i, j)`.
    pub fn enumerate_x(
        &self,
        k: usize,
        i: usize,
        j: usize,
    ) -> Result<Vec<RootedBipartiteMap>, EnumError> {
        self.check_k(k)?;
        if i < 2 || j < 2 {
            return Err(bad_params("i and j must be at least 2"));
        }
        let shards = self.shard_count.max(1);
        let per_shard: Vec<Vec<RootedBipartiteMap>> = (0..shards)
            .into_par_iter()
            .map(|index| {
                let shard = Shard::new(index, shards).expect("index < total");
                let mut kernel = Kernel::new(k);
                let mut maps = Vec::new();
                enumerate_symmetric_group_with_cap(k, shard, self.max_k)
                    .expect("k checked against the cap")
                    .visit(|sigma_white| {
                        if cycle_count_of_images(sigma_white) != i + j - 2 {
                            return;
                        }
                        kernel.derive_sigma2(sigma_white);
                        if kernel.sigma2_cycles() != 2 {
                            return;
                        }
                        let assignments: &[[u64; 2]] = if i == j {
                            &[[i as u64 - 1, j as u64 - 1]]
                        } else {
                            &[[i as u64 - 1, j as u64 - 1], [j as u64 - 1, i as u64 - 1]]
                        };
                        for weights in assignments {
                            let map = kernel.build_map(sigma_white, Some(weights.to_vec()));
                            if map.is_expander() {
                                maps.push(map);
                            }
                        }
                    });
                maps
            })
            .collect();
        Ok(per_shard.into_iter().flatten().collect())
    }

    /// The coefficient of `C_j` in the expression of the character
    /// polynomial minus its top cumulant in the `C` basis:
    /// `([R_j]K_k - [j = k+1]) / (j - 1)`. The top-term correction matters
    /// only at `j = k + 1`, where `R_{k+1}` is removed before rebasing.
    pub fn gr_linear_coefficient(&self, k: usize, j: usize) -> Result<Rational, EnumError> {
        if j < 2 {
            return Err(bad_params("j must be at least 2"));
        }
        let linear = self.count_linear(k, j)?.count;
        let corrected = BigInt::from(linear) - BigInt::from((j == k + 1) as u64);
        Ok(Rational::new(corrected, BigInt::from(j as u64 - 1)))
    }

    /// The coefficient of `C_i C_j` (or `C_j^2` when `i = j`) in the same
    /// rebased polynomial, computed from the two enumeration counts:
    /// `[C_j^2] = [R_j^2]K_k / (j-1)^2 - ([R_2j]K_k - [2j = k+1]) / (2j-1)`,
    /// and for `i != j`
    /// `[C_i C_j] = [R_i R_j]K_k / ((i-1)(j-1)) - 2([R_{i+j}]K_k - [i+j = k+1]) / (i+j-1)`.
    pub fn gr_square_coefficient(
        &self,
        k: usize,
        i: usize,
        j: usize,
    ) -> Result<Rational, EnumError> {
        if i < 2 || j < 2 {
            return Err(bad_params("i and j must be at least 2"));
        }
        let square = self.count_square(k, i, j)?.count;
        let linear = self.count_linear(k, i + j)?.count;
        let linear_corrected = BigInt::from(linear) - BigInt::from((i + j == k + 1) as u64);
        let (square_term, linear_term) = if i == j {
            (
                Rational::new(
                    BigInt::from(square),
                    BigInt::from(((j - 1) * (j - 1)) as u64),
                ),
                Rational::new(linear_corrected, BigInt::from((2 * j - 1) as u64)),
            )
        } else {
            (
                Rational::new(
                    BigInt::from(square),
                    BigInt::from(((i - 1) * (j - 1)) as u64),
                ),
                Rational::new(linear_corrected * 2, BigInt::from((i + j - 1) as u64)),
            )
        };
        Ok(square_term - linear_term)
    }

    /// Both sides of the conjectured inequality for `(k, i, j)`:
    /// `(2j-1) |X_k(j,j)| >= (j-1)^2 |Y_k(2j)|` when `i = j`, and
    /// `(i+j-1) |X_k(i,j)| >= 2(i-1)(j-1) |Y_k(i+j)|` otherwise.
    pub fn conjecture_row(&self, k: usize, i: usize, j: usize) -> Result<ConjectureRow, EnumError> {
        let x_count = self.count_square(k, i, j)?.count;
        let y_count = self.count_linear(k, i + j)?.count;
        let (lhs, rhs) = if i == j {
            (
                (2 * j as u64 - 1) * x_count,
                ((j as u64 - 1) * (j as u64 - 1)) * y_count,
            )
        } else {
            (
                (i as u64 + j as u64 - 1) * x_count,
                2 * (i as u64 - 1) * (j as u64 - 1) * y_count,
            )
        };
        let coefficient = self.gr_square_coefficient(k, i, j)?;
        Ok(ConjectureRow {
            k,
            i,
            j,
            x_count,
            y_count,
            lhs,
            rhs,
            holds: lhs >= rhs,
            vacuous: x_count == 0,
            coefficient,
        })
    }
}

/// One row of the conjecture table. `vacuous` marks rows whose `X` family
/// is empty; the stated inequality is only meaningful on non-empty families
/// (for empty ones the coefficient identity carries a top-term correction).
#[derive(Debug, Clone)]
pub struct ConjectureRow {
    pub k: usize,
    pub i: usize,
    pub j: usize,
    pub x_count: u64,
    pub y_count: u64,
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
    pub vacuous: bool,
    pub coefficient: Rational,
}

impl ConjectureRow {
    /// Pass/fail for verification purposes: vacuous rows are exempt from
    /// the literal inequality, and their coefficient must still be
    /// non-negative.
    pub fn passes(&self) -> bool {
        if self.vacuous {
            !self.coefficient.is_negative()
        } else {
            self.holds
        }
    }
}

/// Reusable buffers for the per-permutation work inside a shard sweep.
struct Kernel {
    k: usize,
    inverse: Vec<usize>,
    sigma2: Vec<usize>,
    /// Cycle id of each point under sigma2.
    cycle_id: Vec<usize>,
    sigma2_cycle_count: usize,
    /// Stamp array for distinct-cycle counting.
    stamp: Vec<u64>,
    generation: u64,
}

impl Kernel {
    fn new(k: usize) -> Kernel {
        Kernel {
            k,
            inverse: vec![0; k],
            sigma2: vec![0; k],
            cycle_id: vec![0; k],
            sigma2_cycle_count: 0,
            stamp: vec![0; k],
            generation: 0,
        }
    }

    /// Computes `sigma2 = sigma1^{-1} o long_cycle` and labels its cycles.
    fn derive_sigma2(&mut self, sigma1: &[usize]) {
        let k = self.k;
        for (index, &value) in sigma1.iter().enumerate() {
            self.inverse[value - 1] = index + 1;
        }
        for x in 1..=k {
            self.sigma2[x - 1] = self.inverse[x % k];
        }
        // Label cycles of sigma2.
        let mut next_id = 0usize;
        self.cycle_id.iter_mut().for_each(|c| *c = usize::MAX);
        for start in 0..k {
            if self.cycle_id[start] != usize::MAX {
                continue;
            }
            let mut p = start;
            while self.cycle_id[p] == usize::MAX {
                self.cycle_id[p] = next_id;
                p = self.sigma2[p] - 1;
            }
            next_id += 1;
        }
        self.sigma2_cycle_count = next_id;
    }

    fn sigma2_cycles(&self) -> usize {
        self.sigma2_cycle_count
    }

    /// For a two-cycle `sigma1`, the numbers of distinct `sigma2` cycles
    /// meeting each of its cycles, in order of the cycles' minima.
    fn intersection_counts(&mut self, sigma1: &[usize]) -> (usize, usize) {
        let k = self.k;
        let mut counts = [0usize; 2];
        let mut assigned = 0usize;
        let mut visited: u64 = 0;
        for start in 1..=k {
            if visited & (1 << (start - 1)) != 0 {
                continue;
            }
            self.generation += 1;
            let mut p = start;
            while visited & (1 << (p - 1)) == 0 {
                visited |= 1 << (p - 1);
                let id = self.cycle_id[p - 1];
                if self.stamp[id] != self.generation {
                    self.stamp[id] = self.generation;
                    counts[assigned] += 1;
                }
                p = sigma1[p - 1];
            }
            assigned += 1;
            debug_assert!(assigned <= 2);
        }
        (counts[0], counts[1])
    }

    fn build_map(&self, sigma_white: &[usize], weights: Option<Vec<u64>>) -> RootedBipartiteMap {
        let white = Permutation::from_images(sigma_white.to_vec()).expect("enumerated images");
        let black = Permutation::from_images(self.sigma2.clone()).expect("derived images");
        RootedBipartiteMap::from_factorization(white, black, weights, 1)
            .expect("factorization maps are connected")
    }
}
