//! Exact lattice-point counting for homogeneous systems in a hypercube,
//! with and without the all-coordinates-distinct requirement.
//!
//! The weak count `#{x in [0, l-1]^t : Mx = 0}` is evaluated pointwise by
//! kernel-basis enumeration and in closed form as a fitted
//! quasi-polynomial. The distinct count follows by Moebius
//! inversion over the lattice of set partitions of the columns: merging
//! the columns of each block and weighting by the partition's Moebius
//! value. Merged systems repeat heavily across partitions and across
//! callers, so closed forms are memoized under a canonicalized matrix key.

mod ehrhart;
mod kernel;
mod vertices;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::error::Result;
use crate::partitions::MonochromeMatrix;
use crate::qpoly::QuasiPolynomial;
use crate::rat::{rat_int, Rat};

pub use ehrhart::weak_count_quasipoly;
pub use kernel::CountingProblem;
pub use vertices::{profile, PolytopeProfile};

/// Dense integer matrix; `cols` is explicit so zero-row systems keep their
/// column count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    pub rows: Vec<Vec<i64>>,
    pub cols: usize,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<i64>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows, cols }
    }

    pub fn from_monochrome(m: &MonochromeMatrix) -> Self {
        IntMatrix {
            rows: m.rows.clone(),
            cols: m.cols(),
        }
    }

    /// Sums columns within each block of the set partition.
    pub fn merge_columns(&self, blocks: &[Vec<usize>]) -> IntMatrix {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                blocks
                    .iter()
                    .map(|b| b.iter().map(|&c| row[c]).sum())
                    .collect()
            })
            .collect();
        IntMatrix {
            rows,
            cols: blocks.len(),
        }
    }

    /// Count-preserving canonical key: row signs normalized, rows and
    /// columns sorted, iterated to a fixpoint. Used only for memoization;
    /// imperfect canonicalization costs duplicate work, never correctness.
    fn canonical_key(&self) -> IntMatrix {
        let mut m = self.clone();
        for _ in 0..6 {
            let before = m.clone();
            for row in m.rows.iter_mut() {
                if let Some(first) = row.iter().find(|&&x| x != 0) {
                    if *first < 0 {
                        for x in row.iter_mut() {
                            *x = -*x;
                        }
                    }
                }
            }
            let mut cols: Vec<Vec<i64>> = (0..m.cols)
                .map(|j| m.rows.iter().map(|r| r[j]).collect())
                .collect();
            cols.sort_unstable();
            m.rows = (0..m.rows.len())
                .map(|i| cols.iter().map(|c| c[i]).collect())
                .collect();
            m.rows.sort_unstable();
            if m == before {
                break;
            }
        }
        m
    }
}

/// Exact `#{x in [0, ell-1]^t : Mx = 0}`.
pub fn weak_count(m: &IntMatrix, ell: u64) -> u128 {
    if ell == 0 {
        return 0;
    }
    CountingProblem::new(m).count(ell as i64 - 1)
}

/// Vertex set of `{x in [0,1]^t : Mx = 0}`.
pub fn polytope_vertices(m: &IntMatrix) -> Vec<Vec<Rat>> {
    vertices::polytope_vertices(m)
}

/// Calls `f` with every set partition of `{0, .., n-1}` as a restricted
/// growth string (`a[i]` = block of element `i`).
pub fn for_each_set_partition(n: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 {
        f(&[]);
        return;
    }
    let mut a = vec![0usize; n];
    loop {
        f(&a);
        let mut i = n - 1;
        loop {
            if i == 0 {
                return;
            }
            let prefix_max = a[..i].iter().copied().max().unwrap_or(0);
            if a[i] <= prefix_max {
                break;
            }
            i -= 1;
        }
        a[i] += 1;
        for j in i + 1..n {
            a[j] = 0;
        }
    }
}

/// Blocks of a restricted growth string.
pub fn blocks_of_rgs(a: &[usize]) -> Vec<Vec<usize>> {
    let k = a.iter().copied().max().map_or(0, |m| m + 1);
    let mut blocks = vec![vec![]; k];
    for (i, &b) in a.iter().enumerate() {
        blocks[b].push(i);
    }
    blocks
}

/// Moebius value of a set partition in the partition lattice, relative to
/// the all-singletons bottom: product over blocks of `(-1)^(|B|-1) (|B|-1)!`.
pub fn mobius_partition(blocks: &[Vec<usize>]) -> i64 {
    blocks
        .iter()
        .map(|b| {
            let k = b.len() as i64;
            let factorial: i64 = (1..k).product();
            if (k - 1) % 2 == 0 {
                factorial
            } else {
                -factorial
            }
        })
        .product()
}

/// Merged systems and their accumulated Moebius weights, grouped by the
/// canonical matrix key so identical merges are counted once.
fn weighted_merges(m: &IntMatrix) -> Vec<(IntMatrix, i64)> {
    let mut weights: HashMap<IntMatrix, i64> = HashMap::new();
    for_each_set_partition(m.cols, |rgs| {
        let blocks = blocks_of_rgs(rgs);
        let merged = m.merge_columns(&blocks).canonical_key();
        *weights.entry(merged).or_insert(0) += mobius_partition(&blocks);
    });
    weights.into_iter().filter(|(_, w)| *w != 0).collect()
}

/// Exact count of solutions in `[0, ell-1]^t` with pairwise distinct
/// coordinates.
pub fn distinct_count(m: &IntMatrix, ell: u64) -> u128 {
    distinct_counts(m, &[ell])[0]
}

/// Distinct-coordinate counts at several box sizes, sharing the per-merge
/// counting setup.
pub fn distinct_counts(m: &IntMatrix, ells: &[u64]) -> Vec<u128> {
    let merges = weighted_merges(m);
    let problems: Vec<(CountingProblem, i64)> = merges
        .iter()
        .map(|(merged, w)| (CountingProblem::new(merged), *w))
        .collect();
    ells.iter()
        .map(|&ell| {
            let total: i128 = problems
                .iter()
                .map(|(prob, w)| {
                    if ell == 0 {
                        0
                    } else {
                        i128::try_from(prob.count(ell as i64 - 1)).expect("count fits i128")
                            * *w as i128
                    }
                })
                .sum();
            assert!(total >= 0, "inclusion-exclusion total must be nonnegative");
            total as u128
        })
        .collect()
}

fn weak_qp_cache() -> &'static Mutex<HashMap<IntMatrix, Arc<QuasiPolynomial>>> {
    static CACHE: OnceLock<Mutex<HashMap<IntMatrix, Arc<QuasiPolynomial>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn weak_qp_cached(key: &IntMatrix) -> Result<Arc<QuasiPolynomial>> {
    if let Some(hit) = weak_qp_cache().lock().unwrap().get(key) {
        return Ok(hit.clone());
    }
    let qp = Arc::new(weak_count_quasipoly(key)?);
    weak_qp_cache()
        .lock()
        .unwrap()
        .entry(key.clone())
        .or_insert_with(|| qp.clone());
    Ok(qp)
}

/// Closed form of [`distinct_count`] as a quasi-polynomial in the box size:
/// the Moebius-weighted sum of the merged systems' box-count
/// quasi-polynomials.
pub fn distinct_count_quasipoly(m: &IntMatrix) -> Result<QuasiPolynomial> {
    let merges = weighted_merges(m);
    let terms: Vec<(i64, Arc<QuasiPolynomial>)> = merges
        .par_iter()
        .map(|(merged, w)| Ok((*w, weak_qp_cached(merged)?)))
        .collect::<Result<_>>()?;
    Ok(QuasiPolynomial::weighted_sum(
        terms.iter().map(|(w, q)| (rat_int(*w), &**q)),
    ))
}

/// Per-class solution counter: the distinct-count quasi-polynomial of a
/// monochrome matrix, i.e. the number of balanced assignments inducing the
/// encoded partition, as a function of the value range.
pub fn sols_quasipoly(m: &MonochromeMatrix) -> Result<QuasiPolynomial> {
    distinct_count_quasipoly(&IntMatrix::from_monochrome(m))
}
