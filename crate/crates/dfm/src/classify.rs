//! Enumeration of contributory partitions, one representative per
//! isomorphism class.
//!
//! The pipeline follows the matrix characterization: enumerate absolute
//! matrices (row patterns `(2,1,1,0,..)` or `(1,1,1,1,0,..)`, column sums
//! positive and even) up to row and column permutations; assign signs to
//! each row in every inequivalent way modulo row permutations, row
//! negations, and column permutations; keep the sign patterns whose
//! echelon form passes the satisfiability criterion; color each survivor
//! into a display matrix and read off the partition. For small `p` an
//! independent oracle scans every partition of the ground set directly.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::partitions::{
    display_matrix, is_satisfiable, partition_of_display, AbsoluteMatrix, DisplayEntry,
    DisplayMatrix, MonochromeMatrix, Partition, TripleIndex,
};
use crate::qpoly::QuasiPolynomial;
use crate::wreath::{canonical_form, orbit_size};

/// Classification scans grow as `p! 8^p` and worse.
pub const MAX_CLASSIFY_P: usize = 5;

/// One isomorphism class of contributory partitions: a representative, the
/// orbit size under the symmetry group, and (when computed) the exact
/// solution-count quasi-polynomial shared by the whole class.
#[derive(Debug, Clone)]
pub struct IsoClass {
    pub representative: Partition,
    pub orbit_size: u64,
    pub sols: Option<QuasiPolynomial>,
}

fn guard(p: usize) -> Result<()> {
    if p > MAX_CLASSIFY_P {
        return Err(Error::ResourceLimit(format!(
            "classification guard: p = {p} exceeds {MAX_CLASSIFY_P}"
        )));
    }
    Ok(())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut items: Vec<usize> = (0..n).collect();
    fn rec(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            rec(items, k + 1, out);
            items.swap(k, i);
        }
    }
    rec(&mut items, 0, &mut out);
    out
}

/// Cheap normal form under row and column permutations: alternately sort
/// rows and columns to a fixpoint. Not canonical (members of one class can
/// land on different fixpoints), but class-preserving, so it serves as a
/// pre-dedup filter in front of the exact canonical form.
fn rough_rowcol<T: Ord + Copy>(rows: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut m: Vec<Vec<T>> = rows.to_vec();
    for _ in 0..8 {
        let before = m.clone();
        let cols = m[0].len();
        let mut col_vecs: Vec<Vec<T>> = (0..cols)
            .map(|j| m.iter().map(|r| r[j]).collect())
            .collect();
        col_vecs.sort_unstable();
        m = (0..m.len())
            .map(|i| col_vecs.iter().map(|c| c[i]).collect())
            .collect();
        m.sort_unstable();
        if m == before {
            break;
        }
    }
    m
}

/// Canonical form under row and column permutations: the minimum, over all
/// row orders, of the matrix with columns sorted.
fn canonical_rowcol(rows: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let p = rows.len();
    let mut best: Option<Vec<Vec<u8>>> = None;
    for perm in permutations(p) {
        let permuted: Vec<&Vec<u8>> = perm.iter().map(|&i| &rows[i]).collect();
        let cols = rows[0].len();
        let mut col_vecs: Vec<Vec<u8>> = (0..cols)
            .map(|j| permuted.iter().map(|r| r[j]).collect())
            .collect();
        col_vecs.sort_unstable();
        let candidate: Vec<Vec<u8>> = (0..p)
            .map(|i| col_vecs.iter().map(|c| c[i]).collect())
            .collect();
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    }
    best.expect("nonempty matrix")
}

/// Cheap class-preserving normal form under row permutations, row
/// negations, and column permutations; pre-dedup only.
fn rough_signed(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = rows.to_vec();
    for _ in 0..8 {
        let before = m.clone();
        for row in m.iter_mut() {
            if let Some(&first) = row.iter().find(|&&x| x != 0) {
                if first < 0 {
                    for x in row.iter_mut() {
                        *x = -*x;
                    }
                }
            }
        }
        m = rough_rowcol(&m);
        if m == before {
            break;
        }
    }
    m
}

/// Canonical form under row permutations, row negations, and column
/// permutations.
fn canonical_signed(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let p = rows.len();
    let mut best: Option<Vec<Vec<i64>>> = None;
    for perm in permutations(p) {
        for neg_mask in 0u32..(1 << p) {
            let signed: Vec<Vec<i64>> = perm
                .iter()
                .enumerate()
                .map(|(slot, &i)| {
                    if neg_mask >> slot & 1 == 1 {
                        rows[i].iter().map(|&x| -x).collect()
                    } else {
                        rows[i].clone()
                    }
                })
                .collect();
            let cols = signed[0].len();
            let mut col_vecs: Vec<Vec<i64>> = (0..cols)
                .map(|j| signed.iter().map(|r| r[j]).collect())
                .collect();
            col_vecs.sort_unstable();
            let candidate: Vec<Vec<i64>> = (0..p)
                .map(|i| col_vecs.iter().map(|c| c[i]).collect())
                .collect();
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
    }
    best.expect("nonempty matrix")
}

/// One representative per equivalence class, under row and column
/// permutations, of the `p x t` absolute matrices of contributory
/// partitions, for `3 <= t <= 2p` (`t >= 4` when `p` is odd).
///
/// Matrices are built as sorted column sequences. A candidate column is a
/// nonzero vector over `{0,1,2}` with even sum; per-row budgets (absolute
/// row sum 4, at most one `2`) prune the walk, and a completed matrix
/// automatically has valid rows: a spent budget means `2+1+1` when the row
/// took a `2` and `1+1+1+1` otherwise.
pub fn enumerate_absolute(p: usize) -> Result<Vec<AbsoluteMatrix>> {
    guard(p)?;
    if p == 0 {
        return Ok(vec![]);
    }
    let mut columns: Vec<Vec<u8>> = vec![];
    for code in 0..3usize.pow(p as u32) {
        let mut v = Vec::with_capacity(p);
        let mut c = code;
        for _ in 0..p {
            v.push((c % 3) as u8);
            c /= 3;
        }
        let sum: u8 = v.iter().sum();
        if sum >= 2 && sum % 2 == 0 {
            columns.push(v);
        }
    }
    columns.sort_unstable();
    // last_support[r]: greatest column index with a nonzero entry in row r.
    let last_support: Vec<usize> = (0..p)
        .map(|r| {
            (0..columns.len())
                .rev()
                .find(|&j| columns[j][r] != 0)
                .expect("every row is served by some column")
        })
        .collect();

    let t_min = if p % 2 == 1 { 4 } else { 3 };
    let mut rough: HashSet<Vec<Vec<u8>>> = HashSet::new();
    let mut budgets = vec![4u8; p];
    let mut has_two = vec![false; p];
    let mut chosen: Vec<usize> = vec![];
    dfs_columns(
        &columns,
        &last_support,
        t_min,
        2 * p,
        0,
        &mut budgets,
        &mut has_two,
        &mut chosen,
        &mut rough,
    );
    let found: HashSet<Vec<Vec<u8>>> = rough.iter().map(|m| canonical_rowcol(m)).collect();
    let mut out: Vec<AbsoluteMatrix> = found
        .into_iter()
        .map(|rows| AbsoluteMatrix { rows })
        .collect();
    out.sort_unstable_by(|a, b| (a.cols(), &a.rows).cmp(&(b.cols(), &b.rows)));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs_columns(
    columns: &[Vec<u8>],
    last_support: &[usize],
    t_min: usize,
    t_max: usize,
    next_idx: usize,
    budgets: &mut [u8],
    has_two: &mut [bool],
    chosen: &mut Vec<usize>,
    found: &mut HashSet<Vec<Vec<u8>>>,
) {
    let p = budgets.len();
    if budgets.iter().all(|&b| b == 0) {
        if chosen.len() >= t_min {
            let matrix: Vec<Vec<u8>> = (0..p)
                .map(|r| chosen.iter().map(|&j| columns[j][r]).collect())
                .collect();
            found.insert(rough_rowcol(&matrix));
        }
        return;
    }
    if chosen.len() == t_max {
        return;
    }
    // Columns are chosen in nondecreasing index order, so a row whose
    // budget is open must still be reachable from the remaining suffix.
    if (0..p).any(|r| budgets[r] > 0 && last_support[r] < next_idx) {
        return;
    }
    for idx in next_idx..columns.len() {
        let col = &columns[idx];
        let fits = (0..p).all(|r| col[r] <= budgets[r] && !(col[r] == 2 && has_two[r]));
        if !fits {
            continue;
        }
        let mut took_two = [false; 8];
        for r in 0..p {
            budgets[r] -= col[r];
            if col[r] == 2 {
                has_two[r] = true;
                took_two[r] = true;
            }
        }
        chosen.push(idx);
        dfs_columns(
            columns,
            last_support,
            t_min,
            t_max,
            idx,
            budgets,
            has_two,
            chosen,
            found,
        );
        chosen.pop();
        for r in 0..p {
            budgets[r] += col[r];
            if took_two[r] {
                has_two[r] = false;
            }
        }
    }
}

/// All sign assignments of an absolute matrix that produce valid rows (one
/// `2` with two `-1`s, one `-2` with two `1`s, or two `1`s with two `-1`s),
/// up to row permutations, row negations, and column permutations. Row sums
/// are zero by construction. Satisfiability is not filtered here.
pub fn enumerate_signings(a: &AbsoluteMatrix) -> Vec<MonochromeMatrix> {
    let per_row: Vec<Vec<Vec<i64>>> = a
        .rows
        .iter()
        .map(|row| {
            let ones: Vec<usize> = (0..row.len()).filter(|&j| row[j] == 1).collect();
            let two = (0..row.len()).find(|&j| row[j] == 2);
            let mut options = vec![];
            match two {
                Some(j2) => {
                    // +2 with both ones negative, or the global negation.
                    for sign in [1i64, -1] {
                        let mut r: Vec<i64> = row.iter().map(|&x| x as i64).collect();
                        r[j2] = 2 * sign;
                        for &j in &ones {
                            r[j] = -sign;
                        }
                        options.push(r);
                    }
                }
                None => {
                    // Choose two of the four ones to negate.
                    for i in 0..4 {
                        for j in i + 1..4 {
                            let mut r: Vec<i64> = row.iter().map(|&x| x as i64).collect();
                            r[ones[i]] = -1;
                            r[ones[j]] = -1;
                            options.push(r);
                        }
                    }
                }
            }
            options
        })
        .collect();

    let mut rough: HashSet<Vec<Vec<i64>>> = HashSet::new();
    let mut current: Vec<Vec<i64>> = Vec::with_capacity(a.p());
    fn rec(
        per_row: &[Vec<Vec<i64>>],
        depth: usize,
        current: &mut Vec<Vec<i64>>,
        rough: &mut HashSet<Vec<Vec<i64>>>,
    ) {
        if depth == per_row.len() {
            rough.insert(rough_signed(current));
            return;
        }
        for option in &per_row[depth] {
            current.push(option.clone());
            rec(per_row, depth + 1, current, rough);
            current.pop();
        }
    }
    rec(&per_row, 0, &mut current, &mut rough);
    let found: HashSet<Vec<Vec<i64>>> = rough.iter().map(|m| canonical_signed(m)).collect();
    let mut out: Vec<MonochromeMatrix> = found.into_iter().map(MonochromeMatrix::new).collect();
    out.sort_unstable();
    out
}

/// Colors a satisfiable monochrome matrix into a display matrix: within
/// each row, the first `1` (left to right) becomes `1r` and the second
/// `1b`, and likewise for the `-1` pair. Any coloring choice lands in the
/// same isomorphism class.
pub fn color_monochrome(m: &MonochromeMatrix) -> DisplayMatrix {
    let rows = m
        .rows
        .iter()
        .map(|row| {
            let mut pos_seen = 0;
            let mut neg_seen = 0;
            row.iter()
                .map(|&x| match x {
                    0 => DisplayEntry::Zero,
                    2 => DisplayEntry::Two,
                    -2 => DisplayEntry::NegTwo,
                    1 => {
                        pos_seen += 1;
                        if pos_seen == 1 {
                            DisplayEntry::OneR
                        } else {
                            DisplayEntry::OneB
                        }
                    }
                    -1 => {
                        neg_seen += 1;
                        if neg_seen == 1 {
                            DisplayEntry::NegOneR
                        } else {
                            DisplayEntry::NegOneB
                        }
                    }
                    _ => unreachable!("monochrome entries lie in {{0,+-1,+-2}}"),
                })
                .collect()
        })
        .collect();
    DisplayMatrix { rows }
}

/// One representative per isomorphism class of contributory partitions,
/// with orbit sizes attached. Solution-count quasi-polynomials are left
/// unset; the moment assembly fills them in.
pub fn isom_representatives(p: usize) -> Result<Vec<IsoClass>> {
    guard(p)?;
    if p == 0 {
        return Ok(vec![]);
    }
    let absolutes = enumerate_absolute(p)?;
    let monochromes: Vec<MonochromeMatrix> = absolutes
        .par_iter()
        .map(|a| {
            enumerate_signings(a)
                .into_iter()
                .filter(|m| is_satisfiable(m).expect("signed rows sum to zero"))
                .collect::<Vec<_>>()
        })
        .reduce(Vec::new, |mut acc, mut chunk| {
            acc.append(&mut chunk);
            acc
        });
    let mut classes: Vec<IsoClass> = monochromes
        .par_iter()
        .map(|m| {
            let display = color_monochrome(m);
            let representative =
                partition_of_display(&display).expect("display columns partition the ground set");
            let orbit_size = orbit_size(&representative)?;
            Ok(IsoClass {
                representative,
                orbit_size,
                sols: None,
            })
        })
        .collect::<Result<_>>()?;
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(classes)
}

/// Direct oracle: every partition of `[p] x [2] x [2]` that is globally
/// even, locally odd, and satisfiable, found by scanning all partitions of
/// the `4p`-element ground set.
pub fn bruteforce_con(p: usize) -> Result<Vec<Partition>> {
    if p > 3 {
        return Err(Error::ResourceLimit(format!(
            "partition scan guard: Bell(4p) at p = {p} is out of reach"
        )));
    }
    let n = 4 * p;
    let mut out = vec![];
    let mut sizes = [0usize; 12];
    let mut side0 = [0u32; 12];
    let mut side1 = [0u32; 12];
    let mut eq_counts = [[0usize; 3]; 12];
    crate::latcount::for_each_set_partition(n, |rgs| {
        let k = rgs.iter().copied().max().map_or(0, |m| m + 1);
        sizes[..k].fill(0);
        side0[..k].fill(0);
        side1[..k].fill(0);
        for row in eq_counts.iter_mut().take(k) {
            row[..p].fill(0);
        }
        for (i, &b) in rgs.iter().enumerate() {
            let (e, s) = (i / 4, (i / 2) % 2);
            sizes[b] += 1;
            eq_counts[b][e] += 1;
            if s == 0 {
                side0[b] |= 1 << e;
            } else {
                side1[b] |= 1 << e;
            }
        }
        // Globally even.
        if sizes[..k].iter().any(|&s| s % 2 == 1) {
            return;
        }
        // Locally odd at every equation.
        for e in 0..p {
            if !(0..k).any(|b| eq_counts[b][e] % 2 == 1) {
                return;
            }
        }
        // A split class (both sides of one equation) kills satisfiability.
        if (0..k).any(|b| side0[b] & side1[b] != 0) {
            return;
        }
        let mut classes: Vec<Vec<TripleIndex>> = vec![vec![]; k];
        for (i, &b) in rgs.iter().enumerate() {
            classes[b].push(TripleIndex::new(i / 4, (i / 2) % 2, i % 2));
        }
        let partition = Partition::new(p, classes);
        let mono = display_matrix(&partition)
            .expect("non-split GELO partitions encode")
            .mono();
        if is_satisfiable(&mono).expect("GELO display rows sum to zero") {
            out.push(partition);
        }
    });
    Ok(out)
}

/// Monochrome matrix of a partition's display encoding.
pub fn monochrome_of(partition: &Partition) -> Result<MonochromeMatrix> {
    Ok(display_matrix(partition)?.mono())
}

/// Canonical forms of the representatives, for duplicate detection.
pub fn canonical_forms(classes: &[IsoClass]) -> Result<Vec<Partition>> {
    classes
        .par_iter()
        .map(|c| canonical_form(&c.representative))
        .collect()
}
