//! Integer kernel bases and fast lattice-point counting in a box.
//!
//! `Mx = 0` with `x` in `[0, n]^t` is counted by parametrizing the integer
//! kernel with a basis in column-echelon form and walking the coordinates
//! in order: the echelon staircase guarantees every coordinate is bounded
//! by the time it is chosen, and the innermost coordinate is counted as an
//! interval length instead of being enumerated.

use super::IntMatrix;

fn floor_div(a: i64, b: i64) -> i64 {
    let q = a / b;
    if a % b != 0 && ((a % b < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -floor_div(-a, b)
}

/// Column-echelon reduction by unimodular column operations.
///
/// Returns `(echelon, transform, rank)` with `echelon = a * transform`
/// (columns combined), both as dense row-major `i128`.
fn column_echelon(a: &[Vec<i128>], track: bool) -> (Vec<Vec<i128>>, Vec<Vec<i128>>, usize) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<i128>> = a.to_vec();
    let mut u: Vec<Vec<i128>> = (0..cols)
        .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
        .collect();
    let swap_cols = |m: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    };
    let add_col = |m: &mut Vec<Vec<i128>>, dst: usize, src: usize, q: i128| {
        for row in m.iter_mut() {
            let v = row[src];
            row[dst] -= q * v;
        }
    };
    let mut c = 0;
    for r in 0..rows {
        if c == cols {
            break;
        }
        loop {
            let Some(j) = (c..cols)
                .filter(|&j| m[r][j] != 0)
                .min_by_key(|&j| m[r][j].unsigned_abs())
            else {
                break;
            };
            if j != c {
                swap_cols(&mut m, c, j);
                if track {
                    swap_cols(&mut u, c, j);
                }
            }
            let mut done = true;
            for k in c + 1..cols {
                if m[r][k] != 0 {
                    let q = m[r][k] / m[r][c];
                    if q != 0 {
                        add_col(&mut m, k, c, q);
                        if track {
                            add_col(&mut u, k, c, q);
                        }
                    }
                    if m[r][k] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                if m[r][c] < 0 {
                    for row in m.iter_mut() {
                        row[c] = -row[c];
                    }
                    if track {
                        for row in u.iter_mut() {
                            row[c] = -row[c];
                        }
                    }
                }
                c += 1;
                break;
            }
        }
    }
    (m, u, c)
}

/// Basis of the full integer kernel `{x in Z^t : Mx = 0}`.
///
/// The transform is unimodular, so the returned vectors span the kernel
/// lattice exactly (not a finite-index sublattice).
pub fn integer_kernel_basis(m: &IntMatrix) -> Vec<Vec<i64>> {
    let a: Vec<Vec<i128>> = m
        .rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let a = if a.is_empty() {
        vec![vec![0i128; m.cols]]
    } else {
        a
    };
    let (ech, u, rank) = column_echelon(&a, true);
    debug_assert!(ech.iter().all(|row| row[rank..].iter().all(|&x| x == 0)));
    (rank..m.cols)
        .map(|j| {
            (0..m.cols)
                .map(|i| i64::try_from(u[i][j]).expect("kernel basis entry fits i64"))
                .collect()
        })
        .collect()
}

/// Rank of the matrix over the rationals.
pub fn integer_rank(m: &IntMatrix) -> usize {
    if m.rows.is_empty() {
        return 0;
    }
    let a: Vec<Vec<i128>> = m
        .rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    column_echelon(&a, false).2
}

/// Prepared counter for `#{x in [0, n]^t : Mx = 0}` at many box sizes.
pub struct CountingProblem {
    /// Kernel basis as a `t x dim` matrix in column-echelon form.
    basis: Vec<Vec<i64>>,
    dim: usize,
    /// Rows whose last nonzero coefficient sits in column `j`.
    completes_at: Vec<Vec<usize>>,
    /// Rows with a nonzero coefficient in column `j` (for partial updates).
    active_at: Vec<Vec<usize>>,
}

impl CountingProblem {
    pub fn new(m: &IntMatrix) -> Self {
        let t = m.cols;
        let kernel = integer_kernel_basis(m);
        let dim = kernel.len();
        // Re-echelon the basis itself so every coordinate gets a pivot row.
        let as_cols: Vec<Vec<i128>> = (0..t)
            .map(|i| (0..dim).map(|j| kernel[j][i] as i128).collect())
            .collect();
        let (ech, _, pivots) = column_echelon(&as_cols, false);
        assert_eq!(pivots, dim, "kernel basis has full column rank");
        let basis: Vec<Vec<i64>> = (0..t)
            .map(|i| {
                (0..dim)
                    .map(|j| i64::try_from(ech[i][j]).expect("echelon entry fits i64"))
                    .collect()
            })
            .collect();
        let mut completes_at = vec![vec![]; dim];
        let mut active_at = vec![vec![]; dim];
        for (i, row) in basis.iter().enumerate() {
            if let Some(last) = (0..dim).rev().find(|&j| row[j] != 0) {
                completes_at[last].push(i);
                for (j, &c) in row.iter().enumerate() {
                    if c != 0 {
                        active_at[j].push(i);
                    }
                }
            }
        }
        CountingProblem {
            basis,
            dim,
            completes_at,
            active_at,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Exact count of lattice points of `Mx = 0` in `[0, n]^t`.
    pub fn count(&self, n: i64) -> u128 {
        if n < 0 {
            return 0;
        }
        if self.dim == 0 {
            return 1;
        }
        let mut partial = vec![0i64; self.basis.len()];
        self.walk(0, &mut partial, n)
    }

    fn bounds(&self, depth: usize, partial: &[i64], n: i64) -> (i64, i64) {
        let mut lo = i64::MIN;
        let mut hi = i64::MAX;
        for &i in &self.completes_at[depth] {
            let c = self.basis[i][depth];
            let p = partial[i];
            // 0 <= p + c*y <= n
            let (a, b) = if c > 0 {
                (ceil_div(-p, c), floor_div(n - p, c))
            } else {
                (ceil_div(n - p, c), floor_div(-p, c))
            };
            lo = lo.max(a);
            hi = hi.min(b);
        }
        (lo, hi)
    }

    fn walk(&self, depth: usize, partial: &mut [i64], n: i64) -> u128 {
        let (lo, hi) = self.bounds(depth, partial, n);
        if lo > hi {
            return 0;
        }
        if depth + 1 == self.dim {
            return (hi - lo + 1) as u128;
        }
        let mut total = 0u128;
        for &i in &self.active_at[depth] {
            partial[i] += self.basis[i][depth] * lo;
        }
        let mut y = lo;
        loop {
            total += self.walk(depth + 1, partial, n);
            if y == hi {
                break;
            }
            y += 1;
            for &i in &self.active_at[depth] {
                partial[i] += self.basis[i][depth];
            }
        }
        for &i in &self.active_at[depth] {
            partial[i] -= self.basis[i][depth] * hi;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: Vec<Vec<i64>>, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols }
    }

    fn brute(m: &IntMatrix, n: i64) -> u128 {
        let t = m.cols;
        let mut count = 0u128;
        let mut x = vec![0i64; t];
        fn rec(m: &IntMatrix, x: &mut Vec<i64>, i: usize, n: i64, count: &mut u128) {
            if i == x.len() {
                if m.rows
                    .iter()
                    .all(|row| row.iter().zip(x.iter()).map(|(&c, &v)| c * v).sum::<i64>() == 0)
                {
                    *count += 1;
                }
                return;
            }
            for v in 0..=n {
                x[i] = v;
                rec(m, x, i + 1, n, count);
            }
        }
        rec(m, &mut x, 0, n, &mut count);
        count
    }

    #[test]
    fn kernel_basis_spans_and_saturates() {
        let m = mat(vec![vec![2, -1, -1]], 3);
        let basis = integer_kernel_basis(&m);
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert_eq!(2 * b[0] - b[1] - b[2], 0);
        }
        // (1,1,1) and (0,1,-1) generate; in particular (1,1,1) must be
        // reachable (saturation: no index-2 sublattice).
        let dets: Vec<i64> = vec![
            basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0],
            basis[0][0] * basis[1][2] - basis[0][2] * basis[1][0],
            basis[0][1] * basis[1][2] - basis[0][2] * basis[1][1],
        ];
        let g = dets.iter().fold(0i64, |acc, &d| {
            let mut a = acc.abs();
            let mut b = d.abs();
            while b != 0 {
                let t = b;
                b = a % b;
                a = t;
            }
            a
        });
        assert_eq!(g, 1, "kernel basis must be primitive");
    }

    #[test]
    fn counts_match_brute_force() {
        let cases = vec![
            mat(vec![vec![1, 1, -1, -1]], 4),
            mat(vec![vec![2, -1, -1]], 3),
            mat(vec![vec![2, -1, -1], vec![2, -1, -1]], 3),
            mat(vec![vec![1, 1, -1, -1], vec![1, -1, 1, -1]], 4),
            mat(vec![vec![2, 0, -1, -1], vec![0, 2, -1, -1]], 4),
            mat(vec![vec![3, -1, -2]], 3),
            mat(vec![vec![2, -2, 1, -1], vec![0, 1, -2, 1]], 4),
            mat(vec![], 3),
            mat(vec![vec![0, 0, 0]], 3),
        ];
        for m in &cases {
            let prob = CountingProblem::new(m);
            for n in 0..=7 {
                assert_eq!(prob.count(n), brute(m, n), "rows {:?} n={n}", m.rows);
            }
        }
    }

    #[test]
    fn empty_cube_and_unconstrained() {
        let free = mat(vec![], 2);
        let prob = CountingProblem::new(&free);
        assert_eq!(prob.count(3), 16);
        assert_eq!(prob.count(-1), 0);
    }

    #[test]
    fn known_closed_forms() {
        // Solutions of A+B=C+D in [0, n]^4 follow (2 l^3 + l)/3 at l = n+1.
        let m = mat(vec![vec![1, 1, -1, -1]], 4);
        let prob = CountingProblem::new(&m);
        for ell in 1i64..=20 {
            let expected = (2 * ell * ell * ell + ell) / 3;
            assert_eq!(prob.count(ell - 1), expected as u128);
        }
        // Solutions of 2A = B + C follow floor((l^2+1)/2).
        let m = mat(vec![vec![2, -1, -1]], 3);
        let prob = CountingProblem::new(&m);
        for ell in 1i64..=20 {
            assert_eq!(prob.count(ell - 1), ((ell * ell + 1) / 2) as u128);
        }
    }
}
