//! Vertex enumeration for `P = {x in [0,1]^t : Mx = 0}`.
//!
//! Every vertex is the unique solution of `Mx = 0` together with a set of
//! tight cube constraints `x_i = 0` or `x_i = 1`, so brute intersection of
//! the fix-patterns finds them all: choose the free coordinate set `F`
//! (which must give `M` restricted to `F` full column rank, hence
//! `|F| <= rank M`), fix the rest to 0/1 in every way, solve, and keep the
//! feasible unique solutions. The vertex denominators bound the period of
//! the box-count quasi-polynomial and the polytope dimension bounds its
//! degree.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::kernel::integer_rank;
use super::IntMatrix;
use crate::partitions::rref;
use crate::rat::Rat;

/// Degree and period certificates for the box-count quasi-polynomial.
pub struct PolytopeProfile {
    /// Dimension of the solution polytope (kernel dimension for the
    /// zero-row-sum systems counted here).
    pub dim: usize,
    /// Lcm of all vertex coordinate denominators.
    pub period_lcm: u64,
    pub vertices: Vec<Vec<Rat>>,
}

/// All vertices of `{x in [0,1]^t : Mx = 0}`, sorted and deduplicated.
pub fn polytope_vertices(m: &IntMatrix) -> Vec<Vec<Rat>> {
    let t = m.cols;
    let p = m.rows.len();
    let rank = integer_rank(m);
    let mut found: std::collections::BTreeSet<Vec<Rat>> = Default::default();
    for mask in 0u32..(1 << t) {
        let free: Vec<usize> = (0..t).filter(|&i| mask >> i & 1 == 1).collect();
        if free.len() > rank {
            continue;
        }
        let fixed: Vec<usize> = (0..t).filter(|&i| mask >> i & 1 == 0).collect();
        let sub = IntMatrix {
            rows: m
                .rows
                .iter()
                .map(|row| free.iter().map(|&i| row[i]).collect())
                .collect(),
            cols: free.len(),
        };
        if integer_rank(&sub) != free.len() {
            continue;
        }
        for pattern in 0u32..(1 << fixed.len()) {
            // rhs = -(sum of fixed columns set to one)
            let mut rhs = vec![0i64; p];
            for (bit, &col) in fixed.iter().enumerate() {
                if pattern >> bit & 1 == 1 {
                    for r in 0..p {
                        rhs[r] -= m.rows[r][col];
                    }
                }
            }
            let Some(solution) = solve_unique(&sub, &rhs) else {
                continue;
            };
            if solution.iter().any(|x| x.is_negative() || x > &Rat::one()) {
                continue;
            }
            let mut point = vec![Rat::zero(); t];
            for (bit, &col) in fixed.iter().enumerate() {
                if pattern >> bit & 1 == 1 {
                    point[col] = Rat::one();
                }
            }
            for (k, &col) in free.iter().enumerate() {
                point[col] = solution[k].clone();
            }
            found.insert(point);
        }
    }
    found.into_iter().collect()
}

/// Solves `A x = b` where `A` has full column rank; `None` if inconsistent.
fn solve_unique(a: &IntMatrix, b: &[i64]) -> Option<Vec<Rat>> {
    let f = a.cols;
    if f == 0 {
        return if b.iter().all(|&x| x == 0) {
            Some(vec![])
        } else {
            None
        };
    }
    let aug: Vec<Vec<Rat>> = a
        .rows
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            row.iter()
                .map(|&x| Rat::from_integer(x.into()))
                .chain(std::iter::once(Rat::from_integer(rhs.into())))
                .collect()
        })
        .collect();
    let ech = rref(&aug);
    // Inconsistent when a pivot lands in the rhs column.
    for row in &ech {
        if row[..f].iter().all(Zero::is_zero) && !row[f].is_zero() {
            return None;
        }
    }
    // Full column rank: the echelon is the identity on the first f columns.
    let mut x = vec![Rat::zero(); f];
    for (r, item) in x.iter_mut().enumerate() {
        *item = ech[r][f].clone();
    }
    Some(x)
}

pub fn profile(m: &IntMatrix) -> PolytopeProfile {
    let vertices = polytope_vertices(m);
    let mut period_lcm = 1u64;
    for v in &vertices {
        for c in v {
            let den: u64 = c
                .denom()
                .to_string()
                .parse()
                .expect("vertex denominator fits u64");
            period_lcm = period_lcm.lcm(&den);
        }
    }
    PolytopeProfile {
        dim: m.cols - integer_rank(m),
        period_lcm,
        vertices,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use num_bigint::BigInt;

    fn mat(rows: Vec<Vec<i64>>, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols }
    }

    fn point(coords: &[(i64, i64)]) -> Vec<Rat> {
        coords.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn segment_vertices() {
        let m = mat(vec![], 1);
        let vs = polytope_vertices(&m);
        assert_eq!(vs, vec![point(&[(0, 1)]), point(&[(1, 1)])]);
    }

    #[test]
    fn transfer_polytope_vertices() {
        // A+B = C+D inside the unit cube: all six listed points are
        // vertices and every coordinate is integral.
        let m = mat(vec![vec![1, 1, -1, -1]], 4);
        let prof = profile(&m);
        assert_eq!(prof.dim, 3);
        assert_eq!(prof.period_lcm, 1);
        for expect in [
            point(&[(0, 1), (0, 1), (0, 1), (0, 1)]),
            point(&[(1, 1), (1, 1), (1, 1), (1, 1)]),
            point(&[(1, 1), (0, 1), (1, 1), (0, 1)]),
            point(&[(1, 1), (0, 1), (0, 1), (1, 1)]),
            point(&[(0, 1), (1, 1), (1, 1), (0, 1)]),
            point(&[(0, 1), (1, 1), (0, 1), (1, 1)]),
        ] {
            assert!(prof.vertices.contains(&expect), "{expect:?}");
        }
    }

    #[test]
    fn halving_vertex_gives_period_two() {
        let m = mat(vec![vec![2, -1, -1]], 3);
        let prof = profile(&m);
        assert!(prof.vertices.contains(&point(&[(1, 2), (1, 1), (0, 1)])));
        assert_eq!(prof.period_lcm % 2, 0);
        assert_eq!(prof.dim, 2);
    }

    #[test]
    fn every_vertex_satisfies_constraints() {
        let m = mat(vec![vec![2, -1, -1, 0], vec![0, 1, -2, 1]], 4);
        for v in polytope_vertices(&m) {
            for row in &m.rows {
                let s: Rat = row
                    .iter()
                    .zip(&v)
                    .map(|(&c, x)| Rat::from_integer(BigInt::from(c)) * x)
                    .sum();
                assert!(s.is_zero());
            }
            assert!(v.iter().all(|x| !x.is_negative() && x <= &Rat::one()));
        }
    }
}
