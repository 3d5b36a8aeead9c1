//! Partitions of the index set `[p] x [2] x [2]` and their matrix encodings.
//!
//! Each triple `(e, s, v)` addresses one term in a system of `p` equations,
//! each equation having two sides with two terms per side. A partition of
//! the triples records which terms share a value. The interesting
//! partitions are the *globally even, locally odd* (GELO) ones, where every
//! class has even size but no single equation's restriction is even, and among
//! those the *satisfiable* ones, which are induced by at least one
//! assignment whose equations balance. Partitions are stored canonically
//! (classes sorted, listed by least member) so equality is structural.
//!
//! A partition with no split class is encoded as a matrix whose columns
//! describe the classes: the display matrix keeps full information in a
//! seven-symbol colored alphabet, the monochrome matrix forgets the colors,
//! and the absolute matrix forgets the signs as well.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Index of one term: equation `e` in `[p]`, side `s`, place `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TripleIndex {
    pub e: usize,
    pub s: usize,
    pub v: usize,
}

impl TripleIndex {
    pub fn new(e: usize, s: usize, v: usize) -> Self {
        debug_assert!(s < 2 && v < 2);
        TripleIndex { e, s, v }
    }

    /// Position in the flat `4e + 2s + v` layout.
    pub fn flat(&self) -> usize {
        4 * self.e + 2 * self.s + self.v
    }
}

/// All triples of `[p] x [2] x [2]` in lexical order.
pub fn ground_set(p: usize) -> Vec<TripleIndex> {
    let mut out = Vec::with_capacity(4 * p);
    for e in 0..p {
        for s in 0..2 {
            for v in 0..2 {
                out.push(TripleIndex::new(e, s, v));
            }
        }
    }
    out
}

/// A total map from `[p] x [2] x [2]` into the nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    p: usize,
    values: Vec<u64>,
}

impl Assignment {
    /// Values listed in `(e, s, v)` lexical order; length must be `4p`.
    pub fn new(p: usize, values: Vec<u64>) -> Self {
        assert_eq!(values.len(), 4 * p, "assignment must cover [p]x[2]x[2]");
        Assignment { p, values }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn value(&self, t: TripleIndex) -> u64 {
        self.values[t.flat()]
    }

    /// Whether both sides of every equation sum to the same value.
    pub fn is_balanced(&self) -> bool {
        (0..self.p).all(|e| {
            let v = |s, v| self.value(TripleIndex::new(e, s, v));
            v(0, 0) + v(0, 1) == v(1, 0) + v(1, 1)
        })
    }

    /// Restriction of the assignment to a subset of equations.
    pub fn restrict(&self, f: &BTreeSet<usize>) -> Vec<(TripleIndex, u64)> {
        ground_set(self.p)
            .into_iter()
            .filter(|t| f.contains(&t.e))
            .map(|t| (t, self.value(t)))
            .collect()
    }
}

/// Normalizes a list of classes: sorts each class, drops empties, orders
/// classes by their least member.
pub fn normalize_classes(mut classes: Vec<Vec<TripleIndex>>) -> Vec<Vec<TripleIndex>> {
    for class in classes.iter_mut() {
        class.sort_unstable();
    }
    classes.retain(|c| !c.is_empty());
    classes.sort_unstable();
    classes
}

/// Multiset of class sizes, ascending.
pub fn type_multiset(classes: &[Vec<TripleIndex>]) -> Vec<usize> {
    let mut t: Vec<usize> = classes.iter().map(Vec::len).collect();
    t.sort_unstable();
    t
}

/// A partition of `[p] x [2] x [2]` into nonempty disjoint classes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition {
    p: usize,
    classes: Vec<Vec<TripleIndex>>,
}

impl Partition {
    pub fn new(p: usize, classes: Vec<Vec<TripleIndex>>) -> Self {
        let classes = normalize_classes(classes);
        let mut seen = BTreeSet::new();
        for class in &classes {
            for t in class {
                assert!(t.e < p && t.s < 2 && t.v < 2, "triple out of range");
                assert!(seen.insert(*t), "classes must be disjoint");
            }
        }
        assert_eq!(seen.len(), 4 * p, "classes must cover [p]x[2]x[2]");
        Partition { p, classes }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn classes(&self) -> &[Vec<TripleIndex>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Partition whose classes are the fibers of the assignment.
    pub fn induced_by(tau: &Assignment) -> Partition {
        let mut groups: std::collections::BTreeMap<u64, Vec<TripleIndex>> = Default::default();
        for t in ground_set(tau.p()) {
            groups.entry(tau.value(t)).or_default().push(t);
        }
        Partition::new(tau.p(), groups.into_values().collect())
    }

    /// Classes intersected with `F x [2] x [2]`, empties dropped.
    pub fn restrict(&self, f: &BTreeSet<usize>) -> Vec<Vec<TripleIndex>> {
        normalize_classes(
            self.classes
                .iter()
                .map(|class| class.iter().copied().filter(|t| f.contains(&t.e)).collect())
                .collect(),
        )
    }

    pub fn restrict_to_equation(&self, e: usize) -> Vec<Vec<TripleIndex>> {
        self.restrict(&BTreeSet::from([e]))
    }

    /// True when every class has even cardinality.
    pub fn is_even(&self) -> bool {
        self.classes.iter().all(|c| c.len() % 2 == 0)
    }

    /// Globally even, locally odd: the partition is even but its
    /// restriction to each single equation is not.
    pub fn is_gelo(&self) -> bool {
        self.is_even()
            && (0..self.p).all(|e| {
                self.restrict_to_equation(e)
                    .iter()
                    .any(|c| c.len() % 2 == 1)
            })
    }

    /// A class is split when it meets both sides of one equation.
    pub fn has_split_class(&self) -> bool {
        self.classes.iter().any(|class| {
            (0..self.p).any(|e| {
                let mut sides = [false, false];
                for t in class {
                    if t.e == e {
                        sides[t.s] = true;
                    }
                }
                sides[0] && sides[1]
            })
        })
    }
}

/// Entry alphabet of a display matrix. The sign records the side of the
/// equation (side 0 positive), the color records the place (`r` for place 0,
/// `b` for place 1), and `2` stands for a full side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DisplayEntry {
    Zero,
    OneR,
    OneB,
    Two,
    NegOneR,
    NegOneB,
    NegTwo,
}

impl DisplayEntry {
    /// Forgets color: the monochrome value in `{0, 1, 2, -1, -2}`.
    pub fn mono(self) -> i64 {
        match self {
            DisplayEntry::Zero => 0,
            DisplayEntry::OneR | DisplayEntry::OneB => 1,
            DisplayEntry::Two => 2,
            DisplayEntry::NegOneR | DisplayEntry::NegOneB => -1,
            DisplayEntry::NegTwo => -2,
        }
    }
}

impl std::fmt::Display for DisplayEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DisplayEntry::Zero => "0",
            DisplayEntry::OneR => "1r",
            DisplayEntry::OneB => "1b",
            DisplayEntry::Two => "2",
            DisplayEntry::NegOneR => "-1r",
            DisplayEntry::NegOneB => "-1b",
            DisplayEntry::NegTwo => "-2",
        };
        f.write_str(s)
    }
}

/// `p x t` matrix of display vectors, one column per class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DisplayMatrix {
    pub rows: Vec<Vec<DisplayEntry>>,
}

impl DisplayMatrix {
    pub fn p(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn mono(&self) -> MonochromeMatrix {
        MonochromeMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|e| e.mono()).collect())
                .collect(),
        }
    }
}

/// Integer matrix with entries in `{0, +-1, +-2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonochromeMatrix {
    pub rows: Vec<Vec<i64>>,
}

impl MonochromeMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Self {
        let width = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == width), "ragged matrix");
        assert!(
            rows.iter().flatten().all(|&x| (-2..=2).contains(&x)),
            "monochrome entries lie in {{0, +-1, +-2}}"
        );
        MonochromeMatrix { rows }
    }

    pub fn p(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn row_sums_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().sum::<i64>() == 0)
    }

    pub fn abs(&self) -> AbsoluteMatrix {
        AbsoluteMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&x| x.unsigned_abs() as u8).collect())
                .collect(),
        }
    }
}

/// Matrix with entries in `{0, 1, 2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbsoluteMatrix {
    pub rows: Vec<Vec<u8>>,
}

impl AbsoluteMatrix {
    pub fn p(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }
}

/// Display matrix of a partition, one column per class in canonical class
/// order. Fails if any class is split (split classes have no display
/// vector; contributory partitions never have one).
pub fn display_matrix(partition: &Partition) -> Result<DisplayMatrix> {
    let p = partition.p();
    let t = partition.class_count();
    let mut rows = vec![vec![DisplayEntry::Zero; t]; p];
    for (col, class) in partition.classes().iter().enumerate() {
        for e in 0..p {
            let members: Vec<(usize, usize)> = class
                .iter()
                .filter(|x| x.e == e)
                .map(|x| (x.s, x.v))
                .collect();
            let entry = match members.as_slice() {
                [] => DisplayEntry::Zero,
                [(0, 0)] => DisplayEntry::OneR,
                [(0, 1)] => DisplayEntry::OneB,
                [(0, 0), (0, 1)] => DisplayEntry::Two,
                [(1, 0)] => DisplayEntry::NegOneR,
                [(1, 1)] => DisplayEntry::NegOneB,
                [(1, 0), (1, 1)] => DisplayEntry::NegTwo,
                _ => {
                    return Err(Error::Encoding(format!(
                        "class {col} is split at equation {e}"
                    )))
                }
            };
            rows[e][col] = entry;
        }
    }
    Ok(DisplayMatrix { rows })
}

/// Partition whose classes are the columns of the display matrix.
pub fn partition_of_display(m: &DisplayMatrix) -> Result<Partition> {
    let p = m.p();
    let t = m.cols();
    let mut classes: Vec<Vec<TripleIndex>> = vec![vec![]; t];
    for e in 0..p {
        for (col, entry) in m.rows[e].iter().enumerate() {
            match entry {
                DisplayEntry::Zero => {}
                DisplayEntry::OneR => classes[col].push(TripleIndex::new(e, 0, 0)),
                DisplayEntry::OneB => classes[col].push(TripleIndex::new(e, 0, 1)),
                DisplayEntry::Two => {
                    classes[col].push(TripleIndex::new(e, 0, 0));
                    classes[col].push(TripleIndex::new(e, 0, 1));
                }
                DisplayEntry::NegOneR => classes[col].push(TripleIndex::new(e, 1, 0)),
                DisplayEntry::NegOneB => classes[col].push(TripleIndex::new(e, 1, 1)),
                DisplayEntry::NegTwo => {
                    classes[col].push(TripleIndex::new(e, 1, 0));
                    classes[col].push(TripleIndex::new(e, 1, 1));
                }
            }
        }
    }
    let mut seen = BTreeSet::new();
    for class in classes.iter().flatten() {
        if !seen.insert(*class) {
            return Err(Error::Encoding("display columns overlap".into()));
        }
    }
    if seen.len() != 4 * p || classes.iter().any(Vec::is_empty) {
        return Err(Error::Encoding(
            "display matrix does not describe a partition".into(),
        ));
    }
    Ok(Partition::new(p, classes))
}

/// Reduced row echelon form over exact rationals (Gauss-Jordan).
pub fn rref(m: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(src) = (pivot_row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, src);
        let inv = Rat::one() / a[pivot_row][col].clone();
        for x in a[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..cols {
                    let d = &a[pivot_row][c] * &factor;
                    a[r][c] -= d;
                }
            }
        }
        pivot_row += 1;
    }
    a
}

/// Rank of an integer matrix, via the rational echelon form.
pub fn rank_of(rows: &[Vec<i64>]) -> usize {
    let m: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Rat::from_integer(x.into())).collect())
        .collect();
    rref(&m)
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .count()
}

/// Satisfiability criterion for a monochrome matrix with zero row sums:
/// the system `Mx = 0` has a solution with pairwise distinct nonnegative
/// coordinates exactly when the reduced row echelon form has no row of
/// Hamming weight 2 and no pair of rows at Hamming distance 2.
pub fn is_satisfiable(m: &MonochromeMatrix) -> Result<bool> {
    if !m.row_sums_zero() {
        return Err(Error::Precondition(
            "satisfiability criterion needs zero row sums".into(),
        ));
    }
    let rat_rows: Vec<Vec<Rat>> = m
        .rows
        .iter()
        .map(|r| r.iter().map(|&x| Rat::from_integer(x.into())).collect())
        .collect();
    let echelon = rref(&rat_rows);
    let weight = |row: &[Rat]| row.iter().filter(|x| !x.is_zero()).count();
    for row in &echelon {
        if weight(row) == 2 {
            return Ok(false);
        }
    }
    for i in 0..echelon.len() {
        for j in i + 1..echelon.len() {
            let dist = echelon[i]
                .iter()
                .zip(&echelon[j])
                .filter(|(a, b)| a != b)
                .count();
            if dist == 2 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    pub(crate) fn t(e: usize, s: usize, v: usize) -> TripleIndex {
        TripleIndex::new(e, s, v)
    }

    /// The running two-equation example: values (4,4,3,5,4,4,3,5).
    fn example_assignment() -> Assignment {
        Assignment::new(2, vec![4, 4, 3, 5, 4, 4, 3, 5])
    }

    fn example_partition() -> Partition {
        Partition::induced_by(&example_assignment())
    }

    #[test]
    fn induced_partition_example() {
        let p = example_partition();
        let expected = Partition::new(
            2,
            vec![
                vec![t(0, 0, 0), t(0, 0, 1), t(1, 0, 0), t(1, 0, 1)],
                vec![t(0, 1, 0), t(1, 1, 0)],
                vec![t(0, 1, 1), t(1, 1, 1)],
            ],
        );
        assert_eq!(p, expected);
        assert!(example_assignment().is_balanced());
    }

    #[test]
    fn induced_partition_degenerate_cases() {
        let constant = Assignment::new(2, vec![7; 8]);
        assert_eq!(Partition::induced_by(&constant).class_count(), 1);
        let injective = Assignment::new(2, (0..8).collect());
        assert_eq!(Partition::induced_by(&injective).class_count(), 8);
    }

    #[test]
    fn restriction_example() {
        let p = example_partition();
        let restricted = p.restrict_to_equation(0);
        assert_eq!(
            restricted,
            vec![
                vec![t(0, 0, 0), t(0, 0, 1)],
                vec![t(0, 1, 0)],
                vec![t(0, 1, 1)],
            ]
        );
        let full: BTreeSet<usize> = (0..2).collect();
        assert_eq!(p.restrict(&full), p.classes().to_vec());
        assert!(p.restrict(&BTreeSet::new()).is_empty());
    }

    #[test]
    fn evenness_and_gelo() {
        let p = example_partition();
        assert_eq!(type_multiset(p.classes()), vec![2, 2, 4]);
        assert!(p.is_even());
        assert!(p.is_gelo());

        let singletons = Partition::induced_by(&Assignment::new(1, vec![0, 1, 2, 3]));
        assert!(!singletons.is_even());

        let single_class = Partition::induced_by(&Assignment::new(1, vec![0; 4]));
        assert!(single_class.is_even());
        assert!(!single_class.is_gelo());
    }

    #[test]
    fn restriction_commutes_with_inducing() {
        // induced(tau)|F = induced(tau|F), checked per equation.
        let tau = Assignment::new(3, vec![1, 2, 2, 1, 5, 5, 4, 6, 0, 3, 3, 0]);
        let part = Partition::induced_by(&tau);
        for e in 0..3 {
            let restricted = part.restrict_to_equation(e);
            let mut groups: std::collections::BTreeMap<u64, Vec<TripleIndex>> = Default::default();
            for (triple, value) in tau.restrict(&BTreeSet::from([e])) {
                groups.entry(value).or_default().push(triple);
            }
            let direct = normalize_classes(groups.into_values().collect());
            assert_eq!(restricted, direct);
        }
    }

    #[test]
    fn display_matrix_example_p1() {
        // The 3-class example partition displays as rows (2, -1r, -1b).
        let p = example_partition();
        let m = display_matrix(&p).unwrap();
        assert_eq!(
            m.rows,
            vec![
                vec![
                    DisplayEntry::Two,
                    DisplayEntry::NegOneR,
                    DisplayEntry::NegOneB
                ],
                vec![
                    DisplayEntry::Two,
                    DisplayEntry::NegOneR,
                    DisplayEntry::NegOneB
                ],
            ]
        );
        assert_eq!(partition_of_display(&m).unwrap(), p);
    }

    #[test]
    fn display_matrix_example_p2() {
        let p2 = Partition::new(
            2,
            vec![
                vec![t(0, 0, 0), t(1, 0, 0)],
                vec![t(0, 0, 1), t(1, 0, 1)],
                vec![t(0, 1, 0), t(1, 1, 0)],
                vec![t(0, 1, 1), t(1, 1, 1)],
            ],
        );
        let m = display_matrix(&p2).unwrap();
        let row = vec![
            DisplayEntry::OneR,
            DisplayEntry::OneB,
            DisplayEntry::NegOneR,
            DisplayEntry::NegOneB,
        ];
        assert_eq!(m.rows, vec![row.clone(), row]);
        assert_eq!(partition_of_display(&m).unwrap(), p2);
    }

    #[test]
    fn split_class_cannot_be_displayed() {
        let split = Partition::new(
            1,
            vec![vec![t(0, 0, 0), t(0, 1, 0)], vec![t(0, 0, 1), t(0, 1, 1)]],
        );
        assert!(split.has_split_class());
        assert!(matches!(display_matrix(&split), Err(Error::Encoding(_))));
    }

    #[test]
    fn rref_examples() {
        let ident: Vec<Vec<Rat>> = (0..3)
            .map(|i| (0..3).map(|j| rat_int(i64::from(i == j))).collect())
            .collect();
        assert_eq!(rref(&ident), ident);

        let m: Vec<Vec<Rat>> = vec![
            vec![rat_int(2), rat_int(-1), rat_int(-1)],
            vec![rat_int(2), rat_int(-1), rat_int(-1)],
        ];
        let expected: Vec<Vec<Rat>> = vec![
            vec![rat_int(1), crate::rat::rat(-1, 2), crate::rat::rat(-1, 2)],
            vec![rat_int(0), rat_int(0), rat_int(0)],
        ];
        assert_eq!(rref(&m), expected);

        let zero: Vec<Vec<Rat>> = vec![vec![rat_int(0); 4]; 2];
        assert_eq!(rref(&zero), zero);
    }

    #[test]
    fn satisfiability_examples() {
        let a1 = MonochromeMatrix::new(vec![vec![2, -1, -1], vec![2, -1, -1]]);
        assert!(is_satisfiable(&a1).unwrap());

        let c1 = MonochromeMatrix::new(vec![vec![1, 1, -1, -1], vec![1, 1, -1, -1]]);
        assert!(is_satisfiable(&c1).unwrap());

        // A row of weight 2 appears in the echelon form.
        let c2 = MonochromeMatrix::new(vec![vec![1, 1, -1, -1], vec![1, -1, 1, -1]]);
        assert!(!is_satisfiable(&c2).unwrap());

        // A pair of rows at Hamming distance 2 appears in the echelon form.
        let b1 = MonochromeMatrix::new(vec![
            vec![2, -1, -1, 0],
            vec![2, -1, 0, -1],
            vec![0, 2, -1, -1],
        ]);
        assert!(!is_satisfiable(&b1).unwrap());

        let bad_rows = MonochromeMatrix::new(vec![vec![1, 1, -1]]);
        assert!(matches!(
            is_satisfiable(&bad_rows),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn satisfiability_matches_brute_force_search() {
        // Small-window search: zero row sums make the solution set closed
        // under translation and scaling, so distinct values in [t+3] are
        // enough to witness satisfiability for these sizes.
        fn brute(m: &MonochromeMatrix) -> bool {
            let t = m.cols();
            let bound = (t + 3) as u64;
            let mut x = vec![0u64; t];
            fn rec(m: &MonochromeMatrix, x: &mut Vec<u64>, i: usize, bound: u64) -> bool {
                if i == x.len() {
                    let distinct: BTreeSet<u64> = x.iter().copied().collect();
                    if distinct.len() != x.len() {
                        return false;
                    }
                    return m.rows.iter().all(|row| {
                        row.iter()
                            .zip(x.iter())
                            .map(|(&c, &v)| c * v as i64)
                            .sum::<i64>()
                            == 0
                    });
                }
                (0..bound).any(|v| {
                    x[i] = v;
                    rec(m, x, i + 1, bound)
                })
            }
            rec(m, &mut x, 0, bound)
        }

        let cases = vec![
            MonochromeMatrix::new(vec![vec![2, -1, -1], vec![2, -1, -1]]),
            MonochromeMatrix::new(vec![vec![1, 1, -1, -1], vec![1, -1, 1, -1]]),
            MonochromeMatrix::new(vec![vec![1, 1, -1, -1], vec![1, 1, -1, -1]]),
            MonochromeMatrix::new(vec![
                vec![2, -1, -1, 0],
                vec![2, -1, 0, -1],
                vec![0, 2, -1, -1],
            ]),
            MonochromeMatrix::new(vec![vec![2, 0, -1, -1], vec![0, 2, -1, -1]]),
            MonochromeMatrix::new(vec![
                vec![2, -1, -1, 0, 0],
                vec![2, 0, 0, -1, -1],
                vec![0, 1, 1, -1, -1],
            ]),
        ];
        for m in cases {
            assert_eq!(is_satisfiable(&m).unwrap(), brute(&m), "{:?}", m.rows);
        }
    }
}
