//! The symmetry group of the equation system and its action on partitions.
//!
//! An element permutes the `p` equations, optionally swaps the two sides of
//! each equation, and optionally swaps the two places on each side; the
//! group has order `p! * 8^p`. Partitions of `[p] x [2] x [2]` in the same
//! orbit have the same solution counts, so orbits are the unit of work for
//! the moment formula. Orbit sizes come from stabilizer counts via the
//! orbit-stabilizer identity.

use crate::error::{Error, Result};
use crate::partitions::{type_multiset, Partition, TripleIndex};

/// Group scans enumerate `p! * 8^p` elements.
pub const MAX_GROUP_SCAN_P: usize = 5;

/// One symmetry: `eps` permutes equations, `side_swap[e]` swaps the sides
/// of equation `e`, and `place_swap[e][s]` swaps the places on side `s` of
/// equation `e` (indices refer to post-permutation equation labels).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub eps: Vec<usize>,
    pub side_swap: Vec<bool>,
    pub place_swap: Vec<[bool; 2]>,
}

impl GroupElement {
    pub fn identity(p: usize) -> Self {
        GroupElement {
            eps: (0..p).collect(),
            side_swap: vec![false; p],
            place_swap: vec![[false; 2]; p],
        }
    }

    pub fn p(&self) -> usize {
        self.eps.len()
    }

    /// Image of a triple: equation first, then side, then place, with the
    /// side and place swaps looked up at the permuted equation.
    pub fn act_triple(&self, x: TripleIndex) -> TripleIndex {
        let e = self.eps[x.e];
        let s = if self.side_swap[e] { 1 - x.s } else { x.s };
        let v = if self.place_swap[e][s] { 1 - x.v } else { x.v };
        TripleIndex::new(e, s, v)
    }

    pub fn act_partition(&self, partition: &Partition) -> Partition {
        Partition::new(
            partition.p(),
            partition
                .classes()
                .iter()
                .map(|class| class.iter().map(|&x| self.act_triple(x)).collect())
                .collect(),
        )
    }

    /// Composition: `(g.compose(h)).act_triple(x) == g.act_triple(h.act_triple(x))`.
    pub fn compose(&self, h: &GroupElement) -> GroupElement {
        let p = self.p();
        let mut eps = vec![0; p];
        let mut side_swap = vec![false; p];
        let mut place_swap = vec![[false; 2]; p];
        for e1 in 0..p {
            let mid = h.eps[e1];
            let e2 = self.eps[mid];
            eps[e1] = e2;
            side_swap[e2] = h.side_swap[mid] ^ self.side_swap[e2];
            for s2 in 0..2 {
                let s1 = if self.side_swap[e2] { 1 - s2 } else { s2 };
                place_swap[e2][s2] = h.place_swap[mid][s1] ^ self.place_swap[e2][s2];
            }
        }
        GroupElement {
            eps,
            side_swap,
            place_swap,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        let p = self.p();
        let mut eps = vec![0; p];
        let mut side_swap = vec![false; p];
        let mut place_swap = vec![[false; 2]; p];
        for e in 0..p {
            let image = self.eps[e];
            eps[image] = e;
            side_swap[e] = self.side_swap[image];
            for s in 0..2 {
                let s_img = if self.side_swap[image] { 1 - s } else { s };
                place_swap[e][s] = self.place_swap[image][s_img];
            }
        }
        GroupElement {
            eps,
            side_swap,
            place_swap,
        }
    }
}

/// `p! * 2^(3p)`, the group order.
pub fn group_order(p: usize) -> u64 {
    (1..=p as u64).product::<u64>() * 8u64.pow(p as u32)
}

fn guard(p: usize) -> Result<()> {
    if p > MAX_GROUP_SCAN_P {
        return Err(Error::ResourceLimit(format!(
            "group scan guard: p = {p} exceeds {MAX_GROUP_SCAN_P}"
        )));
    }
    Ok(())
}

fn permutations(p: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut items: Vec<usize> = (0..p).collect();
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

/// Calls `f` for every element of the group, factored so the equation
/// permutation is chosen in the outer loop; `keep_eps` can reject a
/// permutation before the `8^p` inner scan runs.
fn scan_group(
    p: usize,
    mut keep_eps: impl FnMut(&[usize]) -> bool,
    mut f: impl FnMut(&GroupElement),
) {
    for eps in permutations(p) {
        if !keep_eps(&eps) {
            continue;
        }
        for side_mask in 0..(1u32 << p) {
            let side_swap: Vec<bool> = (0..p).map(|e| side_mask >> e & 1 == 1).collect();
            for place_mask in 0..(1u32 << (2 * p)) {
                let place_swap: Vec<[bool; 2]> = (0..p)
                    .map(|e| {
                        [
                            place_mask >> (2 * e) & 1 == 1,
                            place_mask >> (2 * e + 1) & 1 == 1,
                        ]
                    })
                    .collect();
                f(&GroupElement {
                    eps: eps.clone(),
                    side_swap: side_swap.clone(),
                    place_swap,
                });
            }
        }
    }
}

/// Class id of every triple under the flat `4e + 2s + v` layout.
fn class_ids(partition: &Partition) -> Vec<usize> {
    let mut ids = vec![usize::MAX; 4 * partition.p()];
    for (i, class) in partition.classes().iter().enumerate() {
        for t in class {
            ids[t.flat()] = i;
        }
    }
    ids
}

/// Exact order of the stabilizer of `partition` in the group.
pub fn stabilizer_order(partition: &Partition) -> Result<u64> {
    let p = partition.p();
    guard(p)?;
    let ids = class_ids(partition);
    // An element stabilizes the partition exactly when the image of every
    // class lands inside a single class; bijectivity then forces equality.
    // A permutation can only work if it matches per-equation restriction
    // types, which prunes most of the p! outer choices at p = 5.
    let eq_types: Vec<Vec<usize>> = (0..p)
        .map(|e| type_multiset(&partition.restrict_to_equation(e)))
        .collect();
    let mut count = 0u64;
    scan_group(
        p,
        |eps| (0..p).all(|e| eq_types[eps[e]] == eq_types[e]),
        |g| {
            let stabilizes = partition.classes().iter().all(|class| {
                let target = ids[g.act_triple(class[0]).flat()];
                class.iter().all(|&x| ids[g.act_triple(x).flat()] == target)
            });
            if stabilizes {
                count += 1;
            }
        },
    );
    Ok(count)
}

/// Orbit size via the orbit-stabilizer identity.
pub fn orbit_size(partition: &Partition) -> Result<u64> {
    Ok(group_order(partition.p()) / stabilizer_order(partition)?)
}

/// The lexicographically least partition in the orbit; two partitions are
/// isomorphic exactly when their canonical forms are equal.
pub fn canonical_form(partition: &Partition) -> Result<Partition> {
    guard(partition.p())?;
    let mut best: Option<Partition> = None;
    scan_group(
        partition.p(),
        |_| true,
        |g| {
            let image = g.act_partition(partition);
            if best.as_ref().is_none_or(|b| image < *b) {
                best = Some(image);
            }
        },
    );
    Ok(best.expect("group is nonempty"))
}

/// Materializes the whole orbit; test-scale only.
pub fn explicit_orbit(partition: &Partition) -> Result<std::collections::HashSet<Partition>> {
    guard(partition.p())?;
    let mut orbit = std::collections::HashSet::new();
    scan_group(
        partition.p(),
        |_| true,
        |g| {
            orbit.insert(g.act_partition(partition));
        },
    );
    Ok(orbit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{display_matrix, ground_set, is_satisfiable, Assignment};
    use proptest::prelude::*;

    fn t(e: usize, s: usize, v: usize) -> TripleIndex {
        TripleIndex::new(e, s, v)
    }

    fn p1() -> Partition {
        Partition::induced_by(&Assignment::new(2, vec![4, 4, 3, 5, 4, 4, 3, 5]))
    }

    fn p2() -> Partition {
        Partition::new(
            2,
            vec![
                vec![t(0, 0, 0), t(1, 0, 0)],
                vec![t(0, 0, 1), t(1, 0, 1)],
                vec![t(0, 1, 0), t(1, 1, 0)],
                vec![t(0, 1, 1), t(1, 1, 1)],
            ],
        )
    }

    /// Transposes the equations, swaps the sides of (new) equation 1, and
    /// swaps places on side 0 of equation 1 and side 1 of equation 0.
    fn example_element() -> GroupElement {
        GroupElement {
            eps: vec![1, 0],
            side_swap: vec![false, true],
            place_swap: vec![[false, true], [true, false]],
        }
    }

    #[test]
    fn example_element_action() {
        let g = example_element();
        assert_eq!(g.act_triple(t(0, 0, 0)), t(1, 1, 0));
        assert_eq!(g.act_triple(t(0, 1, 0)), t(1, 0, 1));
        assert_eq!(g.act_triple(t(1, 0, 0)), t(0, 0, 0));
        assert_eq!(g.act_triple(t(1, 1, 0)), t(0, 1, 1));
    }

    #[test]
    fn example_element_maps_partitions() {
        // The displayed pair: q maps onto p1 under the example element.
        let q = Partition::new(
            2,
            vec![
                vec![t(0, 1, 0), t(0, 1, 1), t(1, 0, 0), t(1, 0, 1)],
                vec![t(0, 0, 0), t(1, 1, 1)],
                vec![t(0, 0, 1), t(1, 1, 0)],
            ],
        );
        let g = example_element();
        assert_eq!(g.act_partition(&q), p1());
        assert_eq!(canonical_form(&q).unwrap(), canonical_form(&p1()).unwrap());
    }

    #[test]
    fn identity_and_inverse() {
        let idn = GroupElement::identity(3);
        for x in ground_set(3) {
            assert_eq!(idn.act_triple(x), x);
        }
        let g = example_element();
        let ginv = g.inverse();
        for x in ground_set(2) {
            assert_eq!(ginv.act_triple(g.act_triple(x)), x);
            assert_eq!(g.act_triple(ginv.act_triple(x)), x);
        }
    }

    #[test]
    fn stabilizer_orders_for_two_equations() {
        assert_eq!(stabilizer_order(&p1()).unwrap(), 16);
        assert_eq!(stabilizer_order(&p2()).unwrap(), 16);
        assert_eq!(orbit_size(&p1()).unwrap(), 8);
        assert_eq!(orbit_size(&p2()).unwrap(), 8);
    }

    #[test]
    fn orbit_size_matches_explicit_orbit() {
        for part in [p1(), p2()] {
            let orbit = explicit_orbit(&part).unwrap();
            assert_eq!(orbit.len() as u64, orbit_size(&part).unwrap());
        }
        // A three-equation case: the all-twin matching partition.
        let p5 = Partition::new(
            3,
            vec![
                vec![t(0, 0, 0), t(0, 0, 1)],
                vec![t(1, 0, 0), t(1, 0, 1)],
                vec![t(2, 0, 0), t(2, 0, 1)],
                vec![t(1, 1, 0), t(2, 1, 1)],
                vec![t(2, 1, 0), t(0, 1, 1)],
                vec![t(0, 1, 0), t(1, 1, 1)],
            ],
        );
        let orbit = explicit_orbit(&p5).unwrap();
        assert_eq!(orbit.len() as u64, orbit_size(&p5).unwrap());
        assert_eq!(orbit.len(), 64);
    }

    #[test]
    fn three_equation_stabilizers() {
        // Three stacked twin pairs plus a perfect matching of the other side.
        let p5 = Partition::new(
            3,
            vec![
                vec![t(0, 0, 0), t(0, 0, 1)],
                vec![t(1, 0, 0), t(1, 0, 1)],
                vec![t(2, 0, 0), t(2, 0, 1)],
                vec![t(1, 1, 0), t(2, 1, 1)],
                vec![t(2, 1, 0), t(0, 1, 1)],
                vec![t(0, 1, 0), t(1, 1, 1)],
            ],
        );
        assert_eq!(stabilizer_order(&p5).unwrap(), 48);
        assert_eq!(orbit_size(&p5).unwrap(), 64);

        let p8 = Partition::new(
            3,
            vec![
                vec![t(0, 0, 0), t(1, 1, 1)],
                vec![t(0, 1, 0), t(1, 0, 1)],
                vec![t(1, 0, 0), t(2, 1, 1)],
                vec![t(1, 1, 0), t(2, 0, 1)],
                vec![t(2, 0, 0), t(0, 1, 1)],
                vec![t(2, 1, 0), t(0, 0, 1)],
            ],
        );
        assert_eq!(orbit_size(&p8).unwrap(), 256);

        let p1_three = Partition::new(
            3,
            vec![
                vec![t(0, 0, 0), t(0, 0, 1), t(1, 1, 0), t(2, 0, 0)],
                vec![t(1, 0, 0), t(1, 0, 1), t(0, 1, 0), t(2, 0, 1)],
                vec![t(0, 1, 1), t(2, 1, 0)],
                vec![t(1, 1, 1), t(2, 1, 1)],
            ],
        );
        assert_eq!(orbit_size(&p1_three).unwrap(), 384);
    }

    #[test]
    fn guard_rejects_large_p() {
        let part = Partition::new(
            6,
            (0..6)
                .flat_map(|e| vec![vec![t(e, 0, 0), t(e, 0, 1)], vec![t(e, 1, 0), t(e, 1, 1)]])
                .collect(),
        );
        assert!(matches!(
            stabilizer_order(&part),
            Err(Error::ResourceLimit(_))
        ));
    }

    fn arb_element(p: usize) -> impl Strategy<Value = GroupElement> {
        let perms = permutations(p);
        (0..perms.len(), 0u32..(1 << p), 0u32..(1 << (2 * p))).prop_map(
            move |(i, side_mask, place_mask)| GroupElement {
                eps: perms[i].clone(),
                side_swap: (0..p).map(|e| side_mask >> e & 1 == 1).collect(),
                place_swap: (0..p)
                    .map(|e| {
                        [
                            place_mask >> (2 * e) & 1 == 1,
                            place_mask >> (2 * e + 1) & 1 == 1,
                        ]
                    })
                    .collect(),
            },
        )
    }

    fn arb_partition(p: usize) -> impl Strategy<Value = Partition> {
        proptest::collection::vec(0u64..6, 4 * p)
            .prop_map(move |vals| Partition::induced_by(&Assignment::new(p, vals)))
    }

    proptest! {
        #[test]
        fn action_law(g in arb_element(3), h in arb_element(3), flat in 0usize..12) {
            let x = ground_set(3)[flat];
            let composed = g.compose(&h);
            prop_assert_eq!(composed.act_triple(x), g.act_triple(h.act_triple(x)));
        }

        #[test]
        fn inverse_law(g in arb_element(3), flat in 0usize..12) {
            let x = ground_set(3)[flat];
            prop_assert_eq!(g.inverse().act_triple(g.act_triple(x)), x);
        }

        #[test]
        fn gelo_is_orbit_constant(g in arb_element(2), part in arb_partition(2)) {
            prop_assert_eq!(g.act_partition(&part).is_gelo(), part.is_gelo());
        }

        #[test]
        fn canonical_form_is_orbit_constant(g in arb_element(2), part in arb_partition(2)) {
            let c1 = canonical_form(&part).unwrap();
            let c2 = canonical_form(&g.act_partition(&part)).unwrap();
            prop_assert_eq!(c1.clone(), c2);
            prop_assert_eq!(canonical_form(&c1).unwrap(), c1);
        }

        #[test]
        fn satisfiability_is_orbit_constant(g in arb_element(2), part in arb_partition(2)) {
            if !part.has_split_class() {
                let image = g.act_partition(&part);
                prop_assert!(!image.has_split_class());
                let a = is_satisfiable(&display_matrix(&part).unwrap().mono());
                let b = is_satisfiable(&display_matrix(&image).unwrap().mono());
                match (a, b) {
                    (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
                    // Row sums can be nonzero for non-GELO partitions.
                    (Err(_), Err(_)) => {}
                    _ => prop_assert!(false, "criterion applicability is not orbit constant"),
                }
            }
        }
    }
}
