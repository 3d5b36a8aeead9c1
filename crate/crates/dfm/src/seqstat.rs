//! Ground truth for everything else in the crate: binary sequences, their
//! aperiodic autocorrelation, the two squared-autocorrelation statistics,
//! an exhaustive moment oracle over all `2^ell` sequences, and a handful of
//! closed-form combinatorial counting fixtures.
//!
//! The oracle iterates sequences in Gray-code order (one sign flip per step,
//! so the autocorrelation vector updates in `O(ell)`), but all accumulation
//! is order-independent integer summation, so the traversal order cannot
//! affect results.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::{rat, rat_int, Rat};

/// Exhaustive enumeration guard: `2^ell` sequences are visited.
pub const MAX_EXHAUSTIVE_ELL: u32 = 24;

/// Which squared-autocorrelation statistic a moment refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    /// Sum of squared autocorrelations over all shifts, peak included.
    Ssac,
    /// Demerit factor: `-1 + ssac/ell^2`.
    Adf,
}

/// A finite word over `{+1, -1}`, indexed `0..len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySequence {
    entries: Vec<i8>,
}

impl BinarySequence {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::UndefinedInput(
                "sequence entries must be +1 or -1".into(),
            ));
        }
        Ok(BinarySequence { entries })
    }

    /// Sequence whose entry `j` is `-1` exactly when bit `j` of `mask` is set.
    pub fn from_mask(mask: u64, len: u32) -> Self {
        BinarySequence {
            entries: (0..len)
                .map(|j| if mask >> j & 1 == 1 { -1 } else { 1 })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }
}

/// Aperiodic autocorrelation at shift `s`, with the sequence zero-padded
/// outside its window; zero whenever `|s| >= len`.
pub fn autocorrelation(f: &BinarySequence, s: i64) -> i64 {
    let ell = f.len() as i64;
    let s_abs = s.unsigned_abs() as usize;
    if s_abs as i64 >= ell {
        return 0;
    }
    // C_f(-s) = C_f(s) for real sequences.
    let e = f.entries();
    (0..f.len() - s_abs)
        .map(|j| e[j + s_abs] as i64 * e[j] as i64)
        .sum()
}

/// Sum of squared autocorrelations over every shift, peak included.
pub fn ssac(f: &BinarySequence) -> i64 {
    let ell = f.len() as i64;
    let mut total = 0;
    for s in 0..ell {
        let c = autocorrelation(f, s);
        total += if s == 0 { c * c } else { 2 * c * c };
    }
    total
}

/// Demerit factor `-1 + ssac/ell^2`, exact.
pub fn adf(f: &BinarySequence) -> Result<Rat> {
    if f.is_empty() {
        return Err(Error::UndefinedInput("adf of the empty sequence".into()));
    }
    let ell = f.len() as i64;
    Ok(rat(ssac(f), ell * ell) - rat_int(1))
}

/// Raw power sums `sum over sequences of ssac(f)^k` for `k = 0..=p`,
/// computed in one Gray-code sweep over all `2^ell` sequences.
fn ssac_power_sums(p: u32, ell: u32) -> Result<Vec<BigInt>> {
    if ell == 0 {
        return Err(Error::UndefinedInput("ell must be positive".into()));
    }
    if ell > MAX_EXHAUSTIVE_ELL {
        return Err(Error::ResourceLimit(format!(
            "exhaustive oracle guard: ell = {ell} exceeds {MAX_EXHAUSTIVE_ELL}"
        )));
    }
    let n = ell as usize;
    let mut seq = vec![1i8; n];
    // corr[s] = C_f(s) for s = 0..ell, kept incrementally updated.
    let mut corr: Vec<i64> = (0..n).map(|s| (n - s) as i64).collect();
    let mut ssac_val: i64 = corr
        .iter()
        .enumerate()
        .map(|(s, &c)| if s == 0 { c * c } else { 2 * c * c })
        .sum();

    let mut sums = vec![BigInt::zero(); p as usize + 1];
    let total = 1u64 << ell;
    for step in 0..total {
        let mut power = BigInt::one();
        for sum in sums.iter_mut() {
            *sum += &power;
            power *= ssac_val;
        }
        if step + 1 == total {
            break;
        }
        // Gray code: flip the bit at the lowest set position of step+1.
        let j = (step + 1).trailing_zeros() as usize;
        // Flipping f_j changes C(s) by -2 f_j (f_{j+s} + f_{j-s}) for s > 0,
        // where out-of-window terms are zero, and leaves C(0) = ell.
        for (s, c) in corr.iter_mut().enumerate().skip(1) {
            let mut delta = 0i64;
            if j + s < n {
                delta += seq[j + s] as i64;
            }
            if j >= s {
                delta += seq[j - s] as i64;
            }
            let change = -2 * seq[j] as i64 * delta;
            ssac_val += 2 * ((*c + change) * (*c + change) - *c * *c);
            *c += change;
        }
        seq[j] = -seq[j];
    }
    Ok(sums)
}

/// Exact `p`-th central moment of the chosen statistic over all `2^ell`
/// binary sequences of length `ell`, each with weight `2^-ell`.
pub fn exhaustive_central_moment(p: u32, ell: u32, statistic: Statistic) -> Result<Rat> {
    let sums = ssac_power_sums(p, ell)?;
    let count = BigInt::one() << ell;
    // Raw moments m_k = E[ssac^k], then the binomial expansion of
    // E[(X - m_1)^p] in exact arithmetic.
    let raw: Vec<Rat> = sums
        .iter()
        .map(|s| Rat::new(s.clone(), count.clone()))
        .collect();
    let mean = raw[1].clone();
    let mut moment = Rat::zero();
    let mut binom = BigInt::one();
    for k in 0..=p {
        // binom = C(p, k); term = C(p,k) * m_k * (-mean)^(p-k)
        let mut term = Rat::from_integer(binom.clone()) * &raw[k as usize];
        let mut neg_mean_pow = Rat::one();
        for _ in 0..(p - k) {
            neg_mean_pow *= -mean.clone();
        }
        term *= neg_mean_pow;
        moment += term;
        binom = binom * BigInt::from(p - k) / BigInt::from(k + 1);
    }
    match statistic {
        Statistic::Ssac => Ok(moment),
        // Central moments are invariant under the -1 shift and scale by
        // (1/ell^2)^p under the ssac -> adf transform.
        Statistic::Adf => {
            let ell2p = BigInt::from(ell).pow(2 * p);
            Ok(moment / Rat::from_integer(ell2p))
        }
    }
}

/// Exhaustive mean of the chosen statistic.
pub fn exhaustive_mean(ell: u32, statistic: Statistic) -> Result<Rat> {
    let sums = ssac_power_sums(1, ell)?;
    let count = BigInt::one() << ell;
    let mean = Rat::new(sums[1].clone(), count);
    match statistic {
        Statistic::Ssac => Ok(mean),
        Statistic::Adf => Ok(mean / rat_int((ell as i64) * (ell as i64)) - rat_int(1)),
    }
}

/// Number of `(k+1)`-term arithmetic progressions contained in `[ell]`:
/// `(ell - r)(ell + r - k) / (2k)` where `ell = qk + r`, `0 <= r < k`.
pub fn fixture_ap_count(ell: u64, k: u64) -> u64 {
    assert!(k >= 1, "progression step count must be positive");
    let r = ell % k;
    if ell < r || ell + r < k {
        return 0;
    }
    let prod = (ell - r) as i128 * (ell as i128 + r as i128 - k as i128);
    if prod <= 0 {
        return 0;
    }
    (prod / (2 * k as i128)) as u64
}

/// Named closed-form counting fixtures.
///
/// Each evaluates an exact quasi-polynomial with the case split on the
/// residue of `ell`; these are frozen formulas used to cross-check the
/// lattice-counting engine.
pub fn fixture_counts(name: &str, ell: u64) -> Result<BigInt> {
    let l = BigInt::from(ell);
    let v = |r: Rat| -> BigInt {
        assert!(r.is_integer(), "fixture value must be integral");
        r.to_integer()
    };
    let l2 = &l * &l;
    let l3 = &l2 * &l;
    let value = match name {
        // Solutions of A+B=2C with distinct A,B,C in [ell]: floor((ell-1)^2 / 2).
        "persephone" => {
            if ell == 0 {
                BigInt::zero()
            } else {
                let m = BigInt::from(ell - 1);
                (&m * &m) / 2
            }
        }
        // Distinct A,B,C,D,E with B-A=C-B=E-D, A<B<C, D<E.
        "light" => {
            let num = rat_int(5) * Rat::from_integer(l3.clone())
                - rat_int(32) * Rat::from_integer(l2.clone())
                + match ell % 6 {
                    0 => rat_int(52) * Rat::from_integer(l.clone()),
                    1 | 5 => rat_int(55) * Rat::from_integer(l.clone()) - rat_int(28),
                    2 | 4 => rat_int(52) * Rat::from_integer(l.clone()) - rat_int(16),
                    3 => rat_int(55) * Rat::from_integer(l.clone()) - rat_int(12),
                    _ => unreachable!(),
                };
            v(num / rat_int(24))
        }
        // Quadruples (A,B,C,D) in [ell]^4 with A+B=C+D.
        "wowzers_i" => v(rat(1, 3) * Rat::from_integer(2 * &l3 + &l)),
        // Same, all four values distinct.
        "wowzers_ii" => {
            let num = 2 * &l3 - 9 * &l2 + 10 * &l - if ell % 2 == 1 { 3 } else { 0 };
            v(Rat::from_integer(num) / rat_int(3))
        }
        // A+B=C+D with A and B of equal parity.
        "wowzers_iii" => {
            let num = if ell % 2 == 0 { &l3 - &l } else { &l3 + 2 * &l };
            v(Rat::from_integer(num) / rat_int(3))
        }
        // A+B=C+D, equal parity, all distinct.
        "wowzers_iv" => {
            let num = if ell % 2 == 0 {
                &l3 - 6 * &l2 + 8 * &l
            } else {
                &l3 - 6 * &l2 + 11 * &l - 6
            };
            v(Rat::from_integer(num) / rat_int(3))
        }
        // Distinct solutions of 2A = B + C in [ell] (same as persephone).
        "solomon_c1" => {
            let num = &l2 - 2 * &l + if ell % 2 == 1 { 1 } else { 0 };
            v(Rat::from_integer(num) / rat_int(2))
        }
        // Distinct solutions of A + B = C + D in [ell].
        "solomon_c2" => {
            let num = 2 * &l3 - 9 * &l2 + 10 * &l - if ell % 2 == 1 { 3 } else { 0 };
            v(Rat::from_integer(num) / rat_int(3))
        }
        _ => return Err(Error::Usage(format!("unknown fixture {name:?}"))),
    };
    Ok(value)
}

/// All fixture names accepted by [`fixture_counts`].
pub const FIXTURE_NAMES: [&str; 8] = [
    "persephone",
    "light",
    "wowzers_i",
    "wowzers_ii",
    "wowzers_iii",
    "wowzers_iv",
    "solomon_c1",
    "solomon_c2",
];

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(entries: &[i8]) -> BinarySequence {
        BinarySequence::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn autocorrelation_examples() {
        let f = seq(&[1, 1, 1, -1]);
        assert_eq!(autocorrelation(&f, 0), 4);
        assert_eq!(autocorrelation(&f, 1), 1);
        assert_eq!(autocorrelation(&f, 3), -1);
        assert_eq!(autocorrelation(&f, 4), 0);
        assert_eq!(autocorrelation(&f, -2), autocorrelation(&f, 2));
    }

    #[test]
    fn ssac_examples() {
        assert_eq!(ssac(&seq(&[1, 1, 1, -1])), 20);
        assert_eq!(ssac(&seq(&[1])), 1);
        assert_eq!(ssac(&seq(&[1, -1])), 6);
        assert_eq!(ssac(&seq(&[-1, 1])), 6);
    }

    #[test]
    fn adf_examples() {
        assert_eq!(adf(&seq(&[1, 1, 1, -1])).unwrap(), rat(1, 4));
        assert_eq!(adf(&seq(&[1])).unwrap(), rat_int(0));
        assert_eq!(adf(&seq(&[1, -1])).unwrap(), rat(1, 2));
        assert!(adf(&BinarySequence::new(vec![]).unwrap()).is_err());
    }

    #[test]
    fn rejects_non_binary_entries() {
        assert!(BinarySequence::new(vec![1, 0, -1]).is_err());
    }

    #[test]
    fn gray_sweep_matches_direct_recomputation() {
        for ell in 1..=8u32 {
            let sums = ssac_power_sums(2, ell).unwrap();
            let mut direct = vec![BigInt::zero(); 3];
            for mask in 0..(1u64 << ell) {
                let f = BinarySequence::from_mask(mask, ell);
                let s = ssac(&f);
                direct[0] += 1;
                direct[1] += s;
                direct[2] += s * s;
            }
            assert_eq!(sums, direct, "ell = {ell}");
        }
    }

    #[test]
    fn first_central_moment_vanishes() {
        for ell in 1..=10 {
            assert_eq!(
                exhaustive_central_moment(1, ell, Statistic::Adf).unwrap(),
                rat_int(0)
            );
        }
    }

    #[test]
    fn known_moment_values() {
        // Mean of ADF at ell = 10 is 1 - 1/10.
        assert_eq!(exhaustive_mean(10, Statistic::Adf).unwrap(), rat(9, 10));
        // Variance of ADF vanishes at ell = 2.
        assert_eq!(
            exhaustive_central_moment(2, 2, Statistic::Adf).unwrap(),
            rat_int(0)
        );
        // Variance of SSAC at ell = 4.
        assert_eq!(
            exhaustive_central_moment(2, 4, Statistic::Ssac).unwrap(),
            rat_int(96)
        );
    }

    #[test]
    fn ssac_mean_is_affine_in_sarwate_mean() {
        for ell in 1..=12u32 {
            let expected = rat_int(2 * (ell as i64) * (ell as i64) - ell as i64);
            assert_eq!(exhaustive_mean(ell, Statistic::Ssac).unwrap(), expected);
        }
    }

    #[test]
    fn adf_moment_is_scaled_ssac_moment() {
        for ell in 2..=8u32 {
            for p in 1..=3u32 {
                let s = exhaustive_central_moment(p, ell, Statistic::Ssac).unwrap();
                let a = exhaustive_central_moment(p, ell, Statistic::Adf).unwrap();
                let scale = Rat::from_integer(BigInt::from(ell).pow(2 * p));
                assert_eq!(s, a * scale);
            }
        }
    }

    #[test]
    fn oracle_guard() {
        assert!(matches!(
            exhaustive_central_moment(2, MAX_EXHAUSTIVE_ELL + 1, Statistic::Ssac),
            Err(Error::ResourceLimit(_))
        ));
        assert!(exhaustive_central_moment(2, 0, Statistic::Ssac).is_err());
    }

    #[test]
    fn ap_count_examples() {
        assert_eq!(fixture_ap_count(10, 2), 20);
        assert_eq!(fixture_ap_count(2, 2), 0);
        assert_eq!(fixture_ap_count(0, 3), 0);
    }

    /// Brute enumeration of (k+1)-term arithmetic progressions in [ell].
    fn brute_ap_count(ell: u64, k: u64) -> u64 {
        let mut count = 0;
        for b in 1..=ell {
            for a in 0..ell {
                if a + k * b < ell {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn ap_count_matches_brute_force() {
        for ell in 0..=50 {
            for k in 1..=5 {
                assert_eq!(
                    fixture_ap_count(ell, k),
                    brute_ap_count(ell, k),
                    "ell={ell} k={k}"
                );
            }
        }
        // 4-term progressions in [7]: spacings 1 and 2 give 4 + 1.
        assert_eq!(fixture_ap_count(7, 3), 5);
    }

    #[test]
    fn ssac_is_at_least_ell_squared() {
        // The peak alone contributes ell^2; equality needs every off-peak
        // correlation to vanish.
        for ell in 1..=12u32 {
            for mask in 0..(1u64 << ell) {
                let f = BinarySequence::from_mask(mask, ell);
                let s = ssac(&f);
                let floor = (ell as i64) * (ell as i64);
                assert!(s >= floor);
                let off_peak_zero = (1..ell as i64).all(|sh| autocorrelation(&f, sh) == 0);
                assert_eq!(s == floor, off_peak_zero);
            }
        }
    }

    #[test]
    fn fixture_examples() {
        assert_eq!(fixture_counts("wowzers_i", 4).unwrap(), BigInt::from(44));
        assert_eq!(fixture_counts("solomon_c2", 4).unwrap(), BigInt::from(8));
        assert_eq!(fixture_counts("solomon_c1", 2).unwrap(), BigInt::from(0));
        assert!(fixture_counts("nope", 3).is_err());
    }

    #[test]
    fn expectation_of_monomial_is_even_use_indicator() {
        // For tuples of indices into [ell], the average over all sequences
        // of the product of the indexed entries is 1 exactly when every
        // index is used an even number of times; otherwise 0.
        let ell = 6u32;
        let tuples: &[&[usize]] = &[
            &[0, 0],
            &[1, 1, 2, 2],
            &[0, 1],
            &[3, 3, 3],
            &[4, 4, 4, 4],
            &[0, 1, 1, 0],
            &[2, 3, 2],
        ];
        for idx in tuples {
            let mut total: i64 = 0;
            for mask in 0..(1u64 << ell) {
                let f = BinarySequence::from_mask(mask, ell);
                let prod: i64 = idx.iter().map(|&j| f.entries()[j] as i64).product();
                total += prod;
            }
            let mut counts = [0u32; 8];
            for &j in *idx {
                counts[j] += 1;
            }
            let all_even = counts.iter().all(|c| c % 2 == 0);
            let expected = if all_even { 1i64 << ell } else { 0 };
            assert_eq!(total, expected, "indices {idx:?}");
        }
    }
}
