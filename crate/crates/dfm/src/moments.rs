//! Moment assembly: exact central moments of the squared-autocorrelation
//! statistics as quasi-polynomials in the sequence length, plus derived
//! demerit-factor and standardized moments.
//!
//! The production path sums `orbit_size * sols` over the isomorphism
//! classes of contributory partitions. An independent validation path sums
//! `sols` over every contributory partition found by the brute-force
//! scanner, with no grouping. Demerit-factor moments are the same
//! quasi-polynomials divided by `ell^(2p)`, kept symbolic as a (numerator,
//! divisor exponent) pair so everything stays exact.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{bruteforce_con, isom_representatives, monochrome_of, IsoClass};
use crate::error::{Error, Result};
use crate::latcount::sols_quasipoly;
use crate::qpoly::QuasiPolynomial;
use crate::rat::{decimal_string, isqrt, rat_int, Rat};

/// Classes of contributory partitions with their solution counters filled
/// in, cached per moment order for the life of the process.
pub fn catalog(p: usize) -> Result<Arc<Vec<IsoClass>>> {
    static CATALOGS: OnceLock<Mutex<HashMap<usize, Arc<Vec<IsoClass>>>>> = OnceLock::new();
    let store = CATALOGS.get_or_init(Default::default);
    // The store lock is held across the computation so concurrent callers
    // wait for one classification instead of racing on a duplicate.
    let mut guard = store.lock().unwrap();
    if let Some(hit) = guard.get(&p) {
        return Ok(hit.clone());
    }
    let mut classes = isom_representatives(p)?;
    let sols: Vec<QuasiPolynomial> = classes
        .par_iter()
        .map(|c| sols_quasipoly(&monochrome_of(&c.representative)?))
        .collect::<Result<_>>()?;
    for (class, qp) in classes.iter_mut().zip(sols) {
        class.sols = Some(qp);
    }
    let arc = Arc::new(classes);
    guard.insert(p, arc.clone());
    Ok(arc)
}

/// Exact `p`-th central moment of the sum of squared autocorrelations,
/// over all binary sequences of length `ell`, as a quasi-polynomial in
/// `ell`: the orbit-size-weighted sum of the per-class solution counters.
pub fn ssac_central_moment(p: usize) -> Result<QuasiPolynomial> {
    if p == 0 {
        return Err(Error::UndefinedInput(
            "moment order must be positive".into(),
        ));
    }
    let classes = catalog(p)?;
    Ok(QuasiPolynomial::weighted_sum(classes.iter().map(|class| {
        let sols = class.sols.as_ref().expect("catalog fills sols");
        (rat_int(class.orbit_size as i64), sols)
    })))
}

/// Validation path for small orders: the same moment as a plain sum of
/// solution counters over every contributory partition, one term per
/// partition, no orbit grouping.
pub fn ssac_central_moment_bruteforce_partitions(p: usize) -> Result<QuasiPolynomial> {
    let con = bruteforce_con(p)?;
    let sols: Vec<QuasiPolynomial> = con
        .par_iter()
        .map(|part| sols_quasipoly(&monochrome_of(part)?))
        .collect::<Result<_>>()?;
    Ok(QuasiPolynomial::weighted_sum(
        sols.iter().map(|q| (rat_int(1), q)),
    ))
}

/// Mean of the demerit factor: `1 - 1/ell`.
pub fn adf_mean(ell: u64) -> Result<Rat> {
    if ell == 0 {
        return Err(Error::UndefinedInput("mean needs ell >= 1".into()));
    }
    Ok(rat_int(1) - Rat::new(BigInt::from(1), BigInt::from(ell)))
}

/// Exact `p`-th central moment of the demerit factor at length `ell`:
/// the squared-autocorrelation moment divided by `ell^(2p)` (central
/// moments ignore the `-1` shift and scale with the `p`-th power).
pub fn adf_central_moment(p: usize, ell: u64) -> Result<Rat> {
    if ell == 0 {
        return Err(Error::UndefinedInput("moment needs ell >= 1".into()));
    }
    let ssac = ssac_central_moment(p)?;
    let divisor = BigInt::from(ell).pow(2 * p as u32);
    Ok(ssac.eval_u64(ell) / Rat::from_integer(divisor))
}

/// Exact value of the squared standardized moment `mu_p^2 / mu_2^p`
/// together with the sign of `mu_p`; the standardized moment is the signed
/// square root. Shared by the demerit factor and the raw statistic.
pub fn standardized_moment_squared(p: usize, ell: u64) -> Result<(i8, Rat)> {
    let mu_p = ssac_central_moment(p)?.eval_u64(ell);
    let mu_2 = ssac_central_moment(2)?.eval_u64(ell);
    if mu_2.is_zero() {
        return Err(Error::UndefinedInput(format!(
            "variance vanishes at ell = {ell}; standardized moment undefined"
        )));
    }
    let mut denom = Rat::from_integer(BigInt::from(1));
    for _ in 0..p {
        denom *= &mu_2;
    }
    let sign = if mu_p.is_negative() {
        -1
    } else if mu_p.is_zero() {
        0
    } else {
        1
    };
    Ok((sign, &mu_p * &mu_p / denom))
}

/// Standardized moment `mu_p / mu_2^(p/2)` as a decimal string with
/// exactly `digits` digits after the point (truncated toward zero). Even
/// orders evaluate as exact rationals; odd orders take one integer square
/// root at the requested precision.
pub fn standardized_moment(p: usize, ell: u64, digits: usize) -> Result<String> {
    if p % 2 == 0 {
        let mu_p = ssac_central_moment(p)?.eval_u64(ell);
        let mu_2 = ssac_central_moment(2)?.eval_u64(ell);
        if mu_2.is_zero() {
            return Err(Error::UndefinedInput(format!(
                "variance vanishes at ell = {ell}; standardized moment undefined"
            )));
        }
        let mut denom = Rat::from_integer(BigInt::from(1));
        for _ in 0..p / 2 {
            denom *= &mu_2;
        }
        return Ok(decimal_string(&(mu_p / denom), digits));
    }
    let (sign, squared) = standardized_moment_squared(p, ell)?;
    // floor(sqrt(n/d) * 10^digits) = floor(isqrt(n*d*10^(2*digits)) / d).
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = isqrt(&(squared.numer() * squared.denom() * &scale * &scale)) / squared.denom();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let sign_str = if sign < 0 { "-" } else { "" };
    if digits == 0 {
        Ok(format!("{sign_str}{int_part}"))
    } else {
        Ok(format!(
            "{sign_str}{int_part}.{frac_part:0>width$}",
            width = digits
        ))
    }
}

/// Whether a central moment is zero or strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MomentSign {
    Zero,
    Positive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PositivityEntry {
    pub p: usize,
    pub ell: u64,
    pub sign: MomentSign,
}

/// Evaluates every demerit-factor central moment for `p <= p_max`,
/// `ell <= ell_max` and classifies it as zero or strictly positive.
/// Negative values would contradict the sum-of-counts form and abort.
pub fn positivity_report(p_max: usize, ell_max: u64) -> Result<Vec<PositivityEntry>> {
    let mut entries = vec![];
    for p in 1..=p_max {
        let qp = ssac_central_moment(p)?;
        for ell in 1..=ell_max {
            let value = qp.eval_u64(ell);
            assert!(
                !value.is_negative(),
                "central moments are sums of counts; got negative at p={p} ell={ell}"
            );
            entries.push(PositivityEntry {
                p,
                ell,
                sign: if value.is_zero() {
                    MomentSign::Zero
                } else {
                    MomentSign::Positive
                },
            });
        }
    }
    Ok(entries)
}

/// The closed-form rule for when the `p`-th central moment vanishes:
/// `p = 1`, or odd `p > 1` with `ell <= 3`, or even `p` with `ell <= 2`.
pub fn expected_zero(p: usize, ell: u64) -> bool {
    p == 1 || (p % 2 == 1 && p > 1 && ell <= 3) || (p % 2 == 0 && ell <= 2)
}
