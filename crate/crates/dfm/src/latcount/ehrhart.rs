//! Closed-form box counts: fits the quasi-polynomial `W(l) = #{x in
//! [0, l-1]^t : Mx = 0}` from exact samples.
//!
//! The count of lattice points in integer dilations of the rational
//! polytope `{x in [0,1]^t : Mx = 0}` is a quasi-polynomial whose degree
//! equals the polytope dimension and whose period divides the lcm of the
//! vertex coordinate denominators, so sampling `degree + 1` points per
//! residue class of that period determines it exactly. Two savings keep
//! the sample arguments small: for zero-row-sum systems the solution set
//! is translation-invariant, which gives the reflection identity
//! `W(-l) = (-1)^dim W(l)` and lets each constituent borrow abscissae from
//! its mirror residue; and every residue gets one more sample than needed,
//! which is held out and checked against the interpolant.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::kernel::CountingProblem;
use super::vertices::profile;
use super::IntMatrix;
use crate::error::{Error, Result};
use crate::qpoly::{Poly, QuasiPolynomial};
use crate::rat::Rat;

/// Refuses fits whose sampling work would be astronomical; such a system
/// indicates a period or degree far outside the sizes this engine targets.
const MAX_SAMPLING_OPS: u128 = 4_000_000_000_000;

/// Abscissa plan for one residue: fit nodes first, then held-out nodes.
fn abscissae(r: usize, pi: usize, count: usize) -> Vec<i64> {
    // Direct nodes r, r+pi, ... and reflected nodes -m with m = -r mod pi,
    // merged by absolute value so sample arguments stay minimal.
    let mut out: Vec<i64> = Vec::with_capacity(count);
    let mut direct = r as i64;
    let mut reflected = -(((pi - r) % pi) as i64 + if r == 0 { pi as i64 } else { 0 });
    while out.len() < count {
        if direct <= -reflected {
            out.push(direct);
            direct += pi as i64;
        } else {
            out.push(reflected);
            reflected -= pi as i64;
        }
    }
    out
}

/// Exact quasi-polynomial equal to `l -> #{x in [0, l-1]^t : Mx = 0}` for
/// every `l >= 0`. Requires zero row sums.
pub fn weak_count_quasipoly(m: &IntMatrix) -> Result<QuasiPolynomial> {
    if m.rows.iter().any(|r| r.iter().sum::<i64>() != 0) {
        return Err(Error::Precondition(
            "box-count fitting needs zero row sums".into(),
        ));
    }
    let prob = CountingProblem::new(m);
    let d = prob.dim();
    let prof = profile(m);
    let pi = usize::try_from(prof.period_lcm)
        .map_err(|_| Error::ResourceLimit("vertex denominator lcm too large".into()))?;
    debug_assert_eq!(prof.dim, d, "polytope dimension equals kernel dimension");

    let per_residue = d + 2;
    let plans: Vec<Vec<i64>> = (0..pi).map(|r| abscissae(r, pi, per_residue)).collect();

    // One counter evaluation serves both x and -x.
    let mut needed: Vec<i64> = plans.iter().flatten().map(|&x| x.abs()).collect();
    needed.sort_unstable();
    needed.dedup();
    let est: u128 = needed
        .iter()
        .map(|&l| (l.unsigned_abs() as u128).pow(d.saturating_sub(1).max(1) as u32))
        .sum();
    if est > MAX_SAMPLING_OPS {
        return Err(Error::ResourceLimit(format!(
            "box-count fit would need ~{est} operations (period {pi}, degree {d})"
        )));
    }
    let values: HashMap<i64, Rat> = needed
        .iter()
        .map(|&l| {
            let count = prob.count(l - 1);
            (l, Rat::from_integer(BigInt::from(count)))
        })
        .collect();

    let sign_flip = d % 2 == 1;
    let value_at = |x: i64| -> Rat {
        let w = values[&x.abs()].clone();
        if x < 0 && sign_flip {
            -w
        } else {
            w
        }
    };

    let mut constituents = Vec::with_capacity(pi);
    for plan in &plans {
        let points: Vec<(Rat, Rat)> = plan
            .iter()
            .map(|&x| (Rat::from_integer(BigInt::from(x)), value_at(x)))
            .collect();
        let poly = Poly::interpolate(&points[..d + 1]);
        for (x, y) in &points[d + 1..] {
            if &poly.eval_int(x.numer()) != y {
                return Err(Error::Fit(format!(
                    "held-out box count at {} disagrees with interpolant",
                    x.numer()
                )));
            }
        }
        constituents.push(poly);
    }
    Ok(QuasiPolynomial::from_constituents(constituents))
}
