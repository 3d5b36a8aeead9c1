//! Exact quasi-polynomial arithmetic.
//!
//! A quasi-polynomial of period `π` is a function on the integers given by
//! `π` polynomial constituents with rational coefficients: constituent `r`
//! governs arguments congruent to `r` mod `π`. Constituents are polynomials
//! in the argument itself (not in `(n - r)/π`), which matches how the
//! closed-form counting results in this crate are stated and compared.
//!
//! All coefficient arithmetic is exact `BigRational`; the normalized form
//! has minimal period, so equality is structural after [`QuasiPolynomial::normalize`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rat::{format_rat, parse_rat, Rat};

/// Dense univariate polynomial over the rationals, coefficients low-to-high.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> Self {
        Poly { coeffs: vec![c] }.trimmed()
    }

    /// Builds a polynomial from low-to-high coefficients.
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        Poly { coeffs }.trimmed()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero when `k` exceeds the degree).
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    /// Horner evaluation at an integer point (may be negative).
    pub fn eval_int(&self, x: &BigInt) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * Rat::from_integer(x.clone()) + c;
        }
        acc
    }

    pub fn eval_i64(&self, x: i64) -> Rat {
        self.eval_int(&BigInt::from(x))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }

    /// `p(-x)` expanded in `x`.
    pub fn reflect(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Unique interpolating polynomial through points with distinct abscissae.
    pub fn interpolate(points: &[(Rat, Rat)]) -> Poly {
        let mut acc = Poly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            // Lagrange basis polynomial for node i, expanded.
            let mut basis = Poly::constant(yi.clone());
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let denom = xi - xj;
                assert!(!denom.is_zero(), "interpolation nodes must be distinct");
                let factor = Poly::from_coeffs(vec![-xj / &denom, Rat::one() / denom.clone()]);
                basis = basis.mul(&factor);
            }
            acc = acc.add(&basis);
        }
        acc
    }
}

/// Exact quasi-polynomial: a period and one polynomial per residue class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuasiPolynomial {
    period: usize,
    constituents: Vec<Poly>,
}

impl QuasiPolynomial {
    pub fn zero() -> Self {
        QuasiPolynomial {
            period: 1,
            constituents: vec![Poly::zero()],
        }
    }

    pub fn constant(c: Rat) -> Self {
        QuasiPolynomial {
            period: 1,
            constituents: vec![Poly::constant(c)],
        }
    }

    /// Single polynomial seen as a period-1 quasi-polynomial.
    pub fn from_poly(p: Poly) -> Self {
        QuasiPolynomial {
            period: 1,
            constituents: vec![p],
        }
    }

    /// Builds from explicit constituents; `constituents.len()` is the period.
    pub fn from_constituents(constituents: Vec<Poly>) -> Self {
        assert!(!constituents.is_empty(), "period must be positive");
        QuasiPolynomial {
            period: constituents.len(),
            constituents,
        }
        .normalize()
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn constituent(&self, r: usize) -> &Poly {
        &self.constituents[r % self.period]
    }

    pub fn constituents(&self) -> &[Poly] {
        &self.constituents
    }

    pub fn is_zero(&self) -> bool {
        self.constituents.iter().all(Poly::is_zero)
    }

    /// Maximum constituent degree.
    pub fn degree(&self) -> usize {
        self.constituents
            .iter()
            .map(Poly::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn eval_u64(&self, n: u64) -> Rat {
        self.eval_int(&BigInt::from(n))
    }

    /// Evaluates at any integer by selecting the constituent for
    /// `n mod period` (mathematical, nonnegative remainder).
    pub fn eval_int(&self, n: &BigInt) -> Rat {
        let r = n
            .mod_floor(&BigInt::from(self.period))
            .to_string()
            .parse::<usize>()
            .expect("residue fits in usize");
        self.constituents[r].eval_int(n)
    }

    /// Re-expresses with a period that is a multiple of the current one.
    pub fn with_period(&self, period: usize) -> QuasiPolynomial {
        assert!(period > 0 && period % self.period == 0);
        QuasiPolynomial {
            period,
            constituents: (0..period)
                .map(|r| self.constituents[r % self.period].clone())
                .collect(),
        }
    }

    /// Folds to the minimal period that represents the same function.
    pub fn normalize(self) -> QuasiPolynomial {
        for d in 1..=self.period {
            if self.period % d != 0 {
                continue;
            }
            if (0..self.period).all(|r| self.constituents[r] == self.constituents[r % d]) {
                return QuasiPolynomial {
                    period: d,
                    constituents: self.constituents[..d].to_vec(),
                };
            }
        }
        self
    }

    pub fn add(&self, other: &QuasiPolynomial) -> QuasiPolynomial {
        let period = self.period.lcm(&other.period);
        let a = self.with_period(period);
        let b = other.with_period(period);
        QuasiPolynomial {
            period,
            constituents: (0..period)
                .map(|r| a.constituents[r].add(&b.constituents[r]))
                .collect(),
        }
        .normalize()
    }

    pub fn scale(&self, c: &Rat) -> QuasiPolynomial {
        QuasiPolynomial {
            period: self.period,
            constituents: self.constituents.iter().map(|p| p.scale(c)).collect(),
        }
        .normalize()
    }

    pub fn mul(&self, other: &QuasiPolynomial) -> QuasiPolynomial {
        let period = self.period.lcm(&other.period);
        let a = self.with_period(period);
        let b = other.with_period(period);
        QuasiPolynomial {
            period,
            constituents: (0..period)
                .map(|r| a.constituents[r].mul(&b.constituents[r]))
                .collect(),
        }
        .normalize()
    }

    /// Pointwise equality as functions (decided on normalized forms).
    pub fn equals(&self, other: &QuasiPolynomial) -> bool {
        self.clone().normalize() == other.clone().normalize()
    }

    /// Weighted sum of many quasi-polynomials, aligned once to the lcm of
    /// the periods (one alignment instead of one per addition).
    pub fn weighted_sum<'a, I>(terms: I) -> QuasiPolynomial
    where
        I: IntoIterator<Item = (Rat, &'a QuasiPolynomial)>,
    {
        let terms: Vec<(Rat, &QuasiPolynomial)> = terms.into_iter().collect();
        if terms.is_empty() {
            return QuasiPolynomial::zero();
        }
        let period = terms
            .iter()
            .fold(1usize, |acc, (_, q)| acc.lcm(&q.period()));
        let constituents: Vec<Poly> = (0..period)
            .map(|r| {
                let mut acc = Poly::zero();
                for (w, q) in &terms {
                    acc = acc.add(&q.constituent(r).scale(w));
                }
                acc
            })
            .collect();
        QuasiPolynomial::from_constituents(constituents)
    }

    /// Interpolates a quasi-polynomial from exact samples.
    ///
    /// For every residue `r` mod `period` there must be at least
    /// `degree_bound + 1` samples with argument congruent to `r`; the first
    /// `degree_bound + 1` determine the constituent and every remaining
    /// sample is checked against it, so an inconsistent sample (wrong degree
    /// or period hypothesis, or corrupted data) is reported as an error.
    pub fn fit(
        samples: &[(u64, Rat)],
        degree_bound: usize,
        period: usize,
    ) -> Result<QuasiPolynomial> {
        if period == 0 {
            return Err(Error::Fit("period must be positive".into()));
        }
        let mut by_residue: Vec<Vec<(Rat, Rat)>> = vec![vec![]; period];
        for (n, v) in samples {
            by_residue[(*n % period as u64) as usize]
                .push((Rat::from_integer(BigInt::from(*n)), v.clone()));
        }
        let mut constituents = Vec::with_capacity(period);
        for (r, pts) in by_residue.iter().enumerate() {
            if pts.len() < degree_bound + 1 {
                return Err(Error::Fit(format!(
                    "residue {r} mod {period}: need {} samples, got {}",
                    degree_bound + 1,
                    pts.len()
                )));
            }
            let poly = Poly::interpolate(&pts[..degree_bound + 1]);
            for (x, y) in &pts[degree_bound + 1..] {
                if &poly.eval_int(x.numer()) != y {
                    return Err(Error::Fit(format!(
                        "residue {r} mod {period}: sample at {} disagrees with interpolant",
                        x.numer()
                    )));
                }
            }
            constituents.push(poly);
        }
        Ok(QuasiPolynomial::from_constituents(constituents))
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            let unit_coeff = a.is_one() && k > 0;
            if !unit_coeff {
                if a.is_integer() {
                    write!(f, "{}", a.numer())?;
                } else {
                    write!(f, "({}/{})", a.numer(), a.denom())?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "{}ell", if unit_coeff { "" } else { "*" })?,
                _ => write!(f, "{}ell^{}", if unit_coeff { "" } else { "*" }, k)?,
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for QuasiPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.period == 1 {
            return write!(f, "{}", self.constituents[0]);
        }
        writeln!(f, "period {}", self.period)?;
        for (r, p) in self.constituents.iter().enumerate() {
            writeln!(f, "  ell = {r} mod {}: {p}", self.period)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct QpWire {
    period: usize,
    constituents: Vec<Vec<String>>,
}

impl Serialize for QuasiPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = QpWire {
            period: self.period,
            constituents: self
                .constituents
                .iter()
                .map(|p| p.coeffs.iter().map(format_rat).collect())
                .collect(),
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuasiPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = QpWire::deserialize(deserializer)?;
        if wire.period == 0 || wire.constituents.len() != wire.period {
            return Err(D::Error::custom("period must match constituent count"));
        }
        let mut constituents = Vec::with_capacity(wire.period);
        for cs in wire.constituents {
            let coeffs = cs
                .iter()
                .map(|s| parse_rat(s))
                .collect::<Result<Vec<_>>>()
                .map_err(D::Error::custom)?;
            constituents.push(Poly::from_coeffs(coeffs));
        }
        Ok(QuasiPolynomial {
            period: wire.period,
            constituents,
        })
    }
}
