//! Integer polynomials in `q` and factored group orders.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QPolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division of {num} by {den} leaves remainder {rem}")]
    NonExactDivision { num: String, den: String, rem: String },
    #[error("coefficient {0} is not an integer")]
    NonIntegral(String),
    #[error("interpolation needs distinct sample points")]
    RepeatedSample,
    #[error("factored order has a factor with zero constant term: {0}")]
    FactorDivisibleByQ(String),
}

/// Dense polynomial with arbitrary-precision integer coefficients; `coeffs[i]` is the
/// coefficient of `q^i`. Trailing zeros are always trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::from_coeffs(vec![BigInt::from(c)])
    }

    pub fn constant_big(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::from(c);
        Self::from_coeffs(coeffs)
    }

    /// `q^k - c`, the building block of most order formulas.
    pub fn qk_minus(k: usize, c: i64) -> Self {
        Self::monomial(1, k) - Self::constant(c)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute `q -> q^k`.
    pub fn subs_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self::from_coeffs(coeffs)
    }

    /// Substitute `q -> -q`.
    pub fn subs_neg(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Multiply by -1 if the leading coefficient is negative.
    pub fn abs_leading(self) -> Self {
        if self.leading().is_negative() {
            -self
        } else {
            self
        }
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + c;
        }
        acc
    }

    pub fn eval_i64(&self, q: i64) -> BigInt {
        self.eval(&BigInt::from(q))
    }

    pub fn eval_rational(&self, q: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Division with remainder over the integers. Every quotient step must divide
    /// exactly by the leading coefficient of `d`, otherwise the quotient would leave
    /// the integers and an error is returned.
    pub fn div_rem(&self, d: &QPoly) -> Result<(QPoly, QPoly), QPolyError> {
        let dd = d.degree().ok_or(QPolyError::DivisionByZero)?;
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((QPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return Err(QPolyError::NonIntegral(format!("{top}/{lead}")));
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        Ok((QPoly::from_coeffs(quot), QPoly::from_coeffs(rem)))
    }

    /// Exact quotient; any remainder is an error, never a truncation.
    pub fn div_exact(&self, d: &QPoly) -> Result<QPoly, QPolyError> {
        let nonexact = |rem: &QPoly| QPolyError::NonExactDivision {
            num: self.to_string(),
            den: d.to_string(),
            rem: rem.to_string(),
        };
        match self.div_rem(d) {
            Ok((qq, r)) if r.is_zero() => Ok(qq),
            Ok((_, r)) => Err(nonexact(&r)),
            Err(QPolyError::NonIntegral(_)) => Err(nonexact(&QPoly::zero())),
            Err(e) => Err(e),
        }
    }

    /// Largest `k` with `f^k` dividing `self` exactly. The zero polynomial is
    /// reported as multiplicity 0.
    pub fn factor_multiplicity(&self, f: &QPoly) -> u32 {
        assert!(f.degree().is_some_and(|d| d >= 1), "factor must have positive degree");
        let mut k = 0;
        let mut p = self.clone();
        while !p.is_zero() {
            match p.div_exact(f) {
                Ok(next) => {
                    p = next;
                    k += 1;
                }
                Err(_) => break,
            }
        }
        k
    }

    /// Lagrange interpolation through `(x, y)` pairs; the result must have integer
    /// coefficients.
    pub fn interpolate(points: &[(BigInt, BigRational)]) -> Result<QPoly, QPolyError> {
        let n = points.len();
        let mut acc: Vec<BigRational> = vec![BigRational::zero(); n];
        for (i, (xi, yi)) in points.iter().enumerate() {
            // basis numerator prod_{j != i} (q - x_j), denominator prod (x_i - x_j)
            let mut basis: Vec<BigRational> = vec![BigRational::one()];
            let mut denom = BigRational::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let diff = xi - xj;
                if diff.is_zero() {
                    return Err(QPolyError::RepeatedSample);
                }
                denom *= BigRational::from_integer(diff);
                let mut next = vec![BigRational::zero(); basis.len() + 1];
                let xj = BigRational::from_integer(xj.clone());
                for (k, b) in basis.iter().enumerate() {
                    next[k + 1] += b;
                    next[k] -= b * &xj;
                }
                basis = next;
            }
            let scale = yi / denom;
            for (k, b) in basis.iter().enumerate() {
                acc[k] += b * &scale;
            }
        }
        let mut coeffs = Vec::with_capacity(n);
        for c in acc {
            if !c.is_integer() {
                return Err(QPolyError::NonIntegral(c.to_string()));
            }
            coeffs.push(c.to_integer());
        }
        Ok(QPoly::from_coeffs(coeffs))
    }

    /// Parse the `Display` format back, e.g. `q^4 - 2q + 1`.
    pub fn parse(s: &str) -> Result<QPoly, String> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err("empty polynomial".into());
        }
        let mut acc = QPoly::zero();
        let mut rest = cleaned.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let (c, k) = match term.find('q') {
                None => (term.parse::<BigInt>().map_err(|e| e.to_string())?, 0usize),
                Some(pos) => {
                    let c = if pos == 0 {
                        BigInt::one()
                    } else {
                        term[..pos].trim_end_matches('*').parse::<BigInt>().map_err(|e| e.to_string())?
                    };
                    let tail = &term[pos + 1..];
                    let k = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .ok_or_else(|| format!("bad term {term}"))?
                            .parse::<usize>()
                            .map_err(|e| e.to_string())?
                    };
                    (c, k)
                }
            };
            let mut m = vec![BigInt::zero(); k + 1];
            m[k] = c * sign;
            acc = acc + QPoly::from_coeffs(m);
        }
        Ok(acc)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{a}q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{a}q^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QPoly {
            type Output = QPoly;
            fn $m(self, rhs: QPoly) -> QPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QPoly> for QPoly {
            type Output = QPoly;
            fn $m(self, rhs: &QPoly) -> QPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}

impl std::iter::Product for QPoly {
    fn product<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        iter.fold(QPoly::one(), |a, b| a * b)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coeff {
    Small(i64),
    Big(String),
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let cs: Vec<Coeff> = self
            .coeffs
            .iter()
            .map(|c| match i64::try_from(c) {
                Ok(v) => Coeff::Small(v),
                Err(_) => Coeff::Big(c.to_string()),
            })
            .collect();
        cs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let cs = Vec::<Coeff>::deserialize(d)?;
        let mut out = Vec::with_capacity(cs.len());
        for c in cs {
            out.push(match c {
                Coeff::Small(v) => BigInt::from(v),
                Coeff::Big(s) => s.parse().map_err(serde::de::Error::custom)?,
            });
        }
        Ok(QPoly::from_coeffs(out))
    }
}

/// `scalar * q^qpower * prod factor^mult`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredOrder {
    pub scalar: BigRational,
    pub qpower: u32,
    pub factors: Vec<(QPoly, u32)>,
}

impl FactoredOrder {
    pub fn one() -> Self {
        FactoredOrder { scalar: BigRational::one(), qpower: 0, factors: Vec::new() }
    }

    pub fn new(scalar: BigRational, qpower: u32, factors: Vec<(QPoly, u32)>) -> Result<Self, QPolyError> {
        for (f, _) in &factors {
            if f.coeff(0).is_zero() {
                return Err(QPolyError::FactorDivisibleByQ(f.to_string()));
            }
        }
        Ok(FactoredOrder { scalar, qpower, factors })
    }

    pub fn scalar_int(c: i64) -> Self {
        FactoredOrder { scalar: BigRational::from_integer(c.into()), ..Self::one() }
    }

    pub fn qpow(n: u32) -> Self {
        FactoredOrder { qpower: n, ..Self::one() }
    }

    pub fn factor(p: QPoly) -> Self {
        Self::new(BigRational::one(), 0, vec![(p, 1)]).expect("factor with nonzero constant term")
    }

    pub fn mul(&self, other: &FactoredOrder) -> FactoredOrder {
        let mut factors = self.factors.clone();
        for (f, m) in &other.factors {
            match factors.iter_mut().find(|(g, _)| g == f) {
                Some(entry) => entry.1 += m,
                None => factors.push((f.clone(), *m)),
            }
        }
        FactoredOrder {
            scalar: &self.scalar * &other.scalar,
            qpower: self.qpower + other.qpower,
            factors,
        }
    }

    pub fn pow(&self, e: u32) -> FactoredOrder {
        (0..e).fold(FactoredOrder::one(), |acc, _| acc.mul(self))
    }

    fn product_of_factors(&self) -> QPoly {
        self.factors.iter().map(|(f, m)| f.pow(*m)).product()
    }

    fn scaled(&self, p: QPoly) -> Result<QPoly, QPolyError> {
        let numer = p.scale(self.scalar.numer());
        let denom = self.scalar.denom();
        let mut coeffs = Vec::with_capacity(numer.coeffs().len());
        for c in numer.coeffs() {
            let (qq, r) = c.div_rem(denom);
            if !r.is_zero() {
                return Err(QPolyError::NonIntegral(format!("{c}/{denom}")));
            }
            coeffs.push(qq);
        }
        Ok(QPoly::from_coeffs(coeffs))
    }

    /// `scalar * prod factors`, i.e. the order with its `q`-power stripped.
    pub fn pprime_part(&self) -> Result<QPoly, QPolyError> {
        self.scaled(self.product_of_factors())
    }

    pub fn expand(&self) -> Result<QPoly, QPolyError> {
        self.scaled(QPoly::monomial(1, self.qpower as usize) * self.product_of_factors())
    }

    pub fn degree(&self) -> usize {
        self.qpower as usize
            + self
                .factors
                .iter()
                .map(|(f, m)| f.degree().unwrap_or(0) * *m as usize)
                .sum::<usize>()
    }

    /// Exact value at `q`; errors if the rational scalar does not clear.
    pub fn eval(&self, q: &BigInt) -> Result<BigInt, QPolyError> {
        let v = self.eval_rational(q);
        if v.is_integer() {
            Ok(v.to_integer())
        } else {
            Err(QPolyError::NonIntegral(v.to_string()))
        }
    }

    pub fn eval_rational(&self, q: &BigInt) -> BigRational {
        let mut v = BigRational::from_integer(q.pow(self.qpower)) * &self.scalar;
        for (f, m) in &self.factors {
            v *= BigRational::from_integer(f.eval(q).pow(*m));
        }
        v
    }
}

impl fmt::Display for FactoredOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.scalar.is_one() {
            parts.push(self.scalar.to_string());
        }
        match self.qpower {
            0 => {}
            1 => parts.push("q".to_string()),
            n => parts.push(format!("q^{n}")),
        }
        for (p, m) in &self.factors {
            if *m == 1 {
                parts.push(format!("({p})"));
            } else {
                parts.push(format!("({p})^{m}"));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(""))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_small_cases() {
        assert_eq!(QPoly::from_i64s(&[1, -1, 1]).eval_i64(3), BigInt::from(7));
        assert_eq!(QPoly::zero().eval_i64(11), BigInt::zero());
    }

    #[test]
    fn multiplicity_of_q_minus_one() {
        let qm1 = QPoly::qk_minus(1, 1);
        let p = qm1.pow(2) * QPoly::from_i64s(&[1, 1]);
        assert_eq!(p.factor_multiplicity(&qm1), 2);
        assert_eq!(QPoly::from_i64s(&[1, -1, 1]).factor_multiplicity(&qm1), 0);
    }

    #[test]
    fn pprime_strips_q_power() {
        let sl2 = FactoredOrder::new(BigRational::one(), 1, vec![(QPoly::qk_minus(2, 1), 1)]).unwrap();
        assert_eq!(sl2.pprime_part().unwrap(), QPoly::qk_minus(2, 1));
        assert_eq!(sl2.expand().unwrap(), QPoly::from_i64s(&[0, -1, 0, 1]));
    }

    #[test]
    fn display_and_parse_round_trip() {
        let p = QPoly::from_i64s(&[2, 1, 0, 1, 1, 0, 0, 1]);
        assert_eq!(p.to_string(), "q^7 + q^4 + q^3 + q + 2");
        assert_eq!(QPoly::parse(&p.to_string()).unwrap(), p);
        assert_eq!(QPoly::parse("-3q^2+q-1").unwrap(), QPoly::from_i64s(&[-1, 1, -3]));
    }

    #[test]
    fn nonexact_division_is_an_error() {
        let p = QPoly::from_i64s(&[1, 0, 1]);
        assert!(p.div_exact(&QPoly::qk_minus(1, 1)).is_err());
        assert!(QPoly::from_i64s(&[1, 1]).div_exact(&QPoly::from_i64s(&[0, 2])).is_err());
    }
}
