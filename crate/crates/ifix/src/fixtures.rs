//! Encoded table data and its validation: per-row bound data, parabolic actions
//! with their fixed point polynomials, brute-force cases, errata and the
//! coverage manifest.
//!
//! Everything lives under one data directory (see [`data_dir`]):
//!
//! - `involution_classes.json`, `dimensions.json`, `oracle_generators.json`
//! - `chi_polys.json`: fixed point polynomials, coefficient arrays with the constant term first
//! - `tables/*.json`: one file per table, with `actions`, `parabolics` and `oracle` rows
//! - `errata.json`: corrections applied to printed rows at load time
//! - `coverage.json`: every row of every encoded table, mapped to fixture ids

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algdim::{self, DimError, DimRecord};
use crate::fixity::{
    exceeds_power, log_ratio, maximal_rank_lower_bound, parabolic_index_poly, parse_rational, FixityError,
    ParabolicActionSpec,
};
use crate::lieorders::{parse_order_expr, prime_power, Exceptional, InvolutionTable, LieError, Parity};
use crate::oracle::{burnside_check, coset_action, ifix_exact, GeneratorSpec, MatGroup, OracleError, ELEMENT_CAP};
use crate::qpoly::{QPoly, QPolyError};

pub const DATA_ENV: &str = "IFIX_DATA_DIR";

/// Largest `q` tried when searching for admissible field sizes.
const MAX_Q: u64 = 5000;

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("row {id}: {msg}")]
    Row { id: String, msg: String },
    #[error("row {id}: q = {q} violates the row conditions")]
    Condition { id: String, q: u64 },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Fixity(#[from] FixityError),
    #[error(transparent)]
    Poly(#[from] QPolyError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Dim(#[from] DimError),
}

fn row_err(id: &str, msg: impl Into<String>) -> FixtureError {
    FixtureError::Row { id: id.to_string(), msg: msg.into() }
}

/// `$IFIX_DATA_DIR`, or the `data/` directory of the source tree.
pub fn data_dir() -> PathBuf {
    match std::env::var_os(DATA_ENV) {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FixtureError> {
    let text = fs::read_to_string(path).map_err(|source| FixtureError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| FixtureError::Json { path: path.into(), source })
}

pub fn load_involution_table(dir: &Path) -> Result<InvolutionTable, FixtureError> {
    let path = dir.join("involution_classes.json");
    let text = fs::read_to_string(&path).map_err(|source| FixtureError::Io { path, source })?;
    Ok(InvolutionTable::from_json(&text)?)
}

// ---------------------------------------------------------------------------
// conditions on q

/// Degree of `F_q` over `F_p` forced by a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldRule {
    /// `F_q = F_p[sqrt 13]`
    Sqrt13,
    /// `F_q = F_p[w]` with `w^3 - 3w + 1 = 0`
    Omega,
    /// `q = p` if `p = +-1 mod 5`, else `q = p^2`
    Mod5,
}

impl FieldRule {
    pub fn degree(&self, p: u64) -> u32 {
        let has_root = |f: &dyn Fn(u64) -> u64| (0..p).any(|x| f(x) % p == 0);
        match self {
            FieldRule::Sqrt13 => {
                if has_root(&|x| (x * x + p * 13 - 13 % p) % p) {
                    1
                } else {
                    2
                }
            }
            FieldRule::Omega => {
                if has_root(&|x| (x * x % p * x + 3 * p * p - 3 * x + 1) % p) {
                    1
                } else {
                    3
                }
            }
            FieldRule::Mod5 => {
                if p % 5 == 1 || p % 5 == 4 {
                    1
                } else {
                    2
                }
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Conditions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_p: Option<u64>,
    /// The characteristic is one of these.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p_not: Vec<u64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub prime_field: bool,
    /// `q = p^f` with `f` odd.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub odd_exponent: bool,
    /// Only these field sizes.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub q: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldRule>,
    /// `q = eps mod 3`.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub q_eps_mod_3: bool,
    /// Excluded `(q, eps)` pairs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exclude: Vec<(u64, i64)>,
}

impl Conditions {
    pub fn allows(&self, q: u64, eps: i64) -> bool {
        let Some((p, f)) = prime_power(q) else { return false };
        self.parity.is_none_or(|par| Parity::of(q) == par)
            && self.min_q.is_none_or(|m| q >= m)
            && self.min_p.is_none_or(|m| p >= m)
            && (self.p.is_empty() || self.p.contains(&p))
            && !self.p_not.contains(&p)
            && (!self.prime_field || f == 1)
            && (!self.odd_exponent || f % 2 == 1)
            && (self.q.is_empty() || self.q.contains(&q))
            && self.field.is_none_or(|r| r.degree(p) == f)
            && (!self.q_eps_mod_3 || (q as i64 - eps).rem_euclid(3) == 0)
            && !self.exclude.contains(&(q, eps))
    }

    /// Parities compatible with the conditions.
    pub fn parities(&self) -> Vec<Parity> {
        [Parity::Odd, Parity::Even]
            .into_iter()
            .filter(|&par| self.parity.is_none_or(|x| x == par))
            .filter(|&par| {
                let ok = |p: u64| Parity::of(p) == par;
                (self.p.is_empty() || self.p.iter().any(|&p| ok(p)))
                    && (self.q.is_empty() || self.q.iter().any(|&q| ok(q)))
                    && !(par == Parity::Even && self.min_p.is_some_and(|m| m > 2))
            })
            .collect()
    }
}

/// `G2(2)'`, `2G2(3)'` and `2F4(2)'` are handled separately and never count as admissible.
pub fn is_small_exception(fam: Exceptional, q: u64) -> bool {
    matches!((fam, q), (Exceptional::G2, 2) | (Exceptional::G2Twisted, 3) | (Exceptional::F4Twisted, 2))
}

fn family_allows(fam: Exceptional, q: u64) -> bool {
    fam.admissible(q) && !is_small_exception(fam, q) && !(fam == Exceptional::B2Twisted && q == 2)
}

fn prime_powers() -> impl Iterator<Item = u64> {
    (2..=MAX_Q).filter(|&q| prime_power(q).is_some())
}

// ---------------------------------------------------------------------------
// per-row bound data

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupKind {
    Parabolic,
    MaximalRank,
    Algebraic,
    Subfield,
    Exotic,
    AlmostSimple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupDesc {
    pub text: String,
    pub kind: SubgroupKind,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    #[default]
    Paper,
    /// Depends on conditions recorded only in the secondary literature; not gated.
    SecondaryLiterature,
}

/// `H_0 = X(q_0)` inside `T(q_0^k)` with `k` prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Subfield {
    pub family: Exceptional,
    #[serde(default)]
    pub min_q0: u64,
    /// Primes `k` for which `X(q_0) < T(q_0^k)` is not a subgroup.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exclude_k: Vec<u32>,
}

impl Subfield {
    fn allows_k(&self, k: u32) -> bool {
        !self.exclude_k.contains(&k)
    }
}

/// One table row: an involution `t in H_0`, a bound on `|C_{H_0}(t)|` (or on
/// `|t^T cap H_0|`), and the `T`-class of `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFixture {
    pub id: String,
    pub families: Vec<Exceptional>,
    pub subgroup: SubgroupDesc,
    /// Values of `e` in the expressions; defaults to the sign of the family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Vec<i64>>,
    #[serde(default)]
    pub conditions: Conditions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subfield: Option<Subfield>,
    /// `|H_0| = h0` if `h0_exact`. Otherwise `h0 / h0_div` is the order of a subgroup
    /// of `Inndiag(T)` whose intersection with `T` lies in `H_0`.
    pub h0: String,
    #[serde(default = "one_u64")]
    pub h0_div: u64,
    #[serde(default)]
    pub h0_exact: bool,
    pub involution: String,
    /// `|C_{H_0}(t)| <= f / f_div`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default = "one_u64")]
    pub f_div: u64,
    /// `f` is also divided by `gcd(f_center, q - e)`: the centralizer lives in `SL_n^e / Z`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_center: Option<u64>,
    /// `|t^T cap H_0| >= sum of count`; needs an exact `h0`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub count: Vec<String>,
    /// Class labels (the one present at `q` is used), or `largest`.
    pub target: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub alpha_at: BTreeMap<u64, String>,
    #[serde(default)]
    pub source: Source,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

fn one_u64() -> u64 {
    1
}

/// A field size at which a row is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowPoint {
    pub family: Exceptional,
    pub eps: i64,
    pub q: u64,
    /// The subfield for subfield rows.
    pub q0: Option<u64>,
}

/// `ifix(T) >= ifix_lb` together with `n` (exact or an upper bound).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowEval {
    pub point: RowPoint,
    pub target: String,
    #[serde(with = "big")]
    pub ifix_lb: BigInt,
    #[serde(with = "big")]
    pub n: BigInt,
    pub n_exact: bool,
    pub alpha: Option<String>,
    pub passes: bool,
    pub log_ratio: f64,
}

pub(crate) mod big {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Compares `x` with `n^a` as `x^den` against `n^num`.
pub fn power_cmp(x: &BigInt, n: &BigInt, a: &BigRational) -> std::cmp::Ordering {
    let num = a.numer().to_u32().expect("small exponent");
    let den = a.denom().to_u32().expect("small exponent");
    x.pow(den).cmp(&n.pow(num))
}

/// `x > n^alpha`, or `x >= 1` when `alpha = 0`.
pub fn alpha_holds(x: &BigInt, n: &BigInt, alpha: &BigRational) -> bool {
    if alpha.is_zero() {
        x.is_positive()
    } else {
        exceeds_power(x, n, alpha)
    }
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

impl ActionFixture {
    pub fn eps_values(&self, fam: Exceptional) -> Vec<i64> {
        self.eps.clone().unwrap_or_else(|| vec![fam.eps()])
    }

    fn expr(&self, s: &str, eps: i64, x: u64) -> Result<BigInt, FixtureError> {
        parse_order_expr(s, eps)?.eval(&BigInt::from(x)).map_err(|e| row_err(&self.id, format!("{s}: {e}")))
    }

    fn expr_degree(&self, s: &str) -> Result<usize, FixtureError> {
        Ok(parse_order_expr(s, 1)?.degree())
    }

    /// Whether the row (with its subfield, if any) applies at `(q, eps)`.
    pub fn allows(&self, fam: Exceptional, eps: i64, q: u64, q0: Option<u64>) -> bool {
        if !self.families.contains(&fam) || !family_allows(fam, q) || !self.conditions.allows(q, eps) {
            return false;
        }
        match (&self.subfield, q0) {
            (None, None) => true,
            (Some(sf), Some(q0)) => {
                q0 >= sf.min_q0
                    && sf.family.admissible(q0)
                    && (2..=13u32).any(|k| is_prime(k as u64) && sf.allows_k(k) && q0.checked_pow(k) == Some(q))
            }
            _ => false,
        }
    }

    /// The three smallest admissible points for each family and sign.
    pub fn admissible_points(&self, count: usize) -> Vec<RowPoint> {
        let mut out = Vec::new();
        for &family in &self.families {
            for eps in self.eps_values(family) {
                let mut pts: Vec<RowPoint> = match &self.subfield {
                    None => prime_powers()
                        .filter(|&q| self.allows(family, eps, q, None))
                        .take(count)
                        .map(|q| RowPoint { family, eps, q, q0: None })
                        .collect(),
                    Some(_) => {
                        let mut v = Vec::new();
                        for q0 in (2..=64).filter(|&q| prime_power(q).is_some()) {
                            for k in [2u32, 3, 5, 7] {
                                let Some(q) = q0.checked_pow(k).filter(|&q| q < 1 << 40) else { continue };
                                if self.allows(family, eps, q, Some(q0)) {
                                    v.push(RowPoint { family, eps, q, q0: Some(q0) });
                                }
                            }
                        }
                        v.sort_by_key(|p| p.q);
                        v.truncate(count);
                        v
                    }
                };
                out.append(&mut pts);
            }
        }
        out
    }

    fn target_degree(&self, fam: Exceptional, table: &InvolutionTable) -> Result<usize, FixtureError> {
        let parities = self.conditions.parities();
        if self.target == ["largest"] {
            return table
                .records
                .iter()
                .filter(|r| r.family() == fam && parities.contains(&r.raw.parity))
                .map(|r| r.connected_centralizer().degree())
                .min()
                .ok_or_else(|| row_err(&self.id, format!("no involution classes for {fam}")));
        }
        let mut degs = BTreeSet::new();
        for label in &self.target {
            let rec = table.find(fam, label).ok_or_else(|| row_err(&self.id, format!("no class {label} in {fam}")))?;
            degs.insert(rec.connected_centralizer().degree());
        }
        if degs.len() != 1 {
            return Err(row_err(&self.id, "alternative targets of different degree"));
        }
        Ok(degs.into_iter().next().unwrap_or(0))
    }

    /// `(deg C_T(t) - deg f) / deg n`, as `q_0 -> infinity` and minimised over `k`
    /// for subfield rows.
    pub fn recomputed_gamma(&self, table: &InvolutionTable) -> Result<BigRational, FixtureError> {
        let mut values = BTreeSet::new();
        for &fam in &self.families {
            let dt = fam.order().degree() as i64;
            let dc = self.target_degree(fam, table)? as i64;
            let dh = self.expr_degree(&self.h0)? as i64;
            let df = match (&self.f, self.count.is_empty()) {
                (Some(f), true) => self.expr_degree(f)? as i64,
                (None, false) => {
                    let mut d = 0;
                    for c in &self.count {
                        d = d.max(self.expr_degree(c)?);
                    }
                    dh - d as i64
                }
                _ => return Err(row_err(&self.id, "exactly one of f and count is required")),
            };
            let ratio = |k: i64| -> Result<BigRational, FixtureError> {
                let den = k * dt - dh;
                if den <= 0 {
                    return Err(row_err(&self.id, "deg n <= 0"));
                }
                Ok(BigRational::new(BigInt::from(k * dc - df), BigInt::from(den)))
            };
            let g = match &self.subfield {
                None => ratio(1)?,
                Some(sf) => {
                    let ks: Vec<i64> = [2i64, 3, 5, 7]
                        .into_iter()
                        .filter(|&k| (k % 2 == 1 || fam.admissible(4)) && sf.allows_k(k as u32))
                        .collect();
                    let limit = BigRational::new(BigInt::from(dc), BigInt::from(dt));
                    let mut best = limit;
                    for k in ks {
                        best = best.min(ratio(k)?);
                    }
                    best
                }
            };
            values.insert(g);
        }
        if values.len() != 1 {
            return Err(row_err(&self.id, "families disagree on gamma"));
        }
        Ok(values.into_iter().next().expect("one value"))
    }

    pub fn alpha_at_q(&self, q: u64) -> Option<&str> {
        self.alpha_at.get(&q).or(self.alpha.as_ref()).map(|s| s.as_str())
    }

    /// The bound at one point.
    pub fn evaluate(&self, table: &InvolutionTable, pt: RowPoint) -> Result<RowEval, FixtureError> {
        let RowPoint { family: fam, eps, q, q0 } = pt;
        if !self.allows(fam, eps, q, q0) {
            return Err(FixtureError::Condition { id: self.id.clone(), q });
        }
        let x = q0.unwrap_or(q);
        let order_t = fam.simple_order(q);
        let (target, class_t) = if self.target == ["largest"] {
            let mut best: Option<(String, BigInt)> = None;
            for r in table.classes_at(fam, q) {
                let size = r.class_size()?.eval(q)?;
                if best.as_ref().is_none_or(|(_, b)| size > *b) {
                    best = Some((r.label().to_string(), size));
                }
            }
            best.ok_or_else(|| row_err(&self.id, format!("no involutions in {fam}({q})")))?
        } else {
            let rec = self
                .target
                .iter()
                .filter_map(|l| table.find(fam, l))
                .find(|r| r.applies(q))
                .ok_or_else(|| row_err(&self.id, format!("no target class present at q = {q}")))?;
            (rec.label().to_string(), rec.class_size()?.eval(q)?)
        };
        let h0 = self.expr(&self.h0, eps, x)?;
        let (n, n_exact) = if self.h0_exact {
            let (n, r) = order_t.div_rem(&h0);
            if !r.is_zero() {
                return Err(row_err(&self.id, format!("|H_0| = {h0} does not divide |T| at q = {q}")));
            }
            (n, true)
        } else {
            let div = BigInt::from(self.h0_div) * BigInt::from(fam.inndiag_index(q));
            (ceil_div(&(&order_t * div), &h0), false)
        };
        let f = match (&self.f, self.count.is_empty()) {
            (Some(f), true) => {
                let center = self.f_center.map_or(1, |c| c.gcd(&(x as i64 - eps).unsigned_abs()));
                BigRational::new(self.expr(f, eps, x)?, BigInt::from(self.f_div * center))
            }
            (None, false) if self.h0_exact => {
                let mut total = BigInt::zero();
                for c in &self.count {
                    total += self.expr(c, eps, x)?;
                }
                BigRational::new(h0.clone(), total)
            }
            (None, false) => return Err(row_err(&self.id, "count needs an exact h0")),
            _ => return Err(row_err(&self.id, "exactly one of f and count is required")),
        };
        let bound = maximal_rank_lower_bound(&order_t, &f, &class_t, (0, 0, 0, 1))?;
        let alpha = self.alpha_at_q(q).map(str::to_string);
        let passes = match &alpha {
            Some(a) => alpha_holds(&bound.ifix_lb, &n, &parse_rational(a)?),
            None => bound.ifix_lb.is_positive(),
        };
        let log_ratio = if bound.ifix_lb.is_positive() && n > BigInt::one() { log_ratio(&bound.ifix_lb, &n) } else { 0.0 };
        Ok(RowEval { point: pt, target, ifix_lb: bound.ifix_lb, n, n_exact, alpha, passes, log_ratio })
    }

    fn validate(&self, table: &InvolutionTable) -> Result<(), FixtureError> {
        if self.families.is_empty() || self.target.is_empty() {
            return Err(row_err(&self.id, "families and target must be nonempty"));
        }
        if self.f.is_some() != self.count.is_empty() {
            return Err(row_err(&self.id, "exactly one of f and count is required"));
        }
        if !self.count.is_empty() && !self.h0_exact {
            return Err(row_err(&self.id, "count needs an exact h0"));
        }
        if self.h0_div == 0 || self.f_div == 0 {
            return Err(row_err(&self.id, "zero divisor"));
        }
        for s in [&self.h0].into_iter().chain(&self.f).chain(&self.count) {
            for eps in [1, -1] {
                parse_order_expr(s, eps).map_err(|e| row_err(&self.id, e.to_string()))?;
            }
        }
        for a in self.alpha.iter().chain(self.alpha_at.values()) {
            parse_rational(a).map_err(|e| row_err(&self.id, e.to_string()))?;
        }
        if let Some(g) = &self.gamma {
            let stored = parse_rational(g).map_err(|e| row_err(&self.id, e.to_string()))?;
            let got = self.recomputed_gamma(table)?;
            if stored != got {
                return Err(row_err(&self.id, format!("stored gamma {stored}, recomputed {got}")));
            }
        } else {
            self.recomputed_gamma(table)?;
        }
        Ok(())
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

// ---------------------------------------------------------------------------
// parabolic actions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChiSource {
    /// Printed in closed form.
    Printed,
    /// Interpolated by the character sum engine and frozen.
    Engine,
}

/// `chi(t)` for one class on the cosets of a parabolic, as a polynomial in `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChiFixture {
    pub id: String,
    pub family: Exceptional,
    pub parabolic: String,
    pub class: String,
    pub parity: Parity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_mod_4: Option<u64>,
    pub poly: QPoly,
    pub source: ChiSource,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl ChiFixture {
    pub fn applies(&self, q: u64) -> bool {
        Parity::of(q) == self.parity && self.q_mod_4.is_none_or(|m| q % 4 == m) && family_allows(self.family, q)
    }
}

/// The action on the cosets of a parabolic, with the fixed point polynomials that
/// determine (or bound below) `ifix`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParabolicFixture {
    pub id: String,
    pub family: Exceptional,
    pub parabolic: String,
    /// `|P_sigma|`; if absent, the index comes from the Weyl group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilizer: Option<String>,
    /// A printed product form of `n`, cross-checked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_printed: Option<String>,
    pub chi: Vec<String>,
    #[serde(default)]
    pub conditions: Conditions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParabolicEval {
    pub q: u64,
    pub class: String,
    #[serde(with = "big")]
    pub ifix: BigInt,
    #[serde(with = "big")]
    pub n: BigInt,
    pub alpha: Option<String>,
    pub passes: bool,
    pub log_ratio: f64,
}

impl ParabolicFixture {
    pub fn index_poly(&self) -> Result<QPoly, FixtureError> {
        match &self.stabilizer {
            Some(s) => Ok(self.family.order().expand()?.div_exact(&parse_order_expr(s, self.family.eps())?.expand()?)?),
            None => {
                let spec = ParabolicActionSpec::parse(self.family, &self.parabolic)?;
                Ok(parabolic_index_poly(&spec)?)
            }
        }
    }

    fn chis<'a>(&self, all: &'a [ChiFixture]) -> Result<Vec<&'a ChiFixture>, FixtureError> {
        self.chi
            .iter()
            .map(|id| {
                all.iter().find(|c| &c.id == id).ok_or_else(|| row_err(&self.id, format!("unknown chi fixture {id}")))
            })
            .collect()
    }

    pub fn allows(&self, q: u64) -> bool {
        family_allows(self.family, q) && self.conditions.allows(q, self.family.eps())
    }

    pub fn admissible_qs(&self, count: usize) -> Vec<u64> {
        prime_powers().filter(|&q| self.allows(q)).take(count).collect()
    }

    /// `min` over parities of `max deg chi / deg n`.
    pub fn recomputed_gamma(&self, all: &[ChiFixture]) -> Result<BigRational, FixtureError> {
        let dn = self.index_poly()?.degree().ok_or_else(|| row_err(&self.id, "zero index"))?;
        let chis = self.chis(all)?;
        let mut best: Option<BigRational> = None;
        for par in self.conditions.parities() {
            let Some(d) = chis.iter().filter(|c| c.parity == par).filter_map(|c| c.poly.degree()).max() else {
                continue;
            };
            let r = BigRational::new(BigInt::from(d), BigInt::from(dn));
            best = Some(best.map_or(r.clone(), |b: BigRational| b.min(r)));
        }
        best.ok_or_else(|| row_err(&self.id, "no fixed point polynomial for any allowed parity"))
    }

    pub fn evaluate(&self, all: &[ChiFixture], q: u64) -> Result<ParabolicEval, FixtureError> {
        if !self.allows(q) {
            return Err(FixtureError::Condition { id: self.id.clone(), q });
        }
        let qb = BigInt::from(q);
        let n = self.index_poly()?.eval(&qb);
        let (class, ifix) = self
            .chis(all)?
            .into_iter()
            .filter(|c| c.applies(q))
            .map(|c| (c.class.clone(), c.poly.eval(&qb)))
            .max_by(|a, b| a.1.cmp(&b.1))
            .ok_or_else(|| row_err(&self.id, format!("no fixed point polynomial at q = {q}")))?;
        let passes = match &self.alpha {
            Some(a) => alpha_holds(&ifix, &n, &parse_rational(a)?),
            None => true,
        };
        let log_ratio = if ifix.is_positive() { log_ratio(&ifix, &n) } else { 0.0 };
        Ok(ParabolicEval { q, class, ifix, n, alpha: self.alpha.clone(), passes, log_ratio })
    }

    fn validate(&self, all: &[ChiFixture]) -> Result<(), FixtureError> {
        let n = self.index_poly()?;
        if let Some(p) = &self.n_printed {
            let printed = parse_order_expr(p, self.family.eps())?.expand()?;
            if printed != n {
                return Err(row_err(&self.id, format!("printed n {printed} differs from the index {n}")));
            }
        }
        for c in self.chis(all)? {
            if c.family != self.family || c.parabolic != self.parabolic {
                return Err(row_err(&self.id, format!("{} belongs to another action", c.id)));
            }
            let qs: Vec<u64> = (2..200).filter(|&q| c.applies(q) && prime_power(q).is_some()).take(3).collect();
            for q in qs {
                let qb = BigInt::from(q);
                let v = c.poly.eval(&qb);
                if !v.is_positive() || v > n.eval(&qb) {
                    return Err(row_err(&c.id, format!("chi = {v} outside [1, n] at q = {q}")));
                }
            }
        }
        if let Some(g) = &self.gamma {
            let stored = parse_rational(g)?;
            let got = self.recomputed_gamma(all)?;
            if stored != got {
                return Err(row_err(&self.id, format!("stored gamma {stored}, recomputed {got}")));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// brute-force cases

/// A small action computed by enumerating the group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCase {
    pub id: String,
    pub group: String,
    pub subgroup: String,
    pub subgroup_text: String,
    pub n: u64,
    pub ifix: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleEval {
    pub id: String,
    pub n: u64,
    pub ifix: u64,
    /// `(|t^G|, |t^G cap H|, fix(t))` per class of involutions.
    pub classes: Vec<(usize, usize, usize)>,
    pub burnside: bool,
    pub alpha_ok: bool,
    pub log_ratio: f64,
    pub passes: bool,
}

pub fn load_generators(dir: &Path) -> Result<Vec<GeneratorSpec>, FixtureError> {
    read_json(&dir.join("oracle_generators.json"))
}

impl OracleCase {
    pub fn evaluate(&self, gens: &[GeneratorSpec]) -> Result<OracleEval, FixtureError> {
        let spec = gens.iter().find(|g| g.id == self.group).ok_or_else(|| OracleError::Unknown(self.group.clone()))?;
        let g = MatGroup::from_spec(spec, ELEMENT_CAP)?;
        let h = g.subgroup_from_spec(&self.subgroup)?;
        let a = coset_action(&g, &h)?;
        let (ifix, per) = ifix_exact(&g, &a);
        let n = BigInt::from(a.n);
        let x = BigInt::from(ifix);
        // the printed constant is log ifix / log n truncated to its last digit
        let alpha_ok = match &self.alpha {
            Some(s) => {
                let alpha = parse_rational(s)?;
                let digits = s.split_once('.').map_or(0, |(_, f)| f.len()) as u32;
                let next = &alpha + BigRational::new(BigInt::one(), BigInt::from(10u32).pow(digits));
                power_cmp(&x, &n, &alpha).is_ge() && power_cmp(&x, &n, &next).is_lt()
            }
            None => true,
        };
        let burnside = burnside_check(&g, &a);
        let lr = if ifix > 1 { log_ratio(&x, &n) } else { 0.0 };
        Ok(OracleEval {
            id: self.id.clone(),
            n: a.n as u64,
            ifix: ifix as u64,
            classes: per.iter().map(|c| (c.class_size, c.class_in_h, c.fix)).collect(),
            burnside,
            alpha_ok,
            log_ratio: lr,
            passes: a.n as u64 == self.n && ifix as u64 == self.ifix && burnside && alpha_ok,
        })
    }
}

// ---------------------------------------------------------------------------
// errata and coverage

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErratumField {
    F,
    Gamma,
    Target,
}

/// A printed value that is inconsistent with the rest of its row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Erratum {
    pub row: String,
    pub field: ErratumField,
    pub printed: String,
    pub corrected: String,
    pub reason: String,
}

impl Erratum {
    fn apply(&self, row: &mut ActionFixture) -> Result<(), FixtureError> {
        let slot: &mut String = match self.field {
            ErratumField::F => row.f.as_mut().ok_or_else(|| row_err(&self.row, "erratum on f, row has none"))?,
            ErratumField::Gamma => row.gamma.as_mut().ok_or_else(|| row_err(&self.row, "erratum on gamma, row has none"))?,
            ErratumField::Target => {
                if row.target.len() != 1 {
                    return Err(row_err(&self.row, "erratum on a target list"));
                }
                &mut row.target[0]
            }
        };
        if *slot != self.printed {
            return Err(row_err(&self.row, format!("erratum expects {:?}, row has {:?}", self.printed, slot)));
        }
        *slot = self.corrected.clone();
        Ok(())
    }
}

/// A value a table row states, checked against a fixture field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageCheck {
    /// `gamma`, `alpha`, `alpha@q`, `n` or `ifix`.
    pub field: String,
    pub value: String,
    /// Restricts the check to one of the row's fixtures.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageRow {
    pub row: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fixtures: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CoverageCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_of_scope: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coverage {
    /// Number of rows of each table.
    pub tables: BTreeMap<String, usize>,
    pub rows: Vec<CoverageRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    /// `(table, rows, covered, out of scope)`
    pub tables: Vec<(String, usize, usize, usize)>,
    pub problems: Vec<String>,
}

impl CoverageReport {
    pub fn ok(&self) -> bool {
        self.problems.is_empty()
    }
}

// ---------------------------------------------------------------------------
// the whole set

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub table: String,
    #[serde(default)]
    pub actions: Vec<ActionFixture>,
    #[serde(default)]
    pub parabolics: Vec<ParabolicFixture>,
    #[serde(default)]
    pub oracle: Vec<OracleCase>,
}

#[derive(Clone, Debug)]
pub struct FixtureSet {
    pub dir: PathBuf,
    pub involutions: InvolutionTable,
    pub dims: Vec<DimRecord>,
    pub tables: Vec<TableFile>,
    pub chis: Vec<ChiFixture>,
    pub errata: Vec<Erratum>,
    pub coverage: Coverage,
}

/// Outcome of the gate for one row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowReport {
    pub id: String,
    pub kind: String,
    pub gamma: Option<String>,
    pub gamma_recomputed: Option<String>,
    pub skipped: bool,
    pub evaluations: Vec<RowEval>,
    pub parabolic: Vec<ParabolicEval>,
    pub errors: Vec<String>,
}

impl RowReport {
    pub fn passes(&self) -> bool {
        self.skipped
            || (self.errors.is_empty()
                && self.evaluations.iter().all(|e| e.passes)
                && self.parabolic.iter().all(|e| e.passes))
    }
}

impl FixtureSet {
    pub fn load_default() -> Result<Self, FixtureError> {
        Self::load(&data_dir())
    }

    pub fn load(dir: &Path) -> Result<Self, FixtureError> {
        let involutions = load_involution_table(dir)?;
        let dims: Vec<DimRecord> = read_json(&dir.join("dimensions.json"))?;
        let chis: Vec<ChiFixture> = read_json(&dir.join("chi_polys.json"))?;
        let errata: Vec<Erratum> = read_json(&dir.join("errata.json"))?;
        let coverage: Coverage = read_json(&dir.join("coverage.json"))?;
        let mut paths: Vec<PathBuf> = fs::read_dir(dir.join("tables"))
            .map_err(|source| FixtureError::Io { path: dir.join("tables"), source })?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        let mut tables = Vec::new();
        for p in paths {
            tables.push(read_json::<TableFile>(&p)?);
        }
        let mut set = FixtureSet { dir: dir.to_path_buf(), involutions, dims, tables, chis, errata, coverage };
        set.apply_errata()?;
        set.validate()?;
        Ok(set)
    }

    fn apply_errata(&mut self) -> Result<(), FixtureError> {
        for e in &self.errata {
            let row = self
                .tables
                .iter_mut()
                .flat_map(|t| t.actions.iter_mut())
                .find(|a| a.id == e.row)
                .ok_or_else(|| row_err(&e.row, "erratum for an unknown row"))?;
            e.apply(row)?;
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), FixtureError> {
        let mut seen = BTreeSet::new();
        for id in self.all_ids() {
            if !seen.insert(id.clone()) {
                return Err(row_err(&id, "duplicate id"));
            }
        }
        for t in &self.tables {
            for a in &t.actions {
                a.validate(&self.involutions)?;
            }
            for p in &t.parabolics {
                p.validate(&self.chis)?;
            }
        }
        for d in &self.dims {
            let got = algdim::gamma(d, &self.involutions)?;
            if got != parse_rational(&d.gamma)? {
                return Err(row_err(&d.id, format!("stored gamma {}, computed {got}", d.gamma)));
            }
        }
        Ok(())
    }

    pub fn actions(&self) -> impl Iterator<Item = &ActionFixture> {
        self.tables.iter().flat_map(|t| t.actions.iter())
    }

    pub fn parabolics(&self) -> impl Iterator<Item = &ParabolicFixture> {
        self.tables.iter().flat_map(|t| t.parabolics.iter())
    }

    pub fn oracle_cases(&self) -> impl Iterator<Item = &OracleCase> {
        self.tables.iter().flat_map(|t| t.oracle.iter())
    }

    pub fn action(&self, id: &str) -> Option<&ActionFixture> {
        self.actions().find(|a| a.id == id)
    }

    pub fn parabolic(&self, id: &str) -> Option<&ParabolicFixture> {
        self.parabolics().find(|a| a.id == id)
    }

    pub fn table(&self, name: &str) -> Option<&TableFile> {
        self.tables.iter().find(|t| t.table == name)
    }

    fn all_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.actions().map(|a| a.id.clone()).collect();
        ids.extend(self.parabolics().map(|a| a.id.clone()));
        ids.extend(self.oracle_cases().map(|a| a.id.clone()));
        ids.extend(self.chis.iter().map(|a| a.id.clone()));
        ids.extend(self.dims.iter().map(|a| a.id.clone()));
        ids
    }

    /// Evaluates an action row at its smallest admissible points.
    pub fn gate_action(&self, a: &ActionFixture, points: usize) -> RowReport {
        let mut report = RowReport {
            id: a.id.clone(),
            kind: "action".into(),
            gamma: a.gamma.clone(),
            gamma_recomputed: None,
            skipped: a.source == Source::SecondaryLiterature,
            evaluations: Vec::new(),
            parabolic: Vec::new(),
            errors: Vec::new(),
        };
        match a.recomputed_gamma(&self.involutions) {
            Ok(g) => {
                if let Some(s) = &a.gamma {
                    if parse_rational(s).ok() != Some(g.clone()) {
                        report.errors.push(format!("gamma {s} recomputes to {g}"));
                    }
                }
                report.gamma_recomputed = Some(g.to_string());
            }
            Err(e) => report.errors.push(e.to_string()),
        }
        let pts = a.admissible_points(points);
        if pts.is_empty() {
            report.errors.push("no admissible q".into());
        }
        for pt in pts {
            match a.evaluate(&self.involutions, pt) {
                Ok(e) => report.evaluations.push(e),
                Err(e) => report.errors.push(e.to_string()),
            }
        }
        report
    }

    pub fn gate_parabolic(&self, p: &ParabolicFixture, points: usize) -> RowReport {
        let mut report = RowReport {
            id: p.id.clone(),
            kind: "parabolic".into(),
            gamma: p.gamma.clone(),
            gamma_recomputed: None,
            skipped: false,
            evaluations: Vec::new(),
            parabolic: Vec::new(),
            errors: Vec::new(),
        };
        match p.recomputed_gamma(&self.chis) {
            Ok(g) => report.gamma_recomputed = Some(g.to_string()),
            Err(e) => report.errors.push(e.to_string()),
        }
        let qs = p.admissible_qs(points);
        if qs.is_empty() {
            report.errors.push("no admissible q".into());
        }
        for q in qs {
            match p.evaluate(&self.chis, q) {
                Ok(e) => report.parabolic.push(e),
                Err(e) => report.errors.push(e.to_string()),
            }
        }
        report
    }

    /// The gate over every action and parabolic row.
    pub fn gate(&self, points: usize) -> Vec<RowReport> {
        let mut out: Vec<RowReport> = self.actions().map(|a| self.gate_action(a, points)).collect();
        out.extend(self.parabolics().map(|p| self.gate_parabolic(p, points)));
        out
    }

    fn field_value(&self, id: &str, field: &str) -> Option<Option<String>> {
        if let Some(a) = self.action(id) {
            return Some(match field.split_once('@') {
                Some(("alpha", q)) => q.parse().ok().and_then(|q: u64| a.alpha_at.get(&q).cloned()),
                _ => match field {
                    "gamma" => a.gamma.clone(),
                    "alpha" => a.alpha.clone(),
                    _ => None,
                },
            });
        }
        if let Some(p) = self.parabolic(id) {
            return Some(match field {
                "gamma" => p.gamma.clone(),
                "alpha" => p.alpha.clone(),
                _ => None,
            });
        }
        if let Some(o) = self.oracle_cases().find(|o| o.id == id) {
            return Some(match field {
                "alpha" => o.alpha.clone(),
                "n" => Some(o.n.to_string()),
                "ifix" => Some(o.ifix.to_string()),
                _ => None,
            });
        }
        if let Some(d) = self.dims.iter().find(|d| d.id == id) {
            return Some((field == "gamma").then(|| d.gamma.clone()));
        }
        self.chis.iter().find(|c| c.id == id).map(|_| None)
    }

    /// Every row of every listed table is covered exactly once, by existing
    /// fixtures whose stored values agree with the table.
    pub fn coverage_report(&self) -> CoverageReport {
        let mut problems = Vec::new();
        let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
        for r in &self.coverage.rows {
            *seen.entry(r.row.as_str()).or_default() += 1;
            let Some((table, idx)) = r.row.rsplit_once(':') else {
                problems.push(format!("{}: malformed row id", r.row));
                continue;
            };
            match (self.coverage.tables.get(table), idx.parse::<usize>()) {
                (Some(&count), Ok(i)) if (1..=count).contains(&i) => {}
                _ => problems.push(format!("{}: not a row of a listed table", r.row)),
            }
            match (&r.out_of_scope, r.fixtures.is_empty()) {
                (Some(_), false) => problems.push(format!("{}: both covered and out of scope", r.row)),
                (None, true) => problems.push(format!("{}: no fixtures", r.row)),
                _ => {}
            }
            for f in &r.fixtures {
                if self.field_value(f, "").is_none() {
                    problems.push(format!("{}: unknown fixture {f}", r.row));
                }
            }
            for c in &r.checks {
                let want = parse_rational(&c.value).ok();
                let mut matched = false;
                for f in r.fixtures.iter().filter(|f| c.fixture.as_ref().is_none_or(|x| x == *f)) {
                    if let Some(Some(v)) = self.field_value(f, &c.field) {
                        matched = true;
                        if parse_rational(&v).ok() != want || want.is_none() {
                            problems.push(format!("{}: {f}.{} = {v}, table gives {}", r.row, c.field, c.value));
                        }
                    }
                }
                if !matched {
                    problems.push(format!("{}: no fixture carries {}", r.row, c.field));
                }
            }
        }
        let mut tables = Vec::new();
        for (t, &count) in &self.coverage.tables {
            let mut covered = 0;
            let mut oos = 0;
            for i in 1..=count {
                let id = format!("{t}:{i}");
                match seen.get(id.as_str()) {
                    None => problems.push(format!("{id}: missing from the manifest")),
                    Some(&k) if k > 1 => problems.push(format!("{id}: listed {k} times")),
                    _ => {}
                }
                match self.coverage.rows.iter().find(|r| r.row == id) {
                    Some(r) if r.out_of_scope.is_some() => oos += 1,
                    Some(_) => covered += 1,
                    None => {}
                }
            }
            tables.push((t.clone(), count, covered, oos));
        }
        CoverageReport { tables, problems }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_rules() {
        // 13 is a square mod 17 (8^2 = 64 = 13), not mod 5
        assert_eq!(FieldRule::Sqrt13.degree(17), 1);
        assert_eq!(FieldRule::Sqrt13.degree(5), 2);
        assert_eq!(FieldRule::Omega.degree(5), 3);
        assert_eq!(FieldRule::Omega.degree(17), 1);
        assert_eq!(FieldRule::Mod5.degree(11), 1);
        assert_eq!(FieldRule::Mod5.degree(3), 2);
    }

    #[test]
    fn conditions() {
        let c = Conditions { parity: Some(Parity::Odd), min_q: Some(7), ..Default::default() };
        assert!(c.allows(7, 1) && c.allows(9, 1) && !c.allows(8, 1) && !c.allows(5, 1));
        let c = Conditions { prime_field: true, q_eps_mod_3: true, ..Default::default() };
        assert!(c.allows(7, 1) && !c.allows(7, -1) && c.allows(5, -1) && !c.allows(25, 1));
        assert_eq!(Conditions { p: vec![3], ..Default::default() }.parities(), vec![Parity::Odd]);
    }
}
