//! Fixed point counts and bounds: the coset formula, the semisimple parabolic
//! character sum, maximal rank bounds, almost simple bounds and exponents.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lieorders::{Exceptional, InvolutionClassRecord, LieError};
use crate::qpoly::{FactoredOrder, QPoly, QPolyError};
use crate::rootdata::{build_root_system, weyl_group, Family, RootError, RootRef, Twist, WeylElement, WeylGroup};

#[derive(Debug, Error)]
pub enum FixityError {
    #[error("{num} is not divisible by {den}")]
    NonIntegral { num: BigInt, den: BigInt },
    #[error("character value {0} is not a nonnegative integer")]
    BadCharacterValue(BigRational),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("class {0} has no (J, w) datum")]
    NoPseudoLevi(String),
    #[error("held-out check failed at q = {q}: interpolant gives {got}, direct value {want}")]
    HeldOut { q: BigInt, got: BigInt, want: BigInt },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Poly(#[from] QPolyError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// `fix(t) = |t^T cap H| * n / |t^T|`.
pub fn fix_points(class_in_h: &BigInt, class_in_t: &BigInt, n: &BigInt) -> Result<BigInt, FixityError> {
    if !class_in_t.is_positive() || !n.is_positive() {
        return Err(FixityError::Invalid("class and degree must be positive".into()));
    }
    exact_div(&(class_in_h * n), class_in_t)
}

/// Fixed points of an involution when `T` has a single class of involutions.
pub fn ifix_single_class(i2_h: &BigInt, i2_t: &BigInt, n: &BigInt) -> Result<BigInt, FixityError> {
    fix_points(i2_h, i2_t, n)
}

fn exact_div(num: &BigInt, den: &BigInt) -> Result<BigInt, FixityError> {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(FixityError::NonIntegral { num: num.clone(), den: den.clone() })
    }
}

/// A maximal parabolic (or other standard parabolic) action of an exceptional group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParabolicActionSpec {
    pub family: Exceptional,
    /// Bourbaki indices of the removed nodes.
    pub removed: Vec<usize>,
}

impl ParabolicActionSpec {
    pub fn new(family: Exceptional, removed: &[usize]) -> Self {
        ParabolicActionSpec { family, removed: removed.to_vec() }
    }

    /// Parses labels such as `P1`, `P2`, `P_{1,6}`, `P1,6`.
    pub fn parse(family: Exceptional, label: &str) -> Result<Self, FixityError> {
        let body = label
            .trim()
            .strip_prefix('P')
            .ok_or_else(|| FixityError::Invalid(format!("parabolic label {label}")))?;
        let body = body.trim_start_matches('_').trim_start_matches('{').trim_end_matches('}');
        let removed = body
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| FixityError::Invalid(format!("parabolic label {label}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(family, &removed))
    }

    pub fn label(&self) -> String {
        let idx: Vec<String> = self.removed.iter().map(|i| i.to_string()).collect();
        if idx.len() == 1 {
            format!("P{}", idx[0])
        } else {
            format!("P_{{{}}}", idx.join(","))
        }
    }

    fn kept(&self, rank: usize) -> Vec<usize> {
        (1..=rank).filter(|i| !self.removed.contains(i)).collect()
    }
}

static WEYL_G2: OnceLock<WeylGroup> = OnceLock::new();
static WEYL_F4: OnceLock<WeylGroup> = OnceLock::new();
static WEYL_E6: OnceLock<WeylGroup> = OnceLock::new();
static WEYL_E7: OnceLock<WeylGroup> = OnceLock::new();

/// Weyl group of the family, built once per process.
pub fn cached_weyl_group(family: Family) -> Result<&'static WeylGroup, FixityError> {
    let cell = match family {
        Family::G2 => &WEYL_G2,
        Family::F4 => &WEYL_F4,
        Family::E6 => &WEYL_E6,
        Family::E7 => &WEYL_E7,
        other => return Err(FixityError::Unsupported(format!("character sum for {other}"))),
    };
    if let Some(w) = cell.get() {
        return Ok(w);
    }
    let w = weyl_group(build_root_system(family))?;
    Ok(cell.get_or_init(|| w))
}

fn engine_family(f: Exceptional) -> Result<Family, FixityError> {
    match f {
        Exceptional::G2 | Exceptional::F4 | Exceptional::E6 | Exceptional::E6Twisted | Exceptional::E7 => {
            Ok(f.root_family())
        }
        other => Err(FixityError::Unsupported(format!("character sum for {other}"))),
    }
}

fn twist_for(f: Exceptional, wg: &WeylGroup) -> Twist {
    if f == Exceptional::E6Twisted {
        Twist::longest_word_twist(&wg.rs)
    } else {
        Twist::untwisted(&wg.rs)
    }
}

/// One term of the class sum, `coef * (-1)^{r_i + shift} / |T_i|`.
#[derive(Clone, Debug)]
pub struct SumTerm {
    pub class: usize,
    /// `(|W|/|C_i|) (|W_P cap C_i w*|/|W_P|) (|W_J cap C_i|/|W_J|)`
    pub coef: BigRational,
    pub sign: i64,
    pub torus_poly: QPoly,
}

/// The class data of the semisimple character sum for a fixed action and `(J, w)`.
#[derive(Clone, Debug)]
pub struct CharacterSum {
    pub terms: Vec<SumTerm>,
    /// `|(C(t)°)_sigma|_{p'}`
    pub centralizer: QPoly,
    pub wp_counts: Vec<u64>,
    pub wj_counts: Vec<u64>,
    pub wp_order: u64,
    pub wj_order: u64,
}

impl CharacterSum {
    /// Builds the sum; `j` must have `w = 1`.
    pub fn new(
        spec: &ParabolicActionSpec,
        j: &[RootRef],
        sign_shift: bool,
        centralizer: &FactoredOrder,
    ) -> Result<Self, FixityError> {
        let family = engine_family(spec.family)?;
        let wg = cached_weyl_group(family)?;
        let rs = &wg.rs;
        if spec.removed.iter().any(|&i| i == 0 || i > rs.rank) {
            return Err(FixityError::Invalid(format!("removed nodes {:?}", spec.removed)));
        }
        let twist = twist_for(spec.family, wg);
        let wp = rs.parabolic_weyl(&spec.kept(rs.rank));
        let full = (1..=rs.rank).all(|i| j.contains(&RootRef::Simple(i)));
        let wj = if full { wg.elements().to_vec() } else { rs.reflection_subgroup(j) };
        let data = wg.sigma_class_data(&wp, &twist);
        let wj_counts = wg.class_counts(&wj);
        let wp_counts: Vec<u64> = data.iter().map(|d| d.coset_count).collect();
        let w = BigInt::from(wg.order());
        let mut terms = Vec::new();
        for d in &data {
            let (cp, cj) = (wp_counts[d.class], wj_counts[d.class]);
            if cp == 0 || cj == 0 {
                continue;
            }
            let coef = BigRational::new(&w * BigInt::from(cp) * BigInt::from(cj), BigInt::from(d.size) * BigInt::from(wp.len() as u64) * BigInt::from(wj.len() as u64));
            let sign = if (d.rel_rank + u32::from(sign_shift)) % 2 == 0 { 1 } else { -1 };
            terms.push(SumTerm { class: d.class, coef, sign, torus_poly: d.torus_poly.clone() });
        }
        Ok(CharacterSum {
            terms,
            centralizer: centralizer.pprime_part()?,
            wp_counts,
            wj_counts,
            wp_order: wp.len() as u64,
            wj_order: wj.len() as u64,
        })
    }

    /// The sum for the class record `inv`.
    pub fn for_class(spec: &ParabolicActionSpec, inv: &InvolutionClassRecord) -> Result<Self, FixityError> {
        if inv.family() != spec.family {
            return Err(FixityError::Invalid(format!("class of {} for an action of {}", inv.family(), spec.family)));
        }
        let pl = inv.raw.pseudo_levi.as_ref().ok_or_else(|| FixityError::NoPseudoLevi(inv.label().into()))?;
        if pl.w != "1" {
            return Err(FixityError::Unsupported(format!("w = {}", pl.w)));
        }
        let j = pl.roots().map_err(FixityError::Invalid)?;
        Self::new(spec, &j, pl.sign_shift, &inv.connected_centralizer())
    }

    /// The sum for the identity: `J` is the full simple system and the centralizer is the whole group.
    pub fn identity(spec: &ParabolicActionSpec) -> Result<Self, FixityError> {
        let rank = spec.family.root_family().rank();
        let j: Vec<RootRef> = (1..=rank).map(RootRef::Simple).collect();
        // the sign is (-1)^{rank - r_i}; only odd rank needs the shift
        Self::new(spec, &j, rank % 2 == 1, &spec.family.order())
    }

    /// Exact value of the sum at `q`.
    pub fn value_rational(&self, q: &BigInt) -> BigRational {
        let c = BigRational::from_integer(self.centralizer.eval(q));
        let mut total = BigRational::zero();
        for t in &self.terms {
            let tq = BigRational::from_integer(t.torus_poly.eval(q));
            let v = &t.coef * &c / tq;
            if t.sign > 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        total
    }

    /// `chi(t)` at `q`; must be a nonnegative integer.
    pub fn value(&self, q: &BigInt) -> Result<BigInt, FixityError> {
        let v = self.value_rational(q);
        if !v.is_integer() || v.is_negative() {
            return Err(FixityError::BadCharacterValue(v));
        }
        Ok(v.to_integer())
    }

    /// Interpolates the value as a polynomial over `q = start, start + step, ...`, then
    /// checks two further points.
    pub fn symbolic(&self, start: i64, step: i64) -> Result<QPoly, FixityError> {
        let deg = self.centralizer.degree().unwrap_or(0);
        let qs: Vec<BigInt> = (0..deg as i64 + 3).map(|k| BigInt::from(start + k * step)).collect();
        symbolic_fix(|q| self.value(q), &qs)
    }
}

/// Interpolates `f` over all but the last two samples and checks the last two.
pub fn symbolic_fix<F>(f: F, q_samples: &[BigInt]) -> Result<QPoly, FixityError>
where
    F: Fn(&BigInt) -> Result<BigInt, FixityError>,
{
    if q_samples.len() < 3 {
        return Err(FixityError::Invalid("need at least three samples".into()));
    }
    let (fit, held) = q_samples.split_at(q_samples.len() - 2);
    let mut pts = Vec::with_capacity(fit.len());
    for q in fit {
        pts.push((q.clone(), BigRational::from_integer(f(q)?)));
    }
    let poly = QPoly::interpolate(&pts)?;
    for q in held {
        let want = f(q)?;
        let got = poly.eval(q);
        if got != want {
            return Err(FixityError::HeldOut { q: q.clone(), got, want });
        }
    }
    Ok(poly)
}

/// Value of the character sum for the class `inv` at `q`.
pub fn parabolic_semisimple_fix(
    spec: &ParabolicActionSpec,
    inv: &InvolutionClassRecord,
    q: u64,
) -> Result<BigInt, FixityError> {
    if q % 2 == 0 {
        return Err(FixityError::Invalid(format!("semisimple involutions need odd q, got {q}")));
    }
    if !inv.applies(q) {
        return Err(FixityError::Invalid(format!("class {} does not occur at q = {q}", inv.label())));
    }
    CharacterSum::for_class(spec, inv)?.value(&BigInt::from(q))
}

/// `|G_sigma : P_sigma|` as a polynomial, from Poincare polynomials of the
/// `sigma`-fixed parts of `W` and `W_P`.
pub fn parabolic_index_poly(spec: &ParabolicActionSpec) -> Result<QPoly, FixityError> {
    let family = engine_family(spec.family)?;
    let wg = cached_weyl_group(family)?;
    let rs = &wg.rs;
    let twist = twist_for(spec.family, wg);
    let untwisted = spec.family != Exceptional::E6Twisted;
    let fixed = |x: &WeylElement| {
        untwisted || {
            let m = rs.matrix(*x);
            crate::rootdata::mat_mul(&m, &twist.graph) == crate::rootdata::mat_mul(&twist.graph, &m)
        }
    };
    let tally = |lengths: &mut dyn Iterator<Item = usize>| -> QPoly {
        let mut counts: Vec<i64> = Vec::new();
        for l in lengths {
            if counts.len() <= l {
                counts.resize(l + 1, 0);
            }
            counts[l] += 1;
        }
        QPoly::from_i64s(&counts)
    };
    let poincare = |els: &[WeylElement]| tally(&mut els.iter().filter(|x| fixed(x)).map(|x| wg.length_at(wg.index(*x))));
    let whole = if untwisted {
        tally(&mut (0..wg.elements().len()).map(|k| wg.length_at(k)))
    } else {
        poincare(wg.elements())
    };
    let wp = rs.parabolic_weyl(&spec.kept(rs.rank));
    Ok(whole.div_exact(&poincare(&wp))?)
}

/// Lower bound from an involution `t in H_0`: `ifix >= |T| / (f(q) |t^T|)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalRankBound {
    pub ifix_lb: BigInt,
    pub liminf_lb: BigRational,
}

/// `ifix_lb = floor(|T| / (f |t^T|))` and the degree ratio
/// `(deg |T| - deg f - deg |t^T|) / deg n`. `f` may be a ratio such as `|H_0| / count`.
pub fn maximal_rank_lower_bound(
    order_t: &BigInt,
    f: &BigRational,
    class_t: &BigInt,
    degs: (usize, usize, usize, usize),
) -> Result<MaximalRankBound, FixityError> {
    if !f.is_positive() || !class_t.is_positive() {
        return Err(FixityError::Invalid("inputs must be positive".into()));
    }
    let (dt, df, dc, dn) = degs;
    if dn == 0 {
        return Err(FixityError::Invalid("degree of n is zero".into()));
    }
    let bound = BigRational::from_integer(order_t.clone()) / (f * BigRational::from_integer(class_t.clone()));
    Ok(MaximalRankBound {
        ifix_lb: bound.floor().to_integer(),
        liminf_lb: BigRational::new(BigInt::from(dt as i64 - df as i64 - dc as i64), BigInt::from(dn as i64)),
    })
}

/// Inputs to the almost simple bound: `a`, `b` the largest involution classes in
/// `S` and `T`, `c = |Aut(S)|`, `d = |T|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundInput {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl BoundInput {
    pub fn validate(&self) -> Result<(), FixityError> {
        if self.a > self.c || self.b > self.d {
            return Err(FixityError::Invalid("need a <= c and b <= d".into()));
        }
        Ok(())
    }
}

/// Lower bound `1 - (log b - log a)/(log d - log c)` on `log ifix / log n`.
pub fn almost_simple_exponent(b: &BoundInput) -> Result<f64, FixityError> {
    b.validate()?;
    if b.c >= b.d {
        return Err(FixityError::Invalid("need c < d".into()));
    }
    let (la, lb, lc, ld) = (ln(&b.a), ln(&b.b), ln(&b.c), ln(&b.d));
    Ok(1.0 - (lb - la) / (ld - lc))
}

/// `d^5 a^9 > c^5 b^9`, computed exactly.
pub fn abcd_check(b: &BoundInput) -> bool {
    if b.a.is_zero() {
        return false;
    }
    b.d.pow(5) * b.a.pow(9) > b.c.pow(5) * b.b.pow(9)
}

/// Whether `fix(t) >= n a / b` with `n >= d / c` forces `ifix > n^alpha`, decided
/// exactly as `a^den d^(den - num) > b^den c^(den - num)` for `alpha = num/den < 1`.
pub fn almost_simple_exceeds(b: &BoundInput, alpha: &BigRational) -> Result<bool, FixityError> {
    b.validate()?;
    let (Some(num), Some(den)) = (alpha.numer().to_u32(), alpha.denom().to_u32()) else {
        return Err(FixityError::Invalid(format!("exponent {alpha}")));
    };
    if alpha.is_negative() || num >= den {
        return Err(FixityError::Invalid(format!("exponent {alpha} outside [0, 1)")));
    }
    Ok(b.a.pow(den) * b.d.pow(den - num) > b.b.pow(den) * b.c.pow(den - num))
}

/// Natural logarithm of a positive big integer.
pub fn ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `deg fix / deg n`.
pub fn liminf_exponent(fix: &QPoly, n: &QPoly) -> Result<BigRational, FixityError> {
    let (Some(a), Some(b)) = (fix.degree(), n.degree()) else {
        return Err(FixityError::Invalid("zero polynomial".into()));
    };
    if b == 0 {
        return Err(FixityError::Invalid("constant degree polynomial".into()));
    }
    if !fix.leading().is_positive() || !n.leading().is_positive() {
        return Err(FixityError::Invalid("leading coefficients must be positive".into()));
    }
    Ok(BigRational::new(BigInt::from(a), BigInt::from(b)))
}

/// `x > n^(num/den)` decided as `x^den > n^num`.
pub fn exceeds_power(x: &BigInt, n: &BigInt, exponent: &BigRational) -> bool {
    let num = exponent.numer().to_u32().expect("small exponent");
    let den = exponent.denom().to_u32().expect("small exponent");
    x.pow(den) > n.pow(num)
}

/// `log x / log n`, for reporting.
pub fn log_ratio(x: &BigInt, n: &BigInt) -> f64 {
    ln(x) / ln(n)
}

/// A rational from a decimal string such as `0.426`.
pub fn decimal_rational(s: &str) -> Result<BigRational, FixityError> {
    let bad = || FixityError::Invalid(format!("decimal {s}"));
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    Ok(BigRational::new(num, BigInt::from(10u32).pow(frac.len() as u32)))
}

/// A rational from `a/b` or an integer.
pub fn parse_rational(s: &str) -> Result<BigRational, FixityError> {
    let bad = || FixityError::Invalid(format!("rational {s}"));
    match s.split_once('/') {
        Some((a, b)) => Ok(BigRational::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)),
        None if s.contains('.') => decimal_rational(s),
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

