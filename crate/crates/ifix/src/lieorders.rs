//! Orders of finite groups of Lie type, the involution class table, class sizes,
//! long-root class sizes and closed-form involution counts.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qpoly::{FactoredOrder, QPoly, QPolyError};
use crate::rootdata::{Family, RootRef};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("unsupported group family {0}")]
    Unsupported(String),
    #[error("cannot parse order expression `{expr}`: {msg}")]
    Parse { expr: String, msg: String },
    #[error(transparent)]
    Poly(#[from] QPolyError),
    #[error("class {label} of {family}: {msg}")]
    BadRecord { family: String, label: String, msg: String },
    #[error("no closed form for {0}")]
    NoClosedForm(String),
    #[error("{0} is out of range")]
    OutOfRange(String),
}

/// Exceptional and twisted families covered by the involution table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Exceptional {
    #[serde(rename = "E8")]
    E8,
    #[serde(rename = "E7")]
    E7,
    #[serde(rename = "E6")]
    E6,
    #[serde(rename = "2E6")]
    E6Twisted,
    #[serde(rename = "F4")]
    F4,
    #[serde(rename = "G2")]
    G2,
    #[serde(rename = "3D4")]
    D4Triality,
    #[serde(rename = "2F4")]
    F4Twisted,
    #[serde(rename = "2G2")]
    G2Twisted,
    #[serde(rename = "2B2")]
    B2Twisted,
}

pub const ALL_EXCEPTIONAL: [Exceptional; 10] = [
    Exceptional::E8,
    Exceptional::E7,
    Exceptional::E6,
    Exceptional::E6Twisted,
    Exceptional::F4,
    Exceptional::G2,
    Exceptional::D4Triality,
    Exceptional::F4Twisted,
    Exceptional::G2Twisted,
    Exceptional::B2Twisted,
];

impl Exceptional {
    pub fn name(&self) -> &'static str {
        match self {
            Exceptional::E8 => "E8",
            Exceptional::E7 => "E7",
            Exceptional::E6 => "E6",
            Exceptional::E6Twisted => "2E6",
            Exceptional::F4 => "F4",
            Exceptional::G2 => "G2",
            Exceptional::D4Triality => "3D4",
            Exceptional::F4Twisted => "2F4",
            Exceptional::G2Twisted => "2G2",
            Exceptional::B2Twisted => "2B2",
        }
    }

    /// The sign used for `E6^eps`; `+1` for every other family.
    pub fn eps(&self) -> i64 {
        if *self == Exceptional::E6Twisted {
            -1
        } else {
            1
        }
    }

    /// Root system of the ambient algebraic group.
    pub fn root_family(&self) -> Family {
        match self {
            Exceptional::E8 => Family::E8,
            Exceptional::E7 => Family::E7,
            Exceptional::E6 | Exceptional::E6Twisted => Family::E6,
            Exceptional::F4 | Exceptional::F4Twisted => Family::F4,
            Exceptional::G2 | Exceptional::G2Twisted => Family::G2,
            Exceptional::D4Triality => Family::D(4),
            Exceptional::B2Twisted => Family::B(2),
        }
    }

    /// `|Inndiag(T)|`, the generic order polynomial.
    pub fn order(&self) -> FactoredOrder {
        let e = self.eps();
        match self {
            Exceptional::E8 => untwisted_order(&[2, 8, 12, 14, 18, 20, 24, 30], 120),
            Exceptional::E7 => untwisted_order(&[2, 6, 8, 10, 12, 14, 18], 63),
            Exceptional::E6 | Exceptional::E6Twisted => {
                let mut fs = Vec::new();
                for d in [2usize, 5, 6, 8, 9, 12] {
                    fs.push((QPoly::qk_minus(d, e.pow(d as u32)), 1));
                }
                fo(36, fs)
            }
            Exceptional::F4 => untwisted_order(&[2, 6, 8, 12], 24),
            Exceptional::G2 => untwisted_order(&[2, 6], 6),
            Exceptional::D4Triality => fo(
                12,
                vec![
                    (QPoly::from_i64s(&[1, 0, 0, 0, 1, 0, 0, 0, 1]), 1),
                    (QPoly::qk_minus(6, 1), 1),
                    (QPoly::qk_minus(2, 1), 1),
                ],
            ),
            Exceptional::F4Twisted => fo(
                12,
                vec![
                    (QPoly::qk_minus(6, -1), 1),
                    (QPoly::qk_minus(4, 1), 1),
                    (QPoly::qk_minus(3, -1), 1),
                    (QPoly::qk_minus(1, 1), 1),
                ],
            ),
            Exceptional::G2Twisted => fo(3, vec![(QPoly::qk_minus(3, -1), 1), (QPoly::qk_minus(1, 1), 1)]),
            Exceptional::B2Twisted => fo(2, vec![(QPoly::qk_minus(2, -1), 1), (QPoly::qk_minus(1, 1), 1)]),
        }
    }

    /// `|Inndiag(T) : T|` at `q`.
    pub fn inndiag_index(&self, q: u64) -> u64 {
        match self {
            Exceptional::E7 => 2u64.gcd(&(q - 1)),
            Exceptional::E6 => 3u64.gcd(&(q - 1)),
            Exceptional::E6Twisted => 3u64.gcd(&(q + 1)),
            _ => 1,
        }
    }

    /// `|T|` at `q`.
    pub fn simple_order(&self, q: u64) -> BigInt {
        let full = self.order().eval(&BigInt::from(q)).expect("integral order");
        full / BigInt::from(self.inndiag_index(q))
    }

    /// Whether `q` is a legal field size for the family.
    pub fn admissible(&self, q: u64) -> bool {
        let Some((p, f)) = prime_power(q) else { return false };
        match self {
            Exceptional::B2Twisted | Exceptional::F4Twisted => p == 2 && f % 2 == 1,
            Exceptional::G2Twisted => p == 3 && f % 2 == 1,
            _ => true,
        }
    }
}

impl fmt::Display for Exceptional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Exceptional {
    type Err = LieError;
    fn from_str(s: &str) -> Result<Self, LieError> {
        ALL_EXCEPTIONAL
            .iter()
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| LieError::Unsupported(s.to_string()))
    }
}

/// `(p, f)` with `q = p^f`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut m = q;
    let mut f = 0;
    while m % p == 0 {
        m /= p;
        f += 1;
    }
    (m == 1).then_some((p, f))
}

fn fo(qpower: u32, factors: Vec<(QPoly, u32)>) -> FactoredOrder {
    FactoredOrder::new(BigRational::one(), qpower, factors).expect("order factors have nonzero constant term")
}

fn untwisted_order(degrees: &[usize], n: u32) -> FactoredOrder {
    fo(n, degrees.iter().map(|&d| (QPoly::qk_minus(d, 1), 1)).collect())
}

/// Replace `q` by `q^k` throughout.
fn in_qk(o: FactoredOrder, k: usize) -> FactoredOrder {
    FactoredOrder {
        scalar: o.scalar,
        qpower: o.qpower * k as u32,
        factors: o.factors.into_iter().map(|(f, m)| (f.subs_power(k), m)).collect(),
    }
}

/// `|SL_n^eps(q)|`.
pub fn sl_order(n: usize, eps: i64) -> FactoredOrder {
    fo((n * (n - 1) / 2) as u32, (2..=n).map(|i| (QPoly::qk_minus(i, eps.pow(i as u32)), 1)).collect())
}

/// `|GL_n^eps(q)|`.
pub fn gl_order(n: usize, eps: i64) -> FactoredOrder {
    sl_order(n, eps).mul(&FactoredOrder::factor(QPoly::qk_minus(1, eps)))
}

/// `|Sp_{2m}(q)|`, also `|SO_{2m+1}(q)|`.
pub fn sp_order(n: usize) -> FactoredOrder {
    let m = n / 2;
    fo((m * m) as u32, (1..=m).map(|i| (QPoly::qk_minus(2 * i, 1), 1)).collect())
}

/// `|SO_{2m}^eps(q)|` in the generic form `q^{m(m-1)}(q^m - eps) prod (q^{2i} - 1)`.
pub fn so_even_order(n: usize, eps: i64) -> FactoredOrder {
    let m = n / 2;
    let mut fs = vec![(QPoly::qk_minus(m, eps), 1)];
    fs.extend((1..m).map(|i| (QPoly::qk_minus(2 * i, 1), 1)));
    fo((m * (m - 1)) as u32, fs)
}

/// Parser for products of order atoms, e.g. `2*q^3*SL(2)^2*GL(4,e)*(q^2+eq+1)`.
///
/// Atoms: `SL(n[,s][,q^k])`, `GL`, `SU`, `GU`, `Sp(n[,q^k])`, `SO(n[,s][,q^k])`,
/// `Omega(n,s[,q^k])`, and the exceptional names `E6(s)`, `E7`, `E8`, `F4`, `G2`,
/// `3D4`, `2B2`, `2G2`, `2F4`, each optionally with a `q^k` argument. A sign `s`
/// is one of `+`, `-`, `e`, `-e`, where `e` is the ambient sign. `Omega` uses the
/// same polynomial as `SO`; it only appears in even characteristic rows, where the
/// generic formula is the order of the orthogonal group generated by transvection pairs.
pub fn parse_order_expr(expr: &str, eps: i64) -> Result<FactoredOrder, LieError> {
    let err = |msg: &str| LieError::Parse { expr: expr.to_string(), msg: msg.to_string() };
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let mut acc = FactoredOrder::one();
    for term in split_top(&s, '*') {
        let (base, power) = match term.rfind('^') {
            Some(pos) if term.ends_with(|c: char| c.is_ascii_digit()) && !term[..pos].ends_with('q') => {
                let p: u32 = term[pos + 1..].parse().map_err(|_| err("bad exponent"))?;
                (&term[..pos], p)
            }
            _ => (term, 1),
        };
        if base.is_empty() {
            return Err(err("empty factor"));
        }
        let atom = parse_atom(base, eps).map_err(|m| err(&m))?;
        acc = acc.mul(&atom.pow(power));
    }
    Ok(acc)
}

fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_sign(s: &str, eps: i64) -> Option<i64> {
    match s {
        "+" => Some(1),
        "-" => Some(-1),
        "e" => Some(eps),
        "-e" => Some(-eps),
        _ => None,
    }
}

fn parse_qk(s: &str) -> Option<usize> {
    match s {
        "q" => Some(1),
        _ => s.strip_prefix("q^").and_then(|k| k.parse().ok()),
    }
}

fn parse_atom(base: &str, eps: i64) -> Result<FactoredOrder, String> {
    if let Ok(n) = base.parse::<i64>() {
        if n <= 0 {
            return Err("nonpositive constant".into());
        }
        return Ok(FactoredOrder::scalar_int(n));
    }
    if let Some(k) = parse_qk(base) {
        return Ok(FactoredOrder::qpow(k as u32));
    }
    if base.starts_with('(') && base.ends_with(')') {
        let p = parse_eps_poly(&base[1..base.len() - 1], eps)?;
        if p.coeff(0).is_zero() {
            return Err(format!("factor {p} is divisible by q"));
        }
        return Ok(FactoredOrder::factor(p));
    }
    let (name, args) = match base.find('(') {
        Some(pos) if base.ends_with(')') => {
            (&base[..pos], base[pos + 1..base.len() - 1].split(',').collect::<Vec<_>>())
        }
        None => (base, Vec::new()),
        _ => return Err(format!("bad atom {base}")),
    };
    // trailing q^k argument
    let mut args = args;
    let k = match args.last().and_then(|a| parse_qk(a)) {
        Some(k) => {
            args.pop();
            k
        }
        None => 1,
    };
    let dim = |args: &[&str]| -> Result<usize, String> {
        args.first().and_then(|a| a.parse().ok()).ok_or_else(|| format!("{name} needs a dimension"))
    };
    let sign_at = |args: &[&str], i: usize, default: i64| -> Result<i64, String> {
        match args.get(i) {
            None => Ok(default),
            Some(s) => parse_sign(s, eps).ok_or_else(|| format!("bad sign {s}")),
        }
    };
    let o = match name {
        "SL" => sl_order(dim(&args)?, sign_at(&args, 1, 1)?),
        "GL" => gl_order(dim(&args)?, sign_at(&args, 1, 1)?),
        "SU" => sl_order(dim(&args)?, -1),
        "GU" => gl_order(dim(&args)?, -1),
        "Sp" => {
            let n = dim(&args)?;
            if n % 2 == 1 {
                return Err("Sp needs even dimension".into());
            }
            sp_order(n)
        }
        "SO" | "Omega" => {
            let n = dim(&args)?;
            if n % 2 == 1 {
                sp_order(n - 1)
            } else {
                let s = args.get(1).ok_or("even orthogonal group needs a sign")?;
                so_even_order(n, parse_sign(s, eps).ok_or("bad sign")?)
            }
        }
        "E6" => {
            let s = sign_at(&args, 0, 1)?;
            if s == 1 {
                Exceptional::E6.order()
            } else {
                Exceptional::E6Twisted.order()
            }
        }
        "2E6" => Exceptional::E6Twisted.order(),
        other => Exceptional::from_str(other).map_err(|e| e.to_string())?.order(),
    };
    Ok(in_qk(o, k))
}

/// Polynomials like `q^2+eq+1` or `q^3-e`, with `e` the ambient sign.
pub fn parse_eps_poly(s: &str, eps: i64) -> Result<QPoly, String> {
    let substituted = s.replace("-e", if eps == 1 { "-1*" } else { "+1*" }).replace(
        "+e",
        if eps == 1 { "+1*" } else { "-1*" },
    );
    let substituted = match substituted.strip_prefix('e') {
        Some(rest) => format!("{}{}", if eps == 1 { "1*" } else { "-1*" }, rest),
        None => substituted,
    };
    // now only integer coefficients remain, possibly as `1*q` or a bare `1*`
    let cleaned = substituted.replace("*q", "q");
    let cleaned = fix_bare_coeffs(&cleaned);
    QPoly::parse(&cleaned)
}

fn fix_bare_coeffs(s: &str) -> String {
    // a coefficient marker `1*` followed by a sign or the end is a constant term
    let mut out = String::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '*' {
            i += 1;
            continue;
        }
        out.push(chars[i]);
        i += 1;
    }
    out
}

/// Parity of the defining characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(q: u64) -> Parity {
        if q % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// `(J, w)` datum of a semisimple class: reflections in `J` generate `W_J`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PseudoLevi {
    #[serde(rename = "J")]
    pub j: Vec<String>,
    pub w: String,
    /// Use `(-1)^{r_i + 1}` instead of `(-1)^{r_i}` in the character sum.
    #[serde(default)]
    pub sign_shift: bool,
    /// Whether the datum is stated explicitly in the source rather than derived.
    pub validated: bool,
    #[serde(default)]
    pub note: String,
}

impl PseudoLevi {
    pub fn roots(&self) -> Result<Vec<RootRef>, String> {
        self.j.iter().map(|s| s.parse()).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawClassRecord {
    pub family: Exceptional,
    pub parity: Parity,
    pub label: String,
    pub centralizer: String,
    #[serde(default)]
    pub q_mod_4: Option<u64>,
    #[serde(default)]
    pub min_q: Option<u64>,
    #[serde(default)]
    pub twice_monic: bool,
    #[serde(default)]
    pub pseudo_levi: Option<PseudoLevi>,
}

/// One row of the involution class table.
#[derive(Clone, Debug)]
pub struct InvolutionClassRecord {
    pub raw: RawClassRecord,
    /// `|C_{Inndiag(T)}(t)|`
    pub centralizer: FactoredOrder,
}

/// `|t^{Inndiag(T)}|` as `poly / divisor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSize {
    pub poly: QPoly,
    pub divisor: u64,
}

impl ClassSize {
    pub fn eval(&self, q: u64) -> Result<BigInt, LieError> {
        let v = self.poly.eval(&BigInt::from(q));
        let (quo, rem) = v.div_rem(&BigInt::from(self.divisor));
        if !rem.is_zero() {
            return Err(LieError::OutOfRange(format!("class size {v}/{} at q={q}", self.divisor)));
        }
        Ok(quo)
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }
}

impl InvolutionClassRecord {
    pub fn from_raw(raw: RawClassRecord) -> Result<Self, LieError> {
        let centralizer = parse_order_expr(&raw.centralizer, raw.family.eps())?;
        let rec = InvolutionClassRecord { raw, centralizer };
        rec.validate()?;
        Ok(rec)
    }

    pub fn family(&self) -> Exceptional {
        self.raw.family
    }

    pub fn label(&self) -> &str {
        &self.raw.label
    }

    fn bad(&self, msg: String) -> LieError {
        LieError::BadRecord { family: self.raw.family.to_string(), label: self.raw.label.clone(), msg }
    }

    /// Whether the class exists in `T` at this `q`.
    pub fn applies(&self, q: u64) -> bool {
        Parity::of(q) == self.raw.parity
            && self.raw.family.admissible(q)
            && self.raw.q_mod_4.is_none_or(|m| q % 4 == m)
            && self.raw.min_q.is_none_or(|m| q >= m)
    }

    /// The monic part of the centralizer order, `|(C(t)°)_sigma|` in the flagged cases.
    pub fn connected_centralizer(&self) -> FactoredOrder {
        FactoredOrder { scalar: BigRational::one(), ..self.centralizer.clone() }
    }

    pub fn class_size(&self) -> Result<ClassSize, LieError> {
        let g = self.raw.family.order().expand()?;
        let c = self.connected_centralizer().expand()?;
        let poly = g.div_exact(&c)?;
        let scalar = &self.centralizer.scalar;
        if !scalar.is_integer() {
            return Err(self.bad("non-integral centralizer scalar".into()));
        }
        let divisor = scalar.to_integer().to_u64().ok_or_else(|| self.bad("scalar too large".into()))?;
        Ok(ClassSize { poly, divisor })
    }

    fn validate(&self) -> Result<(), LieError> {
        let expanded = self.centralizer.expand()?;
        let scalar = self.centralizer.scalar.clone();
        let monic = self.connected_centralizer().expand()?;
        if !monic.is_monic() {
            return Err(self.bad(format!("centralizer {expanded} is not scalar times monic")));
        }
        let two = BigRational::from_integer(2.into());
        if self.raw.twice_monic != (scalar == two) || !(scalar.is_one() || scalar == two) {
            return Err(self.bad(format!("scalar {scalar} disagrees with the twice-monic flag")));
        }
        let size = self.class_size()?;
        let mut checked = 0;
        for q in 2..=9 {
            if !self.applies(q) {
                continue;
            }
            let v = size.eval(q)?;
            if v <= BigInt::zero() {
                return Err(self.bad(format!("class size {v} at q={q}")));
            }
            checked += 1;
        }
        if checked == 0 && !matches!(self.raw.family, Exceptional::G2Twisted | Exceptional::F4Twisted) {
            return Err(self.bad("no admissible q in 2..=9".into()));
        }
        Ok(())
    }
}

/// The full involution class table.
#[derive(Clone, Debug)]
pub struct InvolutionTable {
    pub records: Vec<InvolutionClassRecord>,
}

impl InvolutionTable {
    pub fn from_json(text: &str) -> Result<Self, LieError> {
        let raw: Vec<RawClassRecord> =
            serde_json::from_str(text).map_err(|e| LieError::Parse { expr: "table".into(), msg: e.to_string() })?;
        let mut records = Vec::new();
        for r in raw {
            if records.iter().any(|x: &InvolutionClassRecord| {
                x.raw.family == r.family && x.raw.parity == r.parity && x.raw.label == r.label
            }) {
                return Err(LieError::BadRecord {
                    family: r.family.to_string(),
                    label: r.label,
                    msg: "duplicate label".into(),
                });
            }
            records.push(InvolutionClassRecord::from_raw(r)?);
        }
        Ok(InvolutionTable { records })
    }

    pub fn involution_classes(&self, fam: Exceptional, parity: Parity) -> Vec<&InvolutionClassRecord> {
        self.records.iter().filter(|r| r.raw.family == fam && r.raw.parity == parity).collect()
    }

    /// Classes of involutions of `T` present at this `q`.
    pub fn classes_at(&self, fam: Exceptional, q: u64) -> Vec<&InvolutionClassRecord> {
        self.records.iter().filter(|r| r.raw.family == fam && r.applies(q)).collect()
    }

    pub fn find(&self, fam: Exceptional, label: &str) -> Option<&InvolutionClassRecord> {
        self.records.iter().find(|r| r.raw.family == fam && r.raw.label == label)
    }

    /// Number of involutions of `T` at `q`.
    pub fn i2(&self, fam: Exceptional, q: u64) -> Result<BigInt, LieError> {
        let mut total = BigInt::zero();
        for r in self.classes_at(fam, q) {
            total += r.class_size()?.eval(q)?;
        }
        Ok(total)
    }

    /// Largest involution class of `T` at `q`.
    pub fn largest_class(&self, fam: Exceptional, q: u64) -> Result<BigInt, LieError> {
        let mut best = BigInt::zero();
        for r in self.classes_at(fam, q) {
            best = best.max(r.class_size()?.eval(q)?);
        }
        Ok(best)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalKind {
    /// `L_n^eps(q)`
    Linear(i64),
    Symplectic,
    /// `Omega_n^eps(q)`
    Orthogonal(i64),
}

/// Size of the class of long root involutions in a classical group, `p = 2`.
pub fn long_root_class_size(kind: ClassicalKind, n: u32, q: u64) -> Result<BigInt, LieError> {
    if q % 2 == 1 {
        return Err(LieError::OutOfRange(format!("odd q = {q}")));
    }
    let q = BigInt::from(q);
    let pw = |k: u32| q.pow(k);
    match kind {
        ClassicalKind::Linear(e) if n >= 2 => {
            let e = BigInt::from(e);
            let num = (pw(n - 1) - e.pow(n - 1)) * (pw(n) - e.pow(n));
            Ok(num / (&q - e))
        }
        ClassicalKind::Symplectic if n >= 2 && n % 2 == 0 => Ok(pw(n) - 1),
        ClassicalKind::Orthogonal(e) if n >= 8 && n % 2 == 0 => {
            let e = BigInt::from(e);
            let num = (pw(n / 2 - 2) + &e) * (pw(n - 2) - 1) * (pw(n / 2) - &e);
            Ok(num / (pw(2) - 1))
        }
        _ => Err(LieError::OutOfRange(format!("{kind:?} in dimension {n}"))),
    }
}

/// Families with a closed-form involution count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum I2Family {
    Suzuki,
    Ree,
    /// `PGL_3^eps(q)` with the parity of `q`.
    Pgl3 { eps: i64, parity: Parity },
}

pub fn i2_closed_form(fam: I2Family) -> QPoly {
    let q = QPoly::q();
    match fam {
        I2Family::Suzuki => QPoly::qk_minus(2, -1) * QPoly::qk_minus(1, 1),
        I2Family::Ree => QPoly::monomial(1, 2) * QPoly::from_i64s(&[1, -1, 1]),
        I2Family::Pgl3 { eps, parity: Parity::Even } => QPoly::qk_minus(1, -eps) * QPoly::qk_minus(3, eps),
        I2Family::Pgl3 { eps, parity: Parity::Odd } => {
            QPoly::monomial(1, 2) * (QPoly::monomial(1, 2) + q.scale(&BigInt::from(eps)) + QPoly::one())
        }
    }
}

/// Upper bound on `|C_X(t)|` for `X = hat X / Y`: the product of the factor
/// centralizers divided by the odd part of `|Y|`, rounded up.
pub fn central_product_centralizer_bound(y2prime: &BigInt, factor_centralizers: &[BigInt]) -> BigInt {
    let prod: BigInt = factor_centralizers.iter().product();
    Integer::div_ceil(&prod, y2prime)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_polys() {
        assert_eq!(parse_eps_poly("q^2+eq+1", -1).unwrap(), QPoly::from_i64s(&[1, -1, 1]));
        assert_eq!(parse_eps_poly("q-e", 1).unwrap(), QPoly::from_i64s(&[-1, 1]));
        assert_eq!(parse_eps_poly("q^3-e", -1).unwrap(), QPoly::from_i64s(&[1, 0, 0, 1]));
        assert_eq!(parse_eps_poly("q+1", 1).unwrap(), QPoly::from_i64s(&[1, 1]));
    }

    #[test]
    fn order_atoms() {
        let sl2 = parse_order_expr("SL(2)", 1).unwrap();
        assert_eq!(sl2.expand().unwrap(), QPoly::from_i64s(&[0, -1, 0, 1]));
        let x = parse_order_expr("2*q^3*SL(2,q^3)^2*(q^2+eq+1)", -1).unwrap();
        assert_eq!(x.degree(), 3 + 18 + 2);
        assert_eq!(x.scalar, BigRational::from_integer(2.into()));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(2), Some((2, 1)));
    }
}
