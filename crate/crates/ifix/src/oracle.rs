//! Brute-force ground truth: small matrix groups over finite fields, subgroups,
//! coset actions and exact involution fixity.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fixity::fix_points;

pub const ELEMENT_CAP: usize = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("field of order {p}^{k} unsupported")]
    BadField { p: u32, k: u32 },
    #[error("field axiom fails: {0}")]
    FieldAxiom(String),
    #[error("group exceeds {0} elements")]
    CapExceeded(usize),
    #[error("bad matrix: {0}")]
    BadMatrix(String),
    #[error("no element of order {0}")]
    NoElement(u32),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("unknown group {0}")]
    Unknown(String),
    #[error("bad subgroup spec {0}")]
    BadSpec(String),
}

/// `GF(p^k)` with elements `sum c_i p^i`, reduced by the least monic irreducible
/// of degree `k` (coefficients read as a base-`p` number).
#[derive(Clone, Debug)]
pub struct FiniteField {
    pub p: u32,
    pub k: u32,
    pub size: usize,
    /// Coefficients `c_0..c_{k-1}` of the reduction `x^k = -(c_0 + ... )`, i.e. the modulus without its leading term.
    pub modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl FiniteField {
    pub fn new(p: u32, k: u32) -> Result<Self, OracleError> {
        if !is_prime(p) || k == 0 || p.pow(k) > 81 {
            return Err(OracleError::BadField { p, k });
        }
        let size = p.pow(k) as usize;
        let digits = |x: usize| -> Vec<u32> { (0..k).map(|i| (x as u32 / p.pow(i)) % p).collect() };
        let undigits = |d: &[u32]| -> usize { d.iter().enumerate().map(|(i, c)| (c * p.pow(i as u32)) as usize).sum() };
        // multiply polynomials of degree < k, reduce by x^k + m(x)
        let polymul = |a: &[u32], b: &[u32], m: &[u32]| -> Vec<u32> {
            let mut r = vec![0u32; 2 * k as usize];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    r[i + j] = (r[i + j] + x * y) % p;
                }
            }
            for d in (k as usize..r.len()).rev() {
                let c = r[d];
                if c != 0 {
                    r[d] = 0;
                    for (i, mi) in m.iter().enumerate() {
                        let pos = d - k as usize + i;
                        r[pos] = (r[pos] + (p - c) * mi % p) % p;
                    }
                }
            }
            r.truncate(k as usize);
            r
        };
        let modulus = if k == 1 {
            vec![0]
        } else {
            (0..size)
                .map(digits)
                .find(|m| {
                    // irreducible iff the multiplication has no zero divisors
                    (1..size).all(|a| (1..size).all(|b| polymul(&digits(a), &digits(b), m).iter().any(|&c| c != 0)))
                })
                .ok_or(OracleError::BadField { p, k })?
        };
        let mut add = vec![0u8; size * size];
        let mut mul = vec![0u8; size * size];
        for a in 0..size {
            for b in 0..size {
                let (da, db) = (digits(a), digits(b));
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * size + b] = undigits(&s) as u8;
                let m = if k == 1 { vec![(da[0] * db[0]) % p] } else { polymul(&da, &db, &modulus) };
                mul[a * size + b] = undigits(&m) as u8;
            }
        }
        let neg = (0..size).map(|a| (0..size).find(|&b| add[a * size + b] == 0).unwrap() as u8).collect();
        let inv = (0..size)
            .map(|a| if a == 0 { 0 } else { (1..size).find(|&b| mul[a * size + b] == 1).unwrap_or(0) as u8 })
            .collect();
        let f = FiniteField { p, k, size, modulus, add, mul, neg, inv };
        f.check_axioms()?;
        Ok(f)
    }

    fn check_axioms(&self) -> Result<(), OracleError> {
        let n = self.size as u8;
        for a in 0..n {
            if a != 0 && self.mul(a, self.inv(a)) != 1 {
                return Err(OracleError::FieldAxiom(format!("{a} has no inverse")));
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(OracleError::FieldAxiom("commutativity".into()));
                }
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                        || self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                        || self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
                    {
                        return Err(OracleError::FieldAxiom(format!("at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.size + b as usize]
    }
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.size + b as usize]
    }
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }
}

/// Square matrix, row-major.
pub type Mat = Vec<u8>;

/// Generators of a matrix group, as stored in the fixture file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub id: String,
    pub p: u32,
    pub k: u32,
    pub degree: usize,
    pub order: u64,
    pub generators: Vec<Vec<Vec<u32>>>,
    #[serde(default)]
    pub note: String,
}

/// A finite matrix group with all its elements, sorted by encoding.
#[derive(Clone, Debug)]
pub struct MatGroup {
    pub field: FiniteField,
    pub degree: usize,
    pub gens: Vec<Mat>,
    elements: Vec<Mat>,
    index: HashMap<Mat, usize>,
    inverse: Vec<usize>,
}

/// A subgroup, as sorted element indices together with generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: Vec<usize>,
    pub gens: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

impl MatGroup {
    pub fn mat_mul(&self, a: &[u8], b: &[u8]) -> Mat {
        let d = self.degree;
        let f = &self.field;
        let mut c = vec![0u8; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut s = 0u8;
                for l in 0..d {
                    s = f.add(s, f.mul(a[i * d + l], b[l * d + j]));
                }
                c[i * d + j] = s;
            }
        }
        c
    }

    fn identity_mat(d: usize) -> Mat {
        (0..d * d).map(|i| u8::from(i / d == i % d)).collect()
    }

    /// Breadth-first closure of the generators.
    pub fn enumerate(field: FiniteField, degree: usize, gens: Vec<Mat>, cap: usize) -> Result<Self, OracleError> {
        for g in &gens {
            if g.len() != degree * degree || g.iter().any(|&c| c as usize >= field.size) {
                return Err(OracleError::BadMatrix(format!("{g:?}")));
            }
        }
        let mut shell = MatGroup { field, degree, gens, elements: Vec::new(), index: HashMap::new(), inverse: Vec::new() };
        let id = Self::identity_mat(degree);
        let mut seen: HashMap<Mat, ()> = HashMap::from([(id.clone(), ())]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &shell.gens {
                let y = shell.mat_mul(&x, g);
                if !seen.contains_key(&y) {
                    if seen.len() >= cap {
                        return Err(OracleError::CapExceeded(cap));
                    }
                    seen.insert(y.clone(), ());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Mat> = seen.into_keys().collect();
        elements.sort();
        shell.index = elements.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        shell.elements = elements;
        shell.inverse = (0..shell.elements.len()).map(|i| shell.power(i, shell.element_order(i) - 1)).collect();
        Ok(shell)
    }

    pub fn from_spec(spec: &GeneratorSpec, cap: usize) -> Result<Self, OracleError> {
        let field = FiniteField::new(spec.p, spec.k)?;
        let mut gens = Vec::new();
        for g in &spec.generators {
            if g.len() != spec.degree || g.iter().any(|r| r.len() != spec.degree) {
                return Err(OracleError::BadMatrix(format!("{}: wrong shape", spec.id)));
            }
            gens.push(g.iter().flatten().map(|&c| c as u8).collect());
        }
        MatGroup::enumerate(field, spec.degree, gens, cap)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &Mat {
        &self.elements[i]
    }

    pub fn index_of(&self, m: &Mat) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn identity(&self) -> usize {
        self.index[&Self::identity_mat(self.degree)]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.mat_mul(&self.elements[a], &self.elements[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn power(&self, a: usize, e: usize) -> usize {
        let mut r = self.identity();
        for _ in 0..e {
            r = self.mul(r, a);
        }
        r
    }

    pub fn element_order(&self, a: usize) -> usize {
        let id = self.identity();
        let mut x = a;
        let mut n = 1;
        while x != id {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn involutions(&self) -> Vec<usize> {
        let id = self.identity();
        (0..self.order()).filter(|&x| x != id && self.mul(x, x) == id).collect()
    }

    /// Subgroup generated by the given elements.
    pub fn subgroup(&self, gens: &[usize]) -> Subgroup {
        let id = self.identity();
        let mut seen = vec![false; self.order()];
        seen[id] = true;
        let mut out = vec![id];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        Subgroup { elements: out, gens: gens.to_vec() }
    }

    pub fn whole(&self) -> Subgroup {
        let gens = self.gens.iter().map(|g| self.index[g]).collect();
        Subgroup { elements: (0..self.order()).collect(), gens }
    }

    pub fn normalizes(&self, g: usize, h: &Subgroup) -> bool {
        h.gens.iter().all(|&x| h.contains(self.conj(x, g)))
    }

    /// `N_G(H)`.
    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let mut gens = h.gens.clone();
        let mut n = self.subgroup(&gens);
        for g in 0..self.order() {
            if !n.contains(g) && self.normalizes(g, h) {
                gens.push(g);
                n = self.subgroup(&gens);
            }
        }
        n
    }

    /// `N_G(<x>)` for the least element `x` of order `m`.
    pub fn normalizer_of_cyclic(&self, m: u32) -> Result<Subgroup, OracleError> {
        let x = (0..self.order()).find(|&x| self.element_order(x) == m as usize).ok_or(OracleError::NoElement(m))?;
        Ok(self.normalizer(&self.subgroup(&[x])))
    }

    /// A Sylow `p`-subgroup, grown one normalizing `p`-element at a time.
    pub fn sylow(&self, p: u32) -> Subgroup {
        let p = p as usize;
        let mut target = 1;
        let mut o = self.order();
        while o % p == 0 {
            o /= p;
            target *= p;
        }
        let is_p_elt = |x: usize| {
            let mut n = self.element_order(x);
            while n % p == 0 {
                n /= p;
            }
            n == 1
        };
        let pelts: Vec<usize> = (0..self.order()).filter(|&x| is_p_elt(x)).collect();
        let mut sub = self.subgroup(&[]);
        while sub.order() < target {
            let g = pelts
                .iter()
                .copied()
                .find(|&g| !sub.contains(g) && self.normalizes(g, &sub))
                .expect("a p-group below Sylow size has a normalizing p-element outside it");
            let mut gens = sub.gens.clone();
            gens.push(g);
            sub = self.subgroup(&gens);
        }
        sub
    }

    pub fn sylow_normalizer(&self, p: u32) -> Subgroup {
        self.normalizer(&self.sylow(p))
    }

    /// Parses `whole`, `trivial`, `sylow-normalizer:p`, `cyclic-normalizer:m`.
    pub fn subgroup_from_spec(&self, spec: &str) -> Result<Subgroup, OracleError> {
        let bad = || OracleError::BadSpec(spec.to_string());
        match spec.split_once(':') {
            None if spec == "whole" => Ok(self.whole()),
            None if spec == "trivial" => Ok(self.subgroup(&[])),
            Some(("sylow-normalizer", p)) => Ok(self.sylow_normalizer(p.parse().map_err(|_| bad())?)),
            Some(("cyclic-normalizer", m)) => self.normalizer_of_cyclic(m.parse().map_err(|_| bad())?),
            _ => Err(bad()),
        }
    }

    /// Conjugacy classes of the given elements (which must be a union of classes).
    pub fn classes_of(&self, xs: &[usize]) -> Vec<Vec<usize>> {
        let mut done = vec![false; self.order()];
        let gens: Vec<usize> = self.gens.iter().map(|g| self.index[g]).collect();
        let mut out = Vec::new();
        for &x in xs {
            if done[x] {
                continue;
            }
            done[x] = true;
            let mut class = vec![x];
            let mut queue = VecDeque::from([x]);
            while let Some(y) = queue.pop_front() {
                for &g in &gens {
                    let z = self.conj(y, g);
                    if !done[z] {
                        done[z] = true;
                        class.push(z);
                        queue.push_back(z);
                    }
                }
            }
            class.sort_unstable();
            out.push(class);
        }
        out
    }

    pub fn i2(&self) -> usize {
        self.involutions().len()
    }
}

/// The action of `G` on the right cosets of `H`.
#[derive(Clone, Debug)]
pub struct PermAction {
    pub n: usize,
    pub stabilizer_order: usize,
    /// A representative of each coset, in breadth-first order from `H`.
    pub reps: Vec<usize>,
    coset_of: Vec<usize>,
    h: Subgroup,
}

/// Fixed points of one class of involutions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassFix {
    pub class_size: usize,
    pub class_in_h: usize,
    pub fix: usize,
}

impl PermAction {
    pub fn image(&self, g: &MatGroup, point: usize, x: usize) -> usize {
        self.coset_of[g.mul(self.reps[point], x)]
    }

    pub fn fix(&self, g: &MatGroup, x: usize) -> usize {
        (0..self.n).filter(|&i| self.image(g, i, x) == i).count()
    }

    pub fn permutation(&self, g: &MatGroup, x: usize) -> Vec<usize> {
        (0..self.n).map(|i| self.image(g, i, x)).collect()
    }

    pub fn stabilizer(&self) -> &Subgroup {
        &self.h
    }
}

pub fn coset_action(g: &MatGroup, h: &Subgroup) -> Result<PermAction, OracleError> {
    let id = g.identity();
    if !h.contains(id) || h.elements.iter().any(|&a| h.gens.iter().any(|&b| !h.contains(g.mul(a, b)))) {
        return Err(OracleError::NotSubgroup("not closed".into()));
    }
    let gens: Vec<usize> = g.gens.iter().map(|m| g.index_of(m).expect("generator")).collect();
    const NONE: usize = usize::MAX;
    let mut coset_of = vec![NONE; g.order()];
    let mut reps = Vec::new();
    let mut queue = VecDeque::new();
    let label = |rep: usize, coset_of: &mut Vec<usize>, reps: &mut Vec<usize>| -> bool {
        if coset_of[rep] != NONE {
            return false;
        }
        let c = reps.len();
        for &a in &h.elements {
            let y = g.mul(a, rep);
            if coset_of[y] != NONE {
                return false;
            }
            coset_of[y] = c;
        }
        reps.push(rep);
        true
    };
    label(id, &mut coset_of, &mut reps);
    queue.push_back(id);
    while let Some(r) = queue.pop_front() {
        for &s in &gens {
            let y = g.mul(r, s);
            if label(y, &mut coset_of, &mut reps) {
                queue.push_back(y);
            }
        }
    }
    if coset_of.contains(&NONE) || reps.len() * h.order() != g.order() {
        return Err(OracleError::NotSubgroup("cosets do not partition the group".into()));
    }
    Ok(PermAction { n: reps.len(), stabilizer_order: h.order(), reps, coset_of, h: h.clone() })
}

/// Largest fixed point count of an involution, with the per-class breakdown.
pub fn ifix_exact(g: &MatGroup, a: &PermAction) -> (usize, Vec<ClassFix>) {
    let classes = g.classes_of(&g.involutions());
    let per: Vec<ClassFix> = classes
        .iter()
        .map(|c| ClassFix {
            class_size: c.len(),
            class_in_h: c.iter().filter(|&&x| a.h.contains(x)).count(),
            fix: a.fix(g, c[0]),
        })
        .collect();
    (per.iter().map(|c| c.fix).max().unwrap_or(0), per)
}

/// Double count of fixed (involution, point) pairs, and the coset formula per class.
pub fn burnside_check(g: &MatGroup, a: &PermAction) -> bool {
    let invs = g.involutions();
    let by_elements: usize = invs.iter().map(|&t| a.fix(g, t)).sum();
    // every point stabilizer is conjugate to H
    let by_points = a.n * a.h.elements.iter().filter(|&&x| invs.binary_search(&x).is_ok()).count();
    if by_elements != by_points {
        return false;
    }
    let (_, per) = ifix_exact(g, a);
    let n = BigInt::from(a.n);
    let classes = g.classes_of(&invs);
    per.iter().zip(&classes).all(|(c, members)| {
        let formula = fix_points(&BigInt::from(c.class_in_h), &BigInt::from(c.class_size), &n);
        members.iter().all(|&t| a.fix(g, t) == c.fix) && formula.ok() == Some(BigInt::from(c.fix))
    })
}

