//! Root systems in Bourbaki labelling, Weyl groups as permutations of the roots,
//! conjugacy classes and the twisted class data feeding the semisimple character sum.
//!
//! A Weyl element is determined by the images of the simple roots, so it is packed
//! into a `u64` holding one root index per byte (simple root `alpha_1` in the most
//! significant byte). Roots are ordered with the simple roots first, so the numeric
//! order of the packing agrees with the lexicographic order of full root permutations.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::qpoly::QPoly;

/// Largest Weyl group the enumerator will build.
pub const WEYL_BUDGET: u64 = 3_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("unsupported root system {0}")]
    Unsupported(String),
    #[error("Weyl group of {family} has order {order}, above the enumeration budget {budget}")]
    BudgetExceeded { family: String, order: u64, budget: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    G2,
    F4,
    E6,
    E7,
    E8,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::A(r) => write!(f, "A{r}"),
            Family::B(r) => write!(f, "B{r}"),
            Family::C(r) => write!(f, "C{r}"),
            Family::D(r) => write!(f, "D{r}"),
            Family::G2 => write!(f, "G2"),
            Family::F4 => write!(f, "F4"),
            Family::E6 => write!(f, "E6"),
            Family::E7 => write!(f, "E7"),
            Family::E8 => write!(f, "E8"),
        }
    }
}

impl FromStr for Family {
    type Err = RootError;
    fn from_str(s: &str) -> Result<Self, RootError> {
        let bad = || RootError::Unsupported(s.to_string());
        let (head, tail) = s.split_at(1.min(s.len()));
        let r: usize = tail.parse().map_err(|_| bad())?;
        let fam = match (head, r) {
            ("A", r) if r >= 1 => Family::A(r),
            ("B", r) if r >= 2 => Family::B(r),
            ("C", r) if r >= 2 => Family::C(r),
            ("D", r) if r >= 4 => Family::D(r),
            ("G", 2) => Family::G2,
            ("F", 4) => Family::F4,
            ("E", 6) => Family::E6,
            ("E", 7) => Family::E7,
            ("E", 8) => Family::E8,
            _ => return Err(bad()),
        };
        if fam.rank() > 8 {
            return Err(bad());
        }
        Ok(fam)
    }
}

impl Family {
    pub fn rank(&self) -> usize {
        match *self {
            Family::A(r) | Family::B(r) | Family::C(r) | Family::D(r) => r,
            Family::G2 => 2,
            Family::F4 => 4,
            Family::E6 => 6,
            Family::E7 => 7,
            Family::E8 => 8,
        }
    }

    /// Degrees of the basic invariants.
    pub fn degrees(&self) -> Vec<u64> {
        match *self {
            Family::A(r) => (2..=r as u64 + 1).collect(),
            Family::B(r) | Family::C(r) => (1..=r as u64).map(|i| 2 * i).collect(),
            Family::D(r) => {
                let mut d: Vec<u64> = (1..r as u64).map(|i| 2 * i).collect();
                d.push(r as u64);
                d.sort_unstable();
                d
            }
            Family::G2 => vec![2, 6],
            Family::F4 => vec![2, 6, 8, 12],
            Family::E6 => vec![2, 5, 6, 8, 9, 12],
            Family::E7 => vec![2, 6, 8, 10, 12, 14, 18],
            Family::E8 => vec![2, 8, 12, 14, 18, 20, 24, 30],
        }
    }

    pub fn weyl_order(&self) -> u64 {
        self.degrees().iter().product()
    }

    /// Cartan matrix with `a[i][j] = <alpha_i^vee, alpha_j>`.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        let mut a = vec![vec![0i64; r]; r];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match *self {
            Family::A(_) | Family::B(_) | Family::C(_) => {
                for i in 0..r - 1 {
                    link(i, i + 1);
                }
            }
            Family::D(_) => {
                for i in 0..r - 2 {
                    link(i, i + 1);
                }
                link(r - 3, r - 1);
            }
            Family::G2 => link(0, 1),
            Family::F4 => {
                link(0, 1);
                link(1, 2);
                link(2, 3);
            }
            Family::E6 | Family::E7 | Family::E8 => {
                link(0, 2);
                link(1, 3);
                for i in 2..r - 1 {
                    link(i, i + 1);
                }
            }
        }
        match *self {
            Family::B(_) => a[r - 1][r - 2] = -2,
            Family::C(_) => a[r - 2][r - 1] = -2,
            Family::G2 => a[0][1] = -3,
            Family::F4 => a[2][1] = -2,
            _ => {}
        }
        a
    }
}

fn pack_root(v: &[i64]) -> u64 {
    v.iter().enumerate().fold(0u64, |acc, (k, &c)| acc | ((c as i8 as u8 as u64) << (8 * k)))
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    /// Gram matrix of the invariant form on the simple roots, short roots of norm 2.
    pub gram: Vec<Vec<i64>>,
    /// Roots in simple-root coordinates: positive roots by height, simple roots first,
    /// then the negatives in the same order.
    pub roots: Vec<Vec<i64>>,
    pub npos: usize,
    pub highest_root: usize,
    lookup: Vec<(u64, u16)>,
    simple_perms: Vec<Vec<u16>>,
}

/// Root system of `family` built by reflection closure of the simple roots.
pub fn build_root_system(family: Family) -> RootSystem {
    let r = family.rank();
    let cartan = family.cartan();
    // d_i a_ij symmetric, found by propagation along the Dynkin diagram
    let mut d: Vec<Option<BigRational>> = vec![None; r];
    d[0] = Some(BigRational::from_integer(1.into()));
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..r {
            for j in 0..r {
                if cartan[i][j] != 0 && i != j {
                    if let (Some(di), None) = (d[i].clone(), &d[j]) {
                        d[j] = Some(di * BigRational::new(cartan[i][j].into(), cartan[j][i].into()));
                        changed = true;
                    }
                }
            }
        }
    }
    let d: Vec<BigRational> = d.into_iter().map(|x| x.expect("connected diagram")).collect();
    let min = d.iter().min().cloned().expect("nonempty");
    let gram: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let v = &d[i] / &min * BigRational::from_integer(cartan[i][j].into());
                    i64::try_from(v.to_integer()).expect("small gram entry")
                })
                .collect()
        })
        .collect();

    let simple = |i: usize| -> Vec<i64> { (0..r).map(|k| i64::from(k == i)).collect() };
    let mut seen: HashSet<Vec<i64>> = (0..r).map(simple).collect();
    let mut frontier: Vec<Vec<i64>> = (0..r).map(simple).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in &frontier {
            for i in 0..r {
                let c: i64 = (0..r).map(|j| cartan[i][j] * v[j]).sum();
                let mut w = v.clone();
                w[i] -= c;
                if seen.insert(w.clone()) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    let mut pos: Vec<Vec<i64>> = seen.into_iter().filter(|v| v.iter().all(|&c| c >= 0)).collect();
    pos.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    let npos = pos.len();
    let mut roots = pos.clone();
    roots.extend(pos.iter().map(|v| v.iter().map(|c| -c).collect::<Vec<i64>>()));
    let mut lookup: Vec<(u64, u16)> = roots.iter().enumerate().map(|(k, v)| (pack_root(v), k as u16)).collect();
    lookup.sort_unstable();
    let mut rs = RootSystem {
        family,
        rank: r,
        cartan,
        gram,
        roots,
        npos,
        highest_root: npos - 1,
        lookup,
        simple_perms: Vec::new(),
    };
    rs.simple_perms = (0..r).map(|i| rs.reflection_perm(i)).collect();
    rs
}

impl RootSystem {
    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        let key = pack_root(v);
        self.lookup.binary_search_by_key(&key, |e| e.0).ok().map(|p| self.lookup[p].1 as usize)
    }

    pub fn neg(&self, k: usize) -> usize {
        if k < self.npos {
            k + self.npos
        } else {
            k - self.npos
        }
    }

    pub fn is_positive(&self, k: usize) -> bool {
        k < self.npos
    }

    pub fn height(&self, k: usize) -> i64 {
        self.roots[k].iter().sum()
    }

    pub fn inner(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += x[i] * self.gram[i][j] * y[j];
            }
        }
        s
    }

    /// `s_beta(v)` for the root with index `beta`.
    pub fn reflect(&self, beta: usize, v: &[i64]) -> Vec<i64> {
        let b = &self.roots[beta];
        let num = 2 * self.inner(b, v);
        let den = self.inner(b, b);
        assert_eq!(num % den, 0, "non-integral reflection coefficient");
        let c = num / den;
        v.iter().zip(b).map(|(x, y)| x - c * y).collect()
    }

    pub fn reflection_perm(&self, beta: usize) -> Vec<u16> {
        self.roots
            .iter()
            .map(|v| self.index_of(&self.reflect(beta, v)).expect("root system closed under reflection") as u16)
            .collect()
    }
}

/// A Weyl element, stored as the images of the simple roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement(pub u64);

impl RootSystem {
    pub fn identity(&self) -> WeylElement {
        self.encode((0..self.rank).map(|i| i as u16))
    }

    fn encode(&self, images: impl Iterator<Item = u16>) -> WeylElement {
        let mut x = 0u64;
        for (i, im) in images.enumerate() {
            x |= (im as u64) << (8 * (7 - i));
        }
        WeylElement(x)
    }

    #[inline]
    pub fn image(&self, x: WeylElement, i: usize) -> usize {
        ((x.0 >> (8 * (7 - i))) & 0xff) as usize
    }

    /// Image of an arbitrary root under `x`, by linearity.
    pub fn apply(&self, x: WeylElement, root: usize) -> usize {
        if root < self.rank {
            return self.image(x, root);
        }
        let mut v = vec![0i64; self.rank];
        for (k, &c) in self.roots[root].iter().enumerate() {
            if c != 0 {
                for (vi, w) in v.iter_mut().zip(&self.roots[self.image(x, k)]) {
                    *vi += c * w;
                }
            }
        }
        self.index_of(&v).expect("Weyl element permutes roots")
    }

    /// `s_j x`.
    pub fn left_simple(&self, j: usize, x: WeylElement) -> WeylElement {
        let p = &self.simple_perms[j];
        self.encode((0..self.rank).map(|i| p[self.image(x, i)]))
    }

    /// `x s_j`.
    pub fn right_simple(&self, x: WeylElement, j: usize) -> WeylElement {
        let xj = self.image(x, j);
        self.encode((0..self.rank).map(|i| {
            let a = self.cartan[j][i];
            if i == j {
                self.neg(xj) as u16
            } else if a == 0 {
                self.image(x, i) as u16
            } else {
                let xi = &self.roots[self.image(x, i)];
                let v: Vec<i64> = xi.iter().zip(&self.roots[xj]).map(|(u, w)| u - a * w).collect();
                self.index_of(&v).expect("root") as u16
            }
        }))
    }

    /// `s_j x s_j`.
    pub fn conj_simple(&self, j: usize, x: WeylElement) -> WeylElement {
        self.left_simple(j, self.right_simple(x, j))
    }

    /// `x y` (apply `y` first).
    pub fn compose(&self, x: WeylElement, y: WeylElement) -> WeylElement {
        self.encode((0..self.rank).map(|i| self.apply(x, self.image(y, i)) as u16))
    }

    pub fn to_perm(&self, x: WeylElement) -> Vec<u16> {
        (0..self.num_roots()).map(|k| self.apply(x, k) as u16).collect()
    }

    pub fn from_perm(&self, perm: &[u16]) -> WeylElement {
        self.encode(perm[..self.rank].iter().copied())
    }

    pub fn inverse(&self, x: WeylElement) -> WeylElement {
        let perm = self.to_perm(x);
        let mut inv = vec![0u16; perm.len()];
        for (k, &im) in perm.iter().enumerate() {
            inv[im as usize] = k as u16;
        }
        self.from_perm(&inv)
    }

    /// Matrix on the simple-root basis; column `i` holds the coordinates of `x(alpha_i)`.
    pub fn matrix(&self, x: WeylElement) -> Vec<Vec<i64>> {
        let r = self.rank;
        let mut m = vec![vec![0i64; r]; r];
        for i in 0..r {
            for (k, c) in self.roots[self.image(x, i)].iter().enumerate() {
                m[k][i] = *c;
            }
        }
        m
    }

    pub fn reflection(&self, beta: usize) -> WeylElement {
        self.from_perm(&self.reflection_perm(beta))
    }

    /// Number of positive roots sent to negative roots.
    pub fn length(&self, x: WeylElement) -> usize {
        (0..self.npos).filter(|&k| !self.is_positive(self.apply(x, k))).count()
    }

    /// The longest element: the unique element making every simple root negative.
    pub fn longest_word(&self) -> WeylElement {
        let mut x = self.identity();
        loop {
            match (0..self.rank).find(|&i| self.is_positive(self.image(x, i))) {
                Some(i) => x = self.right_simple(x, i),
                None => return x,
            }
        }
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn generate(&self, gens: &[WeylElement]) -> Vec<WeylElement> {
        let id = self.identity();
        let mut seen: HashSet<WeylElement> = HashSet::from([id]);
        let mut frontier = vec![id];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &x in &frontier {
                for &g in gens {
                    let y = self.compose(x, g);
                    if seen.insert(y) {
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<WeylElement> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// `W_J` for `J` a set of simple root numbers (1-based, Bourbaki).
    pub fn parabolic_weyl(&self, j: &[usize]) -> Vec<WeylElement> {
        let gens: Vec<WeylElement> = j.iter().map(|&i| self.reflection(i - 1)).collect();
        self.generate(&gens)
    }

    /// Subgroup generated by reflections in the listed roots.
    pub fn reflection_subgroup(&self, roots: &[RootRef]) -> Vec<WeylElement> {
        let gens: Vec<WeylElement> = roots.iter().map(|r| self.reflection(self.resolve(*r))).collect();
        self.generate(&gens)
    }

    pub fn resolve(&self, r: RootRef) -> usize {
        match r {
            RootRef::Simple(i) => i - 1,
            RootRef::Highest => self.highest_root,
            RootRef::NegHighest => self.neg(self.highest_root),
        }
    }

    /// `|det(q M - I)|` normalised to a positive leading coefficient.
    pub fn torus_poly(&self, m: &[Vec<i64>]) -> QPoly {
        let r = self.rank;
        let points: Vec<(BigInt, BigRational)> = (0..=r as i64)
            .map(|qv| {
                let a: Vec<Vec<i128>> = (0..r)
                    .map(|i| (0..r).map(|j| (qv * m[i][j] - i64::from(i == j)) as i128).collect())
                    .collect();
                (BigInt::from(qv), BigRational::from_integer(BigInt::from(det_bareiss(a))))
            })
            .collect();
        QPoly::interpolate(&points).expect("integer determinant polynomial").abs_leading()
    }
}

/// Fraction-free determinant.
fn det_bareiss(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

/// A root named relative to the Bourbaki labelling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootRef {
    Simple(usize),
    Highest,
    NegHighest,
}

impl FromStr for RootRef {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "a0" | "+a0" => Ok(RootRef::Highest),
            "-a0" => Ok(RootRef::NegHighest),
            _ => s
                .strip_prefix('a')
                .and_then(|n| n.parse().ok())
                .filter(|&n: &usize| n >= 1)
                .map(RootRef::Simple)
                .ok_or_else(|| format!("bad root name {s}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConjClass {
    pub rep: WeylElement,
    pub size: u64,
}

/// An enumerated Weyl group with its conjugacy class partition.
pub struct WeylGroup {
    pub rs: RootSystem,
    elements: Vec<WeylElement>,
    lengths: Vec<u8>,
    class_of: Vec<u32>,
    classes: Vec<ConjClass>,
}

/// Enumerate `W(rs)` by breadth-first search over lengths, then partition it into
/// conjugacy classes.
pub fn weyl_group(rs: RootSystem) -> Result<WeylGroup, RootError> {
    let order = rs.family.weyl_order();
    if order > WEYL_BUDGET {
        return Err(RootError::BudgetExceeded { family: rs.family.to_string(), order, budget: WEYL_BUDGET });
    }
    let mut layers: Vec<Vec<WeylElement>> = vec![vec![rs.identity()]];
    loop {
        let cur = layers.last().expect("layer");
        let mut next: Vec<WeylElement> =
            cur.iter().flat_map(|&x| (0..rs.rank).map(move |j| (j, x))).map(|(j, x)| rs.left_simple(j, x)).collect();
        next.sort_unstable();
        next.dedup();
        if layers.len() >= 2 {
            let prev = &layers[layers.len() - 2];
            next.retain(|x| prev.binary_search(x).is_err());
        }
        if next.is_empty() {
            break;
        }
        layers.push(next);
    }
    let mut tagged: Vec<(WeylElement, u8)> =
        layers.into_iter().enumerate().flat_map(|(l, layer)| layer.into_iter().map(move |x| (x, l as u8))).collect();
    tagged.sort_unstable();
    assert_eq!(tagged.len() as u64, order, "enumeration disagrees with the degree product");
    let (elements, lengths) = tagged.into_iter().unzip();
    let mut wg = WeylGroup { rs, elements, lengths, class_of: Vec::new(), classes: Vec::new() };
    wg.partition();
    Ok(wg)
}

impl WeylGroup {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    /// Length of the `k`-th element, read off the enumeration.
    pub fn length_at(&self, k: usize) -> usize {
        self.lengths[k] as usize
    }

    pub fn index(&self, x: WeylElement) -> usize {
        self.elements.binary_search(&x).expect("element of W")
    }

    fn partition(&mut self) {
        const NONE: u32 = u32::MAX;
        let n = self.elements.len();
        let mut raw = vec![NONE; n];
        let mut found: Vec<ConjClass> = Vec::new();
        for start in 0..n {
            if raw[start] != NONE {
                continue;
            }
            let id = found.len() as u32;
            raw[start] = id;
            let mut stack = vec![self.elements[start]];
            let mut size = 1u64;
            while let Some(x) = stack.pop() {
                for j in 0..self.rs.rank {
                    let y = self.rs.conj_simple(j, x);
                    let k = self.index(y);
                    if raw[k] == NONE {
                        raw[k] = id;
                        size += 1;
                        stack.push(y);
                    }
                }
            }
            // iteration is in increasing order, so the first member is the least one
            found.push(ConjClass { rep: self.elements[start], size });
        }
        let mut order: Vec<usize> = (0..found.len()).collect();
        order.sort_by_key(|&i| (found[i].size, found[i].rep));
        let mut relabel = vec![0u32; found.len()];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new as u32;
        }
        self.class_of = raw.into_iter().map(|c| relabel[c as usize]).collect();
        self.classes = order.into_iter().map(|i| found[i].clone()).collect();
    }

    /// Classes sorted by size, then by least member.
    pub fn conjugacy_classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class_index(&self, x: WeylElement) -> usize {
        self.class_of[self.index(x)] as usize
    }

    /// Per-class counts of the elements of a subset of `W`.
    pub fn class_counts(&self, subset: &[WeylElement]) -> Vec<u64> {
        let mut counts = vec![0u64; self.classes.len()];
        for &x in subset {
            counts[self.class_index(x)] += 1;
        }
        counts
    }

    /// Class data for the twisted classes `C_i w*`, relative to the subgroup `wp`.
    pub fn sigma_class_data(&self, wp: &[WeylElement], twist: &Twist) -> Vec<TwistedClassData> {
        let winv = self.rs.inverse(twist.wstar);
        let mut counts = vec![0u64; self.classes.len()];
        for &y in wp {
            counts[self.class_index(self.rs.compose(y, winv))] += 1;
        }
        let eps_factor = QPoly::from_i64s(&[-twist.eps, 1]);
        self.classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let torus_poly = self.rs.torus_poly(&twist.frobenius_matrix(&self.rs, c.rep));
                let rel_rank = torus_poly.factor_multiplicity(&eps_factor);
                TwistedClassData { class: i, size: c.size, coset_count: counts[i], torus_poly, rel_rank }
            })
            .collect()
    }
}

/// The twist `w*` together with the graph automorphism of the root lattice.
#[derive(Clone, Debug)]
pub struct Twist {
    pub wstar: WeylElement,
    pub graph: Vec<Vec<i64>>,
    pub eps: i64,
}

impl Twist {
    pub fn untwisted(rs: &RootSystem) -> Twist {
        let r = rs.rank;
        Twist {
            wstar: rs.identity(),
            graph: (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect(),
            eps: 1,
        }
    }

    /// `w* = w_0`, graph automorphism `-w_0`, as for the Steinberg twist of `E6`.
    pub fn longest_word_twist(rs: &RootSystem) -> Twist {
        let w0 = rs.longest_word();
        let graph = rs.matrix(w0).into_iter().map(|row| row.into_iter().map(|c| -c).collect()).collect();
        Twist { wstar: w0, graph, eps: -1 }
    }

    /// Matrix whose `|det(qM - I)|` is the order of the torus attached to `C_i w*`,
    /// where `c` represents `C_i`.
    pub fn frobenius_matrix(&self, rs: &RootSystem, c: WeylElement) -> Vec<Vec<i64>> {
        mat_mul(&rs.matrix(rs.compose(c, self.wstar)), &self.graph)
    }
}

#[derive(Clone, Debug)]
pub struct TwistedClassData {
    pub class: usize,
    pub size: u64,
    /// `|W_P cap C_i w*|`
    pub coset_count: u64,
    pub torus_poly: QPoly,
    pub rel_rank: u32,
}

impl TwistedClassData {
    pub fn torus_nonzero_at(&self, q: i64) -> bool {
        !self.torus_poly.eval_i64(q).is_zero()
    }
}
