//! Dimensions for the action of a simple algebraic group on a coset variety:
//! fixed-subvariety dimensions and the ratios `ifix / dim Omega`.

use crate::fixity::{cached_weyl_group, ParabolicActionSpec};
use crate::lieorders::{Exceptional, InvolutionTable, LieError};
use crate::rootdata::{RootError, RootSystem, WeylElement};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DimError {
    #[error("{0}")]
    Inconsistent(String),
    #[error("dim G - rank = {0} is odd")]
    Parity(u32),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("{0}")]
    Engine(String),
}

/// How `dim (t^G cap H)` is obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubgroupPart {
    /// `H` reductive, `t in H` with `dim C_H(t)` given.
    Reductive { dim_h: u32, dim_centralizer: u32 },
    /// `H` a standard parabolic, e.g. `P1`.
    Parabolic { label: String },
}

/// One pair `(G, H)` with the class of the involution achieving the maximum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimRecord {
    pub id: String,
    pub group: Exceptional,
    pub subgroup: String,
    /// Label in the involution table.
    pub class: String,
    pub part: SubgroupPart,
    #[serde(default)]
    pub condition: String,
    /// Stated ratio, checked against the computation.
    pub gamma: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedDims {
    pub dim_g: u32,
    pub dim_h: u32,
    pub dim_class: u32,
    pub dim_class_in_h: u32,
    pub fixed: u32,
}

impl ResolvedDims {
    pub fn dim_omega(&self) -> u32 {
        self.dim_g - self.dim_h
    }

    pub fn ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.fixed), BigInt::from(self.dim_omega()))
    }
}

/// `dim G` as the degree of the order polynomial.
pub fn group_dim(g: Exceptional) -> u32 {
    g.order().degree() as u32
}

/// `dim t^G = deg |G(q)| - deg |C(q)|` from the involution table.
pub fn class_dim(table: &InvolutionTable, g: Exceptional, label: &str) -> Result<u32, DimError> {
    let rec = table
        .find(g, label)
        .ok_or_else(|| DimError::Inconsistent(format!("no class {label} in {}", g.name())))?;
    let c = rec.connected_centralizer().degree() as u32;
    group_dim(g)
        .checked_sub(c)
        .ok_or_else(|| DimError::Inconsistent(format!("{label}: centralizer larger than {}", g.name())))
}

/// Closure of `j` under its own reflections, i.e. the root subsystem `Phi_J`.
pub fn subsystem(rs: &RootSystem, j: &[usize]) -> Vec<usize> {
    let mut set: Vec<usize> = j.iter().flat_map(|&r| [r, rs.neg(r)]).collect();
    set.sort_unstable();
    set.dedup();
    loop {
        let mut added = false;
        for &b in j {
            for k in 0..set.len() {
                let v = rs.reflect(b, &rs.roots[set[k]]);
                let idx = rs.index_of(&v).expect("reflection of a root is a root");
                if !set.contains(&idx) {
                    set.push(idx);
                    added = true;
                }
            }
        }
        if !added {
            set.sort_unstable();
            return set;
        }
    }
}

/// Roots of the standard parabolic with Levi nodes `kept` (1-based).
pub fn parabolic_roots(rs: &RootSystem, kept: &[usize]) -> Vec<usize> {
    (0..rs.num_roots())
        .filter(|&k| {
            rs.is_positive(k) || rs.roots[k].iter().enumerate().all(|(i, &c)| c == 0 || kept.contains(&(i + 1)))
        })
        .collect()
}

/// `dim (t^G cap P)` for semisimple `t` with `C_G(t)°` of root system `Phi_J`.
///
/// Every semisimple element of `P` is `P`-conjugate into the fixed torus, so
/// `t^G cap P` is the union of the classes `(t^w)^P` and its dimension is
/// `|Phi_P| - min_w |w(Phi_J) cap Phi_P|`.
pub fn parabolic_class_dim(rs: &RootSystem, weyl: &[WeylElement], kept: &[usize], phi_j: &[usize]) -> u32 {
    let phi_p = parabolic_roots(rs, kept);
    let mut in_p = vec![false; rs.num_roots()];
    for &k in &phi_p {
        in_p[k] = true;
    }
    let min_meet = weyl
        .iter()
        .map(|&w| phi_j.iter().filter(|&&r| in_p[rs.apply(w, r)]).count())
        .min()
        .unwrap_or(0);
    (phi_p.len() - min_meet) as u32
}

/// Resolves all dimensions of a record against the involution table.
pub fn resolve(record: &DimRecord, table: &InvolutionTable) -> Result<ResolvedDims, DimError> {
    let g = record.group;
    let dim_g = group_dim(g);
    let dim_class = class_dim(table, g, &record.class)?;
    let (dim_h, dim_class_in_h) = match &record.part {
        SubgroupPart::Reductive { dim_h, dim_centralizer } => {
            if dim_centralizer > dim_h {
                return Err(DimError::Inconsistent(format!("{}: dim C_H(t) > dim H", record.id)));
            }
            (*dim_h, dim_h - dim_centralizer)
        }
        SubgroupPart::Parabolic { label } => {
            let spec = ParabolicActionSpec::parse(g, label).map_err(|e| DimError::Engine(e.to_string()))?;
            let wg = cached_weyl_group(g.root_family()).map_err(|e| DimError::Engine(e.to_string()))?;
            let rs = &wg.rs;
            let rec = table
                .find(g, &record.class)
                .ok_or_else(|| DimError::Inconsistent(format!("no class {}", record.class)))?;
            let pl = rec
                .raw
                .pseudo_levi
                .as_ref()
                .ok_or_else(|| DimError::Inconsistent(format!("{}: class has no pseudo-Levi data", record.id)))?;
            let j: Vec<usize> = pl.roots().map_err(DimError::Inconsistent)?.into_iter().map(|r| rs.resolve(r)).collect();
            let phi_j = subsystem(rs, &j);
            let kept: Vec<usize> = (1..=rs.rank).filter(|i| !spec.removed.contains(i)).collect();
            let dim_p = (rs.rank + parabolic_roots(rs, &kept).len()) as u32;
            (dim_p, parabolic_class_dim(rs, wg.elements(), &kept, &phi_j))
        }
    };
    if dim_h >= dim_g || dim_class_in_h > dim_class {
        return Err(DimError::Inconsistent(format!("{}: dimensions out of range", record.id)));
    }
    let fixed = (dim_g - dim_h + dim_class_in_h)
        .checked_sub(dim_class)
        .ok_or_else(|| DimError::Inconsistent(format!("{}: negative fixed dimension", record.id)))?;
    Ok(ResolvedDims { dim_g, dim_h, dim_class, dim_class_in_h, fixed })
}

/// `dim C_Omega(t) / dim Omega` for the record's class.
pub fn gamma(record: &DimRecord, table: &InvolutionTable) -> Result<BigRational, DimError> {
    Ok(resolve(record, table)?.ratio())
}

/// `dim C_G(w_0-hat) = (dim G - rank)/2`.
pub fn torus_involution_dim(dim_g: u32, rank: u32) -> Result<u32, DimError> {
    let d = dim_g.checked_sub(rank).ok_or(DimError::Parity(0))?;
    if d % 2 == 1 {
        return Err(DimError::Parity(d));
    }
    Ok(d / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_dims() {
        assert_eq!(torus_involution_dim(14, 2).unwrap(), 6);
        assert_eq!(torus_involution_dim(248, 8).unwrap(), 120);
        assert_eq!(torus_involution_dim(3, 1).unwrap(), 1);
        assert!(torus_involution_dim(14, 3).is_err());
    }
}
