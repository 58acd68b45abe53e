use ifix::algdim::{gamma, resolve, subsystem, DimRecord};
use ifix::fixity::{cached_weyl_group, parse_rational, CharacterSum, ParabolicActionSpec};
use ifix::lieorders::{Exceptional, InvolutionTable};
use ifix::rootdata::Family;
use std::path::PathBuf;

fn data(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn table() -> InvolutionTable {
    InvolutionTable::from_json(&data("involution_classes.json")).unwrap()
}

fn records() -> Vec<DimRecord> {
    serde_json::from_str(&data("dimensions.json")).unwrap()
}

#[test]
fn main3_rows() {
    let t = table();
    let recs = records();
    assert_eq!(recs.len(), 8);
    for r in &recs {
        let g = gamma(r, &t).unwrap();
        assert_eq!(g, parse_rational(&r.gamma).unwrap(), "{}", r.id);
    }
}

#[test]
fn class_dims_are_even_and_match_torus_involutions() {
    // the class of the longest-word involution has dimension (dim G + rank)/2
    let t = table();
    let d = resolve(&records()[1], &t).unwrap();
    assert_eq!(d.dim_class, 128);
    assert_eq!(d.dim_g, 248);
    assert_eq!(ifix::algdim::torus_involution_dim(248, 8).unwrap(), 248 - 128);
    for r in records() {
        assert_eq!(resolve(&r, &t).unwrap().dim_class % 2, 0, "{}", r.id);
    }
}

#[test]
fn parabolic_fixed_dimension_is_character_degree() {
    let t = table();
    for r in records().iter().filter(|r| r.group == Exceptional::G2 && r.subgroup.starts_with('P')) {
        let d = resolve(r, &t).unwrap();
        let spec = ParabolicActionSpec::parse(Exceptional::G2, &r.subgroup).unwrap();
        let inv = t.find(Exceptional::G2, &r.class).unwrap();
        let chi = CharacterSum::for_class(&spec, inv).unwrap().symbolic(3, 2).unwrap();
        assert_eq!(chi.degree().unwrap() as u32, d.fixed, "{}", r.id);
        assert_eq!(d.dim_h, 9);
    }
}

#[test]
fn g2_subsystem_of_t1() {
    let wg = cached_weyl_group(Family::G2).unwrap();
    let rs = &wg.rs;
    let j = [rs.resolve("a0".parse().unwrap()), rs.resolve("a1".parse().unwrap())];
    assert_eq!(subsystem(rs, &j).len(), 4);
}
