use ifix::fixity::{parse_rational, CharacterSum, ParabolicActionSpec};
use ifix::fixtures::*;
use ifix::lieorders::Exceptional;
use ifix::oracle::{MatGroup, ELEMENT_CAP};
use ifix::qpoly::QPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::sync::OnceLock;

fn set() -> &'static FixtureSet {
    static SET: OnceLock<FixtureSet> = OnceLock::new();
    SET.get_or_init(|| FixtureSet::load_default().unwrap())
}

#[test]
fn every_row_passes_the_gate() {
    let reports = set().gate(3);
    let failing: Vec<_> = reports.iter().filter(|r| !r.passes()).map(|r| (&r.id, &r.errors)).collect();
    assert!(failing.is_empty(), "{failing:#?}");
    // nothing is silently skipped
    assert!(reports.iter().all(|r| !r.skipped));
    for r in reports.iter().filter(|r| r.kind == "action") {
        assert!(!r.evaluations.is_empty(), "{}", r.id);
    }
}

#[test]
fn coverage_is_complete() {
    let rep = set().coverage_report();
    assert!(rep.ok(), "{:#?}", rep.problems);
    for name in [
        "tabb:par", "tab:main", "tab:mr", "tab:nonmr", "tabb:loc", "tabb:sub", "tabb:as", "tab:alb", "tab:fin", "tab:main2",
        "tab:main3",
    ] {
        let (_, rows, covered, oos) = rep.tables.iter().find(|t| t.0 == name).unwrap_or_else(|| panic!("{name}"));
        assert_eq!(covered + oos, *rows, "{name}");
        assert!(*rows > 0, "{name}");
    }
}

#[test]
fn errata_are_applied() {
    let s = set();
    assert_eq!(s.action("tab:mr22:4").unwrap().gamma.as_deref(), Some("11/14"));
    assert_eq!(s.action("tab:nonmr:14").unwrap().gamma.as_deref(), Some("5/7"));
    assert_eq!(s.action("tab:nonmr:11").unwrap().target, vec!["t2".to_string()]);
    for e in &s.errata {
        assert!(s.action(&e.row).is_some(), "{}", e.row);
        assert_ne!(e.printed, e.corrected);
    }
}

#[test]
fn stored_gammas_match_recomputed() {
    let s = set();
    for a in s.actions() {
        if let Some(g) = &a.gamma {
            assert_eq!(a.recomputed_gamma(&s.involutions).unwrap(), parse_rational(g).unwrap(), "{}", a.id);
        }
    }
    for p in s.parabolics() {
        if let Some(g) = &p.gamma {
            assert_eq!(p.recomputed_gamma(&s.chis).unwrap(), parse_rational(g).unwrap(), "{}", p.id);
        }
    }
}

#[test]
fn engine_chis_reproduce() {
    let s = set();
    for c in s.chis.iter().filter(|c| c.source == ChiSource::Engine) {
        let spec = ParabolicActionSpec::parse(c.family, &c.parabolic).unwrap();
        let inv = s.involutions.find(c.family, &c.class).unwrap();
        let got = CharacterSum::for_class(&spec, inv).unwrap().symbolic(3, 2).unwrap();
        assert_eq!(got, c.poly, "{}", c.id);
    }
}

#[test]
fn printed_chis_agree_with_the_engine_where_it_applies() {
    // the engine handles odd q; the printed odd-q polynomials must agree with it
    let s = set();
    for c in s.chis.iter().filter(|c| c.source == ChiSource::Printed && c.parity == ifix::lieorders::Parity::Odd) {
        let Ok(spec) = ParabolicActionSpec::parse(c.family, &c.parabolic) else { continue };
        let Some(inv) = s.involutions.find(c.family, &c.class) else { continue };
        let Ok(cs) = CharacterSum::for_class(&spec, inv) else { continue };
        for q in [3i64, 5, 7, 9, 11, 13].into_iter().filter(|&q| c.applies(q as u64)) {
            let q = BigInt::from(q);
            assert_eq!(cs.value(&q).unwrap(), c.poly.eval(&q), "{} at {q}", c.id);
        }
    }
}

#[test]
fn parabolic_indices_from_stabilizers_match_weyl_indices() {
    let s = set();
    for p in s.parabolics().filter(|p| p.stabilizer.is_some()) {
        let Ok(spec) = ParabolicActionSpec::parse(p.family, &p.parabolic) else { continue };
        let Ok(w) = ifix::fixity::parabolic_index_poly(&spec) else { continue };
        assert_eq!(p.index_poly().unwrap(), w, "{}", p.id);
    }
}

#[test]
fn affine_group_has_91_involutions() {
    // H_0 = AGL3(2) for the exotic local row of G2
    let gens = load_generators(&data_dir()).unwrap();
    let spec = gens.iter().find(|g| g.id == "AGL3(2)").unwrap();
    let g = MatGroup::from_spec(spec, ELEMENT_CAP).unwrap();
    assert_eq!(g.order(), 1344);
    assert_eq!(g.i2(), 91);
    let row = set().action("tabb:loc:1").unwrap();
    assert_eq!(row.h0, "1344");
    assert_eq!(row.count, vec!["91".to_string()]);
}

#[test]
fn oracle_cases_pass() {
    let gens = load_generators(&data_dir()).unwrap();
    for c in set().oracle_cases() {
        let e = c.evaluate(&gens).unwrap();
        assert!(e.passes, "{e:?}");
    }
}

#[test]
fn power_comparisons() {
    let r = |s: &str| parse_rational(s).unwrap();
    let b = |x: u64| BigInt::from(x);
    // 4 = 28^0.416..
    assert!(power_cmp(&b(4), &b(28), &r("0.416")).is_gt());
    assert!(power_cmp(&b(4), &b(28), &r("0.417")).is_lt());
    assert!(power_cmp(&b(8), &b(64), &BigRational::new(1.into(), 2.into())).is_eq());
    assert!(!alpha_holds(&b(8), &b(64), &r("1/2")));
    assert!(alpha_holds(&b(1), &b(9), &r("0")));
    assert!(!alpha_holds(&b(0), &b(9), &r("0")));
}

#[test]
fn malformed_rows_are_rejected() {
    let dir = std::env::temp_dir().join(format!("ifix-bad-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(dir.join("tables")).unwrap();
    let src = data_dir();
    for f in ["involution_classes.json", "dimensions.json", "chi_polys.json", "errata.json", "coverage.json"] {
        std::fs::copy(src.join(f), dir.join(f)).unwrap();
    }
    for e in std::fs::read_dir(src.join("tables")).unwrap() {
        let p = e.unwrap().path();
        std::fs::copy(&p, dir.join("tables").join(p.file_name().unwrap())).unwrap();
    }
    assert!(FixtureSet::load(&dir).is_ok());
    // a wrong gamma is caught when the set is loaded
    let path = dir.join("tables/tabb_par.json");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replacen("\"2/5\"", "\"3/7\"", 1)).unwrap();
    assert!(FixtureSet::load(&dir).is_err());
    std::fs::write(&path, text).unwrap();
    // an erratum whose printed value is not in the row is an error
    let path = dir.join("errata.json");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replacen("13/16", "13/17", 1)).unwrap();
    assert!(FixtureSet::load(&dir).is_err());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn chi_polys_serialize_as_coefficient_arrays() {
    let c = &set().chis[0];
    let v = serde_json::to_value(c).unwrap();
    assert!(v["poly"].is_array());
    let back: ChiFixture = serde_json::from_value(v).unwrap();
    assert_eq!(&back, c);
    assert_eq!(QPoly::from_i64s(&[2, 3, 1]), set().chis.iter().find(|c| c.id == "chi:G2:P1:t1").unwrap().poly);
    assert_eq!(c.family, Exceptional::G2);
}
