use ifix::fixity::*;
use ifix::lieorders::*;
use ifix::qpoly::QPoly;
use num_bigint::BigInt;

fn table() -> InvolutionTable {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/involution_classes.json");
    InvolutionTable::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn prod(fs: &[&str]) -> QPoly {
    fs.iter().map(|f| QPoly::parse(f).unwrap()).product()
}

fn interpolate(fam: Exceptional, p: &str, label: &str, start: i64, step: i64) -> QPoly {
    let t = table();
    let spec = ParabolicActionSpec::parse(fam, p).unwrap();
    let cs = CharacterSum::for_class(&spec, t.find(fam, label).unwrap()).unwrap();
    cs.symbolic(start, step).unwrap()
}

#[test]
fn f4_p1_t4() {
    let want = prod(&["q^4 + q^2 + 1", "q^4 + 1", "q^2 + 1", "q + 1"]);
    assert_eq!(interpolate(Exceptional::F4, "P1", "t4", 3, 2), want);
}

#[test]
fn twisted_e6_p16_t1() {
    let want = prod(&["q^7 + q^4 + q^3 + q + 2", "q^5 + 1", "q^2 + 1"]);
    assert_eq!(interpolate(Exceptional::E6Twisted, "P_{1,6}", "t1", 3, 2), want);
}

#[test]
fn e7_p2_t7_and_t1() {
    let want = prod(&["2", "q^6 + q^3 + 1", "q^6 + 1", "q^4 + q^2 + 2", "q^4 + 1", "q^3 + 1", "q^2 + q + 1"]);
    assert_eq!(interpolate(Exceptional::E7, "P2", "t7", 5, 4), want);
    let want = prod(&["q^6 + 2q^4 + q^3 + 2q^2 + 3", "q^4 - q^3 + q^2 - q + 1", "q^4 + 1", "q^3 + 1", "q^2 + 1", "q + 1", "q + 1", "q + 1"]);
    assert_eq!(interpolate(Exceptional::E7, "P2", "t1", 3, 4), want);
}

#[test]
fn identity_gives_the_degree() {
    let cases: &[(Exceptional, &str)] = &[
        (Exceptional::G2, "P1"),
        (Exceptional::G2, "P2"),
        (Exceptional::F4, "P1"),
        (Exceptional::F4, "P4"),
        (Exceptional::E6, "P1"),
        (Exceptional::E6, "P2"),
        (Exceptional::E6Twisted, "P2"),
        (Exceptional::E6Twisted, "P_{1,6}"),
        (Exceptional::E7, "P2"),
        (Exceptional::E7, "P7"),
    ];
    for &(fam, p) in cases {
        let spec = ParabolicActionSpec::parse(fam, p).unwrap();
        let id = CharacterSum::identity(&spec).unwrap();
        let index = parabolic_index_poly(&spec).unwrap();
        for q in [3u64, 5, 7] {
            let q = BigInt::from(q);
            let order = fam.order().eval(&q).unwrap();
            assert_eq!(id.value(&q).unwrap(), index.eval(&q), "{fam} {p}");
            // the index divides the group order
            assert!((&order % index.eval(&q)).eq(&BigInt::from(0)), "{fam} {p}");
        }
    }
}
