use ifix::lieorders::*;
use ifix::qpoly::QPoly;
use num_bigint::BigInt;

fn table() -> InvolutionTable {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/involution_classes.json");
    InvolutionTable::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn loads_and_validates() {
    let t = table();
    assert_eq!(t.records.len(), 42);
    // E7, q odd: three classes in T for either residue of q mod 4
    assert_eq!(t.classes_at(Exceptional::E7, 5).len(), 3);
    assert_eq!(t.classes_at(Exceptional::E7, 7).len(), 3);
    assert!(t.classes_at(Exceptional::G2, 2).is_empty());
}

#[test]
fn group_orders() {
    assert_eq!(Exceptional::G2.simple_order(3), BigInt::from(4245696u64));
    assert_eq!(Exceptional::E6Twisted.simple_order(2), "76532479683774853939200".parse::<BigInt>().unwrap());
    assert_eq!(Exceptional::D4Triality.simple_order(2), BigInt::from(211341312u64));
    assert_eq!(Exceptional::B2Twisted.simple_order(8), BigInt::from(29120));
    assert_eq!(Exceptional::G2Twisted.simple_order(27), BigInt::from(10073444472u64));
    assert_eq!(Exceptional::F4Twisted.simple_order(8), "264905352699586176614400".parse::<BigInt>().unwrap());
    assert_eq!(Exceptional::E7.inndiag_index(5), 2);
}

#[test]
fn suzuki_and_ree_counts_match_table() {
    let t = table();
    for q in [8u64, 32, 128] {
        let closed = i2_closed_form(I2Family::Suzuki).eval(&BigInt::from(q));
        assert_eq!(t.i2(Exceptional::B2Twisted, q).unwrap(), closed);
    }
    for q in [27u64, 243] {
        let closed = i2_closed_form(I2Family::Ree).eval(&BigInt::from(q));
        assert_eq!(t.i2(Exceptional::G2Twisted, q).unwrap(), closed);
    }
}

#[test]
fn pgl3_counts() {
    // q^2(q^2+eq+1) for odd q; PGU3(2) has 9 involutions
    let p = i2_closed_form(I2Family::Pgl3 { eps: 1, parity: Parity::Odd });
    assert_eq!(p, QPoly::from_i64s(&[0, 0, 1, 1, 1]));
    let p = i2_closed_form(I2Family::Pgl3 { eps: -1, parity: Parity::Even });
    assert_eq!(p.eval_i64(2), BigInt::from(9));
}

#[test]
fn long_root_classes() {
    assert_eq!(long_root_class_size(ClassicalKind::Symplectic, 4, 2).unwrap(), BigInt::from(15));
    // L2(4): (q-1)(q^2-1)/(q-1) = 15
    assert_eq!(long_root_class_size(ClassicalKind::Linear(1), 2, 4).unwrap(), BigInt::from(15));
    // Omega8+(2): 1575 long root involutions
    assert_eq!(long_root_class_size(ClassicalKind::Orthogonal(1), 8, 2).unwrap(), BigInt::from(1575));
    assert!(long_root_class_size(ClassicalKind::Symplectic, 4, 3).is_err());
}

#[test]
fn e7_flagged_class_sizes_are_halves() {
    let t = table();
    let r = t.find(Exceptional::E7, "t7").unwrap();
    let cs = r.class_size().unwrap();
    assert_eq!(cs.divisor, 2);
    assert!(cs.eval(5).is_ok());
}
