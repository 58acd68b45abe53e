use ifix::fixity::{abcd_check, almost_simple_exceeds, almost_simple_exponent, parse_rational, BoundInput};
use ifix::fixtures::load_involution_table;
use ifix::lieorders::Exceptional;
use num_bigint::BigInt;
use proptest::prelude::*;

fn input(a: u64, b: u64, c: u64, d: u64) -> BoundInput {
    BoundInput { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
}

#[test]
fn l4_3_in_f4_2() {
    let d = Exceptional::F4.simple_order(2);
    assert_eq!(d, BigInt::from(3311126603366400u64));
    let b = BoundInput { a: 2106.into(), b: (17u64 * 63 * 4095).into(), c: 12130560.into(), d };
    assert!(almost_simple_exceeds(&b, &parse_rational("3/5").unwrap()).unwrap());
    assert!(!almost_simple_exceeds(&b, &parse_rational("61/100").unwrap()).unwrap());
    assert!((almost_simple_exponent(&b).unwrap() - 0.6066).abs() < 1e-4);
}

#[test]
fn psp4_3_in_f4_3() {
    let t = load_involution_table(&ifix::fixtures::data_dir()).unwrap();
    let b = t.largest_class(Exceptional::F4, 3).unwrap();
    // q^14 (q^4+q^2+1)(q^4+1)(q^6+1) at q = 3
    assert_eq!(b, BigInt::from(26054075714940u64));
    let x = BoundInput { a: 270.into(), b, c: 51840.into(), d: Exceptional::F4.simple_order(3) };
    assert!(abcd_check(&x));
    assert!(almost_simple_exceeds(&x, &parse_rational("4/9").unwrap()).unwrap());
}

#[test]
fn degenerate() {
    let x = input(1, 1, 1, 1000);
    assert_eq!(almost_simple_exponent(&x).unwrap(), 1.0);
    assert!(almost_simple_exceeds(&x, &parse_rational("99/100").unwrap()).unwrap());
    assert!(almost_simple_exceeds(&x, &parse_rational("1").unwrap()).is_err());
    // a class of S cannot exceed |Aut(S)|
    assert!(almost_simple_exponent(&input(5, 1, 1, 1000)).is_err());
    assert!(almost_simple_exceeds(&input(5, 1, 1, 1000), &parse_rational("1/2").unwrap()).is_err());
}

proptest! {
    /// Agrees with comparing (d/c)^(1 - alpha) against b/a in floating point, away from ties.
    #[test]
    fn exact_matches_logs(a in 1u64..1000, b in 1u64..100_000, c in 1u64..1000, d in 1u64..10_000_000, num in 0u32..9) {
        prop_assume!(a <= c && b <= d && c < d);
        let alpha = parse_rational(&format!("{num}/9")).unwrap();
        let x = input(a, b, c, d);
        let lhs = (1.0 - num as f64 / 9.0) * ((d as f64).ln() - (c as f64).ln());
        let rhs = (b as f64).ln() - (a as f64).ln();
        prop_assume!((lhs - rhs).abs() > 1e-9);
        prop_assert_eq!(almost_simple_exceeds(&x, &alpha).unwrap(), lhs > rhs);
        if num == 4 {
            prop_assert_eq!(abcd_check(&x), lhs > rhs);
        }
    }
}
