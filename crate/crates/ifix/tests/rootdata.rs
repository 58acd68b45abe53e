use std::collections::HashSet;
use std::time::Instant;

use ifix::qpoly::QPoly;
use ifix::rootdata::{build_root_system, weyl_group, Family, RootRef, Twist};

/// Independent root count oracle: positive roots are the vectors of the form
/// `w(alpha_i)` with nonnegative coefficients, found by closing the simple roots under
/// the rule "beta + alpha_i is a root iff the alpha_i-string through beta continues".
fn string_rule_positive_roots(a: &[Vec<i64>]) -> usize {
    let r = a.len();
    let mut roots: HashSet<Vec<i64>> = HashSet::new();
    let mut layer: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|k| i64::from(k == i)).collect()).collect();
    roots.extend(layer.iter().cloned());
    while !layer.is_empty() {
        let mut next = Vec::new();
        for b in &layer {
            for i in 0..r {
                // p = how far down the alpha_i string goes from b
                let mut p = 0;
                loop {
                    let mut c = b.clone();
                    c[i] -= p + 1;
                    if roots.contains(&c) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = (0..r).map(|j| a[i][j] * b[j]).sum();
                // q - p = -<alpha_i^vee, b>
                if p - pairing > 0 {
                    let mut c = b.clone();
                    c[i] += 1;
                    if roots.insert(c.clone()) {
                        next.push(c);
                    }
                }
            }
        }
        layer = next;
    }
    roots.len()
}

#[test]
fn root_counts_match_string_rule() {
    for (fam, n) in [
        (Family::A(1), 2),
        (Family::A(3), 12),
        (Family::B(3), 18),
        (Family::C(3), 18),
        (Family::D(4), 24),
        (Family::G2, 12),
        (Family::F4, 48),
        (Family::E6, 72),
        (Family::E7, 126),
        (Family::E8, 240),
    ] {
        let rs = build_root_system(fam);
        assert_eq!(rs.num_roots(), n, "{fam}");
        assert_eq!(2 * string_rule_positive_roots(&rs.cartan), n, "{fam}");
        for v in &rs.roots {
            assert!(v.iter().all(|&c| c >= 0) || v.iter().all(|&c| c <= 0));
            let neg: Vec<i64> = v.iter().map(|c| -c).collect();
            assert!(rs.index_of(&neg).is_some());
        }
    }
}

#[test]
fn highest_roots() {
    let f4 = build_root_system(Family::F4);
    assert_eq!(f4.roots[f4.highest_root], vec![2, 3, 4, 2]);
    let e6 = build_root_system(Family::E6);
    assert_eq!(e6.roots[e6.highest_root], vec![1, 2, 2, 3, 2, 1]);
    let e7 = build_root_system(Family::E7);
    assert_eq!(e7.roots[e7.highest_root], vec![2, 2, 3, 4, 3, 2, 1]);
}

#[test]
fn small_weyl_groups() {
    let w = weyl_group(build_root_system(Family::A(1))).unwrap();
    assert_eq!(w.order(), 2);
    let g2 = weyl_group(build_root_system(Family::G2)).unwrap();
    assert_eq!(g2.order(), 12);
    assert_eq!(g2.conjugacy_classes().len(), 6);
    let d4 = weyl_group(build_root_system(Family::D(4))).unwrap();
    assert_eq!(d4.order(), 192);
    assert_eq!(d4.conjugacy_classes().len(), 13);
    let f4 = weyl_group(build_root_system(Family::F4)).unwrap();
    assert_eq!(f4.order(), 1152);
    assert_eq!(f4.conjugacy_classes().len(), 25);
    assert_eq!(f4.conjugacy_classes().iter().map(|c| c.size).sum::<u64>(), 1152);
}

#[test]
fn e8_is_rejected() {
    assert!(weyl_group(build_root_system(Family::E8)).is_err());
}

#[test]
fn parabolic_and_reflection_subgroups() {
    let f4 = build_root_system(Family::F4);
    assert_eq!(f4.parabolic_weyl(&[]).len(), 1);
    assert_eq!(f4.parabolic_weyl(&[2, 3, 4]).len(), 48);
    let j: Vec<RootRef> = ["a1", "a2", "a3", "a0"].iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(f4.reflection_subgroup(&j).len(), 384);
    let e6 = build_root_system(Family::E6);
    assert_eq!(e6.parabolic_weyl(&[1, 3, 4, 5, 6]).len(), 720);
    let j: Vec<RootRef> = ["a2", "a3", "a4", "a5", "a0"].iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(e6.reflection_subgroup(&j).len(), 1920);
}

#[test]
fn longest_words() {
    for fam in [Family::G2, Family::B(2), Family::D(4), Family::F4, Family::E7] {
        let rs = build_root_system(fam);
        let w0 = rs.longest_word();
        let m = rs.matrix(w0);
        for (i, row) in m.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                assert_eq!(c, if i == j { -1 } else { 0 }, "{fam}: w0 should be -1");
            }
        }
        assert_eq!(rs.length(w0), rs.npos);
    }
    let e6 = build_root_system(Family::E6);
    let w0 = e6.longest_word();
    assert_eq!(e6.compose(w0, w0), e6.identity());
    assert_eq!(e6.length(w0), 36);
    // -w0 is the diagram symmetry 1<->6, 3<->5
    let sigma = [6, 2, 5, 4, 3, 1];
    for i in 0..6 {
        let im = e6.image(w0, i);
        assert_eq!(e6.neg(im), sigma[i] - 1);
    }
}

#[test]
fn g2_torus_polynomials() {
    let rs = build_root_system(Family::G2);
    let w = weyl_group(rs.clone()).unwrap();
    let wp = rs.parabolic_weyl(&[1]);
    let data = w.sigma_class_data(&wp, &Twist::untwisted(&rs));
    let polys: Vec<QPoly> = data.iter().map(|d| d.torus_poly.clone()).collect();
    assert!(polys.contains(&QPoly::from_i64s(&[1, -1, 1])));
    let id = data.iter().find(|d| d.size == 1 && d.torus_poly == QPoly::qk_minus(1, 1).pow(2)).unwrap();
    assert_eq!(id.rel_rank, 2);
    let cox = data.iter().find(|d| d.torus_poly == QPoly::from_i64s(&[1, -1, 1])).unwrap();
    assert_eq!(cox.rel_rank, 0);
    assert_eq!(data.iter().map(|d| d.coset_count).sum::<u64>(), 2);
}

#[test]
fn e7_enumeration_and_classes() {
    let start = Instant::now();
    let w = weyl_group(build_root_system(Family::E7)).unwrap();
    assert_eq!(w.order(), 2_903_040);
    assert_eq!(w.conjugacy_classes().len(), 60);
    assert_eq!(w.conjugacy_classes().iter().map(|c| c.size).sum::<u64>(), 2_903_040);
    eprintln!("E7 Weyl group and classes in {:?}", start.elapsed());
}
