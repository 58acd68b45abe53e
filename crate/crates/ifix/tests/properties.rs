use std::sync::OnceLock;

use ifix::fixity::{cached_weyl_group, fix_points, parabolic_index_poly, CharacterSum, FixityError, ParabolicActionSpec};
use ifix::fixtures::{data_dir, load_generators, load_involution_table};
use ifix::lieorders::{Exceptional, InvolutionTable};
use ifix::oracle::{burnside_check, coset_action, ifix_exact, MatGroup, ELEMENT_CAP};
use ifix::qpoly::QPoly;
use ifix::rootdata::{Family, Twist, WeylGroup};
use num_bigint::BigInt;
use proptest::prelude::*;

const ENGINE: [Exceptional; 5] =
    [Exceptional::G2, Exceptional::F4, Exceptional::E6, Exceptional::E6Twisted, Exceptional::E7];

fn table() -> &'static InvolutionTable {
    static T: OnceLock<InvolutionTable> = OnceLock::new();
    T.get_or_init(|| load_involution_table(&data_dir()).unwrap())
}

fn weyl(f: Exceptional) -> &'static WeylGroup {
    cached_weyl_group(f.root_family()).unwrap()
}

fn twist(f: Exceptional, wg: &WeylGroup) -> Twist {
    if f == Exceptional::E6Twisted {
        Twist::longest_word_twist(&wg.rs)
    } else {
        Twist::untwisted(&wg.rs)
    }
}

/// Node sets closed under the graph symmetry used by the twist.
fn stable_removed(f: Exceptional, mask: u32) -> Vec<usize> {
    let rank = f.root_family().rank();
    let mut out: Vec<usize> = (1..=rank).filter(|i| mask & (1 << (i - 1)) != 0).collect();
    if f == Exceptional::E6Twisted {
        let swap = |i: usize| match i {
            1 => 6,
            6 => 1,
            3 => 5,
            5 => 3,
            x => x,
        };
        let extra: Vec<usize> = out.iter().map(|&i| swap(i)).collect();
        out.extend(extra);
        out.sort_unstable();
        out.dedup();
    }
    if out.is_empty() {
        out.push(1);
    }
    out
}

fn family_strategy() -> impl Strategy<Value = Exceptional> {
    prop::sample::select(ENGINE.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    /// The twisted classes partition `W_P w*^{-1}`, and the classes partition `W`.
    #[test]
    fn sigma_classes_partition(f in family_strategy(), mask in 1u32..128) {
        let wg = weyl(f);
        let rs = &wg.rs;
        let removed = stable_removed(f, mask & ((1 << rs.rank) - 1));
        let kept: Vec<usize> = (1..=rs.rank).filter(|i| !removed.contains(i)).collect();
        let wp = rs.parabolic_weyl(&kept);
        let data = wg.sigma_class_data(&wp, &twist(f, wg));
        prop_assert_eq!(data.iter().map(|d| d.coset_count).sum::<u64>(), wp.len() as u64);
        prop_assert_eq!(data.iter().map(|d| d.size).sum::<u64>(), wg.order());
        for d in &data {
            prop_assert!(d.coset_count <= d.size);
        }
        // |W_P| is the product of its degrees, and divides |W|
        prop_assert_eq!(wg.order() % wp.len() as u64, 0);
    }

    /// For transitive actions: the average number of fixed points is one, and every
    /// involution class fixes `n |t^G cap H| / |t^G|` points.
    #[test]
    fn burnside_on_oracle_actions(gi in 0usize..3, x in any::<prop::sample::Index>(), y in any::<prop::sample::Index>(), two in any::<bool>()) {
        let g = oracle_group(gi);
        let mut gens = vec![x.index(g.order())];
        if two {
            gens.push(y.index(g.order()));
        }
        let h = g.subgroup(&gens);
        let a = coset_action(g, &h).unwrap();
        prop_assert_eq!(a.n * h.order(), g.order());
        let total: usize = (0..g.order()).map(|e| a.fix(g, e)).sum();
        prop_assert_eq!(total, g.order());
        prop_assert!(burnside_check(g, &a));
        let (ifix, per) = ifix_exact(g, &a);
        for c in &per {
            let formula = fix_points(&BigInt::from(c.class_in_h), &BigInt::from(c.class_size), &BigInt::from(a.n)).unwrap();
            prop_assert_eq!(formula, BigInt::from(c.fix));
        }
        prop_assert_eq!(ifix, g.involutions().iter().map(|&t| a.fix(g, t)).max().unwrap());
    }
}

fn oracle_group(i: usize) -> &'static MatGroup {
    static GROUPS: OnceLock<Vec<MatGroup>> = OnceLock::new();
    let groups = GROUPS.get_or_init(|| {
        let specs = load_generators(&data_dir()).unwrap();
        ["L2(8)", "AGL3(2)", "U3(3)"]
            .iter()
            .map(|id| MatGroup::from_spec(specs.iter().find(|s| s.id == *id).unwrap(), ELEMENT_CAP).unwrap())
            .collect()
    });
    &groups[i]
}

/// Every twisted class gives a torus of degree equal to the rank, nonzero for small `q`.
#[test]
fn torus_degree_is_rank() {
    for f in ENGINE {
        let wg = weyl(f);
        let rank = wg.rs.rank;
        let data = wg.sigma_class_data(&[wg.rs.identity()], &twist(f, wg));
        for d in &data {
            assert_eq!(d.torus_poly.degree(), Some(rank), "{f} class {}", d.class);
            for q in 2..=9 {
                assert!(d.torus_poly.eval_i64(q) > BigInt::from(0), "{f} class {} at {q}", d.class);
            }
            assert!(d.rel_rank as usize <= rank);
        }
    }
    // split torus of E6; for the twisted group, w* = w_0 is absorbed, so the identity
    // class gives (q+1)^6 and the class of w_0 the quasi-split torus
    let e6 = weyl(Exceptional::E6);
    let (id, w0) = (e6.rs.identity(), e6.rs.longest_word());
    let (qm, qp) = (QPoly::from_i64s(&[-1, 1]), QPoly::from_i64s(&[1, 1]));
    let split = e6.rs.torus_poly(&Twist::untwisted(&e6.rs).frobenius_matrix(&e6.rs, id));
    assert_eq!(split, qm.pow(6));
    let tw = Twist::longest_word_twist(&e6.rs);
    assert_eq!(e6.rs.torus_poly(&tw.frobenius_matrix(&e6.rs, id)), qp.pow(6));
    assert_eq!(e6.rs.torus_poly(&tw.frobenius_matrix(&e6.rs, w0)), qm.pow(4) * qp.pow(2));
}

fn parabolics(f: Exceptional) -> Vec<Vec<usize>> {
    let rank = f.root_family().rank();
    match f {
        Exceptional::E6Twisted => vec![vec![2], vec![4], vec![1, 6], vec![3, 5], vec![1, 2, 6]],
        _ => {
            let mut v: Vec<Vec<usize>> = (1..=rank).map(|i| vec![i]).collect();
            v.push(vec![1, rank]);
            if f == Exceptional::G2 {
                v.pop();
                v.push(vec![1, 2]);
            }
            v
        }
    }
}

/// `chi(t)` is a nonnegative integer at most `n` for every class the engine handles,
/// every implemented parabolic and every odd `q <= 13`.
#[test]
fn chi_values_are_nonnegative_integers() {
    let t = table();
    let mut evaluated = 0usize;
    for f in ENGINE {
        for removed in parabolics(f) {
            let spec = ParabolicActionSpec::new(f, &removed);
            let n = parabolic_index_poly(&spec).unwrap();
            let qs: Vec<u64> = [3u64, 5, 7, 9, 11, 13].into_iter().filter(|&q| f.admissible(q)).collect();
            let mut labels: Vec<&str> = qs.iter().flat_map(|&q| t.classes_at(f, q)).map(|c| c.label()).collect();
            labels.sort_unstable();
            labels.dedup();
            for label in labels {
                let inv = t.find(f, label).unwrap();
                let cs = match CharacterSum::for_class(&spec, inv) {
                    Ok(cs) => cs,
                    Err(FixityError::NoPseudoLevi(_) | FixityError::Unsupported(_)) => continue,
                    Err(e) => panic!("{f} {} {label}: {e}", spec.label()),
                };
                for &q in qs.iter().filter(|&&q| t.classes_at(f, q).iter().any(|c| c.label() == label)) {
                    let qb = BigInt::from(q);
                    let v = cs.value(&qb).unwrap_or_else(|e| panic!("{f} {} {label} q={q}: {e}", spec.label()));
                    assert!(v <= n.eval(&qb), "{f} {} {label} q={q}", spec.label());
                    evaluated += 1;
                }
            }
        }
    }
    assert!(evaluated > 300, "only {evaluated} evaluations");
    assert!(matches!(weyl(Exceptional::G2).rs.family, Family::G2));
}
