//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ifix::algdim::gamma;
use ifix::fixity::{cached_weyl_group, parabolic_index_poly, parse_rational, CharacterSum, FixityError, ParabolicActionSpec};
use ifix::fixtures::{data_dir, load_generators, power_cmp, FixtureSet};
use ifix::lieorders::{i2_closed_form, Exceptional, I2Family};
use ifix::oracle::{burnside_check, coset_action, ifix_exact, MatGroup, ELEMENT_CAP};
use ifix::qpoly::QPoly;
use ifix::rootdata::Twist;
use num_bigint::BigInt;
use num_rational::BigRational;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn group(id: &str) -> MatGroup {
    let specs = load_generators(&data_dir()).unwrap();
    MatGroup::from_spec(specs.iter().find(|s| s.id == id).unwrap(), ELEMENT_CAP).unwrap()
}

fn prod(fs: &[&str]) -> QPoly {
    fs.iter().map(|f| QPoly::parse(f).unwrap()).product()
}

const ENGINE: [Exceptional; 5] =
    [Exceptional::G2, Exceptional::F4, Exceptional::E6, Exceptional::E6Twisted, Exceptional::E7];

fn engine_parabolics(f: Exceptional) -> Vec<Vec<usize>> {
    match f {
        Exceptional::E6Twisted => vec![vec![2], vec![4], vec![1, 6], vec![3, 5]],
        Exceptional::G2 => vec![vec![1], vec![2], vec![1, 2]],
        _ => (1..=f.root_family().rank()).map(|i| vec![i]).collect(),
    }
}

fn small_table(set: &FixtureSet) -> Check {
    let gens = load_generators(&set.dir).map_err(|e| e.to_string())?;
    let want = [("tab:small:1", 28, 4), ("tab:small:2", 36, 4), ("tab:small:3", 28, 4), ("tab:small:4", 9, 1)];
    let mut out = Vec::new();
    for (id, n, ifix) in want {
        let case = set.oracle_cases().find(|c| c.id == id).ok_or(format!("{id} missing"))?;
        let e = case.evaluate(&gens).map_err(|e| e.to_string())?;
        ensure(e.passes && (e.n, e.ifix) == (n, ifix), format!("{id}: n = {}, ifix = {}", e.n, e.ifix))?;
        out.push(format!("{} n={} ifix={}", case.group, e.n, e.ifix));
    }
    Ok(out.join("; "))
}

fn suzuki_borel() -> Check {
    let g = group("Sz(8)");
    let h = g.subgroup_from_spec("sylow-normalizer:2").map_err(|e| e.to_string())?;
    let a = coset_action(&g, &h).map_err(|e| e.to_string())?;
    let ifix = ifix_exact(&g, &a).0;
    ensure((a.n, ifix) == (65, 1) && burnside_check(&g, &a), format!("n = {}, ifix = {ifix}", a.n))?;
    Ok(format!("n={} ifix={ifix}", a.n))
}

fn engine_interpolation(set: &FixtureSet) -> Check {
    let cases: [(Exceptional, &str, &str, i64, i64, QPoly); 4] = [
        (Exceptional::F4, "P1", "t4", 3, 2, prod(&["q^4 + q^2 + 1", "q^4 + 1", "q^2 + 1", "q + 1"])),
        (Exceptional::E6Twisted, "P1,6", "t1", 3, 2, prod(&["q^7 + q^4 + q^3 + q + 2", "q^5 + 1", "q^2 + 1"])),
        (
            Exceptional::E7,
            "P2",
            "t7",
            5,
            4,
            prod(&["2", "q^6 + q^3 + 1", "q^6 + 1", "q^4 + q^2 + 2", "q^4 + 1", "q^3 + 1", "q^2 + q + 1"]),
        ),
        (
            Exceptional::E7,
            "P2",
            "t1",
            3,
            4,
            prod(&[
                "q^6 + 2q^4 + q^3 + 2q^2 + 3",
                "q^4 - q^3 + q^2 - q + 1",
                "q^4 + 1",
                "q^3 + 1",
                "q^2 + 1",
                "q + 1",
                "q + 1",
                "q + 1",
            ]),
        ),
    ];
    let mut degs = Vec::new();
    for (f, p, class, start, step, want) in cases {
        let spec = ParabolicActionSpec::parse(f, p).map_err(|e| e.to_string())?;
        let inv = set.involutions.find(f, class).ok_or(format!("{f} {class}"))?;
        let cs = CharacterSum::for_class(&spec, inv).map_err(|e| e.to_string())?;
        // symbolic() already checks two points past the interpolation nodes
        let got = cs.symbolic(start, step).map_err(|e| e.to_string())?;
        ensure(got == want, format!("{f} {p} {class}: {got}"))?;
        let far = BigInt::from(start + 40 * step);
        ensure(cs.value(&far).map_err(|e| e.to_string())? == want.eval(&far), format!("{f} {p} {class} at {far}"))?;
        degs.push(format!("{f} {p} {class} deg {}", got.degree().unwrap_or(0)));
    }
    Ok(degs.join("; "))
}

fn identity_index() -> Check {
    let mut count = 0;
    for f in ENGINE {
        for removed in engine_parabolics(f) {
            let spec = ParabolicActionSpec::new(f, &removed);
            let id = CharacterSum::identity(&spec).map_err(|e| e.to_string())?;
            let n = parabolic_index_poly(&spec).map_err(|e| e.to_string())?;
            for q in [3u64, 5, 7] {
                let q = BigInt::from(q);
                let v = id.value(&q).map_err(|e| format!("{f} {}: {e}", spec.label()))?;
                ensure(v == n.eval(&q), format!("{f} {} at {q}: {v} vs {}", spec.label(), n.eval(&q)))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} (action, q) pairs"))
}

fn gammas(set: &FixtureSet) -> Check {
    let want = ["2/5", "2/5", "1/3", "4/9", "4/11", "5/11", "1/3"];
    let mut got = Vec::new();
    for (i, w) in want.iter().enumerate() {
        let id = format!("tabb:par:{}", i + 1);
        let p = set.parabolic(&id).ok_or(format!("{id} missing"))?;
        let g = p.recomputed_gamma(&set.chis).map_err(|e| e.to_string())?;
        ensure(g == parse_rational(w).unwrap(), format!("{id}: {g}"))?;
        got.push(g.to_string());
    }
    let mut beta = 0;
    for table in ["tab:alb", "tab:fin"] {
        let t = set.table(table).ok_or(format!("{table} missing"))?;
        for a in &t.actions {
            let stored = parse_rational(a.gamma.as_deref().ok_or(format!("{} has no gamma", a.id))?).unwrap();
            let g = a.recomputed_gamma(&set.involutions).map_err(|e| e.to_string())?;
            ensure(g == stored, format!("{}: {g} vs {stored}", a.id))?;
            beta += 1;
        }
    }
    Ok(format!("tabb:par ({}); {beta} tab:alb/tab:fin rows", got.join(", ")))
}

fn i2_checks() -> Check {
    let l = group("L2(8)").i2();
    let s = group("Sz(8)").i2();
    ensure(l == 63 && s == 455, format!("L2(8) {l}, Sz(8) {s}"))?;
    // L2(8) = 2G2(3)'
    ensure(BigInt::from(l) == i2_closed_form(I2Family::Ree).eval_i64(3), "Ree closed form")?;
    ensure(BigInt::from(s) == i2_closed_form(I2Family::Suzuki).eval_i64(8), "Suzuki closed form")?;
    Ok(format!("L2(8) {l}, Sz(8) {s}"))
}

fn main3(set: &FixtureSet) -> Check {
    let want = ["58/119", "17/35", "31/65", "9/19", "23/49", "2/5", "2/5", "5/11"];
    ensure(set.dims.len() == want.len(), format!("{} rows", set.dims.len()))?;
    for (r, w) in set.dims.iter().zip(want) {
        let g = gamma(r, &set.involutions).map_err(|e| e.to_string())?;
        ensure(g == parse_rational(w).unwrap(), format!("{}: {g}", r.id))?;
    }
    Ok("8/8 rows".into())
}

fn ree_f4(set: &FixtureSet) -> Check {
    let p = set.parabolic("tab:par3:2F4-P14").ok_or("2F4 P14 missing")?;
    let chi = set.chis.iter().find(|c| c.id == "chi:2F4:P14:(~A1)2").ok_or("chi missing")?;
    let q = BigInt::from(8);
    ensure(chi.poly == QPoly::parse("q^6+q^4+q^3+q+1").unwrap(), format!("chi = {}", chi.poly))?;
    let x = chi.poly.eval(&q);
    let n = p.index_poly().map_err(|e| e.to_string())?.eval(&q);
    ensure(x == BigInt::from(266761), format!("chi(8) = {x}"))?;
    ensure(n == BigInt::from(1210323465u64), format!("n = {n}"))?;
    let e = p.evaluate(&set.chis, 8).map_err(|e| e.to_string())?;
    ensure(e.ifix == x, format!("ifix = {}", e.ifix))?;
    let a = BigRational::new(597.into(), 1000.into());
    ensure(power_cmp(&x, &n, &a).is_gt(), "266761 <= n^0.597")?;
    Ok(format!("ifix {x}, n {n}, log ratio {:.4}", e.log_ratio))
}

fn gate(set: &FixtureSet) -> Check {
    let start = Instant::now();
    let reports = set.gate(3);
    let failing: Vec<String> = reports.iter().filter(|r| !r.passes()).map(|r| format!("{}: {:?}", r.id, r.errors)).collect();
    ensure(failing.is_empty(), failing.join("; "))?;
    ensure(reports.iter().all(|r| !r.skipped), "skipped rows")?;
    let cov = set.coverage_report();
    ensure(cov.ok(), cov.problems.join("; "))?;
    let tables = [
        "tabb:par", "tab:main", "tab:mr", "tab:nonmr", "tabb:loc", "tabb:sub", "tabb:as", "tab:alb", "tab:fin", "tab:main2",
        "tab:main3",
    ];
    let mut rows = 0;
    for t in tables {
        let (_, n, covered, oos) = cov.tables.iter().find(|x| x.0 == t).ok_or(format!("{t} not in the manifest"))?;
        ensure(covered + oos == *n, format!("{t}: {covered} + {oos} of {n}"))?;
        rows += n;
    }
    let evals: usize = reports.iter().map(|r| r.evaluations.len() + r.parabolic.len()).sum();
    let took = start.elapsed();
    ensure(took < Duration::from_secs(600), format!("took {took:?}"))?;
    Ok(format!("{} fixtures, {evals} evaluations, {rows} table rows covered, {:.1}s", reports.len(), took.as_secs_f64()))
}

fn properties(set: &FixtureSet) -> Check {
    // sigma-class partition and torus degrees
    for f in ENGINE {
        let wg = cached_weyl_group(f.root_family()).map_err(|e| e.to_string())?;
        let rs = &wg.rs;
        let twist = if f == Exceptional::E6Twisted { Twist::longest_word_twist(rs) } else { Twist::untwisted(rs) };
        for removed in engine_parabolics(f) {
            let kept: Vec<usize> = (1..=rs.rank).filter(|i| !removed.contains(i)).collect();
            let wp = rs.parabolic_weyl(&kept);
            let data = wg.sigma_class_data(&wp, &twist);
            ensure(data.iter().map(|d| d.coset_count).sum::<u64>() == wp.len() as u64, format!("{f} {removed:?} partition"))?;
            for d in &data {
                ensure(d.torus_poly.degree() == Some(rs.rank), format!("{f} class {} torus degree", d.class))?;
            }
        }
    }
    // Burnside on every oracle action
    let gens = load_generators(&set.dir).map_err(|e| e.to_string())?;
    for c in set.oracle_cases() {
        ensure(c.evaluate(&gens).map_err(|e| e.to_string())?.burnside, format!("{} Burnside", c.id))?;
    }
    // chi(t) nonnegative integers for q <= 13
    let mut n = 0;
    for f in ENGINE {
        for removed in engine_parabolics(f) {
            let spec = ParabolicActionSpec::new(f, &removed);
            for inv in set.involutions.records.iter().filter(|r| r.family() == f) {
                let cs = match CharacterSum::for_class(&spec, inv) {
                    Ok(cs) => cs,
                    Err(FixityError::NoPseudoLevi(_) | FixityError::Unsupported(_)) => continue,
                    Err(e) => return Err(e.to_string()),
                };
                for q in [3u64, 5, 7, 9, 11, 13] {
                    if set.involutions.classes_at(f, q).iter().any(|c| c.label() == inv.label()) {
                        cs.value(&BigInt::from(q)).map_err(|e| format!("{f} {} {} q={q}: {e}", spec.label(), inv.label()))?;
                        n += 1;
                    }
                }
            }
        }
    }
    Ok(format!("partition, torus degree, Burnside, {n} chi values"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let set = match FixtureSet::load_default() {
        Ok(s) => s,
        Err(e) => {
            println!("FAIL  fixtures do not load: {e}");
            return ExitCode::FAILURE;
        }
    };
    let criteria: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("1 small table via the oracle", Box::new(|| small_table(&set))),
        ("2 Sz(8) on the Borel cosets", Box::new(suzuki_borel)),
        ("3 character sum engine, four polynomials", Box::new(|| engine_interpolation(&set))),
        ("4 chi(1) = |G:P| at q = 3, 5, 7", Box::new(identity_index)),
        ("5 gamma and beta from encoded polynomials", Box::new(|| gammas(&set))),
        ("6 i2 cross-checks", Box::new(i2_checks)),
        ("7 fixed-subvariety dimension ratios", Box::new(|| main3(&set))),
        ("8 2F4(8) on P_{1,4}", Box::new(|| ree_f4(&set))),
        ("9 fixture gate and coverage", Box::new(|| gate(&set))),
        ("10 property suites", Box::new(|| properties(&set))),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let res = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match res {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{}/{} criteria pass in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
