use std::collections::BTreeSet;

use anyhow::{anyhow, bail, Context, Result};
use ifix::algdim::resolve;
use ifix::fixity::{
    almost_simple_exceeds, almost_simple_exponent, log_ratio, parabolic_index_poly, parse_rational, BoundInput,
    CharacterSum, FixityError, ParabolicActionSpec,
};
use ifix::fixtures::{load_generators, ChiFixture, FixtureSet, RowPoint, RowReport};
use ifix::lieorders::{Exceptional, InvolutionClassRecord};
use ifix::oracle::{burnside_check, coset_action, ifix_exact, MatGroup, ELEMENT_CAP};
use ifix::qpoly::QPoly;
use num_bigint::BigInt;

use crate::report::{Cell, Report};

const ENGINE: [Exceptional; 5] =
    [Exceptional::G2, Exceptional::F4, Exceptional::E6, Exceptional::E6Twisted, Exceptional::E7];

fn ratio(x: &BigInt, n: &BigInt) -> String {
    if *x <= BigInt::from(0) || *n <= BigInt::from(1) {
        return "-".into();
    }
    format!("{:.4}", log_ratio(x, n))
}

// ---------------------------------------------------------------------------
// parabolic

pub struct ParabolicArgs {
    pub group: Exceptional,
    pub nodes: Vec<usize>,
    pub borel: bool,
    pub class: Option<String>,
    pub q: Vec<u64>,
    pub symbolic: bool,
}

fn borel_nodes(f: Exceptional) -> Vec<usize> {
    match f {
        Exceptional::B2Twisted | Exceptional::G2Twisted => vec![1],
        _ => (1..=f.root_family().rank()).collect(),
    }
}

fn same_action(f: Exceptional, label: &str, nodes: &[usize]) -> bool {
    ParabolicActionSpec::parse(f, label).is_ok_and(|s| {
        let mut r = s.removed;
        r.sort_unstable();
        r == nodes
    })
}

/// An arithmetic progression of odd `q` on which the class occurs.
fn progression(inv: &InvolutionClassRecord) -> Result<(i64, i64)> {
    let start = (3..64u64).step_by(2).find(|&q| inv.applies(q) && inv.family().admissible(q)).ok_or_else(|| {
        anyhow!("class {} occurs for no small odd q", inv.label())
    })?;
    let step = if inv.applies(start + 2) { 2 } else { 4 };
    Ok((start as i64, step))
}

struct ChiValue {
    class: String,
    value: BigInt,
    poly: Option<QPoly>,
    source: String,
    agrees: bool,
}

fn engine_value(spec: &ParabolicActionSpec, inv: &InvolutionClassRecord, q: u64, want_poly: bool) -> Result<Option<ChiValue>> {
    let cs = match CharacterSum::for_class(spec, inv) {
        Ok(cs) => cs,
        Err(FixityError::NoPseudoLevi(_) | FixityError::Unsupported(_)) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let value = cs.value(&BigInt::from(q))?;
    let poly = if want_poly {
        let (start, step) = progression(inv)?;
        Some(cs.symbolic(start, step)?)
    } else {
        None
    };
    Ok(Some(ChiValue { class: inv.label().to_string(), value, poly, source: "engine".into(), agrees: true }))
}

fn fixture_value(c: &ChiFixture, q: u64) -> ChiValue {
    ChiValue {
        class: c.class.clone(),
        value: c.poly.eval(&BigInt::from(q)),
        poly: Some(c.poly.clone()),
        source: c.id.clone(),
        agrees: true,
    }
}

pub fn parabolic(set: &FixtureSet, args: &ParabolicArgs) -> Result<Report> {
    let f = args.group;
    if f == Exceptional::E8 {
        bail!("E8 is not supported: its Weyl group is too large to enumerate");
    }
    let mut nodes = if args.borel { borel_nodes(f) } else { args.nodes.clone() };
    nodes.sort_unstable();
    nodes.dedup();
    if nodes.is_empty() {
        bail!("give --nodes or --borel");
    }
    let spec = ParabolicActionSpec::new(f, &nodes);
    let engine = ENGINE.contains(&f);
    let fixture = set.parabolics().find(|p| p.family == f && same_action(f, &p.parabolic, &nodes));
    let n_poly = match (fixture, engine) {
        (Some(p), _) => p.index_poly()?,
        (None, true) => parabolic_index_poly(&spec)?,
        (None, false) => bail!("no encoded data for {f} {}", spec.label()),
    };
    let chis: Vec<&ChiFixture> = set.chis.iter().filter(|c| c.family == f && same_action(f, &c.parabolic, &nodes)).collect();
    if let Some(c) = &args.class {
        if set.involutions.find(f, c).is_none() && !chis.iter().any(|x| &x.class == c) {
            bail!("unknown class {c} for {f}");
        }
    }

    let mut cols = vec!["q", "class", "chi", "n", "log chi / log n", "deg chi / deg n", "source"];
    if args.symbolic {
        cols.push("chi(q)");
    }
    let mut report = Report::new("parabolic", &cols);
    report.input("group", f);
    report.input("parabolic", spec.label());
    if let Some(c) = &args.class {
        report.input("class", c);
    }
    report.input("n(q)", &n_poly);

    for &q in &args.q {
        if !f.admissible(q) {
            bail!("q = {q} is not a field size for {f}");
        }
        let odd = q % 2 == 1;
        let v = match &args.class {
            Some(c) => {
                let fixed = chis.iter().find(|x| &x.class == c && x.applies(q));
                if engine && odd {
                    let inv = set.involutions.find(f, c).ok_or_else(|| anyhow!("unknown class {c} for {f}"))?;
                    if !inv.applies(q) {
                        bail!("class {c} does not occur in {f}({q})");
                    }
                    let mut v = engine_value(&spec, inv, q, true)?
                        .ok_or_else(|| anyhow!("the character sum engine does not cover {f} class {c}"))?;
                    if let Some(x) = fixed {
                        v.agrees = x.poly.eval(&BigInt::from(q)) == v.value && v.poly.as_ref() == Some(&x.poly);
                        v.source = format!("engine, matches {}", x.id);
                        if !v.agrees {
                            v.source = format!("engine, DIFFERS from {}", x.id);
                        }
                    }
                    v
                } else if let Some(x) = fixed {
                    fixture_value(x, q)
                } else if engine {
                    bail!("the character sum engine covers odd q only, and no polynomial is encoded for {f} {} class {c} at q = {q}", spec.label());
                } else {
                    bail!("no polynomial is encoded for {f} {} class {c} at q = {q}", spec.label());
                }
            }
            None => {
                let mut best: Option<ChiValue> = None;
                if engine && odd {
                    for inv in set.involutions.classes_at(f, q) {
                        if let Some(v) = engine_value(&spec, inv, q, false)? {
                            if best.as_ref().is_none_or(|b| v.value > b.value) {
                                best = Some(v);
                            }
                        }
                    }
                    if let Some(b) = &mut best {
                        let inv = set.involutions.find(f, &b.class).expect("class from the table");
                        b.poly = engine_value(&spec, inv, q, true)?.and_then(|v| v.poly);
                    }
                } else {
                    for c in chis.iter().filter(|c| c.applies(q)) {
                        let v = fixture_value(c, q);
                        if best.as_ref().is_none_or(|b| v.value > b.value) {
                            best = Some(v);
                        }
                    }
                }
                best.ok_or_else(|| anyhow!("no fixed point data for {f} {} at q = {q}", spec.label()))?
            }
        };
        let n = n_poly.eval(&BigInt::from(q));
        let deg = match (&v.poly, n_poly.degree()) {
            (Some(p), Some(dn)) if dn > 0 => format!("{}/{}", p.degree().unwrap_or(0), dn),
            _ => "-".into(),
        };
        let ok = v.agrees && v.value >= BigInt::from(0) && v.value <= n;
        report.pass &= ok;
        let mut row: Vec<Cell> = vec![
            q.to_string().into(),
            v.class.clone().into(),
            v.value.to_string().into(),
            n.to_string().into(),
            ratio(&v.value, &n).into(),
            deg.into(),
            v.source.clone().into(),
        ];
        if args.symbolic {
            row.push(v.poly.as_ref().map_or("-".to_string(), |p| p.to_string()).into());
        }
        report.row(row);
    }
    report.summary = if report.pass { "ok".into() } else { "FAILED".into() };
    Ok(report)
}

// ---------------------------------------------------------------------------
// oracle

pub fn oracle(set: &FixtureSet, group: Option<&str>, subgroup: Option<&str>, case: Option<&str>) -> Result<Report> {
    let gens = load_generators(&set.dir)?;
    let expected = match case {
        Some(id) => Some(set.oracle_cases().find(|c| c.id == id).ok_or_else(|| anyhow!("unknown oracle case {id}"))?),
        None => None,
    };
    let group = expected.map(|c| c.group.as_str()).or(group).ok_or_else(|| anyhow!("give --group or --case"))?;
    let subgroup = expected.map(|c| c.subgroup.as_str()).or(subgroup).ok_or_else(|| anyhow!("give --subgroup"))?;
    let spec = gens.iter().find(|g| g.id == group).ok_or_else(|| {
        let ids: Vec<&str> = gens.iter().map(|g| g.id.as_str()).collect();
        anyhow!("unknown group {group}; built-in groups: {}", ids.join(", "))
    })?;
    let g = MatGroup::from_spec(spec, ELEMENT_CAP)?;
    let h = g.subgroup_from_spec(subgroup)?;
    let a = coset_action(&g, &h)?;
    let (ifix, per) = ifix_exact(&g, &a);
    let burnside = burnside_check(&g, &a);

    let mut report = Report::new("oracle", &["class", "|t^G|", "|t^G cap H|", "fix(t)"]);
    report.input("group", group);
    report.input("subgroup", subgroup);
    report.input("|G|", g.order());
    report.input("|H|", h.order());
    for (i, c) in per.iter().enumerate() {
        report.row(vec![format!("2{}", (b'A' + i as u8) as char).into(), c.class_size.to_string().into(), c.class_in_h.to_string().into(), c.fix.to_string().into()]);
    }
    let lr = ratio(&BigInt::from(ifix), &BigInt::from(a.n));
    report.notes.push(format!("n = {}, ifix = {ifix}, log ifix / log n = {lr}, i2(G) = {}", a.n, g.i2()));
    report.notes.push(format!("Burnside and fixed point formula: {}", if burnside { "pass" } else { "FAIL" }));
    report.pass = burnside;
    if let Some(c) = expected {
        let e = c.evaluate(&gens)?;
        report.input("case", &c.id);
        report.notes.push(format!("expected n = {}, ifix = {}{}", c.n, c.ifix, c.alpha.as_ref().map_or(String::new(), |x| format!(", alpha = {x}"))));
        report.pass &= e.passes;
    }
    report.summary = format!("n = {}, ifix = {ifix}: {}", a.n, if report.pass { "pass" } else { "FAIL" });
    Ok(report)
}

// ---------------------------------------------------------------------------
// tables

/// `tab-main3` and `tab:main3` name the same table.
pub fn table_name(s: &str) -> String {
    if s.contains(':') {
        return s.to_string();
    }
    match s.split_once('-') {
        Some((a, b)) => format!("{a}:{b}"),
        None => s.to_string(),
    }
}

struct Checked {
    gamma: Option<String>,
    alpha: Option<String>,
    min_ratio: Option<f64>,
    pass: bool,
    errors: Vec<String>,
}

fn min_ratio(r: &RowReport) -> Option<f64> {
    r.evaluations.iter().map(|e| e.log_ratio).chain(r.parabolic.iter().map(|e| e.log_ratio)).reduce(f64::min)
}

fn check_fixture(set: &FixtureSet, id: &str, points: usize) -> Result<Checked> {
    if let Some(a) = set.action(id) {
        let r = set.gate_action(a, points);
        return Ok(Checked { gamma: r.gamma_recomputed.clone(), alpha: a.alpha.clone(), min_ratio: min_ratio(&r), pass: r.passes(), errors: r.errors });
    }
    if let Some(p) = set.parabolic(id) {
        let r = set.gate_parabolic(p, points);
        return Ok(Checked { gamma: r.gamma_recomputed.clone(), alpha: p.alpha.clone(), min_ratio: min_ratio(&r), pass: r.passes(), errors: r.errors });
    }
    if let Some(c) = set.oracle_cases().find(|c| c.id == id) {
        let e = c.evaluate(&load_generators(&set.dir)?)?;
        return Ok(Checked {
            gamma: None,
            alpha: c.alpha.clone(),
            min_ratio: Some(e.log_ratio),
            pass: e.passes,
            errors: if e.passes { vec![] } else { vec![format!("n = {}, ifix = {}", e.n, e.ifix)] },
        });
    }
    if let Some(d) = set.dims.iter().find(|d| d.id == id) {
        let got = resolve(d, &set.involutions)?.ratio();
        let pass = parse_rational(&d.gamma)? == got;
        return Ok(Checked { gamma: Some(got.to_string()), alpha: None, min_ratio: None, pass, errors: vec![] });
    }
    bail!("unknown fixture {id}")
}

pub fn table(set: &FixtureSet, name: &str, points: usize) -> Result<Report> {
    let name = table_name(name);
    let mut report = Report::new("table", &["row", "entry", "fixtures", "gamma", "alpha", "min log ifix / log n", "status"]);
    report.input("table", &name);
    let prefix = format!("{name}:");
    let rows: Vec<_> = set.coverage.rows.iter().filter(|r| r.row.starts_with(&prefix)).collect();
    let problems = set.coverage_report().problems;
    let (mut passed, mut oos) = (0, 0);
    let total;
    if !rows.is_empty() {
        total = rows.len();
        for r in rows {
            if let Some(why) = &r.out_of_scope {
                oos += 1;
                report.row(vec![r.row.clone().into(), r.text.clone().into(), "-".into(), "-".into(), "-".into(), "-".into(), format!("out of scope: {why}").into()]);
                continue;
            }
            let mut ok = !problems.iter().any(|p| p.contains(&r.row));
            let (mut gammas, mut alphas, mut lo) = (BTreeSet::new(), BTreeSet::new(), None::<f64>);
            for id in &r.fixtures {
                let c = check_fixture(set, id, points)?;
                ok &= c.pass;
                gammas.extend(c.gamma);
                alphas.extend(c.alpha);
                if let Some(m) = c.min_ratio {
                    lo = Some(lo.map_or(m, |x| x.min(m)));
                }
                for e in c.errors {
                    report.notes.push(format!("{id}: {e}"));
                }
            }
            passed += usize::from(ok);
            report.pass &= ok;
            report.row(vec![
                r.row.clone().into(),
                r.text.clone().into(),
                r.fixtures.join(", ").into(),
                join_or_dash(&gammas).into(),
                join_or_dash(&alphas).into(),
                lo.map_or("-".into(), |x| format!("{x:.4}")).into(),
                ok.into(),
            ]);
        }
    } else if let Some(t) = set.tables.iter().find(|t| t.table == name) {
        let ids: Vec<&str> = t.actions.iter().map(|a| a.id.as_str()).chain(t.parabolics.iter().map(|p| p.id.as_str())).chain(t.oracle.iter().map(|o| o.id.as_str())).collect();
        total = ids.len();
        for id in ids {
            let c = check_fixture(set, id, points)?;
            passed += usize::from(c.pass);
            report.pass &= c.pass;
            for e in &c.errors {
                report.notes.push(format!("{id}: {e}"));
            }
            report.row(vec![
                id.into(),
                "-".into(),
                id.into(),
                c.gamma.unwrap_or_else(|| "-".into()).into(),
                c.alpha.unwrap_or_else(|| "-".into()).into(),
                c.min_ratio.map_or("-".into(), |x| format!("{x:.4}")).into(),
                c.pass.into(),
            ]);
        }
    } else {
        let mut names: BTreeSet<String> = set.coverage.tables.keys().cloned().collect();
        names.extend(set.tables.iter().map(|t| t.table.clone()));
        let names: Vec<String> = names.into_iter().map(|n| n.replacen(':', "-", 1)).collect();
        bail!("unknown table {name}; encoded tables: {}", names.join(", "));
    }
    let checked = total - oos;
    report.summary = format!("{passed}/{checked} rows pass{}", if oos > 0 { format!(" ({oos} out of scope)") } else { String::new() });
    Ok(report)
}

fn join_or_dash(s: &BTreeSet<String>) -> String {
    if s.is_empty() {
        "-".into()
    } else {
        s.iter().cloned().collect::<Vec<_>>().join(", ")
    }
}

// ---------------------------------------------------------------------------
// bounds

pub struct AlmostSimpleArgs {
    pub a: Option<BigInt>,
    pub b: Option<BigInt>,
    pub c: Option<BigInt>,
    pub d: Option<BigInt>,
    pub group: Option<Exceptional>,
    pub q: Option<u64>,
    pub alpha: String,
}

pub fn bound_almost_simple(set: &FixtureSet, args: &AlmostSimpleArgs) -> Result<Report> {
    let from_group = |what: &str| -> Result<(Exceptional, u64)> {
        match (args.group, args.q) {
            (Some(f), Some(q)) if f.admissible(q) => Ok((f, q)),
            (Some(f), Some(q)) => bail!("q = {q} is not a field size for {f}"),
            _ => bail!("give --{what}, or --group and --q"),
        }
    };
    let a = args.a.clone().context("--a is required")?;
    let c = args.c.clone().context("--c is required")?;
    let b = match &args.b {
        Some(b) => b.clone(),
        None => {
            let (f, q) = from_group("b")?;
            set.involutions.largest_class(f, q)?
        }
    };
    let d = match &args.d {
        Some(d) => d.clone(),
        None => {
            let (f, q) = from_group("d")?;
            f.simple_order(q)
        }
    };
    let alpha = parse_rational(&args.alpha)?;
    let input = BoundInput { a, b, c, d };
    let exponent = almost_simple_exponent(&input)?;
    let holds = almost_simple_exceeds(&input, &alpha)?;
    let mut report = Report::new("bound almost-simple", &["a", "b", "c", "d", "1 - (log b - log a)/(log d - log c)", "alpha", "ifix > n^alpha"]);
    if let (Some(f), Some(q)) = (args.group, args.q) {
        report.input("group", format!("{f}({q})"));
    }
    report.row(vec![
        input.a.to_string().into(),
        input.b.to_string().into(),
        input.c.to_string().into(),
        input.d.to_string().into(),
        format!("{exponent:.4}").into(),
        args.alpha.clone().into(),
        holds.into(),
    ]);
    report.notes.push("the exponent column is rounded; the last column is decided with exact integers".into());
    report.pass = holds;
    report.summary = if holds { format!("ifix > n^{}", args.alpha) } else { format!("the bound does not give ifix > n^{}", args.alpha) };
    Ok(report)
}

pub fn bound_maximal_rank(set: &FixtureSet, row: &str, qs: &[u64], points: usize) -> Result<Report> {
    let a = set.action(row).ok_or_else(|| anyhow!("unknown row {row}"))?;
    let pts: Vec<RowPoint> = if qs.is_empty() {
        a.admissible_points(points)
    } else {
        let all = a.admissible_points(256);
        let pts: Vec<RowPoint> = all.into_iter().filter(|p| qs.contains(&p.q)).collect();
        if pts.is_empty() {
            bail!("none of q = {qs:?} is admissible for {row}");
        }
        pts
    };
    let mut report = Report::new("bound maximal-rank", &["group", "q", "target", "ifix >=", "n", "n is", "log ratio", "alpha", "pass"]);
    report.input("row", row);
    report.input("subgroup", &a.subgroup.text);
    report.input("h0", &a.h0);
    for pt in pts {
        let e = a.evaluate(&set.involutions, pt)?;
        report.pass &= e.passes;
        let group = match pt.q0 {
            Some(q0) => format!("{}, q0 = {q0}", pt.family),
            None => pt.family.to_string(),
        };
        report.row(vec![
            group.into(),
            pt.q.to_string().into(),
            e.target.clone().into(),
            e.ifix_lb.to_string().into(),
            e.n.to_string().into(),
            if e.n_exact { "exact" } else { "upper bound" }.into(),
            format!("{:.4}", e.log_ratio).into(),
            e.alpha.clone().unwrap_or_else(|| "-".into()).into(),
            e.passes.into(),
        ]);
    }
    if let Ok(g) = a.recomputed_gamma(&set.involutions) {
        report.notes.push(format!("degree ratio {g}"));
    }
    report.summary = if report.pass { "ok".into() } else { "FAILED".into() };
    Ok(report)
}

// ---------------------------------------------------------------------------
// dims and validation

pub fn dims(set: &FixtureSet, group: Option<Exceptional>) -> Result<Report> {
    let mut report = Report::new("dims", &["row", "G", "H", "class", "dim G", "dim H", "dim t^G", "dim (t^G cap H)", "dim fix", "ratio", "stated", "pass"]);
    let mut n = 0;
    for d in set.dims.iter().filter(|d| group.is_none_or(|g| g == d.group)) {
        let r = resolve(d, &set.involutions)?;
        let ok = parse_rational(&d.gamma)? == r.ratio();
        report.pass &= ok;
        n += 1;
        report.row(vec![
            d.id.clone().into(),
            d.group.to_string().into(),
            d.subgroup.clone().into(),
            d.class.clone().into(),
            r.dim_g.to_string().into(),
            r.dim_h.to_string().into(),
            r.dim_class.to_string().into(),
            r.dim_class_in_h.to_string().into(),
            r.fixed.to_string().into(),
            r.ratio().to_string().into(),
            d.gamma.clone().into(),
            ok.into(),
        ]);
    }
    let passed = report.rows.iter().filter(|r| r.last() == Some(&Cell::Flag(true))).count();
    report.summary = format!("{passed}/{n} rows pass");
    Ok(report)
}

pub fn fixtures_validate(set: &FixtureSet, points: usize) -> Result<Report> {
    let mut report = Report::new("fixtures-validate", &["fixture", "kind", "gamma", "recomputed", "evaluations", "min log ifix / log n", "pass"]);
    report.input("points per row", points);
    report.input("data", set.dir.display());
    let reports = set.gate(points);
    for r in &reports {
        report.pass &= r.passes();
        for e in &r.errors {
            report.notes.push(format!("{}: {e}", r.id));
        }
        report.row(vec![
            r.id.clone().into(),
            r.kind.clone().into(),
            r.gamma.clone().unwrap_or_else(|| "-".into()).into(),
            r.gamma_recomputed.clone().unwrap_or_else(|| "-".into()).into(),
            (r.evaluations.len() + r.parabolic.len()).to_string().into(),
            min_ratio(r).map_or("-".into(), |x| format!("{x:.4}")).into(),
            r.passes().into(),
        ]);
    }
    let gens = load_generators(&set.dir)?;
    let mut oracle_ok = 0;
    let cases: Vec<_> = set.oracle_cases().collect();
    for c in &cases {
        let e = c.evaluate(&gens)?;
        oracle_ok += usize::from(e.passes);
        report.pass &= e.passes;
        report.row(vec![
            c.id.clone().into(),
            "oracle".into(),
            "-".into(),
            "-".into(),
            "1".into(),
            format!("{:.4}", e.log_ratio).into(),
            e.passes.into(),
        ]);
    }
    let cov = set.coverage_report();
    for (t, rows, covered, oos) in &cov.tables {
        report.notes.push(format!("coverage {t}: {covered} of {rows} rows encoded, {oos} out of scope"));
    }
    for p in &cov.problems {
        report.notes.push(format!("coverage problem: {p}"));
    }
    report.pass &= cov.ok();
    let passed = reports.iter().filter(|r| r.passes()).count();
    report.summary = format!(
        "{passed}/{} rows and {oracle_ok}/{} oracle cases pass; coverage {}",
        reports.len(),
        cases.len(),
        if cov.ok() { "complete" } else { "INCOMPLETE" }
    );
    Ok(report)
}
