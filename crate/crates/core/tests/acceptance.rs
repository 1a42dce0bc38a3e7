mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use tvkit::cyclotomic::QContext;
use tvkit::identities::order_seven_identities;
use tvkit::numeric::{bits_for_digits, pi, real_from_i64, sin, BigComplex, Tolerance, RM};
use tvkit::polytab::{
    reference_table, root_assignment, t_polynomial, th_polynomial, verify_t_root, verify_tau_identity,
};
use tvkit::sixj::{canonical_key, SixJ, SqrtBranch};
use tvkit::statesum::{state_sum, ColourFilter, StateSumOptions};
use tvkit::systems::{
    build_tv, epsilon_roots, epsilon_system, epsilon_system_at, gamma_roots, gamma_system, gamma_system_at,
    homologically_trivial, systems_equal, verify_relation, Alignment, EpsilonBranch, RelationPattern, SixJSystem,
};

use common::{load, FIXTURES, MANIFOLDS, PACHNER_PAIRS};

const P: u32 = 100;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tol50() -> Tolerance {
    Tolerance::for_precision(P)
}

fn tol40() -> Tolerance {
    Tolerance::from_exponent(40, bits_for_digits(P))
}

fn a1() -> Outcome {
    let mut n = 0;
    for m in QContext::valid_selectors(7) {
        let ctx = QContext::new(7, m as i64, P).map_err(|e| e.to_string())?;
        for c in order_seven_identities(&ctx).map_err(|e| e.to_string())? {
            ensure(c.holds(), || format!("{} fails at m = {m}", c.name))?;
            n += 1;
        }
    }
    ensure(n == 72, || format!("{n} checks instead of 72"))?;
    Ok(format!("{n} exact identities"))
}

fn a2() -> Outcome {
    for m in QContext::valid_selectors(7) {
        verify_t_root(m as i64).map_err(|e| e.to_string())?;
    }
    let rows = root_assignment(P).map_err(|e| e.to_string())?;
    ensure(rows.len() == 12, || format!("{} selectors", rows.len()))?;
    let counts: Vec<usize> = (1..=3).map(|k| rows.iter().filter(|(_, j)| *j == k).count()).collect();
    ensure(counts == [4, 4, 4], || format!("root counts {counts:?}"))?;
    ensure(rows.contains(&(1, 1)) && rows.contains(&(5, 2)), || format!("assignment {rows:?}"))?;
    Ok("T([3]) = 0 for 12 selectors, 4 per root".into())
}

fn a3() -> Outcome {
    let mut systems = vec![epsilon_system(EpsilonBranch::Positive, P).map_err(|e| e.to_string())?];
    for k in 1..=3 {
        systems.push(gamma_system(k, P).map_err(|e| e.to_string())?);
    }
    let mut tuples = 0;
    for sys in &systems {
        let report = verify_relation(sys, &tol50(), RelationPattern::Book);
        ensure(report.passed(), || {
            format!("{}: {} failures, worst {:?}", sys.label(), report.failures.len(), report.worst_tuple)
        })?;
        tuples += report.total;
    }
    ensure(tuples == 512 + 3 * 19683, || format!("{tuples} tuples"))?;
    Ok(format!("{tuples} tuples, book pattern"))
}

fn a4() -> Outcome {
    let tol = tol50();
    let bits = bits_for_digits(P);
    let gammas = gamma_roots(P).map_err(|e| e.to_string())?;
    for m in QContext::valid_selectors(7) {
        let ctx = QContext::new(7, m as i64, P).map_err(|e| e.to_string())?;
        let th = homologically_trivial(&build_tv(&ctx)).map_err(|e| e.to_string())?;
        let k = gammas
            .iter()
            .position(|g| th.weight(1).within(&BigComplex::from_real(g.clone(), bits), tol.value()))
            .ok_or_else(|| format!("m = {m}: w_1 matches no γ"))?;
        let g = gamma_system(k as u32 + 1, P).map_err(|e| e.to_string())?;
        let c = systems_equal(&th, &g, &tol, Alignment::SqrtSigns).map_err(|e| e.to_string())?;
        ensure(c.equal, || format!("r = 7, m = {m}: {:?}", c.first_difference.map(|d| d.to_string())))?;
    }
    let eps = epsilon_roots(P).map_err(|e| e.to_string())?;
    for m in QContext::valid_selectors(5) {
        let ctx = QContext::new(5, m as i64, P).map_err(|e| e.to_string())?;
        let th = homologically_trivial(&build_tv(&ctx)).map_err(|e| e.to_string())?;
        let e = eps
            .iter()
            .find(|e| th.weight(1).within(&BigComplex::from_real((*e).clone(), bits), tol.value()))
            .ok_or_else(|| format!("r = 5, m = {m}: w_1 matches no root"))?;
        let target = epsilon_system_at(&BigComplex::from_real(e.clone(), bits), None, P).map_err(|e| e.to_string())?;
        let c = systems_equal(&th, &target, &tol, Alignment::SqrtSigns).map_err(|e| e.to_string())?;
        ensure(c.equal, || format!("r = 5, m = {m}: {:?}", c.first_difference.map(|d| d.to_string())))?;
    }
    Ok("12 selectors at r = 7, 8 at r = 5".into())
}

/// Quantum integers `sin(nπ/7)/sin(π/7)` at the principal root.
fn trig_qints(bits: usize) -> Vec<BigComplex> {
    let base = sin(&pi(bits).div(&real_from_i64(7, bits), bits, RM), bits);
    (0..=6)
        .map(|n| {
            let x = pi(bits).mul(&real_from_i64(n, bits), bits, RM).div(&real_from_i64(7, bits), bits, RM);
            BigComplex::from_real(sin(&x, bits).div(&base, bits, RM), bits)
        })
        .collect()
}

fn closed_forms(bits: usize) -> Result<Vec<([u32; 6], BigComplex)>, String> {
    let q = trig_qints(bits);
    let one = BigComplex::one(bits);
    let d = |a: &BigComplex, b: &BigComplex| a.div(b).map_err(|e| e.to_string());
    let s = |a: &BigComplex| a.sqrt();
    let p = |xs: &[usize]| xs.iter().fold(one.clone(), |acc, &n| &acc * &q[n]);
    Ok(vec![
        ([0, 0, 0, 0, 0, 0], one.clone()),
        ([0, 0, 0, 2, 2, 2], -&d(&one, &s(&q[3]))?),
        ([0, 0, 0, 4, 4, 4], d(&one, &s(&q[5]))?),
        ([0, 2, 2, 0, 2, 2], d(&one, &q[3])?),
        ([0, 2, 2, 2, 2, 2], d(&one, &q[3])?),
        ([0, 2, 2, 2, 4, 4], -&d(&one, &s(&p(&[3, 5])))?),
        ([0, 2, 2, 4, 2, 2], d(&one, &q[3])?),
        ([0, 2, 2, 4, 4, 4], -&d(&one, &s(&p(&[3, 5])))?),
        ([0, 4, 4, 0, 4, 4], d(&one, &q[5])?),
        ([0, 4, 4, 2, 4, 4], d(&one, &q[5])?),
        ([2, 2, 2, 2, 2, 2], d(&(&q[5] - &one), &p(&[2, 3, 4]))?),
        ([2, 2, 2, 2, 2, 4], -&d(&q[2], &p(&[3, 4]))?),
        ([2, 2, 2, 2, 4, 4], -&d(&s(&d(&p(&[2, 6]), &p(&[3, 5]))?), &q[4])?),
        ([2, 2, 2, 4, 4, 4], d(&q[3], &(&q[4] * &s(&p(&[2, 3, 5, 6]))))?),
        ([2, 2, 4, 2, 2, 4], d(&q[2], &p(&[3, 4, 5]))?),
        ([2, 2, 4, 2, 4, 4], d(&q[2], &p(&[4, 5]))?),
        ([2, 4, 4, 2, 4, 4], -&d(&one, &p(&[4, 5, 6]))?),
    ])
}

fn a5() -> Outcome {
    let ctx = QContext::new(7, 1, P).map_err(|e| e.to_string())?;
    let eval = SixJ::new(&ctx);
    let forms = closed_forms(ctx.bits())?;
    let tol = tol50();
    for (key, expected) in &forms {
        let v = eval.sixj(key).map_err(|e| e.to_string())?;
        let got = v.embed(&ctx, SqrtBranch::Principal).map_err(|e| e.to_string())?;
        ensure(got.within(expected, tol.value()), || format!("{key:?}: {got} vs {expected}"))?;
    }
    let tabulated: Vec<[u32; 6]> = forms.iter().map(|(k, _)| canonical_key(k)).collect();
    let mut zeros = 0;
    let mut nonzero = 0;
    for code in 0..3u32.pow(6) {
        let key: [u32; 6] = std::array::from_fn(|i| 2 * (code / 3u32.pow(i as u32) % 3));
        let v = eval.sixj(&key).map_err(|e| e.to_string())?;
        if tabulated.contains(&canonical_key(&key)) {
            ensure(!v.is_zero(), || format!("{key:?} vanishes"))?;
            nonzero += 1;
        } else {
            ensure(v.is_zero(), || format!("{key:?} should be exactly zero"))?;
            zeros += 1;
        }
    }
    Ok(format!("17 closed forms, {nonzero} nonzero and {zeros} exactly zero even tuples"))
}

fn a6() -> Outcome {
    let table = reference_table();
    ensure(table.len() == 9, || "table rows".into())?;
    for (order, expected) in &table {
        let r = 2 * order - 1;
        let p = th_polynomial(r).map_err(|e| e.to_string())?;
        ensure(&p == expected, || format!("order {order}: {p} vs {expected}"))?;
        ensure(p.degree() == Some(((r - 1) / 2) as usize), || format!("order {order}: degree"))?;
    }
    Ok("9 rows, r = 5..21".into())
}

fn systems_for_a7() -> Result<Vec<SixJSystem>, String> {
    let mut out = vec![SixJSystem::trivial(P), epsilon_system(EpsilonBranch::Positive, P).map_err(|e| e.to_string())?];
    for k in 1..=3 {
        out.push(gamma_system(k, P).map_err(|e| e.to_string())?);
    }
    out.push(build_tv(&QContext::new(5, 1, P).map_err(|e| e.to_string())?));
    out.push(build_tv(&QContext::new(7, 1, P).map_err(|e| e.to_string())?));
    Ok(out)
}

fn a7() -> Outcome {
    let tol = tol40();
    let opts = StateSumOptions::default();
    let tris: Vec<_> = FIXTURES.iter().map(|n| (*n, load(n))).collect();
    let find = |name: &str| &tris.iter().find(|(n, _)| *n == name).expect("fixture").1;
    let mut checks = 0;
    for sys in systems_for_a7()? {
        let value = |name: &str| state_sum(find(name), &sys, &opts).map(|s| s.value).map_err(|e| e.to_string());
        // (a)
        for (x, y, mv) in PACHNER_PAIRS {
            let (u, v) = (value(x)?, value(y)?);
            ensure(u.within(&v, tol.value()), || format!("{} {mv} {x}/{y}: {u} vs {v}", sys.label()))?;
            checks += 1;
        }
        for group in MANIFOLDS {
            let first = value(group[0])?;
            for name in &group[1..] {
                let v = value(name)?;
                ensure(first.within(&v, tol.value()), || format!("{} {}/{name}", sys.label(), group[0]))?;
            }
        }
        // (d)
        let flipped = sys.with_sqrt_branch(SqrtBranch::Flipped);
        for (name, t) in &tris {
            let a = value(name)?;
            let b = state_sum(t, &flipped, &opts).map_err(|e| e.to_string())?.value;
            ensure(a.within(&b, tol.value()), || format!("{} {name} flipped: {a} vs {b}", sys.label()))?;
            checks += 1;
        }
    }
    // (b)
    let gammas = gamma_roots(P).map_err(|e| e.to_string())?;
    let bits = bits_for_digits(P);
    let even = StateSumOptions { filter: ColourFilter::Even, ..Default::default() };
    for m in QContext::valid_selectors(7) {
        let ctx = QContext::new(7, m as i64, P).map_err(|e| e.to_string())?;
        let tv = build_tv(&ctx);
        let g3 = ctx.embed(&ctx.qint(3));
        let k = gammas
            .iter()
            .position(|g| g3.within(&BigComplex::from_real(g.clone(), bits), tol.value()))
            .ok_or_else(|| format!("m = {m}: no root"))?;
        let gamma = gamma_system_at(&BigComplex::from_real(gammas[k].clone(), bits), Some(k as u32 + 1), P)
            .map_err(|e| e.to_string())?;
        for (name, t) in &tris {
            let a = state_sum(t, &tv, &even).map_err(|e| e.to_string())?.value;
            let b = state_sum(t, &gamma, &opts).map_err(|e| e.to_string())?.value;
            ensure(a.within(&b, tol.value()), || format!("m = {m} {name}: TV_7 even {a} vs γ{} {b}", k + 1))?;
            checks += 1;
        }
    }
    // (c)
    let trivial = SixJSystem::trivial(P);
    let one = BigComplex::one(bits);
    for (name, t) in &tris {
        let v = state_sum(t, &trivial, &opts).map_err(|e| e.to_string())?.value;
        ensure((&v - &one).is_zero(), || format!("trivial system on {name}: {v}"))?;
        checks += 1;
    }
    Ok(format!("{checks} checks on {} fixtures", tris.len()))
}

fn a8() -> Outcome {
    let sign = verify_tau_identity(&t_polynomial()).map_err(|e| e.to_string())?;
    ensure(sign == Some(-1), || format!("sign {sign:?}"))?;
    let bits = bits_for_digits(P);
    let g = gamma_roots(P).map_err(|e| e.to_string())?.map(|x| BigComplex::from_real(x, bits));
    let one = BigComplex::one(bits);
    let tau = |x: &BigComplex| -> Result<BigComplex, String> { Ok(&one - &x.inv().map_err(|e| e.to_string())?) };
    let tol = tol40();
    for (from, to) in [(0, 1), (1, 2), (2, 0)] {
        let v = tau(&g[from])?;
        ensure(v.within(&g[to], tol.value()), || format!("τ(γ{}) ≠ γ{}", from + 1, to + 1))?;
    }
    Ok("x³T(1-1/x) = -T(x), τ cycles γ₁ → γ₂ → γ₃ → γ₁".into())
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let criteria: [Criterion; 8] = [
        ("A1", a1, Duration::from_secs(1)),
        ("A2", a2, Duration::from_secs(1)),
        ("A3", a3, Duration::from_secs(10)),
        ("A4", a4, Duration::MAX),
        ("A5", a5, Duration::MAX),
        ("A6", a6, Duration::from_secs(5)),
        ("A7", a7, Duration::MAX),
        ("A8", a8, Duration::MAX),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let t = Instant::now();
        let outcome = run();
        let elapsed = t.elapsed();
        let outcome =
            outcome.and_then(|d| if elapsed > limit { Err(format!("{d}; took longer than {limit:?}")) } else { Ok(d) });
        match outcome {
            Ok(detail) => println!("{name} PASS {:>9.3}s  {detail}", elapsed.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("{name} FAIL {:>9.3}s  {detail}", elapsed.as_secs_f64());
            }
        }
    }
    let total = start.elapsed();
    if total < Duration::from_secs(120) {
        println!("A9 PASS {:>9.3}s  whole suite under 2 minutes", total.as_secs_f64());
    } else {
        failed += 1;
        println!("A9 FAIL {:>9.3}s  whole suite over 2 minutes", total.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
