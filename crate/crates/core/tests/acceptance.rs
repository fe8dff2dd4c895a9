//! Acceptance criteria. Each prints one `PASS` or `FAIL` line; the process
//! exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use lrbound::analyze::verdict;
use lrbound::corpus::{example, examples, random_program, GenConfig};
use lrbound::deps::enumerate_deps;
use lrbound::nfa::{enumerate_nfas, random_nfa, Layout};
use lrbound::{
    compose_all, growth_probe, is_universal, loop_correct, max_outputs, nfa_to_program, Analysis, AnalysisConfig,
    Context, Dep, DepType, ExecLimits, Mode, Program, Store, Var,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn x(i: u32) -> Var {
    Var::new(i)
}

fn labels(mode: Mode, p: &Program) -> Vec<&'static str> {
    let mut a = Analysis::new(p, AnalysisConfig::new(mode)).unwrap();
    a.verdicts().unwrap().iter().map(|v| v.label()).collect()
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// Example programs plus 50 seeded random ones (n <= 5, depth <= 4).
fn corpus() -> Vec<(String, Program)> {
    let mut out: Vec<(String, Program)> = examples().into_iter().map(|(n, p)| (n.to_string(), p)).collect();
    let mut rng = StdRng::seed_from_u64(2024);
    let cfg = GenConfig {
        max_vars: 5,
        max_depth: 4,
        ..GenConfig::default()
    };
    for k in 0..50 {
        out.push((format!("random#{k}"), random_program(&mut rng, &cfg)));
    }
    out
}

fn reference_examples() -> Outcome {
    let ex1 = example("growing_sum").unwrap();
    let l = labels(Mode::Poly, &ex1);
    ensure(l == ["NOT-POLY", "NOT-POLY", "NOT-POLY", "POLY"], || {
        format!("example 1: {l:?}")
    })?;
    let l = labels(Mode::Poly, &example("bounded_sum").unwrap());
    ensure(l.iter().all(|&s| s == "POLY"), || format!("example 2: {l:?}"))?;

    let e = Context::EMPTY;
    let loop_l = lrbound::analyze::analyze(Mode::Poly, &example("copy_double").unwrap(), e).unwrap();
    ensure(loop_l.contains(Dep::unary(x(4), DepType::Exponential, x(1)), e), || {
        "loop L lacks 4 -3-> 1 into {}".into()
    })?;
    let reset = lrbound::analyze::analyze(Mode::Poly, &example("copy_double_reset").unwrap(), e).unwrap();
    ensure(
        reset.contains(
            Dep::unary(x(2), DepType::Multiplicative, x(2)),
            Context::from_vars([x(3)]),
        ),
        || "reset loop lacks 2 -2-> 2 into {3}".into(),
    )?;
    ensure(reset.exponential().is_empty(), || "reset loop has a type-3 fact".into())?;

    let l = labels(Mode::Lin, &example("square_accumulate").unwrap());
    ensure(l[0] == "NOT-LIN", || format!("X1 := X1 + X2*X2: {l:?}"))?;
    let l = labels(Mode::Lin, &example("accumulate").unwrap());
    ensure(l[0] == "LIN", || format!("X1 := X1 + X2: {l:?}"))?;
    Ok("all verdicts and judgements as stated".into())
}

fn nfa_differential() -> Outcome {
    let check = |a: &lrbound::Nfa| -> Result<(), String> {
        let p = nfa_to_program(a);
        let z = Layout { n_states: a.n_states() }.output();
        let v = verdict(Mode::Lin, &p, z).map_err(|e| e.to_string())?;
        ensure(v.bounded == is_universal(a), || {
            format!("DISAGREE on\n{}", lrbound::nfa::render_nfa(a))
        })
    };
    let mut count = 0;
    for n in 1..=2 {
        for a in enumerate_nfas(n) {
            check(&a)?;
            count += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(99);
    let mut universal = 0;
    for k in 0..200 {
        let n = 3 + k % 2;
        let density = rng.gen_range(0.2..0.7);
        let a = random_nfa(&mut rng, n, density);
        universal += usize::from(is_universal(&a));
        check(&a)?;
        count += 1;
    }
    Ok(format!(
        "{count} automata agree ({universal} of 200 random are universal)"
    ))
}

fn l2_equivalence() -> Outcome {
    let corpus = corpus();
    let mut loops = 0;
    for (name, p) in &corpus {
        let mut default = Analysis::new(p, AnalysisConfig::new(Mode::Poly)).unwrap();
        let mut full_cfg = AnalysisConfig::new(Mode::Poly);
        full_cfg.full_l2_fixpoint = true;
        let mut full = Analysis::new(p, full_cfg).unwrap();
        default.judgements(Context::EMPTY).map_err(|e| e.to_string())?;
        full.judgements(Context::EMPTY).map_err(|e| e.to_string())?;
        let (a, b) = (default.loop_judgements(), full.loop_judgements());
        ensure(a == b, || format!("{name}: loop judgements differ"))?;
        loops += a.len();
    }
    Ok(format!(
        "{} programs, {loops} (loop, context) pairs identical",
        corpus.len()
    ))
}

fn mode_consistency() -> Outcome {
    let mut lin = 0;
    let mut total = 0;
    let mut programs = corpus();
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..20 {
        let a = random_nfa(&mut rng, 2, 0.5);
        programs.push(("nfa".into(), nfa_to_program(&a)));
    }
    for (name, p) in &programs {
        let poly = labels(Mode::Poly, p);
        let linear = labels(Mode::Lin, p);
        for (j, (a, b)) in poly.iter().zip(&linear).enumerate() {
            total += 1;
            if *b == "LIN" {
                lin += 1;
                ensure(*a == "POLY", || format!("{name}: X{} is LIN but not POLY", j + 1))?;
            }
        }
    }
    Ok(format!("{lin} LIN-bounded of {total} variables, all POLY-bounded"))
}

fn algebra() -> Outcome {
    for a in DepType::ALL {
        ensure(a.join(a) == a, || format!("idempotence at {a}"))?;
        for b in DepType::ALL {
            ensure(a.join(b) == b.join(a), || format!("commutativity at {a},{b}"))?;
            ensure(a.join(a.join(b)) == a.join(b), || format!("absorption at {a},{b}"))?;
            for c in DepType::ALL {
                ensure(a.join(b).join(c) == a.join(b.join(c)), || {
                    format!("associativity at {a},{b},{c}")
                })?;
            }
        }
    }
    let all = enumerate_deps(3);
    let then = |ds: &BTreeSet<Dep>, c: Dep| -> BTreeSet<Dep> { ds.iter().flat_map(|&d| compose_all(d, c)).collect() };
    let mut defined = 0;
    for &a in &all {
        for &b in &all {
            let ab: BTreeSet<Dep> = compose_all(a, b).collect();
            for &c in &all {
                let left = then(&ab, c);
                if left.is_empty() {
                    continue;
                }
                let right: BTreeSet<Dep> = compose_all(b, c).flat_map(|bc| compose_all(a, bc)).collect();
                if right.is_empty() {
                    continue;
                }
                defined += 1;
                ensure(left == right, || {
                    format!("({a}.{b}).{c} = {left:?} but {a}.({b}.{c}) = {right:?}")
                })?;
            }
        }
    }
    let mut corrected = 0;
    for &d in &all {
        if let (Some(p), Some(l)) = (loop_correct(Mode::Poly, x(1), d), loop_correct(Mode::Lin, x(1), d)) {
            let ty = |d: Dep| match d {
                Dep::Unary { ty, .. } => ty,
                Dep::Binary { .. } => DepType::Identity,
            };
            ensure(ty(p) <= ty(l), || format!("LC not monotone at {d}"))?;
            corrected += 1;
        }
    }
    Ok(format!(
        "lattice laws hold; {} deps, {defined} triples with both sides defined agree; {corrected} LC inputs monotone",
        all.len()
    ))
}

fn interpreter_oracle() -> Outcome {
    let fib = |k: u64| {
        let (mut a, mut b) = (1u64, 1u64);
        for _ in 2..k {
            (a, b) = (b, a + b);
        }
        if k <= 2 {
            1
        } else {
            b
        }
    };
    type Form = Box<dyn Fn(u64) -> u64>;
    // (program, per-variable closed form at uniform input N, which are exponential)
    let cases: Vec<(&str, Vec<Form>, Vec<bool>)> = vec![
        ("identity", vec![Box::new(|n| n), Box::new(|n| n)], vec![false, false]),
        (
            "doubling",
            vec![Box::new(|n| n << n), Box::new(|n| n)],
            vec![true, false],
        ),
        (
            "additive_loop",
            vec![Box::new(|n| n + n * n), Box::new(|n| n), Box::new(|n| n)],
            vec![false, false, false],
        ),
        (
            "growing_sum",
            vec![
                Box::new(move |n| n * fib(n + 2)),
                Box::new(move |n| n * fib(n + 2)),
                Box::new(move |n| n * fib(n + 2)),
                Box::new(|n| n),
            ],
            vec![true, true, true, false],
        ),
        (
            "bounded_sum",
            vec![
                Box::new(|n| n * (n + 1)),
                Box::new(|n| n),
                Box::new(|n| n * (n + 1)),
                Box::new(|n| n),
            ],
            vec![false, false, false, false],
        ),
    ];
    let probes = [1, 2, 3, 4];
    for (name, forms, exponential) in &cases {
        let p = example(name).unwrap();
        let rows = growth_probe(&p, &probes, ExecLimits::default());
        for row in &rows {
            ensure(!row.truncated, || format!("{name}: truncated at N={}", row.input))?;
            let input = vec![row.input; p.n() as usize];
            let (oracle, _) = common::maxima(&p, &input);
            ensure(row.max_per_var == oracle, || {
                format!(
                    "{name} N={}: probe {:?}, enumeration {oracle:?}",
                    row.input, row.max_per_var
                )
            })?;
            let closed: Vec<u64> = forms.iter().map(|f| f(row.input)).collect();
            ensure(row.max_per_var == closed, || {
                format!(
                    "{name} N={}: probe {:?}, closed form {closed:?}",
                    row.input, row.max_per_var
                )
            })?;
        }
        let got: Vec<bool> = labels(Mode::Poly, &p).iter().map(|&l| l == "NOT-POLY").collect();
        ensure(&got == exponential, || {
            format!("{name}: unbounded flags {got:?}, expected {exponential:?}")
        })?;
    }
    Ok(format!(
        "{} programs x N in {probes:?} match enumeration and closed forms",
        cases.len()
    ))
}

fn monotonicity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(77);
    let cfg = GenConfig {
        max_vars: 4,
        max_depth: 3,
        ..GenConfig::default()
    };
    let lim = ExecLimits {
        max_stores: 50_000,
        max_value: 1 << 40,
    };
    let (mut checked, mut skipped) = (0, 0);
    while checked < 100 {
        let p = random_program(&mut rng, &cfg);
        let lo: Vec<u64> = (0..p.n()).map(|_| rng.gen_range(0..3)).collect();
        let hi: Vec<u64> = lo.iter().map(|v| v + rng.gen_range(0..2)).collect();
        let (a, t1) = max_outputs(p.root(), &Store(lo.clone()), lim).unwrap();
        let (b, t2) = max_outputs(p.root(), &Store(hi.clone()), lim).unwrap();
        if t1 || t2 {
            skipped += 1;
            ensure(skipped < 1000, || "too many truncated runs".into())?;
            continue;
        }
        ensure(Store(a.clone()).le(&Store(b.clone())), || {
            format!("{p:?}: {lo:?} -> {a:?} but {hi:?} -> {b:?}")
        })?;
        checked += 1;
    }
    Ok(format!(
        "{checked} triples monotone ({skipped} truncated draws skipped)"
    ))
}

fn reset_free() -> Outcome {
    let mut count = 0;
    for (name, p) in corpus() {
        if p.root().has_reset() {
            continue;
        }
        let mut a = Analysis::new(&p, AnalysisConfig::new(Mode::Poly)).unwrap();
        a.verdicts().map_err(|e| e.to_string())?;
        let contexts = a.stats().distinct_contexts;
        ensure(contexts == 1, || format!("{name}: {contexts} contexts"))?;
        count += 1;
    }
    ensure(count > 0, || "no reset-free programs".into())?;
    Ok(format!("{count} reset-free programs explore only the empty context"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 reference-example verdicts", Duration::from_secs(1), reference_examples),
        ("2 NFA differential suite", Duration::from_secs(120), nfa_differential),
        ("3 restricted vs full L2", Duration::from_secs(120), l2_equivalence),
        (
            "4 LIN-bounded implies POLY-bounded",
            Duration::from_secs(120),
            mode_consistency,
        ),
        ("5 dependence algebra laws", Duration::from_secs(10), algebra),
        (
            "6 interpreter vs closed forms",
            Duration::from_secs(60),
            interpreter_oracle,
        ),
        ("7 interpreter monotonicity", Duration::from_secs(60), monotonicity),
        ("8 reset-free single context", Duration::from_secs(60), reset_free),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > budget => Err(format!("{detail}; over time budget")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS [{name}] {detail} ({took:.2?} / {budget:?})"),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{name}] {detail} ({took:.2?} / {budget:?})");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
