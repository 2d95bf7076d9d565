//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! All comparisons are exact over ℚ(i); the only tolerance is the runtime
//! budget of criterion 1. Runs without the libtest harness so the lines are
//! always printed; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use virab::algebra::{classify_case, verify_algebra, AlgebraParams, Case};
use virab::classify::{
    check_constraints, classify, isom_decide, isom_decide_specs, solve_from_generators, CanonicalParams, Outcome,
    Seeds,
};
use virab::orbit::{check_invariant_subspace, orbit_closure, DEFAULT_BOUNDS, DEFAULT_ROUNDS, DEFAULT_WINDOW};
use virab::poly::{parse_poly, BiPoly};
use virab::repmod::{
    f_identity_residue, q_poly, verify_consistency, verify_freeness, verify_module, GenericFamily, HSeq,
    ModuleSpec,
};
use virab::Scalar;

const ALGEBRA_BUDGET: Duration = Duration::from_secs(30);

fn sc(s: &str) -> Scalar {
    s.parse().unwrap()
}

fn scs(v: &[&str]) -> Vec<Scalar> {
    v.iter().map(|s| sc(s)).collect()
}

fn p(s: &str) -> BiPoly {
    parse_poly(s).unwrap()
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Verdict {
        Verdict { pass, detail: detail.into() }
    }
}

/// Criterion 2 grid: 135 `Φ` modules and 4 `Θ` modules over `Vir(0,b)`.
fn module_grid() -> Vec<ModuleSpec> {
    let mut out = Vec::new();
    for b in ["-1", "0", "1/2", "1", "2"] {
        for lambda in ["2", "-1/2", "i"] {
            for alpha in ["0", "1", "3/2"] {
                for h in [&[][..], &["0", "1"], &["1", "-1/3", "2"]] {
                    out.push(ModuleSpec::phi(sc(b), sc(lambda), sc(alpha), scs(h), true).unwrap());
                }
            }
        }
    }
    for lambda in ["2", "-1/2"] {
        for r in [&[][..], &["0", "1", "1"]] {
            out.push(ModuleSpec::theta(sc(lambda), scs(r), true).unwrap());
        }
    }
    out
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut algebras = vec![
        AlgebraParams::new(sc("0"), sc("0"), Case::Vir00).unwrap(),
        AlgebraParams::new(sc("0"), sc("-1"), Case::Vir0m1).unwrap(),
        AlgebraParams::new(sc("1/2"), sc("0"), Case::Vir120).unwrap(),
        AlgebraParams::new(sc("0"), sc("1"), Case::Vir01).unwrap(),
        AlgebraParams::new(sc("1/3"), sc("2"), Case::VirGeneric).unwrap(),
    ];
    for (a, b) in [("0", "0"), ("0", "1"), ("0", "-1"), ("1/2", "0"), ("1", "2"), ("-1/3", "5")] {
        algebras.push(AlgebraParams::new(sc(a), sc(b), Case::WOnly).unwrap());
    }
    let (mut checks, mut failures) = (0, 0);
    for alg in &algebras {
        let r = verify_algebra(alg, 5);
        checks += r.checks;
        failures += r.failures.len();
    }
    let elapsed = start.elapsed();
    Verdict::new(
        failures == 0 && elapsed < ALGEBRA_BUDGET,
        format!(
            "{} algebras, window 5, {checks} checks, {failures} failures, {:.2} s (budget {} s)",
            algebras.len(),
            elapsed.as_secs_f64(),
            ALGEBRA_BUDGET.as_secs()
        ),
    )
}

fn criterion_2(grid: &[ModuleSpec]) -> Verdict {
    let (mut checks, mut failures) = (0, 0);
    for spec in grid {
        let r = verify_module(spec, 4, 4);
        checks += r.checks;
        failures += r.failures.len();
    }
    // Negative control: perturbing one g_m must be detected.
    let spec = ModuleSpec::phi(sc("1/2"), sc("2"), sc("0"), scs(&["0", "1"]), true).unwrap();
    let mut broken = GenericFamily::from_spec(&spec, 4);
    let bumped = broken.g_m(2).unwrap() + &BiPoly::one();
    broken.set_g(2, bumped).unwrap();
    let control = verify_module(&broken, 4, 4);
    Verdict::new(
        failures == 0 && !control.is_pass(),
        format!(
            "{} modules, N=4, degree<=4, {checks} checks, {failures} failures; perturbed control fails {} checks",
            grid.len(),
            control.failures.len()
        ),
    )
}

/// `q_{n,k;α}(t)` and its derivative at a point, summed term by term.
fn q_at(n: i64, k: u32, alpha: &Scalar, b: &Scalar, t: &Scalar) -> (Scalar, Scalar) {
    let n_s = Scalar::int(n);
    let pw = |x: &Scalar, e: u32| x.pow(e as i64).unwrap();
    let mut value = &n_s * &pw(t, k);
    let mut deriv = if k == 0 { Scalar::zero() } else { &(&n_s * &Scalar::int(k as i64)) * &pw(t, k - 1) };
    let c = if *b == Scalar::int(-1) {
        &(&n_s * &Scalar::int(n - 1)) * alpha
    } else if b.is_one() {
        &n_s * alpha
    } else {
        Scalar::zero()
    };
    for j in 0..k {
        let e = k - 1 - j;
        value -= &(&c * &(&pw(alpha, j) * &pw(t, e)));
        if e > 0 {
            deriv -= &(&c * &(&pw(alpha, j) * &(&Scalar::int(e as i64) * &pw(t, e - 1))));
        }
    }
    (value, deriv)
}

fn w_at(m: i64, alpha: &Scalar, b: &Scalar, t: &Scalar) -> Scalar {
    if *b == Scalar::int(-1) {
        t - &(&Scalar::int(m) * alpha)
    } else if b.is_one() && m != 0 {
        t - alpha
    } else {
        t.clone()
    }
}

fn criterion_3() -> Verdict {
    let points = scs(&["0", "1", "-2", "1/3", "5/2", "i", "2-i"]);
    let (mut symbolic, mut pointwise, mut instances) = (0, 0, 0);
    for k in 0..=4u32 {
        for b in scs(&["-1", "1", "2"]) {
            for alpha in scs(&["0", "1", "3/2"]) {
                for m in -6..=6 {
                    for n in -6..=6 {
                        instances += 1;
                        // Route 1: polynomial residue.
                        let r = f_identity_residue(|j| q_poly(j, k, &alpha, &b), m, n, &alpha, &b);
                        if !r.is_zero() {
                            symbolic += 1;
                        }
                        // Route 2: the identity evaluated at more points than its degree.
                        for t in &points {
                            let (fm, dfm) = q_at(m, k, &alpha, &b, t);
                            let (fn_, dfn) = q_at(n, k, &alpha, &b, t);
                            let (fmn, _) = q_at(m + n, k, &alpha, &b, t);
                            let nb = &Scalar::int(n) * &b;
                            let mb = &Scalar::int(m) * &b;
                            let v = &Scalar::int(n - m) * &fmn - &(&Scalar::int(n) * &fn_)
                                + &Scalar::int(m) * &fm
                                + &(&nb * &dfm) * &w_at(n, &alpha, &b, t)
                                - &(&mb * &dfn) * &w_at(m, &alpha, &b, t);
                            if !v.is_zero() {
                                pointwise += 1;
                                break;
                            }
                        }
                    }
                }
            }
        }
    }
    Verdict::new(
        symbolic == 0 && pointwise == 0,
        format!(
            "{instances} instances (k<=4), symbolic residues nonzero: {symbolic}, pointwise nonzero: {pointwise}"
        ),
    )
}

fn criterion_4() -> Verdict {
    let (mut symbolic, mut pointwise, mut instances) = (0, 0, 0);
    let coeff_sets = [scs(&["1"]), scs(&["0", "1"]), scs(&["2", "-1/3", "i", "5"])];
    for b in scs(&["0", "1/2", "2", "-1/2", "3"]) {
        for coeffs in &coeff_sets {
            let seq = HSeq::new(b.clone(), sc("3/2"), coeffs.clone());
            for m in -6..=6 {
                for n in -6..=6 {
                    instances += 1;
                    if !seq.cocycle_residue(m, n).is_zero() {
                        symbolic += 1;
                    }
                    // h_n(t) = n Σ c_k t^k for b ∉ {±1}.
                    let t = sc("7/3");
                    let h = |j: i64| -> Scalar {
                        coeffs
                            .iter()
                            .enumerate()
                            .fold(Scalar::zero(), |acc, (k, c)| acc + &Scalar::int(j) * c * &t.pow(k as i64).unwrap())
                    };
                    let v = &Scalar::int(n) * &h(n) - &(&Scalar::int(m) * &h(m)) - &Scalar::int(n - m) * &h(m + n);
                    if !v.is_zero() {
                        pointwise += 1;
                    }
                }
            }
        }
    }
    Verdict::new(
        symbolic == 0 && pointwise == 0,
        format!("{instances} instances on [-6,6]^2, symbolic nonzero: {symbolic}, pointwise nonzero: {pointwise}"),
    )
}

fn random_scalar(rng: &mut ChaCha8Rng, nonzero: bool) -> Scalar {
    loop {
        let re = Scalar::ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4));
        let im = if rng.gen_bool(0.4) { Scalar::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3)) } else { Scalar::zero() };
        let x = re + im * Scalar::i();
        if !nonzero || !x.is_zero() {
            return x;
        }
    }
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let bs = scs(&["-1", "0", "1/2", "1", "3", "-1/2"]);
    let window = 3;
    let (mut tuples, mut wrong) = (0, Vec::new());
    for round in 0..4 {
        for b in &bs {
            let lambda = random_scalar(&mut rng, true);
            let alpha = if round == 0 { Scalar::zero() } else { random_scalar(&mut rng, false) };
            let k = rng.gen_range(0..=3);
            let mut h: Vec<Scalar> = (0..=k).map(|_| random_scalar(&mut rng, false)).collect();
            h[k] = random_scalar(&mut rng, true);
            let spec = ModuleSpec::phi(b.clone(), lambda, alpha, h, false).unwrap();
            tuples += 1;
            let want = CanonicalParams::from_spec(&spec).normalized(b);
            // Route 1: the four generators; route 2: the whole window.
            let from_seeds = solve_from_generators(&Seeds::from_spec(&spec), window);
            let from_window = classify(&GenericFamily::from_spec(&spec, window));
            for got in [from_seeds, from_window] {
                if got.canonical() != Some(&want) {
                    wrong.push(format!("b={b} {want}: {got:?}"));
                }
            }
        }
    }
    for r in [&[][..], &["1", "-2"], &["0", "1/2", "i"]] {
        let spec = ModuleSpec::theta(sc("-3/2"), scs(r), false).unwrap();
        tuples += 1;
        let want = CanonicalParams::from_spec(&spec);
        if solve_from_generators(&Seeds::from_spec(&spec), window).canonical() != Some(&want) {
            wrong.push(format!("{want}"));
        }
    }
    Verdict::new(
        wrong.is_empty(),
        format!(
            "{tuples} tuples (ChaCha8 seed 0x5eed0005, b in {{-1,0,1/2,1,3,-1/2}} plus theta), window {window}, mismatches: {}{}",
            wrong.len(),
            wrong.first().map(|w| format!(" e.g. {w}")).unwrap_or_default()
        ),
    )
}

fn k_branch_seeds(b: &Scalar, lambda: &Scalar) -> Seeds {
    let spec = ModuleSpec::phi(b.clone(), lambda.clone(), Scalar::zero(), scs(&["1", "0", "2"]), false).unwrap();
    let mut seeds = Seeds::from_spec(&spec);
    let k = &(&Scalar::one() - b) / b;
    seeds.a_plus = BiPoly::monomial(0, 1, &k * lambda);
    seeds.a_minus = BiPoly::monomial(0, 1, &k / lambda);
    seeds
}

fn criterion_6() -> Verdict {
    let mut problems = Vec::new();
    let base = ModuleSpec::phi(sc("2"), sc("3"), sc("0"), scs(&["0", "1"]), false).unwrap();
    let data = GenericFamily::from_spec(&base, 3);
    for a in scs(&["1", "1/2", "i"]) {
        let fam = GenericFamily::new(
            classify_case(&a, &sc("2"), false),
            3,
            data.a_map().clone(),
            data.g_map().clone(),
        )
        .unwrap();
        let report = check_constraints(&fam);
        // [L_0, W_n]·1 = (n+a) a_n forces a·t·∂_t a_n = 0.
        let hit = report.failures_of("lw-bracket").any(|f| {
            f.indices.first() == Some(&0) && {
                let n = f.indices[1];
                let an = fam.a_m(n).unwrap();
                let expected = &an.partial_t() * &BiPoly::t();
                let residue = parse_poly(&f.residue).unwrap();
                residue == expected.scale(&a) || residue == expected.scale(&-a.clone())
            }
        });
        if !hit {
            problems.push(format!("a={a}: no m=0 lw-bracket failure"));
        }
        match solve_from_generators(&Seeds::from_family(&fam).unwrap(), 3) {
            Outcome::Infeasible(cert) if !cert.residue.is_zero() => {}
            other => problems.push(format!("a={a}: {other:?}")),
        }
    }
    let k_branch = solve_from_generators(&k_branch_seeds(&sc("3"), &sc("2")), 4);
    let k_ok = k_branch.certificate().is_some_and(|c| c.constraint == "k-branch" && !c.residue.is_zero());
    if !k_ok {
        problems.push(format!("b=3 k-branch: {k_branch:?}"));
    }
    Verdict::new(
        problems.is_empty(),
        format!(
            "a in {{1,1/2,i}} certified at [L_0,W_n]; b=3 k-branch rejected as {}{}",
            k_branch.certificate().map(|c| c.to_string()).unwrap_or_default(),
            problems.first().map(|p| format!("; {p}")).unwrap_or_default()
        ),
    )
}

fn criterion_7() -> Verdict {
    let phi = |b: &str, l: &str, a: &str, h: &[&str]| ModuleSpec::phi(sc(b), sc(l), sc(a), scs(h), false).unwrap();
    let theta = |l: &str, r: &[&str]| ModuleSpec::theta(sc(l), scs(r), false).unwrap();
    let table = [
        (phi("2", "3", "0", &["1"]), phi("2", "3", "0", &["1"]), true),
        (phi("2", "3", "0", &["1"]), phi("2", "3", "5/2", &["1"]), true),
        (phi("1/2", "i", "1", &["0", "1"]), phi("1/2", "i", "-7", &["0", "1", "0"]), true),
        (phi("2", "3", "0", &["1"]), phi("2", "-3", "0", &["1"]), false),
        (phi("1", "2", "1", &[]), phi("1", "2", "0", &[]), false),
        (phi("1", "2", "1", &[]), phi("1", "2", "1", &[]), true),
        (phi("-1", "2", "3/2", &["0", "1"]), phi("-1", "2", "1", &["0", "1"]), false),
        (phi("-1", "2", "3/2", &["0", "1"]), phi("-1", "1/2", "3/2", &["0", "1"]), false),
        (phi("0", "2", "0", &["1", "2"]), phi("0", "2", "0", &["1", "3"]), false),
        (phi("0", "2", "0", &["1", "2"]), phi("0", "2", "4", &["1", "2"]), true),
        (theta("2", &["0", "1"]), theta("2", &["0", "1"]), true),
        (theta("2", &["0", "1"]), theta("-2", &["0", "1"]), false),
        (theta("2", &["0", "1"]), theta("2", &["1"]), false),
    ];
    let mut wrong = 0;
    for (l, r, want) in &table {
        let direct = isom_decide(&CanonicalParams::from_spec(l), &CanonicalParams::from_spec(r), l.b()).unwrap();
        let via_specs = isom_decide_specs(l, r).unwrap();
        if direct != *want || via_specs != *want {
            wrong += 1;
        }
    }
    let mixed = isom_decide_specs(&phi("1", "2", "0", &[]), &theta("2", &[])).is_err();
    Verdict::new(
        wrong == 0 && mixed,
        format!("{} pairs, {wrong} wrong; phi vs theta refused: {mixed}", table.len()),
    )
}

/// Smallest number of rounds after which `1` is in the closure, searched
/// up to `limit`.
fn rounds_to_one(spec: &ModuleSpec, seeds: &[BiPoly], limit: usize) -> Option<usize> {
    (0..=limit).find(|&r| orbit_closure(spec, seeds, DEFAULT_WINDOW, DEFAULT_BOUNDS, r).unwrap().contains_one)
}

fn criterion_8() -> Verdict {
    let j_pos = |_i: u32, j: u32| j >= 1;
    let (w, bounds) = (DEFAULT_WINDOW, (6, 6));
    let phi = |b: &str, a: &str| ModuleSpec::phi(sc(b), sc("2"), sc(a), scs(&["1", "-1/3", "2"]), false).unwrap();
    let reducible = [
        phi("2", "0"),
        phi("2", "3/2"),
        phi("1", "0"),
        phi("-1", "0"),
        ModuleSpec::theta(sc("2"), scs(&["0", "1", "1"]), false).unwrap(),
    ];
    let invariant_ok = reducible.iter().all(|s| check_invariant_subspace(s, &j_pos, w, bounds));
    let target = ModuleSpec::phi(sc("1"), sc("2"), sc("1"), vec![], false).unwrap();
    let broken_ok = !check_invariant_subspace(&target, &j_pos, w, bounds);

    let seeds = [p("t"), p("s"), p("t^2")];
    let joint = orbit_closure(&target, &seeds, w, DEFAULT_BOUNDS, DEFAULT_ROUNDS).unwrap();
    // Brute-force round counts, including a search well past the default.
    let joint_rounds = rounds_to_one(&target, &seeds, DEFAULT_ROUNDS);
    let single: Vec<(String, Option<usize>)> =
        seeds.iter().map(|s| (s.to_string(), rounds_to_one(&target, std::slice::from_ref(s), 2 * DEFAULT_ROUNDS))).collect();
    let per_seed: Vec<String> = single
        .iter()
        .map(|(s, r)| format!("{s}:{}", r.map_or("never".into(), |r| r.to_string())))
        .collect();
    Verdict::new(
        invariant_ok && broken_ok && joint.contains_one && joint_rounds.is_some_and(|r| r <= DEFAULT_ROUNDS),
        format!(
            "j>=1 invariant for b=2, b=+-1 with alpha=0, theta: {invariant_ok}; not for phi(b=1,alpha=1): {broken_ok}; \
             closure of {{t, s, t^2}} reaches 1 after {} round(s) (N={w}, bounds {:?}, default {} rounds); \
             per seed: {} (s lies in the submodule f(0,alpha)=0)",
            joint_rounds.map_or("no".into(), |r| r.to_string()),
            DEFAULT_BOUNDS,
            DEFAULT_ROUNDS,
            per_seed.join(" ")
        ),
    )
}

fn criterion_9(grid: &[ModuleSpec]) -> Verdict {
    let (mut checks, mut failures) = (0, 0);
    for spec in grid {
        let r = verify_consistency(spec, 4, 4);
        checks += r.checks;
        failures += r.failures.len();
    }
    Verdict::new(failures == 0, format!("{} modules, |m|<=4, degree<=4, {checks} checks, {failures} failures", grid.len()))
}

fn criterion_10(grid: &[ModuleSpec]) -> Verdict {
    let (mut checks, mut failures) = (0, 0);
    for spec in grid {
        let r = verify_freeness(spec, 5);
        checks += r.checks;
        failures += r.failures.len();
    }
    Verdict::new(failures == 0, format!("{} modules, degree<=5, {checks} checks, {failures} failures", grid.len()))
}

fn main() -> ExitCode {
    let grid = module_grid();
    let criteria: Vec<Criterion> = vec![
        ("algebra axioms", Box::new(criterion_1)),
        ("module axioms", Box::new(|| criterion_2(&grid))),
        ("q-family identity", Box::new(criterion_3)),
        ("cocycle identity", Box::new(criterion_4)),
        ("classification round trip", Box::new(criterion_5)),
        ("infeasibility certificates", Box::new(criterion_6)),
        ("isomorphism decisions", Box::new(criterion_7)),
        ("reducibility and orbit evidence", Box::new(criterion_8)),
        ("generic action consistency", Box::new(|| criterion_9(&grid))),
        ("freeness", Box::new(|| criterion_10(&grid))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name} [{:.2} s]: {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
