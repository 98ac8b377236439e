//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use qccs::analysis::{optimality, proposition1_check, rho_trend};
use qccs::construction::{build_ccc, build_qccs, canonical_seed};
use qccs::correlation::{accf, code_accf_counts, family_report, lemma1_residual, Arithmetic, Code};
use qccs::cyclotomic::CyclotomicRing;
use qccs::verify::verify_family;
use qccs::{sequence_of, Params, PhaseSequence, Polynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

const ZERO_TOL: f64 = 1e-6;

fn params(p: u32, m: usize, n: usize, lambda: u32) -> Params {
    Params::new(p, m, n, lambda).unwrap()
}

fn golden_sequence() -> Outcome {
    let f = Polynomial::parse(3, 3, 3, "x0x2 + 2x2x1 + 2x1^2 + x2 + 1").unwrap();
    let expected = [
        1, 2, 0, 0, 0, 0, 0, 2, 1, 1, 0, 2, 0, 1, 2, 0, 0, 0, 1, 1, 1, 0, 2, 1, 0, 1, 2,
    ];
    sequence_of(&f).unwrap();
    let mut best = Duration::MAX;
    let mut got = None;
    for _ in 0..20 {
        let start = Instant::now();
        let s = sequence_of(&f).unwrap();
        best = best.min(start.elapsed());
        got = s.phases();
    }
    ensure!(got.as_deref() == Some(&expected[..]), "sequence {got:?}");
    ensure!(best < Duration::from_millis(1), "took {best:?}");
    Ok(format!("27 entries match exactly, {best:?}"))
}

/// Checks one set `k`: theta within tolerance and the exact in-phase peak.
fn check_ccc(pr: Params, k: u32) -> Result<Vec<Code>, String> {
    let seed = canonical_seed(pr, None, None).unwrap();
    let codes = build_ccc(&seed, k).unwrap();
    ensure!(codes.len() == pr.flock_size(), "{} codes", codes.len());
    let report = family_report(&codes, ZERO_TOL, Arithmetic::Float).unwrap();
    ensure!(
        report.theta <= ZERO_TOL,
        "{pr:?} k={k}: theta {} at {:?}",
        report.theta,
        report.argmax
    );
    let peak = (pr.p as i64).pow((pr.m + pr.n + 1) as u32);
    for (i, code) in codes.iter().enumerate() {
        let counts = code_accf_counts(code, code, 0).unwrap();
        ensure!(
            counts[0] == peak && counts[1..].iter().all(|&c| c == 0),
            "{pr:?} k={k} code {i}: zero-shift counts {counts:?}"
        );
    }
    Ok(codes)
}

fn per_set_complementarity() -> Outcome {
    let mut sets = 0;
    for (p, m, n, lambda) in [(3, 3, 1, 3), (3, 3, 1, 6), (5, 2, 0, 5), (3, 4, 2, 3)] {
        let pr = params(p, m, n, lambda);
        for k in 1..p {
            check_ccc(pr, k)?;
            sets += 1;
        }
    }
    Ok(format!(
        "{sets} sets, theta <= {ZERO_TOL:e}, zero-shift peak p^(m+n+1) exact"
    ))
}

fn check_qccs(pr: Params, expected: (usize, usize, usize, usize)) -> Outcome {
    let fam = build_qccs(&canonical_seed(pr, None, None).unwrap()).unwrap();
    let d = fam.descriptor;
    ensure!(
        (d.K, d.M, d.L, d.theta_bound) == expected,
        "{pr:?}: descriptor {d:?}"
    );
    ensure!(fam.codes.len() == d.K, "{} codes", fam.codes.len());
    let report = verify_family(&fam, ZERO_TOL, Arithmetic::Float).unwrap();
    let within = report
        .within_set_theta
        .values()
        .copied()
        .fold(0.0, f64::max);
    let cross = report.cross_set_theta.unwrap();
    ensure!(within <= ZERO_TOL, "{pr:?}: within-set theta {within}");
    ensure!(
        cross <= d.theta_bound as f64 + ZERO_TOL,
        "{pr:?}: cross-set theta {cross}"
    );
    ensure!(report.pass, "{pr:?}: {:?}", report.failures);
    Ok(format!("{expected:?} cross {cross:.6}"))
}

fn cross_set_bound() -> Outcome {
    let mut parts = Vec::new();
    for (p, m, n, lambda, expected) in [
        (3, 3, 2, 3, (54, 27, 27, 27)),
        (3, 2, 1, 3, (18, 9, 9, 9)),
        (5, 2, 1, 5, (100, 25, 25, 25)),
    ] {
        parts.push(check_qccs(params(p, m, n, lambda), expected)?);
    }
    Ok(parts.join("; "))
}

fn near_optimality() -> Outcome {
    // 50-digit evaluations of theta / Welch at theta = 3^m, n = m - 1.
    let reference = [
        (2, 1.9404721329525534),
        (3, 1.9810487585653825),
        (4, 1.993_779_382_525_818),
    ];
    let mut shown = Vec::new();
    for (m, want) in reference {
        let pr = params(3, m, m - 1, 3);
        let theta = 3f64.powi(m as i32);
        let r = optimality(pr, theta).unwrap();
        let rho = r.rho.unwrap();
        let (k, mm, l) = (2.0 * theta, theta, theta);
        let welch = mm * l * ((k / mm - 1.0) / (k * (2.0 * l - 1.0) - 1.0)).sqrt();
        let closed = (4.0 - 2.0 / theta - 1.0 / (theta * theta)).sqrt();
        ensure!(rho > 1.0 && rho <= 2.0, "m={m}: rho {rho}");
        ensure!(
            (rho - theta / welch).abs() <= 1e-9,
            "m={m}: rho {rho} vs definition {}",
            theta / welch
        );
        ensure!(
            (rho - closed).abs() <= 1e-9,
            "m={m}: rho {rho} vs closed form {closed}"
        );
        ensure!(
            (rho - want).abs() <= 1e-9,
            "m={m}: rho {rho} vs reference {want}"
        );
        shown.push(format!("m={m} rho={rho:.6}"));
    }
    Ok(shown.join(", "))
}

fn rho_trend_large_p() -> Outcome {
    // 50-digit evaluations of p^m / Liu at n = m - 1; independent of m.
    let reference = [
        1.5381890013208515,
        1.375_429_319_320_194,
        1.2550582448957885,
        1.224_744_871_391_589,
    ];
    let ps = [5, 7, 11, 13];
    let mut table = Vec::new();
    for m in 1..=3 {
        let rows = rho_trend(&ps, m).unwrap();
        for (row, want) in rows.iter().zip(reference) {
            ensure!(
                (row.rho - want).abs() <= 1e-9,
                "p={} m={m}: rho {}",
                row.p,
                row.rho
            );
            ensure!(
                (row.rho - row.closed_form_rho).abs() <= 1e-9,
                "p={} m={m}: closed form",
                row.p
            );
        }
        ensure!(
            rows.windows(2).all(|w| w[1].rho < w[0].rho),
            "not strictly decreasing at m={m}"
        );
        ensure!(rows[0].rho < 1.6, "p=5 rho {}", rows[0].rho);
        if m == 2 {
            table = rows
                .iter()
                .map(|r| format!("p={}:{:.4}", r.p, r.rho))
                .collect();
        }
    }
    Ok(table.join(" > "))
}

fn restriction_sum_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut checks = 0;
    let mut worst: f64 = 0.0;
    for m in [2usize, 3] {
        for lambda in [3u32, 6] {
            for _ in 0..20 {
                let g = common::random_polynomial(&mut rng, 3, m, lambda, 2, 6);
                let h = common::random_polynomial(&mut rng, 3, m, lambda, 2, 6);
                for w in 0..m {
                    for (k1, k2) in [(1u32, 2u32), (2, 1)] {
                        let out = proposition1_check(&g, &h, k1, k2, w).unwrap();
                        ensure!(
                            out.pair_count == 3usize.pow(w as u32),
                            "|S| = {}",
                            out.pair_count
                        );
                        ensure!(
                            out.holds,
                            "g={g}, h={h}, k=({k1},{k2}), w={w}: ratio {}",
                            out.max_ratio
                        );
                        let oracle = oracle_restriction_sum(&g, &h, k1, k2, w);
                        ensure!(
                            (oracle - out.max_ratio).abs() <= 1e-9,
                            "engine ratio {} vs reference {oracle}",
                            out.max_ratio
                        );
                        worst = worst.max(out.max_ratio);
                        checks += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{checks} (g, h, k1, k2, w) cases, max |sum| / p^(m-w) = {worst:.6}"
    ))
}

/// Reference for the restriction sum: `S` is walked as `e2 = k2^-1 k1 e1`.
fn oracle_restriction_sum(g: &Polynomial, h: &Polynomial, k1: u32, k2: u32, w: usize) -> f64 {
    let (p, m, lambda) = (g.p(), g.arity(), g.lambda());
    let k2_inv = (1..p).find(|v| v * k2 % p == 1).unwrap();
    let len = (p as usize).pow(m as u32) as isize;
    let pairs: Vec<_> = (0..(p as usize).pow(w as u32))
        .map(|e| {
            let e1 = common::digits(e, p, w);
            let e2: Vec<u32> = e1.iter().map(|&v| v * k1 * k2_inv % p).collect();
            let r1: Vec<_> = e1.iter().copied().enumerate().collect();
            let r2: Vec<_> = e2.iter().copied().enumerate().collect();
            (common::sequence(g, &r1), common::sequence(h, &r2))
        })
        .collect();
    let bound = (p as f64).powi((m - w) as i32);
    (-(len - 1)..len)
        .map(|tau| {
            pairs
                .iter()
                .map(|(a, b)| common::accf(a, b, lambda, tau))
                .sum::<num_complex::Complex64>()
                .norm()
                / bound
        })
        .fold(0.0, f64::max)
}

fn restriction_decomposition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let lambda = if case % 2 == 0 { 3 } else { 6 };
        let f = common::random_polynomial(&mut rng, 3, 3, lambda, 3, 6);
        let f2 = common::random_polynomial(&mut rng, 3, 3, lambda, 3, 6);
        let j: Vec<usize> = (0..3).filter(|_| rng.gen_bool(0.5)).take(2).collect();
        let tau = rng.gen_range(-26isize..27);
        let residual = lemma1_residual(&f, &f2, &j, tau).unwrap();
        ensure!(
            residual <= 1e-9,
            "f={f}, f'={f2}, J={j:?}, tau={tau}: residual {residual}"
        );

        let whole = common::accf(
            &common::sequence(&f, &[]),
            &common::sequence(&f2, &[]),
            lambda,
            tau,
        );
        let mut split = num_complex::Complex64::new(0.0, 0.0);
        for c1 in 0..3usize.pow(j.len() as u32) {
            for c2 in 0..3usize.pow(j.len() as u32) {
                let r1: Vec<_> = j
                    .iter()
                    .copied()
                    .zip(common::digits(c1, 3, j.len()))
                    .collect();
                let r2: Vec<_> = j
                    .iter()
                    .copied()
                    .zip(common::digits(c2, 3, j.len()))
                    .collect();
                split += common::accf(
                    &common::sequence(&f, &r1),
                    &common::sequence(&f2, &r2),
                    lambda,
                    tau,
                );
            }
        }
        let oracle_residual = (whole - split).norm();
        ensure!(
            oracle_residual <= 1e-9,
            "reference residual {oracle_residual}"
        );
        worst = worst.max(residual);
    }
    Ok(format!("100 instances, max residual {worst:.2e}"))
}

fn alphabet_independence() -> Outcome {
    let mut parts = Vec::new();
    for lambda in [3, 6] {
        let pr = params(3, 3, 2, lambda);
        for k in 1..3 {
            check_ccc(pr, k)?;
        }
        parts.push(format!(
            "lambda={lambda}: {}",
            check_qccs(pr, (54, 27, 27, 27))?
        ));
    }
    Ok(parts.join("; "))
}

fn engine_vs_reference() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut values = 0usize;
    for _ in 0..1000 {
        let lambda = [3u32, 5, 6, 9, 10, 15][rng.gen_range(0..6)];
        let len = rng.gen_range(1..=48);
        let zero_rate = rng.gen_range(0.0..0.5);
        let mut draw = || -> Vec<Option<u32>> {
            (0..len)
                .map(|_| (!rng.gen_bool(zero_rate)).then(|| rng.gen_range(0..lambda)))
                .collect()
        };
        let (a, b) = (draw(), draw());
        let sa = PhaseSequence::new(lambda, a.clone()).unwrap();
        let sb = PhaseSequence::new(lambda, b.clone()).unwrap();
        for tau in -(len as isize - 1)..len as isize {
            let got = accf(&sa, &sb, tau).unwrap();
            let want = common::accf(&a, &b, lambda, tau);
            ensure!(
                (got - want).norm() <= 1e-9,
                "lambda={lambda} tau={tau}: {got} vs {want}"
            );
            values += 1;
        }
    }

    // Every value the float sweep calls zero on the complementarity sets is
    // exactly zero in Z[xi].
    let mut zeros = 0usize;
    for (p, m, n, lambda) in [(3, 3, 1, 3), (3, 3, 1, 6), (5, 2, 0, 5), (3, 4, 2, 3)] {
        let pr = params(p, m, n, lambda);
        let ring = CyclotomicRing::new(lambda).unwrap();
        let seed = canonical_seed(pr, None, None).unwrap();
        for k in 1..p {
            let codes = build_ccc(&seed, k).unwrap();
            let exact = family_report(&codes, ZERO_TOL, Arithmetic::Exact).unwrap();
            ensure!(
                exact.theta == 0.0,
                "{pr:?} k={k}: exact theta {}",
                exact.theta
            );
            let len = pr.length() as isize;
            for (i, a) in codes.iter().enumerate() {
                for b in &codes[i..] {
                    for tau in -(len - 1)..len {
                        let counts = code_accf_counts(a, b, tau).unwrap();
                        if ring.to_complex(&counts).norm() < ZERO_TOL {
                            ensure!(
                                ring.is_zero(&counts),
                                "{pr:?} k={k} tau={tau}: float zero, exact nonzero"
                            );
                            zeros += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "{values} shifted values on 1000 pairs within 1e-9; {zeros} float zeros exact"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("golden sequence for the worked example", golden_sequence),
        ("per-set complementarity", per_set_complementarity),
        ("cross-set bound p^m", cross_set_bound),
        ("near-optimality at p = 3", near_optimality),
        ("rho trend for p > 3", rho_trend_large_p),
        ("restriction-sum bound", restriction_sum_bound),
        ("restriction decomposition", restriction_decomposition),
        ("alphabet independence", alphabet_independence),
        ("engine vs reference", engine_vs_reference),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({detail}) [{secs:.2}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
