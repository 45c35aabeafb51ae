//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use etorus::grids::{class_key, simplex_count};
use etorus::transform::torus_classes;
use etorus::{
    abelian_orthogonality_oracle, count_formula, enumerate_fe_m, enumerate_lambda_e_m,
    enumerate_weyl, evaluate_e, even_subgroup, stabilizer_order_brute, Complex64, ETransform64,
    Family, Lattice, Part, PointCoord, RootSystemData, SimpleType, WeightCoord, WeylElement,
};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ty(family: Family, rank: usize) -> SimpleType {
    SimpleType::new(family, rank).unwrap()
}

fn counting_types() -> Vec<SimpleType> {
    let mut v = Vec::new();
    for n in 1..=4 {
        v.push(ty(Family::A, n));
    }
    for n in 2..=4 {
        v.push(ty(Family::C, n));
    }
    for n in 3..=4 {
        v.push(ty(Family::B, n));
    }
    for n in 4..=5 {
        v.push(ty(Family::D, n));
    }
    v
}

fn transform_types() -> Vec<SimpleType> {
    vec![
        ty(Family::A, 1),
        ty(Family::A, 2),
        ty(Family::A, 3),
        ty(Family::B, 3),
        ty(Family::C, 2),
        ty(Family::C, 3),
        ty(Family::D, 4),
    ]
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn grid_counts_c2() -> Outcome {
    let rsd = RootSystemData::new(ty(Family::C, 2));
    let pts = enumerate_fe_m(&rsd, 4, 1).map_err(|e| e.to_string())?;
    let wts = enumerate_lambda_e_m(&rsd, 4, 1).map_err(|e| e.to_string())?;
    let eps_sum: u64 = pts.iter().map(|p| p.eps).sum();
    ensure(pts.len() == 10, || format!("|F^e_4| = {}", pts.len()))?;
    ensure(wts.len() == 10, || format!("|Lambda^e_4| = {}", wts.len()))?;
    ensure(eps_sum == 32, || format!("sum eps = {eps_sum}"))?;
    Ok(format!(
        "|F^e|={} |Lambda^e|={} sum eps={eps_sum}",
        pts.len(),
        wts.len()
    ))
}

/// Expected values read off the coordinate pattern (which entries vanish).
fn c2_coefficient_table() -> Outcome {
    let rsd = RootSystemData::new(ty(Family::C, 2));
    let mut checked = 0;
    for level in [4, 5, 6, 8] {
        for p in enumerate_fe_m(&rsd, level, 1).map_err(|e| e.to_string())? {
            let z: Vec<bool> = p.bary.coords.iter().map(|&s| s == 0).collect();
            let expected = match (p.bary.part, z.as_slice()) {
                (Part::Reflected, _) => 4,
                (_, [true, true, false]) => 1,
                (_, [true, false, true]) => 2,
                (_, [false, true, true]) => 1,
                (_, [_, _, _]) => 4,
                _ => unreachable!(),
            };
            ensure(p.eps == expected, || {
                format!(
                    "M={level} point {:?}: eps {} != {expected}",
                    p.bary.coords, p.eps
                )
            })?;
            checked += 1;
        }
        for w in enumerate_lambda_e_m(&rsd, level, 1).map_err(|e| e.to_string())? {
            let z: Vec<bool> = w.bary.coords.iter().map(|&s| s == 0).collect();
            let expected = match (w.bary.part, z.as_slice()) {
                (Part::Reflected, _) => 1,
                (_, [true, true, false]) => 2,
                (_, [true, false, true]) => 4,
                (_, [false, true, true]) => 4,
                (_, [_, _, _]) => 1,
                _ => unreachable!(),
            };
            ensure(w.h_dual == expected, || {
                format!(
                    "M={level} weight {:?}: h {} != {expected}",
                    w.bary.coords, w.h_dual
                )
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} entries match"))
}

fn counting() -> Outcome {
    let mut checked = 0;
    for t in counting_types() {
        let rsd = RootSystemData::new(t);
        let m = rsd.coxeter;
        for level in 1..=10 {
            let enumerated = enumerate_fe_m(&rsd, level, 1)
                .map_err(|e| e.to_string())?
                .len() as u128;
            let formula = count_formula(t, level).map_err(|e| e.to_string())?;
            ensure(enumerated == formula, || {
                format!("{t} M={level}: enumerated {enumerated}, formula {formula}")
            })?;
            let base = simplex_count(&rsd.marks, level) as u128;
            let split = if level < m {
                base
            } else if level == m {
                base + 1
            } else {
                base + simplex_count(&rsd.marks, level - m) as u128
            };
            ensure(enumerated == split, || {
                format!("{t} M={level}: |F_M| plus interior gives {split}")
            })?;
            if t.family() == Family::B {
                let c = count_formula(ty(Family::C, t.rank()), level).map_err(|e| e.to_string())?;
                ensure(c == formula, || {
                    format!("B{0} vs C{0} at M={level}: {formula} != {c}", t.rank())
                })?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (type, M) pairs"))
}

fn stabilizers() -> Outcome {
    let mut checked = 0;
    for t in counting_types() {
        let rsd = RootSystemData::new(t);
        let even = even_subgroup(&enumerate_weyl(&rsd).map_err(|e| e.to_string())?);
        for level in 1..=6 {
            for p in enumerate_fe_m(&rsd, level, 1).map_err(|e| e.to_string())? {
                let brute = stabilizer_order_brute(&p.coords, level, &even, &rsd, Lattice::Point);
                let diagram = even.len() as u64 / p.eps;
                ensure(brute == diagram, || {
                    format!(
                        "{t} M={level} point {:?}: {diagram} vs {brute}",
                        p.bary.coords
                    )
                })?;
                checked += 1;
            }
            for w in enumerate_lambda_e_m(&rsd, level, 1).map_err(|e| e.to_string())? {
                let brute = stabilizer_order_brute(&w.coords, level, &even, &rsd, Lattice::Weight);
                ensure(brute == w.h_dual, || {
                    format!(
                        "{t} M={level} weight {:?}: {} vs {brute}",
                        w.bary.coords, w.h_dual
                    )
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} stabilizers agree"))
}

fn orthogonality() -> Outcome {
    let mut worst_off = 0.0f64;
    let mut worst_diag = 0.0f64;
    for t in transform_types() {
        for level in 1..=5 {
            let tr = ETransform64::new(t, level, 1).map_err(|e| e.to_string())?;
            let g = tr.gram_matrix();
            if t == ty(Family::C, 2) && level == 4 {
                ensure(tr.norm_scale() == 128.0, || {
                    format!("C2 M=4 scale {}", tr.norm_scale())
                })?;
            }
            ensure(g.max_offdiag_scaled < 1e-9, || {
                format!("{t} M={level}: off-diagonal {:e}", g.max_offdiag_scaled)
            })?;
            ensure(g.max_diag_reldev < 1e-10, || {
                format!("{t} M={level}: diagonal {:e}", g.max_diag_reldev)
            })?;
            worst_off = worst_off.max(g.max_offdiag_scaled);
            worst_diag = worst_diag.max(g.max_diag_reldev);
        }
    }
    Ok(format!(
        "max off-diagonal/scale {worst_off:.2e}, max diagonal rel dev {worst_diag:.2e}"
    ))
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let mut worst_err = 0.0f64;
    let mut worst_planch = 0.0f64;
    for t in transform_types() {
        for level in 1..=5 {
            let tr = ETransform64::new(t, level, 1).map_err(|e| e.to_string())?;
            for _ in 0..100 {
                let values: Vec<Complex64> = (0..tr.len())
                    .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                let f = tr.samples(values).map_err(|e| e.to_string())?;
                let cv = tr.forward(&f).map_err(|e| e.to_string())?;
                let back = tr.inverse(&cv).map_err(|e| e.to_string())?;
                let err = back
                    .values
                    .iter()
                    .zip(&f.values)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                let p = tr.plancherel_check(&f).map_err(|e| e.to_string())?;
                ensure(err < 1e-9, || {
                    format!("{t} M={level}: reconstruction error {err:e}")
                })?;
                ensure(p.reldev < 1e-10, || {
                    format!("{t} M={level}: Plancherel {:e}", p.reldev)
                })?;
                worst_err = worst_err.max(err);
                worst_planch = worst_planch.max(p.reldev);
            }
        }
    }
    Ok(format!(
        "max reconstruction error {worst_err:.2e}, max Plancherel rel dev {worst_planch:.2e}"
    ))
}

/// `lambda - lambda'` lies in `M Q` iff `C^-T (lambda - lambda')` is in `M Z^n`.
fn in_mq(rsd: &RootSystemData, diff: &[i64], level: i64) -> bool {
    let n = rsd.rank();
    let c = rsd.center;
    (0..n).all(|i| {
        let s: i64 = (0..n).map(|k| rsd.cartan_adjugate[(k, i)] * diff[k]).sum();
        s % (c * level) == 0
    })
}

fn abelian() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut hits = 0;
    let mut total = 0;
    for t in [ty(Family::C, 2), ty(Family::A, 2)] {
        let rsd = RootSystemData::new(t);
        let n = rsd.rank();
        for level in 1..=5i64 {
            let full = (rsd.center * level.pow(n as u32)) as f64;
            for k in 0..40 {
                let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-12..=12)).collect();
                let b: Vec<i64> = if k % 4 == 0 {
                    // force a hit: shift by M times a random root
                    let q: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
                    (0..n)
                        .map(|i| {
                            a[i] + level * (0..n).map(|r| q[r] * rsd.cartan[(r, i)]).sum::<i64>()
                        })
                        .collect()
                } else {
                    (0..n).map(|_| rng.gen_range(-12..=12)).collect()
                };
                let diff: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
                let expected = if in_mq(&rsd, &diff, level) { full } else { 0.0 };
                if expected != 0.0 {
                    hits += 1;
                }
                let v: Complex64 =
                    abelian_orthogonality_oracle(&rsd, level, &WeightCoord(a), &WeightCoord(b))
                        .map_err(|e| e.to_string())?;
                let err = (v - Complex::new(expected, 0.0)).norm();
                ensure(err < 1e-9, || {
                    format!("{t} M={level}: sum {v}, expected {expected}")
                })?;
                worst = worst.max(err);
                total += 1;
            }
        }
    }
    Ok(format!(
        "{total} pairs ({hits} in MQ), max error {worst:.2e}"
    ))
}

fn symmetry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    let types = counting_types();
    for t in types.iter().copied() {
        let rsd = RootSystemData::new(t);
        let n = rsd.rank();
        let even = even_subgroup(&enumerate_weyl(&rsd).map_err(|e| e.to_string())?);
        for _ in 0..1000 {
            let w: &WeylElement = &even[rng.gen_range(0..even.len())];
            let level = rng.gen_range(1..=9);
            let lambda: Vec<i64> = (0..n).map(|_| rng.gen_range(-10..=10)).collect();
            let y: Vec<i64> = (0..n).map(|_| rng.gen_range(-20..=20)).collect();
            let k = rng.gen_range(0..n);
            let q: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
            let x = PointCoord {
                coords: y.clone(),
                level,
            };
            let lam = WeightCoord(lambda.clone());
            let base: Complex64 = evaluate_e(&rsd, &even, &lam, &x);

            let wx = w.apply_to_point(&x);
            let v1: Complex64 = evaluate_e(&rsd, &even, &lam, &wx);
            let v2: Complex64 = evaluate_e(&rsd, &even, &w.apply_to_weight(&lam), &x);
            // x + alpha_k^v: column k of C in coweight coordinates, scaled by M
            let shifted: Vec<i64> = (0..n).map(|i| y[i] + level * rsd.cartan[(i, k)]).collect();
            let v3: Complex64 = evaluate_e(
                &rsd,
                &even,
                &lam,
                &PointCoord {
                    coords: shifted,
                    level,
                },
            );
            // lambda + M q, q in Q: rows of C in weight coordinates
            let lifted: Vec<i64> = (0..n)
                .map(|i| lambda[i] + level * (0..n).map(|r| q[r] * rsd.cartan[(r, i)]).sum::<i64>())
                .collect();
            let v4: Complex64 = evaluate_e(&rsd, &even, &WeightCoord(lifted.clone()), &x);

            for (name, v) in [
                ("W^e argument", v1),
                ("W^e label", v2),
                ("coroot shift", v3),
                ("MQ label", v4),
            ] {
                let err = (v - base).norm();
                ensure(err < 1e-12, || format!("{t}: {name} deviation {err:e}"))?;
                worst = worst.max(err);
            }

            // the orbit phase multisets must agree exactly for the label symmetries
            let phases = |label: &[i64]| {
                let mut p: Vec<i64> = even
                    .iter()
                    .map(|g| {
                        let img = g.act(Lattice::Weight, label);
                        rsd.pairing_numerator(&img, &y, level)
                            .rem_euclid(rsd.center * level)
                    })
                    .collect();
                p.sort();
                p
            };
            let reference = phases(&lambda);
            ensure(phases(&lifted) == reference, || {
                format!("{t}: MQ label phases differ")
            })?;
            ensure(
                phases(&w.act(Lattice::Weight, &lambda)) == reference,
                || format!("{t}: label phases differ"),
            )?;
        }
    }
    Ok(format!(
        "{} types x 1000 tuples, max deviation {worst:.2e}",
        types.len()
    ))
}

/// Exhaustive check that the W^e orbits of F^e_M tile the torus for C_2, M = 4.
fn torus_sanity() -> Result<(), String> {
    let rsd = RootSystemData::new(ty(Family::C, 2));
    let even = even_subgroup(&enumerate_weyl(&rsd).map_err(|e| e.to_string())?);
    let classes = torus_classes(&rsd, &even, 4, 1).map_err(|e| e.to_string())?;
    let keys: std::collections::HashSet<_> = classes
        .iter()
        .map(|v| class_key(&rsd, v, 4, Lattice::Point))
        .collect();
    ensure(keys.len() == 32, || format!("{} torus classes", keys.len()))
}

fn run(name: &str, limit: Duration, f: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
    let elapsed = start.elapsed();
    let (ok, detail) = match outcome {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; took {elapsed:.2?}, limit {limit:?}")),
        Err(e) => (false, e),
    };
    println!(
        "{} {name}: {detail} [{elapsed:.2?}]",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "1 C2 M=4 grid sizes",
            Duration::from_secs(1),
            grid_counts_c2,
        ),
        (
            "2 C2 coefficient table",
            Duration::from_secs(1),
            c2_coefficient_table,
        ),
        ("3 counting formulas", Duration::from_secs(30), counting),
        ("4 stabilizer oracle", Duration::from_secs(120), stabilizers),
        ("5 orthogonality", Duration::from_secs(120), orthogonality),
        (
            "6 transform round trip",
            Duration::from_secs(600),
            round_trip,
        ),
        ("7 abelian character sums", Duration::from_secs(30), abelian),
        (
            "8 E-function symmetries",
            Duration::from_secs(600),
            symmetry,
        ),
    ];
    let mut all = true;
    for (name, limit, f) in criteria {
        all &= run(name, limit, f);
    }
    if let Err(e) = torus_sanity() {
        println!("FAIL torus tiling: {e}");
        all = false;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
