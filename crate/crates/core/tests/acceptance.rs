//! Acceptance criteria, one test each. Run with
//! `cargo test -p bangcf --test acceptance -- --nocapture --test-threads=1`
//! to see the PASS/FAIL line for every criterion.

use std::time::{Duration, Instant};

use bangcf::analysis::{self, ordering_check, OrderingVerdict};
use bangcf::cf_core::{convergents, convergents_from_terms, evaluate, terms, Family, GcfSpec};
use bangcf::cf_invert::{invert, InversionResult};
use bangcf::constants::{decimal_len, e_enclosure};
use bangcf::derangement::{
    factorial, quadrature_relative_error, subfactorial_integral, subfactorial_rec1, subfactorial_rec2,
    subfactorial_sum, Method, SubfactorialTable,
};
use bangcf::scan::{emit_hits_csv, run_scan, Rule, ScanGrid};
use bangcf::{ExactInt, ExactRational};
use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Runs one criterion, prints its verdict line and fails the test on
/// error or when the time budget is exceeded.
fn criterion(id: u32, title: &str, budget: Option<Duration>, check: impl FnOnce() -> Result<(), String>) {
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let outcome = outcome.and_then(|()| match budget {
        Some(b) if elapsed > b => Err(format!("took {elapsed:?}, budget {b:?}")),
        _ => Ok(()),
    });
    match &outcome {
        Ok(()) => println!("[PASS] {id:>2}. {title} ({:.2?})", elapsed),
        Err(msg) => println!("[FAIL] {id:>2}. {title}: {msg}"),
    }
    if let Err(msg) = outcome {
        panic!("criterion {id} failed: {msg}");
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn int(x: i64) -> ExactInt {
    BigInt::from(x)
}

fn rat(x: &ExactInt) -> ExactRational {
    ExactRational::from_integer(x.clone())
}

fn family_pq(fam: Family, n: usize) -> (Vec<ExactInt>, Vec<ExactInt>) {
    convergents(&GcfSpec::family(fam), n)
        .unwrap()
        .into_iter()
        .map(|c| (c.p, c.q))
        .unzip()
}

#[test]
fn c01_subfactorial_golden_values() {
    criterion(1, "subfactorial golden values, four methods, n = 0..7", Some(Duration::from_secs(1)), || {
        let want: Vec<ExactInt> = [1, 0, 1, 2, 9, 44, 265, 1854].into_iter().map(int).collect();
        for m in Method::ALL {
            let got = SubfactorialTable::build(7, m).map_err(|e| e.to_string())?.values;
            ensure(got == want, || format!("{m} gave {got:?}"))?;
        }
        Ok(())
    });
}

#[test]
fn c02_cross_method_agreement() {
    criterion(2, "rec1 = rec2 = sum for n <= 500", Some(Duration::from_secs(5)), || {
        let rec1 = SubfactorialTable::build(500, Method::Rec1).unwrap().values;
        let rec2 = SubfactorialTable::build(500, Method::Rec2).unwrap().values;
        ensure(rec1 == rec2, || "rec1 and rec2 tables differ".into())?;
        for n in 0..=500u32 {
            let s = subfactorial_sum(n).map_err(|e| e.to_string())?;
            ensure(s == rec1[n as usize], || format!("sum differs at n={n}"))?;
        }
        // spot-check the single-value entry points against the tables
        for n in [0u32, 1, 2, 77, 250, 500] {
            ensure(subfactorial_rec1(n) == rec1[n as usize], || format!("rec1({n})"))?;
            ensure(subfactorial_rec2(n) == rec2[n as usize], || format!("rec2({n})"))?;
        }
        Ok(())
    });
}

#[test]
fn c03_nearest_integer_law() {
    criterion(3, "|n!/e - !n| < 1/2 with certified e, 1 <= n <= 100", Some(Duration::from_secs(10)), || {
        let half = ExactRational::new(int(1), int(2));
        for n in 1..=100u32 {
            let fact = factorial(n);
            // radius <= 10^-(len+6) < 10^-(len+5)
            let e = e_enclosure(decimal_len(&fact) as u32 + 6).map_err(|e| e.to_string())?;
            let bang = rat(&subfactorial_rec1(n));
            for end in [e.lower(), e.upper()] {
                let dist = (rat(&fact) / end - &bang).abs();
                ensure(dist < half, || format!("n={n}: distance {dist}"))?;
            }
            let nearest = Method::Nearest.compute(n).map_err(|e| e.to_string())?;
            ensure(nearest == subfactorial_rec1(n), || format!("nearest({n})"))?;
        }
        Ok(())
    });
}

#[test]
fn c04_quadrature_check() {
    criterion(4, "Gauss-Laguerre !n relative error < 1e-8, n <= 15, nodes = n", Some(Duration::from_secs(1)), || {
        for n in 0..=15u32 {
            // n = 0 would mean a zero-node rule; one node is the smallest legal rule
            let nodes = n.max(1) as usize;
            let est = subfactorial_integral(n, nodes).map_err(|e| e.to_string())?;
            let err = quadrature_relative_error(n, est);
            ensure(err < 1e-8, || format!("n={n}: estimate {est}, relative error {err:e}"))?;
        }
        Ok(())
    });
}

#[test]
fn c05_power_ratio_coefficients() {
    criterion(5, "(n+1)^n / n^n inverts to the published integer coefficients", Some(Duration::from_secs(1)), || {
        let p: Vec<_> = (0..=6u32).map(|k| Pow::pow(int(k as i64 + 1), k)).collect();
        let q: Vec<_> = (0..=6u32).map(|k| Pow::pow(int(k as i64), k)).collect();
        let res = invert(&p, &q).map_err(|e| e.to_string())?;
        ensure((res.b0.clone(), res.a1.clone(), res.b1.clone()) == (int(1), int(1), int(1)), || {
            format!("starting values {} {} {}", res.b0, res.a1, res.b1)
        })?;
        let got: Vec<(ExactInt, ExactInt)> = res.integer_form().into_iter().skip(1).map(|t| (t.a, t.b)).collect();
        let want: Vec<(ExactInt, ExactInt)> = [
            (-1, 5),
            (-13, 10),
            (-491, 196),
            (-487903, 9952),
            (-2384329879, 958144),
        ]
        .into_iter()
        .map(|(a, b)| (int(a), int(b)))
        .collect();
        ensure(got == want, || format!("got {got:?}"))?;
        // the library family exposes the same coefficients
        let fam: Vec<_> = terms(&GcfSpec::family(Family::PowerRatio), 6)
            .unwrap()
            .into_iter()
            .skip(1)
            .map(|t| (t.a, t.b))
            .collect();
        ensure(fam == want, || format!("family terms {fam:?}"))
    });
}

#[test]
fn c06_derangement_inversion() {
    criterion(6, "n!/!n inverts to a_n = b_n = n-1 for 2 <= n <= 50", Some(Duration::from_secs(1)), || {
        let p: Vec<_> = (0..=50).map(factorial).collect();
        let q: Vec<_> = (0..=50).map(subfactorial_rec1).collect();
        let res = invert(&p, &q).map_err(|e| e.to_string())?;
        ensure(res.b0.is_one() && res.a1.is_one() && res.b1.is_zero(), || "starting values".into())?;
        ensure(res.tail.len() == 49, || format!("{} tail terms", res.tail.len()))?;
        for t in &res.tail {
            let want = ExactRational::from_integer(int(t.index as i64 - 1));
            ensure(t.a == want && t.b == want && t.integral, || format!("n={}: ({}, {})", t.index, t.a, t.b))?;
        }
        Ok(())
    });
}

fn round_trip(p: &[ExactInt], q: &[ExactInt]) -> Result<(), String> {
    let res: InversionResult = invert(p, q).map_err(|e| e.to_string())?;
    let back = res.reconstruct();
    ensure(back.len() == p.len(), || "length changed".into())?;
    for (n, (bp, bq)) in back.iter().enumerate() {
        ensure(*bp == rat(&p[n]) && *bq == rat(&q[n]), || format!("mismatch at n={n}"))?;
    }
    Ok(())
}

#[test]
fn c07_round_trip_law() {
    criterion(7, "convergents -> invert -> reconstruct is exact, n <= 25", None, || {
        for fam in Family::ALL {
            let (p, q) = family_pq(fam, 25);
            round_trip(&p, &q).map_err(|e| format!("{fam}: {e}"))?;
        }
        let mut rng = StdRng::seed_from_u64(0x5eed_cf);
        let mut accepted = 0;
        while accepted < 20 {
            let b0 = rng.gen_range(-9..=9i64);
            let pairs: Vec<(i64, i64)> = (0..25).map(|_| (rng.gen_range(-9..=9), rng.gen_range(-9..=9))).collect();
            if pairs.iter().any(|&(a, _)| a == 0) {
                continue;
            }
            let spec = GcfSpec::explicit(b0, pairs.clone());
            let (p, q): (Vec<_>, Vec<_>) = convergents(&spec, 25).unwrap().into_iter().map(|c| (c.p, c.q)).unzip();
            match invert(&p, &q) {
                Err(_) => continue,
                Ok(res) => {
                    // integer input: every recovered pair must be the original integers
                    let coeffs = res.coefficients();
                    for (k, (a, b)) in coeffs.iter().enumerate() {
                        ensure(*a == rat(&int(pairs[k].0)) && *b == rat(&int(pairs[k].1)), || {
                            format!("list {accepted}: coefficient {} differs", k + 1)
                        })?;
                    }
                }
            }
            round_trip(&p, &q).map_err(|e| format!("random list {accepted}: {e}"))?;
            accepted += 1;
        }
        Ok(())
    });
}

#[test]
fn c08_determinant_identity() {
    criterion(8, "p_{n-1}q_n - p_n q_{n-1} = (-1)^n prod a_k, n <= 30", None, || {
        for fam in Family::ALL {
            let spec = GcfSpec::family(fam);
            let (p, q) = family_pq(fam, 30);
            // exact partial numerators: integer for closed-form families,
            // raw inverted quotients for the power-ratio convergents
            let a: Vec<ExactRational> = if fam == Family::PowerRatio {
                invert(&p, &q).unwrap().coefficients().into_iter().map(|(a, _)| a).collect()
            } else {
                terms(&spec, 30).unwrap().iter().map(|t| rat(&t.a)).collect()
            };
            let mut prod = ExactRational::one();
            for n in 1..=30 {
                prod *= &a[n - 1];
                let lhs = rat(&(&p[n - 1] * &q[n] - &p[n] * &q[n - 1]));
                let rhs = if n % 2 == 0 { prod.clone() } else { -prod.clone() };
                ensure(lhs == rhs, || format!("{fam} n={n}"))?;
            }
            if fam == Family::PowerRatio {
                // and on the integer-coefficient form of the same expansion
                let ts = terms(&spec, 30).unwrap();
                let cs = convergents_from_terms(&spec.b0, &ts);
                let mut prod = BigInt::one();
                for n in 1..=30 {
                    prod *= &ts[n - 1].a;
                    let lhs = &cs[n - 1].p * &cs[n].q - &cs[n].p * &cs[n - 1].q;
                    let rhs = if n % 2 == 0 { prod.clone() } else { -prod.clone() };
                    ensure(lhs == rhs, || format!("power-ratio integer form n={n}"))?;
                }
            }
        }
        Ok(())
    });
}

#[test]
fn c09_convergence_ordering() {
    criterion(9, "err(elegant) < err(euler) < err(power-ratio), 3 <= n <= 30", Some(Duration::from_secs(30)), || {
        let table = analysis::compare_families(30).map_err(|e| e.to_string())?;
        ensure(table.digits_used <= 200, || format!("needed {} digits", table.digits_used))?;
        let verdict = ordering_check(&table, 3);
        ensure(verdict == OrderingVerdict::Holds { from: 3, to: 30 }, || verdict.to_string())?;
        ensure(analysis::strictly_decreasing(&table, "derangement-elegant", 2, 30), || "elegant not monotone".into())?;
        ensure(analysis::strictly_decreasing(&table, "power-ratio", 2, 30), || "power-ratio not monotone".into())?;
        ensure(analysis::decreasing_over_windows(&table, "euler", 1, 30, 3), || "euler windows".into())?;
        let last = table.get("derangement-elegant", 30).unwrap().log10_err;
        ensure(last < -25.0, || format!("elegant error at n=30 is 10^{last}"))
    });
}

#[test]
fn c10_tail_identity() {
    criterion(10, "elegant(n) = 1 + 1/inv_e_minus_1(n) for 1 <= n <= 30", None, || {
        let elegant = convergents(&GcfSpec::family(Family::DerangementElegant), 30).unwrap();
        let inv = convergents(&GcfSpec::family(Family::InvEMinus1), 30).unwrap();
        let mut failures = Vec::new();
        for n in 1..=30 {
            let v_elegant = evaluate(&elegant[n]).unwrap();
            let v_inv = evaluate(&inv[n]).unwrap();
            if v_elegant != ExactRational::one() + v_inv.recip() {
                failures.push(n);
            }
        }
        ensure(failures.is_empty(), || {
            format!("identity fails at depths {failures:?} (holds with elegant(n-1) on the left; see tail_identity_shifted_by_one)")
        })
    });
}

/// Not an acceptance criterion: the form of the tail identity that does hold
/// when both families are indexed by their number of partial quotients.
#[test]
fn tail_identity_shifted_by_one() {
    let elegant = convergents(&GcfSpec::family(Family::DerangementElegant), 30).unwrap();
    let inv = convergents(&GcfSpec::family(Family::InvEMinus1), 31).unwrap();
    for n in 1..=31 {
        let v_elegant = evaluate(&elegant[n - 1]).unwrap();
        let v_inv = evaluate(&inv[n]).unwrap();
        assert_eq!(v_elegant, ExactRational::one() + v_inv.recip(), "n={n}");
    }
}

#[test]
fn c11_elegant_equals_factorial_ratio() {
    criterion(11, "a single offset k in {1,2} gives r_n = (n+k)!/!(n+k), 1 <= n <= 30", None, || {
        let cs = convergents(&GcfSpec::family(Family::DerangementElegant), 30).unwrap();
        let holds = |k: u32| {
            (1..=30u32).all(|n| {
                evaluate(&cs[n as usize]).unwrap()
                    == ExactRational::new(factorial(n + k), subfactorial_rec1(n + k))
            })
        };
        let offsets: Vec<u32> = [1, 2].into_iter().filter(|&k| holds(k)).collect();
        ensure(offsets.len() == 1, || format!("offsets that hold: {offsets:?}"))?;
        println!("       offset k = {}", offsets[0]);
        Ok(())
    });
}

#[test]
fn c12_scanner_rediscovery() {
    criterion(12, "scan L=2 depth=200 digits=20 finds the e and 1/(e-1) rules", Some(Duration::from_secs(300)), || {
        let grid = ScanGrid {
            bound: 2,
            depth: 200,
            match_digits: 20,
        };
        let hits = run_scan(&grid).map_err(|e| e.to_string())?;
        let has = |rule: Rule, name: &str| hits.iter().any(|h| h.rule == rule && h.constant == name && h.stability);
        ensure(has(Rule::new(2, 1, 1, 1, 1), "e"), || "missing 2 + (n+1)/(n+1)".into())?;
        ensure(has(Rule::new(0, 1, 0, 1, 0), "1/(e-1)"), || "missing n/n".into())?;
        ensure(hits.iter().all(|h| h.residual_log10 <= -20.0), || "residual above the bar".into())?;
        println!("       {} stable hits", hits.len());
        Ok(())
    });
}

#[test]
fn c13_reference_constant() {
    criterion(13, "50-digit e matches the published expansion through 45 digits", None, || {
        const E: &str = "271828182845904523536028747135266249775724709369995";
        let e = e_enclosure(50).map_err(|e| e.to_string())?;
        let scale = Pow::pow(int(10), 45u32);
        let digits = (e.value * ExactRational::from_integer(scale)).floor().to_integer().to_string();
        ensure(digits == E[..46], || format!("got {digits}"))
    });
}

#[test]
fn c14_output_determinism() {
    criterion(14, "error-table and scan CSV output is byte-identical across runs", None, || {
        let render_table = || {
            let table = analysis::compare_families(30).unwrap();
            let mut buf = Vec::new();
            analysis::emit_csv(&table, &mut buf).unwrap();
            buf
        };
        let first = render_table();
        ensure(first == render_table(), || "error table CSV differs".into())?;
        let rows = first.iter().filter(|&&b| b == b'\n').count();
        ensure(rows == 91, || format!("{rows} lines"))?;

        let grid = ScanGrid {
            bound: 1,
            depth: 100,
            match_digits: 20,
        };
        let render_scan = || {
            let mut buf = Vec::new();
            emit_hits_csv(&run_scan(&grid).unwrap(), &mut buf).unwrap();
            buf
        };
        let a = render_scan();
        let b = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(render_scan);
        ensure(a == b, || "scan CSV depends on scheduling".into())
    });
}
