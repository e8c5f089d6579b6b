//! End-to-end acceptance checks. Runs as a plain binary so the per-criterion
//! verdict lines are always printed; exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use diagport::gates::{
    apply_unitary, interleave_network, post_alice_layout, swap, Direction, Unitary,
};
use diagport::protocol::{
    compare_engines, compare_schemes, correction_for, dephasing_demo, run_once,
    teleport_with_eigenbasis, verify_all_branches, ClassicalMessage, CopiesScheme, DenseEngine,
    DiagonalEngine, Engine, GeneralizedScheme, RegisterState, Scheme,
};
use diagport::qstate::{generalized_classical_state, make_diagonal, DensityMatrix, DiagonalState};
use diagport::seed::{derive_seed, rng_from_seed};
use diagport::Complex64;
use nalgebra::DMatrix;
use statrs::distribution::{ChiSquared, ContinuousCDF};

const EXACT: f64 = 1e-12;
const SPECTRAL: f64 = 1e-10;
const SCHEMES: [&dyn Scheme; 2] = [&CopiesScheme, &GeneralizedScheme];

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The shared sweep of criteria 1, 2 and 4: 200 random inputs per size.
fn sweep_inputs(n: usize) -> Vec<DiagonalState> {
    (0..200)
        .map(|k| {
            DiagonalState::random(n, &mut rng_from_seed(derive_seed(1000 + n as u64, k))).unwrap()
        })
        .collect()
}

fn uniform_outcome_law() -> Verdict {
    let mut worst = 0.0f64;
    for n in 1..=3 {
        for input in sweep_inputs(n) {
            for scheme in SCHEMES {
                let r = verify_all_branches(&input, scheme, &DiagonalEngine)
                    .map_err(|e| e.to_string())?;
                ensure(r.branch_count == 1 << (2 * n), || {
                    format!("{} branches at N={n}", r.branch_count)
                })?;
                let expected = 0.25f64.powi(n as i32);
                for b in &r.branches {
                    worst = worst.max((b.record.probability - expected).abs());
                }
            }
        }
    }
    ensure(worst <= EXACT, || format!("max deviation {worst:e}"))?;
    Ok(format!(
        "max |p - 4^-N| = {worst:.1e} over 600 inputs x 2 schemes"
    ))
}

fn faithful_and_deterministic() -> Verdict {
    let (mut entry, mut fid) = (0.0f64, 0.0f64);
    for n in 1..=3 {
        for input in sweep_inputs(n) {
            for scheme in SCHEMES {
                let r = verify_all_branches(&input, scheme, &DiagonalEngine)
                    .map_err(|e| e.to_string())?;
                for b in &r.branches {
                    entry = entry.max(b.record.bob_state_corrected.max_abs_diff(&input));
                    fid = fid.max((1.0 - b.fidelity).abs());
                }
            }
        }
    }
    ensure(entry <= EXACT && fid <= SPECTRAL, || {
        format!("entrywise {entry:e}, fidelity {fid:e}")
    })?;
    Ok(format!("entrywise {entry:.1e}, |1 - F| {fid:.1e}"))
}

fn pauli(k: u8) -> DMatrix<Complex64> {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    match k {
        0 => DMatrix::from_row_slice(2, 2, &[l, o, o, l]),
        _ => DMatrix::from_row_slice(2, 2, &[o, l, l, o]),
    }
}

fn correction_table() -> Verdict {
    // rows of the two-qubit table: Alice's x1 x2 -> Bob's sigma_{x1} (x) sigma_{x2}
    let rows = [
        ([0u8, 0], [0u8, 0]),
        ([0, 1], [0, 1]),
        ([1, 0], [1, 0]),
        ([1, 1], [1, 1]),
    ];
    for (x, ops) in rows {
        let correction = correction_for(&ClassicalMessage::new(x.to_vec()).unwrap());
        ensure(correction.indices() == ops, || {
            format!("x={x:?} gave {correction}")
        })?;
        let expected = pauli(ops[0]).kronecker(&pauli(ops[1]));
        let got = correction.to_unitary().map_err(|e| e.to_string())?;
        ensure(got.matrix() == &expected, || {
            format!("x={x:?} matrix differs")
        })?;
    }
    Ok("4/4 rows".into())
}

fn scheme_equivalence() -> Verdict {
    let mut worst = 0.0f64;
    for n in 1..=3 {
        for input in sweep_inputs(n) {
            worst = worst.max(compare_schemes(&input, &DiagonalEngine).map_err(|e| e.to_string())?);
        }
        for input in sweep_inputs(n).iter().take(5) {
            worst = worst.max(compare_schemes(input, &DenseEngine).map_err(|e| e.to_string())?);
        }
    }
    ensure(worst <= EXACT, || format!("max residual {worst:e}"))?;
    Ok(format!("max residual {worst:.1e}"))
}

fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    Some(line.split_whitespace().nth(1)?.parse::<u64>().ok()? * 1024)
}

fn engine_equivalence_and_scale() -> Verdict {
    let mut worst = 0.0f64;
    for n in 1..=3 {
        for input in sweep_inputs(n).iter().take(if n == 3 { 4 } else { 20 }) {
            for scheme in SCHEMES {
                worst = worst.max(compare_engines(input, scheme).map_err(|e| e.to_string())?);
            }
        }
    }
    ensure(worst <= EXACT, || format!("engine residual {worst:e}"))?;
    ensure(DenseEngine.check_size(24).is_err(), || {
        "dense engine accepted 24 wires".into()
    })?;

    let input = DiagonalState::random(8, &mut rng_from_seed(8)).unwrap();
    let start = Instant::now();
    let r = run_once(&input, &CopiesScheme, &DiagonalEngine, 8).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let rss = peak_rss_bytes();
    ensure((r.fidelity_to_input - 1.0).abs() <= SPECTRAL, || {
        format!("N=8 fidelity {}", r.fidelity_to_input)
    })?;
    ensure(elapsed < Duration::from_secs(60), || {
        format!("N=8 took {elapsed:?}")
    })?;
    ensure(rss.is_none_or(|b| b < 4 << 30), || {
        format!("peak RSS {rss:?} bytes")
    })?;
    Ok(format!(
        "residual {worst:.1e}; N=8 run {:.2}s, peak RSS {}",
        elapsed.as_secs_f64(),
        rss.map_or("unavailable".into(), |b| format!("{} MiB", b >> 20))
    ))
}

fn structural_identities() -> Verdict {
    for n in 2..=4 {
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                let s = swap(i, j, n).unwrap();
                let ss = s.mul(&s).unwrap();
                ensure(ss.identity_residual() <= EXACT, || {
                    format!("S({i},{j})^2 != I on {n} wires")
                })?;
            }
        }
    }
    for n in 1..=6 {
        let fwd = interleave_network(n, Direction::BlockToInterleaved);
        let back = interleave_network(n, Direction::InterleavedToBlock);
        ensure(
            fwd.then(&back).is_identity() && back.then(&fwd).is_identity(),
            || format!("N={n} not inverse"),
        )?;
        if n <= 2 {
            ensure(fwd == back && fwd.is_involution(), || {
                format!("directions differ at N={n}")
            })?;
        }
    }
    let cs = generalized_classical_state(2);
    for (idx, &p) in cs.probs().iter().enumerate() {
        let expected = if [0b0000, 0b0101, 0b1010, 0b1111].contains(&idx) {
            0.25
        } else {
            0.0
        };
        ensure(p == expected, || format!("C^s(2)[{idx:04b}] = {p}"))?;
    }
    Ok("swap involutions, interleave inverses N<=6, C^s(2) support".into())
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn eigenbasis_extension() -> Verdict {
    let mut worst = 0.0f64;
    for n in 1..=2 {
        for k in 0..50 {
            let mut rng = rng_from_seed(derive_seed(7000 + n as u64, k));
            let v = Unitary::random(n, &mut rng).unwrap();
            let lambda = DiagonalState::random(n, &mut rng).unwrap();
            let target = apply_unitary(&DensityMatrix::from_diagonal(&lambda), &v).unwrap();
            let scheme = SCHEMES[k as usize % 2];
            let r = teleport_with_eigenbasis(&v, &lambda, scheme, &DiagonalEngine, k)
                .map_err(|e| e.to_string())?;
            let RegisterState::Dense(bob) = &r.bob_final else {
                return Err("expected dense output".into());
            };
            worst = worst.max(bob.max_abs_diff(&target));
        }
    }
    ensure(worst <= SPECTRAL, || format!("max residual {worst:e}"))?;

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = Unitary::new(DMatrix::from_row_slice(2, 2, &[c(h), c(h), c(h), c(-h)])).unwrap();
    let lambda = make_diagonal(&[0.2, 0.8]).unwrap();
    let expected = DMatrix::from_row_slice(2, 2, &[c(0.5), c(-0.3), c(-0.3), c(0.5)]);
    let r = teleport_with_eigenbasis(&v, &lambda, &CopiesScheme, &DiagonalEngine, 0)
        .map_err(|e| e.to_string())?;
    let RegisterState::Dense(bob) = &r.bob_final else {
        return Err("expected dense output".into());
    };
    let dev = (bob.matrix() - expected)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    ensure(dev <= EXACT, || format!("H example off by {dev:e}"))?;
    Ok(format!(
        "max residual {worst:.1e} over 100 cases; H example off by {dev:.1e}"
    ))
}

fn negative_control() -> Verdict {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = DensityMatrix::from_pure(&[c(h), c(h)]).unwrap();
    let half = DensityMatrix::new(DMatrix::from_row_slice(
        2,
        2,
        &[c(0.5), c(0.0), c(0.0), c(0.5)],
    ))
    .unwrap();
    for scheme in SCHEMES {
        let (bob, f) = dephasing_demo(&plus, scheme).map_err(|e| e.to_string())?;
        ensure(bob.max_abs_diff(&half) <= EXACT, || {
            format!("{} gave {:?}", scheme.name(), bob.matrix())
        })?;
        ensure((f - 0.5).abs() <= SPECTRAL, || format!("fidelity {f}"))?;
    }
    Ok("|+><+| arrives as I/2, F = 0.5".into())
}

fn histogram(master: u64, samples: u64) -> [u64; 4] {
    let input = make_diagonal(&[0.3, 0.7]).unwrap();
    let mut counts = [0u64; 4];
    for k in 0..samples {
        let r = run_once(
            &input,
            &CopiesScheme,
            &DiagonalEngine,
            derive_seed(master, k),
        )
        .unwrap();
        let o = &r.outcome;
        counts[(o.x_bits[0] as usize) << 1 | o.alpha_bits[0] as usize] += 1;
    }
    counts
}

fn statistical_sampling() -> Verdict {
    let samples = 100_000u64;
    let counts = histogram(2024, samples);
    let expected = samples as f64 / 4.0;
    let chi2: f64 = counts
        .iter()
        .map(|&k| (k as f64 - expected).powi(2) / expected)
        .sum();
    let p = 1.0 - ChiSquared::new(3.0).unwrap().cdf(chi2);
    ensure(p > 1e-3, || {
        format!("counts {counts:?}, chi2 {chi2:.2}, p {p:.2e}")
    })?;
    let bytes = serde_json::to_vec(&counts).unwrap();
    let again = serde_json::to_vec(&histogram(2024, samples)).unwrap();
    ensure(bytes == again, || {
        "same seed gave a different histogram".into()
    })?;
    Ok(format!(
        "counts {counts:?}, chi2 {chi2:.2}, p {p:.3}; repeat identical"
    ))
}

fn locality_audit() -> Verdict {
    let (mut alice, mut bob) = (0.0f64, 0.0f64);
    for n in 1..=3 {
        for scheme in SCHEMES {
            let layout = scheme.layout(n);
            let op = scheme.alice_operator(n).map_err(|e| e.to_string())?;
            alice = alice.max(op.identity_residual_on(layout.b_wires()).unwrap());

            let after = post_alice_layout(n, scheme.kind());
            let alice_wires: Vec<usize> = after
                .x_wires()
                .iter()
                .chain(after.a_wires())
                .copied()
                .collect();
            for m in 0..1u32 << n {
                let bits: Vec<u8> = (0..n).map(|i| ((m >> (n - 1 - i)) & 1) as u8).collect();
                let message = ClassicalMessage::new(bits).unwrap();
                let wire = serde_json::to_string(&message).unwrap();
                ensure(wire.trim_matches('"').len() == n, || {
                    format!("message {wire} is not {n} bits")
                })?;
                let u = correction_for(&message).embed(&after).unwrap();
                bob = bob.max(u.identity_residual_on(&alice_wires).unwrap());
            }

            let input = DiagonalState::random(n, &mut rng_from_seed(n as u64)).unwrap();
            let r = run_once(&input, scheme, &DiagonalEngine, 1).map_err(|e| e.to_string())?;
            ensure(r.cbits_sent == n, || {
                format!("{} bits crossed the channel at N={n}", r.cbits_sent)
            })?;
        }
    }
    ensure(alice <= EXACT && bob <= EXACT, || {
        format!("alice {alice:e}, bob {bob:e}")
    })?;
    Ok(format!(
        "Alice on B {alice:.1e}, Bob on X/A {bob:.1e}, N bits sent"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("uniform outcome law", uniform_outcome_law),
        ("faithfulness and determinism", faithful_and_deterministic),
        ("two-qubit correction table", correction_table),
        ("scheme equivalence", scheme_equivalence),
        (
            "engine equivalence and N=8 scale",
            engine_equivalence_and_scale,
        ),
        ("structural identities", structural_identities),
        ("eigenbasis extension", eigenbasis_extension),
        ("dephasing negative control", negative_control),
        ("statistical sampling", statistical_sampling),
        ("locality audit", locality_audit),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
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
