//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use grover_slocc::experiments::{run, run_delta_curve, run_nrd, run_tables, ExperimentConfig, ExperimentKind};
use grover_slocc::gme::{find_peak, gme_curve, gme_full, symmetric_product_overlap, GmeOptions, Separability};
use grover_slocc::grover::{
    angle, closed_form_state, coefficients, grover_state, k_opt, max_deviation_up_to_phase, observation_decompose,
    GateIterations,
};
use grover_slocc::invariants::{
    classify_222, classify_223, classify_233, delta, normal_form_state, normal_forms, Format,
};
use grover_slocc::tensor::{apply_local_ops, multilinear_rank, DEFAULT_RANK_TOL};
use grover_slocc::{MarkedSet, PureState, QuditSystem};
use itertools::Itertools;
use rand::seq::index::sample;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("{what} took {elapsed:.2?}, limit {limit:?}"))
}

fn err(e: grover_slocc::Error) -> String {
    e.to_string()
}

/// The first `s` basis states, plus one seeded random `s`-subset.
fn marked_sets(n: usize, s: usize, seed: u64) -> Vec<MarkedSet> {
    let sys = QuditSystem::qubits(n).unwrap();
    let mut rng = common::rng(seed);
    let random: Vec<usize> = sample(&mut rng, sys.len(), s).into_iter().sorted().collect();
    let first: Vec<usize> = (0..s).collect();
    [first, random].into_iter().dedup().map(|d| MarkedSet::from_decimals(sys.clone(), &d).unwrap()).collect()
}

fn runs() -> Vec<MarkedSet> {
    let mut out = Vec::new();
    for n in 1..=12 {
        for s in [1, 2, 4] {
            if s < 1 << n {
                out.extend(marked_sets(n, s, (n * 10 + s) as u64));
            }
        }
    }
    out
}

fn c1_gate_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for set in runs() {
        let end = 2 * k_opt(&set);
        for (k, gate) in GateIterations::new(&set).take(end as usize + 1).enumerate() {
            let (psi, _) = grover_state(&set, k as u64).map_err(err)?;
            let dev = max_deviation_up_to_phase(&psi, &gate).map_err(err)?;
            ensure(dev <= 1e-10, || format!("{} k = {k}: deviation {dev:e}", set.label()))?;
            worst = worst.max(dev);
            count += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(30), "gate comparison")?;
    Ok(format!("{count} states, max deviation {worst:.1e}, {:.2?}", start.elapsed()))
}

fn c2_decomposition() -> Outcome {
    let mut worst: f64 = 0.0;
    for set in runs() {
        for k in 0..=2 * k_opt(&set) {
            let (_, run) = grover_state(&set, k).map_err(err)?;
            let r = observation_decompose(&run).map_err(err)?.residual;
            ensure(r <= 1e-12, || format!("{} k = {k}: residual {r:e}", set.label()))?;
            worst = worst.max(r);
        }
    }
    let sys = QuditSystem::qubits(3).unwrap();
    let mut critical = 0;
    for pair in (0..8).combinations(2) {
        let set = MarkedSet::from_decimals(sys.clone(), &pair).map_err(err)?;
        let (psi, _) = grover_state(&set, 1).map_err(err)?;
        let sum = PureState::from_real(
            sys.clone(),
            &(0..8).map(|x| if pair.contains(&x) { 0.5f64.sqrt() } else { 0.0 }).collect::<Vec<_>>(),
        )
        .map_err(err)?;
        let dev = max_deviation_up_to_phase(&psi, &sum).map_err(err)?;
        ensure(dev <= 1e-12, || format!("critical {}: ψ_1 off the marked sum by {dev:e}", set.label()))?;
        critical += 1;
    }
    Ok(format!("max residual {worst:.1e}; {critical} critical pairs land on the marked sum"))
}

fn c3_k_opt() -> Outcome {
    let systems = (2..=12).map(|n| (2usize, n)).chain((2..=6).map(|n| (3, n))).chain([(4, 2), (4, 3), (5, 2), (5, 3)]);
    let grid: Vec<(usize, usize, usize)> = systems
        .flat_map(|(d, n)| [1, 2, 3].into_iter().map(move |s| (d, n, s)))
        .filter(|&(d, n, s)| s < d.pow(n as u32))
        .take(50)
        .collect();
    ensure(grid.len() == 50, || format!("grid has only {} cases", grid.len()))?;
    for &(d, n, s) in &grid {
        let sys = QuditSystem::qudits(d, n).map_err(err)?;
        let big = sys.len();
        let set = MarkedSet::from_decimals(sys, &(0..s).collect::<Vec<_>>()).map_err(err)?;
        let want = (FRAC_PI_4 * (big as f64 / s as f64).sqrt()).round() as u64;
        let got = k_opt(&set);
        ensure(got == want, || format!("d = {d}, n = {n}, |S| = {s}: {got} vs {want}"))?;
    }
    let one = MarkedSet::from_decimals(QuditSystem::qubits(12).unwrap(), &[0]).map_err(err)?;
    ensure(k_opt(&one) == 50, || format!("n = 12, |S| = 1: {}", k_opt(&one)))?;
    Ok(format!("{} grid cases agree; n = 12, |S| = 1 gives 50", grid.len()))
}

fn c4_normal_forms() -> Outcome {
    let start = Instant::now();
    let mut hits = 0;
    for format in Format::all() {
        for nf in normal_forms(format) {
            let psi = normal_form_state(&nf).to_pure().map_err(err)?;
            let rep = match format {
                Format::F222 => classify_222(&psi),
                Format::F223 => classify_223(&psi),
                Format::F233 => classify_233(&psi),
            }
            .map_err(err)?;
            ensure(rep.orbit == nf.orbit, || format!("{format} {:?}: got {}, want {}", nf.kets, rep.orbit, nf.orbit))?;
            hits += 1;
        }
    }
    ensure(hits == 31, || format!("{hits}/31 normal forms"))?;
    within(start.elapsed(), Duration::from_secs(1), "normal forms")?;
    Ok(format!("{hits}/31 in {:.2?}", start.elapsed()))
}

fn c5_appendix() -> Outcome {
    let start = Instant::now();
    let mut filled = 0;
    let mut summary = Vec::new();
    for format in Format::all() {
        let report = run_tables(format).map_err(err)?;
        let bad: Vec<_> = report.checks.iter().filter(|c| !c.pass).collect();
        ensure(bad.is_empty(), || format!("{format}: {bad:?}"))?;
        filled += report.checks.iter().filter(|c| c.kind == "witness").count();
        let never: &[u8] = if format == Format::F233 { &[5, 15] } else { &[5] };
        for &o in never {
            let rows: Vec<_> = report.checks.iter().filter(|c| c.kind == "unreachable" && c.orbit == o).collect();
            ensure(!rows.is_empty() && rows.iter().all(|c| c.pass), || format!("{format} O{o} reached: {rows:?}"))?;
            summary.push(format!("O{o}[{format}] at |S| ≤ {}", rows.iter().map(|c| c.size).max().unwrap_or(0)));
        }
    }
    within(start.elapsed(), Duration::from_secs(60), "table reproduction")?;
    Ok(format!("{filled} filled cells PASS; unreached: {}; {:.2?}", summary.join(", "), start.elapsed()))
}

fn delta_at(set: &MarkedSet, t: f64) -> Result<f64, String> {
    let psi = closed_form_state(set, t).map_err(err)?;
    Ok(delta(&psi).map_err(err)?.norm())
}

fn c6_delta_curves() -> Outcome {
    let cases: [(&[usize], &[&str]); 7] = [
        (&[2, 2, 2], &["000"]),
        (&[2, 2, 3], &["000", "111"]),
        (&[2, 2, 3], &["000", "100", "010", "001"]),
        (&[2, 2, 3], &["000", "110", "101"]),
        (&[2, 3, 3], &["000", "111"]),
        (&[2, 3, 3], &["000", "001", "110"]),
        (&[2, 3, 3], &["000", "001", "010", "102"]),
    ];
    let mut lines = Vec::new();
    for (dims, kets) in cases {
        let mut cfg = ExperimentConfig::new(ExperimentKind::DeltaCurve).with_marked(dims, kets);
        cfg.range = Some(grover_slocc::experiments::RangeSection {
            end_k_opt: Some(4.0),
            samples_per_iteration: 64,
            ..Default::default()
        });
        let set = cfg.marked_set().map_err(err)?;
        let curve = run_delta_curve(&cfg).map_err(err)?.points;
        let label = format!("{}{}", Format::from_dims(dims).map_err(err)?, set.label());
        let theta = angle(&set);
        let period = FRAC_PI_2 / theta;
        // a = 1 where (2t + 1)θ = π/2.
        let t_star = (FRAC_PI_2 / theta - 1.0) / 2.0;
        let a = coefficients(&set, t_star).map_err(err)?.a;
        ensure((a - 1.0).abs() < 1e-12, || format!("{label}: a(t*) = {a}"))?;
        let at0 = delta_at(&set, 0.0)?;
        ensure(at0 < 1e-12, || format!("{label}: |Δ(ψ_0)| = {at0:e}"))?;
        let at_star = delta_at(&set, t_star)?;
        ensure(at_star < 1e-6, || format!("{label}: |Δ| = {at_star:e} where a = 1"))?;
        let inner: Vec<_> = curve.iter().filter(|p| p.0 > 0.0 && p.0 < t_star).collect();
        let peak = inner.iter().map(|p| p.1).fold(0.0, f64::max);
        ensure(peak > 1e-12 && peak > 1e3 * at_star.max(at0), || format!("{label}: interior max {peak:e}"))?;
        let end = curve.last().map_or(0.0, |p| p.0);
        ensure(end >= 4.0 * k_opt(&set) as f64 - 1e-9, || format!("{label}: curve stops at {end}"))?;
        let mut drift: f64 = 0.0;
        for &(t, v) in &curve {
            if t + period <= end {
                drift = drift.max((delta_at(&set, t + period)? - v).abs() / peak);
            }
        }
        ensure(drift < 1e-9, || format!("{label}: period {period:.4} drift {drift:e}"))?;
        // The zero where a = 1 recurs every period.
        let mut j = 0.0;
        while t_star + j * period <= end {
            let z = delta_at(&set, t_star + j * period)?;
            ensure(z < 1e-6, || format!("{label}: |Δ| = {z:e} at t* + {j}P"))?;
            j += 1.0;
        }
        lines.push(format!("{label} peak {peak:.3e}"));
    }
    Ok(format!("{} curves: zero at 0 and where a = 1, periodic; {}", lines.len(), lines.join("; ")))
}

fn peak_check(set: &MarkedSet, tolerance: u64, opts: &GmeOptions) -> Result<(u64, u64, f64), String> {
    let ks: Vec<u64> = (0..=k_opt(set)).collect();
    let curve = gme_curve(set, &ks, Separability::Full, opts).map_err(err)?;
    let peak = find_peak(&curve, set).map_err(err)?;
    let predicted = grover_slocc::geometry::barycenter_k(set).map_err(err)?;
    ensure(peak.k_star.abs_diff(predicted) <= tolerance, || {
        format!("{}: k* = {}, predicted {predicted}", set.label(), peak.k_star)
    })?;
    Ok((peak.k_star, predicted, curve.last().map_or(0.0, |p| p.1)))
}

fn c7_gme_peaks() -> Outcome {
    let start = Instant::now();
    let opts = GmeOptions { restarts: 32, seed: 2024, ..GmeOptions::default() };
    let q10 = QuditSystem::qubits(10).unwrap();
    let one = MarkedSet::from_decimals(q10, &[0]).map_err(err)?;
    let half = (k_opt(&one) as f64 / 2.0).round() as u64;
    let (k1, p1, _) = peak_check(&one, 1, &opts)?;
    ensure(p1 == half, || format!("predicted {p1} vs Round(k_opt/2) = {half}"))?;

    let q11 = QuditSystem::qubits(11).unwrap();
    let two = MarkedSet::from_decimals(q11, &[0, (1 << 11) - 1]).map_err(err)?;
    let (k2, p2, end) = peak_check(&two, 2, &opts)?;
    ensure(end > 0.05, || format!("E(ψ_k_opt) = {end} for two marked items"))?;

    let q36 = QuditSystem::qudits(3, 6).unwrap();
    let three = MarkedSet::from_digits(q36, &[&[0; 6], &[1; 6], &[2; 6]]).map_err(err)?;
    let (k3, p3, _) = peak_check(&three, 2, &opts)?;
    Ok(format!(
        "n=10 |S|=1 k*={k1} (pred {p1}); n=11 |S|=2 k*={k2} (pred {p2}), E(k_opt)={end:.3}; d=3 n=6 |S|=3 k*={k3} (pred {p3}); {:.1?}",
        start.elapsed()
    ))
}

fn c8_ghz() -> Outcome {
    let opts = GmeOptions { restarts: 32, seed: 1, ..GmeOptions::default() };
    let mut worst: f64 = 0.0;
    for n in 3..=10 {
        let ghz = PureState::ghz(n).map_err(err)?;
        let v = gme_full(&ghz, &opts).map_err(err)?.value;
        ensure((v - 0.5).abs() <= 1e-6, || format!("n = {n}: {v}"))?;
        worst = worst.max((v - 0.5).abs());
        if n <= 6 {
            let oracle = 1.0 - symmetric_product_overlap(&ghz, 33, 6).map_err(err)?;
            ensure((v - oracle).abs() <= 1e-6, || format!("n = {n}: {v} vs oracle {oracle}"))?;
        }
    }
    Ok(format!("E(GHZ_n) = 1/2 within {worst:.1e} for n = 3..10; oracle agrees for n ≤ 6"))
}

fn c9_invariance() -> Outcome {
    let mut rng = common::rng(909);
    let mut worst: f64 = 0.0;
    for format in Format::all() {
        let sys = QuditSystem::new(format.dims().to_vec()).map_err(err)?;
        let psi = common::random_state(&sys, &mut rng);
        let d0 = delta(&psi).map_err(err)?;
        for i in 0..100 {
            let ops = common::local_sl_bounded(&sys, &mut rng);
            let raw = apply_local_ops(&sys, psi.amps(), &ops).map_err(err)?;
            let scale = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            let image = PureState::from_unnormalized(sys.clone(), raw).map_err(err)?;
            let d1 = delta(&image).map_err(err)? * scale.powi(format.delta_degree());
            let rel = (d1 - d0).norm() / d0.norm();
            ensure(rel <= 1e-8, || format!("{format} op {i}: relative change {rel:e}"))?;
            worst = worst.max(rel);
        }
        for nf in normal_forms(format) {
            let psi = normal_form_state(&nf).to_pure().map_err(err)?;
            let before = multilinear_rank(&psi, DEFAULT_RANK_TOL);
            for _ in 0..10 {
                let ops: Vec<_> = sys.dims().iter().map(|&d| common::random_gl(d, &mut rng)).collect();
                let after = multilinear_rank(&psi.apply_local(&ops).map_err(err)?, DEFAULT_RANK_TOL);
                ensure(after == before, || format!("{format} {}: {before:?} → {after:?}", nf.orbit))?;
            }
        }
    }
    Ok(format!("300 SL images, max relative Δ change {worst:.1e}; ranks fixed on 31 normal forms × 10 GL ops"))
}

fn c10_nrd() -> Outcome {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Nrd);
    cfg.nrd = Some(grover_slocc::experiments::NrdSection { n_max: 12 });
    let out = run(&cfg).map_err(err)?;
    let curve = run_nrd(&cfg).map_err(err)?;
    ensure(out.files.len() == 1, || "nrd wrote no artifact".into())?;
    let y: Vec<f64> = curve.points.iter().map(|p| p.1).collect();
    ensure(y[0] == 1.0, || format!("NRD(1) = {}", y[0]))?;
    ensure((y[3] - 0.2).abs() < 1e-15, || format!("NRD(4) = {}", y[3]))?;
    ensure(y[1..].windows(2).all(|w| w[1] < w[0]), || format!("not decreasing: {y:?}"))?;

    let opts = GmeOptions { restarts: 16, seed: 3, ..GmeOptions::default() };
    let mut e = Vec::new();
    for n in 3..=10 {
        let set = MarkedSet::from_decimals(QuditSystem::qubits(n).unwrap(), &[0]).map_err(err)?;
        e.push(gme_curve(&set, &[1], Separability::Full, &opts).map_err(err)?[0].1);
    }
    ensure(e.windows(2).all(|w| w[1] < w[0]), || format!("E_n(ψ_1) not decreasing: {e:?}"))?;
    Ok(format!("NRD(1) = 1, NRD(4) = 0.2, decreasing to {:.2e} at n = 12; E_n(ψ_1) {:.3} → {:.3}", y[11], e[0], e[7]))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("closed form equals gate-level simulation", c1_gate_equivalence),
        ("marked/uniform decomposition and critical landing", c2_decomposition),
        ("optimal iteration count", c3_k_opt),
        ("normal-form golden suite", c4_normal_forms),
        ("marked-set table reproduction", c5_appendix),
        ("hyperdeterminant curve shape", c6_delta_curves),
        ("GME peak locations", c7_gme_peaks),
        ("GME of GHZ states", c8_ghz),
        ("local-operation invariance", c9_invariance),
        ("secant dimension decay and GME decay", c10_nrd),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
