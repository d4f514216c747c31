//! Exit criteria. Runs every check, prints one PASS/FAIL line per criterion,
//! and exits non-zero if any failed.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use triband::experiments::records::to_csv_string;
use triband::experiments::sweep::{aggregate, run_sweep, Aggregate, SweepAxis, SweepSpec};
use triband::model::throughput;
use triband::oracle::{optimal_completed, tiny_instance};
use triband::radio::{mmwave_k0, sample_lobes, thz_path_loss_db, SectoredAntenna};
use triband::{validate, ExperimentConfig, ScenarioParams, SchemeKind, ValidateOptions};

const SEEDS: std::ops::RangeInclusive<u64> = 1..=20;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn sweep(schemes: &[SchemeKind], axis: SweepAxis, values: &[f64]) -> Vec<Aggregate> {
    let spec = SweepSpec {
        schemes: schemes.to_vec(),
        axis,
        values: values.to_vec(),
        seeds: SEEDS.collect(),
        base: ScenarioParams::default(),
        validate: false,
    };
    aggregate(&run_sweep(&spec).expect("sweep runs").records)
}

fn find(aggs: &[Aggregate], scheme: SchemeKind, value: f64) -> &Aggregate {
    aggs.iter()
        .find(|a| a.scheme == scheme && a.value == value)
        .expect("aggregate present")
}

fn feasibility() -> Outcome {
    let start = Instant::now();
    let bad: Vec<String> = (1u64..=100)
        .into_par_iter()
        .flat_map_iter(|seed| {
            let p = ScenarioParams {
                num_flows: 10 + ((seed - 1) * 340 / 99) as usize,
                ..ScenarioParams::default()
            };
            let sc = p.generate(seed).expect("default parameters generate");
            SchemeKind::ALL
                .into_iter()
                .flat_map(move |scheme| {
                    let res = scheme.run(&sc);
                    validate(&sc, &res.matrix, ValidateOptions::default())
                        .into_iter()
                        .map(move |v| format!("seed {seed} {scheme}: {v}"))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let elapsed = start.elapsed();
    check(
        bad.is_empty() && elapsed <= Duration::from_secs(600),
        format!(
            "{} violations over 100 scenarios x 4 schemes, {:.1?}{}",
            bad.len(),
            elapsed,
            bad.first()
                .map(|b| format!("; first: {b}"))
                .unwrap_or_default()
        ),
    )
}

fn oracle_admissibility() -> Outcome {
    let start = Instant::now();
    let results: Vec<(usize, usize)> = (0u64..200)
        .into_par_iter()
        .map(|seed| {
            let inst = tiny_instance(seed);
            let h = SchemeKind::TripleBand
                .run(inst.scenario())
                .completed_count();
            (h, optimal_completed(&inst).completed)
        })
        .collect();
    let elapsed = start.elapsed();
    let admissible = results.iter().filter(|(h, o)| h <= o).count();
    let optimal = results.iter().filter(|(h, o)| h == o).count();
    check(
        admissible == 200 && optimal * 100 >= 60 * 200 && elapsed <= Duration::from_secs(300),
        format!(
            "heuristic <= optimum on {admissible}/200, optimal on {optimal}/200, {elapsed:.1?}"
        ),
    )
}

fn scheme_ordering(aggs: &[Aggregate], metric: fn(&Aggregate) -> f64, what: &str) -> Outcome {
    let triple = metric(find(aggs, SchemeKind::TripleBand, 350.0));
    let mut pass = true;
    let mut parts = vec![format!("triple {triple:.4e}")];
    for base in [
        SchemeKind::Mqis,
        SchemeKind::DualBand,
        SchemeKind::SingleBandEBand,
    ] {
        let b = metric(find(aggs, base, 350.0));
        let ratio = triple / b;
        pass &= triple > b && ratio >= 1.3;
        parts.push(format!("{base} {b:.4e} (x{ratio:.2})"));
    }
    check(pass, format!("mean {what}: {}", parts.join(", ")))
}

fn slot_saturation() -> Outcome {
    let aggs = sweep(
        &[SchemeKind::TripleBand],
        SweepAxis::Slots,
        &[2000.0, 4500.0],
    );
    let at = |m| find(&aggs, SchemeKind::TripleBand, m).mean_completed;
    let (a, b) = (at(2000.0), at(4500.0));
    check(
        b <= 1.15 * a,
        format!(
            "completed M=2000 {a:.2}, M=4500 {b:.2} (x{:.3}, limit 1.15)",
            b / a
        ),
    )
}

fn dref_monotonicity() -> Outcome {
    let aggs = sweep(
        &[SchemeKind::TripleBand],
        SweepAxis::Dref,
        &[30.0, 40.0, 50.0],
    );
    let mut pass = true;
    let mut parts = Vec::new();
    type Metric = (&'static str, fn(&Aggregate) -> f64);
    let metrics: [Metric; 2] = [
        ("completed", |a| a.mean_completed),
        ("throughput", |a| a.mean_throughput_bps),
    ];
    for (name, metric) in metrics {
        let v: Vec<f64> = [30.0, 40.0, 50.0]
            .iter()
            .map(|&d| metric(find(&aggs, SchemeKind::TripleBand, d)))
            .collect();
        let (g1, g2) = (v[1] - v[0], v[2] - v[1]);
        pass &= g1 >= 0.0 && g2 >= 0.0 && g2 <= g1;
        parts.push(format!(
            "{name} {:.4e}/{:.4e}/{:.4e} gains {g1:.4e} then {g2:.4e}",
            v[0], v[1], v[2]
        ));
    }
    check(pass, parts.join("; "))
}

fn threshold_shape() -> Outcome {
    // Axis value is -log10 of the THz threshold.
    let aggs = sweep(
        &[SchemeKind::TripleBand],
        SweepAxis::Threshold,
        &[0.0, 2.0, 6.0],
    );
    let at = |v| find(&aggs, SchemeKind::TripleBand, v).mean_completed;
    let (loose, mid, strict) = (at(0.0), at(2.0), at(6.0));
    check(
        mid >= loose && mid >= strict,
        format!("completed at sigma_thz 1e0 {loose:.2}, 1e-2 {mid:.2}, 1e-6 {strict:.2}"),
    )
}

fn golden_values() -> Outcome {
    let p = ScenarioParams::default();
    let close = |got: f64, want: f64| ((got - want) / want).abs() < 5e-7;
    let k0 = mmwave_k0(28e9);
    let loss = thz_path_loss_db(340e9, 50.0).expect("positive distance");
    let factor = throughput(&vec![1.0; 2000], &p.frame);
    let n0 = p.frame.noise_psd_w_per_hz;
    let pass = close(k0, 7.259481705540117e-7)
        && close(loss, 117.00897842756547)
        && close(factor, 0.9769335142469471)
        && close(n0, 3.9810717055349696e-23);
    check(pass, format!("k0(28 GHz) {k0:.6e}, L(340 GHz, 50 m) {loss:.6} dB, frame factor {factor:.6}, N0 {n0:.6e}"))
}

fn determinism() -> Outcome {
    let text = "num_flows = 120\nnum_slots = 800\nseeds = [3, 9]\n";
    let run = || {
        let cfg = ExperimentConfig::parse(text).expect("config parses");
        let spec = SweepSpec {
            schemes: cfg.schemes,
            axis: SweepAxis::Flows,
            values: vec![60.0, 120.0],
            seeds: cfg.seeds,
            base: cfg.params,
            validate: true,
        };
        to_csv_string(&run_sweep(&spec).expect("sweep runs").records)
    };
    let (a, b) = (run(), run());
    check(
        a == b && !a.is_empty(),
        format!("{} bytes, identical: {}", a.len(), a == b),
    )
}

fn gain_sampling() -> Outcome {
    const DRAWS: usize = 1_000_000;
    let ant = SectoredAntenna::from_db(20.0, 0.0, PI / 6.0);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut counts = [0usize; 4];
    for _ in 0..DRAWS {
        let (t, r) = sample_lobes(&mut rng, &ant, &ant);
        counts[usize::from(!t) * 2 + usize::from(!r)] += 1;
    }
    let pm = 1.0 / 12.0;
    let probs = [
        pm * pm,
        pm * (1.0 - pm),
        (1.0 - pm) * pm,
        (1.0 - pm) * (1.0 - pm),
    ];
    let n = DRAWS as f64;
    let mut pass = true;
    let mut parts = Vec::new();
    for (c, p) in counts.iter().zip(probs) {
        let z = (*c as f64 / n - p) / (p * (1.0 - p) / n).sqrt();
        pass &= z.abs() <= 3.0;
        parts.push(format!("{:.5} (z {z:+.2})", *c as f64 / n));
    }
    check(
        pass,
        format!("max-max/max-min/min-max/min-min {}", parts.join(", ")),
    )
}

fn main() -> ExitCode {
    let main_aggs = std::sync::OnceLock::new();
    let main_aggs =
        || main_aggs.get_or_init(|| sweep(&SchemeKind::ALL, SweepAxis::Flows, &[350.0]));
    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("feasibility of every scheme", Box::new(feasibility)),
        ("oracle admissibility", Box::new(oracle_admissibility)),
        (
            "completed-flow ordering",
            Box::new(|| scheme_ordering(main_aggs(), |a| a.mean_completed, "completed")),
        ),
        (
            "throughput ordering",
            Box::new(|| scheme_ordering(main_aggs(), |a| a.mean_throughput_bps, "throughput")),
        ),
        ("slot saturation", Box::new(slot_saturation)),
        (
            "reference distance monotonicity",
            Box::new(dref_monotonicity),
        ),
        ("threshold shape", Box::new(threshold_shape)),
        ("channel golden values", Box::new(golden_values)),
        ("byte-identical output", Box::new(determinism)),
        ("gain product sampling", Box::new(gain_sampling)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "criterion {:>2} {:<32} {} ({:.1?}) {}",
            k + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed(),
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
