//! Throughput comparison of the data-parallel batch entry points against
//! plain sequential loops over the same public scalar operations.
//!
//! Run `cargo bench` for the parallel build and
//! `cargo bench --no-default-features` for the sequential fallback;
//! criterion keeps baselines so the two runs are directly comparable. The
//! `*_seq` benches give an in-run sequential reference as well.

use criterion::{criterion_group, criterion_main, Criterion};
use phonolib::dynamics::{peak_height_recovery, LambdaPreset};
use phonolib::exec;
use phonolib::fit::{build_model, fit_model, Dataset, FitOptions, ModelContext, ModelId};
use phonolib::rates::{coherence_budget, single_phonon_rates, OrbitalDoublet, T1Params};
use phonolib::units::PhononBath;
use std::hint::black_box;

fn budget_grid(c: &mut Criterion) {
    let calib = T1Params::new(1.0 / 101.0, 50.0, 0.0).unwrap();
    let bath = PhononBath::new(0.0, 2230.0, 0.0).unwrap();
    let deltas: Vec<f64> = (1..=120).map(|i| 20.0 * i as f64).collect();
    let temps: Vec<f64> = (1..=120).map(|i| 0.25 * i as f64).collect();

    let mut group = c.benchmark_group("budget_grid_120x120");
    group.bench_function(if exec::is_parallel() { "batch_parallel" } else { "batch_sequential" }, |b| {
        b.iter(|| {
            let rows =
                coherence_budget(black_box(&bath), black_box(&deltas), black_box(&temps), &calib)
                    .unwrap();
            black_box(rows.len())
        })
    });
    group.bench_function("scalar_loop_seq", |b| {
        let chi_rho = calib.chi_rho();
        b.iter(|| {
            let mut acc = 0.0;
            for &d in &deltas {
                let doublet = OrbitalDoublet::ground(d).unwrap();
                for &t in &temps {
                    let bath_t = PhononBath::new(chi_rho, 2230.0, t).unwrap();
                    let r = single_phonon_rates(&doublet, &bath_t).unwrap();
                    acc += r.gamma_up;
                }
            }
            black_box(acc)
        })
    });
    group.finish();
}

fn multistart_fit(c: &mut Criterion) {
    // mott-seitz synthetic lifetimes, 8-start fit
    let xs: Vec<f64> = (0..60).map(|i| 5.0 + i as f64 * 5.8).collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|&t| 1.7 / (1.0 + 3.3 * (-55.0 / (0.0861733 * t)).exp()))
        .collect();
    let sigmas = vec![0.01; xs.len()];
    let data = Dataset::new(&xs, &ys, Some(&sigmas)).unwrap();
    let model = build_model(&ModelId::MottSeitz, &data, &ModelContext::default()).unwrap();
    let init = model.default_init(&data);
    let bounds = model.default_bounds(&data);

    let mut group = c.benchmark_group("mott_seitz_fit_8_starts");
    group.bench_function(if exec::is_parallel() { "multistart_parallel" } else { "multistart_sequential" }, |b| {
        let opts = FitOptions {
            bounds: Some(bounds.clone()),
            ..Default::default()
        };
        b.iter(|| black_box(fit_model(model.as_ref(), &data, &init, &opts).unwrap().chi2))
    });
    group.bench_function("single_start_x8_seq", |b| {
        let opts = FitOptions {
            bounds: Some(bounds.clone()),
            n_starts: 1,
            ..Default::default()
        };
        b.iter(|| {
            let mut acc = 0.0;
            for _ in 0..8 {
                acc += fit_model(model.as_ref(), &data, &init, &opts).unwrap().chi2;
            }
            black_box(acc)
        })
    });
    group.finish();
}

fn recovery_scan(c: &mut Criterion) {
    let preset = LambdaPreset::default();
    let system = preset.system_with_t1(39.0, 5.0).unwrap();
    let initial = preset.thermal_populations(5.0).unwrap();
    let taus: Vec<f64> = (0..=48).map(|i| i as f64 * 4.0).collect();

    let mut group = c.benchmark_group("pump_probe_recovery_49_taus");
    group.sample_size(20);
    group.bench_function(if exec::is_parallel() { "scan_parallel" } else { "scan_sequential" }, |b| {
        b.iter(|| {
            black_box(
                peak_height_recovery(&system, &initial, 80.0, 0.5, black_box(&taus), preset.settle_ns())
                    .unwrap()
                    .fitted_t1_ns,
            )
        })
    });
    group.finish();
}

criterion_group!(benches, budget_grid, multistart_fit, recovery_scan);
criterion_main!(benches);
