//! End-to-end acceptance checks. Prints one line per criterion and exits
//! non-zero if any fails. Pass criterion numbers as arguments to run a subset.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use hodgenet::complex::{hodge_laplacians, incidence_matrix, verify_chain_property, OrderOperators, SimplicialComplex};
use hodgenet::data::{random_flag_complex, synth_citation_like, synth_trajectories, Scale};
use hodgenet::nn::{
    mpnn_forward, scnn_forward, snn_forward, Activation, Architecture, LayerParams, LayerRecord, Mode, MpnnParams,
    NetworkSpec, SimplicialNetwork,
};
use hodgenet::train::{
    adjacency, benchmark, reference_parameter_count, train_classification, train_imputation, BenchConfig, Task,
    TrainConfig,
};
use hodgenet::tsp::{harmonic_basis, hodge_decompose, sft_basis, sft_forward, sft_inverse, spatial_filter, spectral_filter, FilterSpec};
use hodgenet::Cochain;
use nalgebra::DMatrix;
use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: Option<bool>,
    detail: String,
}

fn pass(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: Some(ok),
        detail: detail.into(),
    }
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Array2<f64> {
    Array2::from_shape_simple_fn((rows, cols), || rng.random_range(-1.0..1.0))
}

fn max_abs(a: &Array2<f64>) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// A random complex with at least one non-empty order `k >= 1`, and that `k`.
fn random_instance(seed: u64, max_simplices: usize) -> (SimplicialComplex, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.random_range(4..14);
        let p = rng.random_range(0.3..0.7);
        let c = random_flag_complex(rng.random(), n, p, 3).unwrap();
        let orders: Vec<usize> = (1..=c.order()).filter(|&k| c.count(k) <= max_simplices).collect();
        if let Some(&k) = orders.get(rng.random_range(0..orders.len().max(1))) {
            return (c, k);
        }
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_chain = 0i64;
    let mut min_eig = f64::INFINITY;
    for _ in 0..1000 {
        let n = rng.random_range(3..=50);
        let p = rng.random_range(0.02..0.3_f64);
        let c = random_flag_complex(rng.random(), n, p, 3).unwrap();
        for check in verify_chain_property(&c).unwrap() {
            worst_chain = worst_chain.max(check.max_abs);
        }
        for k in 0..=c.order() {
            let l = hodge_laplacians(&c, k).unwrap().full.to_dense();
            let m = DMatrix::from_fn(l.nrows(), l.ncols(), |i, j| l[[i, j]]);
            min_eig = m.symmetric_eigenvalues().iter().fold(min_eig, |a, &b| a.min(b));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    pass(
        worst_chain == 0 && min_eig >= -1e-10 && secs < 30.0,
        format!("max |B_k B_k+1| = {worst_chain}, min eigenvalue {min_eig:.2e}, {secs:.1} s (limit 30 s)"),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut round, mut parseval, mut filt) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..200 {
        let (c, k) = random_instance(1000 + i, 200);
        let triple = hodge_laplacians(&c, k).unwrap();
        let basis = sft_basis(&triple.full).unwrap();
        let x = Cochain::new(k, random_matrix(&mut rng, c.count(k), 2));
        let xh = sft_forward(&basis, &x).unwrap();
        let back = sft_inverse(&basis, &xh).unwrap();
        round = round.max(max_abs(&(&back.values - &x.values)));
        let energy = |a: &Array2<f64>| a.iter().map(|v| v * v).sum::<f64>();
        parseval = parseval.max((energy(&xh.values) - energy(&x.values)).abs() / energy(&x.values).max(1.0));
        let degree = rng.random_range(0..=4);
        let coeffs: Vec<f64> = (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect();
        let spectral = spectral_filter(&triple.full, &FilterSpec::Polynomial(coeffs.clone()), &x).unwrap();
        let spatial = spatial_filter(&triple, &coeffs, &x).unwrap();
        let scale = max_abs(&spatial.values).max(1.0);
        filt = filt.max(max_abs(&(&spectral.values - &spatial.values)) / scale);
    }
    let secs = start.elapsed().as_secs_f64();
    pass(
        round <= 1e-8 && parseval <= 1e-8 && filt <= 1e-6 && secs < 60.0,
        format!("round-trip {round:.1e}, Parseval {parseval:.1e}, spectral vs spatial {filt:.1e}, {secs:.1} s"),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut sum, mut ortho, mut harm) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..200 {
        let (c, k) = random_instance(2000 + i, 200);
        let x = Cochain::new(k, random_matrix(&mut rng, c.count(k), 1));
        let parts = hodge_decompose(&c, k, &x).unwrap();
        let total = &parts.harmonic.values + &parts.lower_induced.values + &parts.upper_induced.values;
        sum = sum.max(max_abs(&(&total - &x.values)));
        let dot = |a: &Cochain, b: &Cochain| (&a.values * &b.values).sum().abs();
        ortho = ortho
            .max(dot(&parts.harmonic, &parts.lower_induced))
            .max(dot(&parts.harmonic, &parts.upper_induced))
            .max(dot(&parts.lower_induced, &parts.upper_induced));
        let l = hodge_laplacians(&c, k).unwrap().full;
        harm = harm.max(max_abs(&l.mul_dense(&parts.harmonic.values.view()).unwrap()));
    }
    let hollow = SimplicialComplex::build(&[vec![], vec![vec![0, 1], vec![0, 2], vec![1, 2]]]).unwrap();
    let h = harmonic_basis(&hollow, 1).unwrap();
    let projector = h.dot(&h.t());
    let v = ndarray::array![[1.0], [-1.0], [1.0]];
    let expected = v.dot(&v.t()) / 3.0;
    let proj_err = max_abs(&(&projector - &expected));
    pass(
        sum <= 1e-8 && ortho <= 1e-8 && harm <= 1e-8 && proj_err <= 1e-10,
        format!("sum {sum:.1e}, orthogonality {ortho:.1e}, L·harmonic {harm:.1e}, hollow projector {proj_err:.1e}"),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut snn_err, mut mpnn_err, mut j2_err) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..100 {
        let (c, k) = random_instance(3000 + i, 120);
        let t = hodge_laplacians(&c, k).unwrap();
        let n = c.count(k);
        let d = rng.random_range(1..4);
        let z = Cochain::new(k, random_matrix(&mut rng, n, d));
        let has_l = t.lower.is_some();
        let has_u = t.upper.is_some();
        let w = |rng: &mut ChaCha8Rng| random_matrix(rng, d, d);
        let zero = Array2::zeros((d, d));
        let act = Activation::Tanh;

        // SCNN with Ξ = 0 and Γ = Θ against the SNN on L = L_l + L_u (J = 1)
        let g = w(&mut rng);
        let shared = LayerParams {
            gamma: if has_l { vec![g.clone()] } else { vec![] },
            theta: if has_u { vec![g.clone()] } else { vec![] },
            xi: zero.clone(),
        };
        let a = scnn_forward(&t, &z, &shared, act).unwrap();
        let b = snn_forward(&t, &z, &[g], act).unwrap();
        snn_err = snn_err.max(max_abs(&(&a.values - &b.values)));

        // MPNN with constant vectors against SCNN(J=1) with scalar taps
        let (gc, tc): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let b_k = (k > 0).then(|| incidence_matrix(&c, k).unwrap());
        let b_up = (k < c.order()).then(|| incidence_matrix(&c, k + 1).unwrap());
        let mp = MpnnParams {
            gamma: Array1::from_elem(b_k.as_ref().map_or(0, |b| b.rows()), gc),
            theta: Array1::from_elem(b_up.as_ref().map_or(0, |b| b.cols()), tc),
        };
        let a = mpnn_forward(b_k.as_ref(), b_up.as_ref(), &z, &mp, act).unwrap();
        let eye = Array2::<f64>::eye(d);
        let scalar = LayerParams {
            gamma: if has_l { vec![&eye * gc] } else { vec![] },
            theta: if has_u { vec![&eye * tc] } else { vec![] },
            xi: zero.clone(),
        };
        let b = scnn_forward(&t, &z, &scalar, act).unwrap();
        mpnn_err = mpnn_err.max(max_abs(&(&a.values - &b.values)));

        // J = 2 against two stages of J = 1 convolutions
        let (g1, g2, t1, t2, xi) = (w(&mut rng), w(&mut rng), w(&mut rng), w(&mut rng), w(&mut rng));
        let id = Activation::Identity;
        let full = LayerParams {
            gamma: if has_l { vec![g1.clone(), g2.clone()] } else { vec![] },
            theta: if has_u { vec![t1.clone(), t2.clone()] } else { vec![] },
            xi: xi.clone(),
        };
        let direct = scnn_forward(&t, &z, &full, id).unwrap();
        let one = |gamma: Option<&Array2<f64>>, theta: Option<&Array2<f64>>, xi: &Array2<f64>, input: &Cochain| {
            let p = LayerParams {
                gamma: if has_l { vec![gamma.cloned().unwrap_or_else(|| zero.clone())] } else { vec![] },
                theta: if has_u { vec![theta.cloned().unwrap_or_else(|| zero.clone())] } else { vec![] },
                xi: xi.clone(),
            };
            scnn_forward(&t, input, &p, id).unwrap()
        };
        // stage one: Ŷ = L_l Z, Ỹ = L_u Z and S1 = L_l Z Γ1 + L_u Z Θ1 + Z Ξ
        let y_low = one(Some(&eye), None, &zero, &z);
        let y_up = one(None, Some(&eye), &zero, &z);
        let s1 = one(Some(&g1), Some(&t1), &xi, &z);
        // stage two: S2 = L_l Ŷ Γ2 + L_u Ỹ Θ2
        let s2 = &one(Some(&g2), None, &zero, &y_low).values + &one(None, Some(&t2), &zero, &y_up).values;
        let composed = &s1.values + &s2;
        let scale = max_abs(&direct.values).max(1.0);
        j2_err = j2_err.max(max_abs(&(&direct.values - &composed)) / scale);
    }
    pass(
        snn_err <= 1e-8 && mpnn_err <= 1e-8 && j2_err <= 1e-8,
        format!("SNN {snn_err:.1e}, MPNN {mpnn_err:.1e}, J=2 composition {j2_err:.1e}"),
    )
}

/// Every discrete branch taken in a forward pass: activation kinks, clamp
/// boundaries and the sign of magnitudes.
fn branch_pattern(net: &SimplicialNetwork, ops: &OrderOperators, x: &Array2<f64>) -> Vec<i8> {
    let tape = net.forward(ops, x, Mode::Train).unwrap();
    let region = |v: f64| -> i8 {
        match v {
            v if v < -1.0 => -2,
            v if v < 0.0 => -1,
            v if v <= 1.0 => 1,
            _ => 2,
        }
    };
    let mut out = Vec::new();
    for r in &tape.records {
        match r {
            LayerRecord::Dense { pre, .. } => out.extend(pre.iter().map(|&v| region(v))),
            LayerRecord::Binary { input, pre, .. } => {
                out.extend(input.iter().map(|&v| region(v)));
                out.extend(pre.iter().map(|&v| region(v)));
            }
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let h = 1e-5;
    let mut lines = Vec::new();
    let mut all_ok = true;
    for (a, arch) in Architecture::ALL.iter().enumerate() {
        let (mut checked, mut passed, mut skipped) = (0usize, 0usize, 0usize);
        for inst in 0..3u64 {
            let (c, k) = random_instance(4000 + 10 * a as u64 + inst, 40);
            let ops = OrderOperators::new(&c, k).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(5 + inst);
            let act = if *arch == Architecture::Snn { Activation::Tanh } else { Activation::LeakyRelu };
            let spec = NetworkSpec::new(*arch, vec![2, 8, 2], act);
            let mut net = SimplicialNetwork::new(spec, &ops, &mut rng).unwrap();
            let x = random_matrix(&mut rng, c.count(k), 2) * 1.5;
            let g = random_matrix(&mut rng, c.count(k), 2);
            let objective = |net: &SimplicialNetwork| (&net.forward(&ops, &x, Mode::Train).unwrap().output * &g).sum();
            let tape = net.forward(&ops, &x, Mode::Train).unwrap();
            let grads = net.backward(&ops, &tape, &g).unwrap();
            for (pi, grad) in grads.iter().enumerate() {
                for idx in 0..grad.len() {
                    let cols = grad.ncols();
                    let at = [idx / cols, idx % cols];
                    let original = net.parameters()[pi][at];
                    net.parameters_mut()[pi][at] = original + h;
                    let (fp, pp) = (objective(&net), branch_pattern(&net, &ops, &x));
                    net.parameters_mut()[pi][at] = original - h;
                    let (fm, pm) = (objective(&net), branch_pattern(&net, &ops, &x));
                    net.parameters_mut()[pi][at] = original;
                    if pp != pm {
                        skipped += 1;
                        continue;
                    }
                    let numeric = (fp - fm) / (2.0 * h);
                    let analytic = grad[at];
                    let diff = (numeric - analytic).abs();
                    let ok = diff <= 1e-4 * numeric.abs().max(analytic.abs()) || diff <= 1e-7;
                    checked += 1;
                    passed += ok as usize;
                }
            }
        }
        let rate = passed as f64 / checked.max(1) as f64;
        all_ok &= checked > 0 && rate >= 0.99;
        lines.push(format!("{} {passed}/{checked} ({skipped} at kinks)", arch.name()));
    }
    pass(all_ok, lines.join(", "))
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (m, var.sqrt())
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let (complex, features) = synth_citation_like(0, Scale::Small).unwrap();
    let run = |arch: Architecture| {
        let cfg = TrainConfig {
            arch,
            layers: 2,
            filters: 30,
            iterations: 1000,
            lr: 0.001,
            missing_rate: 0.1,
            repeats: 10,
            zero_taps: arch != Architecture::Biscnn,
            ..Default::default()
        };
        let mut hidden = Vec::new();
        let mut all = Vec::new();
        let mut base = Vec::new();
        let mut base_all = Vec::new();
        for r in 0..cfg.repeats {
            let metrics = train_imputation(&complex, &features, &cfg, r).unwrap();
            let avg = |f: &dyn Fn(&hodgenet::train::OrderMetrics) -> f64| metrics.iter().map(f).sum::<f64>() / metrics.len() as f64;
            hidden.push(avg(&|m| m.accuracy));
            all.push(avg(&|m| m.accuracy_all));
            base.push(avg(&|m| m.baseline_accuracy));
            base_all.push(avg(&|m| m.baseline_accuracy_all));
        }
        (mean_std(&hidden), mean_std(&all), mean_std(&base), mean_std(&base_all))
    };
    let (bi, bi_all, base, base_all) = run(Architecture::Biscnn);
    let (sc, sc_all, _, _) = run(Architecture::Scnn);
    let secs = start.elapsed().as_secs_f64();
    let ok = bi.0 > base.0 && (bi.0 - sc.0).abs() <= 5.0 && secs < 600.0;
    pass(
        ok,
        format!(
            "hidden entries: Bi-SCNN-2 {:.2}±{:.2}, SCNN-2 {:.2}±{:.2}, median fill {:.2}±{:.2}; \
             all entries: Bi-SCNN-2 {:.2}, SCNN-2 {:.2}, median fill {:.2}; {secs:.0} s (limit 600 s)",
            bi.0, bi.1, sc.0, sc.1, base.0, base.1, bi_all.0, sc_all.0, base_all.0
        ),
    )
}

fn criterion_7() -> Outcome {
    let (mesh, data) = synth_trajectories(7, 160, 40).unwrap();
    // oracle: the harmonic part of every flow identifies its class
    let h = harmonic_basis(&mesh, 1).unwrap();
    let coords: Vec<Array1<f64>> = (0..data.len()).map(|i| h.t().dot(&data.flows.row(i))).collect();
    let centroid = |label: usize| {
        let members: Vec<&Array1<f64>> = data.train.iter().filter(|&&i| data.labels[i] == label).map(|&i| &coords[i]).collect();
        members.iter().fold(Array1::zeros(h.ncols()), |a, b| a + *b) / members.len() as f64
    };
    let centroids = [centroid(0), centroid(1)];
    let oracle_hits = data
        .test
        .iter()
        .filter(|&&i| {
            let dist = |c: &Array1<f64>| (&coords[i] - c).mapv(|v| v * v).sum();
            (dist(&centroids[1]) < dist(&centroids[0])) as usize == data.labels[i]
        })
        .count();
    let separable = oracle_hits == data.test.len();

    let cfg = TrainConfig {
        task: Task::Classify,
        arch: Architecture::Biscnn,
        activation: Activation::Tanh,
        layers: 2,
        filters: 30,
        iterations: 5000,
        lr: 0.001,
        batch_size: 40,
        ..Default::default()
    };
    let m = train_classification(&mesh, &data, &cfg, 0).unwrap();
    pass(
        separable && m.test_accuracy >= 90.0,
        format!(
            "harmonic oracle {oracle_hits}/{} test flows; Bi-SCNN-2 tanh test {:.1}% (train {:.1}%) after {} steps, {} parameters",
            data.test.len(),
            m.test_accuracy,
            m.train_accuracy,
            cfg.iterations,
            m.parameters
        ),
    )
}

fn criterion_8() -> Outcome {
    let (complex, features) = synth_citation_like(0, Scale::Paper).unwrap();
    let cfg = BenchConfig {
        archs: vec![Architecture::Biscnn, Architecture::Scnn],
        iterations: 20,
        ..Default::default()
    };
    let report = benchmark(&complex, &features, &cfg).unwrap();
    let (bi, sc) = (&report.timings[0], &report.timings[1]);
    let ratio = report.biscnn_over_scnn.unwrap();
    let adj = adjacency(&complex);
    let widths = [1, 30, 1];
    let ref_bi = reference_parameter_count(Architecture::Biscnn, &widths, &adj).unwrap();
    let ref_sc = reference_parameter_count(Architecture::Scnn, &widths, &adj).unwrap();
    pass(
        ratio <= 0.9 && bi.parameters < sc.parameters && ref_bi < ref_sc,
        format!(
            "Bi-SCNN-2 {:.3} s vs SCNN-2 {:.3} s (ratio {ratio:.2}, limit 0.90; published 21.21 s vs 365.92 s); \
             parameters {} vs {} (published convention {ref_bi} vs {ref_sc}; table 1146 vs 1986)",
            bi.seconds, sc.seconds, bi.parameters, sc.parameters
        ),
    )
}

fn criterion_9() -> Outcome {
    let citation = std::env::var("HODGENET_CITATION_DIR").ok();
    let ocean = std::env::var("HODGENET_OCEAN_DIR").ok();
    if citation.is_none() && ocean.is_none() {
        return Outcome {
            pass: None,
            detail: "no real data supplied (set HODGENET_CITATION_DIR and/or HODGENET_OCEAN_DIR)".into(),
        };
    }
    let mut ok = true;
    let mut notes = Vec::new();
    if let Some(dir) = citation {
        let dir = Path::new(&dir);
        let complex = hodgenet::data::load_complex(&dir.join("complex.json")).unwrap();
        let x = hodgenet::data::load_features(&dir.join("features_0.json")).unwrap();
        let cfg = TrainConfig {
            orders: Some(vec![0]),
            repeats: 10,
            ..Default::default()
        };
        let acc: Vec<f64> = (0..10)
            .map(|r| train_imputation(&complex, std::slice::from_ref(&x), &cfg, r).unwrap()[0].accuracy_all)
            .collect();
        let (m, s) = mean_std(&acc);
        ok &= (m - 90.65).abs() <= 2.0;
        notes.push(format!("citation k=0 {m:.2}±{s:.2} (published 90.65)"));
    }
    if let Some(dir) = ocean {
        let dir = Path::new(&dir);
        let complex = hodgenet::data::load_complex(&dir.join("complex.json")).unwrap();
        let data = hodgenet::data::load_trajectories(&dir.join("trajectories.json")).unwrap();
        let cfg = TrainConfig {
            task: Task::Classify,
            activation: Activation::Tanh,
            ..Default::default()
        };
        let m = train_classification(&complex, &data, &cfg, 0).unwrap();
        ok &= m.test_accuracy >= 66.0;
        notes.push(format!("ocean test {:.1}% (limit 66)", m.test_accuracy));
    }
    pass(ok, notes.join("; "))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_hodgenet");
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(bin)
            .args(["train", "--synthetic", "tiny", "--arch", "biscnn", "--iterations", "40", "--repeats", "3"])
            .args(["--filters", "8", "--seed", "11", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success(), "train exited with {status}");
        std::fs::read(out.join("summary.json")).unwrap()
    };
    let a = run("a");
    let b = run("b");
    let manifest = dir.path().join("a").join("manifest.json");
    let c = {
        let out = dir.path().join("c");
        let status = Command::new(bin)
            .args(["train", "--config"])
            .arg(&manifest)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out.join("summary.json")).unwrap()
    };
    pass(
        a == b && a == c,
        format!("{} byte summary; flag rerun identical: {}; manifest rerun identical: {}", a.len(), a == b, a == c),
    )
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "chain complex suite", criterion_1),
        (2, "SFT suite", criterion_2),
        (3, "Hodge decomposition suite", criterion_3),
        (4, "reduction identities", criterion_4),
        (5, "gradient suite", criterion_5),
        (6, "synthetic imputation", criterion_6),
        (7, "synthetic classification", criterion_7),
        (8, "efficiency", criterion_8),
        (9, "real data (optional)", criterion_9),
        (10, "determinism", criterion_10),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, check) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            pass(false, format!("panicked: {msg}"))
        });
        let status = match outcome.pass {
            Some(true) => "PASS",
            Some(false) => {
                failed += 1;
                "FAIL"
            }
            None => "SKIP",
        };
        println!(
            "criterion {id:>2} [{name}]: {status} ({:.1} s) {}",
            start.elapsed().as_secs_f64(),
            outcome.detail
        );
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
