//! Acceptance checks. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use qloadbench::analysis::{empirical_epsilon, kl_divergence, total_variation};
use qloadbench::circuit::{build_cqgan, fold_global, AnsatzSpec, Circuit};
use qloadbench::cli::{cmd_benchmark, cmd_train, Depth, ExperimentConfig};
use qloadbench::cqgan::{
    initial_params, loss, planted_params, target_set, train, Optimizer, TargetFamily, TrainingConfig,
};
use qloadbench::mitigation::{
    extrapolate, ideal_distribution, measurement_calibrate, mitigate_distribution, noisy_distribution, observe,
    pauli_twirl, pec_gamma_total, pec_invert_depolarizing, pec_mitigated_distribution, twirled_cz_noise_ptm,
    zne_from_executor, CalibrationScheme, ExtrapolationMethod,
};
use qloadbench::noise::{amplitude_damping_kraus, apply_readout_error, depolarizing_kraus, NoiseModel};
use qloadbench::simcore::{
    circuit_unitary, evolve_density, kron_lsb_first, phase_insensitive_fidelity, rng_from_seed, CMatrix, DensityMatrix,
    Gate, StateVector,
};
use qloadbench::Distribution;
use rand::Rng;

type Outcome = (bool, String);
type Check<'a> = (&'static str, Box<dyn FnMut() -> Outcome + 'a>);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn mat2(a: f64, b: f64, cc: f64, d: f64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(a), c(b), c(cc), c(d)])
}

fn dist(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn random_circuit(n: usize, gates: usize, seed: u64) -> Circuit {
    let mut rng = rng_from_seed(seed);
    let mut c = Circuit::new(n, vec![]).unwrap();
    for _ in 0..gates {
        if rng.random::<f64>() < 0.35 {
            let a = rng.random_range(0..n);
            let b = (a + rng.random_range(1..n)) % n;
            c.push(Gate::cz(a, b)).unwrap();
        } else {
            c.push(Gate::ry(rng.random_range(0..n), rng.random_range(-3.2..3.2))).unwrap();
        }
    }
    c
}

/// Embeds a single-qubit operator on qubit `q` of an `n`-qubit register.
fn embed(op: &CMatrix, q: usize, n: usize) -> CMatrix {
    let ops: Vec<CMatrix> = (0..n).map(|i| if i == q { op.clone() } else { CMatrix::identity(2, 2) }).collect();
    kron_lsb_first(&ops)
}

fn simulator_oracles() -> Outcome {
    // pure and density evolution agree
    let mut worst_tv: f64 = 0.0;
    for seed in 0..20 {
        let circ = random_circuit(7, 60, seed);
        let mut psi = StateVector::zero(7).unwrap();
        psi.run(&circ).unwrap();
        let rho = evolve_density(&DensityMatrix::zero(7).unwrap(), &circ, &NoiseModel::ideal()).unwrap();
        let all: Vec<usize> = (0..7).collect();
        let tv = total_variation(&psi.probabilities(&all).unwrap(), &rho.probabilities(&all).unwrap()).unwrap();
        worst_tv = worst_tv.max(tv);
    }

    // gate algebra against hand-written matrices
    let x = mat2(0.0, 1.0, 1.0, 0.0);
    let z = mat2(1.0, 0.0, 0.0, -1.0);
    let id = CMatrix::identity(2, 2);
    let ry = |t: f64| mat2((t / 2.0).cos(), -(t / 2.0).sin(), (t / 2.0).sin(), (t / 2.0).cos());
    let mut alg: f64 = 0.0;
    for (a, b) in [(0.3, 1.1), (-2.0, 0.7), (3.0, 3.0)] {
        alg = alg.max(dist(&(Gate::ry(0, a).matrix() * Gate::ry(0, b).matrix()), &Gate::ry(0, a + b).matrix()));
        alg = alg.max(dist(&Gate::ry(0, a).matrix(), &ry(a)));
        alg = alg.max(dist(&(Gate::ry(0, a).matrix() * Gate::ry(0, -a).matrix()), &id));
    }
    alg = alg.max(dist(&Gate::ry(0, std::f64::consts::PI).matrix(), &(&x * &z)));
    alg = alg.max(dist(&(&x * &x), &id));
    alg = alg.max(dist(&(&x * &z), &-(&z * &x)));
    let cz_hand = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(1.0), c(1.0), c(-1.0)]));
    alg = alg.max(dist(&Gate::cz(0, 1).matrix(), &cz_hand));
    let cz01 = circuit_unitary(&Circuit::new(2, vec![Gate::cz(0, 1)]).unwrap()).unwrap();
    let cz10 = circuit_unitary(&Circuit::new(2, vec![Gate::cz(1, 0)]).unwrap()).unwrap();
    alg = alg.max(dist(&cz01, &cz10)).max(dist(&(&cz01 * &cz01), &CMatrix::identity(4, 4)));

    // Kraus completeness
    let mut kraus: f64 = 0.0;
    let mut check = |ks: Vec<CMatrix>| {
        let d = ks[0].nrows();
        let s = ks.iter().fold(CMatrix::zeros(d, d), |acc, k| acc + k.adjoint() * k);
        kraus = kraus.max(dist(&s, &CMatrix::identity(d, d)));
    };
    for p in [0.0, 0.001, 0.01, 0.3, 0.75] {
        check(depolarizing_kraus(p, 1).unwrap());
        check(depolarizing_kraus(p, 2).unwrap());
    }
    for g in [0.0, 0.05, 0.5, 1.0] {
        check(amplitude_damping_kraus(g).unwrap());
    }

    // folding preserves the unitary
    let mut fold: f64 = 0.0;
    for seed in 0..5 {
        let circ = random_circuit(5, 30, 100 + seed);
        let u = circuit_unitary(&circ).unwrap();
        for s in [1, 3, 5] {
            let f = circuit_unitary(&fold_global(&circ, s).unwrap()).unwrap();
            fold = fold.max(1.0 - phase_insensitive_fidelity(&u, &f));
        }
    }

    let pass = worst_tv < 1e-10 && alg < 1e-12 && kraus < 1e-12 && fold < 1e-9;
    (
        pass,
        format!(
            "pure vs density TV {worst_tv:.1e}, gate algebra {alg:.1e}, Kraus completeness {kraus:.1e}, fold infidelity {fold:.1e}"
        ),
    )
}

fn gradient_check() -> Outcome {
    let spec = AnsatzSpec::deep();
    let targets = target_set(&TargetFamily::bundled_bimodal(), spec.num_conditions()).unwrap();
    let eps = 1e-12;
    let h = 2e-4;
    let mut rng = rng_from_seed(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let theta: Vec<f64> =
            (0..spec.num_parameters()).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
        let grad = qloadbench::cqgan::gradient_parameter_shift(&spec, &theta, &targets, eps, None).unwrap();
        for k in 0..theta.len() {
            let at = |d: f64| {
                let mut t = theta.clone();
                t[k] += d;
                loss(&spec, &t, &targets, eps).unwrap()
            };
            let fd = (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
            worst = worst.max((fd - grad[k]).abs());
        }
    }
    (worst < 1e-6, format!("max |shift − finite difference| over 100 points = {worst:.2e} (bound 1e-6)"))
}

fn training() -> Outcome {
    let spec = AnsatzSpec::moderate();
    let planted = planted_params(&spec, 11);
    let targets: Vec<Distribution> = (0..spec.num_conditions())
        .map(|t| qloadbench::cqgan::generator_distribution(&spec, &planted, t, None).unwrap())
        .collect();
    let cfg = TrainingConfig {
        optimizer: Optimizer::GradientDescent { learning_rate: 0.2 },
        max_iters: 4000,
        convergence_tol: 1e-6,
        ..TrainingConfig::default()
    };
    let planted_loss = train(&spec, &targets, &cfg).unwrap().loss();

    let deep = AnsatzSpec::deep();
    let bundled = target_set(&TargetFamily::bundled_bimodal(), deep.num_conditions()).unwrap();
    let cfg = TrainingConfig::default();
    let start = loss(&deep, &initial_params(&deep, &bundled, cfg.seed), &bundled, cfg.eps).unwrap();
    let result = train(&deep, &bundled, &cfg).unwrap();
    let iters = result.trace.len() - 1;
    (
        planted_loss < 1e-4 && result.loss() <= 0.2 && iters <= 2000,
        format!(
            "planted recovery loss {planted_loss:.2e} (bound 1e-4); bundled targets, reps 2, SPSA seed {}: {start:.3} -> {:.4} in {iters} iterations (bound 0.2)",
            cfg.seed,
            result.loss()
        ),
    )
}

fn measurement_mitigation() -> Outcome {
    let noise = NoiseModel::builder().readout_flip(0.02).build().unwrap();
    let qubits: Vec<usize> = (0..5).collect();
    let truths = target_set(&TargetFamily::bundled_bimodal(), 4).unwrap();
    let exact_a = measurement_calibrate(&noise, &qubits, CalibrationScheme::Tensored, None, 0).unwrap().matrix();
    let mut worst_tv: f64 = 0.0;
    let mut wins = 0;
    let mut detail = Vec::new();
    for (t, truth) in truths.iter().enumerate() {
        let observed = apply_readout_error(truth, &noise, &qubits).unwrap();
        let fixed = mitigate_distribution(&observed, &exact_a).unwrap().distribution;
        worst_tv = worst_tv.max(total_variation(&fixed, truth).unwrap());

        let shots = 100_000;
        let eps = empirical_epsilon(shots);
        let sampled = observe(&observed, Some(shots), 500 + t as u64).unwrap();
        let a = measurement_calibrate(&noise, &qubits, CalibrationScheme::Tensored, Some(shots), 900 + t as u64)
            .unwrap()
            .matrix();
        let mitigated = mitigate_distribution(&sampled, &a).unwrap().distribution;
        let kl_raw = kl_divergence(truth, &sampled, eps).unwrap();
        let kl_mit = kl_divergence(truth, &mitigated, eps).unwrap();
        wins += usize::from(kl_mit < kl_raw);
        detail.push(format!("{kl_raw:.4}->{kl_mit:.4}"));
    }
    (
        worst_tv < 1e-6 && wins == 4,
        format!("exact inversion TV {worst_tv:.1e}; 1e5 shots KL per condition {}", detail.join(", ")),
    )
}

fn zne() -> Outcome {
    let spec = AnsatzSpec::moderate();
    let params: Vec<f64> = (0..spec.num_parameters()).map(|i| 0.4 + 0.37 * i as f64).collect();
    let mut worst: f64 = 0.0;
    for t in 0..4 {
        let circ = build_cqgan(t, &spec, &params).unwrap();
        let ideal = ideal_distribution(&circ).unwrap();
        let n = ideal.len() as f64;
        let base = circ.gates().len() as f64;
        let r = 0.05;
        let res = zne_from_executor(&[1, 3, 5], ExtrapolationMethod::Linear, |_, s| {
            let lambda = fold_global(&circ, s)?.gates().len() as f64 / base;
            Distribution::new(ideal.probs().iter().map(|p| (1.0 - r * lambda) * p + r * lambda / n).collect())
        })
        .unwrap();
        let err = res.distribution.probs().iter().zip(ideal.probs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst = worst.max(err);
    }
    let mut exp_worst: f64 = 0.0;
    for (cc, b, k) in [(0.02, 0.3, 0.4), (0.1, 0.05, 0.1), (0.0, 0.2, 1.0), (0.3, -0.1, 0.25)] {
        let pts: Vec<(f64, f64)> = [1.0, 3.0, 5.0].iter().map(|&l: &f64| (l, cc + b * (-k * l).exp())).collect();
        let fit = extrapolate(&pts, ExtrapolationMethod::Exponential).unwrap();
        exp_worst = exp_worst.max((fit.zero_value - (cc + b)).abs());
    }
    (
        worst < 1e-9 && exp_worst < 1e-3,
        format!("linear synthetic max bin error {worst:.1e} (bound 1e-9); exponential planted recovery {exp_worst:.1e} (bound 1e-3)"),
    )
}

fn pec_toy() -> Circuit {
    Circuit::new(2, vec![Gate::ry(0, 0.7), Gate::ry(1, 1.3), Gate::cz(0, 1), Gate::ry(0, 0.4), Gate::ry(1, -0.9)])
        .unwrap()
}

fn pec() -> Outcome {
    // exact: enumerate every correction assignment of the signed mixture
    let (p1, p2) = (0.03, 0.08);
    let circ = pec_toy();
    let gates = circ.gates().to_vec();
    let full = |g: &Gate| -> (CMatrix, Vec<CMatrix>, Vec<(f64, CMatrix)>) {
        if g.is_two_qubit() {
            let inv = pec_invert_depolarizing(p2, 2).unwrap();
            (g.matrix(), depolarizing_kraus(p2, 2).unwrap(), inv.terms.iter().map(|(w, p)| (*w, p.matrix())).collect())
        } else {
            let q = g.qubits()[0];
            let inv = pec_invert_depolarizing(p1, 1).unwrap();
            (
                embed(&g.matrix(), q, 2),
                depolarizing_kraus(p1, 1).unwrap().iter().map(|k| embed(k, q, 2)).collect(),
                inv.terms.iter().map(|(w, p)| (*w, embed(&p.matrix(), q, 2))).collect(),
            )
        }
    };
    let parts: Vec<_> = gates.iter().map(full).collect();
    let mut zero = CMatrix::zeros(4, 4);
    zero[(0, 0)] = c(1.0);
    let mut acc = CMatrix::zeros(4, 4);
    let sizes: Vec<usize> = parts.iter().map(|p| p.2.len()).collect();
    let combos: usize = sizes.iter().product();
    for mut idx in 0..combos {
        let mut rho = zero.clone();
        let mut weight = 1.0;
        for (u, kraus, terms) in &parts {
            let k = idx % terms.len();
            idx /= terms.len();
            rho = u * rho * u.adjoint();
            rho = kraus.iter().fold(CMatrix::zeros(4, 4), |s, kk| s + kk * &rho * kk.adjoint());
            let (w, p) = &terms[k];
            weight *= w;
            rho = p * rho * p.adjoint();
        }
        acc += rho * c(weight);
    }
    let u = circuit_unitary(&circ).unwrap();
    let ideal_rho = &u * zero * u.adjoint();
    let exact_err = dist(&acc, &ideal_rho);

    // sampled on the same toy
    let noise = NoiseModel::builder().p1(p1).p2(p2).build().unwrap();
    let ideal = ideal_distribution(&circ).unwrap();
    let noisy = noisy_distribution(&circ, &noise).unwrap();
    let est = pec_mitigated_distribution(&circ, &noise, 1_000_000, 17).unwrap();
    let tv_noisy = total_variation(&noisy, &ideal).unwrap();
    let tv_pec = total_variation(&est.distribution, &ideal).unwrap();

    // γ multiplicativity: three single-qubit gates with γ = 1.1 each
    let f = 3.0 / 3.2;
    let p = (1.0 - f) * 3.0 / 4.0;
    let g1 = pec_invert_depolarizing(p, 1).unwrap().gamma;
    let three = Circuit::new(1, vec![Gate::ry(0, 0.1), Gate::ry(0, 0.2), Gate::ry(0, 0.3)]).unwrap();
    let gt = pec_gamma_total(&three, &NoiseModel::builder().p1(p).build().unwrap()).unwrap();
    let gamma_err = (g1 - 1.1).abs().max((gt - 1.331).abs());

    (
        exact_err < 1e-10 && tv_pec < tv_noisy && tv_pec < 0.01 && gamma_err < 1e-12,
        format!(
            "exact mixture {exact_err:.1e} over {combos} assignments; 1e6 samples TV {tv_pec:.4} vs noisy {tv_noisy:.4}; γ product error {gamma_err:.1e}"
        ),
    )
}

fn twirling() -> Outcome {
    let circ = random_circuit(7, 40, 77);
    let u = circuit_unitary(&circ).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let tw = pauli_twirl(&circ, 1000 + i);
        worst = worst.max((1.0 - phase_insensitive_fidelity(&u, &circuit_unitary(&tw).unwrap())).abs());
    }
    let ad = amplitude_damping_kraus(0.1).unwrap();
    let mut off: f64 = 0.0;
    for with_depol in [false, true] {
        let ptm = twirled_cz_noise_ptm(|rho: &mut DensityMatrix| {
            if with_depol {
                rho.depolarize(0.02, &[0, 1])?;
            }
            rho.apply_kraus(&ad, &[0])?;
            rho.apply_kraus(&ad, &[1])
        })
        .unwrap();
        for i in 0..16 {
            for j in 0..16 {
                if i != j {
                    off = off.max(ptm[(i, j)].abs());
                }
            }
        }
    }
    (
        worst < 1e-9 && off < 1e-9,
        format!("200 twirls worst infidelity {worst:.1e}; twirled PTM max off-diagonal {off:.1e}"),
    )
}

fn run_pipeline(out: &Path) -> Vec<(Depth, qloadbench::analysis::KlReport)> {
    let mut cfg: ExperimentConfig = include_str!("../../../configs/reference.conf").parse().unwrap();
    cfg.out = out.to_path_buf();
    cmd_train(&cfg).unwrap();
    cmd_benchmark(&cfg).unwrap()
}

fn benchmark(reports: &[(Depth, qloadbench::analysis::KlReport)]) -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for (depth, report) in reports {
        let good = report.rows.iter().filter(|r| r.improvement_percent > 20.0).count();
        let mean = report.rows.iter().map(|r| r.improvement_percent).sum::<f64>() / report.rows.len() as f64;
        let per: Vec<String> = report.rows.iter().map(|r| format!("{:.0}%", r.improvement_percent)).collect();
        pass &= good >= 3;
        detail.push(format!("{depth}: {good}/4 above 20% [{}], mean {mean:.1}%", per.join(" ")));
    }
    (pass, format!("zne+meas {}; 30-40% band shown for context, not asserted", detail.join("; ")))
}

fn csv_files(root: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if matches!(p.extension().and_then(|e| e.to_str()), Some("csv" | "txt")) {
                out.push(p.strip_prefix(root).unwrap().to_path_buf());
            }
        }
    }
    out.sort();
    out
}

fn determinism(a: &Path, b: &Path) -> Outcome {
    let fa = csv_files(a);
    let fb = csv_files(b);
    let same = fa == fb && fa.iter().all(|f| std::fs::read(a.join(f)).unwrap() == std::fs::read(b.join(f)).unwrap());
    (same && !fa.is_empty(), format!("{} artifacts compared byte for byte across two seeded runs", fa.len()))
}

fn main() {
    let tmp = tempfile::tempdir().unwrap();
    let (run_a, run_b) = (tmp.path().join("a"), tmp.path().join("b"));

    let mut checks: Vec<Check> = vec![
        ("simulator oracles", Box::new(simulator_oracles)),
        ("parameter-shift gradient", Box::new(gradient_check)),
        ("generator training", Box::new(training)),
        ("measurement mitigation", Box::new(measurement_mitigation)),
        ("zero-noise extrapolation", Box::new(zne)),
        ("probabilistic error cancellation", Box::new(pec)),
        ("Pauli twirling", Box::new(twirling)),
        ("benchmark improvement", Box::new(|| benchmark(&run_pipeline(&run_a)))),
        (
            "seeded determinism",
            Box::new(|| {
                run_pipeline(&run_b);
                determinism(&run_a, &run_b)
            }),
        ),
    ];

    let mut failed = 0;
    for (i, (name, check)) in checks.iter_mut().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(o) => o,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        failed += usize::from(!pass);
        println!(
            "{} [{}] {name}: {detail} ({:.1}s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
