use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use log::info;

use super::config::{Depth, ExperimentConfig, TargetSource};
use super::pipeline::mitigated_distribution;
use super::svg::{histogram_svg, Series};
use crate::analysis::{empirical_epsilon, kl_divergence, KlReport, KlRow};
use crate::circuit::{build_cqgan, parse_circuit, write_circuit, AnsatzSpec, Circuit};
use crate::cqgan::{generator_distribution, planted_params, target_set, train, ParamsFile};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::mitigation::{ideal_distribution, noisy_distribution, observe};
use crate::simcore::derive_seed;

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial artifact.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Target distributions for every condition at `depth`.
pub fn targets_for(cfg: &ExperimentConfig, depth: Depth) -> Result<Vec<Distribution>> {
    let spec = cfg.spec(depth);
    match &cfg.targets {
        TargetSource::Family(f) => target_set(f, spec.num_conditions()),
        TargetSource::Planted { seed } => {
            let theta = planted_params(&spec, *seed);
            (0..spec.num_conditions()).map(|t| generator_distribution(&spec, &theta, t, None)).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainSummary {
    pub depth: Depth,
    pub initial_loss: f64,
    pub loss: f64,
    pub iterations: usize,
    pub params_path: PathBuf,
}

/// Trains each configured depth and writes `params.txt`, `loss_trace.csv`
/// and `targets.csv` under `{out}/{depth}/`.
pub fn cmd_train(cfg: &ExperimentConfig) -> Result<Vec<TrainSummary>> {
    let mut out = Vec::new();
    for &depth in &cfg.depths {
        let spec = cfg.spec(depth);
        let targets = targets_for(cfg, depth)?;
        info!("training {depth} ansatz ({} parameters)", spec.num_parameters());
        let result = train(&spec, &targets, &cfg.training)?;
        let dir = cfg.depth_dir(depth);
        let params_path = dir.join("params.txt");
        let file = ParamsFile { params: result.params.clone(), seed: cfg.training.seed, loss: result.loss() };
        write_atomic(&params_path, file.to_text().as_bytes())?;

        let mut trace = String::from("iteration,loss\n");
        for (i, l) in result.trace.iter().enumerate() {
            writeln!(trace, "{i},{l:.12e}").expect("writing to String");
        }
        write_atomic(&dir.join("loss_trace.csv"), trace.as_bytes())?;
        write_atomic(&dir.join("targets.csv"), distributions_csv(&targets, |t| format!("t{t}")).as_bytes())?;

        out.push(TrainSummary {
            depth,
            initial_loss: result.trace[0],
            loss: result.loss(),
            iterations: result.trace.len() - 1,
            params_path,
        });
    }
    Ok(out)
}

fn distributions_csv(columns: &[Distribution], name: impl Fn(usize) -> String) -> String {
    let mut s = String::from("outcome");
    for i in 0..columns.len() {
        write!(s, ",{}", name(i)).expect("writing to String");
    }
    s.push('\n');
    for bin in 0..columns.first().map_or(0, Distribution::len) {
        write!(s, "{bin}").expect("writing to String");
        for c in columns {
            write!(s, ",{:.12}", c.probs()[bin]).expect("writing to String");
        }
        s.push('\n');
    }
    s
}

/// Loads and checks the trained parameters for `depth`.
pub fn load_params(cfg: &ExperimentConfig, depth: Depth) -> Result<Vec<f64>> {
    let path = cfg.params_path(depth);
    let text = std::fs::read_to_string(&path).map_err(|e| {
        Error::Config(format!("missing parameters for {depth} ({}): {e}; run `train` first", path.display()))
    })?;
    let file = ParamsFile::parse(&text)?;
    let expected = cfg.spec(depth).num_parameters();
    if file.params.len() != expected {
        return Err(Error::ParameterCount { expected, found: file.params.len() });
    }
    Ok(file.params)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkCell {
    pub ideal: Distribution,
    pub ideal_sampled: Distribution,
    pub noisy: Distribution,
    pub mitigated: Distribution,
    pub row: KlRow,
}

/// One condition of the grid: ideal, sampled-ideal, noisy and mitigated
/// distributions with their divergences from the ideal.
pub fn benchmark_cell(cfg: &ExperimentConfig, depth: Depth, circuit: &Circuit, t: usize) -> Result<BenchmarkCell> {
    let depth_index = cfg.depths.iter().position(|d| *d == depth).unwrap_or(0) as u64;
    let seed = derive_seed(derive_seed(cfg.seed, depth_index + 1), t as u64);
    let shots = (!cfg.exact).then(|| cfg.shots(depth));
    let eps = shots.map_or(1e-12, empirical_epsilon);
    let ideal = ideal_distribution(circuit)?;
    let ideal_sampled = observe(&ideal, shots, derive_seed(seed, 0))?;
    let noisy = observe(&noisy_distribution(circuit, &cfg.noise)?, shots, derive_seed(seed, 1))?;
    let mitigated = mitigated_distribution(circuit, &cfg.noise, &cfg.mitigation, shots, derive_seed(seed, 2))?;
    let row = KlRow::new(
        t,
        kl_divergence(&ideal, &ideal_sampled, eps)?,
        kl_divergence(&ideal, &noisy, eps)?,
        kl_divergence(&ideal, &mitigated, eps)?,
    );
    Ok(BenchmarkCell { ideal, ideal_sampled, noisy, mitigated, row })
}

/// Runs the grid for every configured depth and writes `report.csv` plus
/// per-condition `circuit.txt`, `distributions.csv` and `histogram.svg`.
pub fn cmd_benchmark(cfg: &ExperimentConfig) -> Result<Vec<(Depth, KlReport)>> {
    let mut reports = Vec::new();
    for &depth in &cfg.depths {
        let spec = cfg.spec(depth);
        let params = load_params(cfg, depth)?;
        let dir = cfg.depth_dir(depth);
        let mut report = KlReport::default();
        for t in 0..spec.num_conditions() {
            info!("benchmarking {depth} condition {t} with mitigation {}", cfg.mitigation.label());
            let circuit = build_cqgan(t, &spec, &params)?;
            let cell = benchmark_cell(cfg, depth, &circuit, t)?;
            let cdir = dir.join(t.to_string());
            write_atomic(&cdir.join("circuit.txt"), write_circuit(&circuit).as_bytes())?;
            let cols = [cell.ideal.clone(), cell.ideal_sampled.clone(), cell.noisy.clone(), cell.mitigated.clone()];
            let names = ["ideal", "ideal_sampled", "noisy", "mitigated"];
            write_atomic(
                &cdir.join("distributions.csv"),
                distributions_csv(&cols, |i| names[i].to_string()).as_bytes(),
            )?;
            let mitigated_label = format!("mitigated ({})", cfg.mitigation.label());
            let svg = histogram_svg(
                &format!("{depth} circuit, condition {t}"),
                &[
                    Series { label: "ideal (sampled)", values: cell.ideal_sampled.probs(), color: "#4c78a8" },
                    Series { label: "noisy", values: cell.noisy.probs(), color: "#e45756" },
                    Series { label: &mitigated_label, values: cell.mitigated.probs(), color: "#54a24b" },
                ],
                Some(Series { label: "ideal", values: cell.ideal.probs(), color: "#222222" }),
            );
            write_atomic(&cdir.join("histogram.svg"), svg.as_bytes())?;
            report.rows.push(cell.row);
        }
        let mut csv = Vec::new();
        report.write_csv(&mut csv)?;
        write_atomic(&dir.join("report.csv"), &csv)?;
        reports.push((depth, report));
    }
    Ok(reports)
}

/// Human-readable summary of a circuit file or a parameter file.
pub fn cmd_inspect(path: &Path) -> Result<String> {
    let text = std::fs::read_to_string(path)?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).unwrap_or("");
    let mut s = String::new();
    if first.starts_with("PARAMS") {
        let file = ParamsFile::parse(&text)?;
        let rotated = AnsatzSpec::default().rotated_qubits().len();
        let k = file.params.len();
        writeln!(s, "parameter file   {}", path.display()).ok();
        writeln!(s, "parameters       {k}").ok();
        writeln!(s, "training seed    {}", file.seed).ok();
        writeln!(s, "training loss    {:.6e}", file.loss).ok();
        if k >= 2 * rotated && k % rotated == 0 {
            let spec = AnsatzSpec { reps: k / rotated - 1, ..AnsatzSpec::default() };
            let circuit = crate::circuit::build_two_local(&spec, &file.params)?;
            writeln!(s, "layout           default ansatz, reps = {}", spec.reps).ok();
            describe(&mut s, &circuit);
        } else {
            writeln!(s, "layout           does not match the default ansatz").ok();
        }
    } else {
        let circuit = parse_circuit(&text)?;
        writeln!(s, "circuit file     {}", path.display()).ok();
        describe(&mut s, &circuit);
    }
    Ok(s)
}

fn describe(s: &mut String, c: &Circuit) {
    let counts = c.gate_counts();
    let layers = c.layer_summary();
    writeln!(s, "qubits           {}", c.n_qubits()).ok();
    writeln!(s, "gates            {}", counts.total).ok();
    writeln!(s, "two-qubit gates  {}", counts.two_qubit).ok();
    writeln!(s, "depth            {}", layers.depth).ok();
    writeln!(s, "ry layers        {}", layers.ry_layers).ok();
    writeln!(s, "cz layers        {}", layers.cz_layers).ok();
    writeln!(s, "parameters       {}", c.num_parameters()).ok();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a/b.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }

    #[test]
    fn planted_targets_are_reachable() {
        let cfg: ExperimentConfig = "[targets]\nkind = planted\nplanted_seed = 3".parse().unwrap();
        let spec = cfg.spec(Depth::Moderate);
        let theta = planted_params(&spec, 3);
        let targets = targets_for(&cfg, Depth::Moderate).unwrap();
        assert!(crate::cqgan::loss(&spec, &theta, &targets, 1e-12).unwrap() < 1e-12);
    }

    #[test]
    fn distributions_csv_layout() {
        let d = Distribution::new(vec![0.25, 0.75]).unwrap();
        let s = distributions_csv(&[d.clone(), d], |i| format!("c{i}"));
        assert_eq!(s, "outcome,c0,c1\n0,0.250000000000,0.250000000000\n1,0.750000000000,0.750000000000\n");
    }
}
