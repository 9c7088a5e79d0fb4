//! Experiment configuration files.
//!
//! Grammar (one item per line, `#` starts a comment):
//!
//! ```text
//! line    := blank | comment | section | entry
//! section := "[" name "]"
//! entry   := key "=" value
//! ```
//!
//! Inside `[sec]`, `key = v` is the same as `sec.key = v` at top level.
//! Lists are comma-separated. Unknown keys are rejected so typos surface.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::circuit::{AnsatzSpec, Entanglement};
use crate::cqgan::{MixtureComponent, Optimizer, SpsaSchedule, TargetFamily, TargetKind, TrainingConfig};
use crate::error::{Error, Result};
use crate::mitigation::{CalibrationScheme, ExtrapolationMethod};
use crate::noise::{AssignmentMatrix, NoiseModel};

/// The two circuit depths of the experiment grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Depth {
    Moderate,
    Deep,
}

impl Depth {
    pub fn reps(self) -> usize {
        match self {
            Depth::Moderate => 1,
            Depth::Deep => 2,
        }
    }

    pub fn default_shots(self) -> u64 {
        match self {
            Depth::Moderate => 4096,
            Depth::Deep => 8000,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Depth::Moderate => "moderate",
            Depth::Deep => "deep",
        }
    }
}

impl FromStr for Depth {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "moderate" => Ok(Depth::Moderate),
            "deep" => Ok(Depth::Deep),
            other => Err(Error::Config(format!("unknown depth `{other}` (expected moderate or deep)"))),
        }
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TargetSource {
    Family(TargetFamily),
    /// Outputs of the ansatz itself at seeded random angles; reachable by construction.
    Planted {
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasOptions {
    pub scheme: CalibrationScheme,
    /// Calibrate from exact probabilities instead of sampling with the depth's shot count.
    pub exact_calibration: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZneOptions {
    pub scales: Vec<usize>,
    pub method: ExtrapolationMethod,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MitigationPlan {
    pub meas: Option<MeasOptions>,
    pub zne: Option<ZneOptions>,
    pub pec_samples: Option<u64>,
    pub twirl_instances: Option<usize>,
}

impl MitigationPlan {
    pub fn is_none(&self) -> bool {
        self.meas.is_none() && self.zne.is_none() && self.pec_samples.is_none() && self.twirl_instances.is_none()
    }

    /// Short label such as `twirl+zne+meas`.
    pub fn label(&self) -> String {
        let mut parts = vec![];
        if self.twirl_instances.is_some() {
            parts.push("twirl");
        }
        if self.zne.is_some() {
            parts.push("zne");
        }
        if self.pec_samples.is_some() {
            parts.push("pec");
        }
        if self.meas.is_some() {
            parts.push("meas");
        }
        if parts.is_empty() {
            "none".into()
        } else {
            parts.join("+")
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub out: PathBuf,
    pub exact: bool,
    pub depths: Vec<Depth>,
    /// Ansatz layout; `reps` is replaced per depth.
    pub ansatz: AnsatzSpec,
    pub targets: TargetSource,
    pub training: TrainingConfig,
    /// Pre-trained parameter files per depth; default `{out}/{depth}/params.txt`.
    pub params: BTreeMap<Depth, PathBuf>,
    pub noise: NoiseModel,
    pub shots: BTreeMap<Depth, u64>,
    pub mitigation: MitigationPlan,
}

impl ExperimentConfig {
    pub fn spec(&self, depth: Depth) -> AnsatzSpec {
        AnsatzSpec { reps: depth.reps(), ..self.ansatz }
    }

    pub fn shots(&self, depth: Depth) -> u64 {
        self.shots.get(&depth).copied().unwrap_or(depth.default_shots())
    }

    pub fn depth_dir(&self, depth: Depth) -> PathBuf {
        self.out.join(depth.name())
    }

    pub fn params_path(&self, depth: Depth) -> PathBuf {
        self.params.get(&depth).cloned().unwrap_or_else(|| self.depth_dir(depth).join("params.txt"))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        text.parse()
    }
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut kv = Entries::parse(text)?;
        let cfg = build(&mut kv)?;
        kv.finish()?;
        Ok(cfg)
    }
}

struct Entries {
    map: BTreeMap<String, (String, usize)>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| Error::Parse { line: line_no, message: "unterminated section header".into() })?
                    .trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(Error::Parse { line: line_no, message: format!("bad section name `{name}`") });
                }
                section = name.to_string();
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let k = k.trim();
            if k.is_empty() {
                return Err(Error::Parse { line: line_no, message: "empty key".into() });
            }
            let key = if section.is_empty() { k.to_string() } else { format!("{section}.{k}") };
            if map.insert(key.clone(), (v.trim().to_string(), line_no)).is_some() {
                return Err(Error::Parse { line: line_no, message: format!("duplicate key `{key}`") });
            }
        }
        Ok(Self { map })
    }

    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.map.remove(key)
    }

    fn get<T: FromStr>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => v.parse().map(Some).map_err(|e| Error::Parse { line, message: format!("`{key}`: {e}") }),
        }
    }

    fn list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: fmt::Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => parse_list(&v)
                .map(Some)
                .map_err(|message| Error::Parse { line, message: format!("`{key}`: {message}") }),
        }
    }

    /// Keys under `prefix.` with the prefix stripped.
    fn with_prefix(&mut self, prefix: &str) -> Vec<(String, String, usize)> {
        let p = format!("{prefix}.");
        let keys: Vec<String> = self.map.keys().filter(|k| k.starts_with(&p)).cloned().collect();
        keys.into_iter()
            .map(|k| {
                let (v, line) = self.map.remove(&k).expect("listed key");
                (k[p.len()..].to_string(), v, line)
            })
            .collect()
    }

    fn finish(self) -> Result<()> {
        match self.map.into_iter().min_by_key(|(_, (_, line))| *line) {
            Some((k, (_, line))) => Err(Error::Parse { line, message: format!("unknown key `{k}`") }),
            None => Ok(()),
        }
    }
}

fn parse_list<T: FromStr>(v: &str) -> std::result::Result<Vec<T>, String>
where
    T::Err: fmt::Display,
{
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| format!("`{s}`: {e}")))
        .collect()
}

fn parse_bool(v: &str) -> std::result::Result<bool, String> {
    match v.trim() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(format!("`{other}` is not a boolean")),
    }
}

#[derive(Debug)]
struct Flag(bool);

impl FromStr for Flag {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        parse_bool(s).map(Flag)
    }
}

fn build(kv: &mut Entries) -> Result<ExperimentConfig> {
    let seed = kv.get("seed")?.unwrap_or(7u64);
    let out = kv.get::<String>("out")?.map(PathBuf::from).unwrap_or_else(|| PathBuf::from("qloadbench-out"));
    let exact = kv.get::<Flag>("exact")?.is_some_and(|f| f.0);
    let mut depths: Vec<Depth> = kv.list("depths")?.unwrap_or_else(|| vec![Depth::Moderate, Depth::Deep]);
    depths.dedup();
    if depths.is_empty() {
        return Err(Error::Config("`depths` lists no depth".into()));
    }

    let defaults = AnsatzSpec::default();
    let ansatz = AnsatzSpec {
        n_generator: kv.get("ansatz.n_generator")?.unwrap_or(defaults.n_generator),
        n_control: kv.get("ansatz.n_control")?.unwrap_or(defaults.n_control),
        reps: 1,
        entanglement: kv.get::<Entanglement>("ansatz.entanglement")?.unwrap_or(defaults.entanglement),
        ry_on_control: kv.get::<Flag>("ansatz.ry_on_control")?.map_or(defaults.ry_on_control, |f| f.0),
    };
    ansatz.validate()?;

    let targets = build_targets(kv, &ansatz)?;
    let training = build_training(kv, seed)?;
    let mut params = BTreeMap::new();
    for (depth, path, line) in kv.with_prefix("training.params") {
        let d: Depth = depth.parse().map_err(|e: Error| Error::Parse { line, message: e.to_string() })?;
        params.insert(d, PathBuf::from(path));
    }
    let noise = build_noise(kv)?;
    let mut shots = BTreeMap::new();
    for (depth, v, line) in kv.with_prefix("shots") {
        let d: Depth = depth.parse().map_err(|e: Error| Error::Parse { line, message: e.to_string() })?;
        let n: u64 = v.parse().map_err(|e| Error::Parse { line, message: format!("shots.{depth}: {e}") })?;
        if n == 0 {
            return Err(Error::Parse { line, message: "shot counts must be positive".into() });
        }
        shots.insert(d, n);
    }
    let mitigation = build_mitigation(kv)?;
    Ok(ExperimentConfig { seed, out, exact, depths, ansatz, targets, training, params, noise, shots, mitigation })
}

fn build_targets(kv: &mut Entries, ansatz: &AnsatzSpec) -> Result<TargetSource> {
    let kind = kv.get::<String>("targets.kind")?.unwrap_or_else(|| "bimodal".into());
    let bins: usize = kv.get("targets.bins")?.unwrap_or(1 << ansatz.n_generator);
    let support = match kv.list::<f64>("targets.support")? {
        None => (0.0, 1.0),
        Some(v) if v.len() == 2 => (v[0], v[1]),
        Some(_) => return Err(Error::Config("`targets.support` needs two numbers".into())),
    };
    let conditions = ansatz.num_conditions();
    let per_condition = |kv: &mut Entries| -> Vec<(usize, String, usize)> {
        let mut v: Vec<(usize, String, usize)> = kv
            .with_prefix("targets")
            .into_iter()
            .filter_map(|(k, val, line)| k.strip_prefix('t').and_then(|i| i.parse().ok()).map(|i| (i, val, line)))
            .collect();
        v.sort_by_key(|e| e.0);
        v
    };
    let family = match kind.as_str() {
        "bimodal" => {
            let mut f = TargetFamily::bundled_bimodal();
            f.bins = bins;
            f.support = support;
            f
        }
        "planted" => return Ok(TargetSource::Planted { seed: kv.get("targets.planted_seed")?.unwrap_or(1) }),
        "lognormal" => TargetFamily::lognormal(
            kv.get("targets.mu")?.unwrap_or(0.0),
            kv.get("targets.sigma")?.unwrap_or(0.25),
            bins,
            support,
        ),
        "gaussian_mixture" => {
            let entries = per_condition(kv);
            check_condition_keys(&entries, conditions)?;
            let mixtures = entries
                .iter()
                .map(|(_, v, line)| parse_mixture(v).map_err(|message| Error::Parse { line: *line, message }))
                .collect::<Result<Vec<_>>>()?;
            TargetFamily { kind: TargetKind::GaussianMixture(mixtures), bins, support }
        }
        "explicit" => {
            let entries = per_condition(kv);
            check_condition_keys(&entries, conditions)?;
            let vectors = entries
                .iter()
                .map(|(_, v, line)| parse_list::<f64>(v).map_err(|message| Error::Parse { line: *line, message }))
                .collect::<Result<Vec<_>>>()?;
            let bins = vectors[0].len();
            TargetFamily { kind: TargetKind::Explicit(vectors), bins, support }
        }
        other => return Err(Error::Config(format!("unknown target kind `{other}`"))),
    };
    family.validate()?;
    if family.bins != 1 << ansatz.n_generator {
        return Err(Error::Config(format!(
            "{} target bins do not match {} generator qubits",
            family.bins, ansatz.n_generator
        )));
    }
    Ok(TargetSource::Family(family))
}

fn check_condition_keys(entries: &[(usize, String, usize)], conditions: usize) -> Result<()> {
    let idx: Vec<usize> = entries.iter().map(|e| e.0).collect();
    if idx == vec![0] || idx == (0..conditions).collect::<Vec<_>>() {
        Ok(())
    } else {
        Err(Error::Config(format!("targets need keys t0 (shared) or t0..t{}", conditions - 1)))
    }
}

/// `w mean std | w mean std | …`
fn parse_mixture(v: &str) -> std::result::Result<Vec<MixtureComponent>, String> {
    v.split('|')
        .map(|c| {
            let nums: Vec<f64> = c
                .split_whitespace()
                .map(|s| s.parse::<f64>().map_err(|e| format!("`{s}`: {e}")))
                .collect::<std::result::Result<_, _>>()?;
            match nums[..] {
                [w, m, s] => Ok(MixtureComponent::new(w, m, s)),
                _ => Err(format!("mixture component `{}` needs weight, mean and std", c.trim())),
            }
        })
        .collect()
}

fn build_training(kv: &mut Entries, seed: u64) -> Result<TrainingConfig> {
    let defaults = TrainingConfig::default();
    let optimizer = match kv.get::<String>("training.optimizer")?.as_deref() {
        None | Some("spsa") => {
            let d = SpsaSchedule::default();
            Optimizer::Spsa(SpsaSchedule {
                a: kv.get("training.spsa.a")?.unwrap_or(d.a),
                c: kv.get("training.spsa.c")?.unwrap_or(d.c),
                big_a: kv.get("training.spsa.A")?.unwrap_or(d.big_a),
                alpha: kv.get("training.spsa.alpha")?.unwrap_or(d.alpha),
                gamma: kv.get("training.spsa.gamma")?.unwrap_or(d.gamma),
            })
        }
        Some("gd") | Some("gradient_descent") => {
            Optimizer::GradientDescent { learning_rate: kv.get("training.learning_rate")?.unwrap_or(0.1) }
        }
        Some(other) => return Err(Error::Config(format!("unknown optimizer `{other}`"))),
    };
    let cfg = TrainingConfig {
        optimizer,
        max_iters: kv.get("training.max_iters")?.unwrap_or(defaults.max_iters),
        seed: kv.get("training.seed")?.unwrap_or(seed),
        convergence_tol: kv.get("training.tol")?.unwrap_or(defaults.convergence_tol),
        eps: defaults.eps,
        initial: None,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn build_noise(kv: &mut Entries) -> Result<NoiseModel> {
    let base = match kv.get::<String>("noise.preset")?.as_deref() {
        None | Some("reference") => NoiseModel::reference(),
        Some("ideal") | Some("none") => NoiseModel::ideal(),
        Some(other) => return Err(Error::Config(format!("unknown noise preset `{other}`"))),
    };
    let mut b = NoiseModel::builder()
        .p1(kv.get("noise.p1")?.unwrap_or(base.p1()))
        .p2(kv.get("noise.p2")?.unwrap_or(base.p2()))
        .gamma_ad(kv.get("noise.gamma_ad")?.unwrap_or(base.gamma_ad()));
    b = match kv.get::<f64>("noise.readout_flip")? {
        Some(f) => b.readout_flip(f),
        None => b.default_readout(base.default_readout()),
    };
    for (q, v, line) in kv.with_prefix("noise.readout") {
        let qubit: usize =
            q.parse().map_err(|e| Error::Parse { line, message: format!("readout qubit `{q}`: {e}") })?;
        let m = parse_list::<f64>(&v).map_err(|message| Error::Parse { line, message })?;
        if m.len() != 4 {
            return Err(Error::Parse {
                line,
                message: "readout matrix needs 4 entries (row-major, P(read|true))".into(),
            });
        }
        b = b.readout(qubit, AssignmentMatrix::new([[m[0], m[1]], [m[2], m[3]]])?);
    }
    b.build()
}

fn build_mitigation(kv: &mut Entries) -> Result<MitigationPlan> {
    let spec = kv.get::<String>("mitigation")?.unwrap_or_else(|| "zne+meas".into());
    let parts: Vec<&str> = spec.split('+').map(str::trim).collect();
    let mut plan = MitigationPlan::default();
    let mut seen_none = false;
    for p in &parts {
        match *p {
            "none" => seen_none = true,
            "meas" => {
                let scheme = match kv.get::<String>("meas.scheme")?.as_deref() {
                    None | Some("tensored") => CalibrationScheme::Tensored,
                    Some("full") => CalibrationScheme::Full,
                    Some(other) => return Err(Error::Config(format!("unknown calibration scheme `{other}`"))),
                };
                let exact_calibration = match kv.get::<String>("meas.calibration")?.as_deref() {
                    None | Some("sampled") => false,
                    Some("exact") => true,
                    Some(other) => {
                        return Err(Error::Config(format!(
                            "`meas.calibration` must be exact or sampled, got `{other}`"
                        )))
                    }
                };
                plan.meas = Some(MeasOptions { scheme, exact_calibration });
            }
            "zne" => {
                let scales: Vec<usize> = kv.list("zne.scales")?.unwrap_or_else(|| vec![1, 3, 5]);
                if scales.len() < 2 || scales.iter().any(|s| s % 2 == 0) || !scales.contains(&1) {
                    return Err(Error::Config(
                        "`zne.scales` needs at least two distinct odd scales including 1".into(),
                    ));
                }
                let method = kv.get("zne.method")?.unwrap_or_default();
                plan.zne = Some(ZneOptions { scales, method });
            }
            "pec" => {
                let n: u64 = kv.get("pec.samples")?.unwrap_or(100_000);
                if n == 0 {
                    return Err(Error::Config("`pec.samples` must be positive".into()));
                }
                plan.pec_samples = Some(n);
            }
            "twirl" => {
                let n: usize = kv.get("twirl.instances")?.unwrap_or(16);
                if n == 0 {
                    return Err(Error::Config("`twirl.instances` must be positive".into()));
                }
                plan.twirl_instances = Some(n);
            }
            other => return Err(Error::Config(format!("unknown mitigation `{other}`"))),
        }
    }
    if seen_none && parts.len() > 1 {
        return Err(Error::Config("`none` cannot be combined with other mitigations".into()));
    }
    if plan.pec_samples.is_some() && (plan.zne.is_some() || plan.twirl_instances.is_some()) {
        return Err(Error::Config("`pec` cannot be combined with `zne` or `twirl`".into()));
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_uses_defaults() {
        let c: ExperimentConfig = "".parse().unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.depths, vec![Depth::Moderate, Depth::Deep]);
        assert_eq!(c.shots(Depth::Moderate), 4096);
        assert_eq!(c.shots(Depth::Deep), 8000);
        assert_eq!(c.noise, NoiseModel::reference());
        assert_eq!(c.mitigation.label(), "zne+meas");
        assert_eq!(c.spec(Depth::Deep).reps, 2);
        assert!(matches!(c.targets, TargetSource::Family(_)));
    }

    #[test]
    fn sections_and_dotted_keys_agree() {
        let a: ExperimentConfig = "[noise]\np2 = 0.02\n[shots]\ndeep = 100".parse().unwrap();
        let b: ExperimentConfig = "noise.p2 = 0.02\nshots.deep = 100".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.noise.p2(), 0.02);
        assert_eq!(a.shots(Depth::Deep), 100);
    }

    #[test]
    fn full_example() {
        let text = "
            seed = 11   # comment
            out = /tmp/x
            depths = deep
            mitigation = twirl+zne+meas
            [ansatz]
            entanglement = linear
            [targets]
            kind = gaussian_mixture
            t0 = 1 0.5 0.1
            [training]
            optimizer = gd
            learning_rate = 0.2
            max_iters = 5
            params.deep = p.txt
            [noise]
            preset = ideal
            gamma_ad = 0.01
            readout.3 = 0.9, 0.2, 0.1, 0.8
            [zne]
            scales = 1, 3
            method = richardson
            [twirl]
            instances = 4
            [meas]
            scheme = full
            calibration = exact
        ";
        let c: ExperimentConfig = text.parse().unwrap();
        assert_eq!(c.seed, 11);
        assert_eq!(c.training.seed, 11);
        assert_eq!(c.depths, vec![Depth::Deep]);
        assert_eq!(c.ansatz.entanglement, Entanglement::Linear);
        assert_eq!(c.training.optimizer, Optimizer::GradientDescent { learning_rate: 0.2 });
        assert_eq!(c.params_path(Depth::Deep), PathBuf::from("p.txt"));
        assert_eq!(c.params_path(Depth::Moderate), PathBuf::from("/tmp/x/moderate/params.txt"));
        assert_eq!(c.noise.readout(3).get(1, 0), 0.1);
        assert!(c.noise.readout(0).is_identity());
        assert_eq!(c.mitigation.zne, Some(ZneOptions { scales: vec![1, 3], method: ExtrapolationMethod::Richardson }));
        assert_eq!(c.mitigation.twirl_instances, Some(4));
        assert_eq!(c.mitigation.meas, Some(MeasOptions { scheme: CalibrationScheme::Full, exact_calibration: true }));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = "seed = 1\n\nbogus = 3".parse::<ExperimentConfig>().unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let e = "[noise]\np1 = lots".parse::<ExperimentConfig>().unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        assert!("[noise\n".parse::<ExperimentConfig>().is_err());
        assert!("seed 4".parse::<ExperimentConfig>().is_err());
        assert!("seed = 1\nseed = 2".parse::<ExperimentConfig>().is_err());
    }

    #[test]
    fn invalid_mitigation_combos() {
        for bad in ["pec+zne", "pec+twirl", "none+meas", "magic", "zne+meas\nzne.scales = 1,2", "zne\nzne.scales = 3,5"]
        {
            assert!(format!("mitigation = {bad}").parse::<ExperimentConfig>().is_err(), "{bad}");
        }
        assert!("mitigation = pec+meas".parse::<ExperimentConfig>().is_ok());
        assert!("mitigation = none".parse::<ExperimentConfig>().unwrap().mitigation.is_none());
    }

    #[test]
    fn target_bins_must_match_generator() {
        assert!("[targets]\nbins = 16".parse::<ExperimentConfig>().is_err());
        let c: ExperimentConfig =
            "[ansatz]\nn_generator = 4\n[targets]\nkind = lognormal\nbins = 16\nsupport = 0, 3".parse().unwrap();
        assert!(matches!(c.targets, TargetSource::Family(TargetFamily { bins: 16, .. })));
    }

    #[test]
    fn explicit_targets() {
        let c: ExperimentConfig = "[ansatz]\nn_generator = 1\n[targets]\nkind = explicit\nt0 = 1, 3".parse().unwrap();
        let TargetSource::Family(f) = c.targets else { panic!() };
        assert_eq!(f.kind, TargetKind::Explicit(vec![vec![1.0, 3.0]]));
        assert!("[targets]\nkind = explicit\nt0 = 1\nt2 = 1".parse::<ExperimentConfig>().is_err());
    }
}
