use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::network::{BootstrapConfig, Ratio};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub lexicon: PathBuf,
    pub output: PathBuf,
    pub min_ngram: usize,
    pub neighbors: usize,
    pub max_candidates: Option<u64>,
    /// Extra copy of the analogy counters.
    pub report: Option<PathBuf>,
    pub w_threshold: u32,
    pub cc_threshold: Ratio,
    pub min_subseries: usize,
    /// First bootstrap iteration at which `min_subseries` applies.
    pub filter_from: usize,
    pub max_iterations: usize,
}

impl PipelineConfig {
    pub fn new(lexicon: impl Into<PathBuf>, output: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            lexicon: lexicon.into(),
            output: output.into(),
            min_ngram: 3,
            neighbors: 100,
            max_candidates: None,
            report: None,
            w_threshold: 10,
            cc_threshold: Ratio::new(66, 100),
            min_subseries: 5,
            filter_from: 2,
            max_iterations: 50,
        }
    }

    /// Parses a TOML config. Relative paths are resolved against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self, String> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| e.to_string())?;
        let lexicon = file.lexicon.ok_or("missing key `lexicon`")?;
        let output = file.output.unwrap_or_else(|| PathBuf::from("out"));
        let mut cfg = PipelineConfig::new(base.join(lexicon), base.join(output));
        cfg.report = file.report.map(|p| base.join(p));
        cfg.max_candidates = file.max_candidates;
        if let Some(v) = file.min_ngram {
            cfg.min_ngram = v;
        }
        if let Some(v) = file.neighbors {
            cfg.neighbors = v;
        }
        if let Some(v) = file.w_threshold {
            cfg.w_threshold = v;
        }
        if let Some(v) = file.cc_threshold {
            cfg.cc_threshold = Ratio::from_f64(v).ok_or_else(|| format!("bad cc_threshold {v}"))?;
        }
        if let Some(v) = file.min_subseries {
            cfg.min_subseries = v;
        }
        if let Some(v) = file.filter_from {
            cfg.filter_from = v;
        }
        if let Some(v) = file.max_iterations {
            cfg.max_iterations = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        PipelineConfig::from_toml(&text, base)
    }

    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("min_ngram", self.min_ngram),
            ("neighbors", self.neighbors),
            ("w_threshold", self.w_threshold as usize),
            ("min_subseries", self.min_subseries),
            ("max_iterations", self.max_iterations),
        ];
        if let Some((key, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(format!("`{key}` must be positive"));
        }
        if self.cc_threshold.num == 0 || self.cc_threshold > Ratio::new(1, 1) {
            return Err(format!(
                "`cc_threshold` must be in (0, 1], got {}",
                self.cc_threshold.to_f64()
            ));
        }
        if self.max_candidates == Some(0) {
            return Err("`max_candidates` must be positive".into());
        }
        Ok(())
    }

    pub fn bootstrap(&self) -> BootstrapConfig {
        BootstrapConfig {
            min_subseries: self.min_subseries,
            filter_from: self.filter_from,
            max_iterations: self.max_iterations,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    lexicon: Option<PathBuf>,
    output: Option<PathBuf>,
    report: Option<PathBuf>,
    min_ngram: Option<usize>,
    neighbors: Option<usize>,
    max_candidates: Option<u64>,
    w_threshold: Option<u32>,
    cc_threshold: Option<f64>,
    min_subseries: Option<usize>,
    filter_from: Option<usize>,
    max_iterations: Option<usize>,
}
