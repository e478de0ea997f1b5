use std::collections::BTreeSet;
use std::fs;
use std::io::BufReader;
use std::path::Path;

use super::checkpoint::{chain_hash, sha256_hex, Checkpoints, StageAction};
use super::config::PipelineConfig;
use super::stats::{compute_stats, render_stats, GraphCounters, NetworkStats};
use super::{PipelineError, Stage, StageError};
use crate::analogy::{enumerate_analogies, AnalogyCounters, AnalogySet, EnumerationConfig, Quad, SignatureChecker};
use crate::lexicon::{parse_lexicon, Lexicon, LexiconFormat, WordId};
use crate::network::{
    bootstrap, extract_seed, induced_series, parse_filaments, reduce_series, reliable_families, render_filaments,
    series_map, Filament, Network, RelationGraph, TypedEdges,
};
use crate::similarity::{build_bipartite_graph, Neighborhoods};

/// Checkpoint file names inside the output directory.
pub mod files {
    pub const NEIGHBORS: &str = "neighbors.tsv";
    pub const ANALOGIES: &str = "analogies.tsv";
    pub const REPORT: &str = "report.json";
    pub const GRAPH: &str = "graph.tsv";
    pub const G0: &str = "g0.tsv";
    pub const SEED: &str = "seed.tsv";
    /// Prefix of the per-iteration dumps `m0.tsv`, `m1.tsv`, ...
    pub const ITERATION_PREFIX: &str = "m";
    pub const EXTENSIONS: &str = "extensions.tsv";
    pub const NETWORK: &str = "network.tsv";
    pub const FILAMENTS: &str = "filaments.tsv";
    pub const STATS: &str = "stats.json";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Last stage to run.
    pub until: Stage,
    /// Recompute stages whose checkpoints were written under another config.
    pub force: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            until: Stage::Stats,
            force: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub actions: Vec<(Stage, StageAction)>,
    /// Present when the run reached the stats stage.
    pub stats: Option<NetworkStats>,
}

pub fn export_filaments(lex: &Lexicon, filaments: &[Filament], path: &Path) -> std::io::Result<()> {
    fs::write(path, render_filaments(lex, filaments))
}

fn tagged<T, E: Into<StageError>>(stage: Stage, r: Result<T, E>) -> Result<T, PipelineError> {
    r.map_err(|e| PipelineError {
        stage,
        source: e.into(),
    })
}

/// Runs the stages in order up to `opts.until`, loading every checkpoint
/// whose config hash matches and computing the rest.
pub fn run_pipeline(cfg: &PipelineConfig, opts: RunOptions) -> Result<RunOutcome, PipelineError> {
    let mut run = Run {
        cfg,
        actions: Vec::new(),
        cp: None,
    };
    run.go(opts)
}

struct Run<'a> {
    cfg: &'a PipelineConfig,
    actions: Vec<(Stage, StageAction)>,
    cp: Option<Checkpoints>,
}

impl Run<'_> {
    fn cp(&mut self) -> &mut Checkpoints {
        self.cp.as_mut().expect("opened")
    }

    /// Decides between load and compute, and commits after a compute.
    fn stage<T>(
        &mut self,
        stage: Stage,
        hash: &str,
        required: &[&str],
        load: impl FnOnce(&Checkpoints) -> Result<T, StageError>,
        compute: impl FnOnce(&Checkpoints) -> Result<T, StageError>,
    ) -> Result<T, PipelineError> {
        let cp = self.cp();
        let action = tagged(stage, cp.decide(stage, hash, required))?;
        let value = match action {
            StageAction::Loaded => tagged(stage, load(cp))?,
            StageAction::Computed => {
                let v = tagged(stage, compute(cp))?;
                tagged(stage, cp.commit(stage, hash))?;
                v
            }
        };
        self.actions.push((stage, action));
        Ok(value)
    }

    fn done(&self, opts: RunOptions, stage: Stage, stats: Option<NetworkStats>) -> Option<RunOutcome> {
        (opts.until == stage).then(|| RunOutcome {
            actions: self.actions.clone(),
            stats,
        })
    }

    fn go(&mut self, opts: RunOptions) -> Result<RunOutcome, PipelineError> {
        let cfg = self.cfg;
        tagged(Stage::Lexicon, cfg.validate().map_err(StageError::Config))?;

        let bytes = tagged(
            Stage::Lexicon,
            fs::read(&cfg.lexicon).map_err(|e| StageError::io(&cfg.lexicon, e)),
        )?;
        let lex = tagged(
            Stage::Lexicon,
            parse_lexicon(&bytes[..], LexiconFormat::Tsv).map_err(|source| StageError::Lexicon {
                path: cfg.lexicon.clone(),
                source,
            }),
        )?;
        if lex.is_empty() {
            return Err(PipelineError {
                stage: Stage::Lexicon,
                source: StageError::EmptyLexicon {
                    path: cfg.lexicon.clone(),
                },
            });
        }
        self.actions.push((Stage::Lexicon, StageAction::Loaded));
        let lex_hash = sha256_hex(&bytes);
        self.cp = Some(tagged(Stage::Lexicon, Checkpoints::open(&cfg.output, opts.force))?);
        if let Some(out) = self.done(opts, Stage::Lexicon, None) {
            return Ok(out);
        }

        // neighbors
        let h_neighbors = chain_hash(
            &lex_hash,
            Stage::Neighbors,
            &[
                ("min_ngram", cfg.min_ngram.to_string()),
                ("neighbors", cfg.neighbors.to_string()),
            ],
        );
        let hoods = self.stage(
            Stage::Neighbors,
            &h_neighbors,
            &[files::NEIGHBORS],
            |cp| Ok(Neighborhoods::from_dump(cp.read(files::NEIGHBORS)?.as_bytes(), &lex)?),
            |cp| {
                let g = build_bipartite_graph(&lex, cfg.min_ngram);
                let hoods = Neighborhoods::compute(&g, cfg.neighbors)?;
                cp.write(files::NEIGHBORS, hoods.to_dump(&lex).as_bytes())?;
                Ok(hoods)
            },
        )?;
        if let Some(out) = self.done(opts, Stage::Neighbors, None) {
            return Ok(out);
        }

        // analogies
        let h_analogies = chain_hash(&h_neighbors, Stage::Analogies, &[]);
        let (analogies, counters) = self.stage(
            Stage::Analogies,
            &h_analogies,
            &[files::ANALOGIES, files::REPORT],
            |cp| {
                let set = AnalogySet::from_dump(cp.read(files::ANALOGIES)?.as_bytes(), &lex)?;
                let counters: AnalogyCounters = serde_json::from_str(&cp.read(files::REPORT)?)
                    .map_err(|e| StageError::checkpoint(&cp.path(files::REPORT), e))?;
                Ok((set, counters))
            },
            |cp| {
                let ecfg = EnumerationConfig {
                    max_candidates: cfg.max_candidates,
                };
                let (set, counters) = enumerate_analogies(&lex, &hoods, &ecfg)?;
                cp.write(files::ANALOGIES, set.to_dump(&lex).as_bytes())?;
                cp.write(files::REPORT, report_json(&counters).as_bytes())?;
                Ok((set, counters))
            },
        )?;
        drop(hoods);
        if let Some(path) = &cfg.report {
            tagged(
                Stage::Analogies,
                fs::write(path, report_json(&counters)).map_err(|e| StageError::io(path, e)),
            )?;
        }
        if let Some(out) = self.done(opts, Stage::Analogies, None) {
            return Ok(out);
        }

        // graph and seed
        let graph = RelationGraph::build(&lex, &analogies);
        let h_seed = chain_hash(
            &h_analogies,
            Stage::Seed,
            &[
                ("w_threshold", cfg.w_threshold.to_string()),
                ("cc_threshold", cfg.cc_threshold.to_string()),
            ],
        );
        let (g0, seed) = self.stage(
            Stage::Seed,
            &h_seed,
            &[files::GRAPH, files::G0, files::SEED],
            |cp| Ok((read_edges(cp, files::G0, &lex)?, read_edges(cp, files::SEED, &lex)?)),
            |cp| {
                let f0 = reliable_families(graph.family_candidates(), &graph, cfg.w_threshold);
                let s0 = induced_series(&f0, &graph);
                let g0 = TypedEdges { family: f0, series: s0 };
                let reduced = reduce_series(&series_map(&g0.series), cfg.cc_threshold);
                let seed = extract_seed(&graph, &g0.family, &reduced);
                cp.write(files::GRAPH, graph.to_dump(&lex, &g0).as_bytes())?;
                cp.write(files::G0, g0.to_dump(&lex).as_bytes())?;
                cp.write(files::SEED, seed.to_dump(&lex).as_bytes())?;
                Ok((g0, seed))
            },
        )?;
        if let Some(out) = self.done(opts, Stage::Seed, None) {
            return Ok(out);
        }

        // bootstrap
        let bcfg = cfg.bootstrap();
        let h_bootstrap = chain_hash(
            &h_seed,
            Stage::Bootstrap,
            &[
                ("min_subseries", bcfg.min_subseries.to_string()),
                ("filter_from", bcfg.filter_from.to_string()),
                ("max_iterations", bcfg.max_iterations.to_string()),
            ],
        );
        let (iterations, extensions, network) = self.stage(
            Stage::Bootstrap,
            &h_bootstrap,
            &[files::EXTENSIONS, files::NETWORK],
            |cp| {
                let mut iterations = Vec::new();
                loop {
                    let name = format!("{}{}.tsv", files::ITERATION_PREFIX, iterations.len());
                    if !cp.path(&name).exists() {
                        break;
                    }
                    iterations.push(read_edges(cp, &name, &lex)?);
                }
                if iterations.is_empty() {
                    return Err(StageError::checkpoint(&cp.path("m0.tsv"), "missing seed iteration"));
                }
                let extensions = read_extensions(cp, &lex)?;
                let edges = read_edges(cp, files::NETWORK, &lex)?;
                let network = Network::new(&graph, edges, &extensions);
                Ok((iterations, extensions, network))
            },
            |cp| {
                let outcome = bootstrap(&lex, &graph, &seed, &g0, &SignatureChecker, &bcfg)?;
                cp.remove_numbered(files::ITERATION_PREFIX)?;
                for (i, m) in outcome.iterations.iter().enumerate() {
                    let name = format!("{}{i}.tsv", files::ITERATION_PREFIX);
                    cp.write(&name, m.to_dump(&lex).as_bytes())?;
                }
                cp.write(files::EXTENSIONS, extensions_dump(&lex, &outcome.extensions).as_bytes())?;
                cp.write(files::NETWORK, outcome.network.edges.to_dump(&lex).as_bytes())?;
                Ok((outcome.iterations, outcome.extensions, outcome.network))
            },
        )?;
        if let Some(out) = self.done(opts, Stage::Bootstrap, None) {
            return Ok(out);
        }

        // export
        let h_export = chain_hash(&h_bootstrap, Stage::Export, &[]);
        let filaments = self.stage(
            Stage::Export,
            &h_export,
            &[files::FILAMENTS],
            |cp| {
                let path = cp.path(files::FILAMENTS);
                let file = fs::File::open(&path).map_err(|e| StageError::io(&path, e))?;
                parse_filaments(BufReader::new(file), &lex).map_err(|e| StageError::checkpoint(&path, e))
            },
            |cp| {
                let filaments = network.filaments();
                let path = cp.path(files::FILAMENTS);
                export_filaments(&lex, &filaments, &path).map_err(|e| StageError::io(&path, e))?;
                Ok(filaments)
            },
        )?;
        if let Some(out) = self.done(opts, Stage::Export, None) {
            return Ok(out);
        }

        // stats: always recomputed, it is cheap
        let mut stats = compute_stats(lex.len(), &filaments);
        stats.analogies = counters;
        let f0 = reliable_families(graph.family_candidates(), &graph, cfg.w_threshold);
        stats.graph = GraphCounters {
            edges: graph.edge_count(),
            family_candidates: graph.family_candidates().len(),
            reliable_families: f0.len(),
            induced_series: g0.series.len(),
            seed_family: seed.family.len(),
            seed_series: seed.series.len(),
            bootstrap_iterations: iterations.len() - 1,
            extension_analogies: extensions.len(),
            network_family: network.edges.family.len(),
            network_series: network.edges.series.len(),
        };
        let cp = self.cp();
        tagged(Stage::Stats, cp.write(files::STATS, render_stats(&stats).as_bytes()))?;
        self.actions.push((Stage::Stats, StageAction::Computed));
        Ok(self.done(opts, Stage::Stats, Some(stats)).expect("last stage"))
    }
}

fn report_json(counters: &AnalogyCounters) -> String {
    let mut text = serde_json::to_string_pretty(counters).expect("plain struct");
    text.push('\n');
    text
}

fn read_edges(cp: &Checkpoints, name: &str, lex: &Lexicon) -> Result<TypedEdges, StageError> {
    TypedEdges::from_dump(cp.read(name)?.as_bytes(), lex).map_err(|e| StageError::checkpoint(&cp.path(name), e))
}

/// Rows `a<TAB>b<TAB>c<TAB>d`, in the orientation the bootstrap found them.
fn extensions_dump(lex: &Lexicon, extensions: &BTreeSet<Quad<WordId>>) -> String {
    let mut rows: Vec<String> = extensions.iter().map(|q| q.0.map(|w| lex.form(w)).join("\t")).collect();
    rows.sort_unstable();
    rows.iter().map(|r| format!("{r}\n")).collect()
}

fn read_extensions(cp: &Checkpoints, lex: &Lexicon) -> Result<BTreeSet<Quad<WordId>>, StageError> {
    let path = cp.path(files::EXTENSIONS);
    let mut out = BTreeSet::new();
    for (n, line) in cp.read(files::EXTENSIONS)?.lines().enumerate() {
        let err = |reason: String| StageError::checkpoint(&path, format!("line {}: {reason}", n + 1));
        let fields: Vec<&str> = line.split('\t').collect();
        let [a, b, c, d] = fields[..] else {
            return Err(err(format!("expected 4 fields, found {}", fields.len())));
        };
        let id = |f: &str| lex.lookup(f).ok_or_else(|| err(format!("unknown word `{f}`")));
        out.insert(Quad([id(a)?, id(b)?, id(c)?, id(d)?]));
    }
    Ok(out)
}
