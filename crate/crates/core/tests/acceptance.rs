//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::collections::HashMap;
use std::hint::black_box;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use filaments::analogy::{
    check_analogy, enumerate_analogies, length_prune, signature, AnalogyKind, AnalogySet, EnumerationConfig, Quad,
    QuadChecker, SignatureChecker,
};
use filaments::lexicon::{Lexicon, PhonemeString};
use filaments::network::{
    bootstrap, clustering_coefficient, clustering_reduce, extract_seed, induced_series, reduce_series,
    reliable_families, series_map, Ratio, RelationGraph, SeriesMap, TypedEdges,
};
use filaments::pipeline::{files, run_pipeline, PipelineConfig, RunOptions};
use filaments::similarity::{build_bipartite_graph, spread_activation, Neighborhoods};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// All non-empty strings over `alphabet` up to `max_len`, shortest first.
fn strings<T: Copy>(alphabet: &[T], max_len: usize) -> Vec<Vec<T>> {
    let mut all: Vec<Vec<T>> = Vec::new();
    let mut frontier: Vec<Vec<T>> = vec![Vec::new()];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|s| {
                alphabet.iter().map(move |&x| {
                    let mut t = s.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
        all.extend(frontier.iter().cloned());
    }
    all
}

/// Truth tables of the checker and the oracle over every quadruplet of a
/// string set, indexed `((a * n + b) * n + c) * n + d`.
struct Exhaustive {
    words: Vec<Vec<u8>>,
    checker: Vec<bool>,
    oracle: Vec<bool>,
    pattern: Vec<u32>,
}

impl Exhaustive {
    fn n(&self) -> usize {
        self.words.len()
    }

    fn index(&self, [a, b, c, d]: [usize; 4]) -> usize {
        let n = self.n();
        ((a * n + b) * n + c) * n + d
    }

    fn quad(&self, i: usize) -> [usize; 4] {
        let n = self.n();
        [i / (n * n * n), i / (n * n) % n, i / n % n, i % n]
    }

    fn pair(&self, x: usize, y: usize) -> u32 {
        self.pattern[x * self.n() + y]
    }

    fn show(&self, q: [usize; 4]) -> String {
        q.map(|i| String::from_utf8(self.words[i].clone()).unwrap()).join(":")
    }

    fn build(max_len: usize) -> Self {
        let words = strings(b"01", max_len);
        let n = words.len();
        // pair signatures interned by pattern; `matches` is pattern equality
        let mut ids = HashMap::new();
        let mut pattern = Vec::with_capacity(n * n);
        for x in &words {
            for y in &words {
                let p = signature(x, y).pattern();
                let next = ids.len() as u32;
                pattern.push(*ids.entry(p).or_insert(next));
            }
        }
        let counts: Vec<[u8; 2]> = words
            .iter()
            .map(|w| {
                [
                    w.iter().filter(|&&x| x == b'0').count() as u8,
                    w.iter().filter(|&&x| x == b'1').count() as u8,
                ]
            })
            .collect();
        let mut checker = vec![false; n * n * n * n];
        let mut oracle = vec![false; n * n * n * n];
        let mut i = 0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let p = |x: usize, y: usize| pattern[x * n + y];
                        checker[i] =
                            p(a, b) == p(c, d) && p(a, c) == p(b, d) && p(b, a) == p(d, c) && p(c, a) == p(d, b);
                        let balanced = (0..2).all(|s| counts[a][s] + counts[d][s] == counts[b][s] + counts[c][s]);
                        if balanced {
                            oracle[i] = lattice_reachable(&words[a], &words[b], &words[c], &words[d]);
                        }
                        i += 1;
                    }
                }
            }
        }
        Exhaustive {
            words,
            checker,
            oracle,
            pattern,
        }
    }
}

fn soundness(ex: &Exhaustive) -> Outcome {
    // the interned table is the library checker
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let short = ex.words.iter().take_while(|w| w.len() <= 3).count();
    let mut compared = 0;
    for a in 0..short {
        for b in 0..short {
            for c in 0..short {
                for d in 0..short {
                    let q = [a, b, c, d];
                    let w = q.map(|i| &ex.words[i]);
                    ensure(check_analogy(w[0], w[1], w[2], w[3]) == ex.checker[ex.index(q)], || {
                        format!("interned table disagrees on {}", ex.show(q))
                    })?;
                    compared += 1;
                }
            }
        }
    }
    for _ in 0..200_000 {
        let i = rng.gen_range(0..ex.checker.len());
        let w = ex.quad(i).map(|k| &ex.words[k]);
        ensure(check_analogy(w[0], w[1], w[2], w[3]) == ex.checker[i], || {
            format!("interned table disagrees on {}", ex.show(ex.quad(i)))
        })?;
        compared += 1;
    }

    let mut accepted = 0u64;
    let mut true_analogies = 0u64;
    let mut misses = Vec::new();
    for i in 0..ex.checker.len() {
        if ex.checker[i] {
            accepted += 1;
            ensure(ex.oracle[i], || {
                format!("checker accepts non-analogy {}", ex.show(ex.quad(i)))
            })?;
        }
        if ex.oracle[i] {
            true_analogies += 1;
            if !ex.checker[i] {
                misses.push(ex.quad(i));
            }
        }
    }
    // misses whose own pair signatures agree: a cross reading fails
    let cross: Vec<[usize; 4]> = misses
        .iter()
        .copied()
        .filter(|&[a, b, c, d]| ex.pair(a, b) == ex.pair(c, d))
        .collect();
    // stem:stem+x :: stem':stem'+x, the do:doable pattern
    let suffixation = cross
        .iter()
        .filter(|&&[a, b, c, d]| {
            let w = |i: usize| &ex.words[i];
            let (la, lc) = (w(a).len(), w(c).len());
            w(b).len() > la
                && w(d).len() > lc
                && w(b).starts_with(w(a))
                && w(d).starts_with(w(c))
                && w(b)[la..] == w(d)[lc..]
        })
        .count();
    let c = chars;
    let doable = [c("do"), c("doable"), c("read"), c("readable")];
    ensure(
        oracle_analogy(&doable[0], &doable[1], &doable[2], &doable[3]) == Ok(true),
        || "do:doable::read:readable is not an analogy".into(),
    )?;
    ensure(!check_analogy(&doable[0], &doable[1], &doable[2], &doable[3]), || {
        "do:doable::read:readable is accepted".into()
    })?;
    ensure(
        signature(&doable[0], &doable[1]).matches(&signature(&doable[2], &doable[3])),
        || "do:doable pair signatures differ".into(),
    )?;
    ensure(suffixation > 0, || {
        "no binary instance of the suffixation miss class".into()
    })?;
    let example = cross
        .iter()
        .find(|&&[a, b, _, _]| ex.words[b].starts_with(&ex.words[a]) && ex.words[b].len() > ex.words[a].len())
        .map(|&q| ex.show(q))
        .unwrap_or_default();
    Ok(format!(
        "{} strings, {} quadruplets, 0 violations; recall {}/{} = {:.4}; {} misses, {} with agreeing pair signatures, {} suffixation (e.g. {example}); do:doable::read:readable missed; {compared} quadruplets cross-checked against check_analogy",
        ex.n(),
        ex.checker.len(),
        accepted,
        true_analogies,
        accepted as f64 / true_analogies as f64,
        misses.len(),
        cross.len(),
        suffixation,
    ))
}

fn closure(ex: &Exhaustive) -> Outcome {
    let (mut oracle_true, mut accepted) = (0u64, 0u64);
    for i in 0..ex.checker.len() {
        let q = ex.quad(i);
        for (table, name, count) in [
            (&ex.oracle, "oracle", &mut oracle_true),
            (&ex.checker, "checker", &mut accepted),
        ] {
            if !table[i] {
                continue;
            }
            *count += 1;
            for p in symmetries(q) {
                ensure(table[ex.index(p)], || {
                    format!("{name}: {} holds but {} does not", ex.show(q), ex.show(p))
                })?;
            }
        }
    }
    Ok(format!(
        "{oracle_true} oracle-true and {accepted} accepted quadruplets, all 8 readings hold"
    ))
}

fn necessity() -> Outcome {
    let codes: Vec<PhonemeString> = strings(&["aa", "bb"], 4)
        .into_iter()
        .map(|s| PhonemeString::parse(&s.concat()).unwrap())
        .collect();
    let (mut pruned, mut total) = (0u64, 0u64);
    for a in &codes {
        for b in &codes {
            for c in &codes {
                for d in &codes {
                    total += 1;
                    if length_prune(a, b, c, d) {
                        continue;
                    }
                    pruned += 1;
                    // raw search, no multiset shortcut
                    ensure(!lattice_reachable(a.codes(), b.codes(), c.codes(), d.codes()), || {
                        format!("pruned analogy {a}:{b}::{c}:{d}")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{pruned} of {total} phoneme quadruplets pruned by length, none is an analogy"
    ))
}

fn pipeline_run(config: &str) -> (tempfile::TempDir, PipelineConfig) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture_config(config, dir.path());
    run_pipeline(&cfg, RunOptions::default())
        .map_err(|e| e.to_string())
        .unwrap();
    (dir, cfg)
}

fn read(dir: &tempfile::TempDir, name: &str) -> String {
    std::fs::read_to_string(dir.path().join(name)).unwrap()
}

fn reference_examples() -> Outcome {
    let (toy, _) = pipeline_run("toy.toml");
    let lex = load_lexicon("toy_grid.tsv");
    let set = AnalogySet::from_dump(read(&toy, files::ANALOGIES).as_bytes(), &lex).map_err(|e| e.to_string())?;
    let q = |f: [&str; 4]| Quad(f.map(|w| lex.lookup(w).unwrap()));

    let dup = q(["duplication", "duplicateur", "unification", "unificateur"]);
    ensure(set.contains(&lex, dup), || {
        "duplication:duplicateur::unification:unificateur not found".into()
    })?;

    let cons = q(["constituable", "constant", "restituable", "restant"]);
    ensure(SignatureChecker.holds(&lex, cons) && set.contains(&lex, cons), || {
        "constituable:constant::restituable:restant not accepted".into()
    })?;
    let network = read(&toy, files::NETWORK);
    let in_family = network
        .lines()
        .any(|l| l.ends_with("\tfamily") && l.split('\t').take(2).any(|w| w == "constituable"));
    ensure(!in_family, || "constituable has a family relation".into())?;

    let pai = q(["paissant", "abaissant", "paye", "abeille"]);
    let p = pai.0.map(|w| lex.entry(w).phonemes.codes().to_vec());
    let o = pai.0.map(|w| chars(lex.form(w)));
    ensure(check_analogy(&p[0], &p[1], &p[2], &p[3]), || {
        "paissant quad rejected on phonemes".into()
    })?;
    ensure(!check_analogy(&o[0], &o[1], &o[2], &o[3]), || {
        "paissant quad accepted on spelling".into()
    })?;
    ensure(!set.contains(&lex, pai), || {
        "paissant quad is in the analogy set".into()
    })?;

    let dev = q(["développeur", "développement", "enveloppeur", "enveloppement"]);
    let kind = set.iter().find(|an| an.quad.orbit().contains(&dev)).map(|an| an.kind);
    ensure(kind == Some(AnalogyKind::Untyped), || {
        format!("développeur quad typed {kind:?}")
    })?;

    let (gaz, _) = pipeline_run("gazouillarde.toml");
    let line = "gazouillarde\tgazouiller\tcitrouillarde douillarde grenouillarde rouillarde souillarde vadrouillarde vasouillarde";
    ensure(read(&gaz, files::FILAMENTS).lines().any(|l| l == line), || {
        "gazouiller filament differs".into()
    })?;
    Ok("5 examples reproduced, gazouillarde/gazouiller filament verbatim".into())
}

fn golden() -> Outcome {
    let (toy, cfg) = pipeline_run("toy.toml");
    let expected = std::fs::read_to_string(golden_path("toy_grid.filaments.tsv")).map_err(|e| e.to_string())?;
    let got = read(&toy, files::FILAMENTS);
    ensure(got == expected, || "filament file differs from the golden file".into())?;
    let reference = reference_filaments(&load_lexicon("toy_grid.tsv"), &cfg);
    ensure(reference == expected, || {
        "oracle reference differs from the golden file".into()
    })?;
    Ok(format!(
        "{} filaments, byte-identical to the oracle reference",
        got.lines().count()
    ))
}

fn clustering() -> Outcome {
    let w = filaments::lexicon::WordId;
    let map = |pairs: &[(u32, &[u32])]| -> SeriesMap {
        pairs
            .iter()
            .map(|&(a, cs)| (w(a), cs.iter().map(|&c| w(c)).collect()))
            .collect()
    };
    let t66 = Ratio::new(66, 100);
    let t67 = Ratio::new(67, 100);

    let clique: SeriesMap = (0..5)
        .map(|a| (w(a), (0..5).filter(|&c| c != a).map(w).collect()))
        .collect();
    for a in 0..5 {
        for c in (0..5).filter(|&c| c != a) {
            ensure(
                clustering_coefficient(w(a), w(c), &clique) == Some(Ratio::new(1, 1)),
                || "clique coefficient is not 1".into(),
            )?;
        }
        ensure(clustering_reduce(w(a), &clique, t66).len() == 4, || {
            "clique member dropped".into()
        })?;
    }

    let star = map(&[(0, &[1, 2, 3, 4]), (1, &[0]), (2, &[0]), (3, &[0]), (4, &[0])]);
    for c in 1..5 {
        ensure(
            clustering_coefficient(w(0), w(c), &star) == Some(Ratio::new(0, 1)),
            || "star coefficient is not 0".into(),
        )?;
    }
    ensure(clustering_reduce(w(0), &star, t66).is_empty(), || {
        "star member kept".into()
    })?;

    let two_thirds = map(&[(0, &[1, 2, 3, 4]), (1, &[0, 2, 3])]);
    ensure(
        clustering_coefficient(w(0), w(1), &two_thirds) == Some(Ratio::new(2, 3)),
        || "constructed coefficient is not 2/3".into(),
    )?;
    ensure(clustering_reduce(w(0), &two_thirds, t66).contains(&w(1)), || {
        "2/3 dropped at 0.66".into()
    })?;
    ensure(!clustering_reduce(w(0), &two_thirds, t67).contains(&w(1)), || {
        "2/3 kept at 0.67".into()
    })?;
    Ok("clique 1, star 0, 2/3 kept at 0.66 and dropped at 0.67".into())
}

fn similarity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut deviation, mut mass) = (0f64, 0f64);
    for _ in 0..50 {
        let words = rng.gen_range(5..=20);
        let lex = random_lexicon(&mut rng, words);
        let min_len = rng.gen_range(1..=3);
        let g = build_bipartite_graph(&lex, min_len);
        for s in lex.ids() {
            let got = spread_activation(&g, s).map_err(|e| e.to_string())?;
            let want = activation_by_summation(&lex, min_len, s);
            for x in lex.ids() {
                deviation = deviation.max((got.get(x) - want[x.index()]).abs());
            }
            mass = mass.max((got.total() - 1.0).abs());
        }
    }
    ensure(deviation <= 1e-9 && mass <= 1e-9, || {
        format!("deviation {deviation:e}, mass error {mass:e}")
    })?;
    Ok(format!(
        "50 lexica, max deviation {deviation:.1e}, max mass error {mass:.1e}"
    ))
}

fn fixture_network(config: &str) -> (Lexicon, PipelineConfig, RelationGraph, TypedEdges, TypedEdges) {
    let cfg = fixture_config(config, std::path::Path::new("unused"));
    let lex = load_lexicon(cfg.lexicon.file_name().unwrap().to_str().unwrap());
    let hoods = Neighborhoods::compute(&build_bipartite_graph(&lex, cfg.min_ngram), cfg.neighbors).unwrap();
    let (set, _) = enumerate_analogies(&lex, &hoods, &EnumerationConfig::default()).unwrap();
    let g = RelationGraph::build(&lex, &set);
    let f0 = reliable_families(g.family_candidates(), &g, cfg.w_threshold);
    let g0 = TypedEdges {
        series: induced_series(&f0, &g),
        family: f0,
    };
    let seed = extract_seed(
        &g,
        &g0.family,
        &reduce_series(&series_map(&g0.series), cfg.cc_threshold),
    );
    (lex, cfg, g, g0, seed)
}

fn bootstrap_behavior() -> Outcome {
    let mut report = Vec::new();
    for config in ["toy.toml", "gazouillarde.toml"] {
        let (lex, cfg, g, g0, seed) = fixture_network(config);
        let out = bootstrap(&lex, &g, &seed, &g0, &SignatureChecker, &cfg.bootstrap())
            .map_err(|e| format!("{config}: {e}"))?;
        let its = &out.iterations;
        for (i, pair) in its.windows(2).enumerate() {
            ensure(pair[0].is_subset(&pair[1]), || {
                format!("{config}: M{} not within M{}", i, i + 1)
            })?;
        }
        ensure(its.len() - 1 <= cfg.max_iterations, || {
            format!("{config}: over the cap")
        })?;
        let again = bootstrap(&lex, &g, out.fixed_point(), &g0, &SignatureChecker, &cfg.bootstrap())
            .map_err(|e| format!("{config}: {e}"))?;
        ensure(
            again.iterations.len() == 1 && again.fixed_point() == out.fixed_point(),
            || format!("{config}: rerun from the fixed point extends it"),
        )?;
        let sizes: Vec<String> = its.iter().map(|m| m.len().to_string()).collect();
        report.push(format!("{config} sizes {}", sizes.join(" -> ")));
    }
    Ok(format!("{}; idempotent", report.join(", ")))
}

/// `p + s : p + t :: q + s : q + t` with words of `len` phonemes. Stems and
/// endings use disjoint inventories so no alignment crosses between them.
fn true_quads(rng: &mut ChaCha8Rng, len: usize, count: usize) -> Vec<[Vec<u8>; 4]> {
    let word = |rng: &mut ChaCha8Rng, n: usize, from: u8| -> Vec<u8> {
        (0..n).map(|_| rng.gen_range(from..from + 18)).collect()
    };
    let stem = len * 3 / 5;
    (0..count)
        .map(|_| {
            let (p, q) = (word(rng, stem, 0), word(rng, stem, 0));
            let (s, t) = (word(rng, len - stem, 18), word(rng, len - stem, 18));
            let cat = |x: &[u8], y: &[u8]| [x, y].concat();
            [cat(&p, &s), cat(&p, &t), cat(&q, &s), cat(&q, &t)]
        })
        .collect()
}

fn mean_check_time(quads: &[[Vec<u8>; 4]], rounds: usize) -> Result<f64, String> {
    let start = Instant::now();
    let mut accepted = 0usize;
    for _ in 0..rounds {
        for [a, b, c, d] in quads {
            accepted += usize::from(check_analogy(black_box(a), black_box(b), black_box(c), black_box(d)));
        }
    }
    let per = start.elapsed().as_secs_f64() / (rounds * quads.len()) as f64;
    ensure(accepted == rounds * quads.len(), || {
        "a constructed analogy was rejected".into()
    })?;
    Ok(per)
}

fn performance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let short = true_quads(&mut rng, 10, 2_000);
    let long = true_quads(&mut rng, 20, 2_000);
    mean_check_time(&short, 1)?;
    let t10 = mean_check_time(&short, 20)?;
    let t20 = mean_check_time(&long, 20)?;
    let ratio = t20 / t10;
    ensure(ratio <= 5.0, || format!("10 -> 20 phonemes costs {ratio:.2}x"))?;
    Ok(format!(
        "10 -> 20 phonemes {ratio:.2}x; {:.0} checks/s at 10 phonemes, {:.0} at 20",
        1.0 / t10,
        1.0 / t20
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let ex = Exhaustive::build(5);
    eprintln!("exhaustive tables built in {:.1}s", start.elapsed().as_secs_f64());
    let criteria: Vec<Criterion> = vec![
        ("oracle soundness", Box::new(|| soundness(&ex))),
        ("permutation closure", Box::new(|| closure(&ex))),
        ("length heuristic necessity", Box::new(necessity)),
        ("reference examples", Box::new(reference_examples)),
        ("toy grid golden file", Box::new(golden)),
        ("clustering coefficient", Box::new(clustering)),
        ("similarity closed form", Box::new(similarity)),
        ("bootstrap behavior", Box::new(bootstrap_behavior)),
        ("checker scaling", Box::new(performance)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
