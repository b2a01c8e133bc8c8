use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use homonym::competition::{Adjacency, ClusterAssignment};
use homonym::corpus::{load_corpus, AmbiguitySpec, CollaborationGraph};
use homonym::evaluation::{
    aggregate, pairwise_scores, sign_test_pvalue, synth_ambiguity_benchmark, write_aggregate,
    MentionTruth, PartitionPair, ScoreRecord, ScoreReport, SynthSpec,
};
use homonym::fixtures;
use homonym::pipeline::{
    build_network, compete, dense_classes, disambiguate as run_pipeline, kmeans_predictions,
    mention_predictions, modularity_predictions, reduced_network, score_mentions, PipelineConfig,
    METHOD_KMEANS, METHOD_MODULARITY, METHOD_PARTICLES,
};
use rayon::prelude::*;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::config::{absolute, parse_list, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::OutDir;
use crate::{BuildNetArgs, SweepArgs, SynthArgs};

fn read_csv<T: DeserializeOwned>(path: &Path) -> CliResult<Vec<T>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::io(path, e))?;
    reader
        .deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeClass {
    node: usize,
    class: usize,
}

pub fn build_net(args: &BuildNetArgs) -> CliResult<()> {
    let records = load_corpus(&args.corpus)?;
    let spec = AmbiguitySpec::load(&args.ambiguous)?;
    let (_, graph) = build_network(&records, &spec)?;
    let out = OutDir::create(&args.out)?;
    out.write("graph.tsv", |w| graph.write_edge_list(w))?;
    out.write("nodes.tsv", |w| graph.write_node_table(w))?;
    out.write("config.txt", |w| {
        writeln!(w, "corpus = {}", absolute(&args.corpus))?;
        writeln!(w, "ambiguous = {}", absolute(&args.ambiguous))
    })?;
    println!(
        "nodes {} edges {} ambiguous {}",
        graph.node_count(),
        graph.edge_count(),
        graph.ambiguous_nodes().len()
    );
    Ok(())
}

fn write_assignment(
    out: &OutDir,
    nodes: &[usize],
    assignment: &ClusterAssignment,
) -> CliResult<()> {
    let dom = &assignment.domination;
    out.write("assignment.tsv", |w| {
        for (x, (&node, &k)) in nodes.iter().zip(&assignment.labels).enumerate() {
            writeln!(w, "{node}\t{k}\t{}", dom.get(x, k))?;
        }
        Ok(())
    })?;
    out.write("domination.csv", |w| {
        write!(w, "node,particle")?;
        for k in 0..dom.particles() {
            write!(w, ",p{k}")?;
        }
        writeln!(w)?;
        for (x, (&node, &k)) in nodes.iter().zip(&assignment.labels).enumerate() {
            write!(w, "{node},{k}")?;
            for v in dom.row(x) {
                write!(w, ",{v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    })?;
    if let Some(traj) = &assignment.trajectory {
        out.write("trajectory.txt", |w| traj.write_text(w))?;
    }
    let state = assignment.final_state.to_json()?;
    out.write("state.json", |w| w.write_all(state.as_bytes()))?;
    Ok(())
}

fn report(assignment: &ClusterAssignment, score: Option<&ScoreRecord>) {
    let clusters: BTreeSet<usize> = assignment.labels.iter().copied().collect();
    print!(
        "nodes {} clusters {} iterations {} converged {}",
        assignment.labels.len(),
        clusters.len(),
        assignment.iterations(),
        assignment.converged
    );
    match score {
        Some(s) => println!(
            " precision {:.4} recall {:.4} f {:.4}",
            s.precision, s.recall, s.f
        ),
        None => println!(),
    }
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "data".into(), |s| s.to_string_lossy().into_owned())
}

pub fn disambiguate(config: &RunConfig) -> CliResult<()> {
    config.validate()?;
    match (&config.corpus, &config.graph) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "give either a corpus or a graph, not both".into(),
        )),
        (None, None) => Err(CliError::Usage("need --corpus or --graph".into())),
        (Some(corpus), None) => disambiguate_corpus(config, corpus),
        (None, Some(graph)) => disambiguate_graph(config, graph),
    }
}

fn disambiguate_corpus(config: &RunConfig, corpus: &Path) -> CliResult<()> {
    let ambiguous = config
        .ambiguous
        .as_ref()
        .ok_or_else(|| CliError::Usage("corpus mode needs --ambiguous".into()))?;
    let records = load_corpus(corpus)?;
    let spec = AmbiguitySpec::load(ambiguous)?;
    let truth: Option<Vec<MentionTruth>> = config.truth.as_deref().map(read_csv).transpose()?;
    let result = run_pipeline(&records, &spec, &config.pipeline, truth.as_deref())?;

    let out = OutDir::create(&config.out)?;
    out.write("config.txt", |w| w.write_all(config.to_text().as_bytes()))?;
    out.write("similarity.sim", |w| result.network.similarity.write_text(w))?;
    write_assignment(&out, &result.network.nodes, &result.assignment)?;
    out.write_csv("mentions.csv", &result.mentions)?;
    let score = match &truth {
        Some(truth) => {
            let report = score_mentions(&result.mentions, truth)?;
            let eta = truth.iter().map(|t| t.entity).collect::<BTreeSet<_>>().len();
            let record = ScoreRecord::new(
                &dataset_name(corpus),
                METHOD_PARTICLES,
                eta,
                config.pipeline.competition.seed,
                &report,
            );
            out.write_csv("scores.csv", std::slice::from_ref(&record))?;
            Some(record)
        }
        None => None,
    };
    report(&result.assignment, score.as_ref());
    Ok(())
}

fn disambiguate_graph(config: &RunConfig, path: &Path) -> CliResult<()> {
    let mut graph = CollaborationGraph::load(path, config.nodes.as_deref())?;
    if config.nodes.is_none() {
        let n = graph.node_count();
        graph = CollaborationGraph::from_edges(
            graph.labels().to_vec(),
            vec![true; n],
            graph.edges().collect::<Vec<_>>(),
        )?;
    }
    let out = OutDir::create(&config.out)?;
    out.write("config.txt", |w| w.write_all(config.to_text().as_bytes()))?;

    let (adjacency, nodes) = if config.direct {
        let adjacency = Adjacency::from_graph(&graph).with_isolated_self_loops();
        (adjacency, (0..graph.node_count()).collect::<Vec<_>>())
    } else {
        let net = reduced_network(&graph, &config.pipeline)?;
        out.write("similarity.sim", |w| net.similarity.write_text(w))?;
        (net.adjacency, net.nodes)
    };

    let truth = match &config.truth {
        Some(path) => {
            let rows: Vec<NodeClass> = read_csv(path)?;
            let lookup: BTreeMap<usize, usize> = rows.iter().map(|r| (r.node, r.class)).collect();
            let classes = nodes
                .iter()
                .map(|n| {
                    lookup.get(n).copied().ok_or_else(|| {
                        CliError::Data(format!("{}: no class for node {n}", path.display()))
                    })
                })
                .collect::<CliResult<Vec<usize>>>()?;
            Some(dense_classes(classes))
        }
        None => None,
    };
    let assignment = compete(&adjacency, &config.pipeline.competition, truth.as_deref())?;
    write_assignment(&out, &nodes, &assignment)?;
    let score = match &truth {
        Some(truth) => {
            let report = pairwise_scores(&PartitionPair::new(&assignment.labels, truth)?)?;
            let classes = truth.iter().collect::<BTreeSet<_>>().len();
            let record = ScoreRecord::new(
                &dataset_name(path),
                METHOD_PARTICLES,
                classes,
                config.pipeline.competition.seed,
                &report,
            );
            out.write_csv("scores.csv", std::slice::from_ref(&record))?;
            Some(record)
        }
        None => None,
    };
    report(&assignment, score.as_ref());
    Ok(())
}

pub fn synth(args: &SynthArgs) -> CliResult<()> {
    let out = OutDir::create(&args.out)?;
    if args.demo {
        let graph = fixtures::demo_network();
        out.write("graph.tsv", |w| graph.write_edge_list(w))?;
        out.write("nodes.tsv", |w| graph.write_node_table(w))?;
        let truth: Vec<NodeClass> = fixtures::demo_classes()
            .into_iter()
            .enumerate()
            .map(|(node, class)| NodeClass { node, class })
            .collect();
        out.write_csv("truth.csv", &truth)?;
        let mut config = RunConfig {
            graph: Some(out.path("graph.tsv")),
            nodes: Some(out.path("nodes.tsv")),
            truth: Some(out.path("truth.csv")),
            direct: true,
            out: out.path("run"),
            ..RunConfig::default()
        };
        let c = &mut config.pipeline.competition;
        c.particles = 3;
        c.initial_positions = Some(vec![1, 3, 12]);
        c.conv_tol = 0.0;
        c.max_iters = 1000;
        out.write("config.txt", |w| w.write_all(config.to_text().as_bytes()))?;
        println!("nodes {} edges {} classes 3", graph.node_count(), graph.edge_count());
        return Ok(());
    }

    let spec = SynthSpec {
        eta: args.eta,
        papers_per_entity: args.papers_per_entity,
        coauthor_pool: args.coauthor_pool,
        p_cross: args.p_cross,
        seed: args.seed,
        ..SynthSpec::default()
    };
    let bench = synth_ambiguity_benchmark(&spec)?;
    out.write("corpus.jsonl", |w| {
        homonym::corpus::write_corpus(&bench.records, w)
    })?;
    out.write("ambiguous.txt", |w| writeln!(w, "{}", bench.ambiguous_name))?;
    out.write_csv("truth.csv", &bench.truth)?;
    let mut config = RunConfig {
        corpus: Some(out.path("corpus.jsonl")),
        ambiguous: Some(out.path("ambiguous.txt")),
        truth: Some(out.path("truth.csv")),
        out: out.path("run"),
        ..RunConfig::default()
    };
    config.pipeline.competition.particles = args.eta;
    config.pipeline.competition.seed = args.seed;
    out.write("config.txt", |w| w.write_all(config.to_text().as_bytes()))?;
    println!(
        "papers {} entities {} ambiguous name {:?}",
        bench.records.len(),
        args.eta,
        bench.ambiguous_name
    );
    Ok(())
}

fn parse_seeds(text: &str) -> CliResult<Vec<u64>> {
    if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|e| CliError::Usage(format!("seeds: {e}")))?;
        let b: u64 = b
            .trim()
            .trim_start_matches('=')
            .parse()
            .map_err(|e| CliError::Usage(format!("seeds: {e}")))?;
        return Ok((a..=b).collect());
    }
    parse_list("seeds", text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Particles,
    KMeans,
    Modularity,
}

#[derive(Debug, Clone)]
struct Cell {
    kind: Kind,
    k: usize,
    record: ScoreRecord,
}

#[derive(Debug, Serialize)]
struct SignTestRow {
    method: String,
    baseline: String,
    eta: usize,
    wins: u32,
    trials: u32,
    chance: f64,
    p_value: f64,
}

struct Grid {
    etas: Vec<usize>,
    seeds: Vec<u64>,
    ls: Vec<usize>,
    ks: Vec<usize>,
    lambdas: Vec<f64>,
}

impl Grid {
    fn particle_method(&self, l: usize, lambda: f64, k: usize) -> String {
        let mut parts = Vec::new();
        if self.ls.len() > 1 {
            parts.push(format!("l={l}"));
        }
        if self.lambdas.len() > 1 {
            parts.push(format!("lambda={lambda}"));
        }
        if self.ks.len() > 1 {
            parts.push(format!("k={k}"));
        }
        with_params(METHOD_PARTICLES, &parts)
    }

    fn kmeans_method(&self, k: usize) -> String {
        if self.ks.len() > 1 {
            with_params(METHOD_KMEANS, &[format!("k={k}")])
        } else {
            METHOD_KMEANS.to_string()
        }
    }
}

fn with_params(method: &str, parts: &[String]) -> String {
    if parts.is_empty() {
        method.to_string()
    } else {
        format!("{method}[{}]", parts.join(";"))
    }
}

fn sweep_dataset(
    grid: &Grid,
    base: &PipelineConfig,
    spec: &SynthSpec,
    run_seed: u64,
) -> CliResult<Vec<Cell>> {
    let bench = synth_ambiguity_benchmark(spec)?;
    let dataset = format!("synth-eta{}-seed{}", spec.eta, spec.seed);
    let (registry, graph) = build_network(&bench.records, &bench.ambiguity())?;
    let record = |method: &str, report: &ScoreReport| {
        ScoreRecord::new(&dataset, method, spec.eta, spec.seed, report)
    };
    let ks: Vec<usize> = if grid.ks.is_empty() { vec![spec.eta] } else { grid.ks.clone() };

    let mut cells = Vec::new();
    for &l in &grid.ls {
        let mut config = base.clone();
        config.walk_length = l;
        let net = reduced_network(&graph, &config)?;
        for &lambda in &grid.lambdas {
            for &k in &ks {
                let mut params = config.competition.clone();
                params.lambda = lambda;
                params.particles = k;
                params.seed = run_seed;
                let assignment = compete(&net.adjacency, &params, None)?;
                let mentions = mention_predictions(&registry, &net.nodes, &assignment.labels);
                let report = score_mentions(&mentions, &bench.truth)?;
                cells.push(Cell {
                    kind: Kind::Particles,
                    k,
                    record: record(&grid.particle_method(l, lambda, k), &report),
                });
            }
        }
    }
    for &k in &ks {
        let predicted = kmeans_predictions(&registry, &graph, k, run_seed)?;
        cells.push(Cell {
            kind: Kind::KMeans,
            k,
            record: record(&grid.kmeans_method(k), &score_mentions(&predicted, &bench.truth)?),
        });
    }
    let predicted = modularity_predictions(&registry, &graph)?;
    cells.push(Cell {
        kind: Kind::Modularity,
        k: 0,
        record: record(METHOD_MODULARITY, &score_mentions(&predicted, &bench.truth)?),
    });
    Ok(cells)
}

fn sign_tests(cells: &[Cell], chance: f64) -> CliResult<Vec<SignTestRow>> {
    // (eta, method) -> (kind, k, seed -> f)
    type Scores = (Kind, usize, BTreeMap<u64, f64>);
    let mut table: BTreeMap<(usize, String), Scores> = BTreeMap::new();
    for c in cells {
        let r = &c.record;
        table
            .entry((r.eta, r.method.clone()))
            .or_insert_with(|| (c.kind, c.k, BTreeMap::new()))
            .2
            .insert(r.seed, r.f);
    }
    let mut rows = Vec::new();
    for ((eta, method), (kind, k, ours)) in &table {
        if *kind != Kind::Particles {
            continue;
        }
        for ((beta, baseline), (bkind, bk, theirs)) in &table {
            let comparable = match bkind {
                Kind::Particles => false,
                Kind::KMeans => bk == k,
                Kind::Modularity => true,
            };
            if beta != eta || !comparable {
                continue;
            }
            let mut wins = 0u32;
            let mut trials = 0u32;
            for (seed, f) in ours {
                if let Some(g) = theirs.get(seed) {
                    trials += 1;
                    wins += u32::from(f > g);
                }
            }
            rows.push(SignTestRow {
                method: method.clone(),
                baseline: baseline.clone(),
                eta: *eta,
                wins,
                trials,
                chance,
                p_value: sign_test_pvalue(wins, trials, chance)?,
            });
        }
    }
    Ok(rows)
}

pub fn sweep(config: &RunConfig, args: &SweepArgs) -> CliResult<()> {
    config.validate()?;
    let base = &config.pipeline;
    let grid = Grid {
        etas: args.eta.clone(),
        seeds: parse_seeds(&args.seeds)?,
        ls: if args.l.is_empty() { vec![base.walk_length] } else { args.l.clone() },
        ks: args.k.clone(),
        lambdas: if args.lambda.is_empty() {
            vec![base.competition.lambda]
        } else {
            args.lambda.clone()
        },
    };
    if grid.etas.is_empty() || grid.seeds.is_empty() {
        return Err(CliError::Usage("empty sweep grid".into()));
    }
    if !(args.chance > 0.0 && args.chance < 1.0) {
        return Err(CliError::Usage(format!("chance {} outside (0, 1)", args.chance)));
    }

    let out = OutDir::create(&config.out)?;
    let mut echo = config.to_text();
    let join = |v: Vec<String>| v.join(",");
    echo.push_str(&format!(
        "# sweep grid\n# eta = {}\n# seeds = {}\n# l = {}\n# k = {}\n# lambda = {}\n# p_cross = {}\n# papers_per_entity = {}\n# coauthor_pool = {}\n# chance = {}\n",
        join(grid.etas.iter().map(|v| v.to_string()).collect()),
        join(grid.seeds.iter().map(|v| v.to_string()).collect()),
        join(grid.ls.iter().map(|v| v.to_string()).collect()),
        if grid.ks.is_empty() { "eta".into() } else { join(grid.ks.iter().map(|v| v.to_string()).collect()) },
        join(grid.lambdas.iter().map(|v| v.to_string()).collect()),
        args.p_cross,
        args.papers_per_entity,
        args.coauthor_pool,
        args.chance,
    ));
    out.write("config.txt", |w| w.write_all(echo.as_bytes()))?;

    let jobs: Vec<(usize, u64)> = grid
        .etas
        .iter()
        .flat_map(|&eta| grid.seeds.iter().map(move |&seed| (eta, seed)))
        .collect();
    let work = || -> CliResult<Vec<Vec<Cell>>> {
        jobs.par_iter()
            .map(|&(eta, seed)| {
                let spec = SynthSpec {
                    eta,
                    papers_per_entity: args.papers_per_entity,
                    coauthor_pool: args.coauthor_pool,
                    p_cross: args.p_cross,
                    seed,
                    ..SynthSpec::default()
                };
                let run_seed = base.competition.seed.wrapping_add(seed);
                let cells = sweep_dataset(&grid, base, &spec, run_seed)?;
                let records: Vec<&ScoreRecord> = cells.iter().map(|c| &c.record).collect();
                out.write_csv(&format!("cells/eta{eta}-seed{seed}.csv"), &records)?;
                Ok(cells)
            })
            .collect()
    };
    let results = match config.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(work)?,
        None => work()?,
    };

    let cells: Vec<Cell> = results.into_iter().flatten().collect();
    let records: Vec<ScoreRecord> = cells.iter().map(|c| c.record.clone()).collect();
    out.write_csv("scores.csv", &records)?;
    let summary = aggregate(&records);
    out.write("summary.csv", |w| write_aggregate(&summary, w))?;
    let tests = sign_tests(&cells, args.chance)?;
    out.write_csv("signtest.csv", &tests)?;

    for row in &summary {
        println!(
            "{:<24} eta {:>2}  f {:.4} ± {:.4}  ({} runs)",
            row.method, row.eta, row.mean_f, row.std_f, row.runs
        );
    }
    for t in &tests {
        println!(
            "{} vs {} eta {}: wins {}/{} p = {:.3e}",
            t.method, t.baseline, t.eta, t.wins, t.trials, t.p_value
        );
    }
    Ok(())
}
