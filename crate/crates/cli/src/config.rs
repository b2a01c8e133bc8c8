//! Flat `key = value` run configuration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use homonym::pipeline::PipelineConfig;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub pipeline: PipelineConfig,
    pub corpus: Option<PathBuf>,
    pub ambiguous: Option<PathBuf>,
    pub truth: Option<PathBuf>,
    pub graph: Option<PathBuf>,
    pub nodes: Option<PathBuf>,
    /// Cluster the input graph itself instead of its passage similarity.
    pub direct: bool,
    pub out: PathBuf,
    pub verbosity: u8,
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            pipeline: PipelineConfig::default(),
            corpus: None,
            ambiguous: None,
            truth: None,
            graph: None,
            nodes: None,
            direct: false,
            out: PathBuf::from("out"),
            verbosity: 0,
            workers: None,
        }
    }
}

pub fn absolute(path: &Path) -> String {
    std::path::absolute(path)
        .unwrap_or_else(|_| path.to_path_buf())
        .display()
        .to_string()
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Usage(format!("{key} = {value:?}: {e}")))
}

pub fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| parse(key, v))
        .collect()
}

fn parse_bool(key: &str, value: &str) -> CliResult<bool> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::Usage(format!("{key} = {value:?}: expected true or false"))),
    }
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let value = value.trim();
        let c = &mut self.pipeline.competition;
        match key.trim().replace('-', "_").as_str() {
            "lambda" => c.lambda = parse(key, value)?,
            "delta" => c.delta = parse(key, value)?,
            "omega_min" => c.omega_min = parse(key, value)?,
            "omega_max" => c.omega_max = parse(key, value)?,
            "k" | "particles" => c.particles = parse(key, value)?,
            "max_iters" => c.max_iters = parse(key, value)?,
            "conv_tol" => c.conv_tol = parse(key, value)?,
            "conv_window" => c.conv_window = parse(key, value)?,
            "seed" => c.seed = parse(key, value)?,
            "positions" => {
                c.initial_positions = match value {
                    "" | "random" => None,
                    v => Some(parse_list(key, v)?),
                }
            }
            "l" | "walk_length" => self.pipeline.walk_length = parse(key, value)?,
            "r" | "repetitions" => self.pipeline.repetitions = parse(key, value)?,
            "sparsify" => {
                self.pipeline.sparsify = value.parse().map_err(|e| CliError::Usage(format!("{e}")))?
            }
            "corpus" => self.corpus = Some(value.into()),
            "ambiguous" => self.ambiguous = Some(value.into()),
            "truth" => self.truth = Some(value.into()),
            "graph" => self.graph = Some(value.into()),
            "nodes" => self.nodes = Some(value.into()),
            "direct" => self.direct = parse_bool(key, value)?,
            "out" => self.out = value.into(),
            "verbosity" => self.verbosity = parse(key, value)?,
            "workers" => self.workers = Some(parse(key, value)?),
            other => return Err(CliError::Usage(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Applies every `key = value` line; `#` starts a comment. Relative
    /// paths are resolved against the file's directory.
    pub fn apply_text(&mut self, text: &str, base: Option<&Path>) -> CliResult<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected `key = value`", idx + 1))
            })?;
            self.set(key, value)
                .map_err(|e| CliError::Usage(format!("config line {}: {e}", idx + 1)))?;
        }
        if let Some(base) = base {
            for path in [
                &mut self.corpus,
                &mut self.ambiguous,
                &mut self.truth,
                &mut self.graph,
                &mut self.nodes,
            ]
            .into_iter()
            .flatten()
            {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut config = RunConfig::default();
        config.apply_text(&text, path.parent())?;
        Ok(config)
    }

    /// Resolved configuration in the same format [`RunConfig::apply_text`]
    /// reads.
    pub fn to_text(&self) -> String {
        let c = &self.pipeline.competition;
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("k", c.particles.to_string());
        kv("lambda", c.lambda.to_string());
        kv("delta", c.delta.to_string());
        kv("omega_min", c.omega_min.to_string());
        kv("omega_max", c.omega_max.to_string());
        kv("max_iters", c.max_iters.to_string());
        kv("conv_tol", c.conv_tol.to_string());
        kv("conv_window", c.conv_window.to_string());
        kv("seed", c.seed.to_string());
        kv(
            "positions",
            c.initial_positions.as_ref().map_or("random".into(), |p| {
                p.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            }),
        );
        kv("l", self.pipeline.walk_length.to_string());
        kv("r", self.pipeline.repetitions.to_string());
        kv("sparsify", self.pipeline.sparsify.to_string());
        for (key, path) in [
            ("corpus", &self.corpus),
            ("ambiguous", &self.ambiguous),
            ("truth", &self.truth),
            ("graph", &self.graph),
            ("nodes", &self.nodes),
        ] {
            if let Some(p) = path {
                kv(key, absolute(p));
            }
        }
        kv("direct", self.direct.to_string());
        kv("out", absolute(&self.out));
        kv("verbosity", self.verbosity.to_string());
        if let Some(w) = self.workers {
            kv("workers", w.to_string());
        }
        s
    }

    pub fn validate(&self) -> CliResult<()> {
        self.pipeline.validate()?;
        for path in [&self.corpus, &self.ambiguous, &self.truth, &self.graph, &self.nodes]
            .into_iter()
            .flatten()
        {
            if !path.is_file() {
                return Err(CliError::Data(format!("{}: no such file", path.display())));
            }
        }
        if self.workers == Some(0) {
            return Err(CliError::Usage("workers must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use homonym::similarity::Sparsify;

    #[test]
    fn text_round_trip() {
        let mut c = RunConfig::default();
        c.apply_text(
            "k = 3\nlambda=0.8 # comment\npositions = 1,3,12\nsparsify = knn:4\nl = 7\ncorpus = data/c.jsonl\n",
            Some(Path::new("/base")),
        )
        .unwrap();
        assert_eq!(c.pipeline.competition.particles, 3);
        assert_eq!(c.pipeline.competition.initial_positions, Some(vec![1, 3, 12]));
        assert_eq!(c.pipeline.sparsify, Sparsify::Knn(4));
        assert_eq!(c.corpus, Some(PathBuf::from("/base/data/c.jsonl")));
        c.out = PathBuf::from("/runs/a");
        let mut again = RunConfig::default();
        again.apply_text(&c.to_text(), None).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn rejects_unknown_key_and_bad_value() {
        let mut c = RunConfig::default();
        assert!(matches!(c.set("gamma", "1"), Err(CliError::Usage(_))));
        assert!(matches!(c.set("lambda", "x"), Err(CliError::Usage(_))));
        assert!(c.apply_text("lambda 0.5", None).is_err());
    }
}
