//! Paper records, ambiguous-mention expansion and the weighted
//! co-authorship graph.
//!
//! Every paper `k` with `|k|` distinct authors adds `1/|k|` to the weight of
//! each pair of nodes that co-occur in it. Ambiguous names are expanded into
//! one node per mention group so the later stages can decide which of them
//! belong to the same person.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One paper: an opaque id and its ordered, de-duplicated author list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub id: String,
    pub authors: Vec<String>,
}

impl PaperRecord {
    /// Trims names, drops repeated names (keeping the first occurrence) and
    /// rejects records without authors.
    pub fn new<I, S>(id: impl Into<String>, authors: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let id = id.into();
        let mut seen = HashSet::new();
        let mut clean = Vec::new();
        for name in authors {
            let name = name.as_ref().trim();
            if name.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "paper {id:?} has an empty author name"
                )));
            }
            if seen.insert(name.to_string()) {
                clean.push(name.to_string());
            }
        }
        if clean.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "paper {id:?} has no authors"
            )));
        }
        Ok(PaperRecord { id, authors: clean })
    }
}

#[derive(Deserialize)]
struct RawRecord {
    id: String,
    authors: Vec<String>,
}

/// Parses a JSON-lines corpus: one `{"id": ..., "authors": [...]}` object per
/// line. Blank lines are skipped. Line numbers in errors are 1-based.
pub fn parse_corpus<R: BufRead>(reader: R) -> Result<Vec<PaperRecord>> {
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawRecord =
            serde_json::from_str(&line).map_err(|e| Error::parse(lineno, e.to_string()))?;
        let record = PaperRecord::new(raw.id, raw.authors)
            .map_err(|e| Error::parse(lineno, e.to_string()))?;
        records.push(record);
    }
    Ok(records)
}

pub fn load_corpus(path: &Path) -> Result<Vec<PaperRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(BufReader::new(file)).map_err(|e| Error::in_file(path, e))
}

pub fn write_corpus<W: Write>(records: &[PaperRecord], mut out: W) -> std::io::Result<()> {
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        writeln!(out)?;
    }
    Ok(())
}

/// Assignment of one ambiguous mention to a mention group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MentionGroup {
    pub paper_id: String,
    pub group: String,
}

/// The ambiguous-name file: name → list of `{paper_id, group}`.
///
/// An empty list marks the name as ambiguous without grouping, so each of its
/// mentions becomes a separate node.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AmbiguitySpec {
    pub names: BTreeMap<String, Vec<MentionGroup>>,
}

impl AmbiguitySpec {
    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        AmbiguitySpec {
            names: names.into_iter().map(|n| (n.into(), Vec::new())).collect(),
        }
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        Ok(serde_json::from_reader(reader)?)
    }

    /// Either the JSON form or plain text with one name per line (`#`
    /// starts a comment).
    pub fn parse_text(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            return Self::from_reader(text.as_bytes());
        }
        Ok(Self::from_names(
            text.lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .filter(|l| !l.is_empty()),
        ))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_text(&text).map_err(|e| Error::in_file(path, e))
    }

    pub fn ambiguous_names(&self) -> BTreeSet<String> {
        self.names.keys().map(|n| n.trim().to_string()).collect()
    }

    /// `None` when no name carries an explicit grouping.
    pub fn grouping(&self) -> Option<MentionGrouping> {
        let mut grouping = MentionGrouping::default();
        for (name, groups) in &self.names {
            for g in groups {
                grouping.insert(name.trim(), g.paper_id.as_str(), g.group.as_str());
            }
        }
        (!grouping.is_empty()).then_some(grouping)
    }
}

/// Externally supplied map `(name, paper_id) → group id`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MentionGrouping {
    groups: BTreeMap<(String, String), String>,
}

impl MentionGrouping {
    pub fn insert(&mut self, name: &str, paper_id: &str, group: &str) {
        self.groups
            .insert((name.to_string(), paper_id.to_string()), group.to_string());
    }

    pub fn get(&self, name: &str, paper_id: &str) -> Option<&str> {
        self.groups
            .get(&(name.to_string(), paper_id.to_string()))
            .map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    fn iter(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.groups
            .iter()
            .map(|((n, p), g)| (n.as_str(), p.as_str(), g.as_str()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum MentionKey {
    /// Non-ambiguous name: one node for all papers.
    Unique,
    /// Ungrouped ambiguous mention, keyed by paper.
    Paper(String),
    Group(String),
}

/// Maps every author occurrence to a dense node index.
#[derive(Debug, Clone)]
pub struct NodeRegistry {
    entries: HashMap<(String, MentionKey), usize>,
    ambiguous_names: BTreeSet<String>,
    grouping: Option<MentionGrouping>,
    labels: Vec<String>,
    base_names: Vec<String>,
    ambiguous: Vec<bool>,
    /// Paper ids of the mentions represented by each node.
    mentions: Vec<Vec<String>>,
}

impl NodeRegistry {
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Display label: the name itself, or `"<name> <n>"` for the n-th node of
    /// an ambiguous name.
    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    pub fn base_name(&self, node: usize) -> &str {
        &self.base_names[node]
    }

    pub fn is_ambiguous(&self, node: usize) -> bool {
        self.ambiguous[node]
    }

    pub fn ambiguous_names(&self) -> &BTreeSet<String> {
        &self.ambiguous_names
    }

    pub fn mentions(&self, node: usize) -> &[String] {
        &self.mentions[node]
    }

    pub fn ambiguous_nodes(&self) -> Vec<usize> {
        (0..self.node_count()).filter(|&i| self.ambiguous[i]).collect()
    }

    fn key(&self, name: &str, paper_id: &str) -> MentionKey {
        if !self.ambiguous_names.contains(name) {
            return MentionKey::Unique;
        }
        match self.grouping.as_ref().and_then(|g| g.get(name, paper_id)) {
            Some(group) => MentionKey::Group(group.to_string()),
            None => MentionKey::Paper(paper_id.to_string()),
        }
    }

    /// Node of `name` as it occurs in `paper_id`.
    pub fn resolve(&self, name: &str, paper_id: &str) -> Option<usize> {
        let name = name.trim();
        let key = self.key(name, paper_id);
        self.entries.get(&(name.to_string(), key)).copied()
    }
}

/// Assigns node indices in order of first appearance over `records`.
///
/// Without a grouping every `(ambiguous name, paper)` pair becomes its own
/// node; mentions sharing a group id share a node. Non-ambiguous names get a
/// single node each.
pub fn expand_mentions(
    records: &[PaperRecord],
    ambiguous: &BTreeSet<String>,
    grouping: Option<&MentionGrouping>,
) -> Result<NodeRegistry> {
    if let Some(grouping) = grouping {
        let papers: HashMap<&str, &PaperRecord> =
            records.iter().map(|r| (r.id.as_str(), r)).collect();
        for (name, paper_id, _) in grouping.iter() {
            if !ambiguous.contains(name) {
                return Err(Error::InvalidParameter(format!(
                    "mention grouping given for non-ambiguous name {name:?}"
                )));
            }
            let found = papers
                .get(paper_id)
                .is_some_and(|r| r.authors.iter().any(|a| a == name));
            if !found {
                return Err(Error::UnknownPaper {
                    name: name.to_string(),
                    paper_id: paper_id.to_string(),
                });
            }
        }
    }

    let mut registry = NodeRegistry {
        entries: HashMap::new(),
        ambiguous_names: ambiguous.clone(),
        grouping: grouping.cloned(),
        labels: Vec::new(),
        base_names: Vec::new(),
        ambiguous: Vec::new(),
        mentions: Vec::new(),
    };
    let mut per_name_count: HashMap<String, usize> = HashMap::new();

    for record in records {
        for name in &record.authors {
            let key = registry.key(name, &record.id);
            let is_ambiguous = key != MentionKey::Unique;
            let entry = (name.clone(), key);
            let node = match registry.entries.get(&entry) {
                Some(&node) => node,
                None => {
                    let node = registry.labels.len();
                    let label = if is_ambiguous {
                        let count = per_name_count.entry(name.clone()).or_insert(0);
                        *count += 1;
                        format!("{name} {count}")
                    } else {
                        name.clone()
                    };
                    registry.entries.insert(entry, node);
                    registry.labels.push(label);
                    registry.base_names.push(name.clone());
                    registry.ambiguous.push(is_ambiguous);
                    registry.mentions.push(Vec::new());
                    node
                }
            };
            registry.mentions[node].push(record.id.clone());
        }
    }
    Ok(registry)
}

/// Undirected weighted graph with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CollaborationGraph {
    labels: Vec<String>,
    ambiguous: Vec<bool>,
    adjacency: Vec<BTreeMap<usize, f64>>,
}

impl CollaborationGraph {
    /// Graph without edges.
    pub fn empty(labels: Vec<String>, ambiguous: Vec<bool>) -> Result<Self> {
        if labels.len() != ambiguous.len() {
            return Err(Error::InvalidParameter(
                "label and ambiguity tables differ in length".into(),
            ));
        }
        let adjacency = vec![BTreeMap::new(); labels.len()];
        Ok(CollaborationGraph {
            labels,
            ambiguous,
            adjacency,
        })
    }

    /// Builds a graph from undirected edges. Repeated edges accumulate.
    pub fn from_edges<I>(labels: Vec<String>, ambiguous: Vec<bool>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut graph = Self::empty(labels, ambiguous)?;
        for (i, j, w) in edges {
            graph.add_weight(i, j, w)?;
        }
        Ok(graph)
    }

    pub fn add_weight(&mut self, i: usize, j: usize, weight: f64) -> Result<()> {
        let n = self.node_count();
        if i >= n || j >= n {
            return Err(Error::InvalidParameter(format!(
                "edge ({i}, {j}) outside 0..{n}"
            )));
        }
        if i == j {
            return Err(Error::InvalidParameter(format!("self-loop on node {i}")));
        }
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "edge ({i}, {j}) has non-positive weight {weight}"
            )));
        }
        *self.adjacency[i].entry(j).or_insert(0.0) += weight;
        *self.adjacency[j].entry(i).or_insert(0.0) += weight;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeMap::len).sum::<usize>() / 2
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.adjacency[i].get(&j).copied().unwrap_or(0.0)
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.adjacency[i].iter().map(|(&j, &w)| (j, w))
    }

    /// Weighted degree.
    pub fn strength(&self, i: usize) -> f64 {
        self.adjacency[i].values().sum()
    }

    /// Each undirected edge once, with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, row)| {
            row.range(i + 1..).map(move |(&j, &w)| (i, j, w))
        })
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_ambiguous(&self, i: usize) -> bool {
        self.ambiguous[i]
    }

    pub fn ambiguous_mask(&self) -> &[bool] {
        &self.ambiguous
    }

    pub fn ambiguous_nodes(&self) -> Vec<usize> {
        (0..self.node_count()).filter(|&i| self.ambiguous[i]).collect()
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Writes `V <n>` followed by one `i\tj\tweight` line per edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "V {}", self.node_count())?;
        for (i, j, w) in self.edges() {
            writeln!(out, "{i}\t{j}\t{w}")?;
        }
        Ok(())
    }

    /// Writes `index\tname\tambiguous(0|1)` per node.
    pub fn write_node_table<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (i, label) in self.labels.iter().enumerate() {
            writeln!(out, "{i}\t{label}\t{}", u8::from(self.ambiguous[i]))?;
        }
        Ok(())
    }

    pub fn load(edges: &Path, nodes: Option<&Path>) -> Result<Self> {
        let open = |p: &Path| File::open(p).map(BufReader::new).map_err(|e| Error::io(p, e));
        let edge_file = open(edges)?;
        let node_file = nodes.map(open).transpose()?;
        let tag_nodes = |e| match nodes {
            Some(n) => Error::in_file(n, e),
            None => e,
        };
        Self::read_tagged(edge_file, node_file, tag_nodes).map_err(|e| match e {
            e @ Error::InFile { .. } => e,
            e => Error::in_file(edges, e),
        })
    }

    /// Reads the edge-list format. Without a node table, nodes are labelled
    /// by their 1-based index and none is marked ambiguous.
    pub fn read<R: BufRead, N: BufRead>(edges: R, nodes: Option<N>) -> Result<Self> {
        Self::read_tagged(edges, nodes, |e| e)
    }

    fn read_tagged<R: BufRead, N: BufRead>(
        edges: R,
        nodes: Option<N>,
        tag_nodes: impl Fn(Error) -> Error,
    ) -> Result<Self> {
        let mut lines = edges.lines().enumerate();
        let node_count = loop {
            let Some((idx, line)) = lines.next() else {
                return Err(Error::parse(1, "missing `V <node_count>` header"));
            };
            let line = line.map_err(|e| Error::parse(idx + 1, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            match (parts.next(), parts.next().map(str::parse::<usize>), parts.next()) {
                (Some("V"), Some(Ok(n)), None) => break n,
                _ => return Err(Error::parse(idx + 1, "expected `V <node_count>` header")),
            }
        };

        let (labels, ambiguous) = match nodes {
            Some(nodes) => read_node_table(nodes, node_count).map_err(tag_nodes)?,
            None => (
                (1..=node_count).map(|i| i.to_string()).collect(),
                vec![false; node_count],
            ),
        };
        let mut graph = Self::empty(labels, ambiguous)?;
        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::parse(lineno, "expected `i<TAB>j<TAB>weight`"));
            }
            let i = fields[0]
                .parse::<usize>()
                .map_err(|e| Error::parse(lineno, e.to_string()))?;
            let j = fields[1]
                .parse::<usize>()
                .map_err(|e| Error::parse(lineno, e.to_string()))?;
            let w = fields[2]
                .parse::<f64>()
                .map_err(|e| Error::parse(lineno, e.to_string()))?;
            graph
                .add_weight(i, j, w)
                .map_err(|e| Error::parse(lineno, e.to_string()))?;
        }
        Ok(graph)
    }
}

fn read_node_table<R: BufRead>(reader: R, node_count: usize) -> Result<(Vec<String>, Vec<bool>)> {
    let mut labels = vec![None; node_count];
    let mut ambiguous = vec![false; node_count];
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::parse(lineno, "expected `index<TAB>name<TAB>0|1`"));
        }
        let i = fields[0]
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::parse(lineno, e.to_string()))?;
        if i >= node_count {
            return Err(Error::parse(lineno, format!("node {i} outside 0..{node_count}")));
        }
        ambiguous[i] = match fields[2].trim() {
            "0" => false,
            "1" => true,
            other => return Err(Error::parse(lineno, format!("bad ambiguity flag {other:?}"))),
        };
        labels[i] = Some(fields[1].to_string());
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| Error::parse(0, format!("node {i} missing from node table"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((labels, ambiguous))
}

/// Collaboration weights: `w_ij = Σ_k δ_ijk / |k|` over all papers.
pub fn build_collaboration_graph(
    records: &[PaperRecord],
    registry: &NodeRegistry,
) -> Result<CollaborationGraph> {
    let labels = (0..registry.node_count())
        .map(|i| registry.label(i).to_string())
        .collect();
    let ambiguous = (0..registry.node_count())
        .map(|i| registry.is_ambiguous(i))
        .collect();
    let mut graph = CollaborationGraph::empty(labels, ambiguous)?;
    for record in records {
        let mut nodes = Vec::with_capacity(record.authors.len());
        for name in &record.authors {
            let node = registry
                .resolve(name, &record.id)
                .ok_or_else(|| Error::Unresolved {
                    name: name.clone(),
                    paper_id: record.id.clone(),
                })?;
            if !nodes.contains(&node) {
                nodes.push(node);
            }
        }
        let share = 1.0 / nodes.len() as f64;
        for (a, &i) in nodes.iter().enumerate() {
            for &j in &nodes[a + 1..] {
                graph.add_weight(i, j, share)?;
            }
        }
    }
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn fig1() -> (Vec<PaperRecord>, NodeRegistry, CollaborationGraph) {
        let records = fixtures::toy_corpus();
        let spec = fixtures::toy_ambiguity();
        let registry =
            expand_mentions(&records, &spec.ambiguous_names(), spec.grouping().as_ref()).unwrap();
        let graph = build_collaboration_graph(&records, &registry).unwrap();
        (records, registry, graph)
    }

    #[test]
    fn parses_single_record() {
        let input = r#"{"id":"p1","authors":["Kim","Rocha","Simas"]}"#;
        let records = parse_corpus(input.as_bytes()).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].authors, ["Kim", "Rocha", "Simas"]);
    }

    #[test]
    fn empty_stream_is_empty_corpus() {
        assert!(parse_corpus("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn duplicate_authors_collapse_and_names_trim() {
        let input = r#"{"id":"x","authors":[" A","A ","B"]}"#;
        let records = parse_corpus(input.as_bytes()).unwrap();
        assert_eq!(records[0].authors, ["A", "B"]);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let input = "{\"id\":\"a\",\"authors\":[\"X\"]}\n\n{\"id\":\"b\",\"authors\":[]}\n";
        match parse_corpus(input.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match parse_corpus("{not json".as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn grouped_toy_corpus_has_twelve_nodes() {
        let (_, registry, graph) = fig1();
        assert_eq!(registry.node_count(), 12);
        assert_eq!(registry.ambiguous_nodes().len(), 4);
        assert_eq!(graph.node_count(), 12);
        for k in 1..=4 {
            assert!(graph.find(&format!("Kim {k}")).is_some());
        }
        let kim1 = registry.resolve("Kim", "1").unwrap();
        assert_eq!(registry.resolve("Kim", "5"), Some(kim1));
        assert_eq!(registry.mentions(kim1), ["1", "5"]);
    }

    #[test]
    fn ungrouped_kim_gets_one_node_per_paper() {
        let records = fixtures::toy_corpus();
        let ambiguous = BTreeSet::from(["Kim".to_string()]);
        let registry = expand_mentions(&records, &ambiguous, None).unwrap();
        assert_eq!(registry.ambiguous_nodes().len(), 6);
        assert_eq!(registry.node_count(), 6 + 8);
    }

    #[test]
    fn no_ambiguous_names_gives_one_node_per_name() {
        let records = fixtures::toy_corpus();
        let registry = expand_mentions(&records, &BTreeSet::new(), None).unwrap();
        assert_eq!(registry.node_count(), 9);
        assert!(registry.ambiguous_nodes().is_empty());
    }

    #[test]
    fn grouping_with_unknown_paper_is_rejected() {
        let records = fixtures::toy_corpus();
        let ambiguous = BTreeSet::from(["Kim".to_string()]);
        let mut grouping = MentionGrouping::default();
        grouping.insert("Kim", "99", "g1");
        assert!(matches!(
            expand_mentions(&records, &ambiguous, Some(&grouping)),
            Err(Error::UnknownPaper { .. })
        ));
        // paper 7 exists but has no Kim
        let mut grouping = MentionGrouping::default();
        grouping.insert("Kim", "7", "g1");
        assert!(expand_mentions(&records, &ambiguous, Some(&grouping)).is_err());
    }

    #[test]
    fn toy_weights_match_hand_values() {
        let (_, _, graph) = fig1();
        let id = |l: &str| graph.find(l).unwrap();
        assert_eq!(graph.weight(id("Rocha"), id("Simas")), 1.0 / 3.0);
        assert_eq!(graph.weight(id("Kong"), id("Shi")), 1.0);
        assert_eq!(graph.weight(id("Kim 4"), id("Kong")), 0.5);
        // papers 1 and 5 both link Kim 1 with Rocha
        assert_eq!(graph.weight(id("Kim 1"), id("Rocha")), 1.0 / 3.0 + 0.5);
        assert_eq!(graph.weight(id("Kim 1"), id("Kim 2")), 0.0);
    }

    #[test]
    fn two_author_paper() {
        let records = vec![PaperRecord::new("p", ["A", "B"]).unwrap()];
        let registry = expand_mentions(&records, &BTreeSet::new(), None).unwrap();
        let graph = build_collaboration_graph(&records, &registry).unwrap();
        assert_eq!(graph.weight(0, 1), 0.5);
        assert_eq!(graph.weight(1, 0), 0.5);
        assert_eq!(graph.weight(0, 0), 0.0);
        assert_eq!(graph.edge_count(), 1);
    }

    #[test]
    fn edge_list_round_trip() {
        let (_, _, graph) = fig1();
        let mut edges = Vec::new();
        let mut nodes = Vec::new();
        graph.write_edge_list(&mut edges).unwrap();
        graph.write_node_table(&mut nodes).unwrap();
        assert!(String::from_utf8_lossy(&edges).starts_with("V 12\n"));
        let back = CollaborationGraph::read(&edges[..], Some(&nodes[..])).unwrap();
        assert_eq!(back, graph);
    }

    #[test]
    fn edge_list_without_header_fails() {
        assert!(CollaborationGraph::read("0\t1\t1\n".as_bytes(), None::<&[u8]>).is_err());
    }

    #[test]
    fn ambiguity_text_forms() {
        let plain = AmbiguitySpec::parse_text("Kim\n# comment\n  Lee  # trailing\n\n").unwrap();
        assert_eq!(plain, AmbiguitySpec::from_names(["Kim", "Lee"]));
        let json = AmbiguitySpec::parse_text(r#"{"Kim": [{"paper_id": "1", "group": "a"}]}"#).unwrap();
        assert!(json.grouping().is_some());
    }

    #[test]
    fn missing_corpus_names_path() {
        let err = load_corpus(Path::new("/nonexistent/corpus.jsonl")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/corpus.jsonl"));
    }
}
