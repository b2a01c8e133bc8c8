//! Synthetic homonym benchmarks.
//!
//! `eta` different people share one name. Each has a private pool of
//! co-authors; every paper pairs the shared name with a few co-authors from
//! the owner's pool, at least one of them already seen on an earlier paper
//! of the same entity, so each entity forms one connected community. With
//! probability `p_cross` a paper also lists a co-author of another entity.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{AmbiguitySpec, PaperRecord};
use crate::error::{Error, Result};

pub const AMBIGUOUS_NAME: &str = "J. Doe";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub eta: usize,
    pub papers_per_entity: usize,
    pub coauthor_pool: usize,
    /// Inclusive range of co-authors per paper.
    pub coauthors_per_paper: (usize, usize),
    pub p_cross: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            eta: 2,
            papers_per_entity: 8,
            coauthor_pool: 6,
            coauthors_per_paper: (1, 3),
            p_cross: 0.15,
            seed: 0,
        }
    }
}

/// Entity behind one ambiguous mention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MentionTruth {
    pub paper_id: String,
    pub name: String,
    pub entity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthBenchmark {
    pub records: Vec<PaperRecord>,
    pub truth: Vec<MentionTruth>,
    pub ambiguous_name: String,
}

impl SynthBenchmark {
    pub fn ambiguity(&self) -> AmbiguitySpec {
        AmbiguitySpec::from_names([self.ambiguous_name.clone()])
    }
}

fn coauthor(entity: usize, member: usize) -> String {
    format!("Author {}-{}", entity + 1, member + 1)
}

pub fn synth_ambiguity_benchmark(spec: &SynthSpec) -> Result<SynthBenchmark> {
    let (lo, hi) = spec.coauthors_per_paper;
    if spec.eta < 2 {
        return Err(Error::InvalidParameter("eta must be at least 2".into()));
    }
    if spec.papers_per_entity == 0 || spec.coauthor_pool == 0 {
        return Err(Error::InvalidParameter(
            "need at least one paper and one co-author per entity".into(),
        ));
    }
    if lo == 0 || lo > hi || hi > spec.coauthor_pool {
        return Err(Error::InvalidParameter(format!(
            "co-authors per paper {lo}..={hi} incompatible with pool {}",
            spec.coauthor_pool
        )));
    }
    if !(0.0..=1.0).contains(&spec.p_cross) {
        return Err(Error::InvalidParameter(format!("p_cross {} outside [0, 1]", spec.p_cross)));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut drafts: Vec<(usize, Vec<String>)> = Vec::new();
    for entity in 0..spec.eta {
        let mut used: Vec<usize> = Vec::new();
        for _ in 0..spec.papers_per_entity {
            let m = rng.random_range(lo..=hi);
            let mut chosen: Vec<usize> = Vec::with_capacity(m + 1);
            if let Some(&anchor) = used.choose(&mut rng) {
                chosen.push(anchor);
            }
            let rest: Vec<usize> = (0..spec.coauthor_pool)
                .filter(|c| !chosen.contains(c))
                .collect();
            chosen.extend(rest.choose_multiple(&mut rng, m - chosen.len()).copied());
            for &c in &chosen {
                if !used.contains(&c) {
                    used.push(c);
                }
            }
            let mut list = vec![AMBIGUOUS_NAME.to_string()];
            list.extend(chosen.iter().map(|&c| coauthor(entity, c)));
            if rng.random::<f64>() < spec.p_cross {
                let other = (entity + rng.random_range(1..spec.eta)) % spec.eta;
                list.push(coauthor(other, rng.random_range(0..spec.coauthor_pool)));
            }
            drafts.push((entity, list));
        }
    }
    // paper order and ids carry no entity information
    drafts.shuffle(&mut rng);

    let mut records = Vec::with_capacity(drafts.len());
    let mut truth = Vec::with_capacity(drafts.len());
    for (i, (entity, authors)) in drafts.into_iter().enumerate() {
        let id = format!("P{:04}", i + 1);
        records.push(PaperRecord::new(id.clone(), authors)?);
        truth.push(MentionTruth {
            paper_id: id,
            name: AMBIGUOUS_NAME.to_string(),
            entity,
        });
    }
    Ok(SynthBenchmark {
        records,
        truth,
        ambiguous_name: AMBIGUOUS_NAME.to_string(),
    })
}
