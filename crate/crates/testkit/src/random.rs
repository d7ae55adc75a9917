//! Seeded random questions and submissions.

use proofblocks::{Block, Group, Question, Submission};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub min_blocks: usize,
    pub max_blocks: usize,
    pub min_groups: usize,
    pub max_groups: usize,
    pub max_group_size: usize,
    pub max_distractors: usize,
    /// Upper bound on the per-pair dependency probability; each question
    /// draws its own density below this.
    pub max_density: f64,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            min_blocks: 1,
            max_blocks: 7,
            min_groups: 0,
            max_groups: 2,
            max_group_size: 3,
            max_distractors: 2,
            max_density: 0.6,
        }
    }
}

/// A random question whose declared dependencies are acyclic. Groups are
/// runs of adjacent blocks in author order; the question may still be
/// unsatisfiable when a group member waits on an outside block.
pub fn question(rng: &mut TestRng, shape: Shape) -> Question {
    let n = rng.random_range(shape.min_blocks..=shape.max_blocks);
    let density = rng.random_range(0.0..=shape.max_density);

    // Hidden topological rank; every dependency points to a lower rank.
    let mut rank: Vec<usize> = (0..n).collect();
    rank.shuffle(rng);

    let group_count = rng.random_range(shape.min_groups..=shape.max_groups.max(shape.min_groups));
    let mut group_of: Vec<Option<usize>> = vec![None; n];
    let mut runs: Vec<Vec<usize>> = Vec::new();
    for _ in 0..group_count {
        let size = rng.random_range(1..=shape.max_group_size.max(1));
        let starts: Vec<usize> = (0..n.saturating_sub(size - 1))
            .filter(|&s| (s..s + size).all(|i| group_of[i].is_none()))
            .collect();
        let Some(&start) = starts.choose(rng) else {
            continue;
        };
        let g = runs.len();
        for slot in &mut group_of[start..start + size] {
            *slot = Some(g);
        }
        runs.push((start..start + size).collect());
    }

    runs.sort();
    for (g, run) in runs.iter().enumerate() {
        for &i in run {
            group_of[i] = Some(g);
        }
    }

    let tag = |i: usize| format!("b{i}");
    let gtag = |g: usize| format!("G{g}");
    let min_rank = |run: &[usize]| run.iter().map(|&i| rank[i]).min().unwrap();
    let max_rank = |run: &[usize]| run.iter().map(|&i| rank[i]).max().unwrap();

    let mut blocks: Vec<Block> = (0..n)
        .map(|i| {
            let mut depends: Vec<String> = (0..n)
                .filter(|&u| rank[u] < rank[i] && rng.random_bool(density))
                .map(tag)
                .collect();
            for (g, run) in runs.iter().enumerate() {
                if group_of[i] != Some(g) && max_rank(run) < rank[i] && rng.random_bool(density / 2.0) {
                    depends.push(gtag(g));
                }
            }
            depends.shuffle(rng);
            Block {
                tag: tag(i),
                text: format!("line {i}"),
                is_distractor: false,
                depends,
                group: group_of[i].map(gtag),
            }
        })
        .collect();

    let groups: Vec<Group> = runs
        .iter()
        .enumerate()
        .map(|(g, run)| {
            let lo = min_rank(run);
            let mut depends: Vec<String> = (0..n)
                .filter(|&u| group_of[u] != Some(g) && rank[u] < lo && rng.random_bool(density / 2.0))
                .map(tag)
                .collect();
            for (h, other) in runs.iter().enumerate() {
                if h != g && max_rank(other) < lo && rng.random_bool(density / 3.0) {
                    depends.push(gtag(h));
                }
            }
            Group {
                tag: gtag(g),
                depends,
                members: run.iter().map(|&i| tag(i)).collect(),
            }
        })
        .collect();

    let distractors = rng.random_range(0..=shape.max_distractors);
    for k in 0..distractors {
        let at = rng.random_range(0..=blocks.len());
        // Keep group runs unbroken so the question round-trips through markup.
        let at = if at > 0 && at < blocks.len() && blocks[at].group.is_some() && blocks[at - 1].group == blocks[at].group {
            blocks.len()
        } else {
            at
        };
        blocks.insert(at, Block::distractor(format!("x{k}"), format!("wrong {k}")));
    }

    Question {
        id: format!("rand{n}"),
        prompt: "Prove it.".to_string(),
        blocks,
        groups,
        options: Default::default(),
    }
}

/// A random student answer. Starts from an accepted ordering (when one is
/// given) or a shuffle of the required tags, then applies up to three
/// mutations: swaps, distractor insertions, duplicates, unknown tags,
/// deletions and truncation.
pub fn submission(rng: &mut TestRng, question: &Question, accepted: &[Vec<String>]) -> Submission {
    let mut seq: Vec<String> = match accepted.choose(rng) {
        Some(valid) if rng.random_bool(0.5) => valid.clone(),
        _ => {
            let mut s: Vec<String> = question.required_blocks().map(|b| b.tag.clone()).collect();
            s.shuffle(rng);
            s
        }
    };
    let distractors: Vec<String> = question.distractors().map(|b| b.tag.clone()).collect();
    for _ in 0..rng.random_range(0..=3) {
        match rng.random_range(0..6) {
            0 if seq.len() >= 2 => {
                let i = rng.random_range(0..seq.len());
                let j = rng.random_range(0..seq.len());
                seq.swap(i, j);
            }
            1 => {
                let extra = distractors.choose(rng).cloned().unwrap_or_else(|| "x9".to_string());
                let at = rng.random_range(0..=seq.len());
                seq.insert(at, extra);
            }
            2 if !seq.is_empty() => {
                let dup = seq[rng.random_range(0..seq.len())].clone();
                let at = rng.random_range(0..=seq.len());
                seq.insert(at, dup);
            }
            3 => {
                let at = rng.random_range(0..=seq.len());
                seq.insert(at, "nope".to_string());
            }
            4 if !seq.is_empty() => {
                seq.remove(rng.random_range(0..seq.len()));
            }
            5 => {
                let keep = rng.random_range(0..=seq.len());
                seq.truncate(keep);
            }
            _ => {}
        }
    }
    Submission::new(seq)
}
