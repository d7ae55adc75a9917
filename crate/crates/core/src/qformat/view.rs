//! Seeded, shuffled student views.
//!
//! The shuffle is pinned so render ids stay stable across versions:
//!
//! * key = `seed ^ fnv1a64(question_id)` (64-bit FNV-1a over UTF-8 bytes)
//! * generator = SplitMix64 seeded with `key`
//! * Fisher-Yates over blocks in author order: for `i` from `len - 1` down to
//!   1, swap `i` with `j = next() % (i + 1)`
//! * render id = shuffled position, zero-padded to `max(2, digits(len))`

use serde::{Deserialize, Serialize};

use crate::model::{Question, UNKNOWN_TAG};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StudentBlock {
    pub render_id: String,
    pub text: String,
}

/// What a student sees: prompt and shuffled block texts. Carries no tags,
/// dependencies, groups or distractor flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StudentView {
    pub question_id: String,
    pub seed: u64,
    pub prompt: String,
    pub blocks: Vec<StudentBlock>,
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

/// Block indices (author order) in shuffled display order.
fn shuffled_indices(question: &Question, seed: u64) -> Vec<usize> {
    let mut rng = SplitMix64(seed ^ fnv1a64(question.id.as_bytes()));
    let mut order: Vec<usize> = (0..question.blocks.len()).collect();
    for i in (1..order.len()).rev() {
        let j = (rng.next() % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }
    order
}

fn render_id(position: usize, total: usize) -> String {
    let width = total.to_string().len().max(2);
    format!("{position:0width$}")
}

pub fn render_student_view(question: &Question, seed: u64) -> StudentView {
    let order = shuffled_indices(question, seed);
    let total = order.len();
    StudentView {
        question_id: question.id.clone(),
        seed,
        prompt: question.prompt.clone(),
        blocks: order
            .iter()
            .enumerate()
            .map(|(pos, &b)| StudentBlock {
                render_id: render_id(pos, total),
                text: question.blocks[b].text.clone(),
            })
            .collect(),
    }
}

/// Maps render ids back to block tags by re-deriving the shuffle. Ids that
/// do not exist in the view become [`UNKNOWN_TAG`].
pub fn resolve_ordering<S: AsRef<str>>(question: &Question, seed: u64, render_ids: &[S]) -> Vec<String> {
    let order = shuffled_indices(question, seed);
    let total = order.len();
    render_ids
        .iter()
        .map(|id| {
            let id = id.as_ref();
            id.parse::<usize>()
                .ok()
                .filter(|&pos| pos < total && render_id(pos, total) == id)
                .map_or_else(|| UNKNOWN_TAG.to_string(), |pos| question.blocks[order[pos]].tag.clone())
        })
        .collect()
}
