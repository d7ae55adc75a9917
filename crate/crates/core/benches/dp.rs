use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use proofblocks::{
    count_orderings_with, edit_distance_with, expand, grade_batch, Block, Exec, Question, Submission,
};

/// Small xorshift so the bench inputs are fixed without extra dependencies.
struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// `n` blocks with sparse random back-edges and two 3-member groups.
fn question(n: usize, seed: u64) -> Question {
    let mut rng = XorShift(seed);
    let mut q = Question::new(format!("bench{n}"), "");
    for i in 0..n {
        let deps: Vec<String> = (0..i)
            .filter(|_| rng.below(100) < 12)
            .map(|j| format!("b{j}"))
            .collect();
        q = q.with_block(Block::required(format!("b{i}"), format!("line {i}")).depends_on(deps));
    }
    // Group members only depend on each other so the groups never dead-end.
    let g1 = [n - 6, n - 5, n - 4].map(|i| format!("b{i}"));
    let g2 = [n - 3, n - 2, n - 1].map(|i| format!("b{i}"));
    for b in &mut q.blocks[n - 6..] {
        b.depends.retain(|d| d.trim_start_matches('b').parse::<usize>().unwrap() < n - 6);
    }
    let m1: Vec<&str> = g1.iter().map(String::as_str).collect();
    let m2: Vec<&str> = g2.iter().map(String::as_str).collect();
    q.with_group("G1", Vec::<String>::new(), &m1)
        .with_group("G2", Vec::<String>::new(), &m2)
}

fn submissions(q: &Question, count: usize, seed: u64) -> Vec<Submission> {
    let mut rng = XorShift(seed);
    (0..count)
        .map(|_| {
            let mut tags: Vec<String> = q.blocks.iter().map(|b| b.tag.clone()).collect();
            for i in (1..tags.len()).rev() {
                tags.swap(i, rng.below(i as u64 + 1) as usize);
            }
            Submission::new(tags)
        })
        .collect()
}

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn bench_count(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_orderings");
    group.sample_size(10);
    for n in [14, 18] {
        let graph = expand(&question(n, 0x5eed)).unwrap();
        for (name, exec) in EXECS {
            group.bench_with_input(BenchmarkId::new(name, n), &graph, |b, g| {
                b.iter(|| count_orderings_with(g, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_edit_distance(c: &mut Criterion) {
    let mut group = c.benchmark_group("edit_distance");
    group.sample_size(10);
    for n in [14, 18] {
        let q = question(n, 0x5eed);
        let graph = expand(&q).unwrap();
        let sub = submissions(&q, 1, 7).remove(0);
        for (name, exec) in EXECS {
            group.bench_with_input(BenchmarkId::new(name, n), &graph, |b, g| {
                b.iter(|| edit_distance_with(g, &sub.ordering, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("grade_batch");
    group.sample_size(10);
    let q = question(12, 0xba7c);
    let subs = submissions(&q, 64, 11);
    for (name, exec) in EXECS {
        group.bench_function(BenchmarkId::new(name, subs.len()), |b| {
            b.iter(|| grade_batch(&q, &subs, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_count, bench_edit_distance, bench_batch);
criterion_main!(benches);
