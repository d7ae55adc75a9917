use crate::model::{Block, Question};

/// Two independent three-line chains joined by a conclusion.
pub(crate) fn fig1() -> Question {
    Question::new("fig1", "")
        .with_block(Block::required("1", "a"))
        .with_block(Block::required("2", "b").depends_on(["1"]))
        .with_block(Block::required("3", "c").depends_on(["2"]))
        .with_block(Block::required("4", "d"))
        .with_block(Block::required("5", "e").depends_on(["4"]))
        .with_block(Block::required("6", "f").depends_on(["5"]))
        .with_block(Block::required("7", "g").depends_on(["3", "6"]))
}

/// Setup line, base-case group B, inductive-step group I, conclusion.
pub(crate) fn induction() -> Question {
    Question::new("induction", "")
        .with_block(Block::required("n1", "setup"))
        .with_block(Block::required("b1", "base 1"))
        .with_block(Block::required("b2", "base 2").depends_on(["b1"]))
        .with_block(Block::required("i1", "step 1"))
        .with_block(Block::required("i2", "step 2").depends_on(["i1"]))
        .with_block(Block::required("c", "conclusion").depends_on(["B", "I"]))
        .with_group("B", ["n1"], &["b1", "b2"])
        .with_group("I", ["n1"], &["i1", "i2"])
}

pub(crate) fn chain(n: usize) -> Question {
    let mut q = Question::new("chain", "");
    for i in 0..n {
        let mut b = Block::required(format!("s{i}"), format!("step {i}"));
        if i > 0 {
            b = b.depends_on([format!("s{}", i - 1)]);
        }
        q = q.with_block(b);
    }
    q
}
