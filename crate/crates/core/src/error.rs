use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dependency cycle through {}", .0.join(" -> "))]
    Cycle(Vec<String>),

    #[error("`{from}` depends on distractor `{to}`")]
    DistractorDependency { from: String, to: String },

    #[error("`{from}` depends on unknown tag `{to}`")]
    UnknownReference { from: String, to: String },

    #[error("tag `{0}` is declared more than once")]
    DuplicateTag(String),

    #[error("group `{0}` has a group as a member")]
    NestedGroup(String),

    #[error("group `{0}` is inconsistent with its member blocks")]
    GroupMembership(String),

    #[error("question has no required blocks")]
    NoRequiredBlocks,

    #[error("contiguity sets overlap on `{0}`")]
    OverlappingGroups(String),

    #[error("edge endpoint `{0}` is not a node")]
    UnknownNode(String),

    #[error("{nodes} proof lines exceeds the limit of {limit} for this operation")]
    TooLarge { nodes: usize, limit: usize },

    #[error("submission has {lines} usable lines, more than the limit of {limit}")]
    SubmissionTooLong { lines: usize, limit: usize },

    #[error("no ordering satisfies the dependency graph")]
    NoValidOrdering,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
