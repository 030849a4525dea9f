use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("catalog cap exceeded: more than {cap} indecomposables found")]
    CatalogCap { cap: usize },

    #[error("enumeration cap exceeded: {what} needs {needed} elements, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u64,
    },

    #[error("window violation: shift {shift} outside [{lo}, {hi}]")]
    Window { shift: i32, lo: i32, hi: i32 },

    #[error("unknown object label {0:?}")]
    UnknownLabel(String),

    #[error("object {0} is not in the filtration closure")]
    NotFiltered(String),

    #[error("indecomposability test inconclusive: dim End = {dim_end} exceeds the search guard")]
    Inconclusive { dim_end: usize },

    #[error("decomposition leaf with dimension vector {0:?} matches no catalog member")]
    UnmatchedLeaf(Vec<usize>),

    #[error("quiver spec error: {0}")]
    Spec(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
