use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet size {0} is outside 2..=26")]
    AlphabetSize(usize),
    #[error("symbol {symbol} is outside an alphabet of size {size}")]
    SymbolOutOfRange { symbol: u8, size: usize },
    #[error("letter {0:?} is not part of the alphabet")]
    InvalidLetter(char),
    #[error("alphabet mismatch: size {left} vs size {right}")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("the empty word has no periodization")]
    EmptyWord,
    #[error("the empty word cannot be a restriction")]
    EmptyRestriction,
    #[error("the system does not define {0}")]
    NotDefining(String),
    #[error("restriction {0} is not an edge of the half-step graph")]
    MissingRestrictionEdge(String),
    #[error("vertex {0} has in- or out-degree 0")]
    DanglingVertex(String),
    #[error("counting identity violated for {word}: {detail}")]
    IdentityViolation { word: String, detail: String },
    #[error("fork {0} is not a crossroad")]
    NotCrossroad(u32),
    #[error("h* is undefined while crossroads are present")]
    CrossroadsPresent,
    #[error("arc {0} would reach negative weight")]
    NegativeWeight(u32),
    #[error("no fork-free path joins in-fork {in_fork} to out-fork {out_fork}")]
    NotCollapsible { in_fork: u32, out_fork: u32 },
    #[error("restriction choice leaves fork {0} without an exit or entry")]
    IllegalChoice(u32),
    #[error("malformed scheme: {0}")]
    MalformedScheme(String),
    #[error("pair ({in_fork}, {out_fork}) never met in the parallel run")]
    LineageMismatch { in_fork: u32, out_fork: u32 },
    #[error("schedule picked pair {index} but only {available} are collapsible")]
    BadSchedule { index: usize, available: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("words of length {len} over {size} letters exceed the 64-bit code space")]
    Capacity { len: usize, size: usize },
    #[error("search budget exceeded: {0}")]
    Budget(String),
    #[error("bound phi_c >= n violated by {word}: n = {n}, c = {c}")]
    Falsified { word: String, n: usize, c: usize },
}
