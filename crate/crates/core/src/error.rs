use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty domain: {0}")]
    EmptyDomain(String),

    #[error("{a} is not a quadratic residue modulo {p}")]
    NonResidue { a: u64, p: u64 },

    #[error("prime {0} is inert in Z[i]")]
    Inert(u64),

    #[error("prime {0} is ramified in Z[i]")]
    Ramified(u64),

    #[error("capacity exceeded: {what} (largest feasible value: {max_feasible})")]
    CapacityExceeded { what: String, max_feasible: u64 },

    /// Eigenvalue requested at a prime the provider cannot evaluate. `at` carries
    /// the `(n, cofactor)` pair when the request came from a polynomial value.
    #[error("eigenvalue at prime {p} is not available{}", at.map(|(n, c)| format!(" (n = {n}, cofactor = {c})")).unwrap_or_default())]
    UnsupportedPrime { p: u64, at: Option<(u64, u64)> },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("Ramanujan bound violated at p = {p}: |lambda(p)| = {value}")]
    RamanujanViolation { p: u64, value: f64 },

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("polynomial has degree zero")]
    DegreeZero,

    #[error("polynomial vanishes identically modulo {0}")]
    DegeneratePrime(u64),

    #[error("prime {0} divides the discriminant or leading coefficient")]
    RamifiedPrime(u64),

    #[error("table is missing {} prime(s), first gaps: {:?}", missing.len(), &missing[..missing.len().min(8)])]
    IncompleteTable { missing: Vec<u64> },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("cache file rejected: {0}")]
    Cache(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyDomain(_) => "empty_domain",
            Error::NonResidue { .. } => "non_residue",
            Error::Inert(_) => "inert",
            Error::Ramified(_) => "ramified",
            Error::CapacityExceeded { .. } => "capacity_exceeded",
            Error::UnsupportedPrime { .. } => "unsupported_prime",
            Error::Domain(_) => "domain",
            Error::RamanujanViolation { .. } => "ramanujan_violation",
            Error::Syntax { .. } => "syntax",
            Error::DegreeZero => "degree_zero",
            Error::DegeneratePrime(_) => "degenerate_prime",
            Error::RamifiedPrime(_) => "ramified_prime",
            Error::IncompleteTable { .. } => "incomplete_table",
            Error::InsufficientData(_) => "insufficient_data",
            Error::Cache(_) => "cache",
            Error::Io(_) => "io",
        }
    }
}
