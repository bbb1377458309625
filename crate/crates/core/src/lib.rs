pub mod cli;
pub mod error;
pub mod factorization;
pub mod field;
pub mod format;
pub mod oracle;
pub mod properties;
pub mod random;
pub mod relation;
pub mod report;
pub mod subspace;
