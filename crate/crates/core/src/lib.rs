pub mod invariants;
pub mod json;
pub mod linalg;
pub mod poly;
pub mod random;
pub mod reconstruct;
pub mod similarity;
pub mod toeplitz;
