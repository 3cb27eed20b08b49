//! Exact computations in Kontsevich graph operads and hairy graph complexes.

pub mod complexes;
pub mod graph;
pub mod homology;
pub mod numint;
pub mod poisson;
pub mod report;
