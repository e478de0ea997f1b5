//! Builds a network of derivational families and series from a tagged,
//! phonetized lexicon.
//!
//! The stages are: phoneme n-gram similarity neighborhoods
//! ([`similarity`]), formal analogies mined inside those neighborhoods
//! ([`analogy`]), a weighted relation graph typed into family and series
//! relations, a high-precision seed and its bootstrap to a fixed point
//! ([`network`]), and the orchestration with checkpoints and export
//! ([`pipeline`]).

pub mod analogy;
pub mod lexicon;
pub mod network;
pub mod pipeline;
pub mod similarity;
