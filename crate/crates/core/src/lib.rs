//! Exact computation of stable lattices for two-dimensional representations
//! over localized polynomial rings.

pub mod ring;
pub mod matrix;
pub mod repr;
pub mod lattice;
pub mod examples;
pub mod graph;
pub mod iwasawa;
pub mod pipeline;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/rings.md")]
    pub struct Rings;
    #[doc = include_str!("../../../book/src/lattices.md")]
    pub struct Lattices;
    #[doc = include_str!("../../../book/src/reducibility.md")]
    pub struct Reducibility;
    #[doc = include_str!("../../../book/src/graph.md")]
    pub struct Graph;
    #[doc = include_str!("../../../book/src/iwasawa.md")]
    pub struct Iwasawa;
}
