pub mod analysis;
pub mod bessel;
pub mod domain;
pub mod fem;
pub mod geometry;
pub mod mesh;
pub mod pipeline;
pub mod report;
pub mod rng;
pub mod svg;
pub mod sweep;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/domains.md")]
    mod domains {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/critical-points.md")]
    mod critical_points {}
    #[doc = include_str!("../../../book/src/comparison-field.md")]
    mod comparison_field {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
