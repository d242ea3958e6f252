//! Every chapter of the guide is attached to a module below so that
//! `cargo test --doc -p logos-book` runs its Rust listings.

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/hilbert.md")]
mod hilbert {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/graph.md")]
mod graph {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/valuation.md")]
mod valuation {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/tomography.md")]
mod tomography {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/kochen-specker.md")]
mod kochen_specker {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/opposition.md")]
mod opposition {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/sampling.md")]
mod sampling {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod cli {}
