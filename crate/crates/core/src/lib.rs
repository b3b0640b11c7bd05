//! Structured English instructions for agents in a grid world.
//!
//! A [`world::WorldState`] holds locations, typed objects and agents.
//! Instructions are parsed by [`grammar`], grounded by [`resolver`] and
//! carried out tick by tick by [`executor`].

pub mod executor;
pub mod grammar;
pub mod regions;
pub mod relations;
pub mod resolver;
pub mod world;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/world.md")]
    mod world {}
    #[doc = include_str!("../../../book/src/regions.md")]
    mod regions {}
    #[doc = include_str!("../../../book/src/relations.md")]
    mod relations {}
    #[doc = include_str!("../../../book/src/grammar.md")]
    mod grammar {}
    #[doc = include_str!("../../../book/src/resolution.md")]
    mod resolution {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
}
