//! Discrete gradient line fields on closed oriented surfaces.
//!
//! The pipeline: build a cell decomposition ([`complex`]), put a Morse
//! matching on the vertex level of its Hasse diagram ([`hasse`], [`field`]),
//! read off critical cells and indices with the Euler identity as a
//! self-check, reduce the field to a minimal decomposition ([`homotopy`]),
//! and extract the radial graph whose rotation-system class identifies the
//! field ([`radial`]).

pub mod complex;
pub mod field;
pub mod gen;
pub mod hasse;
pub mod homotopy;
pub mod radial;

mod iso;
