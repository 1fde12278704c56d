//! Exact algorithms for zeta functions of varieties over finite fields and
//! for bounding and certifying ranks of Néron–Severi and numerical cycle
//! groups.
//!
//! Everything here is pure computation over exact integers, rationals and
//! finite fields; file formats, caching, threading and the command-line
//! front end live in the `picardkit` crate.
#![no_std]

extern crate alloc;

pub mod arith;
pub mod ffield;
pub mod galmod;
pub mod lattice;
pub mod field;
pub mod fp_poly;
pub mod counting;
pub mod dovetail;
pub mod polysys;
pub mod qmat;
pub mod weil;
pub mod zeta;
pub mod zpoly;
