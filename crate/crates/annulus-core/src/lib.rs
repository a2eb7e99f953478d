//! Numerical realization of constant mean curvature annuli that meet spheres
//! tangentially, their parallel surfaces, and the checks that go with them.
//!
//! The crate is `no_std` (with `alloc`). Everything here is a pure function of
//! its inputs; file formats and the command-line driver live in the `annulus`
//! crate.
//!
//! Sign conventions follow one rule throughout: the unit normal of a fixture
//! points away from the centers of the spheres it touches, so the unit sphere
//! with its outward normal has `H = -1` and principal curvatures `-1`.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod contact;
pub mod delaunay;
mod error;
pub mod geom;
pub mod num;
pub mod parallel;
pub mod surface;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use geom::{Line, Plane, Vec3};
