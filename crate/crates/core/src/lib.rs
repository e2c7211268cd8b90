//! Integral Chow rings of weighted blow-ups.
//!
//! Rings are finitely presented graded `Z`-algebras handled degree by degree
//! with integer lattices. The layers, bottom up: [`intlat`] (Hermite and
//! Smith forms), [`polyring`] (sparse polynomials), [`gring`] (graded
//! rings, maps, pushforwards), [`chern`] (equivariant Chern classes),
//! [`blowup`] (the blow-up itself), [`iface`] (setup files and the CLI).

pub mod blowup;
pub mod chern;
pub mod gring;
pub mod iface;
pub mod intlat;
pub mod polyring;
