//! Twisted cyclic cocycles of covariant differential calculi on the quantum
//! disc and on SU_q(2).

pub mod cocycle;
pub mod disc_model;
pub mod gns_suq2;
pub mod hopf;
pub mod ncpoly;
pub mod su2_calculus;
pub mod verify;
