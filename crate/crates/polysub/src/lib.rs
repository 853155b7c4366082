//! Exact computational experiments on polynomial equations in multiplicative
//! subgroups of finite fields and on the Markoff surface modulo p.
//!
//! The crate is organised around a few independent layers:
//!
//! * [`ff`] — arithmetic in `F_p` and `F_{p²}`, square roots, multiplicative orders;
//! * [`poly`] — sparse bivariate polynomials, curve derivatives, singular loci;
//! * [`numth`] — factorization, smooth-number counts, divisor counts;
//! * [`markoff`] — the Markoff surface mod p, Vieta moves, connected components;
//! * [`orbit`] — Markoff recurrences, rotation data, Z-sets and their intersections;
//! * [`subgrp`] — subgroup construction and exact solution counting on G×G grids;
//! * [`stepanov`] — a constructive auxiliary-polynomial certificate with a
//!   Bézout-style counting bound, built by exact linear algebra mod p.
//!
//! Everything is exact integer arithmetic; no floating point enters any verdict.
//! Scans are reproducible: the same seed and parameters give byte-identical
//! reports regardless of thread count.

pub mod ff;
pub mod markoff;
pub mod numth;
pub mod orbit;
pub mod subgrp;
pub mod cli;
pub mod poly;
pub mod report;
pub mod stepanov;
