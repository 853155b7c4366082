//! Pigeonhole over coset pairs: bucket the solutions of a fractional-linear
//! equation over F_p^* × F_p^* by (aG, bG) and find a pair carrying at least
//! the average count N·t²/(p−1)².

use polysub::ff::FieldElement;
use polysub::subgrp::{MobiusEquation, pigeonhole_coset_demo};

fn main() {
    let p = 1009u64;
    let t = 63; // ≈ p^0.6
    let eq = MobiusEquation::new(
        FieldElement::new(1, p),
        FieldElement::new(1, p),
        FieldElement::new(1, p),
        FieldElement::from_i64(-1, p),
    )
    .unwrap();
    let rep = pigeonhole_coset_demo(p, t, &eq).unwrap();
    println!("p = {p}, t = {t}: {} solutions over F_p^*², {} cosets per side", rep.n_total, rep.n_cosets_per_side);
    println!(
        "best coset pair ({}, {}) carries {} ≥ ⌈average⌉ = {}: {}",
        rep.argmax.0, rep.argmax.1, rep.max_count, rep.average_ceil, rep.pigeonhole_ok
    );
    let r = &rep.rescaled;
    println!("rescaled equation: ({}, {}; {}, {})", r.a11, r.a12, r.a21, r.a22);
}
