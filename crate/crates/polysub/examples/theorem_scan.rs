//! Solution-count bound check across all subgroup orders for one prime.
//!
//! The bound N ≤ 12mn(m+n)g·h^{2/3}t^{2/3} is compared exactly (cubes of both
//! sides), and the window t ≥ h², (2t)⁴h ≤ p³ decides how a broken inequality
//! is classified.

use polysub::numth::factorize;
use polysub::poly::parse_text;
use polysub::subgrp::{build_subgroup_base, check_theorem};

fn main() {
    let p = 499u64;
    let curve = parse_text("1,1,1;1,0,1;0,1,1", p).unwrap();
    let one = (polysub::ff::FieldElement::new(1, p), polysub::ff::FieldElement::new(1, p));
    println!("p = {p}, P = XY + X + Y, h = 1");
    for t in factorize(p - 1).divisors() {
        if t < 2 {
            continue;
        }
        let g = build_subgroup_base(p, t).unwrap();
        let rep = check_theorem(&curve, &[one], &g).unwrap();
        println!(
            "  t = {t:>4}: N = {:>4}, bound ≤ {:>6}, verdict {:?}",
            rep.n_solutions, rep.bound.bound_ceil, rep.verdict
        );
    }
}
