//! The explicit construction of a small subgroup with many elements u such
//! that u and u+1 both lie in the subgroup: G = ⟨√2⟩ of order 48 in F_241.

use polysub::subgrp::sec6_construction;

fn main() {
    let rep = sec6_construction(1).unwrap();
    println!(
        "n = {}, p = {} (primitive prime divisor of 2^n − 1, p ≡ 1 mod 24)",
        rep.n, rep.p
    );
    println!("ξ = √2 = {} has order {}; G = ⟨ξ⟩", rep.xi, rep.group_order);
    println!("listed elements and membership (x ∈ G, x+1 ∈ G):");
    for (x, (a, b)) in rep.d_elements.iter().zip(&rep.d_membership) {
        println!("  {x:>5}: {a} {b}");
    }
    println!("all listed memberships hold: {}", rep.memberships_ok);
    if let Some((idx, v)) = rep.repair {
        println!("  (element #{idx} fails; the same-shape replacement {v} works)");
    }
    println!("#(u ∈ G with u+1 ∈ G) = {}", rep.mobius_count);
}
