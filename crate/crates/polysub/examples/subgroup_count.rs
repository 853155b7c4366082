//! Exact solution counts of a curve on G×G grids as the subgroup order varies.

use polysub::ff::FieldElement;
use polysub::poly::parse_text;
use polysub::subgrp::{build_subgroup_base, count_poly_solutions};

fn main() {
    let p = 2377u64;
    let curve = parse_text("1,1,1;1,0,1;0,1,1", p).unwrap(); // XY + X + Y
    println!("#{{(u,v) ∈ G² : uv + u + v = 0}} mod {p}");
    for t in [8, 24, 54, 108, 216, 792, 2376] {
        assert_eq!((p - 1) % t, 0);
        let g = build_subgroup_base(p, t).unwrap();
        let n = count_poly_solutions(&curve, &g, &g, None).unwrap();
        println!("  t = {t:>5}: {n}");
    }
    // and once on a nontrivial coset
    let g = build_subgroup_base(p, 216).unwrap();
    let coset = (FieldElement::new(5, p), FieldElement::new(7, p));
    let n = count_poly_solutions(&curve, &g, &g, Some(coset)).unwrap();
    println!("  t =   216 on coset (5G, 7G): {n}");
}
