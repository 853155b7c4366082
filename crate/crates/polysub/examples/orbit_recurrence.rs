//! Rotation orbits on the Markoff surface: the linear recurrence
//! u_{n+2} = 3x·u_{n+1} − u_n, its period t(x), and the Z-set it traces.

use polysub::ff::{Field, FieldElement};
use polysub::orbit::{recurrence, rotation_data, z_set};

fn main() {
    let p = 101u64;
    let (x, y, z) = (FieldElement::new(1, p), FieldElement::new(1, p), FieldElement::new(1, p));

    let rot = rotation_data(&x);
    println!("p = {p}, x = {x}: t(x) = {}, degenerate = {}", rot.t_x, rot.degenerate);

    let seq = recurrence(&x, &y, &z, 16);
    let vals: Vec<String> = seq.iter().map(|v| v.to_string()).collect();
    println!("u_1..u_16 = {}", vals.join(", "));

    match z_set(&x, &y, &z) {
        Ok(zs) => {
            println!(
                "Z(x) has {} distinct values over period {}; r(x) = {}, α = {}, β = {}",
                zs.elements.len(),
                zs.t,
                zs.r,
                zs.alpha,
                zs.beta
            );
            assert!(2 * zs.elements.len() as u64 >= zs.t);
        }
        Err(e) => println!("no Z-set: {e}"),
    }
}
