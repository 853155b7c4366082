//! Connectivity of the Markoff graph mod p over a range of primes.
//!
//! For every odd prime up to the limit, enumerate the surface
//! x² + y² + z² = 3xyz, run union-find over the Vieta/permutation moves, and
//! report how many points fall outside the component of (1,1,1).

use polysub::markoff::exceptional_scan;

fn main() {
    let reports = exceptional_scan(3, 200).expect("range within guard");
    println!("{:>6} {:>8} {:>6} {:>8} {:>11}", "p", "points", "comps", "largest", "exceptional");
    for r in &reports {
        println!(
            "{:>6} {:>8} {:>6} {:>8} {:>11}",
            r.p, r.n_points, r.n_components, r.largest, r.exceptional
        );
    }
    let bad: Vec<u64> = reports.iter().filter(|r| r.exceptional != 0).map(|r| r.p).collect();
    if bad.is_empty() {
        println!("no exceptional points for any p in range");
    } else {
        println!("exceptional points at p = {bad:?}");
    }
}
