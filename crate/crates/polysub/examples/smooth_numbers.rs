//! Divisor counts, smooth-number counts, and primitive prime divisors.

use polysub::numth::{bound_audit_psi, factorize, primitive_prime_divisors, tau_z};

fn main() {
    // τ(n; z): divisors of n up to z
    let n = 720720u64;
    println!("n = {n} = {:?}", factorize(n).factors);
    for z in [10.0, 100.0, n as f64] {
        println!("  τ(n; {z}) = {}", tau_z(n, z));
    }

    // Ψ(x, y) against the crude e^{-u/2}·x lower-bound shape, u = ln x / ln y
    let rows = bound_audit_psi(&[1_000, 100_000, 10_000_000], &[10, 100, 1_000]).unwrap();
    println!("{:>10} {:>6} {:>10} {:>8}", "x", "y", "psi", "ratio");
    for r in rows {
        println!("{:>10} {:>6} {:>10} {:>8.3}", r.x, r.y, r.psi, r.ratio);
    }

    // primes dividing 2^n − 1 but no smaller 2^k − 1; these are ≡ 1 (mod n)
    for n in [11u32, 24, 36] {
        let ppd = primitive_prime_divisors(n).unwrap();
        println!("primitive prime divisors of 2^{n} − 1: {ppd:?}");
        assert!(ppd.iter().all(|q| q % n as u64 == 1));
    }
}
