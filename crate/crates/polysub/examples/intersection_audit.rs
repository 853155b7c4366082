//! Audit of the x-projection structure of the component of (1,1,1):
//! the g(t) histogram identities and the sizes of sampled pairwise
//! Z-set intersections.

use polysub::markoff::SurfaceIndex;
use polysub::orbit::intersection_audit;

fn main() {
    let p = 199;
    let idx = SurfaceIndex::enumerate(p).unwrap();
    let audit = intersection_audit(&idx, Some(4), 5000, 0).unwrap();
    println!(
        "p = {p}: component size {}, M = {} x-projections, L* size {}",
        audit.component_size, audit.m_projections, audit.lstar_size
    );
    println!("g(t) histogram (t : count):");
    for (t, g) in &audit.g_histogram {
        println!("  {t:>5} : {g}");
    }
    println!("Σ g(t) = M: {}", audit.sum_g_equals_m);
    println!("g(t) = 0 for t > 2M: {}", audit.g_zero_beyond_2m);
    println!(
        "max |Z(x) ∩ Z(x*)| over {} pairs: {} at {:?} (within 2A: {:?})",
        audit.pairs_sampled, audit.max_intersection, audit.argmax_pair, audit.within_2a
    );
}
