//! Random scan of #{u ∈ G : (a11·u − a12)/(a21·u − a22) ∈ G} over small
//! subgroups, looking for counts that grow faster than t^{1/2}.

use polysub::subgrp::conjecture_scan;

fn main() {
    let rep = conjecture_scan(500, 0.5, 200, 0).unwrap();
    println!(
        "{} (p, t) tasks, {} trials each, seed {}",
        rep.tasks, rep.trials, rep.seed
    );
    println!("count histogram:");
    for (count, freq) in &rep.histogram {
        println!("  {count:>3} solutions: {freq} draws");
    }
    let (p, t, a11, a12, a21, a22) = rep.argmax;
    println!(
        "max count {} at p = {p}, t = {t}, eq = ({a11}, {a12}; {a21}, {a22})",
        rep.max_count
    );
}
