//! A point outside the domain whose images under every projection lie inside.

use gammalab::interplay::counterexample_demo;

fn main() {
    let r = counterexample_demo();
    println!("source {:?}  {}", r.source, r.source_class.label);
    println!(
        "c(x) = {:?}  in closure: {}",
        r.canonical_c, r.canonical_c_in_closure
    );
    println!(
        "{} ω samples, {} exterior images",
        r.omega_samples, r.images_exterior
    );
    for row in [&r.omega_one, &r.omega_minus_one] {
        println!(
            "ω = {:?}: {:?} {} (slack {:+.3e})",
            row.omega, row.p, row.label, row.ay_slack
        );
    }
}
