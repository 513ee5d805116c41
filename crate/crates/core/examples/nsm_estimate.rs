//! Monte Carlo estimate of the normalized second moment of a catalog
//! lattice, compared against its exact value.
//!
//!     cargo run --release --example nsm_estimate -- GluedD6D6 1000000

use std::time::Instant;

use lattice_glue::catalog;
use lattice_glue::nsm::estimate_nsm;

fn main() -> lattice_glue::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "GluedE6E6".into());
    let samples: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1_000_000);

    let entry = catalog::lookup(&name)?;
    let start = Instant::now();
    let est = estimate_nsm(&entry.lattice, samples, 1, 4)?;
    println!("{name}: {} from {samples} samples ({:.1?})", est.display(), start.elapsed());
    if let Some(known) = entry.known.nsm {
        let z = (est.g_hat - known.value) / est.sigma_hat;
        println!("exact {} = {:.9}, deviation {z:+.2} sigma", known.exact, known.value);
    }
    Ok(())
}
