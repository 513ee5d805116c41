//! Walks the built-in catalog: dimensions, determinants and the reference
//! NSM values, plus a product lattice built on the fly.

use lattice_glue::catalog;

fn main() -> lattice_glue::Result<()> {
    for info in catalog::listing() {
        let nsm = info.known.nsm.map(|k| format!("{} ≈ {:.9}", k.exact, k.value)).unwrap_or_default();
        match (info.dimension, info.det_gram) {
            (Some(n), Some(det)) => println!("{:<10} n={n:<2} det={det:<10.6} {nsm}", info.name),
            _ => println!("{:<10} ({}) {nsm}", info.name, info.description),
        }
    }

    // Products are named by joining factor names with `x`.
    let mixed = catalog::lookup("E6xE6*")?;
    println!(
        "\n{}: n={}, det={:.6}, G={}",
        mixed.name,
        mixed.lattice.dim(),
        mixed.lattice.det_gram(),
        mixed.known.nsm.map(|k| k.exact).unwrap_or_default()
    );
    Ok(())
}
