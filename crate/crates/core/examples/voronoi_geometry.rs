//! Facets, kissing numbers, packing density and thickness of the two
//! glued 12-dimensional lattices.

use lattice_glue::catalog;
use lattice_glue::geometry::{coset_shell_count_ambient, voronoi_summary};

fn main() -> lattice_glue::Result<()> {
    for name in ["E6", "D6", "GluedE6E6", "GluedD6D6"] {
        let e = catalog::lookup(name)?;
        let asserted = e.known.covering_radius.as_ref().map(|k| k.value);
        let s = voronoi_summary(&e.lattice, asserted, 100_000, 1)?;
        print!(
            "{name:<10} facets {:>5}  kissing {:>4}  density {:.5}  covering {:.6}",
            s.relevant_count, s.kissing, s.packing_density, s.covering_radius_bound
        );
        match s.thickness {
            Some(t) => println!("  thickness {t:.4}"),
            None => println!(" (sampled)"),
        }
    }

    // Shell of the E6 coset g1 + E6 at norm 4/3: the 27 nearest glue vectors.
    let s = 3f64.sqrt() / 6.0;
    let g1 = [-0.5, -0.5, -0.5, -0.5, -0.5, s];
    println!("\n|g1 + E6| at norm 4/3: {}", coset_shell_count_ambient(&catalog::e6(), &g1, 4.0 / 3.0)?);
    Ok(())
}
