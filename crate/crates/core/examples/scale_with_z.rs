//! Best product of a 12-dimensional lattice with a scaled integer line:
//! the optimal `a` in `L × aℤ` and the resulting 13-dimensional NSM.

use lattice_glue::catalog;
use lattice_glue::nsm::optimize_scale_with_z;

fn main() -> lattice_glue::Result<()> {
    let k12_volume = 729f64.sqrt(); // det 729 in the usual scaling
    let candidates = [
        ("GluedD6D6", catalog::glued_d6d6_nsm(), catalog::glued_d6d6().volume()),
        ("GluedE6E6", catalog::glued_e6e6_nsm(), catalog::glued_e6e6().volume()),
        ("K12", catalog::k12_nsm(), k12_volume),
    ];
    for (name, g, v) in candidates {
        let opt = optimize_scale_with_z(12, g, v)?;
        println!(
            "{name:<10} G12 = {g:.9}  a = {:.6}  G13 = {:.6}  (search: a = {:.6})",
            opt.a, opt.combined_nsm, opt.search_a
        );
    }
    Ok(())
}
