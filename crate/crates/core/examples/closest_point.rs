//! Exact closest-point queries and bounded enumeration.

use lattice_glue::catalog;
use lattice_glue::cvp::DecoderContext;

fn main() -> lattice_glue::Result<()> {
    let e6 = catalog::e6();
    let decoder = DecoderContext::new(&e6)?;

    let target = [0.3, -1.2, 0.7, 0.05, 2.4, -0.6];
    let cp = decoder.closest_point(&target)?;
    println!("target  {target:?}");
    println!("nearest {:?}", cp.point.iter().map(|x| (x * 1e6).round() / 1e6).collect::<Vec<_>>());
    println!("coords  {:?}, distance² {:.6}", cp.coords, cp.dist2);

    // A deep hole of E6 sits at squared distance 4/3 from the lattice.
    let s = 3f64.sqrt() / 6.0;
    let hole = [0.5, 0.5, 0.5, 0.5, 0.5, -s];
    let ties = decoder.enumerate_within(&hole, 4.0 / 3.0 + 1e-9)?;
    println!("\n{} lattice points are equidistant from the deep hole", ties.len());

    // The minimal vectors of E6 have norm 2.
    let shell = decoder.enumerate_within(&[0.0; 6], 2.0 + 1e-9)?;
    println!("{} points within norm² 2 of the origin (origin + 72 roots)", shell.len());
    Ok(())
}
