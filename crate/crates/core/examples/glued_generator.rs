//! Builds the generator matrix of a glued lattice from its glue group and
//! checks it against the independent LLL construction.

use lattice_glue::geometry::minimal_vectors;
use lattice_glue::glue::{glued_generator, glued_generator_lll, GlueGroup, GlueWords};
use lattice_glue::io::format_generator;

fn main() -> lattice_glue::Result<()> {
    let words = GlueWords::from_catalog(&["D6", "D6"])?;
    let group = GlueGroup::from_labels(&words, &["g00", "g11", "g23", "g32"])?;
    let glued = glued_generator(&group)?;
    glued.verify()?;

    let l = &glued.result;
    println!("{}: det {:.6} = 16 / {}²", l.label(), l.det_gram(), group.order());
    print!("{}", format_generator(l.basis()));

    let other = glued_generator_lll(&group)?;
    let (m1, k1) = minimal_vectors(l)?;
    let (m2, k2) = minimal_vectors(&other)?;
    println!("HNF route: min norm² {m1:.6}, kissing {k1}");
    println!("LLL route: min norm² {m2:.6}, kissing {k2}, det {:.6}", other.det_gram());
    Ok(())
}
