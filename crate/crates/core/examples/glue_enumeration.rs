//! Enumerates the glue groups of E6×E6 and D6×D6 and reduces them by
//! symmetry, reproducing the 6 and 67 → 22 → 12 counts.

use lattice_glue::glue::{
    d6xd6_symmetries, enumerate_glue_groups, e6xe6_symmetries, is_product_group, symmetry_classes, GlueWords,
};

fn main() -> lattice_glue::Result<()> {
    let e = GlueWords::from_catalog(&["E6", "E6"])?;
    let groups = enumerate_glue_groups(&e);
    println!("E6xE6: {} glue words, {} groups", e.len(), groups.len());
    for g in &groups {
        let kind = if is_product_group(g) { "product" } else { "glued" };
        println!("  {:<24} order {}  {kind}", g.display_labels(), g.order());
    }
    let classes = symmetry_classes(&groups, &e6xe6_symmetries(&e)?)?;
    println!("  {} inequivalent lattices", classes.len());

    let d = GlueWords::from_catalog(&["D6", "D6"])?;
    let groups = enumerate_glue_groups(&d);
    let classes = symmetry_classes(&groups, &d6xd6_symmetries(&d)?)?;
    let nonproduct: Vec<_> = classes.iter().filter(|c| !is_product_group(&c.representative)).collect();
    println!("\nD6xD6: {} groups, {} up to symmetry, {} nonproduct", groups.len(), classes.len(), nonproduct.len());
    for c in nonproduct {
        println!("  {:<36} ({} equivalent)", c.representative.display_labels(), c.members.len());
    }
    Ok(())
}
