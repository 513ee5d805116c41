//! Writes a generator matrix to the text format, reads it back, and shows
//! how malformed input is reported.

use lattice_glue::catalog;
use lattice_glue::io::{parse_generator, read_lattice, write_lattice};

fn main() -> lattice_glue::Result<()> {
    let dir = std::env::temp_dir().join("latglue-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("GluedE6E6.txt");

    let original = catalog::glued_e6e6();
    write_lattice(&path, &original)?;
    let back = read_lattice(&path)?;
    println!("wrote and re-read {}", path.display());
    println!("label {}, dim {}, gram difference {:.2e}", back.label(), back.dim(), back.gram().max_abs_diff(original.gram()));

    match parse_generator("2 2\n1 0\n0 x\n") {
        Ok(_) => println!("unexpectedly parsed"),
        Err(e) => println!("malformed input: {} ({e})", e.code()),
    }
    Ok(())
}
