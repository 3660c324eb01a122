//! Writes the moment cross-section of an example cone as SVG.

use kcontact::cli::svg::render_svg;
use kcontact::construct::example_family;

fn main() -> kcontact::Result<()> {
    let k = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let (cone, r) = example_family(k)?;
    let path = format!("example_k{k}.svg");
    std::fs::write(&path, render_svg(&cone, &r)?).map_err(|e| kcontact::Error::Io(e.to_string()))?;
    println!("wrote {path}");
    Ok(())
}
