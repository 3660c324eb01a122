//! Isotropy graphs, their canonical labels and a fiber sum of chain germs.

use kcontact::construct::example_family;
use kcontact::exactnum::v3;
use kcontact::graph::{assemble_fiber_sum, canonical_form, count_nontrivial_chains, extract_graph, GermOfChain, LensBundle};

fn main() -> kcontact::Result<()> {
    let (cone, r) = example_family(3)?;
    let g = extract_graph(&cone, &r)?;
    println!("{}", serde_json::to_string_pretty(&g.to_json()).unwrap());
    println!("canonical: {}", canonical_form(&g));

    let (first, last) = (v3(1, 0, 1), v3(1, 3, 7));
    let bundle = LensBundle { reeb: kcontact::ReebVector::from_ints(&first, &last, 2)?, first: first.clone(), last: last.clone() };
    let germ = GermOfChain { normals: vec![first, v3(1, 1, 1), v3(1, 2, 3), last] };
    let sum = assemble_fiber_sum(&bundle, &[germ.clone(), germ])?;
    println!("fiber sum of two germs: {} vertices, {} nontrivial chains", sum.vertices.len(), count_nontrivial_chains(&sum));
    Ok(())
}
