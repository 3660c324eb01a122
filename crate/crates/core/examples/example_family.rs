//! The explicit family: k faces of type RP^3 with trivial normal bundle, none
//! of which blows down to a closed orbit.

use kcontact::construct::example_family;
use kcontact::reeb::isotropy_profile;

fn main() -> kcontact::Result<()> {
    for k in 2..=6 {
        let (cone, r) = example_family(k)?;
        let prof = isotropy_profile(&cone, &r)?;
        println!("k = {k}: {cone}");
        for i in 1..=k as isize {
            let fi = cone.face_invariants(i)?;
            println!("  face {i}: (b, f) = ({}, {}), blows down: {}", fi.b, fi.f, cone.can_blowdown_to_orbit(i)?);
        }
        println!("  flats {:?}, k-values {:?}", prof.flats, prof.k.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    }
    Ok(())
}
