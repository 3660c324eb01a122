//! When can two fat vertices be joined through a single regular vertex?

use kcontact::exactnum::v2;
use kcontact::graph::toric_condition_check;

fn main() -> kcontact::Result<()> {
    for (a, b) in [((1, 0), (-1, 1)), ((1, 0), (1, 3)), ((2, 1), (-1, 2)), ((1, 1), (1, -1))] {
        let v = toric_condition_check(&v2(a.0, a.1), &v2(b.0, b.1))?;
        match v {
            Some(v) => println!("{a:?}, {b:?}: v = ({}, {})", v.0[0], v.0[1]),
            None => println!("{a:?}, {b:?}: none"),
        }
    }
    Ok(())
}
