//! Cutting vector fields for a blow-up along a minimal closed orbit.

use kcontact::exactnum::{int, ratio, Quad};
use kcontact::surgery::{can_blowdown_by_multiplicities, solve_local_blowup};

fn main() -> kcontact::Result<()> {
    let (l0, l1) = (Quad::one(2), Quad::sqrt_d(2));
    for (m1, m2, bound) in [(1, 1, 1), (2, 3, 5), (3, 5, 2)] {
        let s = solve_local_blowup(&l0, &l1, &int(m1), &int(m2), &ratio(bound, 1), 10_000)?;
        println!("m = ({m1}, {m2}), bound {bound}: {}", s.to_json());
    }
    println!("(1, 2, 1) blows down: {}", can_blowdown_by_multiplicities(&int(1), &int(2), &int(1), true, false));
    Ok(())
}
