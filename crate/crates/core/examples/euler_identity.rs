//! Seifert Euler numbers at the extreme level sets and the critical jumps
//! between them.

use kcontact::construct::example_family;
use kcontact::euler::{euler_lens, euler_s3, verify_global_identity};
use kcontact::exactnum::int;
use kcontact::reeb::choose_transverse_circle;

fn main() -> kcontact::Result<()> {
    println!("e(S^3; 1, 1) = {}", euler_s3(&int(1), &int(1))?);
    println!("e(S^3; 2, 3) = {}", euler_s3(&int(2), &int(3))?);
    println!("e(L(2,1); 1, 1) = {}", euler_lens(&int(2), &int(1), &int(1), &int(1))?);
    for k in 2..=5 {
        let (cone, r) = example_family(k)?;
        let y = choose_transverse_circle(&cone, &r, 32)?;
        let rep = verify_global_identity(&cone, &r, &y)?;
        println!("k = {k}, Y = {y}: e_max - e_min = {} = {} ({})", rep.lhs, rep.rhs, if rep.ok { "ok" } else { "FAIL" });
        for c in rep.per_chain.iter().filter(|c| c.faces.len() > 1) {
            println!("  chain over faces {:?}: sum = {}, d = {}", c.faces, c.sum, c.d);
        }
    }
    Ok(())
}
