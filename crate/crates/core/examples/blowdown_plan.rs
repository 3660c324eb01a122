//! Collapse the nontrivial chain of an example cone to one face, then cut that
//! face so it meets Lie(G) with multiplicity one.

use kcontact::construct::example_family;
use kcontact::exactnum::int;
use kcontact::reeb::{isotropy_profile, lie_g_normal};
use kcontact::surgery::{find_blowdown_normal, plan_blowdown_sequence, replace_range};

fn main() -> kcontact::Result<()> {
    let k = 4;
    let (cone, r) = example_family(k)?;
    let plan = plan_blowdown_sequence(&cone, &[0, k as usize + 1, k as usize + 2], 64)?;
    println!("{}", serde_json::to_string_pretty(&plan.to_json()).unwrap());
    let reduced = plan.replay(&cone)?;
    println!("reduced: {reduced}");
    let v0 = lie_g_normal(&r)?;
    if let Some(t) = find_blowdown_normal(&reduced, 1, Some((v0, int(1))), 16)? {
        let last = replace_range(&reduced, 1, 1, &t)?;
        println!("face 1 -> {t}: {last}, k-values {:?}", isotropy_profile(&last, &r)?.k);
    }
    Ok(())
}
