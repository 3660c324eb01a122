//! Chains of lens-space faces with no orbit blow-down, built step by step and
//! closed by a last normal.

use kcontact::construct::{construction_violations, obstructed_family};

fn main() -> kcontact::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    for k in 2..=8 {
        let o = obstructed_family(k, seed)?;
        let v = construction_violations(&o.cone, k as usize);
        println!("k = {k}: {} normals, violations {v:?}", o.cone.len());
        for (s, st) in o.steps.iter().enumerate() {
            println!("  step {}: a = {}, c = {}, e = {}", s + 1, st.a, st.c, st.e);
        }
        println!("  closing normal {}", o.cone.normals().last().unwrap());
    }
    Ok(())
}
