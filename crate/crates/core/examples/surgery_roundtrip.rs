//! Corner cuts and lens cuts on random good cones, undone by deletion and
//! replacement.

use rand::rngs::StdRng;
use rand::SeedableRng;

use kcontact::corpus::{lens_blowup_pair, random_good_cone, random_orbit_blowup};
use kcontact::surgery::{blowdown_delete, cut, replace_range};

fn main() -> kcontact::Result<()> {
    let mut rng = StdRng::seed_from_u64(1);
    let cone = random_good_cone(&mut rng, 2);
    println!("start      {cone}");
    if let Some((big, i, t)) = random_orbit_blowup(&mut rng, &cone) {
        println!("cut by {t}: {big} (new face {i})");
        println!("delete {i}:  {}", blowdown_delete(&big, i)?);
    }
    if let Some((big, i, n)) = lens_blowup_pair(&mut rng, &cone) {
        let r = cut(&big, &n)?;
        println!("larger     {big}");
        println!("cut by {n}: {:?} -> {}", r.kind, r.cone);
        println!("replace {i}: {}", replace_range(&r.cone, i, i, &big.normals()[i])?);
    }
    Ok(())
}
