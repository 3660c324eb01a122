//! Exact arithmetic in Q(sqrt d).

use kcontact::exactnum::{ratio, Quad};

fn main() {
    let s = Quad::sqrt_d(2);
    let x = &Quad::from_int(3, 2) - &(&s + &s);
    println!("x = {x}, sign {:?}, floor {}, ~{:.6}", x.sign(), x.floor(), x.to_f64());
    let y = &Quad::one(2) / &x;
    println!("1/x = {y}, x * 1/x = {}", &x * &y);
    println!("norm(x) = {}", x.norm());
    println!("x/2 = {}", x.scale(&ratio(1, 2)));
}
