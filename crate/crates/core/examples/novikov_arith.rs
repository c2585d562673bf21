//! Novikov-field scalars: exact arithmetic with big-O precision tracking.
use orbijac::{q, qr, NovikovScalar};

fn main() -> orbijac::Result<()> {
    let a = NovikovScalar::from_terms([(q(0), q(1)), (q(3), qr(1, 2))], Some(q(20)));
    let b = NovikovScalar::monomial(q(2), qr(-5, 2));
    println!("a       = {a}");
    println!("b       = {b}");
    println!("a + b   = {}", a.add(&b));
    // multiplying by T^(-5/2) shifts the absolute precision down
    println!("a * b   = {}", a.mul(&b));
    let inv = a.invert()?;
    println!("1/a     = {inv}");
    println!("a * 1/a = {}", a.mul(&inv));
    Ok(())
}
