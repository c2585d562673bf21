//! Tate-algebra series: products, partials, substitution and the tilde frame.
use orbijac::{q, NovikovScalar, TateSeries, Var};

fn main() -> orbijac::Result<()> {
    let xyz = TateSeries::mono(-1, -8, [1, 1, 1]);
    let w = xyz.add(&TateSeries::mono(1, 0, [3, 0, 0])).add(&TateSeries::mono(1, 0, [0, 3, 0])).add(&TateSeries::mono(1, 0, [0, 0, 3]));
    println!("W        = {w}");
    for v in Var::ALL {
        println!("d{}W      = {}", format!("{v:?}").to_lowercase(), w.partial(v));
    }
    println!("T dW/dT  = {}", w.t_derivative());
    println!("tilde    = {}", w.to_tilde());
    let shift = TateSeries::var(Var::X).add(&TateSeries::scalar(NovikovScalar::monomial(q(1), q(4))));
    let moved = w.substitute([&shift, &TateSeries::var(Var::Y), &TateSeries::var(Var::Z)])?;
    println!("W(x+T^4) = {moved}");
    Ok(())
}
