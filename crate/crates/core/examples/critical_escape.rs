//! Critical points of the bulk-deformed (2,2,r) potential and their valuations.
use orbijac::critical::{default_ck, escape_check};
use orbijac::{parse_q, q};

fn main() -> orbijac::Result<()> {
    let mut args = std::env::args().skip(1);
    let r: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);
    let lambda = parse_q(&args.next().unwrap_or_else(|| "1".into()))?;
    let t = std::time::Instant::now();
    let rep = escape_check(r, &lambda, &default_ck(r), &q(150))?;
    for p in &rep.points {
        let v: Vec<String> = p.coordinate_valuations.iter().map(|v| v.as_ref().map_or("inf".into(), |v| v.to_string())).collect();
        println!("{:<13} points={} val(x,y,z)=({}) residual>={}", p.branch.name(), p.degree(), v.join(", "), p.residual_valuation.as_ref().map_or("inf".into(), |r| r.to_string()));
    }
    println!("count {} (expected {}), all escaped: {}, pass: {}", rep.count(), rep.expected_count, rep.all_escaped(), rep.pass());
    eprintln!("elapsed {:?}", t.elapsed());
    Ok(())
}
