//! Penrose compactification and the Λ-deformed causal order.

use nc_causal::minkowski::{
    causal_leq, lambda_closedness_probe, lambda_leq, lorentz_distance, penrose_map, Event, Lambda,
};

fn main() -> nc_causal::Result<()> {
    let origin = Event::new(0.0, 0.0);
    let a = penrose_map(&origin);
    for (t, x) in [(1.0, 0.0), (1.0, 0.9), (3.0, 2.0), (0.2, 0.1)] {
        let e = Event::new(t, x);
        let p = penrose_map(&e);
        let verdicts: Vec<bool> = [0.0, 0.3, 1.0]
            .iter()
            .map(|&l| lambda_leq(&a, &p, Lambda::new(l).unwrap()))
            .collect();
        println!(
            "({t}, {x}) -> ({:.3}, {:.3}): causal {}, ℓ = {:.3}, Λ ∈ {{0, 0.3, 1}}: {verdicts:?}",
            p.mu,
            p.nu,
            causal_leq(&origin, &e),
            lorentz_distance(&origin, &e)
        );
    }
    let radius = lambda_closedness_probe(&a, Lambda::new(0.5)?)?;
    println!("the Λ = 0.5 future of the origin avoids a Penrose disc of radius {radius:.6}");
    Ok(())
}
