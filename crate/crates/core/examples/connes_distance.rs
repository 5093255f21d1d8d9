//! Connes distance between pure states of M2(C) for a diagonal finite Dirac operator.

use std::f64::consts::PI;

use nc_causal::causal_cone::{connes_distance, FiniteDirac};
use nc_causal::isocone::BlochState;

fn main() -> nc_causal::Result<()> {
    let d = FiniteDirac::new(0.0, 2.0);
    let p = BlochState::from_angles(PI / 3.0, 0.0);
    println!("gap {}", d.gap());
    println!("{:>8} {:>10} {:>10}", "Δφ", "d_NC", "geodesic");
    for k in 0..=6 {
        let q = BlochState::from_angles(PI / 3.0, PI * k as f64 / 6.0);
        let dist = connes_distance(&d, &p, &q)?.finite().expect("same latitude");
        println!("{:>8.4} {:>10.6} {:>10.6}", PI * k as f64 / 6.0, dist, p.geodesic(&q));
    }
    let north = BlochState::north();
    println!("different latitude: {:?}", connes_distance(&d, &p, &north)?);
    Ok(())
}
