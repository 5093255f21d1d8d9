//! Cap isocone on M2(C): membership and the induced order on the Bloch sphere.

use nc_causal::isocone::{cap_induced_order, cap_membership, BlochState, CapIsocone};
use nc_causal::hermitian::HermMat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> nc_causal::Result<()> {
    let cone = CapIsocone::cap([0.0, 0.0, 1.0], 0.6)?;
    for v in [[0.0, 0.0, 1.0], [0.5, 0.0, 1.0], [1.0, 0.0, 0.2]] {
        let a = HermMat::from_bloch(0.0, v);
        println!("{v:?}·σ in cone: {}", cap_membership(&cone, &a)?);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (low, high) = cone.random_related_pair(&mut rng);
    println!("{:?} ≼ {:?}: {}", low.bloch(), high.bloch(), cap_induced_order(&cone, &low, &high));
    println!("reverse: {}", cap_induced_order(&cone, &high, &low));

    let equator = BlochState::new([1.0, 0.0, 0.0])?;
    let tilted = BlochState::new([0.0, 0.6, 0.8])?;
    let w = cone.most_violating_point([-1.0, 0.6, 0.8]);
    println!("equator ≼ tilted: {}, violating cap point {w:?}", cap_induced_order(&cone, &equator, &tilted));
    Ok(())
}
