//! Causal cone on the Minkowski plane times M2(C): fields, clocks and functional calculus.

use nc_causal::causal_cone::{
    field_in_cone, find_clock_phenomenon, monotone_instability_search, AnalyticFamily,
    FiniteDirac, Grid, MatrixField,
};
use nc_causal::hermitian::HermMat;

fn main() -> nc_causal::Result<()> {
    let d = FiniteDirac::new(0.0, 1.0);
    let grid = Grid::square(1.0, 9)?;
    for off in [0.4, 0.5, 0.6] {
        let a = HermMat::from_real_rows(&[&[0.0, off], &[off, 1.0]])?;
        let f = MatrixField::analytic(grid, AnalyticFamily::TimePlusConstant { a })?;
        let check = field_in_cone(&f, &d, 1e-9)?;
        println!("t + A with A₀₁ = {off}: in cone {}, margin {:.4}", check.in_cone, check.worst_margin);
        if let Some(clock) = find_clock_phenomenon(&f, &d, 1)? {
            println!(
                "  nodes {:?} ≤ {:?}: λ(x) = {:?}, λ(y) = {:?}",
                clock.x, clock.y, clock.lambda_x, clock.lambda_y
            );
        }
    }

    let sampled = MatrixField::from_fn(grid, |u, v| HermMat::from_real_diag(&[u, u + v]))?;
    println!("sampled diag(u, u + v) in cone: {}", field_in_cone(&sampled, &d, 1e-9)?.in_cone);

    if let Some(w) = monotone_instability_search(500, 2)? {
        println!(
            "monotone φ with φ(t + A) outside the cone, first failure at {:?}",
            w.composed_check.first_failure
        );
    }
    Ok(())
}
