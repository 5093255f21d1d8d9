//! Future sets of the two panels, drawn as text on a coarse grid.

use nc_causal::causal_cone::FiniteDirac;
use nc_causal::figure::{fig1_causal_cone, fig1_isocone, CellStatus, FigureSetup, FutureSetGrid};
use nc_causal::isocone::{BlochState, CapIsocone};
use nc_causal::minkowski::{penrose_map, Event, Lambda};

fn draw(title: &str, grid: &FutureSetGrid) {
    println!("{title}");
    let n = grid.resolution;
    for j in (0..n).rev() {
        let row: String = (0..n)
            .map(|i| match grid.status(i, j) {
                CellStatus::Grey => '#',
                CellStatus::White => '.',
                CellStatus::Base => 'a',
            })
            .collect();
        println!("  {row}");
    }
}

fn main() -> nc_causal::Result<()> {
    let setup = FigureSetup {
        a: penrose_map(&Event::new(0.0, 0.0)),
        p: BlochState::new([1.0, 0.0, 0.0])?,
        dirac: FiniteDirac::new(0.0, 1.0),
        cap: CapIsocone::cap([0.0, 0.0, 1.0], std::f64::consts::FRAC_PI_4)?,
        lambda: Lambda::new(0.5)?,
        resolution: 24,
        cap_samples: 100,
    };
    draw("causal cone (μ right, ν up)", &fig1_causal_cone(&setup)?);
    draw("isocone, Λ = 0.5", &fig1_isocone(&setup)?);
    Ok(())
}
