//! Future sets of a base state `(a, p)` over the Penrose square, one Bloch sphere per cell.
//!
//! Two panels are produced: the causal cone of the product spectral triple, where only
//! states on `p`'s latitude can lie above `(a, p)`, and a lexicographic-type isocone whose
//! base sphere carries the cap order `p + K°` and whose Λ-future spheres are entirely above.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::causal_cone::{product_state_order, FiniteDirac};
use crate::error::{Error, Result};
use crate::isocone::{cap_induced_order, BlochState, CapIsocone};
use crate::minkowski::{lambda_leq, lorentz_distance, penrose_inverse, Event, Lambda, PenrosePoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CellStatus {
    Grey,
    White,
    Base,
}

impl CellStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CellStatus::Grey => "GREY",
            CellStatus::White => "WHITE",
            CellStatus::Base => "BASE",
        }
    }

    pub fn gray_level(&self) -> u8 {
        match self {
            CellStatus::Grey => 128,
            CellStatus::White => 255,
            CellStatus::Base => 0,
        }
    }
}

/// Centre of cell `i` of an `n`-cell partition of `[−π, π]`.
pub fn cell_center(i: usize, n: usize) -> f64 {
    -PI + (i as f64 + 0.5) * 2.0 * PI / n as f64
}

/// Cell of an `n`-cell partition containing `t`.
pub fn cell_of(t: f64, n: usize) -> usize {
    let k = ((t + PI) / (2.0 * PI / n as f64)).floor();
    (k.max(0.0) as usize).min(n - 1)
}

/// Status per cell; `cells[i·n + j]` is the cell at `(μ_i, ν_j)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FutureSetGrid {
    pub resolution: usize,
    pub base: (usize, usize),
    pub cells: Vec<CellStatus>,
}

impl FutureSetGrid {
    pub fn status(&self, i: usize, j: usize) -> CellStatus {
        self.cells[i * self.resolution + j]
    }

    pub fn center(&self, i: usize, j: usize) -> PenrosePoint {
        PenrosePoint {
            mu: cell_center(i, self.resolution),
            nu: cell_center(j, self.resolution),
        }
    }

    /// CSV with header `mu,nu,status`, μ-major.
    pub fn to_csv(&self) -> String {
        let n = self.resolution;
        let mut out = String::from("mu,nu,status\n");
        for i in 0..n {
            for j in 0..n {
                out.push_str(&format!(
                    "{},{},{}\n",
                    cell_center(i, n),
                    cell_center(j, n),
                    self.status(i, j).label()
                ));
            }
        }
        out
    }

    /// Plain PGM: ν decreases down the rows, μ increases along them.
    pub fn to_pgm(&self) -> String {
        let n = self.resolution;
        let mut out = format!("P2\n{n} {n}\n255\n");
        for row in 0..n {
            let j = n - 1 - row;
            let line: Vec<String> = (0..n)
                .map(|i| self.status(i, j).gray_level().to_string())
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn count(&self, status: CellStatus) -> usize {
        self.cells.iter().filter(|&&s| s == status).count()
    }
}

/// Description of the states above `(a, p)` in one cell's sphere.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SphereAnnotation {
    Empty,
    /// Only `p` itself.
    Point { bloch: BlochState },
    /// States on `p`'s latitude within `half_width` (azimuth) of `p`.
    Arc {
        latitude_z: f64,
        center_azimuth: f64,
        half_width: f64,
        full_circle: bool,
        lorentz: f64,
    },
    /// `{q : n_q − n_p ∈ K°}`, with a sample of sphere points and their verdicts.
    Cap {
        apex: BlochState,
        axis: [f64; 3],
        half_angle: f64,
        samples: Vec<CapSample>,
    },
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapSample {
    pub bloch: [f64; 3],
    pub above: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellAnnotation {
    pub cell: (usize, usize),
    pub mu: f64,
    pub nu: f64,
    pub status: CellStatus,
    pub sphere: SphereAnnotation,
}

/// Inputs shared by both panels.
#[derive(Clone, Debug)]
pub struct FigureSetup {
    pub a: PenrosePoint,
    pub p: BlochState,
    pub dirac: FiniteDirac,
    pub cap: CapIsocone,
    pub lambda: Lambda,
    pub resolution: usize,
    pub cap_samples: usize,
}

impl FigureSetup {
    fn base_event(&self) -> Result<Event> {
        if self.a.is_boundary() {
            return Err(Error::Domain("the base point must be interior".into()));
        }
        penrose_inverse(&self.a)
    }

    fn base_cell(&self) -> (usize, usize) {
        (
            cell_of(self.a.mu, self.resolution),
            cell_of(self.a.nu, self.resolution),
        )
    }

    fn sweep(&self, grey: impl Fn(&PenrosePoint) -> Result<bool> + Sync) -> Result<FutureSetGrid> {
        if self.resolution == 0 {
            return Err(Error::Domain("resolution must be positive".into()));
        }
        let n = self.resolution;
        let base = self.base_cell();
        let cells = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / n, idx % n);
                if (i, j) == base {
                    return Ok(CellStatus::Base);
                }
                let b = PenrosePoint {
                    mu: cell_center(i, n),
                    nu: cell_center(j, n),
                };
                Ok(if grey(&b)? {
                    CellStatus::Grey
                } else {
                    CellStatus::White
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FutureSetGrid {
            resolution: n,
            base,
            cells,
        })
    }

    /// Event of a cell: `a` itself for the base cell, the cell centre otherwise.
    fn cell_event(&self, grid: &FutureSetGrid, cell: (usize, usize)) -> Result<Event> {
        if cell == grid.base {
            self.base_event()
        } else {
            penrose_inverse(&grid.center(cell.0, cell.1))
        }
    }
}

/// Causal-cone panel: a cell is grey iff its centre is in the causal future of `a`
/// (then `q = p` is above `(a, p)`).
pub fn fig1_causal_cone(setup: &FigureSetup) -> Result<FutureSetGrid> {
    let a = setup.base_event()?;
    setup.sweep(|b| {
        let b = penrose_inverse(b)?;
        product_state_order(&setup.dirac, &a, &setup.p, &b, &setup.p)
    })
}

/// Isocone panel: grey iff the centre is strictly Λ-above `a`.
pub fn fig1_isocone(setup: &FigureSetup) -> Result<FutureSetGrid> {
    setup.base_event()?;
    setup.sweep(|b| Ok(*b != setup.a && lambda_leq(&setup.a, b, setup.lambda)))
}

/// Arc of `p`'s latitude lying above `(a, p)` in the sphere over `b`.
pub fn causal_cone_annotation(setup: &FigureSetup, b: &Event) -> Result<SphereAnnotation> {
    let a = setup.base_event()?;
    let p = setup.p;
    if !product_state_order(&setup.dirac, &a, &p, b, &p)? {
        return Ok(SphereAnnotation::Empty);
    }
    let n = p.bloch();
    let r = n[0].hypot(n[1]);
    if r < 1e-12 || a == *b {
        return Ok(SphereAnnotation::Point { bloch: p });
    }
    let phi0 = p.azimuth();
    let rotated = |dphi: f64| {
        BlochState::new([r * (phi0 + dphi).cos(), r * (phi0 + dphi).sin(), n[2]])
    };
    let above = |dphi: f64| -> Result<bool> {
        product_state_order(&setup.dirac, &a, &p, b, &rotated(dphi)?)
    };
    let lorentz = lorentz_distance(&a, b);
    if above(PI)? {
        return Ok(SphereAnnotation::Arc {
            latitude_z: n[2],
            center_azimuth: phi0,
            half_width: PI,
            full_circle: true,
            lorentz,
        });
    }
    let (mut lo, mut hi) = (0.0, PI);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if above(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(SphereAnnotation::Arc {
        latitude_z: n[2],
        center_azimuth: phi0,
        half_width: lo,
        full_circle: false,
        lorentz,
    })
}

/// Points of a Fibonacci lattice on the unit sphere.
pub fn fibonacci_sphere(count: usize) -> Vec<[f64; 3]> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// States above `(a, p)` in the sphere over `b`, for the isocone panel.
pub fn isocone_annotation(setup: &FigureSetup, b: &PenrosePoint) -> Result<SphereAnnotation> {
    if *b == setup.a {
        let CapIsocone::Cap { axis, rho } = setup.cap else {
            return Ok(SphereAnnotation::Point { bloch: setup.p });
        };
        let samples = fibonacci_sphere(setup.cap_samples)
            .into_iter()
            .map(|q| {
                let above = cap_induced_order(&setup.cap, &setup.p, &BlochState::new(q)?);
                Ok(CapSample { bloch: q, above })
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(SphereAnnotation::Cap {
            apex: setup.p,
            axis,
            half_angle: FRAC_PI_2 - rho,
            samples,
        });
    }
    Ok(if lambda_leq(&setup.a, b, setup.lambda) {
        SphereAnnotation::Full
    } else {
        SphereAnnotation::Empty
    })
}

/// Annotations for the requested cells of a causal-cone grid.
pub fn annotate_causal_cone(
    setup: &FigureSetup,
    grid: &FutureSetGrid,
    cells: &[(usize, usize)],
) -> Result<Vec<CellAnnotation>> {
    cells
        .iter()
        .map(|&cell| {
            let b = setup.cell_event(grid, cell)?;
            Ok(CellAnnotation {
                cell,
                mu: cell_center(cell.0, grid.resolution),
                nu: cell_center(cell.1, grid.resolution),
                status: grid.status(cell.0, cell.1),
                sphere: causal_cone_annotation(setup, &b)?,
            })
        })
        .collect()
}

/// Annotations for the requested cells of an isocone grid.
pub fn annotate_isocone(
    setup: &FigureSetup,
    grid: &FutureSetGrid,
    cells: &[(usize, usize)],
) -> Result<Vec<CellAnnotation>> {
    cells
        .iter()
        .map(|&cell| {
            let b = if cell == grid.base {
                setup.a
            } else {
                grid.center(cell.0, cell.1)
            };
            Ok(CellAnnotation {
                cell,
                mu: cell_center(cell.0, grid.resolution),
                nu: cell_center(cell.1, grid.resolution),
                status: grid.status(cell.0, cell.1),
                sphere: isocone_annotation(setup, &b)?,
            })
        })
        .collect()
}

/// Base cell plus cells along the time axis through it and one cell to its right.
pub fn default_annotated_cells(grid: &FutureSetGrid) -> Vec<(usize, usize)> {
    let n = grid.resolution;
    let (bi, bj) = grid.base;
    let mut cells = vec![(bi, bj)];
    let mut k = 1;
    while bi + k < n && bj + k < n {
        cells.push((bi + k, bj + k));
        k *= 2;
    }
    if bi + 1 < n {
        cells.push((bi + 1, bj));
    }
    if bi >= 1 && bj + 1 < n {
        cells.push((bi - 1, bj + 1));
    }
    cells
}
