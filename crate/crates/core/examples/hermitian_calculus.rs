//! Spectra, Bloch coordinates and monotone functional calculus on small Hermitian matrices.

use nc_causal::hermitian::{apply_monotone, eigenvalues, is_psd, HermMat, MonotoneFn};

fn main() -> nc_causal::Result<()> {
    let a = HermMat::from_bloch(0.5, [0.3, -0.4, 1.2]);
    let (s, v) = a.bloch_decompose()?;
    println!("a = {s} I + {v:?}·σ, spectrum {:?}", eigenvalues(&a)?);

    let phi = MonotoneFn::new(vec![-1.0, 0.0, 1.0], vec![0.0, 0.0, 2.0])?;
    let b = apply_monotone(&a, &phi)?;
    println!("φ(a) spectrum {:?}", eigenvalues(&b)?);
    println!("φ(a) is PSD since φ ≥ 0: {}", is_psd(&b, 1e-12));
    Ok(())
}
