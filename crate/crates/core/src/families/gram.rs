//! Floating-point eigenvalue bounds for the Gram matrix of a finite system of
//! translates. Advisory only: nothing exact depends on it.

use nalgebra::DMatrix;

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::padic::enumerate_ip;
use crate::stepfn::StepFunction;

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    /// Number of functions, i.e. the Gram dimension.
    pub size: usize,
    pub min: f64,
    pub max: f64,
    pub eigenvalues: Vec<f64>,
}

/// Gram matrix of {f(· − a) : f ∈ functions, a ∈ I_p, |a| ≤ p^γmax}.
pub fn gram_spectrum_estimate(functions: &[StepFunction], gamma_max: u32) -> Result<SpectrumReport> {
    let p = match functions.first() {
        Some(f) => f.p(),
        None => return Err(Error::InvalidInput("no functions".into())),
    };
    let mut system = Vec::new();
    for f in functions {
        for a in enumerate_ip(p, gamma_max) {
            system.push(f.translate(&a));
        }
    }
    let n = system.len();
    let mut g = vec![CycNumber::zero(); n * n];
    for i in 0..n {
        for j in i..n {
            let v = system[i].inner_product(&system[j])?;
            g[j * n + i] = v.conj();
            g[i * n + j] = v;
        }
    }
    // Hermitian A + iB ↦ [[A, −B], [B, A]]; each eigenvalue appears twice.
    let z: Vec<_> = g.iter().map(|v| v.to_complex()).collect();
    let big = DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let v = z[(r % n) * n + (c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => v.re,
            (true, false) => -v.im,
            (false, true) => v.im,
        }
    });
    let mut ev: Vec<f64> = big.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    let eigenvalues: Vec<f64> = ev.chunks(2).map(|c| c[0]).collect();
    Ok(SpectrumReport {
        size: n,
        min: eigenvalues[0],
        max: *eigenvalues.last().unwrap(),
        eigenvalues,
    })
}
