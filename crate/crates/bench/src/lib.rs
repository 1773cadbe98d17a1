//! Fixtures shared by the criterion benchmarks.

use orthkit_core::multilinear::random_map;
use orthkit_core::{Field, MultilinearMap, C64};

/// Complex `n x n` matrix with top singular value of multiplicity two, so
/// that the numerical-range route is exercised.
pub fn tied_complex(n: usize, seed: u64) -> MultilinearMap {
    let base = random_map(n, &[n], Field::Complex, seed).expect("valid shape");
    let mut coeffs = vec![C64::new(0.0, 0.0); n * n];
    for (i, c) in coeffs.iter_mut().enumerate() {
        let (r, col) = (i / n, i % n);
        if r == col {
            *c = C64::new(if r < 2 { 2.0 } else { 1.0 / (r + 1) as f64 }, 0.0);
        }
    }
    // perturb only the block acting below the tied pair
    for r in 2..n {
        for col in 2..n {
            coeffs[r * n + col] += base.coeffs()[r * n + col] * 0.1;
        }
    }
    MultilinearMap::matrix(n, n, Field::Complex, coeffs).expect("valid shape")
}

pub fn random_pair(codomain: usize, factors: &[usize], field: Field, seed: u64) -> (MultilinearMap, MultilinearMap) {
    (
        random_map(codomain, factors, field, seed).expect("valid shape"),
        random_map(codomain, factors, field, seed.wrapping_add(1)).expect("valid shape"),
    )
}
