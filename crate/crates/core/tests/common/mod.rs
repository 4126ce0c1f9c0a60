#![allow(dead_code)]

//! Test helpers shared by the integration targets: an independent Betti
//! number oracle and seeded random elements.

pub mod oracle;

use cdga::algebra::{Poly, Presentation};
use cdga::qlinalg::{q, QMatrix, Q};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A random homogeneous element of degree `k` with small integer coefficients.
pub fn random_poly(p: &Presentation, k: u32, rng: &mut ChaCha8Rng) -> Poly {
    let basis = p.basis_of_degree(k);
    let mut out = Poly::zero();
    if basis.is_empty() {
        return out;
    }
    let terms = rng.gen_range(1..=basis.len().min(4));
    for _ in 0..terms {
        let m = basis[rng.gen_range(0..basis.len())].clone();
        let c = rng.gen_range(-5i64..=5);
        if c != 0 {
            out.add_term(m, q(c));
        }
    }
    out
}

/// A random closed element of degree `k`: a random combination of a basis
/// of the cocycles.
pub fn random_cocycle(p: &Presentation, k: u32, rng: &mut ChaCha8Rng) -> Poly {
    let basis = p.basis_of_degree(k);
    let target = p.basis_of_degree(k + 1);
    let cols: Vec<Vec<Q>> = basis
        .iter()
        .map(|m| {
            p.d(&Poly::monomial(m.clone()))
                .coordinates(&target)
                .unwrap()
        })
        .collect();
    let kernel = QMatrix::from_columns(target.len(), &cols).kernel_basis();
    let mut coords = vec![Q::zero(); basis.len()];
    for v in kernel {
        let c = q(rng.gen_range(-3i64..=3));
        for (a, x) in coords.iter_mut().zip(&v) {
            *a += &c * x;
        }
    }
    Poly::from_coordinates(&basis, &coords)
}
