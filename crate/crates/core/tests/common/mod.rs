#![allow(dead_code)]

use rand::Rng;
use witnesslab::qmat::{ComplexMatrix, DensityMatrix, C64};
use witnesslab::BellDiagonalParams;

/// Random state of rank 1–4 from a Ginibre matrix.
pub fn random_state<R: Rng>(rng: &mut R) -> DensityMatrix {
    let rank = rng.random_range(1..=4);
    let mut m = ComplexMatrix::zeros(4).unwrap();
    for _ in 0..rank {
        let v: Vec<C64> = (0..4)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        m = &m + &ComplexMatrix::projector(&v).unwrap();
    }
    let tr = m.trace().re;
    DensityMatrix::from_matrix(m.scale_real(1.0 / tr)).unwrap()
}

pub fn random_qubit<R: Rng>(rng: &mut R) -> ComplexMatrix {
    // uniform in the Bloch ball
    let (x, y, z) = loop {
        let p: (f64, f64, f64) = (
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if p.0 * p.0 + p.1 * p.1 + p.2 * p.2 <= 1.0 {
            break p;
        }
    };
    ComplexMatrix::from_slice(
        2,
        &[
            C64::new((1.0 + z) / 2.0, 0.0),
            C64::new(x / 2.0, -y / 2.0),
            C64::new(x / 2.0, y / 2.0),
            C64::new((1.0 - z) / 2.0, 0.0),
        ],
    )
    .unwrap()
}

pub fn random_product_state<R: Rng>(rng: &mut R) -> DensityMatrix {
    let m = random_qubit(rng).kron(&random_qubit(rng)).unwrap();
    DensityMatrix::from_matrix(m).unwrap()
}

/// Uniform over the physical tetrahedron by rejection from the cube.
pub fn random_physical_c<R: Rng>(rng: &mut R) -> BellDiagonalParams {
    loop {
        let c = BellDiagonalParams::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        if c.is_physical() {
            return c;
        }
    }
}
