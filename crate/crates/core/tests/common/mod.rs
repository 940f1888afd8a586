#![allow(dead_code)]

use lioup::linalg::ComplexMatrix;
use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type C = Complex<f64>;

pub fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> ComplexMatrix<f64> {
    ComplexMatrix::from_fn(n, n, |_, _| {
        c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
    })
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> ComplexMatrix<f64> {
    let a = random_matrix(rng, n, scale);
    (&a + &a.adjoint()).scale_real(0.5)
}

pub fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C> {
    let mut v: Vec<C> = (0..n)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    lioup::linalg::normalize(&mut v);
    v
}

/// Random density matrix: `B Bᴴ / Tr`.
pub fn random_density(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix<f64> {
    let b = random_matrix(rng, n, 1.0);
    let r = &b * &b.adjoint();
    let t = r.trace().re;
    r.scale_real(1.0 / t)
}

/// Greedy nearest-neighbour matching distance between two multisets; adequate
/// as an oracle when the points are well separated.
pub fn greedy_distance(a: &[C], b: &[C]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .fold((usize::MAX, f64::INFINITY), |best, cur| {
                if cur.1 < best.1 {
                    cur
                } else {
                    best
                }
            });
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}
