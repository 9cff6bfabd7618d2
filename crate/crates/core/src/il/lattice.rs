//! Randomly shifted rank-1 lattice rules (Korobov form) with the tent
//! transform. The spread over independent shifts gives an unbiased error
//! estimate.

use rand::Rng;

use crate::geometry::chunk_rng;

#[derive(Debug, Clone)]
pub struct ShiftedLattice {
    dim: usize,
    size: usize,
    generator: Vec<u64>,
    shifts: Vec<Vec<f64>>,
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn bernoulli2(x: f64) -> f64 {
    x * x - x + 1.0 / 6.0
}

/// `P₂` worst-case error of the Korobov lattice `(1, a, a², …) mod N` in the
/// unweighted Korobov space.
fn p2(size: usize, dim: usize, a: u64) -> f64 {
    let n = size as u64;
    let gen = korobov(n, dim, a);
    let sum: f64 = (0..n)
        .map(|k| {
            gen.iter()
                .map(|&g| {
                    let x = ((k * g) % n) as f64 / n as f64;
                    1.0 + 2.0 * std::f64::consts::PI.powi(2) * bernoulli2(x)
                })
                .product::<f64>()
        })
        .sum();
    sum / n as f64 - 1.0
}

fn korobov(n: u64, dim: usize, a: u64) -> Vec<u64> {
    let mut g = Vec::with_capacity(dim);
    let mut v = 1u64;
    for _ in 0..dim {
        g.push(v);
        v = (v * a) % n;
    }
    g
}

impl ShiftedLattice {
    /// A lattice with a prime number of points `≥ min_size` in `dim`
    /// dimensions, the Korobov parameter chosen by exhaustive `P₂` search,
    /// and `shifts` uniform random shifts drawn from `seed`.
    pub fn new(dim: usize, min_size: usize, shifts: usize, seed: u64) -> Self {
        let size = (min_size.max(2)..).find(|&n| is_prime(n)).expect("primes are unbounded");
        let n = size as u64;
        let generator = if dim == 1 {
            vec![1]
        } else {
            let best = (1..=n / 2)
                .map(|a| (a, p2(size, dim, a)))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .map(|(a, _)| a)
                .unwrap_or(1);
            korobov(n, dim, best)
        };
        let mut rng = chunk_rng(seed, u64::MAX);
        let shifts = (0..shifts.max(1))
            .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
            .collect();
        ShiftedLattice {
            dim,
            size,
            generator,
            shifts,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn shift_count(&self) -> usize {
        self.shifts.len()
    }

    /// Point `i` under shift `r`, tent-transformed, written into `out`.
    pub fn point(&self, r: usize, i: usize, out: &mut [f64]) {
        let n = self.size as u64;
        for ((o, &g), s) in out.iter_mut().zip(&self.generator).zip(&self.shifts[r]) {
            let x = ((i as u64 * g) % n) as f64 / n as f64 + s;
            let u = x - x.floor();
            *o = 1.0 - (2.0 * u - 1.0).abs();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_smooth_function() {
        let lat = ShiftedLattice::new(3, 1000, 8, 1);
        assert!(is_prime(lat.size()));
        let mut u = [0.0; 3];
        let mut means = Vec::new();
        for r in 0..lat.shift_count() {
            let mut s = 0.0;
            for i in 0..lat.size() {
                lat.point(r, i, &mut u);
                s += (u[0] + u[1] * u[2]).exp();
            }
            means.push(s / lat.size() as f64);
        }
        let mean = means.iter().sum::<f64>() / means.len() as f64;
        // ∫ e^{x + yz} over the unit cube
        let exact = (std::f64::consts::E - 1.0) * 1.317_902_151_454_403_8;
        assert!((mean - exact).abs() < 1e-4, "{mean} vs {exact}");
    }
}
