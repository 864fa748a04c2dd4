//! Seeded hash sequences for exact and Poisson filling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use bucketprobe_core::{Error, Result};

/// Generator for replication `rep` of a run seeded with `seed`. Each
/// replication reads its own ChaCha stream, so results do not depend on how
/// replications are scheduled.
pub fn replication_rng(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

/// `n` independent uniform bucket indices in `0..m`.
pub fn sample_exact<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..m)).collect()
}

/// `N ~ Poisson(bαm)` uniform bucket indices in `0..m`.
pub fn sample_poisson<R: Rng + ?Sized>(rng: &mut R, m: usize, b: usize, alpha: f64) -> Result<Vec<usize>> {
    let n = sample_poisson_count(rng, m, b, alpha)?;
    Ok(sample_exact(rng, m, n))
}

/// A draw of `N ~ Poisson(bαm)`.
pub fn sample_poisson_count<R: Rng + ?Sized>(rng: &mut R, m: usize, b: usize, alpha: f64) -> Result<usize> {
    if !(alpha > 0.0 && alpha.is_finite()) || m == 0 || b == 0 {
        return Err(Error::Domain("need m, b >= 1 and alpha > 0"));
    }
    let lambda = alpha * (b * m) as f64;
    let dist = Poisson::new(lambda).map_err(|_| Error::Domain("invalid Poisson mean"))?;
    Ok(dist.sample(rng) as usize)
}

/// [`sample_exact`] from a fresh generator seeded with `seed`.
pub fn sample_exact_seeded(m: usize, n: usize, seed: u64) -> Vec<usize> {
    sample_exact(&mut replication_rng(seed, 0), m, n)
}

/// [`sample_poisson`] from a fresh generator seeded with `seed`.
pub fn sample_poisson_seeded(m: usize, b: usize, alpha: f64, seed: u64) -> Result<Vec<usize>> {
    sample_poisson(&mut replication_rng(seed, 0), m, b, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_deterministic() {
        assert!(sample_exact_seeded(10, 0, 1).is_empty());
        assert_eq!(sample_exact_seeded(10, 50, 7), sample_exact_seeded(10, 50, 7));
        assert_ne!(sample_exact_seeded(10, 50, 7), sample_exact_seeded(10, 50, 8));
        let a = sample_poisson_seeded(100, 2, 0.5, 3).unwrap();
        assert_eq!(a, sample_poisson_seeded(100, 2, 0.5, 3).unwrap());
        assert!(a.iter().all(|&h| h < 100));
    }

    #[test]
    fn streams_differ() {
        let a = sample_exact(&mut replication_rng(1, 0), 1000, 20);
        let b = sample_exact(&mut replication_rng(1, 1), 1000, 20);
        assert_ne!(a, b);
    }

    #[test]
    fn poisson_count_mean() {
        let (m, b, alpha) = (10usize, 2usize, 0.5);
        let draws = 100_000;
        let mut rng = replication_rng(11, 0);
        let total: f64 = (0..draws)
            .map(|_| sample_poisson_count(&mut rng, m, b, alpha).unwrap() as f64)
            .sum();
        let lambda = alpha * (b * m) as f64;
        let se = (lambda / draws as f64).sqrt();
        assert!((total / draws as f64 - lambda).abs() < 4.0 * se);
    }

    #[test]
    fn rejects_bad_load() {
        assert!(sample_poisson_seeded(10, 1, 0.0, 1).is_err());
    }
}
