//! Balanced negative down-sampling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::dataset::Dataset;
use super::LearnError;

/// Draws `k` balanced datasets: each pairs all positives with an
/// equal-sized negative subset sampled uniformly without replacement from
/// the pool. Samples are drawn independently of each other (a negative row
/// may appear in several samples), and the whole procedure is a pure
/// function of the seed.
pub fn balanced_samples(
    positives: &Dataset,
    negative_pool: &Dataset,
    k: usize,
    seed: u64,
) -> Result<Vec<Dataset>, LearnError> {
    if positives.feature_names() != negative_pool.feature_names() {
        return Err(LearnError::InvalidData(
            "positives and negative pool have different columns".into(),
        ));
    }
    let needed = positives.n_rows();
    if needed == 0 {
        return Err(LearnError::EmptyInput);
    }
    if negative_pool.n_rows() < needed {
        return Err(LearnError::InsufficientNegatives {
            pool: negative_pool.n_rows(),
            needed,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(k);
    for _ in 0..k {
        let mut chosen: Vec<usize> =
            rand::seq::index::sample(&mut rng, negative_pool.n_rows(), needed).into_vec();
        chosen.sort_unstable();
        let negatives = negative_pool.select_rows(&chosen);
        samples.push(positives.concat(&negatives)?);
    }
    Ok(samples)
}
