//! Seeded, counter-based random streams for reproducible experiments.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type ExperimentRng = ChaCha20Rng;

/// The stream for `seed`; identical seeds give identical streams on every platform.
pub fn seeded(seed: u64) -> ExperimentRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// An independent sub-stream, e.g. one per parallel job.
pub fn substream(seed: u64, stream: u64) -> ExperimentRng {
    let mut rng = seeded(seed);
    rng.set_stream(stream);
    rng
}
