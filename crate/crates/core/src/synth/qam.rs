use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Uniform i.i.d. square-QAM symbols with unit average energy.
pub fn gen_qam_symbols(order: u32, n: usize, seed: u64) -> Result<Vec<Complex64>> {
    let side: u32 = match order {
        4 => 2,
        16 => 4,
        64 => 8,
        256 => 16,
        _ => return Err(Error::BadOrder(order)),
    };
    // E|a|² of the odd-integer grid is 2(M − 1)/3
    let scale = (2.0 * (order as f64 - 1.0) / 3.0).sqrt().recip();
    let level = |i: u32| (2.0 * i as f64 - (side as f64 - 1.0)) * scale;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| {
            let i = rng.random_range(0..side);
            let q = rng.random_range(0..side);
            Complex64::new(level(i), level(q))
        })
        .collect())
}
