//! Scalar abstraction: simulator math is generic over the float type.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::Float;
use rand::Rng;

/// Floating-point scalar: `f32` or `f64`.
///
/// `Display`/`FromStr` are required because every file format emits
/// shortest-round-trip decimals and parses them back exactly.
pub trait Scalar:
    Float + FromStr + Debug + Display + Send + Sync + 'static
{
    /// Draw from the standard normal distribution (Box-Muller).
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Draw uniformly from `[0, 1)`.
    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Scalar for f32 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        // u1 in (0, 1] keeps the log finite
        let u1 = 1.0 - rng.gen::<f32>();
        let u2 = rng.gen::<f32>();
        (-2.0 * u1.ln()).sqrt() * (std::f32::consts::TAU * u2).cos()
    }

    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen::<f32>()
    }
}

impl Scalar for f64 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let u1 = 1.0 - rng.gen::<f64>();
        let u2 = rng.gen::<f64>();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen::<f64>()
    }
}

/// Convert an `f64` constant into the working scalar type.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from(x).expect("constant representable in scalar type")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn normal_moments_are_sane() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 40_000;
        let samples: Vec<f64> = (0..n).map(|_| f64::standard_normal(&mut rng)).collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "var {var}");
    }

    #[test]
    fn unit_uniform_in_range_f32_and_f64() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let a = f32::unit_uniform(&mut rng);
            let b = f64::unit_uniform(&mut rng);
            assert!((0.0..1.0).contains(&a));
            assert!((0.0..1.0).contains(&b));
        }
    }
}
