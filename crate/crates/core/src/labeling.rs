use rand::Rng;

use crate::error::{Error, Result};

/// A binary community assignment. Comparisons are modulo the global flip.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling {
    bits: Vec<u8>,
}

impl Labeling {
    pub fn zeros(n: usize) -> Self {
        Labeling { bits: vec![0; n] }
    }

    /// Exact copy of `bits`; any nonzero entry is read as 1.
    pub fn planted(bits: &[u8]) -> Self {
        Labeling {
            bits: bits.iter().map(|&b| (b != 0) as u8).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Labeling {
            bits: (0..n).map(|_| rng.random::<bool>() as u8).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn bits_mut(&mut self) -> &mut [u8] {
        &mut self.bits
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.bits
    }

    pub fn get(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, bit: u8) {
        self.bits[i] = bit & 1;
    }

    /// `X xor 1`.
    pub fn flipped(&self) -> Self {
        Labeling {
            bits: self.bits.iter().map(|b| b ^ 1).collect(),
        }
    }

    /// Plain Hamming distance, no flip.
    pub fn hamming(&self, other: &Labeling) -> Result<usize> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count())
    }

    /// `min(|A xor B|, |A xor B xor 1|)`.
    pub fn dist(&self, other: &Labeling) -> Result<usize> {
        let h = self.hamming(other)?;
        Ok(h.min(self.len() - h))
    }
}

impl From<Vec<u8>> for Labeling {
    fn from(bits: Vec<u8>) -> Self {
        Labeling::planted(&bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn planted_copy() {
        assert_eq!(Labeling::planted(&[0, 0, 0]).bits(), &[0, 0, 0]);
    }

    #[test]
    fn flip_is_free() {
        let a = Labeling::planted(&[0, 1, 0]);
        let b = Labeling::planted(&[1, 0, 1]);
        assert_eq!(a.dist(&b).unwrap(), 0);
        assert_eq!(a.dist(&a).unwrap(), 0);
        assert_eq!(a.dist(&a.flipped()).unwrap(), 0);
        assert_eq!(a.hamming(&b).unwrap(), 3);
    }

    #[test]
    fn dist_counts_smaller_side() {
        let a = Labeling::planted(&[0, 0, 0, 0, 0]);
        let b = Labeling::planted(&[1, 1, 0, 0, 0]);
        assert_eq!(a.dist(&b).unwrap(), 2);
        assert_eq!(a.dist(&b.flipped()).unwrap(), 2);
    }

    #[test]
    fn length_mismatch() {
        let a = Labeling::zeros(3);
        let b = Labeling::zeros(4);
        assert_eq!(a.dist(&b), Err(Error::LengthMismatch(3, 4)));
    }

    #[test]
    fn random_is_reproducible() {
        let a = Labeling::random(500, &mut ChaCha8Rng::seed_from_u64(9));
        let b = Labeling::random(500, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        let ones = a.bits().iter().filter(|&&b| b == 1).count();
        assert!(ones > 150 && ones < 350);
    }
}
