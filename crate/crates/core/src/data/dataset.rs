use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};

/// Standardised square grayscale images with integer labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    image_size: usize,
    images: Vec<f64>,
    labels: Vec<usize>,
    mean: f64,
    std: f64,
}

impl Dataset {
    /// Builds a dataset from pixels already scaled to `[0, 1]`, computing
    /// the mean and standard deviation over all pixels and standardising.
    /// A standard deviation below 1e-12 is replaced by 1.
    pub fn from_scaled(name: impl Into<String>, image_size: usize, pixels: Vec<f64>, labels: Vec<usize>) -> Result<Self> {
        let per = image_size * image_size;
        if per == 0 {
            return invalid("image size must be positive");
        }
        if pixels.len() != per * labels.len() {
            return invalid(format!("{} labels need {} pixels, got {}", labels.len(), per * labels.len(), pixels.len()));
        }
        if let Some(v) = pixels.iter().find(|v| !v.is_finite()) {
            return invalid(format!("pixel values must be finite, found {v}"));
        }
        let n = pixels.len().max(1) as f64;
        let mean = pixels.iter().sum::<f64>() / n;
        let var = pixels.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / n;
        let std = if var.sqrt() < 1e-12 { 1.0 } else { var.sqrt() };
        let images = pixels.into_iter().map(|p| (p - mean) / std).collect();
        Ok(Self { name: name.into(), image_size, images, labels, mean, std })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn image_size(&self) -> usize {
        self.image_size
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn std(&self) -> f64 {
        self.std
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Standardised pixels of every image, row-major.
    pub fn pixels(&self) -> &[f64] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &[f64] {
        let per = self.image_size * self.image_size;
        &self.images[i * per..(i + 1) * per]
    }

    /// Largest label plus one.
    pub fn num_classes(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    /// Images and labels at `indices`, in that order. Normalisation
    /// statistics are inherited.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.len()) {
            return invalid(format!("index {bad} out of range for {} samples", self.len()));
        }
        let mut images = Vec::with_capacity(indices.len() * self.image_size * self.image_size);
        for &i in indices {
            images.extend_from_slice(self.image(i));
        }
        Ok(Self {
            name: self.name.clone(),
            image_size: self.image_size,
            images,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            mean: self.mean,
            std: self.std,
        })
    }

    /// `n` samples drawn without replacement by a seeded shuffle. Returns
    /// the whole set, shuffled, when `n ≥ len`.
    pub fn random_subset(&self, n: usize, seed: u64) -> Result<Self> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        idx.truncate(n.min(self.len()));
        self.select(&idx)
    }

    /// Seeded split into `(rest, holdout)` with `round(len · fraction)`
    /// samples held out.
    pub fn split(&self, fraction: f64, seed: u64) -> Result<(Self, Self)> {
        if !(0.0..1.0).contains(&fraction) {
            return invalid(format!("holdout fraction must lie in [0, 1), got {fraction}"));
        }
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let n_hold = (self.len() as f64 * fraction).round() as usize;
        let (hold, rest) = idx.split_at(n_hold);
        Ok((self.select(rest)?, self.select(hold)?))
    }
}
