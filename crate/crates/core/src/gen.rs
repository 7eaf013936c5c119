//! Seeded generation of hypothesis-satisfying inputs.
//!
//! Every generator is a pure function of its [`GenConfig`] and shape
//! arguments. Randomness comes from ChaCha20 (`rand_chacha`, value-stable
//! across releases) keyed by a SplitMix64 expansion of the 64-bit seed.
//! Independent substreams are derived from `(seed, purpose tag, index)` via
//! [`GenConfig::substream`], which is what makes parallel campaigns
//! reproducible regardless of scheduling.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::error::{domain, Result};
use crate::module::{module_norm, ModuleElement, ModuleTuple, ProbabilityVector, ScalarCoefficients};

/// Identifies the stream layout; bump when derivation or draw order changes.
pub const RNG_STREAM_VERSION: &str = "chacha20-splitmix64-v1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    /// Magnitude bound for real and imaginary parts of generated entries.
    pub scale: f64,
    pub retry_limit: u32,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            scale: 1.0,
            retry_limit: 64,
        }
    }
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> Self {
        GenConfig {
            seed,
            ..Default::default()
        }
    }

    /// Child configuration for an independent stream.
    pub fn substream(&self, tag: &str, index: u64) -> GenConfig {
        let mut h = splitmix64(self.seed ^ 0x5851_f42d_4c95_7f2d);
        h = splitmix64(h ^ fnv1a(tag.as_bytes()));
        h = splitmix64(h ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        GenConfig { seed: h, ..*self }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut key = [0u8; 32];
        let mut state = self.seed;
        for chunk in key.chunks_exact_mut(8) {
            state = splitmix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        ChaCha20Rng::from_seed(key)
    }

    pub fn sampler(&self) -> Sampler {
        Sampler {
            rng: self.rng(),
            scale: self.scale,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Stateful draw sequence over one stream. Successive draws are
/// independent; the sequence is fixed by the originating config.
pub struct Sampler {
    rng: ChaCha20Rng,
    scale: f64,
}

impl Sampler {
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            return lo;
        }
        self.rng.random_range(lo..hi)
    }

    pub fn index(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.random_range(lo..=hi_inclusive)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    fn unit(&mut self) -> f64 {
        self.rng.random_range(-1.0..=1.0)
    }

    pub fn complex(&mut self) -> Complex64 {
        Complex64::new(self.scale * self.unit(), self.scale * self.unit())
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> DMatrix<Complex64> {
        DMatrix::from_fn(rows, cols, |_, _| self.complex())
    }

    fn unit_matrix(&mut self, rows: usize, cols: usize) -> DMatrix<Complex64> {
        DMatrix::from_fn(rows, cols, |_, _| Complex64::new(self.unit(), self.unit()))
    }

    pub fn module(&mut self, rows: usize, alg_dim: usize) -> ModuleElement {
        ModuleElement::from_matrix(self.matrix(rows, alg_dim)).expect("nonempty shape")
    }

    pub fn algebra(&mut self, k: usize) -> AlgebraElement {
        AlgebraElement::from_matrix(self.matrix(k, k)).expect("square shape")
    }

    pub fn tuple(&mut self, n: usize, rows: usize, alg_dim: usize) -> ModuleTuple {
        ModuleTuple::new((0..n).map(|_| self.module(rows, alg_dim)).collect())
            .expect("uniform nonempty tuple")
    }

    pub fn scalars(&mut self, n: usize) -> ScalarCoefficients {
        ScalarCoefficients((0..n).map(|_| self.complex()).collect())
    }

    pub fn probability(&mut self, n: usize) -> ProbabilityVector {
        assert!(n >= 1);
        // (0, 1] draws keep every weight strictly positive before normalizing
        let raw: Vec<f64> = (0..n).map(|_| 1.0 - self.rng.random::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        let mut w: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let largest = (0..n)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]))
            .expect("nonempty");
        for _ in 0..3 {
            let s: f64 = w.iter().sum();
            w[largest] += 1.0 - s;
        }
        ProbabilityVector::new(w).expect("normalized weights")
    }

    /// Partial isometry `Q_1 Q_2*` from the first `rank` columns of two
    /// Householder QR factors of random square matrices.
    pub fn partial_isometry(&mut self, rows: usize, alg_dim: usize, rank: usize) -> Result<ModuleElement> {
        if rows == 0 || alg_dim == 0 {
            return Err(domain("partial isometry needs positive dimensions"));
        }
        if rank > rows.min(alg_dim) {
            return Err(domain(format!(
                "rank {rank} exceeds min({rows}, {alg_dim})"
            )));
        }
        if rank == 0 {
            return ModuleElement::from_matrix(DMatrix::zeros(rows, alg_dim));
        }
        let left = self.unit_matrix(rows, rows).qr().q();
        let right = self.unit_matrix(alg_dim, alg_dim).qr().q();
        let e = left.columns(0, rank) * right.columns(0, rank).adjoint();
        ModuleElement::from_matrix(e)
    }

    /// `n` elements with `|x_i - center| <= radius`; one of them sits at
    /// distance at least `0.9 * radius`.
    pub fn ball_tuple(&mut self, center: &ModuleElement, radius: f64, n: usize) -> Result<ModuleTuple> {
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(domain(format!("radius must be finite and nonnegative, got {radius}")));
        }
        if n == 0 {
            return Err(domain("ball tuple needs n >= 1"));
        }
        let (rows, k) = center.shape();
        // margin keeps recomputed norms below the radius after rounding
        let shrink = 1.0 - 1e-9;
        let far = self.index(0, n - 1);
        let mut items = Vec::with_capacity(n);
        for i in 0..n {
            let d = self.unit_matrix(rows, k);
            let t = if i == far {
                self.uniform(0.9, 1.0)
            } else {
                self.rng.random::<f64>()
            };
            let dn = crate::algebra::spectral_norm(&d);
            let offset = if dn > 0.0 {
                d * Complex64::new(radius * t * shrink / dn, 0.0)
            } else {
                d
            };
            items.push(center + &ModuleElement::from_matrix(offset)?);
        }
        ModuleTuple::new(items)
    }

    /// `m x m` matrix with operator norm at most `bound`.
    pub fn contraction(&mut self, m: usize, bound: f64) -> DMatrix<Complex64> {
        let g = self.unit_matrix(m, m);
        let n = crate::algebra::spectral_norm(&g);
        if n == 0.0 {
            return g;
        }
        let t = self.rng.random::<f64>();
        g * Complex64::new(bound * t / n, 0.0)
    }
}

/// Matrix with real and imaginary parts uniform in `[-scale, scale]`.
pub fn random_matrix(rows: usize, cols: usize, cfg: &GenConfig) -> Result<DMatrix<Complex64>> {
    if rows == 0 || cols == 0 {
        return Err(domain("random_matrix needs rows, cols >= 1"));
    }
    Ok(cfg.sampler().matrix(rows, cols))
}

/// `e` with `<e, e>` an orthogonal projection of the given rank.
pub fn random_partial_isometry(rows: usize, alg_dim: usize, rank: usize, cfg: &GenConfig) -> Result<ModuleElement> {
    cfg.sampler().partial_isometry(rows, alg_dim, rank)
}

pub fn random_probability_vector(n: usize, cfg: &GenConfig) -> Result<ProbabilityVector> {
    if n == 0 {
        return Err(domain("probability vector needs n >= 1"));
    }
    Ok(cfg.sampler().probability(n))
}

pub fn ball_tuple(center: &ModuleElement, radius: f64, n: usize, cfg: &GenConfig) -> Result<ModuleTuple> {
    cfg.sampler().ball_tuple(center, radius, n)
}

// Rotate the largest entry onto the positive real axis and renormalize, so
// the 1x1 case yields exactly `e = 1`.
fn unit_direction(e: ModuleElement) -> ModuleElement {
    let pivot = e
        .matrix()
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("nonempty");
    let phased = e.scale(pivot.conj() / pivot.norm());
    let n = module_norm(&phased);
    phased.scale_real(1.0 / n)
}

/// Output of [`sharpness_pair`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessPair {
    pub xs: ModuleTuple,
    pub ys: ModuleTuple,
    pub p: ProbabilityVector,
    pub e: ModuleElement,
}

/// Two-point extremal instance: `x = (a + r e, a - r e)`,
/// `y = (b + s e, b - s e)`, uniform weights, `e` a rank-one partial isometry.
pub fn sharpness_pair(
    a: &ModuleElement,
    b: &ModuleElement,
    r: f64,
    s: f64,
    cfg: &GenConfig,
) -> Result<SharpnessPair> {
    if a.shape() != b.shape() {
        return Err(domain(format!(
            "centers have shapes {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    if !(r >= 0.0 && s >= 0.0 && r.is_finite() && s.is_finite()) {
        return Err(domain("radii must be finite and nonnegative"));
    }
    let (rows, k) = a.shape();
    let e = unit_direction(cfg.sampler().partial_isometry(rows, k, 1)?);
    let re = e.scale_real(r);
    let se = e.scale_real(s);
    Ok(SharpnessPair {
        xs: ModuleTuple::new(vec![a + &re, a - &re])?,
        ys: ModuleTuple::new(vec![b + &se, b - &se])?,
        p: ProbabilityVector::uniform(2)?,
        e,
    })
}
