//! Deterministic construction of the test-matrix corpus: seeded Gaussian
//! matrices, the Kahan family, the sharpness and necessity examples, and
//! kernel discretizations on Chebyshev grids.
//!
//! Every generator is bit-deterministic given its parameters and seed.

use crate::matrix::DenseMatrix;

/// Default Kahan parameter used by the adversarial experiments.
pub const DEFAULT_KAHAN_S: f64 = 0.6;

/// Default diagonal perturbation making greedy pivoting strict on the
/// Kahan family in floating point.
pub const DEFAULT_KAHAN_TAU: f64 = 1e-7;

// ── Random number generation ────────────────────────────────────────

/// SplitMix64 stream with Box-Muller normal sampling.
///
/// The generator is fixed so that corpora are bit-reproducible across
/// platforms: 64-bit SplitMix64 state updates, uniforms taken as the top
/// 53 bits scaled into (0, 1], and the classic Box-Muller transform with
/// the paired sample cached.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
    cached_normal: Option<f64>,
}

impl Rng {
    pub fn seeded(seed: u64) -> Self {
        Self {
            state: seed,
            cached_normal: None,
        }
    }

    /// Independent stream for trial `index` of a seeded experiment.
    pub fn stream(seed: u64, index: u64) -> Self {
        let mixed = splitmix64_step(seed ^ (index.wrapping_add(1)).wrapping_mul(0x9E3779B97F4A7C15));
        Self::seeded(mixed)
    }

    pub fn next_u64(&mut self) -> u64 {
        let out = splitmix64_step(self.state);
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        out
    }

    /// Uniform in (0, 1].
    pub fn uniform(&mut self) -> f64 {
        let bits = self.next_u64() >> 11; // 53 bits
        (bits as f64 + 1.0) / 9007199254740992.0
    }

    /// Standard normal via Box-Muller, caching the second value of each
    /// generated pair.
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.cached_normal.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.cached_normal = Some(radius * angle.sin());
        radius * angle.cos()
    }

    /// Uniform integer in `[0, bound)` by rejection.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        let bound_u = bound as u64;
        let zone = u64::MAX - u64::MAX % bound_u;
        loop {
            let x = self.next_u64();
            if x < zone {
                return (x % bound_u) as usize;
            }
        }
    }
}

fn splitmix64_step(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// `m x n` matrix of iid standard normal entries.
pub fn gaussian(m: usize, n: usize, seed: u64) -> DenseMatrix {
    let mut rng = Rng::seeded(seed);
    DenseMatrix::from_fn(m, n, |_, _| rng.standard_normal())
}

// ── Kahan family ────────────────────────────────────────────────────

/// The `n x n` Kahan matrix with parameter `0 < s < 1`: upper triangular
/// with diagonal `c^i` and off-diagonal entries `-s * c^i` in row `i`,
/// where `c = sqrt(1 - s^2)`.
pub fn kahan(n: usize, s: f64) -> DenseMatrix {
    kahan_perturbed(n, s, 0.0)
}

/// Kahan matrix with column `j` scaled by `1 - j*tau`. The tiny scaling
/// makes the no-pivoting behavior of greedy algorithms strict in floating
/// point instead of a tie.
pub fn kahan_perturbed(n: usize, s: f64, tau: f64) -> DenseMatrix {
    assert!(s > 0.0 && s < 1.0, "kahan requires 0 < s < 1");
    let c = (1.0 - s * s).sqrt();
    DenseMatrix::from_fn(n, n, |i, j| {
        let scale = 1.0 - j as f64 * tau;
        if i == j {
            c.powi(i as i32) * scale
        } else if j > i {
            -s * c.powi(i as i32) * scale
        } else {
            0.0
        }
    })
}

/// Gram matrix `K^T K` of the (perturbed) Kahan matrix.
pub fn kahan_gram(n: usize, s: f64, tau: f64) -> DenseMatrix {
    let k = kahan_perturbed(n, s, tau);
    k.transpose().matmul(&k)
}

// ── Sharpness examples ──────────────────────────────────────────────

/// The `m x n` matrix whose principal `k x k` block has `k+1` on the
/// diagonal and `-1` elsewhere, `-1` everywhere else in the leading rows
/// and columns, and `k+1` throughout the trailing block. Its principal
/// pivot is locally maximal yet leaves a large Schur complement.
pub fn sharpness_ge(m: usize, n: usize, k: usize) -> DenseMatrix {
    assert!(k >= 2 && k <= m.min(n), "sharpness_ge requires 2 <= k <= min(m, n)");
    let kp1 = (k + 1) as f64;
    DenseMatrix::from_fn(m, n, |i, j| {
        if i < k && j < k {
            if i == j {
                kp1
            } else {
                -1.0
            }
        } else if i >= k && j >= k {
            kp1
        } else {
            -1.0
        }
    })
}

/// The rank `<= k` companion of [`sharpness_ge`]: off-diagonal entries of
/// the leading block move to `-1 - beta` with `beta = (k+2)/(k^2-1)`.
pub fn sharpness_ge_companion(m: usize, n: usize, k: usize) -> DenseMatrix {
    assert!(k >= 2 && k <= m.min(n));
    let beta = (k + 2) as f64 / ((k * k - 1) as f64);
    let kp1 = (k + 1) as f64;
    DenseMatrix::from_fn(m, n, |i, j| {
        if i < k && j < k {
            if i == j {
                kp1
            } else {
                -1.0 - beta
            }
        } else if i >= k && j >= k {
            kp1
        } else {
            -1.0
        }
    })
}

/// The `(k+1) x n` upper-trapezoidal matrix whose Gram matrix equals
/// [`sharpness_ge`] with `m = n`: row `i` (0-based) carries
/// `d = sqrt(k-i+1)/sqrt(k-i+2)` on the diagonal and
/// `a = -1/sqrt((k-i+1)(k-i+2))` to its right, all scaled by
/// `sqrt(k+2)`; the last row repeats its diagonal value from column `k`
/// onward.
pub fn sharpness_qr(k: usize, n: usize) -> DenseMatrix {
    assert!(k >= 2 && n > k, "sharpness_qr requires k >= 2 and n >= k+1");
    let scale = ((k + 2) as f64).sqrt();
    // 1-based row index q = i+1: d_q = sqrt(k-q+2)/sqrt(k-q+3).
    let d = |i: usize| {
        let q = (k as f64) - (i as f64 + 1.0);
        ((q + 2.0) / (q + 3.0)).sqrt()
    };
    let a = |i: usize| {
        let q = (k as f64) - (i as f64 + 1.0);
        -1.0 / ((q + 2.0) * (q + 3.0)).sqrt()
    };
    DenseMatrix::from_fn(k + 1, n, |i, j| {
        if i < k {
            if j < i {
                0.0
            } else if j == i {
                scale * d(i)
            } else {
                scale * a(i)
            }
        } else if j >= k {
            scale * d(k)
        } else {
            0.0
        }
    })
}

// ── Necessity examples ──────────────────────────────────────────────

/// Which necessity witness to build.
#[derive(Debug, Clone, Copy)]
pub enum NecessityExample {
    /// 4x4 diagonal witness with parameter `mu > 1`; the principal 2x2
    /// pivot has metric exactly `mu^2` with zero interpolative bounds.
    SpectralGap { mu: f64 },
    /// 5x5 witness with parameter `nu > 1`; the principal 3x3 identity
    /// pivot has metric exactly `nu^2` with interpolative bounds `nu`.
    InterpolativeGap { nu: f64 },
}

/// Build one of the two necessity witnesses.
pub fn necessity_example(which: NecessityExample) -> DenseMatrix {
    match which {
        NecessityExample::SpectralGap { mu } => {
            assert!(mu > 1.0);
            DenseMatrix::diag(&[1.0, 1.0 / mu, mu, 1.0])
        }
        NecessityExample::InterpolativeGap { nu } => {
            assert!(nu > 1.0);
            DenseMatrix::from_rows(&[
                &[1.0, 0.0, 0.0, 1.0, 0.0],
                &[0.0, 1.0, 0.0, nu, 0.0],
                &[0.0, 0.0, 1.0, 0.0, 0.0],
                &[-nu, 1.0, 0.0, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 0.0, 1.0],
            ])
        }
    }
}

/// The 4x4 block-diagonal matrix with exactly two locally maximal 2x2
/// blocks, of volumes 8 and 7.
pub fn example_2_1() -> DenseMatrix {
    let s3 = 3.0_f64.sqrt();
    DenseMatrix::from_rows(&[
        &[1.0, 3.0, 0.0, 0.0],
        &[3.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, s3, 2.0],
        &[0.0, 0.0, 2.0, -s3],
    ])
}

// ── Kernel matrices on Chebyshev grids ──────────────────────────────

/// Kernel functions available for discretization on `[-1, 1]^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// `1 / (1 + beta * (x^2 + y^2)^2)`.
    RungeLike { beta: f64 },
    /// Wendland's compactly supported radial basis function with
    /// smoothness index `s` in {0, 1, 3}; argument `d = |x - y|`.
    Wendland { s: u8 },
    /// `1 / (1 + 100 * (1/2 - x^2 - y^2)^2)`.
    RungeRing,
}

impl Kernel {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match *self {
            Kernel::RungeLike { beta } => {
                let r = x * x + y * y;
                1.0 / (1.0 + beta * r * r)
            }
            Kernel::Wendland { s } => {
                let d = (x - y).abs();
                let plus = (1.0 - d).max(0.0);
                match s {
                    0 => plus.powi(2),
                    1 => plus.powi(4) * (4.0 * d + 1.0),
                    3 => plus.powi(8) * (32.0 * d.powi(3) + 25.0 * d * d + 8.0 * d + 1.0),
                    _ => panic!("wendland smoothness must be 0, 1, or 3"),
                }
            }
            Kernel::RungeRing => {
                let r = 0.5 - x * x - y * y;
                1.0 / (1.0 + 100.0 * r * r)
            }
        }
    }
}

/// A kernel plus the per-dimension Chebyshev point count.
#[derive(Debug, Clone, Copy)]
pub struct KernelSpec {
    pub kernel: Kernel,
    pub grid: usize,
}

/// Chebyshev points `cos(i*pi/(n-1))`, `i = 0..n`, on `[-1, 1]`.
pub fn chebyshev_points(n: usize) -> Vec<f64> {
    assert!(n >= 2, "need at least two grid points");
    (0..n)
        .map(|i| (i as f64 * std::f64::consts::PI / (n - 1) as f64).cos())
        .collect()
}

/// Discretize `f(x_i, y_j)` on the tensor Chebyshev grid.
pub fn kernel_matrix(spec: &KernelSpec) -> DenseMatrix {
    let pts = chebyshev_points(spec.grid);
    DenseMatrix::from_fn(spec.grid, spec.grid, |i, j| spec.kernel.eval(pts[i], pts[j]))
}
