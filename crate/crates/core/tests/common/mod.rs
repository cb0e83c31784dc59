//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use scatent::smatrix::PotentialModel;
use scatent::wavepacket::{Grid1D, SampledWavefunction};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Transfer matrix of (ψ, ψ') across a constant slice of width `h`.
fn slice(k2: Complex64, h: f64) -> [[Complex64; 2]; 2] {
    let k = k2.sqrt();
    let kh = k * h;
    let (c, s_over_k) = if kh.norm() < 1e-8 {
        (Complex64::new(1.0, 0.0), Complex64::new(h, 0.0))
    } else {
        (kh.cos(), kh.sin() / k)
    };
    [[c, s_over_k], [-k2 * s_over_k, c]]
}

fn mul(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Element of a 1D potential for the transfer-matrix oracle.
#[derive(Clone, Copy, Debug)]
pub enum Piece {
    /// Constant potential over `[x0, x1]`.
    Constant { x0: f64, x1: f64, v: f64 },
    /// `λ δ(x - x0)`.
    Delta { x0: f64, strength: f64 },
}

/// Solve `-ψ''/2m + V ψ = q²/2m ψ` by multiplying transfer matrices across
/// `pieces` (ordered left to right) and matching `e^{iqx} + r e^{-iqx}` on the
/// left to `t e^{iqx}` on the right.
pub fn transfer_matrix_amplitudes(pieces: &[Piece], q: f64, m: f64) -> (Complex64, Complex64) {
    let xl = match pieces[0] {
        Piece::Constant { x0, .. } | Piece::Delta { x0, .. } => x0,
    };
    let mut total = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];
    let mut x = xl;
    let free = Complex64::new(q * q, 0.0);
    for p in pieces {
        match *p {
            Piece::Constant { x0, x1, v } => {
                if x0 > x {
                    total = mul(slice(free, x0 - x), total);
                }
                total = mul(
                    slice(Complex64::new(q * q - 2.0 * m * v, 0.0), x1 - x0),
                    total,
                );
                x = x1;
            }
            Piece::Delta { x0, strength } => {
                if x0 > x {
                    total = mul(slice(free, x0 - x), total);
                }
                let kick = [
                    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                    [
                        Complex64::new(2.0 * m * strength, 0.0),
                        Complex64::new(1.0, 0.0),
                    ],
                ];
                total = mul(kick, total);
                x = x0;
            }
        }
    }
    let xr = x;
    // Left state: a·(1, iq) e^{iq xl} + r·(1, -iq) e^{-iq xl}, a = 1.
    let ein = (I * q * xl).exp();
    let eref = (-I * q * xl).exp();
    let u = [ein, I * q * ein];
    let w = [eref, -I * q * eref];
    let mu = [
        total[0][0] * u[0] + total[0][1] * u[1],
        total[1][0] * u[0] + total[1][1] * u[1],
    ];
    let mw = [
        total[0][0] * w[0] + total[0][1] * w[1],
        total[1][0] * w[0] + total[1][1] * w[1],
    ];
    // Right state t·(1, iq) e^{iq xr} has no left-moving part:
    // (iq ψ - ψ') = 0  ⇒  (iq mu0 - mu1) + r (iq mw0 - mw1) = 0.
    let r = -(I * q * mu[0] - mu[1]) / (I * q * mw[0] - mw[1]);
    let psi_r = mu[0] + r * mw[0];
    let t = psi_r / (I * q * xr).exp();
    (t, r)
}

/// Piecewise representation of a potential, square barrier split into `slices`.
pub fn pieces_for(model: &PotentialModel, slices: usize) -> Vec<Piece> {
    match *model {
        PotentialModel::DeltaBarrier { strength } => vec![Piece::Delta { x0: 0.0, strength }],
        PotentialModel::DoubleDelta {
            strength,
            separation,
        } => vec![
            Piece::Delta {
                x0: -separation / 2.0,
                strength,
            },
            Piece::Delta {
                x0: separation / 2.0,
                strength,
            },
        ],
        PotentialModel::SquareBarrier { height, width } => {
            let h = width / slices as f64;
            (0..slices)
                .map(|i| Piece::Constant {
                    x0: -width / 2.0 + i as f64 * h,
                    x1: -width / 2.0 + (i + 1) as f64 * h,
                    v: height,
                })
                .collect()
        }
        PotentialModel::HardWall => panic!("no finite transfer matrix for a hard wall"),
    }
}

/// `Σ s_k⁴` over singular values of `√w1 ψ √w2`: the purity without forming ρ.
pub fn svd_purity(psi: &SampledWavefunction) -> f64 {
    let (g1, g2) = psi.grids();
    let w1 = g1.trapezoid_weights();
    let w2 = g2.trapezoid_weights();
    let v = psi.values();
    let a = DMatrix::from_fn(g1.len(), g2.len(), |i, j| {
        v[[i, j]] * (w1[i] * w2[j]).sqrt()
    });
    a.singular_values().iter().map(|s| s.powi(4)).sum()
}

/// Purity of a Gaussian with independent momentum spreads after `z = T p`,
/// from the covariance `C = T diag(σ1², σ2²) Tᵀ` of `|φ|²`:
/// `p = √(det C / (C11 C22))`.
pub fn gaussian_purity_from_covariance(t: [[f64; 2]; 2], sigma1: f64, sigma2: f64) -> f64 {
    let d = [sigma1 * sigma1, sigma2 * sigma2];
    let c = |i: usize, j: usize| t[i][0] * d[0] * t[j][0] + t[i][1] * d[1] * t[j][1];
    let det = c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0);
    (det / (c(0, 0) * c(1, 1))).sqrt()
}

/// Normalized Gaussian momentum amplitude centred at `k` with spread `sigma`
/// and position `a`.
pub fn gaussian_1d(p: f64, k: f64, sigma: f64, a: f64) -> Complex64 {
    let n = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25);
    Complex64::from_polar(
        n * (-(p - k) * (p - k) / (4.0 * sigma * sigma)).exp(),
        p * a,
    )
}

/// Trapezoid rule on `n` uniform points over `[lo, hi]`.
pub fn trapezoid(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            w * h * f(lo + i as f64 * h)
        })
        .sum()
}

/// Out-state of a head-on Gaussian pair scattering off a single delta,
/// assembled directly: `t(q) φ(p)` plus `r(|q|) φ(p̄)` with
/// `p̄ = ((μ1-μ2) p1 + 2μ1 p2, 2μ2 p1 + (μ2-μ1) p2)`.
pub struct DeltaOutOracle {
    pub k: f64,
    pub sigma: [f64; 2],
    pub masses: [f64; 2],
    pub strength: f64,
}

impl DeltaOutOracle {
    fn amplitudes(&self, q: f64) -> (Complex64, Complex64) {
        let m = self.masses[0] * self.masses[1] / (self.masses[0] + self.masses[1]);
        let denom = Complex64::new(q, m * self.strength);
        (q / denom, -I * m * self.strength / denom)
    }

    fn phi(&self, p1: f64, p2: f64) -> Complex64 {
        gaussian_1d(p1, self.k, self.sigma[0], 0.0) * gaussian_1d(p2, -self.k, self.sigma[1], 0.0)
    }

    pub fn sample(&self, half_width: [f64; 2], n: usize) -> SampledWavefunction {
        let [m1, m2] = self.masses;
        let (mu1, mu2) = (m1 / (m1 + m2), m2 / (m1 + m2));
        let f = |p1: f64, p2: f64| {
            let q = mu2 * p1 - mu1 * p2;
            if q == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let (t, r) = self.amplitudes(q.abs());
            let b1 = (mu1 - mu2) * p1 + 2.0 * mu1 * p2;
            let b2 = 2.0 * mu2 * p1 + (mu2 - mu1) * p2;
            t * self.phi(p1, p2) + r * self.phi(b1, b2)
        };
        let g1 = Grid1D::centered(0.0, half_width[0], n).unwrap();
        let g2 = Grid1D::centered(0.0, half_width[1], n).unwrap();
        SampledWavefunction::sample(&f, g1, g2, scatent::wavepacket::Basis::Momentum)
    }

    /// `∫ |t(q)|² N(q; k_rel, Δq) dq` with `Δq² = μ2²σ1² + μ1²σ2²`.
    pub fn transmission(&self) -> f64 {
        let [m1, m2] = self.masses;
        let (mu1, mu2) = (m1 / (m1 + m2), m2 / (m1 + m2));
        let q0 = (mu2 + mu1) * self.k;
        let dq = ((mu2 * self.sigma[0]).powi(2) + (mu1 * self.sigma[1]).powi(2)).sqrt();
        let norm = 1.0 / (dq * (2.0 * std::f64::consts::PI).sqrt());
        trapezoid(q0 - 12.0 * dq, q0 + 12.0 * dq, 4001, |q| {
            let (t, _) = self.amplitudes(q);
            t.norm_sqr() * norm * (-(q - q0).powi(2) / (2.0 * dq * dq)).exp()
        })
    }
}
