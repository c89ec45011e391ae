//! Perfect space-time block codes.
//!
//! A codeword is `Z = Σ_v diag(G x_v) E^(v-1)` for `D` input vectors of `D`
//! symbols each, where `G` is unitary and `E` is the cyclic shift with `g` in
//! its bottom-left corner. Entry `(u, c)` of `Z` depends on exactly one input
//! vector, `x_v` with `v - 1 = (c - u) mod D`, and carries the factor `g` iff
//! `c < u`.
//!
//! Generators:
//!
//! * `D = 2`: the Golden code matrix over `Q(√5)`.
//! * `D = 3, 6`: the cyclotomic rotations `(2/√p) cos(π(2i-1)(2j-1)/(2p))`
//!   with `p = 2D + 1` (7 and 13), from `Q(ζ_p + ζ_p⁻¹)`.
//! * `D = 4`: the rotation `(1/√2) cos(π(2i-1)(2j-1)/16)` from
//!   `Q(ζ_32 + ζ_32⁻¹)`.

use std::f64::consts::PI;

use crate::error::{arg, Result};
use crate::{CMatrix, C64};

/// Code dimensions with a known perfect construction.
pub const SUPPORTED_DIMS: [usize; 4] = [2, 3, 4, 6];

const UNITARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct PerfectCodeParams {
    dim: usize,
    g: C64,
    generator: CMatrix,
    shift: CMatrix,
    /// `E^p` for `p = 0..D`.
    shift_powers: Vec<CMatrix>,
}

#[derive(Debug, Clone)]
pub struct PstbcCodeword {
    pub z: CMatrix,
    pub inputs: Vec<Vec<C64>>,
}

impl PstbcCodeword {
    pub fn input_energy(&self) -> f64 {
        self.inputs.iter().flatten().map(|x| x.norm_sqr()).sum()
    }
}

/// The unit-modulus corner element of `E`.
pub fn corner_element(dim: usize) -> Result<C64> {
    let j = C64::from_polar(1.0, 2.0 * PI / 3.0);
    match dim {
        2 | 4 => Ok(C64::i()),
        3 => Ok(j),
        6 => Ok(-j),
        _ => arg(format!("no perfect code for D = {dim}; supported: 2, 3, 4, 6")),
    }
}

fn golden_generator() -> CMatrix {
    let s5 = 5f64.sqrt();
    let theta = (1.0 + s5) / 2.0;
    let theta_bar = (1.0 - s5) / 2.0;
    let i = C64::i();
    let alpha = C64::new(1.0, 0.0) + i - i * theta;
    let alpha_bar = C64::new(1.0, 0.0) + i - i * theta_bar;
    CMatrix::from_row_slice(
        2,
        2,
        &[alpha, alpha * theta, alpha_bar, alpha_bar * theta_bar],
    ) / C64::new(s5, 0.0)
}

fn cosine_rotation(dim: usize, scale: f64, denom: f64) -> CMatrix {
    CMatrix::from_fn(dim, dim, |r, c| {
        let m = ((2 * r + 1) * (2 * c + 1)) as f64;
        C64::new(scale * (PI * m / denom).cos(), 0.0)
    })
}

/// The published generator for dimension `dim`.
pub fn standard_generator(dim: usize) -> Result<CMatrix> {
    Ok(match dim {
        2 => golden_generator(),
        3 => cosine_rotation(3, 2.0 / 7f64.sqrt(), 14.0),
        4 => cosine_rotation(4, 1.0 / 2f64.sqrt(), 16.0),
        6 => cosine_rotation(6, 2.0 / 13f64.sqrt(), 26.0),
        _ => return arg(format!("no perfect code for D = {dim}; supported: 2, 3, 4, 6")),
    })
}

/// `max |G Gᴴ − I|` entrywise.
pub fn unitarity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let prod = m * m.adjoint();
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((prod[(r, c)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

fn shift_matrix(dim: usize, g: C64) -> CMatrix {
    let mut e = CMatrix::zeros(dim, dim);
    for r in 0..dim - 1 {
        e[(r, r + 1)] = C64::new(1.0, 0.0);
    }
    e[(dim - 1, 0)] = g;
    e
}

impl PerfectCodeParams {
    /// Standard parameters for `dim`, with the generator checked for unitarity.
    pub fn build(dim: usize) -> Result<Self> {
        let generator = standard_generator(dim)?;
        let p = Self::with_generator(dim, generator)?;
        let err = unitarity_error(&p.generator);
        if err > UNITARY_TOL {
            return arg(format!("generator for D = {dim} is not unitary (error {err:e})"));
        }
        Ok(p)
    }

    /// Parameters with a caller-supplied generator; unitarity is not checked.
    pub fn with_generator(dim: usize, generator: CMatrix) -> Result<Self> {
        let g = corner_element(dim)?;
        if generator.shape() != (dim, dim) {
            return arg(format!("generator must be {dim}x{dim}"));
        }
        let shift = shift_matrix(dim, g);
        let mut shift_powers = vec![CMatrix::identity(dim, dim)];
        for p in 1..=dim {
            let next = &shift_powers[p - 1] * &shift;
            shift_powers.push(next);
        }
        Ok(Self {
            dim,
            g,
            generator,
            shift,
            shift_powers,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn g(&self) -> C64 {
        self.g
    }

    pub fn generator(&self) -> &CMatrix {
        &self.generator
    }

    pub fn shift(&self) -> &CMatrix {
        &self.shift
    }

    /// `E^p` for `0 ≤ p ≤ D`.
    pub fn shift_power(&self, p: usize) -> &CMatrix {
        &self.shift_powers[p]
    }

    /// `max |E^D − g I|` entrywise.
    pub fn shift_cycle_error(&self) -> f64 {
        let target = CMatrix::identity(self.dim, self.dim) * self.g;
        (&self.shift_powers[self.dim] - target)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Diagonal of `Ω` for the 0-based group `group`: 1 on rows
    /// `u < D - group`, `g` on the remaining rows.
    pub fn omega(&self, group: usize) -> Result<Vec<C64>> {
        if group >= self.dim {
            return arg(format!("group {group} out of range for D = {}", self.dim));
        }
        Ok((0..self.dim)
            .map(|u| if u + group >= self.dim { self.g } else { C64::new(1.0, 0.0) })
            .collect())
    }

    pub fn omega_matrix(&self, group: usize) -> Result<CMatrix> {
        let w = self.omega(group)?;
        Ok(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(w)))
    }

    /// Column of `Z` holding group `group` in row `u`.
    pub fn column_of(&self, group: usize, u: usize) -> usize {
        (u + group) % self.dim
    }

    /// Group feeding entry `(u, c)` of `Z`.
    pub fn group_of(&self, u: usize, c: usize) -> usize {
        (c + self.dim - u) % self.dim
    }

    /// `Z = Σ_v diag(G x_v) E^(v-1)`.
    pub fn encode(&self, inputs: &[Vec<C64>]) -> Result<PstbcCodeword> {
        let d = self.dim;
        if inputs.len() != d || inputs.iter().any(|x| x.len() != d) {
            return arg(format!("perfect code of dimension {d} takes {d} vectors of {d} symbols"));
        }
        let mut z = CMatrix::zeros(d, d);
        for (p, x) in inputs.iter().enumerate() {
            let gx = &self.generator * nalgebra::DVector::from_column_slice(x);
            let diag = CMatrix::from_diagonal(&gx);
            z += diag * &self.shift_powers[p];
        }
        Ok(PstbcCodeword {
            z,
            inputs: inputs.to_vec(),
        })
    }
}
