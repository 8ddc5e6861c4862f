//! Homogeneous symbols, full symbols of the model frame, and the grid
//! realization of p(sigma(x, -iD)) acting on flat test functions.
//!
//! The quantized operator is
//!
//! ```text
//! P f(x) = (2 pi)^-(d+1) sum_xi e^{i x.xi} m(x, xi) hat f(xi) dxi,
//! m(x, xi) = p(sigma(x, xi)),
//! ```
//!
//! with the zero frequency dropped (all admitted test functions are flat
//! there). The multiplier of a model-frame operator never depends on x0,
//! which lets the x0 phase sum factor out: the inner sums run over
//! (x', xi) pairs and the x0 axis is restored by a final 1-D transform.
//! That factored path is what makes 64^3 grids affordable; a direct per-x
//! summation is kept for general multipliers on small grids.

use crate::geometry::{HeisenbergChart, LeviData};
use crate::grid::{forward_dft, inverse_dft, GridFn, GridSpec};
use crate::par;
use num_complex::Complex64;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum QuantizeError {
    #[error("grid function does not match the grid spec")]
    SpecMismatch,
    #[error("matrix symbols are not supported on grids (size {0})")]
    MatrixSymbol(usize),
    #[error("symbol dimension {0} does not match grid dimension {1}")]
    DimensionMismatch(usize, usize),
    #[error("symbol not evaluable on part of the frequency grid")]
    SymbolDomain,
}

// ---------------------------------------------------------------------------
// Homogeneous symbols
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolOrigin {
    Sublaplacian,
    Parametrix,
    UserDefined,
}

/// Angular lookup table for a degree -2 symbol that depends on xi only
/// through (xi_0, |xi'|^2): values of q on the quarter circle
/// (xi_0, |xi'|^2) = (cos psi, sin psi), psi in [0, pi], interpolated
/// cubically. Built by the parametrix engine when the Levi data has a
/// single conjugate pair and no kernel directions.
#[derive(Clone, Debug)]
pub struct RadialTable {
    values: Vec<Complex64>,
}

impl RadialTable {
    pub fn build<F: Fn(f64) -> Complex64>(samples: usize, f: F) -> Self {
        Self::try_build(samples, |psi| Some(f(psi))).unwrap()
    }

    /// Build from a fallible sampler; None anywhere aborts the table (the
    /// caller falls back to pointwise evaluation).
    pub fn try_build<F: Fn(f64) -> Option<Complex64>>(samples: usize, f: F) -> Option<Self> {
        assert!(samples >= 16);
        let step = std::f64::consts::PI / (samples - 1) as f64;
        let values = (0..samples)
            .map(|i| f(i as f64 * step))
            .collect::<Option<Vec<_>>>()?;
        Some(RadialTable { values })
    }

    /// Evaluate at xi_0 = c, |xi'|^2 = rho >= 0.
    #[inline]
    pub fn eval(&self, c: f64, rho: f64) -> Complex64 {
        let r = (c * c + rho * rho).sqrt();
        if r == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let psi = rho.atan2(c); // in [0, pi] since rho >= 0
        let m = self.values.len() - 1;
        let t = psi / std::f64::consts::PI * m as f64;
        let i = (t as usize).min(m - 1);
        let frac = t - i as f64;
        // 4-point Lagrange on the uniform grid, clamped at the ends
        let i0 = i.saturating_sub(1);
        let i2 = (i + 1).min(m);
        let i3 = (i + 2).min(m);
        let (p0, p1, p2, p3) = (
            self.values[i0],
            self.values[i],
            self.values[i2],
            self.values[i3],
        );
        let x = frac;
        let c0 = -x * (x - 1.0) * (x - 2.0) / 6.0;
        let c1 = (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0;
        let c2 = -(x + 1.0) * x * (x - 2.0) / 2.0;
        let c3 = (x + 1.0) * x * (x - 1.0) / 6.0;
        let val = if i == 0 {
            // linear fallback at the very first cell (no left neighbor)
            p1 * (1.0 - x) + p2 * x
        } else {
            p0 * c0 + p1 * c1 + p2 * c2 + p3 * c3
        };
        val / r
    }
}

#[derive(Clone)]
pub enum SymbolEval {
    Scalar(Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>),
    Matrix {
        size: usize,
        eval: Arc<dyn Fn(&[f64]) -> Vec<Vec<Complex64>> + Send + Sync>,
    },
    /// Scalar degree -2 symbol factoring through (xi_0, |xi'|^2).
    Radial(RadialTable),
}

/// A positively homogeneous function of xi = (xi_0, xi') under the
/// anisotropic dilations (t^2 xi_0, t xi'), with an evaluation callback.
#[derive(Clone)]
pub struct HomogeneousSymbol {
    /// Anisotropic homogeneity degree.
    pub degree: f64,
    /// Number of xi arguments (d + 1).
    pub dim: usize,
    pub origin: SymbolOrigin,
    pub eval: SymbolEval,
}

impl HomogeneousSymbol {
    pub fn scalar<F>(dim: usize, degree: f64, origin: SymbolOrigin, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    {
        HomogeneousSymbol {
            degree,
            dim,
            origin,
            eval: SymbolEval::Scalar(Arc::new(f)),
        }
    }

    pub fn size(&self) -> usize {
        match &self.eval {
            SymbolEval::Matrix { size, .. } => *size,
            _ => 1,
        }
    }

    pub fn eval_scalar(&self, xi: &[f64]) -> Complex64 {
        match &self.eval {
            SymbolEval::Scalar(f) => f(xi),
            SymbolEval::Radial(t) => {
                let rho: f64 = xi[1..].iter().map(|v| v * v).sum();
                t.eval(xi[0], rho)
            }
            SymbolEval::Matrix { .. } => panic!("matrix symbol evaluated as scalar"),
        }
    }

    pub fn eval_matrix(&self, xi: &[f64]) -> Vec<Vec<Complex64>> {
        match &self.eval {
            SymbolEval::Matrix { eval, .. } => eval(xi),
            _ => vec![vec![self.eval_scalar(xi)]],
        }
    }

    /// Worst relative homogeneity defect |p(t.xi) - t^m p(xi)| / |t^m
    /// p(xi)| over the given sample points and t in {2, 1/2}.
    pub fn homogeneity_defect(&self, samples: &[Vec<f64>]) -> f64 {
        let mut worst = 0.0f64;
        for xi in samples {
            let base = self.eval_matrix(xi);
            for t in [2.0f64, 0.5] {
                let scaled: Vec<f64> = xi
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| if i == 0 { t * t * v } else { t * v })
                    .collect();
                let lhs = self.eval_matrix(&scaled);
                let factor = t.powf(self.degree);
                for (lr, br) in lhs.iter().zip(&base) {
                    for (l, b) in lr.iter().zip(br) {
                        let want = b * factor;
                        let denom = want.norm().max(1e-300);
                        worst = worst.max((l - want).norm() / denom);
                    }
                }
            }
        }
        worst
    }
}

// ---------------------------------------------------------------------------
// Model full symbols
// ---------------------------------------------------------------------------

/// Classical full symbols of the model frame (1/i) X_j^a:
/// sigma_0 = xi_0 and sigma_j = xi_j - 1/2 sum_k L_jk x_k xi_0.
#[derive(Clone, Debug)]
pub struct ModelSymbols {
    /// d+1 coordinates.
    pub dim: usize,
    /// `c[j][k] = -L_jk / 2`, so sigma_j = xi_j + (c x')_j xi_0.
    pub coupling: Vec<Vec<f64>>,
}

pub fn model_full_symbols(chart: &HeisenbergChart) -> ModelSymbols {
    ModelSymbols::from_levi(&chart.levi)
}

impl ModelSymbols {
    pub fn from_levi(levi: &LeviData) -> Self {
        let d = levi.dim_h();
        let coupling = (0..d)
            .map(|j| {
                (0..d)
                    .map(|k| -levi.matrix[j][k].to_f64() / 2.0)
                    .collect()
            })
            .collect();
        ModelSymbols {
            dim: d + 1,
            coupling,
        }
    }

    pub fn abelian(dim: usize) -> Self {
        ModelSymbols {
            dim,
            coupling: vec![vec![0.0; dim - 1]; dim - 1],
        }
    }

    /// sigma(x, xi) for full (d+1)-vectors; x_0 is ignored by construction.
    pub fn eval(&self, x: &[f64], xi: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(x, xi, &mut out);
        out
    }

    #[inline]
    pub fn eval_into(&self, x: &[f64], xi: &[f64], out: &mut [f64]) {
        let d = self.dim - 1;
        out[0] = xi[0];
        for j in 0..d {
            let mut v = xi[1 + j];
            let row = &self.coupling[j];
            for k in 0..d {
                v += row[k] * x[1 + k] * xi[0];
            }
            out[1 + j] = v;
        }
    }

    /// The drift (c x')_j, used by the factored quantizer.
    fn drift(&self, x_prime: &[f64]) -> Vec<f64> {
        self.coupling
            .iter()
            .map(|row| row.iter().zip(x_prime).map(|(c, x)| c * x).sum())
            .collect()
    }
}

/// Principal symbol of the model sublaplacian -sum X_j^2 - i mu X_0 as a
/// degree 2 homogeneous symbol: |xi'|^2 + mu xi_0.
pub fn sublaplacian_principal_symbol(dim: usize, mu: Complex64) -> HomogeneousSymbol {
    HomogeneousSymbol::scalar(dim, 2.0, SymbolOrigin::Sublaplacian, move |xi| {
        let quad: f64 = xi[1..].iter().map(|v| v * v).sum();
        Complex64::new(quad, 0.0) + mu * xi[0]
    })
}

// ---------------------------------------------------------------------------
// Grid multipliers
// ---------------------------------------------------------------------------

/// A multiplier m(x, xi) ready for quantization. `x0_independent` gates
/// the factored fast path; model-frame compositions always satisfy it.
pub trait GridSymbol: Sync {
    fn eval(&self, x: &[f64], xi: &[f64]) -> Complex64;
    fn x0_independent(&self) -> bool {
        true
    }

    /// Fill `out[k] = m(x, xi)` with the last xi component replaced by
    /// `last_values[k]`. The default skips xi = 0 (degree-negative symbols
    /// are singular there and the zero fiber never contributes).
    fn eval_last_axis_row(
        &self,
        x: &[f64],
        xi: &mut [f64],
        last_values: &[f64],
        out: &mut [Complex64],
    ) {
        let n = xi.len();
        let prefix_zero = xi[..n - 1].iter().all(|&v| v == 0.0);
        for (k, &v) in last_values.iter().enumerate() {
            xi[n - 1] = v;
            out[k] = if prefix_zero && v == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                self.eval(x, xi)
            };
        }
    }
}

/// p(sigma(x, xi)) for a scalar homogeneous symbol p.
pub struct ComposedSymbol<'a> {
    pub symbol: &'a HomogeneousSymbol,
    pub model: &'a ModelSymbols,
}

impl GridSymbol for ComposedSymbol<'_> {
    fn eval(&self, x: &[f64], xi: &[f64]) -> Complex64 {
        let mut buf = [0.0f64; 16];
        if self.model.dim <= 16 {
            self.model.eval_into(x, xi, &mut buf[..self.model.dim]);
            self.symbol.eval_scalar(&buf[..self.model.dim])
        } else {
            let sigma = self.model.eval(x, xi);
            self.symbol.eval_scalar(&sigma)
        }
    }

    fn eval_last_axis_row(
        &self,
        x: &[f64],
        xi: &mut [f64],
        last_values: &[f64],
        out: &mut [Complex64],
    ) {
        let dim = self.model.dim;
        let SymbolEval::Radial(table) = &self.symbol.eval else {
            // generic route point by point
            let n = xi.len();
            let prefix_zero = xi[..n - 1].iter().all(|&v| v == 0.0);
            for (k, &v) in last_values.iter().enumerate() {
                xi[n - 1] = v;
                out[k] = if prefix_zero && v == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    self.eval(x, xi)
                };
            }
            return;
        };
        // radial fast lane: only sigma_last varies along the row, by the
        // same shift for every entry
        debug_assert!(dim <= 16);
        let mut sig = [0.0f64; 16];
        self.model.eval_into(x, xi, &mut sig[..dim]);
        let xi0 = xi[0];
        let shift = sig[dim - 1] - xi[dim - 1];
        let partial_rho: f64 = sig[1..dim - 1].iter().map(|s| s * s).sum();
        for (k, &v) in last_values.iter().enumerate() {
            let sl = v + shift;
            out[k] = table.eval(xi0, partial_rho + sl * sl);
        }
    }
}

/// sigma_2 of the model sublaplacian: sum_j sigma_j^2 + mu xi_0.
pub struct SublaplacianSymbol {
    pub model: ModelSymbols,
    pub mu: Complex64,
}

impl GridSymbol for SublaplacianSymbol {
    fn eval(&self, x: &[f64], xi: &[f64]) -> Complex64 {
        let mut buf = [0.0f64; 16];
        let quad: f64 = if self.model.dim <= 16 {
            self.model.eval_into(x, xi, &mut buf[..self.model.dim]);
            buf[1..self.model.dim].iter().map(|s| s * s).sum()
        } else {
            self.model.eval(x, xi)[1..].iter().map(|s| s * s).sum()
        };
        Complex64::new(quad, 0.0) + self.mu * xi[0]
    }
}

/// Multiplication operator p(x) (xi-independent), for contract tests.
pub struct PointwiseSymbol<F: Fn(&[f64]) -> Complex64 + Sync> {
    pub f: F,
    pub depends_on_x0: bool,
}

impl<F: Fn(&[f64]) -> Complex64 + Sync> GridSymbol for PointwiseSymbol<F> {
    fn eval(&self, x: &[f64], _xi: &[f64]) -> Complex64 {
        (self.f)(x)
    }
    fn x0_independent(&self) -> bool {
        !self.depends_on_x0
    }
}

// ---------------------------------------------------------------------------
// Quantized application
// ---------------------------------------------------------------------------

/// Execution lane for the grid loops: the default follows the `parallel`
/// feature, the sequential lane exists for baselines and benchmarks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Parallel,
    Sequential,
}

fn dispatch<T: Send, F: Fn(usize) -> T + Sync + Send>(mode: ExecMode, n: usize, f: F) -> Vec<T> {
    match mode {
        ExecMode::Parallel => par::map_indexed(n, f),
        ExecMode::Sequential => par::map_indexed_seq(n, f),
    }
}

/// Apply the quantization of `m` to `f`. Uses the x0-factored path when
/// the multiplier allows it, the direct per-point path otherwise.
pub fn quantize_apply<S: GridSymbol>(
    m: &S,
    spec: &GridSpec,
    f: &GridFn,
) -> Result<GridFn, QuantizeError> {
    quantize_apply_with_mode(m, spec, f, ExecMode::Parallel)
}

pub fn quantize_apply_with_mode<S: GridSymbol>(
    m: &S,
    spec: &GridSpec,
    f: &GridFn,
    mode: ExecMode,
) -> Result<GridFn, QuantizeError> {
    if f.spec != *spec {
        return Err(QuantizeError::SpecMismatch);
    }
    let mut fhat = forward_dft(f);
    // zero-frequency fiber carries no information for flat test functions
    let zf = spec.zero_freq_index();
    fhat.data[zf] = Complex64::new(0.0, 0.0);
    if m.x0_independent() {
        Ok(apply_factored(m, spec, &fhat, mode))
    } else {
        Ok(apply_direct(m, spec, &fhat, mode))
    }
}

/// Factored path: S(x', i0) = sum_{xi'} e^{i x'.xi'} m(x', xi) hat f(xi)
/// then P f(x0, x') = (2 pi)^-(d+1) dxi * sum_{i0} e^{i x0 xi_0} S(x', i0).
fn apply_factored<S: GridSymbol>(m: &S, spec: &GridSpec, fhat: &GridFn, mode: ExecMode) -> GridFn {
    let dims = spec.dims;
    let n0 = spec.size[0];
    let points: Vec<Vec<f64>> = (0..dims).map(|a| spec.axis_points(a)).collect();
    let freqs: Vec<Vec<f64>> = (0..dims).map(|a| spec.axis_freqs(a)).collect();
    // phase tables for the spatial axes 1..dims: e^{i x xi}
    let phases: Vec<Vec<Vec<Complex64>>> = (1..dims)
        .map(|a| {
            points[a]
                .iter()
                .map(|&x| {
                    freqs[a]
                        .iter()
                        .map(|&xi| Complex64::from_polar(1.0, x * xi))
                        .collect()
                })
                .collect()
        })
        .collect();

    let prime_sizes: Vec<usize> = spec.size[1..].to_vec();
    let n_prime: usize = prime_sizes.iter().product();
    let nxi_prime: usize = n_prime;
    let scale: f64 = (0..dims)
        .map(|a| spec.freq_spacing(a) / (2.0 * std::f64::consts::PI))
        .product();

    // S rows, one per x' point: [n0] complex values. The innermost xi
    // axis runs as a contiguous row: the multiplier fills a bulk row
    // buffer and a tight loop contracts it with the phases and hat f.
    let last = dims - 1; // axis index of the innermost xi axis
    let n_last = spec.size[last];
    let n_pre: usize = nxi_prime / n_last;
    let pre_sizes: Vec<usize> = spec.size[1..last].to_vec();
    let rows: Vec<Vec<Complex64>> = dispatch(mode, n_prime, |xp_flat| {
        let mut idx = vec![0usize; dims - 1];
        let mut rem = xp_flat;
        for a in (0..dims - 1).rev() {
            idx[a] = rem % prime_sizes[a];
            rem /= prime_sizes[a];
        }
        // x vector (x0 unused by the multiplier)
        let mut x = vec![0.0; dims];
        for a in 0..dims - 1 {
            x[1 + a] = points[1 + a][idx[a]];
        }
        let phase_last = &phases[last - 1][idx[last - 1]];
        let mut xi = vec![0.0; dims];
        let mut mrow = vec![Complex64::new(0.0, 0.0); n_last];
        let mut row = vec![Complex64::new(0.0, 0.0); n0];
        for (i0, row_val) in row.iter_mut().enumerate() {
            xi[0] = freqs[0][i0];
            let mut acc = Complex64::new(0.0, 0.0);
            for pre in 0..n_pre {
                // prefix phase over the non-innermost xi' axes
                let mut prefix_phase = Complex64::new(1.0, 0.0);
                let mut rem = pre;
                for a in (0..pre_sizes.len()).rev() {
                    let k = rem % pre_sizes[a];
                    rem /= pre_sizes[a];
                    xi[1 + a] = freqs[1 + a][k];
                    prefix_phase *= phases[a][idx[a]][k];
                }
                let base = i0 * nxi_prime + pre * n_last;
                let frow = &fhat.data[base..base + n_last];
                if frow.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
                    continue;
                }
                m.eval_last_axis_row(&x, &mut xi, &freqs[last], &mut mrow);
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..n_last {
                    let fv = frow[k];
                    if fv.re != 0.0 || fv.im != 0.0 {
                        s += phase_last[k] * mrow[k] * fv;
                    }
                }
                acc += prefix_phase * s;
            }
            *row_val = acc;
        }
        row
    });

    // final x0 transform
    let mut out = GridFn::zeros(spec);
    let x0_phase: Vec<Vec<Complex64>> = points[0]
        .iter()
        .map(|&x| {
            freqs[0]
                .iter()
                .map(|&xi| Complex64::from_polar(scale, x * xi))
                .collect()
        })
        .collect();
    for (i_x0, w) in x0_phase.iter().enumerate() {
        for (xp_flat, row) in rows.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m0, &ph) in w.iter().enumerate() {
                acc += ph * row[m0];
            }
            out.data[i_x0 * n_prime + xp_flat] = acc;
        }
    }
    out
}

/// Direct per-point summation, valid for arbitrary multipliers. Cost is
/// O(points^2); intended for small grids and contract tests.
fn apply_direct<S: GridSymbol>(m: &S, spec: &GridSpec, fhat: &GridFn, mode: ExecMode) -> GridFn {
    let dims = spec.dims;
    let points: Vec<Vec<f64>> = (0..dims).map(|a| spec.axis_points(a)).collect();
    let freqs: Vec<Vec<f64>> = (0..dims).map(|a| spec.axis_freqs(a)).collect();
    let strides = spec.strides();
    let scale: f64 = (0..dims)
        .map(|a| spec.freq_spacing(a) / (2.0 * std::f64::consts::PI))
        .product();
    let total = spec.total();
    let data = dispatch(mode, total, |x_flat| {
        let mut x = vec![0.0; dims];
        let mut rem = x_flat;
        for a in 0..dims {
            x[a] = points[a][rem / strides[a]];
            rem %= strides[a];
        }
        let mut xi = vec![0.0; dims];
        let mut acc = Complex64::new(0.0, 0.0);
        for (xi_flat, fv) in fhat.data.iter().enumerate() {
            if fv.re == 0.0 && fv.im == 0.0 {
                continue;
            }
            let mut rem = xi_flat;
            let mut dot = 0.0;
            for a in 0..dims {
                xi[a] = freqs[a][rem / strides[a]];
                rem %= strides[a];
                dot += x[a] * xi[a];
            }
            acc += Complex64::from_polar(scale, dot) * m.eval(&x, &xi) * fv;
        }
        acc
    });
    GridFn {
        spec: spec.clone(),
        data,
    }
}

/// The model sublaplacian applied spectrally through its polynomial
/// symbol, using the separable structure: a handful of xi-multipliers and
/// x'-multiplications instead of a per-point frequency sum.
pub struct SublaplacianGridOp {
    pub model: ModelSymbols,
    pub mu: Complex64,
}

impl SublaplacianGridOp {
    pub fn apply(&self, spec: &GridSpec, f: &GridFn) -> Result<GridFn, QuantizeError> {
        if f.spec != *spec {
            return Err(QuantizeError::SpecMismatch);
        }
        if self.model.dim != spec.dims {
            return Err(QuantizeError::DimensionMismatch(self.model.dim, spec.dims));
        }
        let dims = spec.dims;
        let d = dims - 1;
        let mut fhat = forward_dft(f);
        fhat.data[spec.zero_freq_index()] = Complex64::new(0.0, 0.0);
        let freqs: Vec<Vec<f64>> = (0..dims).map(|a| spec.axis_freqs(a)).collect();
        let strides = spec.strides();
        let xi_at = |flat: usize, axis: usize| freqs[axis][(flat / strides[axis]) % spec.size[axis]];

        // base multiplier sum_j xi_j^2 + mu xi_0
        let mut term = fhat.clone();
        for (flat, v) in term.data.iter_mut().enumerate() {
            let mut quad = 0.0;
            for j in 1..dims {
                let x = xi_at(flat, j);
                quad += x * x;
            }
            *v *= Complex64::new(quad, 0.0) + self.mu * xi_at(flat, 0);
        }
        let mut out = inverse_dft(&term);

        // cross terms 2 (c x')_j xi_j xi_0 and the square (c x')^2 xi_0^2
        let points: Vec<Vec<f64>> = (0..dims).map(|a| spec.axis_points(a)).collect();
        let drift_rows: Vec<Vec<f64>> = (0..d)
            .map(|j| {
                // (c x')_j evaluated on the x grid, flattened over x'
                let prime_sizes: Vec<usize> = spec.size[1..].to_vec();
                let n_prime: usize = prime_sizes.iter().product();
                (0..n_prime)
                    .map(|flat| {
                        let mut rem = flat;
                        let mut xp = vec![0.0; d];
                        for a in (0..d).rev() {
                            xp[a] = points[1 + a][rem % prime_sizes[a]];
                            rem /= prime_sizes[a];
                        }
                        self.model.drift(&xp)[j]
                    })
                    .collect()
            })
            .collect();
        let n_prime: usize = spec.size[1..].iter().product();

        for j in 0..d {
            let mut t = fhat.clone();
            for (flat, v) in t.data.iter_mut().enumerate() {
                let x0 = xi_at(flat, 0);
                let xj = xi_at(flat, 1 + j);
                *v *= Complex64::new(2.0 * xj * x0, 0.0);
            }
            let ti = inverse_dft(&t);
            for (flat, v) in ti.data.iter().enumerate() {
                out.data[flat] += v * drift_rows[j][flat % n_prime];
            }
        }

        let mut t = fhat.clone();
        for (flat, v) in t.data.iter_mut().enumerate() {
            let x0 = xi_at(flat, 0);
            *v *= Complex64::new(x0 * x0, 0.0);
        }
        let ti = inverse_dft(&t);
        for (flat, v) in ti.data.iter().enumerate() {
            let xp = flat % n_prime;
            let w2: f64 = (0..d).map(|j| drift_rows[j][xp] * drift_rows[j][xp]).sum();
            out.data[flat] += v * w2;
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Inversion verification
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct InversionReport {
    /// (seed, e1, e2) with e1 = |Delta(Q f) - f| / |f| and e2 with the
    /// operators swapped, both over the interior window.
    pub trials: Vec<(u64, f64, f64)>,
    pub max_error: f64,
}

/// Drive the composed parametrix multiplier against the model
/// sublaplacian on flat test functions.
pub fn verify_inverse(
    qsym: &HomogeneousSymbol,
    delta: &SublaplacianGridOp,
    spec: &GridSpec,
    seeds: &[u64],
) -> Result<InversionReport, QuantizeError> {
    if qsym.size() != 1 {
        return Err(QuantizeError::MatrixSymbol(qsym.size()));
    }
    if qsym.dim != spec.dims {
        return Err(QuantizeError::DimensionMismatch(qsym.dim, spec.dims));
    }
    let composed = ComposedSymbol {
        symbol: qsym,
        model: &delta.model,
    };
    let mut trials = Vec::with_capacity(seeds.len());
    let mut max_error = 0.0f64;
    for &seed in seeds {
        let f = crate::grid::make_s0(spec, seed).values;
        let norm = f.l2_norm_interior();
        let qf = quantize_apply(&composed, spec, &f)?;
        if qf.data.iter().any(|z| z.re.is_nan() || z.im.is_nan()) {
            return Err(QuantizeError::SymbolDomain);
        }
        let dqf = delta.apply(spec, &qf)?;
        let e1 = dqf.sub(&f).l2_norm_interior() / norm;
        let df = delta.apply(spec, &f)?;
        let qdf = quantize_apply(&composed, spec, &df)?;
        let e2 = qdf.sub(&f).l2_norm_interior() / norm;
        if !e1.is_finite() || !e2.is_finite() {
            return Err(QuantizeError::SymbolDomain);
        }
        max_error = max_error.max(e1).max(e2);
        trials.push((seed, e1, e2));
    }
    Ok(InversionReport { trials, max_error })
}
