//! Tensor grids, discrete Fourier transforms and the flat test-function
//! space used by the quantizer.
//!
//! Conventions: the spatial grid on axis a is x_i = -L_a + i h_a with h_a
//! = 2 L_a / N_a; the dual frequency grid is xi_m = (pi / L_a)(m - N_a/2),
//! stored in monotone order. The forward transform carries the volume
//! element, the inverse carries (2 pi)^-1 dxi per axis, so inverse after
//! forward is the identity. Transforms are separable matrix products per
//! axis, which keeps the conventions explicit and exact.

use crate::rng::SplitMix64;
use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    /// Number of axes (d + 1).
    pub dims: usize,
    /// Half-extent L per axis; the grid covers [-L, L).
    pub extent: Vec<f64>,
    /// Points per axis, a power of two >= 8.
    pub size: Vec<usize>,
}

impl GridSpec {
    pub fn new(extent: Vec<f64>, size: Vec<usize>) -> Self {
        assert_eq!(extent.len(), size.len());
        for &n in &size {
            assert!(n >= 8 && n.is_power_of_two(), "grid size {n} must be a power of two >= 8");
        }
        for &l in &extent {
            assert!(l > 0.0);
        }
        GridSpec {
            dims: size.len(),
            extent,
            size,
        }
    }

    pub fn cubic(dims: usize, n: usize, l: f64) -> Self {
        Self::new(vec![l; dims], vec![n; dims])
    }

    pub fn total(&self) -> usize {
        self.size.iter().product()
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        2.0 * self.extent[axis] / self.size[axis] as f64
    }

    pub fn freq_spacing(&self, axis: usize) -> f64 {
        std::f64::consts::PI / self.extent[axis]
    }

    pub fn axis_points(&self, axis: usize) -> Vec<f64> {
        let h = self.spacing(axis);
        (0..self.size[axis])
            .map(|i| -self.extent[axis] + i as f64 * h)
            .collect()
    }

    /// Frequencies in monotone order: xi_m = (pi/L)(m - N/2).
    pub fn axis_freqs(&self, axis: usize) -> Vec<f64> {
        let dxi = self.freq_spacing(axis);
        let n = self.size[axis] as i64;
        (0..n).map(|m| dxi * (m - n / 2) as f64).collect()
    }

    /// Row-major strides (last axis fastest).
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.dims];
        for a in (0..self.dims.saturating_sub(1)).rev() {
            s[a] = s[a + 1] * self.size[a + 1];
        }
        s
    }

    /// Flat index of the zero frequency (m = N/2 on every axis).
    pub fn zero_freq_index(&self) -> usize {
        let strides = self.strides();
        (0..self.dims).map(|a| (self.size[a] / 2) * strides[a]).sum()
    }
}

#[derive(Clone, Debug)]
pub struct GridFn {
    pub spec: GridSpec,
    /// Row-major samples (axis 0 slowest).
    pub data: Vec<Complex64>,
}

impl GridFn {
    pub fn zeros(spec: &GridSpec) -> Self {
        GridFn {
            spec: spec.clone(),
            data: vec![Complex64::new(0.0, 0.0); spec.total()],
        }
    }

    pub fn l2_norm(&self) -> f64 {
        let vol: f64 = (0..self.spec.dims).map(|a| self.spec.spacing(a)).product();
        (self.data.iter().map(|z| z.norm_sqr()).sum::<f64>() * vol).sqrt()
    }

    /// L2 norm over the interior window |x_a| <= L_a / 2.
    pub fn l2_norm_interior(&self) -> f64 {
        let vol: f64 = (0..self.spec.dims).map(|a| self.spec.spacing(a)).product();
        let points: Vec<Vec<f64>> = (0..self.spec.dims).map(|a| self.spec.axis_points(a)).collect();
        let strides = self.spec.strides();
        let mut acc = 0.0;
        let mut idx = vec![0usize; self.spec.dims];
        for (flat, z) in self.data.iter().enumerate() {
            let mut rem = flat;
            for a in 0..self.spec.dims {
                idx[a] = rem / strides[a];
                rem %= strides[a];
            }
            let inside = (0..self.spec.dims)
                .all(|a| points[a][idx[a]].abs() <= self.spec.extent[a] / 2.0);
            if inside {
                acc += z.norm_sqr();
            }
        }
        (acc * vol).sqrt()
    }

    pub fn sub(&self, other: &GridFn) -> GridFn {
        assert_eq!(self.spec, other.spec);
        GridFn {
            spec: self.spec.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Raw little-endian doubles, re/im interleaved, row-major.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.data.len() * 16);
        for z in &self.data {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(spec: &GridSpec, bytes: &[u8]) -> Option<GridFn> {
        if bytes.len() != spec.total() * 16 {
            return None;
        }
        let data = bytes
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..].try_into().unwrap()),
                )
            })
            .collect();
        Some(GridFn {
            spec: spec.clone(),
            data,
        })
    }
}

/// Apply a per-axis transform matrix `w[out][in]` along `axis`.
fn axis_transform(f: &GridFn, axis: usize, w: &[Vec<Complex64>]) -> GridFn {
    let spec = &f.spec;
    let n = spec.size[axis];
    let strides = spec.strides();
    let stride = strides[axis];
    let mut out = GridFn::zeros(spec);
    let outer: usize = spec.total() / n;
    for block in 0..outer {
        // flat index of the first element of this 1-D line
        let lo = block % stride;
        let hi = block / stride;
        let base = hi * stride * n + lo;
        for o in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            let row = &w[o];
            for i in 0..n {
                acc += row[i] * f.data[base + i * stride];
            }
            out.data[base + o * stride] = acc;
        }
    }
    out
}

fn forward_matrix(spec: &GridSpec, axis: usize) -> Vec<Vec<Complex64>> {
    let xs = spec.axis_points(axis);
    let fs = spec.axis_freqs(axis);
    let h = spec.spacing(axis);
    fs.iter()
        .map(|&xi| {
            xs.iter()
                .map(|&x| Complex64::from_polar(h, -x * xi))
                .collect()
        })
        .collect()
}

fn inverse_matrix(spec: &GridSpec, axis: usize) -> Vec<Vec<Complex64>> {
    let xs = spec.axis_points(axis);
    let fs = spec.axis_freqs(axis);
    let scale = spec.freq_spacing(axis) / (2.0 * std::f64::consts::PI);
    xs.iter()
        .map(|&x| {
            fs.iter()
                .map(|&xi| Complex64::from_polar(scale, x * xi))
                .collect()
        })
        .collect()
}

/// hat f(xi) = sum_x e^{-i x xi} f(x) dx over all axes.
pub fn forward_dft(f: &GridFn) -> GridFn {
    let mut g = f.clone();
    for a in 0..f.spec.dims {
        let w = forward_matrix(&f.spec, a);
        g = axis_transform(&g, a, &w);
    }
    g
}

/// f(x) = (2 pi)^-(dims) sum_xi e^{i x xi} hat f(xi) dxi.
pub fn inverse_dft(fhat: &GridFn) -> GridFn {
    let mut g = fhat.clone();
    for a in 0..fhat.spec.dims {
        let w = inverse_matrix(&fhat.spec, a);
        g = axis_transform(&g, a, &w);
    }
    g
}

/// A smooth test function whose transform vanishes to all orders at the
/// zero frequency:
///
/// ```text
/// hat f(xi) = exp(-|xi|^2 - 1/(|xi|^2 - r0^2)) * (g(xi) + conj g(-xi))
/// ```
///
/// for |xi| > r0 and identically zero inside, with g a seeded random
/// complex polynomial of degree two. The hard spectral hole of radius r0
/// (by default 4.4 frequency steps, clear of the order-4 difference
/// stencils) makes the flatness at 0 exact rather than asymptotic; the
/// Hermitian symmetrization of g makes f real.
pub struct S0TestFunction {
    pub values: GridFn,
    pub seed: u64,
    pub hole_radius: f64,
}

pub fn default_hole_radius(spec: &GridSpec) -> f64 {
    4.4 * (0..spec.dims)
        .map(|a| spec.freq_spacing(a))
        .fold(0.0f64, f64::max)
}

pub fn make_s0(spec: &GridSpec, seed: u64) -> S0TestFunction {
    make_s0_with_hole(spec, seed, default_hole_radius(spec))
}

pub fn make_s0_with_hole(spec: &GridSpec, seed: u64, hole_radius: f64) -> S0TestFunction {
    let mut rng = SplitMix64::new(seed);
    let dims = spec.dims;
    // random complex coefficients for monomials of degree <= 2
    let mut monomials: Vec<Vec<usize>> = vec![vec![0; dims]];
    for a in 0..dims {
        let mut m = vec![0; dims];
        m[a] = 1;
        monomials.push(m.clone());
        m[a] = 2;
        monomials.push(m);
        for b in (a + 1)..dims {
            let mut m2 = vec![0; dims];
            m2[a] = 1;
            m2[b] = 1;
            monomials.push(m2);
        }
    }
    let coeffs: Vec<Complex64> = monomials
        .iter()
        .map(|_| Complex64::new(rng.range_f64(-1.0, 1.0), rng.range_f64(-1.0, 1.0)))
        .collect();
    let poly = |xi: &[f64]| -> Complex64 {
        monomials
            .iter()
            .zip(&coeffs)
            .map(|(m, c)| {
                let v: f64 = m
                    .iter()
                    .zip(xi)
                    .map(|(&e, &x)| x.powi(e as i32))
                    .product();
                c * v
            })
            .sum()
    };

    let freqs: Vec<Vec<f64>> = (0..dims).map(|a| spec.axis_freqs(a)).collect();
    let strides = spec.strides();
    let r0sq = hole_radius * hole_radius;
    let mut fhat = GridFn::zeros(spec);
    let mut xi = vec![0.0; dims];
    let mut neg = vec![0.0; dims];
    for flat in 0..spec.total() {
        let mut rem = flat;
        let mut unpaired = false;
        for a in 0..dims {
            let idx = rem / strides[a];
            rem %= strides[a];
            // the lowest frequency -N/2 has no positive partner on the
            // grid; drop it to keep hermitian symmetry exact
            unpaired |= idx == 0;
            xi[a] = freqs[a][idx];
            neg[a] = -xi[a];
        }
        if unpaired {
            continue;
        }
        let r2: f64 = xi.iter().map(|v| v * v).sum();
        if r2 <= r0sq {
            continue;
        }
        let env = (-r2 - 1.0 / (r2 - r0sq)).exp();
        if env == 0.0 {
            continue;
        }
        let g = poly(&xi) + poly(&neg).conj();
        fhat.data[flat] = g * env;
    }
    let mut values = inverse_dft(&fhat);
    let norm = values.l2_norm();
    if norm > 0.0 {
        for z in values.data.iter_mut() {
            *z /= norm;
        }
    }
    S0TestFunction {
        values,
        seed,
        hole_radius,
    }
}

/// Max over multi-indices |alpha| <= 4 of the central-difference estimate
/// of |D^alpha hat f(0)|, relative to the peak of |hat f|.
pub fn s0_flatness_defect(f: &GridFn) -> f64 {
    let fhat = forward_dft(f);
    let spec = &fhat.spec;
    let dims = spec.dims;
    let strides = spec.strides();
    let center: Vec<usize> = (0..dims).map(|a| spec.size[a] / 2).collect();
    let peak = fhat.data.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if peak == 0.0 {
        return 0.0;
    }

    // central difference along one axis applied `k` times, on the lattice
    fn diff(
        fhat: &GridFn,
        strides: &[usize],
        center: &[usize],
        orders: &[usize],
        dxi: &[f64],
    ) -> Complex64 {
        // tensor product of per-axis stencils (E - E^-1)^k / (2 dxi)^k
        let dims = orders.len();
        let mut scale = 1.0;
        let mut axis_offsets: Vec<Vec<(i64, f64)>> = Vec::with_capacity(dims);
        for (a, &k) in orders.iter().enumerate() {
            let mut st = Vec::new();
            for j in 0..=k {
                let c = binom(k, j) * if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
                st.push((2 * j as i64 - k as i64, c));
            }
            scale *= (2.0 * dxi[a]).powi(k as i32);
            axis_offsets.push(st);
        }
        // iterate the tensor product of stencils
        let mut total = Complex64::new(0.0, 0.0);
        let mut counters = vec![0usize; dims];
        'outer: loop {
            let mut coeff = 1.0;
            let mut flat: i64 = 0;
            for a in 0..dims {
                let (off, c) = axis_offsets[a][counters[a]];
                coeff *= c;
                flat += (center[a] as i64 + off) * strides[a] as i64;
            }
            total += fhat.data[flat as usize] * coeff;
            for a in (0..dims).rev() {
                counters[a] += 1;
                if counters[a] < axis_offsets[a].len() {
                    continue 'outer;
                }
                counters[a] = 0;
                if a == 0 {
                    break 'outer;
                }
            }
        }
        total / scale
    }

    fn binom(n: usize, k: usize) -> f64 {
        let mut acc = 1.0;
        for i in 0..k {
            acc = acc * (n - i) as f64 / (i + 1) as f64;
        }
        acc
    }

    let dxi: Vec<f64> = (0..dims).map(|a| spec.freq_spacing(a)).collect();
    let mut worst = 0.0f64;
    let mut orders = vec![0usize; dims];
    fn enumerate(
        orders: &mut Vec<usize>,
        axis: usize,
        remaining: usize,
        fhat: &GridFn,
        strides: &[usize],
        center: &[usize],
        dxi: &[f64],
        worst: &mut f64,
        peak: f64,
    ) {
        if axis == orders.len() {
            let d = diff(fhat, strides, center, orders, dxi);
            *worst = (*worst).max(d.norm() / peak);
            return;
        }
        for k in 0..=remaining {
            orders[axis] = k;
            enumerate(
                orders,
                axis + 1,
                remaining - k,
                fhat,
                strides,
                center,
                dxi,
                worst,
                peak,
            );
        }
        orders[axis] = 0;
    }
    enumerate(
        &mut orders, 0, 4, &fhat, &strides, &center, &dxi, &mut worst, peak,
    );
    worst
}
