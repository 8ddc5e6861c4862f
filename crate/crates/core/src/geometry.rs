//! Frames, Levi forms and the coordinate changes that bring a frame into
//! its canonical model shape at a point.
//!
//! An [`HFrame`] is d+1 vector fields X0..Xd on a chart with expression
//! coefficients, X1..Xd spanning the hyperplane bundle and X0 transverse.
//! From a frame and a base point this module computes the Levi matrix and
//! its eigenstructure, the privileged (affine) and Heisenberg (quadratic)
//! coordinate changes, and the model frame, all in exact arithmetic when
//! the frame is polynomial with rational coefficients.

use crate::expr::{parse, Expr, ExprError};
use crate::jet::WeightedJet;
use crate::linalg::{self, LinalgError, Mat};
use crate::polymap::{pushforward, PolyMap, EXACT_ORDER};
use crate::scalar::Scalar;
use crate::vecfield::{bracket, dilate_pullback, leading_part, PolyVectorField, VecFieldError};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Default weighted truncation order for chart computations. Everything
/// the model construction needs lives in weighted degree <= 3; one extra
/// order gives the approximation report room to see first corrections.
pub const WORK_ORDER: u32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum GeomError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    VecField(#[from] VecFieldError),
    #[error("frame matrix B is singular at {0:?}")]
    SingularFrame(Vec<f64>),
    #[error("frame needs {want} fields of {want} coefficients, got {got}")]
    FrameShape { want: usize, got: usize },
    #[error("positive eigenvalues of -L^2 did not pair up (count {0})")]
    EigenPairing(usize),
}

#[derive(Clone, Debug)]
pub struct HFrame {
    dim: usize, // d + 1
    fields: Vec<Vec<Expr>>,
    sample_points: Vec<Vec<Scalar>>,
}

impl HFrame {
    pub fn new(dim: usize, fields: Vec<Vec<Expr>>) -> Result<Self, GeomError> {
        if fields.len() != dim || fields.iter().any(|row| row.len() != dim) {
            return Err(GeomError::FrameShape {
                want: dim,
                got: fields.len(),
            });
        }
        Ok(HFrame {
            dim,
            fields,
            sample_points: Vec::new(),
        })
    }

    /// Parse a frame from coefficient-expression sources; `rows[j][k]` is
    /// the coefficient of d/dx_k in X_j. The frame condition is validated
    /// at the chart center (the origin) and at every declared sample point.
    pub fn from_sources(
        dim: usize,
        rows: &[Vec<String>],
        sample_points: Vec<Vec<Scalar>>,
    ) -> Result<Self, GeomError> {
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(GeomError::FrameShape {
                want: dim,
                got: rows.len(),
            });
        }
        let fields = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|src| parse(src, dim))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let frame = HFrame {
            dim,
            fields,
            sample_points,
        };
        let center = vec![Scalar::zero(); dim];
        frame.validate_at(&center)?;
        let samples = frame.sample_points.clone();
        for p in &samples {
            frame.validate_at(p)?;
        }
        Ok(frame)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fields(&self) -> &[Vec<Expr>] {
        &self.fields
    }

    pub fn sample_points(&self) -> &[Vec<Scalar>] {
        &self.sample_points
    }

    /// Coefficient matrix B(x): row j holds the coefficients of X_j.
    pub fn b_matrix(&self, point: &[Scalar]) -> Result<Mat, GeomError> {
        self.fields
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| Ok(e.eval_jet(point, 0)?.constant_term()))
                    .collect::<Result<Vec<_>, GeomError>>()
            })
            .collect()
    }

    fn validate_at(&self, point: &[Scalar]) -> Result<(), GeomError> {
        let b = self.b_matrix(point)?;
        linalg::invert(&b).map_err(|_| {
            GeomError::SingularFrame(point.iter().map(Scalar::to_f64).collect())
        })?;
        Ok(())
    }

    /// Jets of all frame fields at `point`, as vector fields in the
    /// centered coordinates x - point.
    pub fn field_jets(
        &self,
        point: &[Scalar],
        order: u32,
    ) -> Result<Vec<PolyVectorField>, GeomError> {
        self.fields
            .iter()
            .map(|row| {
                let coeffs = row
                    .iter()
                    .map(|e| e.eval_jet(point, order))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(PolyVectorField::new(coeffs))
            })
            .collect()
    }
}

/// Levi matrix at a point with its eigenstructure.
#[derive(Clone, Debug)]
pub struct LeviData {
    pub point: Vec<Scalar>,
    /// d x d antisymmetric matrix with [X_j, X_k] = L_jk X_0 mod H.
    pub matrix: Mat,
    /// Positive eigenvalues of |L|, one per conjugate pair, descending.
    pub lambdas: Vec<Scalar>,
    /// Rank of L, always even (= 2n).
    pub rank: usize,
    /// Trace |L| = 2 * sum of lambdas.
    pub trace_abs: Scalar,
    /// Orthogonal change of frame O with O^t L O in block normal form
    /// `[[0, D], [-D, 0], [0]]` (columns: n "v" vectors, n "u" vectors,
    /// then the kernel).
    pub normal_frame: Vec<Vec<f64>>,
}

impl LeviData {
    pub fn n_pairs(&self) -> usize {
        self.rank / 2
    }

    pub fn dim_h(&self) -> usize {
        self.matrix.len()
    }

    pub fn lambdas_f64(&self) -> Vec<f64> {
        self.lambdas.iter().map(Scalar::to_f64).collect()
    }

    /// Build the data directly from a positive eigenvalue list, placing L
    /// in its block normal form on R^d. Used by criteria sweeps and tests
    /// that start from spectra rather than frames.
    pub fn from_lambdas(lambdas: &[Scalar], d: usize) -> Self {
        let n = lambdas.len();
        assert!(2 * n <= d, "need 2n <= d");
        let mut matrix = vec![vec![Scalar::zero(); d]; d];
        for (j, lam) in lambdas.iter().enumerate() {
            matrix[j][n + j] = lam.clone();
            matrix[n + j][j] = -lam;
        }
        let trace_abs = lambdas
            .iter()
            .fold(Scalar::zero(), |acc, l| &acc + l)
            * Scalar::from_int(2);
        let mut o = vec![vec![0.0; d]; d];
        for (i, row) in o.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        LeviData {
            point: vec![],
            matrix,
            lambdas: lambdas.to_vec(),
            rank: 2 * n,
            trace_abs,
            normal_frame: o,
        }
    }

    /// Rescale as if X_0 were replaced by c X_0 (c > 0): L and hence every
    /// lambda scales by 1/c.
    pub fn rescaled_x0(&self, c: &Scalar) -> Self {
        let cinv = c.recip().expect("nonzero scale");
        LeviData {
            point: self.point.clone(),
            matrix: self
                .matrix
                .iter()
                .map(|row| row.iter().map(|e| e * &cinv).collect())
                .collect(),
            lambdas: self.lambdas.iter().map(|l| l * &cinv).collect(),
            rank: self.rank,
            trace_abs: &self.trace_abs * &cinv,
            normal_frame: self.normal_frame.clone(),
        }
    }
}

/// Compute the Levi matrix of `frame` at `point`: express `[X_j, X_k](a)` in
/// the frame basis by solving B(a)^t c = bracket value; L_jk is the X_0
/// component. Eigen-data comes from -L^2 via the Jacobi solver, with an
/// exactness recovery step in rational mode.
pub fn levi_matrix(frame: &HFrame, point: &[Scalar]) -> Result<LeviData, GeomError> {
    let d1 = frame.dim;
    let d = d1 - 1;
    let jets = frame.field_jets(point, 3)?;
    let b = frame.b_matrix(point)?;
    let bt = linalg::transpose(&b);
    let mut matrix = vec![vec![Scalar::zero(); d]; d];
    for j in 1..d1 {
        for k in (j + 1)..d1 {
            let w = bracket(&jets[j], &jets[k])?;
            let rhs = vec![w.value_at_center()];
            let coords = linalg::solve(&bt, &rhs).map_err(|_| {
                GeomError::SingularFrame(point.iter().map(Scalar::to_f64).collect())
            })?;
            matrix[j - 1][k - 1] = coords[0][0].clone();
            matrix[k - 1][j - 1] = -&coords[0][0];
        }
    }
    let (lambdas, rank, normal_frame) = eigenstructure(&matrix)?;
    let trace_abs = lambdas
        .iter()
        .fold(Scalar::zero(), |acc, l| &acc + l)
        * Scalar::from_int(2);
    Ok(LeviData {
        point: point.to_vec(),
        matrix,
        lambdas,
        rank,
        trace_abs,
        normal_frame,
    })
}

/// Eigenstructure of an antisymmetric matrix through the symmetric PSD
/// matrix -L^2. Eigenvalues below 1e-10 * ||L||_F^2 count as zero.
fn eigenstructure(l: &Mat) -> Result<(Vec<Scalar>, usize, Vec<Vec<f64>>), GeomError> {
    let d = l.len();
    let lf: Vec<Vec<f64>> = l
        .iter()
        .map(|row| row.iter().map(Scalar::to_f64).collect())
        .collect();
    let mut m = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..d {
            let mut s = 0.0;
            for k in 0..d {
                s -= lf[i][k] * lf[k][j];
            }
            m[i][j] = s;
        }
    }
    let frob2: f64 = lf.iter().flatten().map(|x| x * x).sum();
    if frob2 == 0.0 {
        let mut o = vec![vec![0.0; d]; d];
        for (i, row) in o.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        return Ok((vec![], 0, o));
    }
    let tol = 1e-10 * frob2;
    let (vals, vecs) = linalg::jacobi_symmetric(&m)?;
    let pos = vals.iter().filter(|&&v| v > tol).count();
    if pos % 2 != 0 {
        return Err(GeomError::EigenPairing(pos));
    }
    let n = pos / 2;

    // lambda_j from paired eigenvalues, exactified when L is exact
    let exact_m = exact_minus_l_squared(l);
    let mut lambdas = Vec::with_capacity(n);
    for j in 0..n {
        let lam2 = 0.5 * (vals[2 * j] + vals[2 * j + 1]);
        let lam2_scalar = match &exact_m {
            Some(me) => try_exact_eigenvalue(me, lam2)
                .unwrap_or(Scalar::Float(lam2)),
            None => Scalar::Float(lam2),
        };
        lambdas.push(lam2_scalar.sqrt().expect("PSD eigenvalue"));
    }

    // symplectic Gram-Schmidt within eigenvalue clusters
    let mut o_cols: Vec<Vec<f64>> = Vec::with_capacity(d);
    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut i = 0;
    while i < pos {
        // cluster of (numerically) equal eigenvalues
        let mut jend = i + 1;
        while jend < pos && (vals[jend] - vals[i]).abs() <= 1e-9 * vals[0].max(1.0) {
            jend += 1;
        }
        let mut basis: Vec<Vec<f64>> = (i..jend).map(|c| column(&vecs, c)).collect();
        let pairs = (jend - i) / 2;
        let lam = (0.5 * (vals[i] + vals[jend - 1])).sqrt();
        for _ in 0..pairs {
            let u = take_orthogonal_unit(&mut basis).ok_or(GeomError::EigenPairing(pos))?;
            let mut v = mat_vec(&lf, &u);
            for x in v.iter_mut() {
                *x /= lam;
            }
            // remove the span of v from the remaining cluster basis
            for b in basis.iter_mut() {
                let dot: f64 = b.iter().zip(&v).map(|(a, c)| a * c).sum();
                for (bb, vv) in b.iter_mut().zip(&v) {
                    *bb -= dot * vv;
                }
            }
            u_cols.push(u);
            o_cols.push(v);
        }
        i = jend;
    }
    o_cols.append(&mut u_cols);
    // kernel columns
    for c in pos..d {
        o_cols.push(column(&vecs, c));
    }
    // assemble O with our columns (v_1..v_n, u_1..u_n, kernel)
    let mut o = vec![vec![0.0; d]; d];
    for (cidx, col) in o_cols.iter().enumerate() {
        for r in 0..d {
            o[r][cidx] = col[r];
        }
    }
    Ok((lambdas, pos, o))
}

fn column(m: &[Vec<f64>], c: usize) -> Vec<f64> {
    m.iter().map(|row| row[c]).collect()
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn take_orthogonal_unit(basis: &mut Vec<Vec<f64>>) -> Option<Vec<f64>> {
    while let Some(mut cand) = basis.pop() {
        let norm: f64 = cand.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for x in cand.iter_mut() {
                *x /= norm;
            }
            return Some(cand);
        }
    }
    None
}

fn exact_minus_l_squared(l: &Mat) -> Option<Mat> {
    if !l
        .iter()
        .all(|row| row.iter().all(Scalar::is_exact))
    {
        return None;
    }
    let d = l.len();
    let mut m = vec![vec![Scalar::zero(); d]; d];
    for i in 0..d {
        for j in 0..d {
            let mut s = Scalar::zero();
            for k in 0..d {
                s = &s - &(&l[i][k] * &l[k][j]);
            }
            m[i][j] = s;
        }
    }
    Some(m)
}

/// Try to recover the exact rational eigenvalue near a float approximation
/// by a continued-fraction guess verified against det(M - r I) = 0.
fn try_exact_eigenvalue(m: &Mat, approx: f64) -> Option<Scalar> {
    let r = rationalize(approx, 1_000_000)?;
    let d = m.len();
    let mut shifted = m.to_vec();
    let rs = Scalar::Exact(r.clone());
    for i in 0..d {
        shifted[i][i] = &shifted[i][i] - &rs;
    }
    if det_exact(&shifted).is_zero() {
        Some(Scalar::Exact(r))
    } else {
        None
    }
}

fn rationalize(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let ai = a as i64;
        let p2 = ai.checked_mul(p1)?.checked_add(p0)?;
        let q2 = ai.checked_mul(q1)?.checked_add(q0)?;
        if q2.unsigned_abs() > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a;
        if frac.abs() < 1e-13 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let err = (x - p1 as f64 / q1 as f64).abs();
    if err <= 1e-9 * (1.0 + x.abs()) {
        Some(BigRational::new(BigInt::from(p1), BigInt::from(q1)))
    } else {
        None
    }
}

fn det_exact(m: &Mat) -> Scalar {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Scalar::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return Scalar::zero(),
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det = &det * &a[col][col];
        let inv = a[col][col].recip().unwrap();
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let delta = &f * &a[col][c];
                a[r][c] = &a[r][c] - &delta;
            }
        }
    }
    det
}

/// The affine privileged-coordinate change at a base point.
#[derive(Clone, Debug)]
pub struct PrivilegedChart {
    pub base: Vec<Scalar>,
    pub a_matrix: Mat,
    pub map: PolyMap,
    pub inverse: PolyMap,
}

pub fn privileged_chart(frame: &HFrame, u: &[Scalar]) -> Result<PrivilegedChart, GeomError> {
    let b = frame.b_matrix(u)?;
    let bt = linalg::transpose(&b);
    let a = linalg::invert(&bt)
        .map_err(|_| GeomError::SingularFrame(u.iter().map(Scalar::to_f64).collect()))?;
    let map = PolyMap::linear(&a);
    let inverse = PolyMap::linear(&bt);
    Ok(PrivilegedChart {
        base: u.to_vec(),
        a_matrix: a,
        map,
        inverse,
    })
}

/// Heisenberg chart data at a base point: privileged change, quadratic
/// correction, their composition, and the model frame.
#[derive(Clone, Debug)]
pub struct HeisenbergChart {
    pub base: Vec<Scalar>,
    pub levi: LeviData,
    pub privileged: PrivilegedChart,
    /// First-order Taylor data b_jk of the privileged-coordinate frame.
    pub b_quad: Mat,
    pub phi: PolyMap,
    pub phi_inverse: PolyMap,
    pub eps: PolyMap,
    pub eps_inverse: PolyMap,
    /// Model frame X_0^a .. X_d^a in Heisenberg coordinates.
    pub model: Vec<PolyVectorField>,
}

impl HeisenbergChart {
    /// Frame fields in privileged coordinates (jets at 0).
    pub fn privileged_fields(
        &self,
        frame: &HFrame,
        order: u32,
    ) -> Result<Vec<PolyVectorField>, GeomError> {
        let jets = frame.field_jets(&self.base, 2 * order)?;
        Ok(jets
            .iter()
            .map(|x| pushforward(x, &self.privileged.map, &self.privileged.inverse, order))
            .collect())
    }

    /// Frame fields in Heisenberg coordinates (jets at 0).
    pub fn heisenberg_fields(
        &self,
        frame: &HFrame,
        order: u32,
    ) -> Result<Vec<PolyVectorField>, GeomError> {
        let jets = frame.field_jets(&self.base, 2 * order)?;
        Ok(jets
            .iter()
            .map(|x| pushforward(x, &self.eps, &self.eps_inverse, order))
            .collect())
    }

    /// The dilation-limit frame X_j^(u): leading homogeneous parts of the
    /// privileged-coordinate frame, rebuilt at full polynomial order.
    pub fn limit_fields(&self, frame: &HFrame) -> Result<Vec<PolyVectorField>, GeomError> {
        let fields = self.privileged_fields(frame, WORK_ORDER)?;
        let mut out = Vec::with_capacity(fields.len());
        for (j, f) in fields.iter().enumerate() {
            let weight = if j == 0 { -2 } else { -1 };
            let lead = leading_part(f, weight)?;
            out.push(raise_order(&lead, EXACT_ORDER));
        }
        Ok(out)
    }
}

/// Re-wrap an exactly polynomial field's coefficients into jets of a higher
/// order. Only valid when the stored monomials are the whole polynomial.
pub fn raise_order(f: &PolyVectorField, order: u32) -> PolyVectorField {
    let nv = f.nvars();
    PolyVectorField::new(
        f.coeffs()
            .iter()
            .map(|c| {
                let mut out = WeightedJet::zero(nv, order);
                for (alpha, coeff) in c.terms() {
                    out = out.add(&WeightedJet::monomial(nv, order, alpha.clone(), coeff.clone()));
                }
                out
            })
            .collect(),
    )
}

pub fn heisenberg_chart(frame: &HFrame, u: &[Scalar]) -> Result<HeisenbergChart, GeomError> {
    let d1 = frame.dim();
    let d = d1 - 1;
    let levi = levi_matrix(frame, u)?;
    let privileged = privileged_chart(frame, u)?;

    let jets = frame.field_jets(u, 2 * WORK_ORDER)?;
    let priv_fields: Vec<PolyVectorField> = jets
        .iter()
        .map(|x| pushforward(x, &privileged.map, &privileged.inverse, WORK_ORDER))
        .collect();

    // b_jk = d/dx_k of the d/dx0-coefficient of X_j at 0 (j, k >= 1)
    let mut b_quad = vec![vec![Scalar::zero(); d]; d];
    for j in 1..d1 {
        for k in 1..d1 {
            let mut alpha = vec![0u32; d1];
            alpha[k] = 1;
            b_quad[j - 1][k - 1] = priv_fields[j].coeff(0).coefficient(&alpha);
        }
    }

    // phi(x) = (x0 - 1/4 sum (b_jk + b_kj) x_j x_k, x1, ..., xd)
    let quarter = Scalar::ratio(1, 4);
    let mut quad = WeightedJet::zero(d1, EXACT_ORDER);
    for j in 1..d1 {
        for k in 1..d1 {
            let c = &(&b_quad[j - 1][k - 1] + &b_quad[k - 1][j - 1]) * &quarter;
            if c.is_zero() {
                continue;
            }
            let mut alpha = vec![0u32; d1];
            alpha[j] += 1;
            alpha[k] += 1;
            quad = quad.add(&WeightedJet::monomial(d1, EXACT_ORDER, alpha, c));
        }
    }
    let x0 = WeightedJet::variable(d1, EXACT_ORDER, 0);
    let mut phi_comps = vec![x0.sub(&quad)];
    let mut phi_inv_comps = vec![x0.add(&quad)];
    for i in 1..d1 {
        let xi = WeightedJet::variable(d1, EXACT_ORDER, i);
        phi_comps.push(xi.clone());
        phi_inv_comps.push(xi);
    }
    let phi = PolyMap::new(phi_comps);
    let phi_inverse = PolyMap::new(phi_inv_comps);
    let eps = phi.compose(&privileged.map);
    let eps_inverse = privileged.inverse.compose(&phi_inverse);

    // model frame: X_0^a = d0, X_j^a = d_j - 1/2 sum_k L_jk x_k d0
    let half = Scalar::ratio(1, 2);
    let mut model = Vec::with_capacity(d1);
    model.push(PolyVectorField::basis(d1, EXACT_ORDER, 0));
    for j in 1..d1 {
        let mut c0 = WeightedJet::zero(d1, EXACT_ORDER);
        for k in 1..d1 {
            let l = &levi.matrix[j - 1][k - 1];
            if l.is_zero() {
                continue;
            }
            let coeff = -&(l * &half);
            let mut alpha = vec![0u32; d1];
            alpha[k] = 1;
            c0 = c0.add(&WeightedJet::monomial(d1, EXACT_ORDER, alpha, coeff));
        }
        let mut f = PolyVectorField::basis(d1, EXACT_ORDER, j);
        let mut coeffs: Vec<WeightedJet> = f.coeffs().to_vec();
        coeffs[0] = c0;
        f = PolyVectorField::new(coeffs);
        model.push(f);
    }

    Ok(HeisenbergChart {
        base: u.to_vec(),
        levi,
        privileged,
        b_quad,
        phi,
        phi_inverse,
        eps,
        eps_inverse,
        model,
    })
}

/// Residuals of the dilation approximation of the frame by its model in
/// Heisenberg coordinates, for each t in `t_list`, together with the
/// observed convergence order (slope of log residual against log t).
#[derive(Clone, Debug)]
pub struct ModelApproxReport {
    /// `residuals[j]` lists (t, residual) for field j.
    pub residuals: Vec<Vec<(f64, f64)>>,
    /// Least-squares slope per field; None when residuals vanish
    /// identically (exactly homogeneous frame).
    pub slopes: Vec<Option<f64>>,
}

pub fn verify_model_approximation(
    frame: &HFrame,
    u: &[Scalar],
    t_list: &[f64],
) -> Result<ModelApproxReport, GeomError> {
    let chart = heisenberg_chart(frame, u)?;
    let d1 = frame.dim();
    let order = 2 * WORK_ORDER;
    let eps_fields = chart.heisenberg_fields(frame, order)?;
    let mut residuals = vec![Vec::with_capacity(t_list.len()); d1];
    for (j, res) in residuals.iter_mut().enumerate() {
        let weight = if j == 0 { 2 } else { 1 };
        let model = chart.model[j].clone();
        for &t in t_list {
            let ts = Scalar::from_f64(t);
            let pulled = dilate_pullback(&eps_fields[j], &ts)?;
            let scaled = pulled.scale(&Scalar::from_f64(t.powi(weight)));
            let diff = scaled.sub(&raise_order(&model, scaled.order()));
            res.push((t, diff.coeff_norm()));
        }
    }
    let slopes = residuals
        .iter()
        .map(|res| {
            let pts: Vec<(f64, f64)> = res
                .iter()
                .filter(|(_, r)| *r > 1e-14)
                .map(|(t, r)| (t.ln(), r.ln()))
                .collect();
            if pts.len() < 2 {
                return None;
            }
            let n = pts.len() as f64;
            let sx: f64 = pts.iter().map(|p| p.0).sum();
            let sy: f64 = pts.iter().map(|p| p.1).sum();
            let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
            let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
            Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
        })
        .collect();
    Ok(ModelApproxReport { residuals, slopes })
}
