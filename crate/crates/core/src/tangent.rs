//! The tangent group at a point as a concrete object on R^{d+1}: group
//! law, dilations, pseudo-norm, the linear isomorphism onto the standard
//! Heisenberg-times-abelian model, and descriptors for the irreducible
//! unitary representations.

use crate::geometry::LeviData;
use crate::linalg::mat_mul_f64;
use crate::scalar::Scalar;
use num_complex::Complex64;

#[derive(Clone, Debug)]
pub struct TangentGroup {
    pub dim: usize, // d + 1
    pub levi: LeviData,
}

impl TangentGroup {
    pub fn new(levi: LeviData) -> Self {
        TangentGroup {
            dim: levi.dim_h() + 1,
            levi,
        }
    }

    /// x . y = (x0 + y0 + 1/2 sum L_jk x_j y_k, x' + y').
    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let d = self.dim - 1;
        let mut first = &x[0] + &y[0];
        let half = Scalar::ratio(1, 2);
        for j in 0..d {
            for k in 0..d {
                let l = &self.levi.matrix[j][k];
                if l.is_zero() {
                    continue;
                }
                first = &first + &(&(&(l * &half) * &x[j + 1]) * &y[k + 1]);
            }
        }
        let mut out = Vec::with_capacity(self.dim);
        out.push(first);
        for i in 1..self.dim {
            out.push(&x[i] + &y[i]);
        }
        out
    }

    pub fn product_f64(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let xs: Vec<Scalar> = x.iter().map(|&v| Scalar::from_f64(v)).collect();
        let ys: Vec<Scalar> = y.iter().map(|&v| Scalar::from_f64(v)).collect();
        self.product(&xs, &ys).iter().map(Scalar::to_f64).collect()
    }

    pub fn inverse(&self, x: &[Scalar]) -> Vec<Scalar> {
        x.iter().map(|v| -v).collect()
    }

    /// The standard isomorphism from H^{2n+1} x R^{d-2n} (Heisenberg
    /// relations [X_j, X_{n+k}] = -2 delta_jk X_0) onto this group: swap
    /// each conjugate pair, scale it by sqrt(2/lambda_j), then rotate by
    /// the normal-form frame O. Linear, with a linear inverse.
    pub fn standard_isomorphism(&self) -> StandardIsomorphism {
        let d = self.dim - 1;
        let n = self.levi.n_pairs();
        let lambdas = self.levi.lambdas_f64();
        // pair map P: u_(j) = beta_j x_(n+j), u_(n+j) = beta_j x_(j)
        let mut p = vec![vec![0.0; d]; d];
        for j in 0..n {
            let beta = (2.0 / lambdas[j]).sqrt();
            p[j][n + j] = beta;
            p[n + j][j] = beta;
        }
        for k in 2 * n..d {
            p[k][k] = 1.0;
        }
        let m = mat_mul_f64(&self.levi.normal_frame, &p);
        // inverse: P^{-1} O^t
        let mut pinv = vec![vec![0.0; d]; d];
        for j in 0..n {
            let beta_inv = (lambdas[j] / 2.0).sqrt();
            pinv[j][n + j] = beta_inv;
            pinv[n + j][j] = beta_inv;
        }
        for k in 2 * n..d {
            pinv[k][k] = 1.0;
        }
        let ot: Vec<Vec<f64>> = (0..d)
            .map(|i| (0..d).map(|j| self.levi.normal_frame[j][i]).collect())
            .collect();
        let minv = mat_mul_f64(&pinv, &ot);
        StandardIsomorphism {
            dim: self.dim,
            n_pairs: n,
            forward: m,
            inverse: minv,
        }
    }

    /// Representation descriptors for this group (see [`Representations`]).
    pub fn representations(&self) -> Representations {
        let n = self.levi.n_pairs();
        let d = self.dim - 1;
        let lam = self.levi.lambdas_f64();
        let i = Complex64::new(0.0, 1.0);
        let mut infinite = Vec::new();
        for sign in [1.0f64, -1.0] {
            let s = Complex64::new(sign, 0.0);
            // normalized images in the normal-form frame of G itself:
            // dpi(X_0) = sign*i, dpi(v_j) = sqrt(lambda_j) d/dxi_j,
            // dpi(u_j) = sign*i*sqrt(lambda_j) xi_j, kernel k: sign*i*xi_k
            let mut images = vec![OperatorTerm::MultConst { factor: s * i }];
            for j in 0..n {
                images.push(OperatorTerm::Deriv {
                    var: j,
                    factor: Complex64::new(lam[j].sqrt(), 0.0),
                });
            }
            for j in 0..n {
                images.push(OperatorTerm::MultVar {
                    var: j,
                    factor: s * i * lam[j].sqrt(),
                });
            }
            for k in 2 * n..d {
                images.push(OperatorTerm::MultVar {
                    var: k,
                    factor: s * i,
                });
            }
            // verbatim constants for the standard basis with Planck
            // constant +-1: dpi(X_0) = i*lambda*|lambda|, dpi(X_j) =
            // |lambda| d_j, dpi(X_{n+j}) = i*lambda*xi_j, kernel likewise
            let mut standard_images = vec![OperatorTerm::MultConst { factor: s * i }];
            for j in 0..n {
                standard_images.push(OperatorTerm::Deriv {
                    var: j,
                    factor: Complex64::new(1.0, 0.0),
                });
            }
            for j in 0..n {
                standard_images.push(OperatorTerm::MultVar {
                    var: j,
                    factor: s * i,
                });
            }
            for k in 2 * n..d {
                standard_images.push(OperatorTerm::MultVar {
                    var: k,
                    factor: s * i,
                });
            }
            infinite.push(RepDescriptor {
                kind: RepKind::Infinite { sign: sign as i8 },
                images,
                standard_images,
            });
        }
        Representations {
            infinite,
            one_dim: OneDimRep { dim: self.dim },
            free_xi_dims: d - 2 * n,
            // the quoted standard-basis constants satisfy
            // dpi([X_j, X_{n+j}]) = defect * [dpi X_j, dpi X_{n+j}]
            standard_defect: -2.0,
        }
    }
}

pub fn dilate(t: f64, x: &[f64]) -> Vec<f64> {
    let mut out = x.to_vec();
    out[0] *= t * t;
    for v in out.iter_mut().skip(1) {
        *v *= t;
    }
    out
}

pub fn dilate_scalar(t: &Scalar, x: &[Scalar]) -> Vec<Scalar> {
    let t2 = t * t;
    let mut out = Vec::with_capacity(x.len());
    out.push(&x[0] * &t2);
    for v in x.iter().skip(1) {
        out.push(v * t);
    }
    out
}

/// (x0^2 + (x1^2 + ... + xd^2)^2)^{1/4}
pub fn pseudo_norm(x: &[f64]) -> f64 {
    let tail: f64 = x[1..].iter().map(|v| v * v).sum();
    (x[0] * x[0] + tail * tail).powf(0.25)
}

#[derive(Clone, Debug)]
pub struct StandardIsomorphism {
    pub dim: usize,
    pub n_pairs: usize,
    /// Linear action on the x' block (x0 passes through unchanged).
    pub forward: Vec<Vec<f64>>,
    pub inverse: Vec<Vec<f64>>,
}

impl StandardIsomorphism {
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![x[0]];
        for row in &self.forward {
            out.push(row.iter().zip(&x[1..]).map(|(a, b)| a * b).sum());
        }
        out
    }

    pub fn apply_inverse(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![x[0]];
        for row in &self.inverse {
            out.push(row.iter().zip(&x[1..]).map(|(a, b)| a * b).sum());
        }
        out
    }

    /// Group law of the standard source H^{2n+1} x R^{d-2n}.
    pub fn standard_product(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.n_pairs;
        let mut first = x[0] + y[0];
        for j in 0..n {
            first += x[1 + n + j] * y[1 + j] - x[1 + j] * y[1 + n + j];
        }
        let mut out = vec![first];
        for i in 1..x.len() {
            out.push(x[i] + y[i]);
        }
        out
    }
}

/// dpi(X) images as abstract operator terms on Schwartz space of R^n (or
/// scalars for the one-dimensional family).
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorTerm {
    /// multiplication by the constant factor
    MultConst { factor: Complex64 },
    /// factor * xi_var
    MultVar { var: usize, factor: Complex64 },
    /// factor * d/dxi_var
    Deriv { var: usize, factor: Complex64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum RepKind {
    /// Infinite-dimensional class; lambda in R \ 0 is represented by its
    /// sign (homogeneity recovers the rest).
    Infinite { sign: i8 },
}

#[derive(Clone, Debug)]
pub struct RepDescriptor {
    pub kind: RepKind,
    /// Normalized images (exact homomorphism) in the normal-form frame of
    /// the group; index 0 is X_0, then n derivative slots, n
    /// multiplication slots, then the free xi directions.
    pub images: Vec<OperatorTerm>,
    /// The quoted constants for the standard basis (Planck constant +-1),
    /// stored verbatim; off from a homomorphism by `standard_defect`.
    pub standard_images: Vec<OperatorTerm>,
}

#[derive(Clone, Debug)]
pub struct OneDimRep {
    pub dim: usize,
}

impl OneDimRep {
    /// pi^xi kills X_0: evaluate a symbol at (0, xi').
    pub fn apply_symbol<F>(&self, symbol: F, xi_prime: &[f64]) -> Complex64
    where
        F: Fn(&[f64]) -> Complex64,
    {
        assert_eq!(xi_prime.len(), self.dim - 1);
        let mut arg = vec![0.0; self.dim];
        arg[1..].copy_from_slice(xi_prime);
        symbol(&arg)
    }
}

#[derive(Clone, Debug)]
pub struct Representations {
    pub infinite: Vec<RepDescriptor>,
    pub one_dim: OneDimRep,
    /// Number of free xi parameters of the infinite family (= d - 2n).
    pub free_xi_dims: usize,
    /// Recorded homomorphism defect of the verbatim standard-basis
    /// constants: dpi([X, Y]) = defect * [dpi X, dpi Y] on the pairs.
    pub standard_defect: f64,
}
