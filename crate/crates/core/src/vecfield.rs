//! Polynomial vector fields with weighted-jet coefficients: Lie brackets,
//! anisotropic dilation pullbacks and extraction of homogeneous parts.

use crate::jet::{var_weight, weighted_degree, WeightedJet};
use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error)]
pub enum VecFieldError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dilation parameter must be nonzero")]
    ZeroDilation,
    #[error(
        "field has a term of homogeneity {found} below the requested weight {want}; \
         frame is not in privileged form"
    )]
    NotPrivileged { found: i64, want: i64 },
}

/// A vector field sum_k c_k(x) d/dx_k with jet coefficients.
#[derive(Clone, Debug)]
pub struct PolyVectorField {
    nvars: usize,
    coeffs: Vec<WeightedJet>,
}

impl PolyVectorField {
    pub fn new(coeffs: Vec<WeightedJet>) -> Self {
        let nvars = coeffs.len();
        assert!(nvars > 0);
        for c in &coeffs {
            assert_eq!(c.nvars(), nvars, "coefficient jet dimension mismatch");
        }
        PolyVectorField { nvars, coeffs }
    }

    pub fn zero(nvars: usize, order: u32) -> Self {
        PolyVectorField {
            nvars,
            coeffs: vec![WeightedJet::zero(nvars, order); nvars],
        }
    }

    /// The coordinate field d/dx_k.
    pub fn basis(nvars: usize, order: u32, k: usize) -> Self {
        let mut f = Self::zero(nvars, order);
        f.coeffs[k] = WeightedJet::constant(nvars, order, Scalar::one());
        f
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Reliable weighted order (minimum over coefficient jets).
    pub fn order(&self) -> u32 {
        self.coeffs.iter().map(WeightedJet::order).min().unwrap()
    }

    pub fn coeff(&self, k: usize) -> &WeightedJet {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[WeightedJet] {
        &self.coeffs
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(WeightedJet::is_exact)
    }

    pub fn add(&self, other: &Self) -> Self {
        PolyVectorField::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        PolyVectorField::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        PolyVectorField::new(self.coeffs.iter().map(|c| c.scale(s)).collect())
    }

    /// Apply the field to a jet: X(f) = sum_i c_i * df/dx_i.
    pub fn apply(&self, f: &WeightedJet) -> WeightedJet {
        let mut order_floor = u32::MAX;
        let mut acc: Option<WeightedJet> = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = c.mul(&f.derivative(i));
            order_floor = order_floor.min(term.order());
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        match acc {
            Some(a) => a.truncated(order_floor),
            None => WeightedJet::zero(self.nvars, f.order()),
        }
    }

    /// Value of the field at a point, as the vector of coefficient values.
    pub fn eval_f64(&self, point: &[f64]) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.eval_f64(point)).collect()
    }

    /// Value at the center (constant coefficient terms).
    pub fn value_at_center(&self) -> Vec<Scalar> {
        self.coeffs.iter().map(WeightedJet::constant_term).collect()
    }

    /// Sum of |coefficient| over every stored monomial of every component.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(WeightedJet::coeff_norm).sum()
    }
}

/// Lie bracket [X, Y] = X(Y_k) d_k - Y(X_k) d_k with jet truncation. The
/// reliable order of the result is tracked from the actual derivative
/// directions taken, dropping by two when a d/dx0 coefficient participates
/// and by one otherwise.
pub fn bracket(x: &PolyVectorField, y: &PolyVectorField) -> Result<PolyVectorField, VecFieldError> {
    if x.nvars != y.nvars {
        return Err(VecFieldError::DimensionMismatch(x.nvars, y.nvars));
    }
    let coeffs = (0..x.nvars)
        .map(|k| x.apply(&y.coeffs[k]).sub(&y.apply(&x.coeffs[k])))
        .collect();
    Ok(PolyVectorField::new(coeffs))
}

/// Pullback under the anisotropic dilation x -> (t^2 x0, t x1, ..., t xd).
/// Each monomial x^alpha in the coefficient of d/dx_k scales by
/// `t^(<alpha> - weight(k))`.
pub fn dilate_pullback(
    x: &PolyVectorField,
    t: &Scalar,
) -> Result<PolyVectorField, VecFieldError> {
    if t.is_zero() {
        return Err(VecFieldError::ZeroDilation);
    }
    let coeffs = x
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let w = var_weight(k) as i64;
            let mut out = WeightedJet::zero(x.nvars, c.order());
            let mut scaled = WeightedJet::zero(x.nvars, c.order());
            for (alpha, coeff) in c.terms() {
                let h = weighted_degree(alpha) as i64 - w;
                let factor = t.powi(h as i32).expect("nonzero t");
                scaled = scaled.add(&WeightedJet::monomial(
                    x.nvars,
                    c.order(),
                    alpha.clone(),
                    coeff * &factor,
                ));
            }
            out = out.add(&scaled);
            out
        })
        .collect();
    Ok(PolyVectorField::new(coeffs))
}

/// Extract the part of exact homogeneity `weight` (-1 or -2), i.e. the
/// limit of t^{-weight} dilate_pullback(X, t) as t -> 0. Errors when the
/// field carries terms of lower homogeneity, which means the frame was not
/// brought to privileged form first.
pub fn leading_part(x: &PolyVectorField, weight: i64) -> Result<PolyVectorField, VecFieldError> {
    let mut coeffs = Vec::with_capacity(x.nvars);
    for (k, c) in x.coeffs.iter().enumerate() {
        let w = var_weight(k) as i64;
        let mut kept = WeightedJet::zero(x.nvars, c.order());
        for (alpha, coeff) in c.terms() {
            let h = weighted_degree(alpha) as i64 - w;
            if h < weight {
                return Err(VecFieldError::NotPrivileged {
                    found: h,
                    want: weight,
                });
            }
            if h == weight {
                kept = kept.add(&WeightedJet::monomial(
                    x.nvars,
                    c.order(),
                    alpha.clone(),
                    coeff.clone(),
                ));
            }
        }
        coeffs.push(kept);
    }
    Ok(PolyVectorField::new(coeffs))
}
