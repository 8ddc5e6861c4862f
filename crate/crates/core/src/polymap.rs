//! Polynomial coordinate changes of low degree, stored explicitly so that
//! compositions and vector-field pushforwards stay exact.
//!
//! A [`PolyMap`] fixes the origin (all components have zero constant term),
//! which is what centered coordinate changes look like. Maps are stored at
//! a generous weighted order so that low-degree polynomials are represented
//! exactly.

use crate::jet::WeightedJet;
use crate::scalar::Scalar;
use crate::vecfield::PolyVectorField;

/// Order used for exactly-representable low-degree polynomial data.
pub const EXACT_ORDER: u32 = 24;

#[derive(Clone, Debug)]
pub struct PolyMap {
    nvars: usize,
    comps: Vec<WeightedJet>,
}

impl PolyMap {
    pub fn new(comps: Vec<WeightedJet>) -> Self {
        let nvars = comps.len();
        for c in &comps {
            assert_eq!(c.nvars(), nvars);
            assert!(
                c.constant_term().is_zero(),
                "polynomial maps must fix the origin"
            );
        }
        PolyMap { nvars, comps }
    }

    pub fn identity(nvars: usize) -> Self {
        PolyMap::new(
            (0..nvars)
                .map(|i| WeightedJet::variable(nvars, EXACT_ORDER, i))
                .collect(),
        )
    }

    /// Linear map y = M x from an exact matrix.
    pub fn linear(m: &[Vec<Scalar>]) -> Self {
        let nvars = m.len();
        PolyMap::new(
            (0..nvars)
                .map(|k| {
                    let mut c = WeightedJet::zero(nvars, EXACT_ORDER);
                    for (j, entry) in m[k].iter().enumerate() {
                        if !entry.is_zero() {
                            c = c.add(
                                &WeightedJet::variable(nvars, EXACT_ORDER, j).scale(entry),
                            );
                        }
                    }
                    c
                })
                .collect(),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn comps(&self) -> &[WeightedJet] {
        &self.comps
    }

    /// self after other (apply `other` first).
    pub fn compose(&self, other: &PolyMap) -> PolyMap {
        PolyMap::new(
            self.comps
                .iter()
                .map(|c| c.substitute(&other.comps, EXACT_ORDER))
                .collect(),
        )
    }

    pub fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        self.comps.iter().map(|c| c.eval_f64(x)).collect()
    }

    /// Jacobian entry dphi_k/dx_i as a jet.
    fn jacobian_entry(&self, k: usize, i: usize) -> WeightedJet {
        self.comps[k].derivative(i)
    }

    pub fn is_identity(&self) -> bool {
        let id = PolyMap::identity(self.nvars);
        self.comps
            .iter()
            .zip(id.comps.iter())
            .all(|(a, b)| a.sub(b).is_zero())
    }
}

/// Pushforward of a vector field under `map`, expressed in the target
/// coordinates via the supplied polynomial `inverse`:
///
///   (phi_* X)_k(y) = [ sum_i X_i dphi_k/dx_i ](phi^{-1}(y)).
///
/// The substitution into truncated jets is exact provided the source field
/// is known to weighted order at least `2 * target_order`, which the
/// assertion enforces.
pub fn pushforward(
    x: &PolyVectorField,
    map: &PolyMap,
    inverse: &PolyMap,
    target_order: u32,
) -> PolyVectorField {
    assert_eq!(x.nvars(), map.nvars());
    assert!(
        x.order() >= 2 * target_order,
        "pushforward needs source order >= 2 * target order ({} < {})",
        x.order(),
        2 * target_order
    );
    let nv = x.nvars();
    let coeffs = (0..nv)
        .map(|k| {
            let mut acc = WeightedJet::zero(nv, x.order());
            for i in 0..nv {
                if x.coeff(i).is_zero() {
                    continue;
                }
                let dk = map.jacobian_entry(k, i);
                if dk.is_zero() {
                    continue;
                }
                acc = acc.add(&x.coeff(i).mul(&dk.truncated(x.order())));
            }
            acc.substitute(inverse.comps(), target_order)
        })
        .collect();
    PolyVectorField::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_linear_maps() {
        let two = vec![
            vec![Scalar::from_int(2), Scalar::zero()],
            vec![Scalar::zero(), Scalar::from_int(2)],
        ];
        let shear = vec![
            vec![Scalar::one(), Scalar::one()],
            vec![Scalar::zero(), Scalar::one()],
        ];
        let m = PolyMap::linear(&two).compose(&PolyMap::linear(&shear));
        let y = m.eval_f64(&[1.0, 3.0]);
        assert_eq!(y, vec![8.0, 6.0]);
    }

    #[test]
    fn pushforward_under_linear_map_rotates_basis() {
        // map y = (x0, x1 + x2, x2); inverse x = (y0, y1 - y2, y2)
        let m = vec![
            vec![Scalar::one(), Scalar::zero(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::one(), Scalar::one()],
            vec![Scalar::zero(), Scalar::zero(), Scalar::one()],
        ];
        let minv = vec![
            vec![Scalar::one(), Scalar::zero(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::one(), Scalar::from_int(-1)],
            vec![Scalar::zero(), Scalar::zero(), Scalar::one()],
        ];
        let map = PolyMap::linear(&m);
        let inv = PolyMap::linear(&minv);
        // d/dx2 pushes to d/dy1 + d/dy2
        let f = PolyVectorField::basis(3, 8, 2);
        let pf = pushforward(&f, &map, &inv, 4);
        assert_eq!(pf.coeff(1).constant_term(), Scalar::one());
        assert_eq!(pf.coeff(2).constant_term(), Scalar::one());
        assert!(pf.coeff(0).is_zero());
    }

    #[test]
    fn pushforward_respects_quadratic_shear() {
        // map z = (x0 - x1*x2, x1, x2) with inverse (z0 + z1*z2, z1, z2).
        // d/dx1 pushes to d/dz1 - z2 d/dz0.
        let nv = 3;
        let x1 = WeightedJet::variable(nv, EXACT_ORDER, 1);
        let x2 = WeightedJet::variable(nv, EXACT_ORDER, 2);
        let x0 = WeightedJet::variable(nv, EXACT_ORDER, 0);
        let map = PolyMap::new(vec![x0.sub(&x1.mul(&x2)), x1.clone(), x2.clone()]);
        let inv = PolyMap::new(vec![x0.add(&x1.mul(&x2)), x1.clone(), x2.clone()]);
        let f = PolyVectorField::basis(nv, 8, 1);
        let pf = pushforward(&f, &map, &inv, 4);
        assert_eq!(pf.coeff(1).constant_term(), Scalar::one());
        assert_eq!(pf.coeff(0).coefficient(&[0, 0, 1]), Scalar::from_int(-1));
        assert!(pf.coeff(0).coefficient(&[0, 1, 0]).is_zero());
    }
}
