//! Truncated multivariate polynomials under anisotropic weights.
//!
//! Coordinates are x0..xd where x0 carries weight 2 and the rest weight 1,
//! so the weighted degree of a monomial x^alpha is
//! `<alpha> = 2*alpha_0 + alpha_1 + ... + alpha_d`. A [`WeightedJet`] stores
//! the coefficients of all monomials with `<alpha> <= order` together with
//! the order those coefficients are reliable to. Operations that lose
//! information (derivatives along weighted directions, brackets) lower the
//! recorded order instead of silently keeping stale coefficients.

use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

pub type MultiIndex = Vec<u32>;

pub fn weighted_degree(alpha: &[u32]) -> u32 {
    2 * alpha[0] + alpha[1..].iter().sum::<u32>()
}

/// Weight of the coordinate direction `i` (2 for x0, 1 otherwise).
pub fn var_weight(i: usize) -> u32 {
    if i == 0 {
        2
    } else {
        1
    }
}

#[derive(Clone)]
pub struct WeightedJet {
    nvars: usize,
    order: u32,
    coeffs: BTreeMap<MultiIndex, Scalar>,
}

impl WeightedJet {
    pub fn zero(nvars: usize, order: u32) -> Self {
        WeightedJet {
            nvars,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, order: u32, value: Scalar) -> Self {
        let mut jet = Self::zero(nvars, order);
        if !value.is_zero() {
            jet.coeffs.insert(vec![0; nvars], value);
        }
        jet
    }

    /// The coordinate function x_i as a jet. Requires the order to admit it.
    pub fn variable(nvars: usize, order: u32, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        assert!(
            var_weight(i) <= order,
            "order {order} too small to hold x{i}"
        );
        let mut jet = Self::zero(nvars, order);
        let mut alpha = vec![0u32; nvars];
        alpha[i] = 1;
        jet.coeffs.insert(alpha, Scalar::one());
        jet
    }

    pub fn monomial(nvars: usize, order: u32, alpha: MultiIndex, c: Scalar) -> Self {
        assert_eq!(alpha.len(), nvars);
        let mut jet = Self::zero(nvars, order);
        if weighted_degree(&alpha) <= order && !c.is_zero() {
            jet.coeffs.insert(alpha, c);
        }
        jet
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, alpha: &[u32]) -> Scalar {
        self.coeffs.get(alpha).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&vec![0; self.nvars])
    }

    /// All coefficients exact rationals?
    pub fn is_exact(&self) -> bool {
        self.coeffs.values().all(Scalar::is_exact)
    }

    pub fn truncated(&self, order: u32) -> WeightedJet {
        let order = order.min(self.order);
        WeightedJet {
            nvars: self.nvars,
            order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(a, _)| weighted_degree(a) <= order)
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect(),
        }
    }

    fn insert_add(&mut self, alpha: MultiIndex, c: Scalar) {
        if weighted_degree(&alpha) > self.order || c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(alpha);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &WeightedJet) -> WeightedJet {
        assert_eq!(self.nvars, other.nvars, "dimension mismatch");
        let mut out = self.truncated(self.order.min(other.order));
        for (a, c) in &other.coeffs {
            out.insert_add(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &WeightedJet) -> WeightedJet {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> WeightedJet {
        WeightedJet {
            nvars: self.nvars,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> WeightedJet {
        if s.is_zero() {
            return WeightedJet::zero(self.nvars, self.order);
        }
        WeightedJet {
            nvars: self.nvars,
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, c)| (a.clone(), c * s))
                .collect(),
        }
    }

    pub fn mul(&self, other: &WeightedJet) -> WeightedJet {
        assert_eq!(self.nvars, other.nvars, "dimension mismatch");
        let order = self.order.min(other.order);
        let mut out = WeightedJet::zero(self.nvars, order);
        for (a, ca) in &self.coeffs {
            let da = weighted_degree(a);
            if da > order {
                continue;
            }
            for (b, cb) in &other.coeffs {
                if da + weighted_degree(b) > order {
                    continue;
                }
                let gamma: MultiIndex = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.insert_add(gamma, ca * cb);
            }
        }
        out
    }

    /// Partial derivative along x_i. The reliable order drops by the weight
    /// of the direction.
    pub fn derivative(&self, i: usize) -> WeightedJet {
        assert!(i < self.nvars);
        let w = var_weight(i);
        let order = self.order.saturating_sub(w);
        let mut out = WeightedJet::zero(self.nvars, order);
        for (a, c) in &self.coeffs {
            if a[i] == 0 {
                continue;
            }
            let mut b = a.clone();
            b[i] -= 1;
            out.insert_add(b, c * &Scalar::from_int(a[i] as i64));
        }
        out
    }

    /// Evaluate the stored polynomial part at a point.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars);
        self.coeffs
            .iter()
            .map(|(a, c)| {
                let mono: f64 = a
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| point[i].powi(e as i32))
                    .product();
                c.to_f64() * mono
            })
            .sum()
    }

    /// Substitute `x_i -> subs[i]`. Every substituted jet must have zero
    /// constant term; together with the caller providing enough source
    /// order this keeps the truncation exact (see module docs).
    pub fn substitute(&self, subs: &[WeightedJet], order: u32) -> WeightedJet {
        assert_eq!(subs.len(), self.nvars);
        let nv = subs[0].nvars;
        for s in subs {
            assert!(
                s.constant_term().is_zero(),
                "substitution requires zero constant terms"
            );
        }
        let mut out = WeightedJet::zero(nv, order);
        // incremental powers per variable, truncated at the target order
        let mut powers: Vec<Vec<WeightedJet>> = subs
            .iter()
            .map(|s| vec![WeightedJet::constant(nv, order, Scalar::one()), s.truncated(order)])
            .collect();
        for (alpha, c) in &self.coeffs {
            let mut term = WeightedJet::constant(nv, order, c.clone());
            for (i, &e) in alpha.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&powers[i][1]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize]);
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Apply a univariate Taylor series `sum_k series[k] * h^k` to `h = self -
    /// self(0)`, i.e. compose an elementary function with this jet. The
    /// series is indexed by plain powers of h.
    pub fn compose_series(&self, series: &[Scalar]) -> WeightedJet {
        let c0 = self.constant_term();
        let h = self.sub(&WeightedJet::constant(self.nvars, self.order, c0));
        let mut out = WeightedJet::zero(self.nvars, self.order);
        let mut hk = WeightedJet::constant(self.nvars, self.order, Scalar::one());
        for (k, c) in series.iter().enumerate() {
            if k > 0 {
                hk = hk.mul(&h);
                if hk.is_zero() {
                    break;
                }
            }
            out = out.add(&hk.scale(c));
        }
        out
    }

    /// Largest weighted degree among stored monomials (None when zero).
    pub fn max_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|a| weighted_degree(a)).max()
    }

    /// Sum of |coefficient| over all stored monomials, as f64.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.to_f64().abs()).sum()
    }
}

impl fmt::Debug for WeightedJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0 (order {})", self.order);
        }
        let mut first = true;
        for (a, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &e) in a.iter().enumerate() {
                if e == 1 {
                    write!(f, "*x{i}")?;
                } else if e > 1 {
                    write!(f, "*x{i}^{e}")?;
                }
            }
        }
        write!(f, " (order {})", self.order)
    }
}
