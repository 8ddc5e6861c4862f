//! Discrete hypoellipticity criteria: the singular set, the sublaplacian
//! coefficient condition, its representation-theoretic reduction with a
//! harmonic-oscillator cross-check, and the degree-wise conditions for
//! the geometric operators (Kohn, horizontal, bidegree Kohn, contact).
//!
//! Everything here is exact when the inputs are exact: membership in the
//! singular set is decided in rational arithmetic whenever the spectrum
//! and eigenvalue list are rational, and falls back to a documented
//! floating tolerance `eps = 1e-9 * (1 + Trace|L|/2)` otherwise.

use crate::geometry::LeviData;
use crate::linalg::{self, LinalgError};
use crate::scalar::Scalar;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum HypoError {
    #[error("too many conjugate pairs for subset enumeration: n = {0} > 16")]
    TooManyPairs(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("{0}")]
    BadInput(String),
}

// ---------------------------------------------------------------------------
// Singular set
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingularSetKind {
    /// 2n < d: the two closed real rays beyond +-Trace|L|/2.
    Rays,
    /// 2n = d: the discrete set +-(Trace|L|/2 + 2 sum alpha_j lambda_j).
    Lattice,
}

#[derive(Clone, Debug)]
pub struct SingularSet {
    pub kind: SingularSetKind,
    pub lambdas: Vec<Scalar>,
    pub trace_abs: Scalar,
}

pub fn singular_set(levi: &LeviData, d: usize) -> SingularSet {
    assert!(levi.rank <= d, "rank exceeds horizontal dimension");
    let kind = if levi.rank == d {
        SingularSetKind::Lattice
    } else {
        SingularSetKind::Rays
    };
    SingularSet {
        kind,
        lambdas: levi.lambdas.clone(),
        trace_abs: levi.trace_abs.clone(),
    }
}

impl SingularSet {
    /// Trace|L|/2, the smallest magnitude in the set.
    pub fn threshold(&self) -> f64 {
        self.trace_abs.to_f64() / 2.0
    }

    /// Distance from a complex number to the set, together with the
    /// nearest element.
    pub fn distance(&self, mu: Complex64) -> (f64, Complex64) {
        let t2 = self.threshold();
        match self.kind {
            SingularSetKind::Rays => {
                // distance to {Re >= t2, Im = 0} and {Re <= -t2, Im = 0}
                let dplus = ((t2 - mu.re).max(0.0), mu.im);
                let dminus = ((mu.re + t2).max(0.0), mu.im);
                let dp = (dplus.0 * dplus.0 + dplus.1 * dplus.1).sqrt();
                let dm = (dminus.0 * dminus.0 + dminus.1 * dminus.1).sqrt();
                if dp <= dm {
                    (dp, Complex64::new(mu.re.max(t2), 0.0))
                } else {
                    (dm, Complex64::new(mu.re.min(-t2), 0.0))
                }
            }
            SingularSetKind::Lattice => {
                let bound = mu.norm() + t2 + 1.0;
                let mut best = (f64::INFINITY, Complex64::new(t2, 0.0));
                for v in self.lattice_values_up_to(bound) {
                    for s in [v, -v] {
                        let dist = (mu - Complex64::new(s, 0.0)).norm();
                        if dist < best.0 {
                            best = (dist, Complex64::new(s, 0.0));
                        }
                    }
                }
                best
            }
        }
    }

    /// Positive lattice values Trace|L|/2 + 2 sum alpha_j lambda_j up to
    /// `bound`, sorted ascending (lattice kind only; the base value is
    /// always included even if above the bound so the set is never empty).
    pub fn lattice_values_up_to(&self, bound: f64) -> Vec<f64> {
        let lam = self
            .lambdas
            .iter()
            .map(Scalar::to_f64)
            .collect::<Vec<f64>>();
        let mut out = vec![self.threshold()];
        let mut stack = vec![(0usize, self.threshold())];
        while let Some((j, v)) = stack.pop() {
            for (k, &l) in lam.iter().enumerate().skip(j) {
                let next = v + 2.0 * l;
                if next <= bound && out.len() < 200_000 {
                    out.push(next);
                    stack.push((k, next));
                }
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        out
    }

    /// Floating membership test with the documented tolerance; returns the
    /// nearest element when inside.
    pub fn contains(&self, mu: Complex64, eps: f64) -> Option<Complex64> {
        let (dist, nearest) = self.distance(mu);
        (dist <= eps).then_some(nearest)
    }

    /// Exact membership for rational data (real rational mu with rational
    /// eigenvalue list). Returns None when exactness is unavailable.
    pub fn contains_exact(&self, mu: &Scalar) -> Option<bool> {
        let mu_r = mu.as_exact()?;
        if !self.trace_abs.is_exact() || !self.lambdas.iter().all(Scalar::is_exact) {
            return None;
        }
        let half = &self.trace_abs * &Scalar::ratio(1, 2);
        let mu_abs = Scalar::Exact(mu_r.clone()).abs();
        match self.kind {
            SingularSetKind::Rays => Some(mu_abs >= half),
            SingularSetKind::Lattice => {
                // solve mu_abs = half + 2 sum alpha_j lambda_j exactly
                fn reachable(rem: &Scalar, lam: &[Scalar]) -> bool {
                    if rem.is_zero() {
                        return true;
                    }
                    if lam.is_empty() || *rem < Scalar::zero() {
                        return false;
                    }
                    let step = &lam[0] * &Scalar::from_int(2);
                    let mut r = rem.clone();
                    loop {
                        if reachable(&r, &lam[1..]) {
                            return true;
                        }
                        if r < step {
                            return false;
                        }
                        r = &r - &step;
                    }
                }
                let rem = &mu_abs - &half;
                if rem < Scalar::zero() {
                    return Some(false);
                }
                Some(reachable(&rem, &self.lambdas))
            }
        }
    }

    pub fn membership_eps(&self) -> f64 {
        1e-9 * (1.0 + self.threshold())
    }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum Witness {
    /// An eigenvalue of mu (re, im) within tolerance of a singular element.
    Eigenvalue { eigenvalue: [f64; 2], element: f64 },
    /// An offending (J, K) subset pair of the exterior-algebra spectrum.
    SubsetPair {
        j: Vec<usize>,
        k: Vec<usize>,
        value: f64,
        element: f64,
    },
    /// An offending degree.
    Degree { value: i64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub criterion: String,
    pub pass: bool,
    pub witness: Option<Witness>,
    /// Distance to failure: minimal distance of the tested data to the
    /// forbidden set (0 when failing).
    pub margin: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl ConditionReport {
    fn pass(criterion: &str, margin: f64) -> Self {
        ConditionReport {
            criterion: criterion.into(),
            pass: true,
            witness: None,
            margin,
            notes: vec![],
        }
    }

    fn fail(criterion: &str, witness: Witness) -> Self {
        ConditionReport {
            criterion: criterion.into(),
            pass: false,
            witness: Some(witness),
            margin: 0.0,
            notes: vec![],
        }
    }
}

// ---------------------------------------------------------------------------
// Sublaplacian condition
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum MuMatrix {
    /// Exact entries (kept exact through triangular eigenvalue reads).
    Exact(Vec<Vec<Scalar>>),
    Complex(Vec<Vec<Complex64>>),
}

impl MuMatrix {
    pub fn scalar(mu: Scalar) -> Self {
        MuMatrix::Exact(vec![vec![mu]])
    }

    pub fn size(&self) -> usize {
        match self {
            MuMatrix::Exact(m) => m.len(),
            MuMatrix::Complex(m) => m.len(),
        }
    }

    pub fn to_complex(&self) -> Vec<Vec<Complex64>> {
        match self {
            MuMatrix::Exact(m) => m
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|s| Complex64::new(s.to_f64(), 0.0))
                        .collect()
                })
                .collect(),
            MuMatrix::Complex(m) => m.clone(),
        }
    }

    fn triangular_exact_eigenvalues(&self) -> Option<Vec<Scalar>> {
        let MuMatrix::Exact(m) = self else {
            return None;
        };
        let r = m.len();
        let upper = (0..r).all(|i| (0..i).all(|j| m[i][j].is_zero()));
        let lower = (0..r).all(|i| ((i + 1)..r).all(|j| m[i][j].is_zero()));
        if upper || lower {
            Some((0..r).map(|i| m[i][i].clone()).collect())
        } else {
            None
        }
    }
}

#[derive(Clone, Debug)]
pub struct SublaplacianData {
    pub levi: LeviData,
    pub d: usize,
    pub mu: MuMatrix,
}

impl SublaplacianData {
    pub fn new(levi: LeviData, d: usize, mu: MuMatrix) -> Result<Self, HypoError> {
        if levi.dim_h() != d {
            return Err(HypoError::BadInput(format!(
                "Levi matrix is {}x{} but d = {d}",
                levi.dim_h(),
                levi.dim_h()
            )));
        }
        Ok(SublaplacianData { levi, d, mu })
    }

    /// Eigenvalues of mu, exact when the matrix is exact triangular,
    /// otherwise closed form (r <= 2) or shifted Hessenberg QR (r <= 64).
    pub fn mu_eigenvalues(&self) -> Result<(Vec<Complex64>, Option<Vec<Scalar>>), HypoError> {
        if let Some(exact) = self.mu.triangular_exact_eigenvalues() {
            let vals = exact
                .iter()
                .map(|s| Complex64::new(s.to_f64(), 0.0))
                .collect();
            return Ok((vals, Some(exact)));
        }
        let m = self.mu.to_complex();
        if m.len() > 64 {
            return Err(HypoError::BadInput(format!(
                "mu size {} exceeds the supported cap of 64",
                m.len()
            )));
        }
        Ok((linalg::complex_eigenvalues(&m)?, None))
    }
}

/// The basic coefficient condition: Sp mu(a) disjoint from the singular
/// set, exact in rational mode, with tolerance eps = 1e-9 (1 + Trace|L|/2)
/// for floating data.
pub fn check_sublaplacian(data: &SublaplacianData) -> Result<ConditionReport, HypoError> {
    let sing = singular_set(&data.levi, data.d);
    let eps = sing.membership_eps();
    let (eigs, exact) = data.mu_eigenvalues()?;
    let mut margin = f64::INFINITY;
    for (idx, ev) in eigs.iter().enumerate() {
        let inside = match &exact {
            Some(exact_vals) => match sing.contains_exact(&exact_vals[idx]) {
                Some(flag) => flag,
                None => sing.contains(*ev, eps).is_some(),
            },
            None => sing.contains(*ev, eps).is_some(),
        };
        let (dist, nearest) = sing.distance(*ev);
        margin = margin.min(dist);
        if inside {
            return Ok(ConditionReport::fail(
                "sublaplacian",
                Witness::Eigenvalue {
                    eigenvalue: [ev.re, ev.im],
                    element: nearest.re,
                },
            ));
        }
    }
    Ok(ConditionReport::pass("sublaplacian", margin))
}

// ---------------------------------------------------------------------------
// Harmonic oscillator spectra
// ---------------------------------------------------------------------------

/// Lowest eigenvalues of the 1-D unit oscillator -d^2/dxi^2 + xi^2
/// discretized by second-order central differences on (-lbox, lbox) with
/// `n_grid` interior points and Dirichlet ends.
fn oscillator_1d_raw(count: usize, n_grid: usize, lbox: f64) -> Vec<f64> {
    let h = 2.0 * lbox / (n_grid as f64 + 1.0);
    let mut diag = Vec::with_capacity(n_grid);
    for i in 0..n_grid {
        let xi = -lbox + (i as f64 + 1.0) * h;
        diag.push(2.0 / (h * h) + xi * xi);
    }
    let off = vec![-1.0 / (h * h); n_grid.saturating_sub(1)];
    linalg::tridiagonal_lowest_eigenvalues(&diag, &off, count)
}

/// Two-level Richardson extrapolation of the raw grid eigenvalues over
/// internal refinements N, 2N, 4N, removing the h^2 and h^4 error terms.
fn oscillator_1d(count: usize, n_grid: usize, lbox: f64) -> Vec<f64> {
    // interior counts n, 2n+1, 4n+3 halve the spacing h = 2L/(n+1) exactly
    let e1 = oscillator_1d_raw(count, n_grid, lbox);
    let e2 = oscillator_1d_raw(count, 2 * n_grid + 1, lbox);
    let e4 = oscillator_1d_raw(count, 4 * n_grid + 3, lbox);
    (0..count)
        .map(|i| {
            let r_fine = (4.0 * e4[i] - e2[i]) / 3.0;
            let r_coarse = (4.0 * e2[i] - e1[i]) / 3.0;
            (16.0 * r_fine - r_coarse) / 15.0
        })
        .collect()
}

/// Lowest `count` eigenvalues of sum_j lambda_j (-d^2 + xi_j^2) as a
/// tensor sum of 1-D finite-difference spectra (Richardson-refined), via
/// heap enumeration of the multi-index sums.
pub fn oscillator_spectrum(lambdas: &[f64], count: usize, n_grid: usize, lbox: f64) -> Vec<f64> {
    let one_d = oscillator_1d(count.max(1), n_grid, lbox);
    tensor_sum_lowest(lambdas, &one_d, count)
}

/// Same, without Richardson refinement (exposes the O(h^2) convergence of
/// the plain discretization).
pub fn oscillator_spectrum_raw(
    lambdas: &[f64],
    count: usize,
    n_grid: usize,
    lbox: f64,
) -> Vec<f64> {
    let one_d = oscillator_1d_raw(count.max(1), n_grid, lbox);
    tensor_sum_lowest(lambdas, &one_d, count)
}

fn tensor_sum_lowest(lambdas: &[f64], one_d: &[f64], count: usize) -> Vec<f64> {
    use std::cmp::Reverse;
    use std::collections::{BinaryHeap, HashSet};
    let n = lambdas.len();
    if n == 0 {
        return vec![0.0; count.min(1)];
    }
    let energy = |alpha: &[usize]| -> f64 {
        alpha
            .iter()
            .zip(lambdas)
            .map(|(&a, &l)| l * one_d[a])
            .sum()
    };
    #[derive(PartialEq)]
    struct Node(f64, Vec<usize>);
    impl Eq for Node {}
    impl PartialOrd for Node {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Node {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.0.partial_cmp(&other.0).unwrap()
        }
    }
    let start = vec![0usize; n];
    let mut heap = BinaryHeap::new();
    let mut seen = HashSet::new();
    heap.push(Reverse(Node(energy(&start), start.clone())));
    seen.insert(start);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let Some(Reverse(Node(e, alpha))) = heap.pop() else {
            break;
        };
        out.push(e);
        for j in 0..n {
            let mut next = alpha.clone();
            next[j] += 1;
            if next[j] < one_d.len() && !seen.contains(&next) {
                heap.push(Reverse(Node(energy(&next), next.clone())));
                seen.insert(next);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Rockland reduction for sublaplacians
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct RocklandDetail {
    /// Max |grid - analytic| over the cross-checked oscillator levels.
    pub oscillator_crosscheck: f64,
    /// Lowest analytic levels sum lambda_j (1 + 2 alpha_j).
    pub base_levels: Vec<f64>,
}

/// The Rockland condition specialized to sublaplacians via the two-family
/// representation reduction: the one-dimensional family demands
/// invertibility of |xi'|^2 on xi' != 0 (checked explicitly), and the
/// infinite-dimensional family reduces, through the oscillator spectrum
/// shifted by |xi''|^2 + mu, to the singular-set test. A discretized
/// oscillator spectrum cross-checks the analytic levels.
pub fn rockland_sublaplacian(
    data: &SublaplacianData,
) -> Result<(ConditionReport, RocklandDetail), HypoError> {
    let lam = data.levi.lambdas_f64();
    let n = lam.len();

    // condition (ii): restriction of the symbol to xi_0 = 0 is
    // |xi'|^2 * I_r, invertible away from 0; exercise it on samples
    let r = data.mu.size();
    let mut restricted_ok = true;
    for k in 0..data.d {
        let mut xi = vec![0.0; data.d];
        xi[k] = 1.0 + k as f64;
        let norm2: f64 = xi.iter().map(|v| v * v).sum();
        // the matrix norm2 * I is singular only when norm2 == 0
        if norm2 <= 0.0 {
            restricted_ok = false;
        }
    }
    let _ = r;

    // cross-check: grid oscillator spectrum against the analytic levels
    let levels = 6.min(1 + 5 * n.max(1));
    let detail = if n > 0 {
        let grid = oscillator_spectrum(&lam, levels, 512, 10.0);
        let analytic = analytic_levels(&lam, levels);
        let diff = grid
            .iter()
            .zip(&analytic)
            .map(|(g, a)| (g - a).abs())
            .fold(0.0f64, f64::max);
        RocklandDetail {
            oscillator_crosscheck: diff,
            base_levels: analytic,
        }
    } else {
        RocklandDetail {
            oscillator_crosscheck: 0.0,
            base_levels: vec![],
        }
    };

    // condition (i) via the singular-set reduction
    let mut report = check_sublaplacian(data)?;
    report.criterion = "rockland".into();
    if !restricted_ok {
        report.pass = false;
    }
    report.notes.push(format!(
        "oscillator grid cross-check: max deviation {:.3e}",
        detail.oscillator_crosscheck
    ));
    Ok((report, detail))
}

fn analytic_levels(lambdas: &[f64], count: usize) -> Vec<f64> {
    // sum lambda_j (1 + 2 alpha_j) enumerated ascending
    let identity: Vec<f64> = (0..4 * count).map(|k| 1.0 + 2.0 * k as f64).collect();
    tensor_sum_lowest(lambdas, &identity, count)
}

// ---------------------------------------------------------------------------
// Degree-wise geometric conditions
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CRSignature {
    /// CR dimension.
    pub n: usize,
    /// Rank of the Levi form at the point.
    pub r: usize,
    /// Number of negative eigenvalues.
    pub kappa: usize,
}

impl CRSignature {
    pub fn new(n: usize, r: usize, kappa: usize) -> Result<Self, HypoError> {
        if !(kappa <= r && r <= n) {
            return Err(HypoError::BadInput(format!(
                "signature needs kappa <= r <= n, got ({n}, {r}, {kappa})"
            )));
        }
        Ok(CRSignature { n, r, kappa })
    }
}

fn degree_report(criterion: &str, value: i64, forbidden: &[i64]) -> ConditionReport {
    if forbidden.contains(&value) {
        ConditionReport::fail(criterion, Witness::Degree { value })
    } else {
        let margin = forbidden
            .iter()
            .map(|f| (f - value).abs() as f64)
            .fold(f64::INFINITY, f64::min);
        ConditionReport::pass(criterion, if margin.is_finite() { margin } else { f64::INFINITY })
    }
}

/// Kohn-Laplacian condition in degree q: fail when q lies in
/// {kappa..kappa+n-r} or {r-kappa..n-kappa}.
pub fn y_q(sig: &CRSignature, q: usize) -> Result<ConditionReport, HypoError> {
    if q > sig.n {
        return Err(HypoError::BadInput(format!("q = {q} exceeds n = {}", sig.n)));
    }
    let (n, r, kappa) = (sig.n as i64, sig.r as i64, sig.kappa as i64);
    let mut forbidden: Vec<i64> = (kappa..=kappa + n - r).collect();
    forbidden.extend(r - kappa..=n - kappa);
    Ok(degree_report("yq", q as i64, &forbidden))
}

/// Horizontal-sublaplacian condition in form degree k: fail when
/// r <= k <= d - r with 2r the Levi rank.
pub fn x_k(levi: &LeviData, d: usize, k: usize) -> Result<ConditionReport, HypoError> {
    if k > d {
        return Err(HypoError::BadInput(format!("k = {k} exceeds d = {d}")));
    }
    let r = levi.n_pairs() as i64;
    let forbidden: Vec<i64> = (r..=(d as i64 - r)).collect();
    Ok(degree_report("xk", k as i64, &forbidden))
}

/// The exterior-algebra spectrum of the horizontal sublaplacian
/// coefficient on degree-k forms: values sum_{j in J} lambda_j - sum_{j in
/// K} lambda_j over subset pairs with |J| + |K| <= k and enough kernel
/// directions left to fill the form degree, with multiplicities.
pub struct MuSpectrum {
    /// (value, multiplicity, example J, example K), sorted by value.
    pub values: Vec<(Scalar, u64, Vec<usize>, Vec<usize>)>,
}

pub fn horizontal_mu_spectrum(
    levi: &LeviData,
    d: usize,
    k: usize,
) -> Result<(MuSpectrum, ConditionReport), HypoError> {
    let n = levi.n_pairs();
    if n > 16 {
        return Err(HypoError::TooManyPairs(n));
    }
    if k > d {
        return Err(HypoError::BadInput(format!("k = {k} exceeds d = {d}")));
    }
    let free = d - 2 * n; // kernel directions available for the fill
    let mut values: Vec<(Scalar, u64, Vec<usize>, Vec<usize>)> = Vec::new();
    let lambdas = &levi.lambdas;

    let subsets: Vec<(u32, Scalar, Vec<usize>)> = (0u32..(1 << n))
        .map(|mask| {
            let mut sum = Scalar::zero();
            let mut idx = Vec::new();
            for (j, lam) in lambdas.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    sum = &sum + lam;
                    idx.push(j + 1);
                }
            }
            (mask.count_ones(), sum, idx)
        })
        .collect();

    for (sj, sum_j, idx_j) in &subsets {
        for (sk, sum_k, idx_k) in &subsets {
            let used = (sj + sk) as usize;
            if used > k {
                continue;
            }
            let fill = k - used;
            if fill > free {
                continue;
            }
            let mult = binomial(free as u64, fill as u64);
            let value = sum_j - sum_k;
            match values
                .iter_mut()
                .find(|(v, ..)| v.eq_exact(&value))
            {
                Some(entry) => entry.1 += mult,
                None => values.push((value, mult, idx_j.clone(), idx_k.clone())),
            }
        }
    }
    values.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    // verdict: +-Trace|L|/2 must stay out of the spectrum
    let half = &levi.trace_abs * &Scalar::ratio(1, 2);
    let neg_half = -&half;
    let exact_mode = half.is_exact() && values.iter().all(|(v, ..)| v.is_exact());
    let eps = 1e-9 * (1.0 + half.to_f64());
    let mut report = ConditionReport::pass("horizontal-mu", f64::INFINITY);
    let mut margin = f64::INFINITY;
    for (v, _, ij, ik) in &values {
        for target in [&half, &neg_half] {
            let hit = if exact_mode {
                v.eq_exact(target)
            } else {
                (v.to_f64() - target.to_f64()).abs() <= eps
            };
            margin = margin.min((v.to_f64() - target.to_f64()).abs());
            if hit {
                report = ConditionReport::fail(
                    "horizontal-mu",
                    Witness::SubsetPair {
                        j: ij.clone(),
                        k: ik.clone(),
                        value: v.to_f64(),
                        element: target.to_f64(),
                    },
                );
            }
        }
    }
    if report.pass {
        report.margin = margin;
    }
    Ok((MuSpectrum { values }, report))
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Bidegree Kohn condition: fail when (p, q) or (q, p) lies in
/// {(kappa + j, r - kappa + l) : max(j, l) <= n - r}.
pub fn y_pq(sig: &CRSignature, p: usize, q: usize) -> Result<ConditionReport, HypoError> {
    if p > sig.n || q > sig.n {
        return Err(HypoError::BadInput(format!(
            "(p, q) = ({p}, {q}) exceeds n = {}",
            sig.n
        )));
    }
    let (n, r, kappa) = (sig.n as i64, sig.r as i64, sig.kappa as i64);
    let m = n - r;
    let mut margin = f64::INFINITY;
    for j in 0..=m {
        for l in 0..=m {
            let a = kappa + j;
            let b = r - kappa + l;
            for (pp, qq) in [(p as i64, q as i64), (q as i64, p as i64)] {
                let dist = (pp - a).abs().max((qq - b).abs());
                margin = margin.min(dist as f64);
                if pp == a && qq == b {
                    return Ok(ConditionReport::fail(
                        "ypq",
                        Witness::Degree {
                            value: p as i64 * 1000 + q as i64,
                        },
                    ));
                }
            }
        }
    }
    Ok(ConditionReport::pass("ypq", margin))
}

/// Contact-Laplacian profile on degree-k forms of a contact manifold of
/// dimension 2n+1: order 4 in the middle degree, 2 elsewhere, invertible
/// principal symbol throughout.
pub fn contact_profile(n: usize, k: usize) -> Result<(u32, bool), HypoError> {
    if k > 2 * n {
        return Err(HypoError::BadInput(format!("k = {k} exceeds 2n = {}", 2 * n)));
    }
    Ok((if k == n { 4 } else { 2 }, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(values: &[i64]) -> Vec<Scalar> {
        values.iter().map(|&v| Scalar::from_int(v)).collect()
    }

    fn levi(values: &[i64], d: usize) -> LeviData {
        LeviData::from_lambdas(&lam(values), d)
    }

    #[test]
    fn lattice_singular_set_for_heis3() {
        let s = singular_set(&levi(&[2], 2), 2);
        assert_eq!(s.kind, SingularSetKind::Lattice);
        let vals = s.lattice_values_up_to(20.0);
        assert_eq!(vals, vec![2.0, 6.0, 10.0, 14.0, 18.0]);
        assert!(s.contains(Complex64::new(6.0, 0.0), 1e-9).is_some());
        assert!(s.contains(Complex64::new(4.0, 0.0), 1e-9).is_none());
        assert_eq!(s.contains_exact(&Scalar::from_int(-10)), Some(true));
        assert_eq!(s.contains_exact(&Scalar::from_int(3)), Some(false));
    }

    #[test]
    fn zero_levi_gives_full_real_line() {
        let s = singular_set(&levi(&[], 2), 2);
        assert_eq!(s.kind, SingularSetKind::Rays);
        assert!(s.contains(Complex64::new(0.0, 0.0), 1e-9).is_some());
        assert!(s.contains(Complex64::new(0.3, 0.5), 1e-9).is_none());
        assert_eq!(s.contains_exact(&Scalar::zero()), Some(true));
    }

    #[test]
    fn mixed_lattice() {
        let s = singular_set(&levi(&[1, 3], 4), 4);
        // +-(4 + 2 a1 + 6 a2)
        let vals = s.lattice_values_up_to(13.0);
        assert_eq!(vals, vec![4.0, 6.0, 8.0, 10.0, 12.0]);
    }

    #[test]
    fn sublaplacian_condition_examples() {
        // mu = 0, lambda = {2}, d = 2: nonvanishing Levi form passes
        let data =
            SublaplacianData::new(levi(&[2], 2), 2, MuMatrix::scalar(Scalar::zero())).unwrap();
        let rep = check_sublaplacian(&data).unwrap();
        assert!(rep.pass);
        assert!((rep.margin - 2.0).abs() < 1e-12);

        // mu = 2 sits on the lattice
        let data =
            SublaplacianData::new(levi(&[2], 2), 2, MuMatrix::scalar(Scalar::from_int(2))).unwrap();
        let rep = check_sublaplacian(&data).unwrap();
        assert!(!rep.pass);
        match rep.witness {
            Some(Witness::Eigenvalue { eigenvalue, element }) => {
                assert_eq!(eigenvalue, [2.0, 0.0]);
                assert_eq!(element, 2.0);
            }
            ref other => panic!("unexpected witness {other:?}"),
        }

        // mu = diag(0, 6): 6 = 2 + 4 is in the lattice
        let mu = MuMatrix::Exact(vec![
            vec![Scalar::zero(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::from_int(6)],
        ]);
        let data = SublaplacianData::new(levi(&[2], 2), 2, mu).unwrap();
        let rep = check_sublaplacian(&data).unwrap();
        assert!(!rep.pass);
        match rep.witness {
            Some(Witness::Eigenvalue { eigenvalue, .. }) => assert_eq!(eigenvalue[0], 6.0),
            ref other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn oscillator_spectrum_reference_values() {
        let spec = oscillator_spectrum(&[2.0], 4, 512, 10.0);
        for (got, want) in spec.iter().zip([2.0, 6.0, 10.0, 14.0]) {
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
        let spec = oscillator_spectrum(&[1.0], 4, 512, 10.0);
        for (got, want) in spec.iter().zip([1.0, 3.0, 5.0, 7.0]) {
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
        let spec = oscillator_spectrum(&[1.0, 3.0], 5, 512, 10.0);
        for (got, want) in spec.iter().zip([4.0, 6.0, 8.0, 10.0, 10.0]) {
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
    }

    #[test]
    fn oscillator_raw_converges_at_second_order() {
        let exact = 1.0;
        let errs: Vec<f64> = [128usize, 256, 512]
            .iter()
            .map(|&n| (oscillator_spectrum_raw(&[1.0], 1, n, 10.0)[0] - exact).abs())
            .collect();
        let slope1 = (errs[0] / errs[1]).log2();
        let slope2 = (errs[1] / errs[2]).log2();
        assert!((slope1 - 2.0).abs() < 0.2, "slope {slope1}");
        assert!((slope2 - 2.0).abs() < 0.2, "slope {slope2}");
    }

    #[test]
    fn rockland_matches_basic_condition() {
        for (mu, want) in [(0, true), (2, false), (4, true), (6, false)] {
            let data = SublaplacianData::new(
                levi(&[2], 2),
                2,
                MuMatrix::scalar(Scalar::from_int(mu)),
            )
            .unwrap();
            let (rep, detail) = rockland_sublaplacian(&data).unwrap();
            assert_eq!(rep.pass, want, "mu = {mu}");
            assert!(detail.oscillator_crosscheck < 1e-4);
        }
        // degenerate Levi form with mu = 0 fails (singular set is all of R)
        let data =
            SublaplacianData::new(levi(&[], 2), 2, MuMatrix::scalar(Scalar::zero())).unwrap();
        let (rep, _) = rockland_sublaplacian(&data).unwrap();
        assert!(!rep.pass);
    }

    #[test]
    fn yq_tables() {
        // strictly pseudoconvex: fail exactly at q in {0, n}
        for n in 1..=6 {
            let sig = CRSignature::new(n, n, 0).unwrap();
            for q in 0..=n {
                let rep = y_q(&sig, q).unwrap();
                assert_eq!(rep.pass, !(q == 0 || q == n), "n={n} q={q}");
            }
        }
        // kappa-strictly pseudoconvex: fail exactly at {kappa, n - kappa}
        for n in 1..=6 {
            for kappa in 0..=n {
                let sig = CRSignature::new(n, n, kappa).unwrap();
                for q in 0..=n {
                    let rep = y_q(&sig, q).unwrap();
                    assert_eq!(rep.pass, !(q == kappa || q == n - kappa));
                }
            }
        }
        // n=2, r=1, kappa=0 fails for every q
        let sig = CRSignature::new(2, 1, 0).unwrap();
        for q in 0..=2 {
            assert!(!y_q(&sig, q).unwrap().pass);
        }
    }

    #[test]
    fn xk_tables() {
        // contact case d = 2n: fail only at k = n
        let l = levi(&[1, 1], 4);
        for k in 0..=4 {
            assert_eq!(x_k(&l, 4, k).unwrap().pass, k != 2);
        }
        // k = 0 passes iff the Levi form does not vanish
        assert!(x_k(&levi(&[1], 4), 4, 0).unwrap().pass);
        assert!(!x_k(&levi(&[], 4), 4, 0).unwrap().pass);
        // d=4, r=1: pass at k=0 and k=4 only
        let l = levi(&[1], 4);
        for k in 0..=4 {
            assert_eq!(x_k(&l, 4, k).unwrap().pass, k == 0 || k == 4);
        }
    }

    #[test]
    fn horizontal_spectrum_examples() {
        // n=1, lambda={2}, d=2, k=1: spectrum {+2, -2, 0?}
        let (spec, rep) = horizontal_mu_spectrum(&levi(&[2], 2), 2, 1).unwrap();
        let vals: Vec<f64> = spec.values.iter().map(|(v, ..)| v.to_f64()).collect();
        assert_eq!(vals, vec![-2.0, 2.0]);
        assert!(!rep.pass);

        // k = 0: spectrum {0}, passes iff Trace|L| > 0
        let (spec, rep) = horizontal_mu_spectrum(&levi(&[2], 2), 2, 0).unwrap();
        assert_eq!(spec.values.len(), 1);
        assert!(spec.values[0].0.is_zero());
        assert!(rep.pass);
        let (_, rep) = horizontal_mu_spectrum(&levi(&[], 2), 2, 0).unwrap();
        assert!(!rep.pass);
    }

    #[test]
    fn horizontal_verdict_matches_xk_exactly() {
        use crate::rng::SplitMix64;
        let mut rng = SplitMix64::new(2024);
        let mut cases = 0;
        while cases < 60 {
            let n = rng.range_i64(0, 4) as usize;
            let dmin = 2 * n.max(1);
            let d = rng.range_i64(dmin as i64, 10) as usize;
            if 2 * n > d {
                continue;
            }
            let lams: Vec<Scalar> = (0..n)
                .map(|_| Scalar::ratio(rng.range_i64(1, 12), rng.range_i64(1, 5)))
                .collect();
            let l = LeviData::from_lambdas(&lams, d);
            for k in 0..=d {
                let (_, hrep) = horizontal_mu_spectrum(&l, d, k).unwrap();
                let xrep = x_k(&l, d, k).unwrap();
                assert_eq!(hrep.pass, xrep.pass, "n={n} d={d} k={k}");
            }
            cases += 1;
        }
    }

    #[test]
    fn ypq_tables() {
        // kappa-strictly pseudoconvex: fail iff (p,q) in {(kappa, n-kappa), (n-kappa, kappa)}
        for n in 1..=6 {
            for kappa in 0..=n {
                let sig = CRSignature::new(n, n, kappa).unwrap();
                for p in 0..=n {
                    for q in 0..=n {
                        let rep = y_pq(&sig, p, q).unwrap();
                        let fail = (p == kappa && q == n - kappa) || (p == n - kappa && q == kappa);
                        assert_eq!(rep.pass, !fail, "n={n} kappa={kappa} p={p} q={q}");
                    }
                }
            }
        }
        // r = n, kappa = 0, (1,1), n >= 3 passes
        let sig = CRSignature::new(3, 3, 0).unwrap();
        assert!(y_pq(&sig, 1, 1).unwrap().pass);
        // symmetry
        let sig = CRSignature::new(4, 3, 1).unwrap();
        for p in 0..=4 {
            for q in 0..=4 {
                assert_eq!(y_pq(&sig, p, q).unwrap().pass, y_pq(&sig, q, p).unwrap().pass);
            }
        }
    }

    #[test]
    fn contact_profile_values() {
        assert_eq!(contact_profile(1, 1).unwrap(), (4, true));
        assert_eq!(contact_profile(2, 0).unwrap(), (2, true));
        assert_eq!(contact_profile(2, 4).unwrap(), (2, true));
        assert!(contact_profile(2, 5).is_err());
    }

    #[test]
    fn lattice_membership_symmetric_under_negation() {
        let s = singular_set(&levi(&[1, 3], 4), 4);
        for v in s.lattice_values_up_to(30.0) {
            assert!(s.contains(Complex64::new(-v, 0.0), 1e-9).is_some());
        }
    }
}
