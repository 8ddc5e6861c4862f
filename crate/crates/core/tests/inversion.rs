//! Grid-level oracles for the quantizer: the model sublaplacian applied
//! spectrally against an independent finite-difference discretization,
//! and the parametrix symbol driven through the inversion check.

use heiscalc_core::geometry::LeviData;
use heiscalc_core::grid::{make_s0, GridFn, GridSpec};
use heiscalc_core::hypocheck::MuMatrix;
use heiscalc_core::parametrix::{build_parametrix_symbol, ParametrixEngine};
use heiscalc_core::quantize::{
    quantize_apply, ComposedSymbol, ModelSymbols, SublaplacianGridOp, SublaplacianSymbol,
};
use heiscalc_core::scalar::Scalar;
use num_complex::Complex64;

fn heis3_levi() -> LeviData {
    let mut levi = LeviData::from_lambdas(&[Scalar::from_int(2)], 2);
    levi.matrix[0][1] = Scalar::from_int(-2);
    levi.matrix[1][0] = Scalar::from_int(2);
    levi
}

/// Sixth-order periodic central differences.
fn derivative(f: &GridFn, axis: usize) -> GridFn {
    let spec = &f.spec;
    let n = spec.size[axis] as i64;
    let strides = spec.strides();
    let stride = strides[axis] as i64;
    let h = spec.spacing(axis);
    let mut out = GridFn::zeros(spec);
    let total = spec.total() as i64;
    let coeffs = [(1i64, 45.0), (2, -9.0), (3, 1.0)];
    for flat in 0..total {
        let idx = (flat / stride) % n;
        let mut acc = Complex64::new(0.0, 0.0);
        for (off, c) in coeffs {
            let plus = flat + ((idx + off).rem_euclid(n) - idx) * stride;
            let minus = flat + ((idx - off).rem_euclid(n) - idx) * stride;
            acc += (f.data[plus as usize] - f.data[minus as usize]) * c;
        }
        out.data[flat as usize] = acc / (60.0 * h);
    }
    out
}

/// -(X_1^2 + ... + X_d^2) f by finite differences, with
/// X_j = d_j + (c x')_j d_0.
fn fd_model_sublaplacian(model: &ModelSymbols, spec: &GridSpec, f: &GridFn) -> GridFn {
    let d = spec.dims - 1;
    let points: Vec<Vec<f64>> = (0..spec.dims).map(|a| spec.axis_points(a)).collect();
    let strides = spec.strides();
    let drift = |j: usize, flat: usize| -> f64 {
        let mut acc = 0.0;
        for k in 0..d {
            let idx = (flat / strides[1 + k]) % spec.size[1 + k];
            acc += model.coupling[j][k] * points[1 + k][idx];
        }
        acc
    };
    let apply_xj = |j: usize, g: &GridFn| -> GridFn {
        let dj = derivative(g, 1 + j);
        let d0 = derivative(g, 0);
        let mut out = dj;
        for (flat, v) in out.data.iter_mut().enumerate() {
            *v += d0.data[flat] * drift(j, flat);
        }
        out
    };
    let mut total = GridFn::zeros(spec);
    for j in 0..d {
        let once = apply_xj(j, f);
        let twice = apply_xj(j, &once);
        for (flat, v) in total.data.iter_mut().enumerate() {
            *v -= twice.data[flat];
        }
    }
    total
}

#[test]
fn spectral_and_finite_difference_sublaplacian_agree() {
    // two independent discretizations of the same model operator
    let levi = heis3_levi();
    let model = ModelSymbols::from_levi(&levi);
    let spec = GridSpec::cubic(3, 64, 10.0);
    let f = make_s0(&spec, 20).values;
    let op = SublaplacianGridOp {
        model: model.clone(),
        mu: Complex64::new(0.0, 0.0),
    };
    let spectral = op.apply(&spec, &f).unwrap();
    let fd = fd_model_sublaplacian(&model, &spec, &f);
    let err = spectral.sub(&fd).l2_norm_interior() / spectral.l2_norm_interior();
    println!("FD vs spectral relative interior error: {err:.3e}");
    assert!(err <= 1e-3, "relative error {err}");
}

#[test]
fn parametrix_inverts_model_sublaplacian_small_grid() {
    let levi = heis3_levi();
    let engine = ParametrixEngine::new(&levi, 2);
    let qsym = build_parametrix_symbol(&engine, &MuMatrix::scalar(Scalar::zero())).unwrap();
    let delta = SublaplacianGridOp {
        model: ModelSymbols::from_levi(&levi),
        mu: Complex64::new(0.0, 0.0),
    };
    for n in [16usize, 32] {
        let spec = GridSpec::cubic(3, n, 10.0);
        let report =
            heiscalc_core::quantize::verify_inverse(&qsym, &delta, &spec, &[1]).unwrap();
        println!("grid {n}^3: errors {:?}", report.trials);
    }
}

#[test]
fn negative_control_is_far_from_inverse() {
    // using sigma_2 itself instead of the parametrix must fail loudly
    let levi = heis3_levi();
    let model = ModelSymbols::from_levi(&levi);
    let spec = GridSpec::cubic(3, 16, 10.0);
    let f = make_s0(&spec, 5).values;
    let delta = SublaplacianGridOp {
        model: model.clone(),
        mu: Complex64::new(0.0, 0.0),
    };
    let sym = SublaplacianSymbol {
        model: model.clone(),
        mu: Complex64::new(0.0, 0.0),
    };
    let sf = quantize_apply(&sym, &spec, &f).unwrap();
    let dsf = delta.apply(&spec, &sf).unwrap();
    let err = dsf.sub(&f).l2_norm_interior() / f.l2_norm_interior();
    println!("negative control error: {err:.3}");
    assert!(err >= 0.5);
}

#[test]
fn composed_parametrix_multiplier_linear_in_f() {
    let levi = heis3_levi();
    let engine = ParametrixEngine::new(&levi, 2);
    let qsym = build_parametrix_symbol(&engine, &MuMatrix::scalar(Scalar::zero())).unwrap();
    let model = ModelSymbols::from_levi(&levi);
    let composed = ComposedSymbol {
        symbol: &qsym,
        model: &model,
    };
    let spec = GridSpec::cubic(3, 16, 10.0);
    let f = make_s0(&spec, 8).values;
    let g = make_s0(&spec, 9).values;
    let a = Complex64::new(0.7, -1.1);
    let mut combo = GridFn::zeros(&spec);
    for i in 0..combo.data.len() {
        combo.data[i] = a * f.data[i] + g.data[i];
    }
    let lhs = quantize_apply(&composed, &spec, &combo).unwrap();
    let qf = quantize_apply(&composed, &spec, &f).unwrap();
    let qg = quantize_apply(&composed, &spec, &g).unwrap();
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..lhs.data.len() {
        worst = worst.max((lhs.data[i] - (a * qf.data[i] + qg.data[i])).norm());
        scale = scale.max(lhs.data[i].norm());
    }
    assert!(worst <= 1e-12 * scale.max(1e-300), "defect {worst}");
}

#[test]
fn mu_convention_regression() {
    // q_mu inverts the operator with multiplier sum sigma_j^2 + mu xi_0
    // (= -sum X_j^2 - i mu X_0); the i-mu variant is the negative control
    let levi = heis3_levi();
    let engine = ParametrixEngine::new(&levi, 2);
    let qsym = build_parametrix_symbol(&engine, &MuMatrix::scalar(Scalar::one())).unwrap();
    let spec = GridSpec::cubic(3, 32, 12.0);
    let right = SublaplacianGridOp {
        model: ModelSymbols::from_levi(&levi),
        mu: Complex64::new(1.0, 0.0),
    };
    let report = heiscalc_core::quantize::verify_inverse(&qsym, &right, &spec, &[1]).unwrap();
    assert!(report.max_error <= 0.05, "errors {:?}", report.trials);
    let wrong = SublaplacianGridOp {
        model: ModelSymbols::from_levi(&levi),
        mu: Complex64::new(0.0, 1.0),
    };
    let report = heiscalc_core::quantize::verify_inverse(&qsym, &wrong, &spec, &[1]).unwrap();
    assert!(report.max_error >= 0.5, "errors {:?}", report.trials);
}

/// Calibration sweep over the grid extent; kept for re-tuning the
/// periodization floor against the refinement-ratio gate.
#[test]
#[ignore]
fn extent_calibration_sweep() {
    let levi = heis3_levi();
    let engine = ParametrixEngine::new(&levi, 2);
    let qsym = build_parametrix_symbol(&engine, &MuMatrix::scalar(Scalar::zero())).unwrap();
    let delta = SublaplacianGridOp {
        model: ModelSymbols::from_levi(&levi),
        mu: Complex64::new(0.0, 0.0),
    };
    for l in [10.0, 12.0, 14.0, 16.0] {
        for n in [32usize, 64] {
            let spec = GridSpec::cubic(3, n, l);
            let report =
                heiscalc_core::quantize::verify_inverse(&qsym, &delta, &spec, &[1]).unwrap();
            println!("L={l} N={n}: {:?}", report.trials);
        }
    }
}
