//! Rayon lane against the sequential baseline for the quantizer hot path.
//!
//! Run with `cargo bench -p heiscalc-core`. The parametrix multiplier
//! composed with the model symbols is the dominant cost of `verify`;
//! the sublaplacian separable path is the cheap companion.

use criterion::{criterion_group, criterion_main, Criterion};
use heiscalc_core::geometry::LeviData;
use heiscalc_core::grid::{make_s0, GridSpec};
use heiscalc_core::hypocheck::MuMatrix;
use heiscalc_core::parametrix::{build_parametrix_symbol, ParametrixEngine};
use heiscalc_core::quantize::{
    quantize_apply_with_mode, ComposedSymbol, ExecMode, ModelSymbols, SublaplacianGridOp,
};
use heiscalc_core::scalar::Scalar;
use num_complex::Complex64;
use std::hint::black_box;

fn heis3_levi() -> LeviData {
    let mut levi = LeviData::from_lambdas(&[Scalar::from_int(2)], 2);
    levi.matrix[0][1] = Scalar::from_int(-2);
    levi.matrix[1][0] = Scalar::from_int(2);
    levi
}

fn bench_quantize(c: &mut Criterion) {
    let levi = heis3_levi();
    let engine = ParametrixEngine::new(&levi, 2);
    let qsym = build_parametrix_symbol(&engine, &MuMatrix::scalar(Scalar::zero())).unwrap();
    let model = ModelSymbols::from_levi(&levi);
    let composed = ComposedSymbol {
        symbol: &qsym,
        model: &model,
    };
    let spec = GridSpec::cubic(3, 16, 12.0);
    let f = make_s0(&spec, 1).values;

    let mut group = c.benchmark_group("parametrix_apply_16cube");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| {
            black_box(
                quantize_apply_with_mode(&composed, &spec, &f, ExecMode::Parallel).unwrap(),
            )
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            black_box(
                quantize_apply_with_mode(&composed, &spec, &f, ExecMode::Sequential).unwrap(),
            )
        })
    });
    group.finish();

    let op = SublaplacianGridOp {
        model: model.clone(),
        mu: Complex64::new(0.0, 0.0),
    };
    let spec32 = GridSpec::cubic(3, 32, 12.0);
    let f32v = make_s0(&spec32, 1).values;
    let mut group = c.benchmark_group("sublaplacian_apply_32cube");
    group.sample_size(10);
    group.bench_function("separable", |b| {
        b.iter(|| black_box(op.apply(&spec32, &f32v).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, bench_quantize);
criterion_main!(benches);
