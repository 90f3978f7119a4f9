use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use harqsim_core::codec::{ideal_llr, CodecConfig, TurboCodec};
use harqsim_core::phy::crc24_attach;
use harqsim_core::pucch::{
    decode_format1a, detect_decode_format1, encode_format1, encode_format1a, estimate_channel_lte,
    estimate_channel_nr, LtePucchConfig, NrPucchConfig,
};
use harqsim_core::wifi::{build_ack_frame, build_data_frame, wifi_decode, wifi_encode};
use harqsim_core::{Complex64, Mcs, SimParams};

fn pattern(n: usize) -> Vec<u8> {
    (0..n).map(|i| ((i * 2_654_435_761) >> 7 & 1) as u8).collect()
}

/// Deterministic LLRs with a sprinkling of sign errors so the decoder iterates.
fn noisy_llrs(bits: &[u8]) -> Vec<f64> {
    bits.iter()
        .enumerate()
        .map(|(i, &b)| {
            let flip = i % 17 == 3;
            ideal_llr(b ^ flip as u8, 1.0 + (i % 5) as f64 * 0.3)
        })
        .collect()
}

fn turbo(c: &mut Criterion) {
    let params = SimParams::default();
    let mut group = c.benchmark_group("turbo_decode");
    group.sample_size(20);
    for mcs in Mcs::ALL {
        let codec = TurboCodec::new(params.tb_size(mcs), params.g(), CodecConfig::default()).unwrap();
        let tb = crc24_attach(&pattern(codec.tb_size() - 24)).unwrap();
        let llrs = noisy_llrs(&codec.encode(&tb, 0).unwrap());
        let mut buf = codec.new_buffer();
        codec.deposit(&mut buf, &llrs, 0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("mcs{}", mcs.index())), &buf, |b, buf| {
            b.iter(|| codec.decode(black_box(buf)).unwrap())
        });
    }
    group.finish();
}

fn viterbi(c: &mut Criterion) {
    let mut group = c.benchmark_group("wifi_decode");
    for (name, frame) in [
        ("ack", build_ack_frame([2, 0, 0, 0, 0, 1])),
        ("data_1528", build_data_frame([2, 0, 0, 0, 0, 1], [2, 0, 0, 0, 0, 2], &pattern(1500))),
    ] {
        let llrs: Vec<f64> = wifi_encode(&frame).iter().flat_map(|s| [2.0 * s.re, 2.0 * s.im]).collect();
        group.bench_function(name, |b| b.iter(|| wifi_decode(black_box(&llrs)).unwrap()));
    }
    group.finish();
}

fn pucch(c: &mut Criterion) {
    let h = Complex64::from_polar(0.8, 0.4);
    let lte = LtePucchConfig::default();
    let tx = encode_format1a(1, &lte).unwrap();
    let rx = tx.with_values(tx.cells().iter().map(|&x| h * x).collect());
    c.bench_function("pucch_lte_receive", |b| {
        b.iter(|| {
            let est = estimate_channel_lte(black_box(&rx), &lte).unwrap();
            decode_format1a(&rx, &lte, &est).unwrap()
        })
    });
    let nr = NrPucchConfig::default();
    let tx = encode_format1(1, &nr).unwrap();
    let rx = tx.with_values(tx.cells().iter().map(|&x| h * x).collect());
    c.bench_function("pucch_nr_receive", |b| {
        b.iter(|| {
            let est = estimate_channel_nr(black_box(&rx), &nr).unwrap();
            detect_decode_format1(&rx, &nr, &est).unwrap()
        })
    });
}

criterion_group!(benches, turbo, viterbi, pucch);
criterion_main!(benches);
