//! Quick internal consistency checks, run by `bicmb selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::welch_satterthwaite;
use crate::beamforming::{diagonalization_error, svd_beamformers, transmit, NoiseModel};
use crate::channel::draw_channel;
use crate::detector::{Detector, SearchStrategy};
use crate::fec::{Constellation, ConvCode};
use crate::pstbc::{unitarity_error, PerfectCodeParams, SUPPORTED_DIMS};
use crate::sim::{awgn_calibration, SystemConfig};
use crate::{CMatrix, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.into(),
        passed,
        detail,
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SelfTestOptions {
    /// Replace the `D = 2` generator with a non-unitary one.
    pub corrupt_generator: bool,
}

/// The `D = 2` generator with one entry scaled by 1.1.
pub fn corrupted_params() -> PerfectCodeParams {
    let mut g: CMatrix = PerfectCodeParams::build(2).expect("D = 2 is supported").generator().clone();
    g[(0, 0)] *= 1.1;
    PerfectCodeParams::with_generator(2, g).expect("shape is 2x2")
}

fn params_for(dim: usize, opts: SelfTestOptions) -> PerfectCodeParams {
    if opts.corrupt_generator && dim == 2 {
        corrupted_params()
    } else {
        PerfectCodeParams::build(dim).expect("supported dimension")
    }
}

fn random_inputs(d: usize, c: &Constellation, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<Vec<C64>>) {
    let idx: Vec<usize> = (0..d * d).map(|_| rng.random_range(0..c.len())).collect();
    let x = idx.chunks(d).map(|r| r.iter().map(|&i| c.point(i)).collect()).collect();
    (idx, x)
}

pub fn run(opts: SelfTestOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f);
    let c = Constellation::qam16();

    for d in SUPPORTED_DIMS {
        let p = params_for(d, opts);
        let err = unitarity_error(p.generator());
        out.push(check(&format!("generator_unitary_d{d}"), err < 1e-12, format!("max |GᴴG − I| = {err:.2e}")));

        let shift = p.shift_cycle_error();
        out.push(check(&format!("shift_cycle_d{d}"), shift < 1e-12, format!("max |E^D − gI| = {shift:.2e}")));

        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let (_, x) = random_inputs(d, &c, &mut rng);
            let cw = p.encode(&x).expect("shapes match");
            let e = cw.input_energy();
            worst = worst.max((cw.z.norm_squared() - e).abs() / e);
        }
        out.push(check(
            &format!("codeword_energy_d{d}"),
            worst < 1e-12,
            format!("worst relative ‖Z‖² mismatch {worst:.2e}"),
        ));
    }

    let code = ConvCode::new();
    let dfree = code.free_distance();
    out.push(check("conv_free_distance", dfree == 10, format!("d_free = {dfree}")));

    let info: Vec<u8> = (0..200).map(|_| rng.random_range(0..2u8)).collect();
    let metrics: Vec<[f64; 2]> = code
        .encode_terminated(&info)
        .iter()
        .map(|&b| if b == 0 { [0.0, 1.0] } else { [1.0, 0.0] })
        .collect();
    out.push(check(
        "viterbi_noiseless",
        code.viterbi_decode(&metrics) == info,
        "200 info bits through hard metrics".into(),
    ));

    for d in [2, 3] {
        let cfg = SystemConfig::uniform(d, 8, 4, -20.0, 2);
        let p = params_for(d, opts);
        let chan = draw_channel(&cfg, &mut rng, 0).expect("valid config");
        let bf = svd_beamformers(&chan, d).expect("enough singular values");
        let diag = diagonalization_error(&chan, &bf) / bf.lambda_d[0];
        out.push(check(&format!("svd_diagonalizes_d{d}"), diag < 1e-9, format!("relative off-diagonal {diag:.2e}")));

        let det = Detector::new(&p, &bf.lambda_d, &c, SearchStrategy::Auto).expect("detector");
        let mut ok = 0;
        for _ in 0..5 {
            let (idx, x) = random_inputs(d, &c, &mut rng);
            let y = transmit(&bf, &p.encode(&x).expect("shapes"), NoiseModel::noiseless(), &mut rng);
            let hard = det.metrics(&y).expect("metrics").hard_bits();
            let sent: Vec<u8> = idx
                .iter()
                .flat_map(|&i| (0..c.bits_per_symbol()).map(move |j| (i, j)))
                .map(|(i, j)| c.bit_label(i, j))
                .collect();
            ok += usize::from(hard == sent);
        }
        out.push(check(
            &format!("detector_noiseless_d{d}"),
            ok == 5,
            format!("{ok}/5 codewords recovered"),
        ));
    }

    let r = welch_satterthwaite(&vec![vec![0.01; 2]; 2], &vec![vec![2; 2]; 2]).expect("valid grid");
    out.push(check(
        "diversity_uniform",
        (r.kappa - 8.0).abs() < 1e-12,
        format!("κ = {} for four 2-path subchannels", r.kappa),
    ));

    let (bits, errors) = awgn_calibration(10.0, 20_000, 11).expect("positive length");
    let sim = errors as f64 / bits as f64;
    let exact = crate::fec::qam16_awgn_ber(10.0);
    let rel = (sim - exact).abs() / exact;
    out.push(check(
        "awgn_calibration",
        rel < 0.1,
        format!("simulated {sim:.3e} vs closed form {exact:.3e}"),
    ));

    out
}
