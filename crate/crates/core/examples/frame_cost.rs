//! Prints the wall time per simulated frame for a few link sizes.

use std::time::Instant;

use bicmb::sim::{frame_rng, LinkContext, SystemConfig};

fn main() -> bicmb::Result<()> {
    let cases = [(2, 32, 16, 2), (2, 32, 16, 6), (3, 16, 8, 2), (4, 16, 8, 2)];
    for (d, n_t, n_r, l) in cases {
        let cfg = SystemConfig::uniform(d, n_t, n_r, -20.0, l);
        let ctx = LinkContext::new(&cfg)?;
        let noise = ctx.noise(6.0)?;
        let frames = if d >= 4 { 5 } else { 40 };
        let start = Instant::now();
        let mut errors = 0;
        for f in 0..frames {
            errors += ctx.simulate_frame(noise, &mut frame_rng(1, 0, f))?.bit_errors;
        }
        let per = start.elapsed().as_secs_f64() / frames as f64;
        println!("D={d} N_t={n_t} N_r={n_r} L={l}: {:.2} ms/frame ({errors} errors)", per * 1e3);
    }
    Ok(())
}
