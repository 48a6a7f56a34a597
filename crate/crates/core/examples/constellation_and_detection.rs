//! M-PSK points, nearest-point detection, and the symbol error rate of a
//! plain AWGN link.

use dirmod::channel::awgn;
use dirmod::modulation::Constellation;
use dirmod::{db_to_linear, CVector};
use num_complex::Complex64;

fn main() -> dirmod::Result<()> {
    let psk = Constellation::psk8();
    println!("8-PSK, offset {:.4} rad", psk.offset());
    for k in 0..psk.order() {
        let p = psk.point(k);
        println!("  {k}: {:+.4} {:+.4}i", p.re, p.im);
    }

    // An offset of π/2 would put a point on the imaginary axis; it gets nudged.
    let qpsk = Constellation::new(4, std::f64::consts::FRAC_PI_2)?;
    println!("QPSK requested π/2, adjusted: {} -> {:.6}", qpsk.offset_adjusted(), qpsk.offset());

    let n = 20_000;
    let idx: Vec<usize> = (0..n).map(|i| (i * 5 + i / 7) % 8).collect();
    for snr_db in [10.0, 15.56, 20.0] {
        let x = psk.symbols(&idx) * Complex64::new(db_to_linear(snr_db).sqrt(), 0.0);
        let y: CVector = awgn(&x, 1.0, 3)?;
        let errors = psk.detect_all(&y).iter().zip(&idx).filter(|(a, b)| a != b).count();
        println!("SNR {snr_db:5.2} dB: SER {:.4}", errors as f64 / n as f64);
    }
    Ok(())
}
