//! Channel generation, AWGN, the real/imaginary stacking transform, and CSV dumps.

use std::f64::consts::PI;
use std::io::{Read, Write};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{CMatrix, CVector, Error, RMatrix, Result};

/// Draws one CN(0, σ²) sample.
pub fn cn<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// i.i.d. CN(0, 1) matrix drawn from an existing RNG.
pub fn rayleigh_from<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    // Row-major draw order so that dumps and regenerations line up.
    let mut h = CMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            h[(r, c)] = cn(rng, 1.0);
        }
    }
    h
}

/// i.i.d. CN(0, 1) `rows × cols` matrix, deterministic in `seed`.
pub fn rayleigh(rows: usize, cols: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rayleigh_from(&mut rng, rows, cols)
}

/// Adds CN(0, σ²) noise drawn from `rng`.
pub fn awgn_from<R: Rng + ?Sized>(rng: &mut R, x: &CVector, variance: f64) -> Result<CVector> {
    if !(variance >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noise variance must be >= 0, got {variance}"
        )));
    }
    if variance == 0.0 {
        return Ok(x.clone());
    }
    Ok(x.map(|v| v + cn(rng, variance)))
}

/// Adds CN(0, σ²) noise, deterministic in `seed`.
pub fn awgn(x: &CVector, variance: f64, seed: u64) -> Result<CVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    awgn_from(&mut rng, x, variance)
}

/// Line-of-sight ULA channel: row r is `exp(i·2π·d·k·cos θ_r)`, k = 0..N_t−1.
pub fn ula_los(angles_deg: &[f64], n_t: usize, spacing: f64) -> CMatrix {
    CMatrix::from_fn(angles_deg.len(), n_t, |r, k| {
        let ph = 2.0 * PI * spacing * k as f64 * angles_deg[r].to_radians().cos();
        Complex64::from_polar(1.0, ph)
    })
}

/// Users' and eavesdropper's channels for one block.
#[derive(Clone, Debug)]
pub struct ChannelSet {
    pub h_u: CMatrix,
    pub h_e: CMatrix,
    pub user_antenna_counts: Vec<usize>,
    pub seed: u64,
}

impl ChannelSet {
    /// Draws Rayleigh channels; `H_U` first, then `H_E`, from one stream.
    pub fn rayleigh(user_antenna_counts: &[usize], n_t: usize, n_e: usize, seed: u64) -> Self {
        let n_u: usize = user_antenna_counts.iter().sum();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h_u = rayleigh_from(&mut rng, n_u, n_t);
        let h_e = rayleigh_from(&mut rng, n_e, n_t);
        Self {
            h_u,
            h_e,
            user_antenna_counts: user_antenna_counts.to_vec(),
            seed,
        }
    }

    pub fn n_t(&self) -> usize {
        self.h_u.ncols()
    }

    pub fn n_u(&self) -> usize {
        self.h_u.nrows()
    }

    pub fn n_e(&self) -> usize {
        self.h_e.nrows()
    }

    /// Row range of user `r` inside `H_U`.
    pub fn user_rows(&self, r: usize) -> std::ops::Range<usize> {
        let start: usize = self.user_antenna_counts[..r].iter().sum();
        start..start + self.user_antenna_counts[r]
    }
}

/// Real-valued stacking of a complex channel.
///
/// For `w̃ = [Re w; Im w]`, `h1·w̃ = Re(H w)` and `h2·w̃ = Im(H w)`.
#[derive(Clone, Debug)]
pub struct StackedChannel {
    pub h1: RMatrix,
    pub h2: RMatrix,
}

/// `H1 = [Re H, −Im H]`, `H2 = [Im H, Re H]`.
pub fn stack(h: &CMatrix) -> StackedChannel {
    let (r, c) = h.shape();
    let mut h1 = RMatrix::zeros(r, 2 * c);
    let mut h2 = RMatrix::zeros(r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let z = h[(i, j)];
            h1[(i, j)] = z.re;
            h1[(i, c + j)] = -z.im;
            h2[(i, j)] = z.im;
            h2[(i, c + j)] = z.re;
        }
    }
    StackedChannel { h1, h2 }
}

/// `[Re w; Im w]`.
pub fn stack_vec(w: &CVector) -> crate::RVector {
    let n = w.len();
    crate::RVector::from_fn(2 * n, |i, _| if i < n { w[i].re } else { w[i - n].im })
}

/// Inverse of [`stack_vec`].
pub fn unstack_vec(wt: &crate::RVector) -> Result<CVector> {
    if !wt.len().is_multiple_of(2) {
        return Err(Error::dim(format!("stacked vector has odd length {}", wt.len())));
    }
    let n = wt.len() / 2;
    Ok(CVector::from_fn(n, |i, _| Complex64::new(wt[i], wt[n + i])))
}

/// Writes `h` as headerless CSV, one matrix row per line of `re,im` pairs.
pub fn write_csv<W: Write>(h: &CMatrix, out: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for r in 0..h.nrows() {
        let rec: Vec<String> = (0..h.ncols())
            .flat_map(|c| {
                let z = h[(r, c)];
                [format!("{:.17e}", z.re), format!("{:.17e}", z.im)]
            })
            .collect();
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads a matrix written by [`write_csv`].
pub fn read_csv<R: Read>(input: R) -> Result<CMatrix> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(input);
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() % 2 != 0 {
            return Err(Error::dim(format!("CSV row with odd field count {}", rec.len())));
        }
        let mut row = Vec::with_capacity(rec.len() / 2);
        for pair in 0..rec.len() / 2 {
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidParameter(format!("bad float {s:?}: {e}")))
            };
            row.push(Complex64::new(parse(&rec[2 * pair])?, parse(&rec[2 * pair + 1])?));
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::dim("ragged CSV matrix"));
            }
        }
        rows.push(row);
    }
    let nr = rows.len();
    let nc = rows.first().map_or(0, Vec::len);
    Ok(CMatrix::from_fn(nr, nc, |r, c| rows[r][c]))
}
