use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

include!("tables.rs");

/// The seven supported wavelet families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Wavelet {
    #[serde(rename = "haar")]
    Haar,
    #[serde(rename = "db2")]
    Db2,
    #[serde(rename = "sym3")]
    Sym3,
    #[serde(rename = "coif1")]
    Coif1,
    #[serde(rename = "bior1.3")]
    Bior1_3,
    #[serde(rename = "rbio1.3")]
    Rbio1_3,
    #[serde(rename = "dmey")]
    Dmey,
}

impl Wavelet {
    pub const ALL: [Wavelet; 7] = [
        Wavelet::Haar,
        Wavelet::Db2,
        Wavelet::Sym3,
        Wavelet::Coif1,
        Wavelet::Bior1_3,
        Wavelet::Rbio1_3,
        Wavelet::Dmey,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Wavelet::Haar => "haar",
            Wavelet::Db2 => "db2",
            Wavelet::Sym3 => "sym3",
            Wavelet::Coif1 => "coif1",
            Wavelet::Bior1_3 => "bior1.3",
            Wavelet::Rbio1_3 => "rbio1.3",
            Wavelet::Dmey => "dmey",
        }
    }

    pub fn is_orthogonal(self) -> bool {
        !matches!(self, Wavelet::Bior1_3 | Wavelet::Rbio1_3)
    }

    pub fn bank(self) -> WaveletFilterBank {
        let (dec_lo, dec_hi, rec_lo, rec_hi) = match self {
            Wavelet::Haar => orthogonal(&HAAR_DEC_LO),
            Wavelet::Db2 => orthogonal(&DB2_DEC_LO),
            Wavelet::Sym3 => orthogonal(&SYM3_DEC_LO),
            Wavelet::Coif1 => orthogonal(&COIF1_DEC_LO),
            Wavelet::Dmey => orthogonal(&DMEY_DEC_LO),
            Wavelet::Bior1_3 => (
                BIOR1_3_DEC_LO.to_vec(),
                BIOR1_3_DEC_HI.to_vec(),
                BIOR1_3_REC_LO.to_vec(),
                BIOR1_3_REC_HI.to_vec(),
            ),
            Wavelet::Rbio1_3 => (
                RBIO1_3_DEC_LO.to_vec(),
                RBIO1_3_DEC_HI.to_vec(),
                RBIO1_3_REC_LO.to_vec(),
                RBIO1_3_REC_HI.to_vec(),
            ),
        };
        WaveletFilterBank::from_filters(self, dec_lo, dec_hi, rec_lo, rec_hi)
    }
}

impl fmt::Display for Wavelet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Wavelet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_lowercase();
        Wavelet::ALL
            .into_iter()
            .find(|w| w.name() == wanted)
            .ok_or_else(|| Error::UnknownWavelet(s.to_string()))
    }
}

/// Quadrature-mirror companions of an orthonormal lowpass, in the usual
/// `rec_lo = rev(dec_lo)`, `rec_hi[k] = (-1)^k dec_lo[k]`, `dec_hi = rev(rec_hi)` layout.
fn orthogonal(dec_lo: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
    let rec_lo: Vec<f64> = dec_lo.iter().rev().copied().collect();
    let rec_hi: Vec<f64> = dec_lo
        .iter()
        .enumerate()
        .map(|(k, &h)| if k % 2 == 0 { h } else { -h })
        .collect();
    let dec_hi: Vec<f64> = rec_hi.iter().rev().copied().collect();
    (dec_lo.to_vec(), dec_hi, rec_lo, rec_hi)
}

/// Analysis and synthesis filters of one wavelet, plus the two integer shifts
/// the periodized transform needs.
///
/// Filters follow the convolution convention: analysis computes
/// `y = dec ⊛ x` and keeps every other sample. `phase` picks which samples are
/// kept so that coefficient `k` of a level is centred on its own dyadic cell
/// (parents and children then share spatial support for every filter length).
/// `delay` is the end-to-end lag of the filter bank, undone after synthesis.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFilterBank {
    wavelet: Wavelet,
    dec_lo: Vec<f64>,
    dec_hi: Vec<f64>,
    rec_lo: Vec<f64>,
    rec_hi: Vec<f64>,
    phase: usize,
    delay: usize,
}

impl WaveletFilterBank {
    fn from_filters(
        wavelet: Wavelet,
        dec_lo: Vec<f64>,
        dec_hi: Vec<f64>,
        rec_lo: Vec<f64>,
        rec_hi: Vec<f64>,
    ) -> Self {
        let energy: f64 = dec_lo.iter().map(|h| h * h).sum();
        let centroid: f64 =
            dec_lo.iter().enumerate().map(|(n, h)| n as f64 * h * h).sum::<f64>() / energy;
        let phase = libm::round(centroid - 0.5).max(0.0) as usize;

        // Distortion polynomial rec_lo*dec_lo + rec_hi*dec_hi is 2 z^-delay.
        let len = dec_lo.len() + rec_lo.len() - 1;
        let mut distortion = alloc::vec![0.0; len];
        for (i, (&gl, &gh)) in dec_lo.iter().zip(&dec_hi).enumerate() {
            for (j, (&rl, &rh)) in rec_lo.iter().zip(&rec_hi).enumerate() {
                distortion[i + j] += gl * rl + gh * rh;
            }
        }
        let delay = distortion
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);

        WaveletFilterBank { wavelet, dec_lo, dec_hi, rec_lo, rec_hi, phase, delay }
    }

    pub fn wavelet(&self) -> Wavelet {
        self.wavelet
    }

    pub fn name(&self) -> &'static str {
        self.wavelet.name()
    }

    pub fn dec_lo(&self) -> &[f64] {
        &self.dec_lo
    }

    pub fn dec_hi(&self) -> &[f64] {
        &self.dec_hi
    }

    pub fn rec_lo(&self) -> &[f64] {
        &self.rec_lo
    }

    pub fn rec_hi(&self) -> &[f64] {
        &self.rec_hi
    }

    /// Decimation phase (samples kept are `2k + 1 + phase`).
    pub fn phase(&self) -> usize {
        self.phase
    }

    pub fn delay(&self) -> usize {
        self.delay
    }

    /// One analysis level on a periodic input of even length.
    pub(crate) fn analyze(&self, x: &[f64], approx: &mut [f64], detail: &mut [f64]) {
        let n = x.len();
        debug_assert!(n >= 2 && n % 2 == 0);
        for k in 0..n / 2 {
            let centre = 2 * k + 1 + self.phase;
            let (mut a, mut d) = (0.0, 0.0);
            for (i, (&lo, &hi)) in self.dec_lo.iter().zip(&self.dec_hi).enumerate() {
                let xi = x[wrap(centre as i64 - i as i64, n)];
                a += lo * xi;
                d += hi * xi;
            }
            approx[k] = a;
            detail[k] = d;
        }
    }

    /// Inverse of [`analyze`](Self::analyze).
    pub(crate) fn synthesize(&self, approx: &[f64], detail: &[f64], out: &mut [f64]) {
        let n = out.len();
        debug_assert_eq!(approx.len() * 2, n);
        out.iter_mut().for_each(|v| *v = 0.0);
        for (k, (&a, &d)) in approx.iter().zip(detail).enumerate() {
            let pos = (2 * k + 1 + self.phase) as i64 - self.delay as i64;
            for (i, (&lo, &hi)) in self.rec_lo.iter().zip(&self.rec_hi).enumerate() {
                out[wrap(pos + i as i64, n)] += a * lo + d * hi;
            }
        }
    }
}

#[inline]
fn wrap(i: i64, n: usize) -> usize {
    i.rem_euclid(n as i64) as usize
}

/// Looks up a filter bank by its conventional name (`haar`, `db2`, `sym3`,
/// `coif1`, `bior1.3`, `rbio1.3`, `dmey`).
pub fn filter_bank(name: &str) -> Result<WaveletFilterBank> {
    Ok(name.parse::<Wavelet>()?.bank())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT2: f64 = core::f64::consts::SQRT_2;

    #[test]
    fn haar_taps() {
        let b = filter_bank("haar").unwrap();
        let h = 1.0 / SQRT2;
        assert!(b.dec_lo().iter().all(|x| (x - h).abs() < 1e-15));
        assert!(b.dec_hi().iter().all(|x| (x.abs() - h).abs() < 1e-15));
        assert!(b.dec_hi()[0] * b.dec_hi()[1] < 0.0);
    }

    #[test]
    fn admissibility() {
        for w in Wavelet::ALL {
            let b = w.bank();
            let lo: f64 = b.dec_lo().iter().sum();
            let hi: f64 = b.dec_hi().iter().sum();
            assert!((lo - SQRT2).abs() < 1e-10, "{w}: sum(dec_lo) = {lo}");
            assert!(hi.abs() < 1e-10, "{w}: sum(dec_hi) = {hi}");
        }
        let db2 = Wavelet::Db2.bank();
        assert_eq!(db2.dec_lo().len(), 4);
        assert!((db2.dec_lo().iter().sum::<f64>() - SQRT2).abs() < 1e-12);
        assert!(db2.dec_hi().iter().sum::<f64>().abs() < 1e-12);
        assert_eq!(Wavelet::Dmey.bank().dec_lo().len(), 62);
    }

    #[test]
    fn bior13_cross_orthogonality() {
        let b = Wavelet::Bior1_3.bank();
        assert_eq!(b.dec_lo().len(), 6);
        assert_eq!(b.rec_lo().iter().filter(|v| **v != 0.0).count(), 2);
        let (g, r) = (b.dec_lo(), b.rec_lo());
        for m in -2i64..=2 {
            let s: f64 = (0..g.len() as i64)
                .filter(|n| (0..r.len() as i64).contains(&(n - 2 * m)))
                .map(|n| g[n as usize] * r[(n - 2 * m) as usize])
                .sum();
            let want = if m == 0 { 1.0 } else { 0.0 };
            assert!((s - want).abs() < 1e-10, "m={m}: {s}");
        }
    }

    #[test]
    fn orthogonal_rec_is_reversed_dec() {
        for w in Wavelet::ALL.into_iter().filter(|w| w.is_orthogonal()) {
            let b = w.bank();
            let rev: Vec<f64> = b.dec_lo().iter().rev().copied().collect();
            assert_eq!(rev, b.rec_lo());
            let rev: Vec<f64> = b.dec_hi().iter().rev().copied().collect();
            assert_eq!(rev, b.rec_hi());
        }
    }

    #[test]
    fn orthonormal_double_shifts() {
        for w in Wavelet::ALL.into_iter().filter(|w| w.is_orthogonal()) {
            let h = w.bank().dec_lo().to_vec();
            for shift in (0..h.len()).step_by(2) {
                let s: f64 = h.iter().zip(&h[shift..]).map(|(a, b)| a * b).sum();
                let want = if shift == 0 { 1.0 } else { 0.0 };
                assert!((s - want).abs() < 1e-10, "{w} shift {shift}: {s}");
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for w in Wavelet::ALL {
            assert_eq!(w.name().parse::<Wavelet>().unwrap(), w);
        }
        assert!(matches!(filter_bank("db4"), Err(Error::UnknownWavelet(_))));
        assert_eq!("DMEY".parse::<Wavelet>().unwrap(), Wavelet::Dmey);
    }
}
