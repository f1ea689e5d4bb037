//! On-disk formats: signal CSV, tree/model/report JSON and the result tables.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use wavecomplex_core::complexity::ComplexityReport;
use wavecomplex_core::dwt::{Wavelet, WaveletTree};
use wavecomplex_core::hmt::{FitConfig, FitResult, HmtParams};
use wavecomplex_core::orchestrate::{RowStatus, Selection, SweepRow};

use crate::error::CliError;

/// Writes one sample per line with 17 significant digits.
pub fn write_signal<W: Write>(mut out: W, samples: &[f64]) -> io::Result<()> {
    for x in samples {
        writeln!(out, "{x:.16e}")?;
    }
    out.flush()
}

/// Reads the first column of a CSV-ish file. Blank lines and `#` comments are
/// skipped, as is a non-numeric first row (header).
pub fn read_signal<R: BufRead>(input: R) -> Result<Vec<f64>, CliError> {
    let mut samples = Vec::new();
    let mut seen_row = false;
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let field = line.split(',').next().unwrap_or("").trim();
        match field.parse::<f64>() {
            Ok(x) if x.is_finite() => samples.push(x),
            Ok(_) => return Err(CliError::Input(format!("line {}: non-finite sample", lineno + 1))),
            Err(_) if !seen_row => {}
            Err(_) => return Err(CliError::Input(format!("line {}: cannot parse `{field}`", lineno + 1))),
        }
        seen_row = true;
    }
    if samples.is_empty() {
        return Err(CliError::Input("no samples".into()));
    }
    Ok(samples)
}

pub fn write_tree<W: Write>(out: W, tree: &WaveletTree) -> Result<(), CliError> {
    Ok(serde_json::to_writer_pretty(out, tree)?)
}

pub fn read_tree<R: io::Read>(input: R) -> Result<WaveletTree, CliError> {
    Ok(serde_json::from_reader(input)?)
}

/// Settings a model was fitted with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelet: Option<Wavelet>,
    #[serde(flatten)]
    pub fit: FitConfig,
}

/// Persisted fit: parameters, final log-likelihood (nats) and settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(flatten)]
    pub params: HmtParams,
    pub log_likelihood: f64,
    pub config: ModelConfig,
}

impl ModelFile {
    pub fn new(fitted: &FitResult, wavelet: Option<Wavelet>, fit: &FitConfig) -> Self {
        ModelFile {
            params: fitted.params.clone(),
            log_likelihood: fitted.log_likelihood(),
            config: ModelConfig { wavelet, fit: fit.clone() },
        }
    }
}

pub fn write_model<W: Write>(out: W, model: &ModelFile) -> Result<(), CliError> {
    Ok(serde_json::to_writer_pretty(out, model)?)
}

pub fn read_model<R: io::Read>(input: R) -> Result<ModelFile, CliError> {
    Ok(serde_json::from_reader(input)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    #[serde(default)]
    pub wavelet: Option<Wavelet>,
    #[serde(flatten)]
    pub report: ComplexityReport,
}

pub fn write_report_json<W: Write>(out: W, wavelet: Option<Wavelet>, report: &ComplexityReport) -> Result<(), CliError> {
    Ok(serde_json::to_writer_pretty(out, &ReportFile { wavelet, report: report.clone() })?)
}

pub fn write_report_csv<W: Write>(out: W, wavelet: Option<Wavelet>, r: &ComplexityReport) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> =
        ["wavelet", "J", "M", "global_C", "global_C_norm", "entropy_rate_norm", "monotone_run"].map(String::from).into();
    header.extend((0..r.local_c.len()).map(|j| format!("local_C_{j}")));
    w.write_record(&header)?;
    let mut row = vec![
        wavelet.map(|w| w.name().to_string()).unwrap_or_default(),
        r.levels.to_string(),
        r.states.to_string(),
        r.global_c.to_string(),
        r.global_c_norm.to_string(),
        r.entropy_rate_norm.to_string(),
        r.monotone_run.to_string(),
    ];
    row.extend(r.local_c.iter().map(f64::to_string));
    w.write_record(&row)?;
    w.flush()?;
    Ok(())
}

/// Metadata written next to a denoised signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenoiseSidecar {
    pub wavelet: Wavelet,
    pub noise_variance: f64,
    /// Only known when a clean reference was given.
    pub residual_energy_density: Option<f64>,
    #[serde(rename = "global_C_norm")]
    pub global_c_norm: f64,
    pub estimator: String,
}

fn status_text(s: &RowStatus) -> String {
    match s {
        RowStatus::Ok => "ok".into(),
        RowStatus::Failed(e) => format!("failed: {e}"),
    }
}

fn num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        x.to_string()
    }
}

/// Ranked selection table; `winner` is 1 on the winning row.
pub fn write_selection_csv<W: Write>(out: W, sel: &Selection) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["wavelet", "global_C_norm", "residual_energy_density", "log_likelihood", "winner", "status"])?;
    for (rank, row) in sel.rows.iter().enumerate() {
        let winner = rank == 0 && sel.winner == Some(row.wavelet);
        w.write_record([
            row.wavelet.name().to_string(),
            num(row.global_c_norm),
            row.residual_energy_density.map(num).unwrap_or_default(),
            num(row.log_likelihood),
            u8::from(winner).to_string(),
            status_text(&row.status),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r", "global_C_norm", "entropy_rate_norm", "monotone_run", "status"])?;
    for row in rows {
        w.write_record([
            row.r.to_string(),
            num(row.global_c_norm),
            num(row.entropy_rate_norm),
            row.monotone_run.to_string(),
            status_text(&row.status),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signal_round_trip_is_exact() {
        let xs = [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, f64::MIN_POSITIVE, -0.0];
        let mut buf = Vec::new();
        write_signal(&mut buf, &xs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), xs.len());
        let back = read_signal(&buf[..]).unwrap();
        assert_eq!(back.iter().map(|x| x.to_bits()).collect::<Vec<_>>(), xs.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
    }

    #[test]
    fn header_comments_and_columns() {
        let text = "# made by hand\nvalue,other\n1.5,9\n\n2.5,9\n";
        assert_eq!(read_signal(text.as_bytes()).unwrap(), vec![1.5, 2.5]);
        assert!(read_signal("1\nabc\n".as_bytes()).is_err());
        assert!(read_signal("1\nNaN\n".as_bytes()).is_err());
        assert!(read_signal("# nothing\n".as_bytes()).is_err());
    }

    #[test]
    fn report_csv_columns() {
        let report = ComplexityReport {
            levels: 2,
            states: 2,
            global_c: 1.5,
            global_c_norm: 0.5,
            local_c: vec![1.0, 0.5],
            entropy_rate: -3.0,
            entropy_rate_norm: -1.0,
            monotone_run: 2,
        };
        let mut buf = Vec::new();
        write_report_csv(&mut buf, Some(Wavelet::Db2), &report).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "wavelet,J,M,global_C,global_C_norm,entropy_rate_norm,monotone_run,local_C_0,local_C_1");
        assert_eq!(lines[1], "db2,2,2,1.5,0.5,-1,2,1,0.5");
    }
}
