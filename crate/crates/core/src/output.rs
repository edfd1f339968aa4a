//! CSV and JSON emitters. Floats in CSV carry 17 significant digits in
//! scientific notation; integers and labels are written verbatim.

use std::io::Write;

use serde::Serialize;

use crate::angmom::AngularMomentumReport;
use crate::angular::DegeneracyRow;
use crate::energy::BetaReport;
use crate::error::Result;
use crate::radial::DeviationRow;

/// `x` with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(w)
}

pub fn write_degeneracy_csv<W: Write>(rows: &[DegeneracyRow], w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["n", "sum", "error"])?;
    for r in rows {
        out.write_record([r.n.to_string(), fmt_f64(r.sum), fmt_f64(r.error)])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_deviation_csv<W: Write>(rows: &[DeviationRow], w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["n", "kR", "closed", "asymptotic", "rel_dev"])?;
    for r in rows {
        out.write_record([
            r.n.to_string(),
            fmt_f64(r.kr),
            fmt_f64(r.closed),
            fmt_f64(r.asymptotic),
            fmt_f64(r.rel_dev),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_beta_csv<W: Write>(report: &BetaReport, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["n", "omega", "k0", "energy", "beta_hat", "radial_mode"])?;
    for ((k0, e), b) in report
        .k0_values
        .iter()
        .zip(&report.energies)
        .zip(&report.beta_hat)
    {
        out.write_record([
            report.n.to_string(),
            fmt_f64(report.omega),
            fmt_f64(*k0),
            fmt_f64(*e),
            fmt_f64(*b),
            report.radial_mode.as_str().to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_spin_csv<W: Write>(report: &AngularMomentumReport, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["t", "Jx", "Jy", "Jz", "|J|"])?;
    for s in &report.samples {
        out.write_record([
            fmt_f64(s.t),
            fmt_f64(s.j.x),
            fmt_f64(s.j.y),
            fmt_f64(s.j.z),
            fmt_f64(s.magnitude),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize, W: Write>(value: &T, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    Ok(())
}
