//! JSON-lines and CSV emission. Callers sort their inputs; nothing here reorders.

use std::io::{self, Write};

use serde::Serialize;

use super::sweep::SweepRecord;
use crate::bounds::BoundReport;

#[derive(Serialize)]
struct ReportLine<'a> {
    instance_id: &'a str,
    #[serde(flatten)]
    report: &'a BoundReport,
}

/// One JSON object per report, tagged with its instance.
pub fn write_reports_jsonl<'a, W: Write>(
    mut w: W,
    reports: impl IntoIterator<Item = (&'a str, &'a BoundReport)>,
) -> io::Result<()> {
    for (id, report) in reports {
        serde_json::to_writer(&mut w, &ReportLine { instance_id: id, report })?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// `instance_id,theorem_id,lhs,rhs,margin`, header included even without rows.
pub fn write_summary_csv<'a, W: Write>(
    w: W,
    reports: impl IntoIterator<Item = (&'a str, &'a BoundReport)>,
) -> io::Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(["instance_id", "theorem_id", "lhs", "rhs", "margin"])
        .map_err(io::Error::other)?;
    for (id, r) in reports {
        out.serialize((id, r.theorem_id.as_str(), r.lhs, r.rhs, r.margin()))
            .map_err(io::Error::other)?;
    }
    out.flush()
}

/// One row per sweep record with the headline quantities.
pub fn write_sweep_csv<W: Write>(w: W, records: &[SweepRecord]) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "epsilon",
        "measured_epsilon",
        "trial",
        "seed",
        "mu_re",
        "mu_im",
        "distance",
        "sin_ritz",
        "sin_refined",
        "ritz_residual",
        "sigma_hat_1",
        "failed_bounds",
    ])
    .map_err(io::Error::other)?;
    for r in records {
        let failed: Vec<&str> = r.bounds.failures().map(|b| b.theorem_id.as_str()).collect();
        out.write_record([
            r.epsilon.to_string(),
            r.measured_epsilon.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            r.mu.re.to_string(),
            r.mu.im.to_string(),
            r.distance.to_string(),
            r.sin_ritz.to_string(),
            r.sin_refined.to_string(),
            r.ritz_residual.to_string(),
            r.sigma_hat_1.to_string(),
            failed.join(";"),
        ])
        .map_err(io::Error::other)?;
    }
    out.flush()
}
