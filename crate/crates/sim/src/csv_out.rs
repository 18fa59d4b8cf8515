//! CSV export of sweep results.
//!
//! One header row, then one row per sweep value. Latencies are in
//! milliseconds with four decimals; `gain_pct` is the MEC reduction of the
//! mean E2E latency in percent. Failed points keep their row with empty
//! numeric fields and the error in `status`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use cv2x_mec::engine::{AggregateStats, Component, Summary};

use crate::error::SimError;
use crate::sweep::SweepResult;

/// Quantities written per row, each as a mean and a CI half-width column.
pub const COLUMNS: [Component; 7] = [
    Component::Ul,
    Component::Bh,
    Component::TnCn,
    Component::Exc,
    Component::Dl,
    Component::E2eCloud,
    Component::E2eMec,
];

pub fn header() -> Vec<String> {
    let mut h = vec!["parameter".to_string()];
    for c in COLUMNS {
        h.push(format!("{}_ms", c.name()));
        h.push(format!("{}_ci95_ms", c.name()));
    }
    h.extend(["gain_pct", "samples", "status"].map(String::from));
    h
}

fn ms(x: f64) -> String {
    format!("{:.4}", x * 1e3)
}

fn stats_fields(s: &AggregateStats) -> Vec<String> {
    let mut out = Vec::with_capacity(2 * COLUMNS.len() + 2);
    for c in COLUMNS {
        let Summary {
            mean,
            ci95_half_width,
            ..
        } = *s.get(c);
        out.push(ms(mean));
        out.push(ms(ci95_half_width));
    }
    out.push(format!("{:.4}", s.gain_percent()));
    out.push(s.ul.count.to_string());
    out
}

/// Writes `result` as CSV to any writer.
pub fn write_csv<W: Write>(result: &SweepResult, writer: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(header())?;
    for row in &result.rows {
        let mut rec = vec![row.value.to_string()];
        match &row.outcome {
            Ok(stats) => {
                rec.extend(stats_fields(stats));
                rec.push("ok".into());
            }
            Err(e) => {
                rec.extend(std::iter::repeat_n(String::new(), 2 * COLUMNS.len() + 2));
                rec.push(format!("error: {}", e.message));
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()
}

/// Writes `result` to `path`, replacing any existing file.
pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<(), SimError> {
    let file = File::create(path).map_err(|e| SimError::io(path, e))?;
    write_csv(result, BufWriter::new(file)).map_err(|e| SimError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{RowError, SweepParameter, SweepRow};
    use cv2x_mec::engine::aggregate;
    use cv2x_mec::latency::{LatencyBreakdown, LatencyComponents};

    fn stats() -> AggregateStats {
        let c = LatencyComponents {
            ul: 0.001,
            bh: 0.002,
            tn_cn: 0.045,
            exc_cloud: 0.004,
            exc_mec: 0.004,
            dl: 0.04,
        };
        aggregate(&[LatencyBreakdown::compose(0, 0, &c)]).unwrap()
    }

    fn render(result: &SweepResult) -> String {
        let mut buf = Vec::new();
        write_csv(result, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_result_is_header_only() {
        let text = render(&SweepResult {
            parameter: SweepParameter::VruCount,
            rows: vec![],
        });
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("parameter,ul_ms,ul_ci95_ms,bh_ms"));
        assert!(text.trim_end().ends_with("gain_pct,samples,status"));
    }

    #[test]
    fn one_row() {
        let text = render(&SweepResult {
            parameter: SweepParameter::VruCount,
            rows: vec![SweepRow {
                value: 50.0,
                outcome: Ok(stats()),
            }],
        });
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[1],
            "50,1.0000,0.0000,2.0000,0.0000,45.0000,0.0000,4.0000,0.0000,40.0000,0.0000,\
             139.0000,0.0000,45.0000,0.0000,67.6259,1,ok"
        );
    }

    #[test]
    fn failed_row_keeps_its_place() {
        let text = render(&SweepResult {
            parameter: SweepParameter::VehicleIntensity,
            rows: vec![SweepRow {
                value: 0.2,
                outcome: Err(RowError {
                    message: "infeasible, really".into(),
                    is_config: true,
                }),
            }],
        });
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let rec = r.records().next().unwrap().unwrap();
        assert_eq!(rec.len(), header().len());
        assert_eq!(&rec[0], "0.2");
        assert_eq!(&rec[1], "");
        assert_eq!(&rec[rec.len() - 1], "error: infeasible, really");
    }
}
