//! CSV emission for sweep rows.
//!
//! Floats are written with 17 significant digits in scientific notation,
//! which round-trips every `f64` exactly. Absent values are empty fields.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use irs_hetnet::Model;

use crate::error::{Result, SimError};
use crate::sweep::{SweepRow, SweepVariable};

pub const HEADER: &str =
    "model,carrier_hz,x_variable,x_value,p_rx_micro_w,p_rx_macro_w,assoc_prob,mean_assoc,capacity";

fn push_float(out: &mut String, v: f64) {
    write!(out, "{v:.16e}").expect("writing to a String cannot fail");
}

/// Renders the header and rows, each line newline-terminated.
pub fn render(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 + rows.len() * 200);
    out.push_str(HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(r.model.as_str());
        out.push(',');
        push_float(&mut out, r.carrier_hz);
        out.push(',');
        out.push_str(r.x_variable.as_str());
        for v in [
            Some(r.x_value),
            Some(r.p_rx_micro_w),
            Some(r.p_rx_macro_w),
            Some(r.assoc_prob),
            r.mean_assoc,
            r.capacity,
        ] {
            out.push(',');
            if let Some(v) = v {
                push_float(&mut out, v);
            }
        }
        out.push('\n');
    }
    out
}

pub fn write_rows<W: Write>(rows: &[SweepRow], mut w: W) -> std::io::Result<()> {
    w.write_all(render(rows).as_bytes())?;
    w.flush()
}

pub fn write_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    let io_err = |source| SimError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io_err)?;
    write_rows(rows, std::io::BufWriter::new(file)).map_err(io_err)
}

/// Parses text produced by [`render`].
pub fn parse(text: &str) -> std::result::Result<Vec<SweepRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(HEADER) => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let line_no = i + 2;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 9 {
                return Err(format!(
                    "line {line_no}: expected 9 fields, got {}",
                    fields.len()
                ));
            }
            let num = |s: &str| -> std::result::Result<f64, String> {
                s.parse::<f64>().map_err(|e| format!("line {line_no}: {e}"))
            };
            let opt = |s: &str| {
                if s.is_empty() {
                    Ok(None)
                } else {
                    num(s).map(Some)
                }
            };
            Ok(SweepRow {
                model: fields[0]
                    .parse::<Model>()
                    .map_err(|e| format!("line {line_no}: {e}"))?,
                carrier_hz: num(fields[1])?,
                x_variable: SweepVariable::parse(fields[2])
                    .ok_or_else(|| format!("line {line_no}: bad x_variable"))?,
                x_value: num(fields[3])?,
                p_rx_micro_w: num(fields[4])?,
                p_rx_macro_w: num(fields[5])?,
                assoc_prob: num(fields[6])?,
                mean_assoc: opt(fields[7])?,
                capacity: opt(fields[8])?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(x: f64, cap: Option<f64>) -> SweepRow {
        SweepRow {
            model: Model::Irs,
            carrier_hz: 30e9,
            x_variable: SweepVariable::DeviceDensity,
            x_value: x,
            p_rx_micro_w: 1.234e-9,
            p_rx_macro_w: 5.0e-12,
            assoc_prob: 0.75,
            mean_assoc: cap.map(|_| 0.5),
            capacity: cap,
        }
    }

    #[test]
    fn header_only_for_no_rows() {
        assert_eq!(render(&[]), format!("{HEADER}\n"));
    }

    #[test]
    fn line_count_and_blanks() {
        let rows: Vec<SweepRow> = (0..40).map(|i| row(f64::from(i), None)).collect();
        let text = render(&rows);
        assert_eq!(text.lines().count(), 41);
        assert!(text.ends_with('\n'));
        let second = text.lines().nth(1).unwrap();
        assert!(second.ends_with(",,"), "{second}");
        assert!(
            second.starts_with("irs,3.0000000000000000e10,device_density,0.0000000000000000e0,")
        );
    }

    #[test]
    fn written_file_matches_render() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.csv");
        let rows = vec![row(1.0, Some(2.0))];
        write_csv(&rows, &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), render(&rows));
        let err = write_csv(&rows, &dir.path().join("missing/rows.csv")).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(
            x in proptest::num::f64::POSITIVE | proptest::num::f64::ZERO,
            p in proptest::num::f64::NORMAL,
            cap in proptest::option::of(1.0..1e4f64),
        ) {
            let mut r = row(x, cap);
            r.p_rx_micro_w = p.abs();
            let back = parse(&render(&[r])).unwrap();
            prop_assert_eq!(back.len(), 1);
            prop_assert_eq!(back[0].x_value.to_bits(), r.x_value.to_bits());
            prop_assert_eq!(back[0].p_rx_micro_w.to_bits(), r.p_rx_micro_w.to_bits());
            prop_assert_eq!(back[0], r);
        }
    }
}
