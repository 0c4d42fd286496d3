//! CSV rendering of sweep tables.

use qexp::{partition_value, QParam, Result, Spectrum, SweepTable};

use crate::format::fmt17;

/// `(a, f(a))` on an inclusive uniform grid over `[a_min, a_max]`.
pub fn partition_table(
    spectrum: &Spectrum,
    q: QParam,
    a_min: f64,
    a_max: f64,
    n: usize,
) -> Result<SweepTable> {
    if n < 2 || !(a_min < a_max && a_min.is_finite() && a_max.is_finite()) {
        return Err(qexp::Error::InvalidArgument(format!(
            "need n >= 2 and a finite range a_min < a_max, got n={n}, [{a_min}, {a_max}]"
        )));
    }
    let step = (a_max - a_min) / (n - 1) as f64;
    let rows = (0..n)
        .map(|i| {
            let a = if i == n - 1 { a_max } else { a_min + step * i as f64 };
            Ok(vec![a, partition_value(a, spectrum, q)?])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        headers: vec!["a".into(), "f".into()],
        rows,
    })
}

/// Header row plus one record per table row, LF line endings, trailing newline.
pub fn write_csv(table: &SweepTable) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(&table.headers).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row.iter().map(|&x| fmt17(x))).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 output")
}

pub fn read_csv(text: &str) -> std::result::Result<SweepTable, String> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(str::to_string)
        .collect();
    let rows = r
        .records()
        .map(|rec| {
            let rec = rec.map_err(|e| e.to_string())?;
            rec.iter()
                .map(|f| f.parse::<f64>().map_err(|e| format!("{f:?}: {e}")))
                .collect()
        })
        .collect::<std::result::Result<Vec<Vec<f64>>, String>>()?;
    Ok(SweepTable { headers, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qexp::two_state_sweep;

    #[test]
    fn csv_round_trip_is_exact() {
        let qs: Vec<QParam> = [0.2, 1.0, 2.5].iter().map(|&v| QParam::new(v).unwrap()).collect();
        let t = two_state_sweep(&qs, 51).unwrap();
        let text = write_csv(&t);
        assert!(text.starts_with("p1,I_q=0.2,I_q=1,I_q=2.5\n"));
        assert!(text.ends_with('\n') && !text.contains('\r'));
        assert_eq!(read_csv(&text).unwrap(), t);
    }

    #[test]
    fn partition_grid() {
        let s = Spectrum::new(vec![0.0, 1.0]).unwrap();
        let q = QParam::new(0.5).unwrap();
        let t = partition_table(&s, q, -6.0, 1.9, 100).unwrap();
        assert_eq!(t.rows.len(), 100);
        assert_eq!(t.rows[0][0], -6.0);
        assert_eq!(t.rows[99][0], 1.9);
        let f = t.column(1);
        assert!(f.windows(2).all(|w| w[0] < w[1]));
        // past the endpoint a = 2 the bases go negative
        assert!(partition_table(&s, q, -6.0, 2.9, 100).is_err());
    }
}
