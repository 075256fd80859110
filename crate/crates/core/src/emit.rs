//! CSV and JSON renderings of the data series: `N,S` points, `x,y,N`
//! samples of `G`, and `k,max_ratio,min_ratio` rows.

use std::io::Write;

use serde::Serialize;

/// Writes `rows` as CSV with a header taken from the serialized field names.
pub fn write_csv<W: Write, T: Serialize>(out: W, rows: &[T]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}

/// JSON array of objects with the same field names as the CSV header.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::summatory::{g_sample, ratio_limit_table, s_stream, SummatoryPoint};

    #[test]
    fn summatory_csv() {
        let pts: Vec<SummatoryPoint> = s_stream(15).collect();
        let csv = to_csv(&pts);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "N,S");
        assert_eq!(lines.len(), 17);
        assert_eq!(*lines.last().unwrap(), "15,4");
    }

    #[test]
    fn headers() {
        let g = to_csv(&g_sample(2, 4).unwrap());
        assert!(g.starts_with("x,y,N\n"));
        let r = to_csv(&ratio_limit_table(2).unwrap());
        assert!(r.starts_with("k,max_ratio,min_ratio\n"));
    }

    #[test]
    fn json_field_names() {
        let pts: Vec<SummatoryPoint> = s_stream(2).collect();
        let v: serde_json::Value = serde_json::from_str(&to_json(&pts)).unwrap();
        assert_eq!(v[2]["N"], 2);
        assert_eq!(v[2]["S"], 1);
        let g: serde_json::Value = serde_json::from_str(&to_json(&g_sample(2, 4).unwrap())).unwrap();
        assert!(g[0].get("x").is_some() && g[0].get("y").is_some() && g[0].get("N").is_some());
    }
}
