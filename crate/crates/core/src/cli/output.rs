use std::fmt::Write;

/// 17 significant digits, enough to round-trip an `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Accumulates comma-separated rows with LF line endings.
#[derive(Debug, Default)]
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut csv = Csv::default();
        csv.row_str(header.iter().map(|s| s.to_string()));
        csv
    }

    pub fn row_str(&mut self, cells: impl IntoIterator<Item = String>) {
        let mut first = true;
        for cell in cells {
            if !first {
                self.buf.push(',');
            }
            first = false;
            self.buf.push_str(&cell);
        }
        self.buf.push('\n');
    }

    pub fn row(&mut self, values: &[f64]) {
        self.row_str(values.iter().map(|&v| num(v)));
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub fn json(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    let _ = writeln!(s);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2.0_f64.sqrt(), 1e-300, -123456.789, 0.36] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn rows_end_with_lf() {
        let mut c = Csv::new(&["a", "b"]);
        c.row(&[1.0, 2.0]);
        let s = c.finish();
        assert_eq!(s.lines().count(), 2);
        assert!(s.ends_with('\n') && !s.contains('\r'));
    }
}
