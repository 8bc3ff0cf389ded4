use std::fs::File;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};

/// Rectangular numeric table with a fixed header, written as CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self {
            header: header.iter().map(|s| s.as_ref().to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> anyhow::Result<()> {
        if row.len() != self.header.len() {
            bail!(
                "row has {} columns, header has {}",
                row.len(),
                self.header.len()
            );
        }
        if let Some(x) = row.iter().find(|x| !x.is_finite()) {
            bail!("non-finite value {x} in row {}", self.rows.len());
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn write_to<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&x| format_float(x)))?;
        }
        w.flush()?;
        Ok(())
    }

    #[cfg(test)]
    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn write_file(&self, path: &Path) -> anyhow::Result<()> {
        let file =
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        self.write_to(file)
            .with_context(|| format!("cannot write {}", path.display()))
    }
}

/// C-style `%.9g`: nine significant digits, trailing zeros dropped.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        trim_zeros(format!("{:.*}", (8 - exp) as usize, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_owned()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printf_g_formatting() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(12.0), "12");
        assert_eq!(format_float(0.25), "0.25");
        assert_eq!(format_float(0.07224655270), "0.0722465527");
        assert_eq!(format_float(std::f64::consts::PI), "3.14159265");
        assert_eq!(format_float(1e-7), "1e-07");
        assert_eq!(format_float(-2.5e-12), "-2.5e-12");
        assert_eq!(format_float(123456789.0), "123456789");
        assert_eq!(format_float(1234567890.0), "1.23456789e+09");
        assert_eq!(format_float(0.999999999999), "1");
        assert_eq!(format_float(0.0001), "0.0001");
    }

    #[test]
    fn table_rejects_ragged_and_non_finite_rows() {
        let mut t = CsvTable::new(&["a", "b"]);
        assert!(t.push(vec![1.0]).is_err());
        assert!(t.push(vec![1.0, f64::NAN]).is_err());
        t.push(vec![1.0, 0.5]).unwrap();
        assert_eq!(t.to_csv_string(), "a,b\n1,0.5\n");
    }
}
