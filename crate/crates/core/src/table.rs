//! Plain-text CSV emission with a fixed numeric format.
//!
//! Every floating-point column is written with 6 significant digits in the
//! style of C's `%g`: fixed notation for decimal exponents in [-4, 6),
//! scientific otherwise, trailing zeros trimmed. Rows end in `\n`.

/// Formats `x` with 6 significant digits, `%g` style.
pub fn fmt_g6(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    // Round to 6 significant digits first; the exponent of the rounded
    // value decides the notation.
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" {
            "0".to_string()
        } else {
            t.to_string()
        }
    } else {
        s.to_string()
    }
}

/// Parses a field written by [`fmt_g6`].
pub fn parse_f64(field: &str) -> Option<f64> {
    field.trim().parse().ok()
}

/// Incremental CSV builder.
#[derive(Debug, Default)]
pub struct CsvWriter {
    buf: String,
}

impl CsvWriter {
    pub fn with_header(columns: &[&str]) -> Self {
        let mut w = Self::default();
        w.buf.push_str(&columns.join(","));
        w.buf.push('\n');
        w
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for f in fields {
            if !first {
                self.buf.push(',');
            }
            self.buf.push_str(f.as_ref());
            first = false;
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Splits CSV text into its header and data rows.
pub fn split_rows(text: &str) -> Option<(Vec<&str>, Vec<Vec<&str>>)> {
    let mut lines = text.lines();
    let header = lines.next()?.split(',').collect();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').collect())
        .collect();
    Some((header, rows))
}
