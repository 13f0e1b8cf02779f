//! Deterministic output: fixed 17-significant-digit float formatting,
//! versioned CSV, mirrored JSON, and an order-preserving parallel map.

/// Fixed-width scientific form with 17 significant digits; identical inputs
/// give byte-identical text.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A table cell.
pub enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Text(s) => format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"")),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

pub struct Table {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
    /// Extra `key=value` pairs appended as CSV comments / JSON fields.
    pub trailers: Vec<(String, String)>,
}

impl Table {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            trailers: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("# schema=1\n");
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for (k, v) in &self.trailers {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("{\"schema\":1,\"rows\":[");
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('{');
            for (j, (name, cell)) in self.columns.iter().zip(row).enumerate() {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&format!("\"{name}\":{}", cell.json()));
            }
            out.push('}');
        }
        out.push(']');
        for (k, v) in &self.trailers {
            out.push_str(&format!(",\"{k}\":{v}"));
        }
        out.push_str("}\n");
        out
    }
}

/// Maps `f` over `0..n` with up to `jobs` worker threads, preserving index
/// order in the output.
pub fn parallel_map<T, F>(n: usize, jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    if jobs <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let mut out: Vec<Option<T>> = (0..n).map(|_| None).collect();
    let chunk = n.div_ceil(jobs);
    std::thread::scope(|scope| {
        for (t, slice) in out.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || {
                for (i, slot) in slice.iter_mut().enumerate() {
                    *slot = Some(f(t * chunk + i));
                }
            });
        }
    });
    out.into_iter().map(|o| o.expect("all slots filled")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_fixed_width() {
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(-0.909297426825682), "-9.0929742682568204e-1");
    }

    #[test]
    fn parallel_map_preserves_order() {
        let serial = parallel_map(37, 1, |i| i * i);
        let parallel = parallel_map(37, 8, |i| i * i);
        assert_eq!(serial, parallel);
    }

    #[test]
    fn json_escapes_text() {
        let mut t = Table::new(&["name", "x"]);
        t.rows.push(vec![Cell::Text("a\"b".into()), Cell::Num(2.0)]);
        assert!(t.to_json().contains("\"a\\\"b\""));
    }
}
