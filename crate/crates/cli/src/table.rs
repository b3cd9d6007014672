//! CSV tables with `#` comment headers.

pub struct Table {
    comments: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    /// `columns` pairs each column name with a short description, which goes
    /// into the comment header.
    pub fn new(command: &str, seed: u64, columns: &[(&str, &str)]) -> Table {
        let mut comments = vec![format!("heilbronn {command}"), format!("seed={seed}")];
        comments.extend(columns.iter().map(|(c, d)| format!("{c}: {d}")));
        Table {
            comments,
            header: columns.iter().map(|(c, _)| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells"));
        out
    }
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn int(x: usize) -> String {
    x.to_string()
}
