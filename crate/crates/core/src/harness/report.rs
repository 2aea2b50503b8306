use std::io::{self, Write};

use super::experiment::ReportRow;

/// Header row, then one record per row; absent values are empty fields.
pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(COLUMNS)?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}

/// One JSON object per line; absent values are `null`.
pub fn write_jsonl<W: Write>(rows: &[ReportRow], mut out: W) -> io::Result<()> {
    for row in rows {
        serde_json::to_writer(&mut out, row)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn to_csv_string(rows: &[ReportRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

pub fn read_csv(text: &str) -> io::Result<Vec<ReportRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(io::Error::from)).collect()
}

pub const COLUMNS: [&str; 22] = [
    "row",
    "param",
    "value",
    "seed",
    "d",
    "m",
    "n",
    "incidences",
    "rs_oracle",
    "rs_extracted",
    "r",
    "s",
    "branch",
    "thm4d",
    "thm5d",
    "as_lower",
    "as_upper",
    "et",
    "ratio_extracted_oracle",
    "ratio_rs_bound",
    "wall_ms",
    "error",
];
