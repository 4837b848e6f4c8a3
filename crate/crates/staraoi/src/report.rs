//! Plain-text table rendering shared by the task and bench reports.

use crate::classic::GeneralizedRelation;
use crate::relation::Value;

/// Renders a padded text table with a header rule.
pub fn render_table(headers: &[String], rows: &[Vec<String>]) -> String {
    let cols = headers.len();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let push_row = |cells: &[String], out: &mut String| {
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                out.push_str(" | ");
            }
            out.push_str(cell);
            let pad = widths[i] - cell.chars().count();
            if i + 1 < cols {
                out.extend(std::iter::repeat_n(' ', pad));
            }
        }
        out.push('\n');
    };
    push_row(headers, &mut out);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&rule.join("-+-"));
    out.push('\n');
    for row in rows {
        push_row(row, &mut out);
    }
    out
}

/// A generalized relation as a display table: level-name headers plus votes.
pub fn generalized_table(g: &GeneralizedRelation) -> String {
    let headers = g.display_headers();
    let rows: Vec<Vec<String>> = g
        .relation()
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut cells: Vec<String> = row.iter().map(Value::to_string).collect();
            cells.push(g.relation().vote(i).to_string());
            cells
        })
        .collect();
    render_table(&headers, &rows)
}

/// The same relation as delimited records (for `--format records`).
pub fn generalized_records(g: &GeneralizedRelation, delimiter: u8) -> String {
    let mut wtr = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let headers = g.display_headers();
    wtr.write_record(&headers).expect("writing to memory");
    for (i, row) in g.relation().rows().iter().enumerate() {
        let mut cells: Vec<String> = row
            .iter()
            .map(|v| match v {
                Value::Set(s) => {
                    let labels: Vec<&str> = s.iter().map(|x| x.as_str()).collect();
                    format!("{{{}}}", labels.join(";"))
                }
                other => other.to_string(),
            })
            .collect();
        cells.push(g.relation().vote(i).to_string());
        wtr.write_record(&cells).expect("writing to memory");
    }
    String::from_utf8(wtr.into_inner().expect("writing to memory")).expect("utf-8")
}
