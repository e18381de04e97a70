//! LP and MPS writers.

use std::fmt::Write as _;
use std::str::FromStr;

use super::IlpModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Lp,
    Mps,
}

impl FromStr for ExportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "lp" => Ok(ExportFormat::Lp),
            "mps" => Ok(ExportFormat::Mps),
            _ => Err(format!("unknown model format '{s}'")),
        }
    }
}

pub fn export_model(model: &IlpModel, format: ExportFormat) -> String {
    match format {
        ExportFormat::Lp => write_lp(model),
        ExportFormat::Mps => write_mps(model),
    }
}

// LP readers limit line length, so long rows are wrapped.
const LP_LINE: usize = 200;

fn push_terms<'a>(out: &mut String, head: &str, terms: impl Iterator<Item = String>, tail: &str) {
    let mut line = String::from(head);
    let mut first = true;
    for t in terms {
        let piece = if first { format!(" {t}") } else { format!(" + {t}") };
        first = false;
        if line.len() + piece.len() > LP_LINE {
            out.push_str(&line);
            out.push('\n');
            line = String::from("   ");
        }
        line.push_str(&piece);
    }
    if first {
        line.push_str(" 0");
    }
    out.push_str(&line);
    out.push_str(tail);
    out.push('\n');
}

fn write_lp(model: &IlpModel) -> String {
    let mut s = String::new();
    s.push_str("\\ offer allocation model\n");
    if !model.fixed.is_empty() {
        let _ = writeln!(s, "\\ constant from fixed offers: {}", model.fixed_cost);
    }
    s.push_str("minimize\n");
    push_terms(
        &mut s,
        " obj:",
        model
            .cost
            .iter()
            .zip(&model.var_name)
            .map(|(c, n)| format!("{c} {n}")),
        "",
    );
    s.push_str("subject to\n");
    let mut row_name = model.row_names.iter();
    for row in &model.assignment_rows {
        let head = format!(" {}:", row_name.next().expect("row name"));
        push_terms(&mut s, &head, row.vars.iter().map(|&v| model.var_name[v].clone()), " = 1");
    }
    for row in &model.capacity_rows {
        let head = format!(" {}:", row_name.next().expect("row name"));
        let tail = format!(" <= {}", row.rhs);
        push_terms(&mut s, &head, row.vars.iter().map(|&v| model.var_name[v].clone()), &tail);
    }
    s.push_str("binary\n");
    for n in &model.var_name {
        let _ = writeln!(s, " {n}");
    }
    s.push_str("end\n");
    s
}

/// Fixed-column MPS. Names longer than eight characters keep their column
/// start and push later fields right, which free-format readers accept.
fn write_mps(model: &IlpModel) -> String {
    let mut s = String::new();
    s.push_str("NAME          MOAP\n");
    s.push_str("ROWS\n");
    s.push_str(" N  OBJ\n");
    let n_assign = model.assignment_rows.len();
    for (i, name) in model.row_names.iter().enumerate() {
        let kind = if i < n_assign { 'E' } else { 'L' };
        let _ = writeln!(s, " {kind}  {name}");
    }
    let mut var_rows: Vec<Vec<usize>> = vec![Vec::new(); model.num_vars()];
    for (r, row) in model.assignment_rows.iter().enumerate() {
        for &v in &row.vars {
            var_rows[v].push(r);
        }
    }
    for (r, row) in model.capacity_rows.iter().enumerate() {
        for &v in &row.vars {
            var_rows[v].push(n_assign + r);
        }
    }
    s.push_str("COLUMNS\n");
    s.push_str("    MARKER                 'MARKER'                 'INTORG'\n");
    for (v, name) in model.var_name.iter().enumerate() {
        let _ = writeln!(s, "    {:<8}  {:<8}  {:>12}", name, "OBJ", model.cost[v]);
        for &r in &var_rows[v] {
            let _ = writeln!(s, "    {:<8}  {:<8}  {:>12}", name, model.row_names[r], 1);
        }
    }
    s.push_str("    MARKER                 'MARKER'                 'INTEND'\n");
    s.push_str("RHS\n");
    for (i, name) in model.row_names.iter().enumerate() {
        let rhs = if i < n_assign { 1 } else { model.capacity_rows[i - n_assign].rhs };
        let _ = writeln!(s, "    {:<8}  {:<8}  {:>12}", "RHS", name, rhs);
    }
    s.push_str("BOUNDS\n");
    for name in &model.var_name {
        let _ = writeln!(s, " BV BND       {name}");
    }
    s.push_str("ENDATA\n");
    s
}
