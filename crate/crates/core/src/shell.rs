//! Serialization of representations and equation systems: JSON documents
//! (the machine contract) and a LaTeX rendering of equation systems that
//! mirrors the printed block layout for human diffing.

use crate::equations::LinearPDESystem;
use crate::representations::{BasicDirection, RegularRep};
use crate::units::UnitMatrix;
use serde_json::{json, Value};

/// Rename the imaginary unit in a token for the alternate basic directions
/// (i -> j or k); all other tokens pass through.
pub fn rename_unit(token: &str, basic: BasicDirection) -> String {
    let c = basic.unit_char();
    if c == 'i' {
        return token.to_string();
    }
    token.replace('i', &c.to_string())
}

fn matrix_json(m: &UnitMatrix, basic: BasicDirection) -> Value {
    let entries: Vec<Vec<String>> = (0..m.dim)
        .map(|r| {
            (0..m.dim)
                .map(|c| rename_unit(&m.cell_token(r, c), basic))
                .collect()
        })
        .collect();
    json!({
        "prefactor": rename_unit(&m.prefactor_token(), basic),
        "entries": entries,
    })
}

/// JSON document for a representation.
pub fn rep_json(rep: &RegularRep) -> Value {
    let matrices: Vec<Value> = rep
        .matrix_labels
        .iter()
        .zip(&rep.matrices)
        .map(|(label, m)| {
            let mut v = matrix_json(m, rep.basic);
            v["label"] = json!(label);
            v
        })
        .collect();
    json!({
        "algebra": rep.algebra_id,
        "kind": rep.kind.name(),
        "form": rep.form.name(),
        "unit_algebra": rep.system().name(),
        "labels": rep.axis_labels,
        "matrices": matrices,
    })
}

/// JSON document for an equation system.
pub fn system_json(sys: &LinearPDESystem, basic: BasicDirection) -> Value {
    let mut deriv = serde_json::Map::new();
    for (m, a) in sys.deriv.iter().enumerate() {
        deriv.insert((m + 1).to_string(), matrix_json(a, basic));
    }
    json!({
        "case": sys.case_name,
        "form": sys.form.name(),
        "unit_algebra": sys.system().name(),
        "labels": sys.labels,
        "generation": sys.generation,
        "mass": sys.params.mass.to_string(),
        "mass_prefactor": "m*c/(2*hbar)",
        "deriv_matrices": Value::Object(deriv),
        "mass_matrix": matrix_json(&sys.mass, basic),
    })
}

/// Golden-format dump with the imaginary-unit rename applied to tokens only.
pub fn golden_dump_renamed(rep: &RegularRep, basic: BasicDirection) -> String {
    let golden = crate::golden::dump_rep(rep);
    if basic == BasicDirection::E21 {
        return golden.dump();
    }
    let mut out = String::new();
    out.push_str(&format!("algebra {}\n", golden.algebra));
    out.push_str(&format!("kind {}\n", golden.kind.name()));
    out.push_str(&format!("form {}\n", golden.form.name()));
    out.push_str(&format!("order {}\n", golden.order.join(" ")));
    for gm in &golden.matrices {
        out.push_str(&format!(
            "matrix {} prefactor {}\n",
            gm.label,
            rename_unit(&gm.matrix.prefactor_token(), basic)
        ));
        for r in 0..gm.matrix.dim {
            let row: Vec<String> = (0..gm.matrix.dim)
                .map(|c| rename_unit(&gm.matrix.cell_token(r, c), basic))
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

fn latex_token(tok: &str) -> String {
    if tok == "." {
        return String::new();
    }
    let styled = tok
        .replace("s1", "\\sigma^1")
        .replace("s2", "\\sigma^2")
        .replace("s3", "\\sigma^3")
        .replace('*', "\\,");
    let styled = if let Some(rest) = styled.strip_prefix('+') {
        rest.to_string()
    } else {
        styled
    };
    styled
}

fn latex_matrix(m: &UnitMatrix, basic: BasicDirection) -> String {
    let mut out = String::from("\\begin{pmatrix}\n");
    let folded = m.fold_prefactor();
    for r in 0..m.dim {
        let row: Vec<String> = (0..m.dim)
            .map(|c| latex_token(&rename_unit(&folded.cell_token(r, c), basic)))
            .collect();
        out.push_str(&row.join(" & "));
        out.push_str(" \\\\\n");
    }
    out.push_str("\\end{pmatrix}");
    out
}

fn latex_label(label: &str) -> String {
    if label.len() > 1 || label.contains(['+', '-']) {
        format!("\\Psi^{{{label}}}")
    } else {
        format!("\\Psi^{label}")
    }
}

/// LaTeX rendering of `A^m d_m Psi = (mc/2hbar) W Psi` in the block layout
/// the derivative-matrix displays use.
pub fn system_latex(sys: &LinearPDESystem, basic: BasicDirection) -> String {
    let mut out = String::from("\\begin{equation}\n\\left(\n");
    for (m, a) in sys.deriv.iter().enumerate() {
        if m > 0 {
            out.push_str("+\n");
        }
        out.push_str(&latex_matrix(a, basic));
        out.push_str(&format!("\\,\\partial_{}\n", m + 1));
    }
    out.push_str("\\right)\n\\begin{pmatrix}\n");
    for label in &sys.labels {
        out.push_str(&latex_label(label));
        out.push_str(" \\\\\n");
    }
    out.push_str("\\end{pmatrix}\n=\n\\frac{m c}{2\\hbar}\\,\n");
    out.push_str(&latex_matrix(&sys.mass, basic));
    out.push_str("\n\\begin{pmatrix}\n");
    for label in &sys.labels {
        out.push_str(&latex_label(label));
        out.push_str(" \\\\\n");
    }
    out.push_str("\\end{pmatrix}\n\\end{equation}\n");
    out
}
