//! Per-template statistics rows and their table, JSON and CSV renderings.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::counting::p_poly;
use crate::enumerate::templates_of_cogenus;
use crate::error::{domain, Result};
use crate::graphs::{EdgeRecord, TauGraph, Template};
use crate::phi::{k_min, linear_form};

/// Version of every JSON document the crate emits.
pub const FORMAT_VERSION: u32 = 1;

/// Output format for tabular results.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => domain(format!("unknown format {s:?}")),
        }
    }
}

/// One template with every statistic, rationals and polynomials as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateRow {
    pub delta: u64,
    pub graph: String,
    pub edges: Vec<EdgeRecord>,
    pub l: u32,
    pub mu: String,
    pub eps0: u32,
    pub eps1: u32,
    pub lambda: Vec<u64>,
    pub lambda_bar: Vec<u64>,
    pub k_min: u64,
    pub p: String,
    pub phi: String,
    pub zeta0: String,
    pub zeta1: String,
    pub eta0: String,
    pub phi_shift: String,
}

impl TemplateRow {
    pub fn new(t: &Template) -> Result<Self> {
        let l = t.len();
        let f = linear_form(t)?;
        Ok(TemplateRow {
            delta: t.cogenus(),
            graph: t.to_string(),
            edges: t.records(),
            l,
            mu: BigInt::from(t.multiplicity()).to_string(),
            eps0: t.eps0(),
            eps1: t.eps1(),
            lambda: t.lambda_vec(l),
            lambda_bar: t.lambda_bar_vec(l),
            k_min: k_min(t),
            p: p_poly(t.tau(), t.counts(), l)?.to_string(),
            phi: f.to_string(),
            zeta0: f.zeta0().to_string(),
            zeta1: f.zeta1().to_string(),
            eta0: f.eta0().to_string(),
            phi_shift: f.along_shift().to_string(),
        })
    }

    /// Rebuilds the template from `edges` and recomputes the row.
    pub fn recompute(&self) -> Result<Self> {
        TemplateRow::new(&Template::new(TauGraph::from_records(&self.edges)?)?)
    }
}

/// Rows for every template of cogenus `delta`, in canonical order.
pub fn template_rows(delta: u64) -> Result<Vec<TemplateRow>> {
    templates_of_cogenus(delta).iter().map(TemplateRow::new).collect()
}

#[derive(Serialize, Deserialize)]
pub struct TemplatesDoc {
    pub format_version: u32,
    pub delta: u64,
    pub templates: Vec<TemplateRow>,
}

const HEADERS: [&str; 14] = [
    "Γ", "δ", "l", "μ", "ε₀", "ε₁", "λ", "λ̄", "k_min", "P(Γ,β)", "Φ(Γ,β)", "ζ⁰", "ζ¹", "η₀",
];

fn vec_str(v: &[u64]) -> String {
    let s: Vec<String> = v.iter().map(u64::to_string).collect();
    format!("({})", s.join(","))
}

fn cells(r: &TemplateRow) -> Vec<String> {
    vec![
        r.graph.clone(),
        r.delta.to_string(),
        r.l.to_string(),
        r.mu.clone(),
        r.eps0.to_string(),
        r.eps1.to_string(),
        vec_str(&r.lambda),
        vec_str(&r.lambda_bar),
        r.k_min.to_string(),
        r.p.clone(),
        r.phi.clone(),
        r.zeta0.clone(),
        r.zeta1.clone(),
        r.eta0.clone(),
        r.phi_shift.clone(),
    ]
}

/// Renders rows in the requested format; the JSON form carries `delta`.
pub fn render_rows(rows: &[TemplateRow], delta: u64, format: Format) -> Result<String> {
    let mut headers: Vec<&str> = HEADERS.to_vec();
    headers.push("Φ_v(k,l)");
    let body: Vec<Vec<String>> = rows.iter().map(cells).collect();
    Ok(match format {
        Format::Json => {
            let doc = TemplatesDoc { format_version: FORMAT_VERSION, delta, templates: rows.to_vec() };
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Csv => render_csv(&headers, &body),
        Format::Table => render_table(&headers, &body),
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render_csv(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    let line = |cells: Vec<String>| cells.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(",");
    out += &line(headers.iter().map(|s| s.to_string()).collect());
    out.push('\n');
    for r in rows {
        out += &line(r.clone());
        out.push('\n');
    }
    out
}

pub fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let width = |s: &str| s.chars().count();
    let mut w: Vec<usize> = headers.iter().map(|h| width(h)).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            w[i] = w[i].max(width(c));
        }
    }
    let fmt_line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&w)
            .map(|(c, &n)| format!("{c}{}", " ".repeat(n - width(c))))
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = fmt_line(headers.to_vec());
    out += &fmt_line(w.iter().map(|&n| "-".repeat(n)).collect::<Vec<_>>().iter().map(String::as_str).collect());
    for r in rows {
        out += &fmt_line(r.iter().map(String::as_str).collect());
    }
    out
}
