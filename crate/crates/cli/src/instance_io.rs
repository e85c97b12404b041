//! Plain-text instance and allocation files.
//!
//! ```text
//! # name: lb-1
//! 2 2
//! 0.568 0.427
//! 0.432 0.573
//! ```
//!
//! The first non-comment line is `n T`; the next `T` lines hold `n`
//! decimals each. Lines starting with `#` are comments, and `# key: value`
//! comments before the header are kept as metadata.

use fairdiv::model::{validate_instance, Allocation, Instance};

use crate::CliError;

/// A parsed instance together with its metadata comments.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceDocument {
    pub instance: Instance,
    pub name: Option<String>,
    pub source: Option<String>,
}

fn syntax(line: usize, message: impl Into<String>) -> CliError {
    CliError::Syntax {
        line,
        message: message.into(),
    }
}

struct Matrix {
    rows: Vec<Vec<f64>>,
    metadata: Vec<(String, String)>,
}

fn parse_matrix(document: &str) -> Result<Matrix, CliError> {
    let mut metadata = Vec::new();
    let mut lines = document
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = loop {
        match lines.next() {
            None => return Err(syntax(1, "missing `n T` header")),
            Some((_, l)) if l.starts_with('#') => {
                if let Some((key, value)) = l[1..].split_once(':') {
                    metadata.push((key.trim().to_string(), value.trim().to_string()));
                }
            }
            Some(found) => break found,
        }
    };
    let dims: Vec<&str> = header.split_whitespace().collect();
    let [n, t] = dims[..] else {
        return Err(syntax(
            header_line,
            format!("expected `n T`, found {header:?}"),
        ));
    };
    let parse_dim = |field: &str, what: &str| {
        field.parse::<usize>().map_err(|_| {
            syntax(
                header_line,
                format!("{what} must be a nonnegative integer, found {field:?}"),
            )
        })
    };
    let (n, t) = (parse_dim(n, "n")?, parse_dim(t, "T")?);

    let mut rows = Vec::with_capacity(t);
    let mut last_line = header_line;
    for (line, text) in lines.filter(|(_, l)| !l.starts_with('#')) {
        last_line = line;
        if rows.len() == t {
            return Err(syntax(line, format!("more than {t} value rows")));
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != n {
            return Err(syntax(
                line,
                format!("expected {n} values, found {}", fields.len()),
            ));
        }
        let row = fields
            .iter()
            .enumerate()
            .map(|(col, f)| {
                f.parse::<f64>()
                    .map_err(|_| syntax(line, format!("field {}: {f:?} is not a number", col + 1)))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    if rows.len() != t {
        return Err(syntax(
            last_line,
            format!("expected {t} value rows, found {}", rows.len()),
        ));
    }
    Ok(Matrix { rows, metadata })
}

/// Parses and validates an instance; normalization is not required.
pub fn parse_instance(document: &str) -> Result<Instance, CliError> {
    parse_instance_document(document).map(|d| d.instance)
}

pub fn parse_instance_document(document: &str) -> Result<InstanceDocument, CliError> {
    let m = parse_matrix(document)?;
    let instance = validate_instance(&m.rows, false)?;
    let lookup = |key: &str| {
        m.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
    };
    Ok(InstanceDocument {
        instance,
        name: lookup("name"),
        source: lookup("source"),
    })
}

/// Allocation files share the instance layout, with fractions as values.
pub fn parse_allocation(document: &str) -> Result<Allocation, CliError> {
    let m = parse_matrix(document)?;
    Ok(Allocation::from_rows(&m.rows)?)
}

fn write_rows<'a>(out: &mut String, agents: usize, rows: impl ExactSizeIterator<Item = &'a [f64]>) {
    out.push_str(&format!("{} {}\n", agents, rows.len()));
    for row in rows {
        let fields: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
}

/// Writes values with Rust's shortest round-trip formatting, so parsing the
/// result gives back the same bits.
pub fn serialize_instance(instance: &Instance, name: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(name) = name {
        out.push_str(&format!("# name: {name}\n"));
    }
    write_rows(
        &mut out,
        instance.agents(),
        instance.values().rows().collect::<Vec<_>>().into_iter(),
    );
    out
}

pub fn serialize_allocation(allocation: &Allocation) -> String {
    let mut out = String::new();
    write_rows(
        &mut out,
        allocation.agents(),
        allocation
            .fractions()
            .rows()
            .collect::<Vec<_>>()
            .into_iter(),
    );
    out
}
