//! `.qls` presentation files, `.mat` matrix files and canonical output.

use qls_core::expr::{eval_nc, is_valid_name, parse_expr, parse_scalar};
use qls_core::{Error, FieldSpec, LinearMap, MultiIndex, Presentation, Result, Scalar, Subspace, Tensor, Vector};

fn shift_col(e: Error, line: usize, offset: usize) -> Error {
    match e {
        Error::Syntax { col, msg, .. } => Error::syntax(line, col + offset, msg),
        e => e,
    }
}

/// Strips a trailing `#` comment; returns the keyword, its rest and the rest's column.
fn split_line(raw: &str) -> Option<(&str, &str, usize)> {
    let body = raw.split('#').next().unwrap_or("");
    let trimmed = body.trim_start();
    if trimmed.trim().is_empty() {
        return None;
    }
    let lead = body.len() - trimmed.len();
    let kw_len = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
    let rest = &trimmed[kw_len..];
    let rest_trim = rest.trim_start();
    let col = lead + kw_len + (rest.len() - rest_trim.len()) + 1;
    Some((&trimmed[..kw_len], rest_trim.trim_end(), col))
}

fn names(rest: &str, line: usize, col: usize) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for word in rest.split_whitespace() {
        let at = rest[offset..].find(word).unwrap() + offset;
        offset = at + word.len();
        if !is_valid_name(word) {
            return Err(Error::syntax(line, col + at, format!("invalid name `{word}`")));
        }
        out.push(word.to_string());
    }
    Ok(out)
}

/// Reads a `.qls` file. Relations must be homogeneous of degree at least 2.
pub fn parse_presentation(text: &str, cap: usize) -> Result<Presentation> {
    let mut field = FieldSpec::rationals();
    let mut name = None;
    let mut gens: Option<Vec<String>> = None;
    let mut rels = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let Some((kw, rest, col)) = split_line(raw) else { continue };
        match kw {
            "field" => {
                if gens.is_some() || !rels.is_empty() {
                    return Err(Error::syntax(line, 1, "`field` must come before `gens` and `rel`"));
                }
                field = FieldSpec::new(&names(rest, line, col)?)?;
            }
            "space" => {
                let n = names(rest, line, col)?;
                if n.len() != 1 {
                    return Err(Error::syntax(line, col, "`space` takes one name"));
                }
                name = n.into_iter().next();
            }
            "gens" => {
                if gens.is_some() {
                    return Err(Error::syntax(line, 1, "generators declared twice"));
                }
                let g = names(rest, line, col)?;
                for (k, x) in g.iter().enumerate() {
                    if g[..k].contains(x) || field.index_of(x).is_some() {
                        return Err(Error::syntax(line, col, format!("name `{x}` is declared twice")));
                    }
                }
                gens = Some(g);
            }
            "rel" => {
                let g = gens.as_ref().ok_or_else(|| Error::syntax(line, 1, "`rel` before `gens`"))?;
                let expr = parse_expr(rest).map_err(|e| shift_col(e, line, col - 1))?;
                let poly = eval_nc(&expr, &field, g).map_err(|e| shift_col(e, line, col - 1))?;
                let mut degrees = poly.keys().map(Vec::len);
                let Some(d) = degrees.next() else { continue };
                if degrees.any(|e| e != d) {
                    return Err(Error::Inhomogeneous(rest.to_string()));
                }
                let coeffs: Vector = poly.into_iter().map(|(w, c)| (MultiIndex(w).encode(g.len()), c)).collect();
                rels.push((line, Tensor::from_vector(g.len(), d, coeffs)));
            }
            _ => return Err(Error::syntax(line, 1, format!("unknown keyword `{kw}`"))),
        }
    }
    let gens = gens.ok_or_else(|| Error::syntax(text.lines().count().max(1), 1, "missing `gens`"))?;
    for (line, r) in &rels {
        if r.degree() < 2 {
            return Err(Error::syntax(*line, 1, format!("relations of degree {} are not allowed", r.degree())));
        }
    }
    let tensors: Vec<Tensor> = rels.into_iter().map(|(_, t)| t).collect();
    let cap = cap.max(tensors.iter().map(Tensor::degree).max().unwrap_or(0));
    Presentation::new(name.unwrap_or_else(|| "A".into()), field, gens, &tensors, cap)
}

/// The `field` line of a matrix file, if any.
pub fn matrix_field(text: &str) -> Result<Option<FieldSpec>> {
    for (i, raw) in text.lines().enumerate() {
        if let Some((kw, rest, col)) = split_line(raw) {
            return Ok(if kw == "field" { Some(FieldSpec::new(&names(rest, i + 1, col)?)?) } else { None });
        }
    }
    Ok(None)
}

/// Reads a `.mat` file: an optional `field` line, `rows cols`, then one row per line.
pub fn parse_matrix(text: &str, field: &FieldSpec) -> Result<LinearMap> {
    let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        (!body.trim().is_empty()).then_some((i + 1, body))
    });
    let (mut line, mut header) = lines.next().ok_or_else(|| Error::syntax(1, 1, "empty matrix file"))?;
    if header.trim_start().starts_with("field") {
        (line, header) = lines.next().ok_or_else(|| Error::syntax(line, 1, "missing `rows cols` line"))?;
    }
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|w| w.parse().map_err(|_| Error::syntax(line, 1, format!("`{w}` is not a dimension"))))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(Error::syntax(line, 1, "expected `rows cols`"));
    };
    let mut entries = Vec::with_capacity(rows);
    for (line, body) in lines {
        if entries.len() == rows {
            return Err(Error::syntax(line, 1, "more rows than declared"));
        }
        let mut row = Vec::with_capacity(cols);
        let mut offset = 0;
        for cell in body.split_whitespace() {
            let at = body[offset..].find(cell).unwrap() + offset;
            offset = at + cell.len();
            row.push(parse_scalar(cell, field).map_err(|e| shift_col(e, line, at))?);
        }
        if row.len() != cols {
            return Err(Error::syntax(line, 1, format!("expected {cols} entries, found {}", row.len())));
        }
        entries.push(row);
    }
    if entries.len() != rows {
        return Err(Error::syntax(text.lines().count().max(1), 1, format!("expected {rows} rows, found {}", entries.len())));
    }
    if rows == 0 || cols == 0 {
        return Ok(LinearMap::zero(rows, cols));
    }
    LinearMap::from_rows(entries)
}

fn monomial(gens: &[String], code: u64, d: usize) -> String {
    if d == 0 {
        return "1".into();
    }
    MultiIndex::decode(code, gens.len(), d).0.iter().map(|&g| gens[g].as_str()).collect::<Vec<_>>().join("*")
}

/// One relation row, terms in increasing monomial order.
pub fn format_relation(field: &FieldSpec, gens: &[String], d: usize, v: &Vector) -> String {
    let mut out = String::new();
    for (k, (code, c)) in v.iter().enumerate() {
        let m = monomial(gens, *code, d);
        let neg = c.is_negative_simple();
        let a = if neg { -c.clone() } else { c.clone() };
        let term = if a.is_one() {
            m
        } else {
            let s = field.format(&a);
            let s = if a.is_simple() { s } else { format!("({s})") };
            if d == 0 { s } else { format!("{s}*{m}") }
        };
        match (k, neg) {
            (0, true) => out.push_str(&format!("-{term}")),
            (0, false) => out.push_str(&term),
            (_, true) => out.push_str(&format!(" - {term}")),
            (_, false) => out.push_str(&format!(" + {term}")),
        }
    }
    out
}

/// The minimal relations per degree up to the cap, as `(degree, text)` rows.
pub fn relation_rows(p: &Presentation) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for d in 1..=p.cap() {
        let gens: Subspace = p.minimal_generators(d)?;
        for row in gens.rows() {
            out.push((d, format_relation(p.field(), p.gens(), d, row)));
        }
    }
    Ok(out)
}

/// Parseable `.qls` text.
pub fn emit_presentation(p: &Presentation) -> Result<String> {
    let mut out = String::new();
    if !p.field().names().is_empty() {
        out.push_str(&format!("field {}\n", p.field().names().join(" ")));
    }
    out.push_str(&format!("space {}\n", file_name(p.name())));
    out.push_str(&format!("gens {}\n", p.gens().join(" ")));
    for (_, r) in relation_rows(p)? {
        out.push_str(&format!("rel {r}\n"));
    }
    Ok(out)
}

/// Names built from operators are not valid identifiers; they are kept readable but made parseable.
fn file_name(name: &str) -> String {
    if is_valid_name(name) {
        return name.to_string();
    }
    let cleaned: String = name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect();
    let cleaned = cleaned.trim_matches('_').to_string();
    if is_valid_name(&cleaned) {
        cleaned
    } else {
        format!("A_{cleaned}")
    }
}

/// Human-readable relation table.
pub fn emit_canonical(p: &Presentation) -> Result<String> {
    let mut out = format!("space {}\ngens {}\n", p.name(), p.gens().join(" "));
    let rows = relation_rows(p)?;
    if rows.is_empty() {
        out.push_str("(no relations)\n");
    }
    let mut last = None;
    for (d, r) in rows {
        if last != Some(d) {
            out.push_str(&format!("degree {d}:\n"));
            last = Some(d);
        }
        out.push_str(&format!("  {r}\n"));
    }
    Ok(out)
}

pub fn render_matrix(m: &LinearMap, field: &FieldSpec) -> String {
    m.render(field)
}

pub fn scalar_text(field: &FieldSpec, x: &Scalar) -> String {
    field.format(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PLANE: &str = "field q\nspace Aq\ngens x y\nrel x*y - q*y*x\n";

    #[test]
    fn plane_round_trip() {
        let p = parse_presentation(PLANE, 4).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.generator_relations(2).dim(), 1);
        assert_eq!(emit_presentation(&p).unwrap(), PLANE);
    }

    #[test]
    fn canonical_rows() {
        let p = parse_presentation(PLANE, 4).unwrap();
        assert_eq!(emit_canonical(&p).unwrap(), "space Aq\ngens x y\ndegree 2:\n  x*y - q*y*x\n");
        let free = parse_presentation("gens x y\n", 3).unwrap();
        assert!(emit_canonical(&free).unwrap().contains("(no relations)"));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_presentation("field q\ngens x y\nrel x*y - y\n", 4).unwrap_err();
        assert!(matches!(e, Error::Inhomogeneous(_)));
        let e = parse_presentation("gens x y\nrel x*y - w*x\n", 4).unwrap_err();
        assert!(matches!(e, Error::UnknownGenerator(_)));
        let e = parse_presentation("gens x y\nrel x*y -\n", 4).unwrap_err();
        assert_eq!(e, Error::syntax(2, 10, "unexpected end of input"));
        let e = parse_presentation("gens x y\nrelation x\n", 4).unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 2, col: 1, .. }));
    }

    #[test]
    fn matrices() {
        let f = FieldSpec::new(&["p"]).unwrap();
        let m = parse_matrix("2 2\np 0\n0 1/p\n", &f).unwrap();
        assert_eq!(m, LinearMap::diag(&[f.param("p").unwrap(), f.param("p").unwrap().inv()]));
        assert_eq!(matrix_field("field p\n1 1\np\n").unwrap(), Some(f.clone()));
        assert!(matches!(parse_matrix("2 2\n1 0\n", &f), Err(Error::Syntax { .. })));
        assert!(matches!(parse_matrix("1 1\n1 $\n", &f), Err(Error::Syntax { line: 2, .. })));
    }
}
