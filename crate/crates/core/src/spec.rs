//! Short textual names for graphs and codes.
//!
//! Graphs: `complete:<ell>,<m>` or a graph file path.
//! Codes: `hamming:<r>`, `even:<n>`, `rep:<n>`, `full:<n>`, `dsum:<code>,<code>`
//! or a code file path. A list of codes is comma-separated; `dsum` takes the
//! next two entries as its operands, so `dsum:hamming:3,hamming:3` is one code.

use std::path::Path;

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::graphs::{EdgeOrder, PartiteGraph};

const CODE_KEYWORDS: [&str; 5] = ["hamming", "even", "rep", "full", "dsum"];

fn number(tok: &str, what: &str) -> Result<usize> {
    tok.trim()
        .parse::<usize>()
        .ok()
        .filter(|&v| v > 0)
        .ok_or_else(|| Error::Usage(format!("'{tok}' is not a positive integer ({what})")))
}

pub fn parse_graph(spec: &str, order: EdgeOrder) -> Result<PartiteGraph> {
    if let Some(args) = spec.strip_prefix("complete:") {
        let (l, m) = args
            .split_once(',')
            .ok_or_else(|| Error::Usage(format!("expected complete:<ell>,<m>, got '{spec}'")))?;
        let ell = number(l, "ell")?;
        if ell < 2 {
            return Err(Error::Usage("complete:<ell>,<m> needs ell >= 2".into()));
        }
        return PartiteGraph::complete_multipartite(ell, number(m, "m")?);
    }
    let text = std::fs::read_to_string(Path::new(spec)).map_err(|e| {
        Error::Usage(format!("'{spec}' is neither a builtin graph nor a readable file: {e}"))
    })?;
    PartiteGraph::parse_text(&text, order)
}

/// Parses one or more comma-separated code specs.
pub fn parse_code_list(spec: &str) -> Result<Vec<LinearCode>> {
    let tokens: Vec<&str> = spec.split(',').collect();
    let mut at = 0;
    let mut out = Vec::new();
    while at < tokens.len() {
        out.push(parse_code_at(&tokens, &mut at)?);
    }
    Ok(out)
}

/// Parses exactly one code spec.
pub fn parse_code(spec: &str) -> Result<LinearCode> {
    let mut codes = parse_code_list(spec)?;
    if codes.len() != 1 {
        return Err(Error::Usage(format!(
            "'{spec}' describes {} codes, expected one",
            codes.len()
        )));
    }
    Ok(codes.remove(0))
}

fn parse_code_at(tokens: &[&str], at: &mut usize) -> Result<LinearCode> {
    let Some(&tok) = tokens.get(*at) else {
        return Err(Error::Usage("code spec ended early".into()));
    };
    let tok = tok.trim();
    if tok.is_empty() {
        return Err(Error::Usage("empty code spec".into()));
    }
    let (head, rest) = tok.split_once(':').unwrap_or((tok, ""));
    if !CODE_KEYWORDS.contains(&head) {
        *at += 1;
        let text = std::fs::read_to_string(Path::new(tok)).map_err(|e| {
            Error::Usage(format!("'{tok}' is neither a builtin code nor a readable file: {e}"))
        })?;
        return Ok(LinearCode::parse_text(&text)?.with_name(tok));
    }
    if head == "dsum" {
        let mut sub: Vec<&str> = tokens.to_vec();
        sub[*at] = rest;
        let a = parse_code_at(&sub, at)?;
        let b = parse_code_at(&sub, at)?;
        let name = format!("dsum({},{})", a.name(), b.name());
        return Ok(LinearCode::direct_sum(&a, &b)?.with_name(name));
    }
    *at += 1;
    let v = number(rest, head)?;
    let f = FieldSpec::gf2();
    let code = match head {
        "hamming" => LinearCode::hamming_binary(
            u32::try_from(v).map_err(|_| Error::Usage("hamming order too large".into()))?,
        )?,
        "even" => LinearCode::even_weight(v)?,
        "rep" => LinearCode::repetition(&f, v)?,
        _ => LinearCode::full(&f, v)?,
    };
    Ok(code.with_name(tok))
}

/// One inner code per part: a single spec is replicated, otherwise exactly
/// `ell` specs are required.
pub fn parse_inner_codes(spec: &str, ell: usize) -> Result<Vec<LinearCode>> {
    let codes = parse_code_list(spec)?;
    match codes.len() {
        1 => Ok(vec![codes[0].clone(); ell]),
        k if k == ell => Ok(codes),
        k => Err(Error::Usage(format!(
            "{k} inner codes given for {ell} parts (give one or {ell})"
        ))),
    }
}
