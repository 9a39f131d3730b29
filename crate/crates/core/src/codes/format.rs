//! Text form of network codes.
//!
//! ```text
//! k 1
//! n 2
//! encoder 0 routing m.0 0
//! encoder 3 linear 0:1 0;0 1 1:0 1;0 0 msg:1 1
//! encoder 4 table enc4.tbl
//! decoder table dec.tbl
//! ```
//!
//! Table files hold one `inputs -> outputs` line per input vector; the
//! decoder may instead be `decoder linear <edge>:<rows>... map <path|identity>`.
//! Table paths are resolved relative to the code file.

use std::fmt::Write as _;
use std::path::Path;

use super::{CodeError, Decoder, Encoder, NetworkCode, Selector, SymbolTable, ValueMap};
use crate::algebra::{increment, Algebra, Elem, Matrix};
use crate::network::Network;

/// A code file plus the table files it references.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeBundle {
    pub text: String,
    /// `(relative path, contents)` in order of first reference.
    pub tables: Vec<(String, String)>,
}

fn parse_table<T: Copy>(
    path: &str,
    text: &str,
    q: u32,
    input_len: usize,
    output_len: usize,
    parse_value: impl Fn(&str) -> Option<T>,
) -> Result<SymbolTable<T>, CodeError> {
    let err = |message: String| CodeError::Table { path: path.to_string(), message };
    let count = (q as usize)
        .checked_pow(input_len as u32)
        .filter(|&c| c <= 1 << 24)
        .ok_or_else(|| err(format!("input space {q}^{input_len} is too large")))?;
    let mut slots: Vec<Option<Vec<T>>> = vec![None; count];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (lhs, rhs) = line
            .split_once("->")
            .ok_or_else(|| err(format!("line {}: expected `inputs -> outputs`", i + 1)))?;
        let input: Vec<Elem> = lhs
            .split_whitespace()
            .map(|t| t.parse::<Elem>().ok().filter(|&v| v < q))
            .collect::<Option<_>>()
            .ok_or_else(|| err(format!("line {}: input entries must be alphabet elements", i + 1)))?;
        if input.len() != input_len {
            return Err(err(format!("line {}: expected {input_len} input entries", i + 1)));
        }
        let output: Vec<T> = rhs
            .split_whitespace()
            .map(&parse_value)
            .collect::<Option<_>>()
            .ok_or_else(|| err(format!("line {}: invalid output entry", i + 1)))?;
        if output.len() != output_len {
            return Err(err(format!("line {}: expected {output_len} output entries", i + 1)));
        }
        let index = input.iter().fold(0usize, |acc, &v| acc * q as usize + v as usize);
        if slots[index].replace(output).is_some() {
            return Err(err(format!("line {}: duplicate input {input:?}", i + 1)));
        }
    }
    if let Some(missing) = slots.iter().position(|s| s.is_none()) {
        let input = crate::algebra::index_vector(missing, q, input_len);
        return Err(err(format!("missing entry for input {input:?}")));
    }
    Ok(SymbolTable {
        input_len,
        output_len,
        values: slots.into_iter().flat_map(|s| s.unwrap()).collect(),
    })
}

fn table_text<T: Copy + std::fmt::Display>(table: &SymbolTable<T>, q: u32) -> String {
    let mut out = String::new();
    let mut x = vec![0; table.input_len];
    let mut index = 0;
    loop {
        let lhs: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        let rhs: Vec<String> = table.lookup(index).iter().map(|v| v.to_string()).collect();
        writeln!(out, "{} -> {}", lhs.join(" "), rhs.join(" ")).unwrap();
        index += 1;
        if !increment(&mut x, q) {
            break;
        }
    }
    out
}

/// Splits `a:1 0;0 1 b:1;1` into labelled matrix texts.
fn blocks<'t>(tokens: &[&'t str], line: usize) -> Result<Vec<(&'t str, String)>, CodeError> {
    let mut out: Vec<(&str, String)> = Vec::new();
    for tok in tokens {
        if let Some((label, rest)) = tok.split_once(':') {
            out.push((label, rest.to_string()));
        } else if let Some(last) = out.last_mut() {
            last.1.push(' ');
            last.1.push_str(tok);
        } else {
            return Err(CodeError::Syntax { line, message: format!("matrix entry `{tok}` before any `<edge>:` label") });
        }
    }
    Ok(out)
}

fn parse_matrix(alg: &Algebra, text: &str, line: usize) -> Result<Matrix, CodeError> {
    Matrix::parse(alg, text).map_err(|e| CodeError::Syntax { line, message: format!("bad matrix `{text}`: {e}") })
}

fn parse_edge_id(tok: &str, net: &Network, line: usize) -> Result<usize, CodeError> {
    let id: usize = tok
        .parse()
        .map_err(|_| CodeError::Syntax { line, message: format!("expected an edge id, got `{tok}`") })?;
    if id >= net.edges().len() {
        return Err(CodeError::UnknownEdge(id));
    }
    Ok(id)
}

fn parse_selector(tok: &str, net: &Network, line: usize) -> Result<Selector, CodeError> {
    let bad = || CodeError::Syntax { line, message: format!("bad selector `{tok}`") };
    if tok == "0" {
        return Ok(Selector::Zero);
    }
    let (who, pos) = tok.split_once('.').ok_or_else(bad)?;
    let pos: usize = pos.parse().map_err(|_| bad())?;
    if who == "m" {
        Ok(Selector::Message { pos })
    } else {
        Ok(Selector::InEdge { edge: parse_edge_id(who, net, line)?, pos })
    }
}

/// Parses a code file; `load` returns the contents of a referenced table path.
pub fn parse_code(
    text: &str,
    net: &Network,
    alphabet: &Algebra,
    mut load: impl FnMut(&str) -> Result<String, CodeError>,
) -> Result<NetworkCode, CodeError> {
    let q = alphabet.size();
    let mut k = None;
    let mut n = None;
    let mut encoders: Vec<Option<Encoder>> = vec![None; net.edges().len()];
    let mut decoder = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let syntax = |message: &str| CodeError::Syntax { line, message: message.to_string() };
        let dims = |k: Option<usize>, n: Option<usize>| {
            k.zip(n).ok_or_else(|| syntax("`k` and `n` must precede encoders and the decoder"))
        };
        match tokens[0] {
            "k" | "n" => {
                let v: usize = tokens
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .filter(|&v| v > 0 && tokens.len() == 2)
                    .ok_or_else(|| syntax("expected a positive integer"))?;
                if tokens[0] == "k" {
                    k = Some(v);
                } else {
                    n = Some(v);
                }
            }
            "encoder" => {
                let (k, n) = dims(k, n)?;
                if tokens.len() < 3 {
                    return Err(syntax("expected `encoder <edge-id> <kind> ...`"));
                }
                let e = parse_edge_id(tokens[1], net, line)?;
                let tail = net.edges()[e].tail;
                let enc = match tokens[2] {
                    "routing" => Encoder::Routing(
                        tokens[3..].iter().map(|t| parse_selector(t, net, line)).collect::<Result<_, _>>()?,
                    ),
                    "linear" => {
                        let mut inputs = Vec::new();
                        let mut message = None;
                        for (label, body) in blocks(&tokens[3..], line)? {
                            let m = parse_matrix(alphabet, &body, line)?;
                            if label == "msg" {
                                if message.replace(m).is_some() {
                                    return Err(syntax("repeated `msg:` block"));
                                }
                            } else {
                                inputs.push((parse_edge_id(label, net, line)?, m));
                            }
                        }
                        Encoder::Linear { inputs, message }
                    }
                    "table" => {
                        let path = tokens.get(3).filter(|_| tokens.len() == 4).ok_or_else(|| syntax("expected one table path"))?;
                        let src = net.source_index(tail).is_some();
                        let input_len = net.in_edges(tail).len() * n + if src { k } else { 0 };
                        let body = load(path)?;
                        let table = parse_table(path, &body, q, input_len, n, |t| t.parse::<Elem>().ok().filter(|&v| v < q))?;
                        Encoder::Table { path: path.to_string(), table }
                    }
                    other => return Err(syntax(&format!("unknown encoder kind `{other}`"))),
                };
                if encoders[e].replace(enc).is_some() {
                    return Err(CodeError::DuplicateEncoder(e));
                }
            }
            "decoder" => {
                let (k, n) = dims(k, n)?;
                if decoder.is_some() {
                    return Err(syntax("second decoder"));
                }
                let dec = match tokens.get(1) {
                    Some(&"table") => {
                        let path = tokens.get(2).filter(|_| tokens.len() == 3).ok_or_else(|| syntax("expected one table path"))?;
                        let input_len = net.in_edges(net.receiver()).len() * n;
                        let body = load(path)?;
                        let table = parse_table(path, &body, q, input_len, k, |t| t.parse::<i64>().ok())?;
                        Decoder::Table { path: path.to_string(), table }
                    }
                    Some(&"linear") => {
                        let map_at = tokens
                            .iter()
                            .position(|&t| t == "map")
                            .filter(|&p| p + 2 == tokens.len())
                            .ok_or_else(|| syntax("linear decoder must end with `map <path|identity>`"))?;
                        let mut parsed = Vec::new();
                        for (label, body) in blocks(&tokens[2..map_at], line)? {
                            parsed.push((parse_edge_id(label, net, line)?, parse_matrix(alphabet, &body, line)?));
                        }
                        let map = match tokens[map_at + 1] {
                            "identity" => ValueMap::Identity,
                            path => {
                                let body = load(path)?;
                                let t = parse_table(path, &body, q, 1, 1, |t| t.parse::<i64>().ok())?;
                                ValueMap::Table { path: path.to_string(), labels: t.values }
                            }
                        };
                        Decoder::LinearThenMap { blocks: parsed, map }
                    }
                    _ => return Err(syntax("expected `decoder table <path>` or `decoder linear ...`")),
                };
                decoder = Some(dec);
            }
            other => return Err(syntax(&format!("unknown directive `{other}`"))),
        }
    }
    let (k, n) = k.zip(n).ok_or(CodeError::Syntax { line: 0, message: "missing `k` or `n`".into() })?;
    let encoders = encoders
        .into_iter()
        .enumerate()
        .map(|(e, enc)| enc.ok_or(CodeError::MissingEncoder(e)))
        .collect::<Result<Vec<_>, _>>()?;
    let decoder = decoder.ok_or(CodeError::Syntax { line: 0, message: "missing decoder".into() })?;
    let code = NetworkCode { k, n, alphabet: alphabet.clone(), encoders, decoder };
    code.validate(net)?;
    Ok(code)
}

fn block_text(label: &str, m: &Matrix) -> String {
    format!("{label}:{m}")
}

impl NetworkCode {
    /// Canonical text plus referenced tables; parsing the result gives back `self`.
    pub fn to_bundle(&self) -> CodeBundle {
        let q = self.alphabet.size();
        let mut text = format!("k {}\nn {}\n", self.k, self.n);
        let mut tables = Vec::new();
        for (e, enc) in self.encoders.iter().enumerate() {
            match enc {
                Encoder::Routing(sel) => {
                    let parts: Vec<String> = sel.iter().map(|s| s.to_string()).collect();
                    writeln!(text, "encoder {e} routing {}", parts.join(" ")).unwrap();
                }
                Encoder::Linear { inputs, message } => {
                    let mut parts: Vec<String> = inputs.iter().map(|(i, g)| block_text(&i.to_string(), g)).collect();
                    if let Some(h) = message {
                        parts.push(block_text("msg", h));
                    }
                    let body = if parts.is_empty() { String::new() } else { format!(" {}", parts.join(" ")) };
                    writeln!(text, "encoder {e} linear{body}").unwrap();
                }
                Encoder::Table { path, table } => {
                    writeln!(text, "encoder {e} table {path}").unwrap();
                    tables.push((path.clone(), table_text(table, q)));
                }
            }
        }
        match &self.decoder {
            Decoder::Table { path, table } => {
                writeln!(text, "decoder table {path}").unwrap();
                tables.push((path.clone(), table_text(table, q)));
            }
            Decoder::LinearThenMap { blocks, map } => {
                let parts: Vec<String> = blocks.iter().map(|(i, d)| block_text(&i.to_string(), d)).collect();
                let body = if parts.is_empty() { String::new() } else { format!(" {}", parts.join(" ")) };
                let target = match map {
                    ValueMap::Identity => "identity".to_string(),
                    ValueMap::Table { path, labels } => {
                        let t = SymbolTable { input_len: 1, output_len: 1, values: labels.clone() };
                        tables.push((path.clone(), table_text(&t, q)));
                        path.clone()
                    }
                };
                writeln!(text, "decoder linear{body} map {target}").unwrap();
            }
        }
        CodeBundle { text, tables }
    }

    /// Renames every table file to `{prefix}.{old name}`, so several codes
    /// can share a directory.
    pub fn prefix_tables(&mut self, prefix: &str) {
        let rename = |path: &mut String| *path = format!("{prefix}.{path}");
        for enc in &mut self.encoders {
            if let Encoder::Table { path, .. } = enc {
                rename(path);
            }
        }
        match &mut self.decoder {
            Decoder::Table { path, .. } | Decoder::LinearThenMap { map: ValueMap::Table { path, .. }, .. } => rename(path),
            Decoder::LinearThenMap { map: ValueMap::Identity, .. } => {}
        }
    }
}

/// Reads a code file, resolving table paths relative to its directory.
pub fn read_code(path: &Path, net: &Network, alphabet: &Algebra) -> Result<NetworkCode, CodeError> {
    let io = |p: &Path, source| CodeError::Io { path: p.display().to_string(), source };
    let text = std::fs::read_to_string(path).map_err(|e| io(path, e))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    parse_code(&text, net, alphabet, |rel| {
        let p = dir.join(rel);
        std::fs::read_to_string(&p).map_err(|e| io(&p, e))
    })
}

/// Writes the code file and its tables (next to it).
pub fn write_code(code: &NetworkCode, path: &Path) -> Result<(), CodeError> {
    let io = |p: &Path, source| CodeError::Io { path: p.display().to_string(), source };
    let bundle = code.to_bundle();
    let dir = path.parent().unwrap_or(Path::new("."));
    for (rel, body) in &bundle.tables {
        let p = dir.join(rel);
        std::fs::write(&p, body).map_err(|e| io(&p, e))?;
    }
    std::fs::write(path, &bundle.text).map_err(|e| io(path, e))
}
