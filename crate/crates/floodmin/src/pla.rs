//! File formats: an Espresso-style PLA dialect, plain truth tables, minterm
//! lists, and sum-of-products expression text.
//!
//! PLA documents may declare several outputs; a function is extracted per
//! output column. Only an explicit `1` in that column puts a row's input cube
//! in the ON-set: a `-` output is treated as OFF, not as a don't-care.

use std::collections::HashSet;

use thiserror::Error;

use crate::model::{
    space_size, Coordinate, Cover, Cube, ModelError, TruthFunction, VarNames, MAX_DIMENSION,
};

/// One symbol of a PLA row: fixed low, fixed high, or free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trit {
    Zero,
    One,
    Dash,
}

impl Trit {
    pub fn from_char(c: char) -> Option<Trit> {
        match c {
            '0' => Some(Trit::Zero),
            '1' => Some(Trit::One),
            '-' => Some(Trit::Dash),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Trit::Zero => '0',
            Trit::One => '1',
            Trit::Dash => '-',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaRow {
    pub inputs: Vec<Trit>,
    pub outputs: Vec<Trit>,
}

/// A parsed PLA file. Directives we do not interpret survive verbatim in
/// `annotations` and are written back out unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaDocument {
    pub num_inputs: usize,
    pub num_outputs: usize,
    pub input_labels: Option<Vec<String>>,
    pub output_labels: Option<Vec<String>>,
    pub rows: Vec<PlaRow>,
    pub annotations: Vec<String>,
    /// The `.p` count as declared, if any. Writing always emits the real count.
    pub declared_products: Option<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("output index {index} out of range: the document has {outputs} outputs")]
    OutputIndexOutOfRange { index: usize, outputs: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub fn parse_pla(text: &str) -> Result<PlaDocument, ParseError> {
    let mut num_inputs: Option<usize> = None;
    let mut num_outputs: Option<usize> = None;
    let mut input_labels: Option<Vec<String>> = None;
    let mut output_labels: Option<Vec<String>> = None;
    let mut declared_products: Option<usize> = None;
    let mut rows: Vec<PlaRow> = Vec::new();
    let mut annotations: Vec<String> = Vec::new();
    let mut line_count = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        line_count = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let first = tokens.next().unwrap();
        if let Some(directive) = first.strip_prefix('.') {
            match directive {
                "i" => {
                    if num_inputs.is_some() {
                        return Err(ParseError::new(line, "duplicate .i directive"));
                    }
                    num_inputs = Some(parse_count(line, ".i", tokens.next())?);
                }
                "o" => {
                    if num_outputs.is_some() {
                        return Err(ParseError::new(line, "duplicate .o directive"));
                    }
                    num_outputs = Some(parse_count(line, ".o", tokens.next())?);
                }
                "ilb" => {
                    let Some(n) = num_inputs else {
                        return Err(ParseError::new(line, ".ilb before .i"));
                    };
                    let labels: Vec<String> = tokens.map(str::to_owned).collect();
                    if labels.len() != n {
                        return Err(ParseError::new(
                            line,
                            format!("expected {n} input labels, found {}", labels.len()),
                        ));
                    }
                    input_labels = Some(labels);
                }
                "ob" => {
                    let Some(m) = num_outputs else {
                        return Err(ParseError::new(line, ".ob before .o"));
                    };
                    let labels: Vec<String> = tokens.map(str::to_owned).collect();
                    if labels.len() != m {
                        return Err(ParseError::new(
                            line,
                            format!("expected {m} output labels, found {}", labels.len()),
                        ));
                    }
                    output_labels = Some(labels);
                }
                "p" => {
                    declared_products = Some(parse_count(line, ".p", tokens.next())?);
                }
                "e" | "end" => break,
                _ => annotations.push(content.to_owned()),
            }
        } else {
            let (Some(ni), Some(no)) = (num_inputs, num_outputs) else {
                return Err(ParseError::new(line, "cube row before .i and .o"));
            };
            let symbols: Vec<char> = content.chars().filter(|c| !c.is_whitespace()).collect();
            if symbols.len() != ni + no {
                return Err(ParseError::new(
                    line,
                    format!(
                        "row has {} symbols, expected {ni} inputs and {no} outputs",
                        symbols.len()
                    ),
                ));
            }
            let mut trits = Vec::with_capacity(symbols.len());
            for c in symbols {
                let Some(t) = Trit::from_char(c) else {
                    return Err(ParseError::new(line, format!("illegal character {c:?} in cube row")));
                };
                trits.push(t);
            }
            let outputs = trits.split_off(ni);
            rows.push(PlaRow { inputs: trits, outputs });
        }
    }

    let eof = line_count.max(1);
    let num_inputs =
        num_inputs.ok_or_else(|| ParseError::new(eof, "missing .i directive"))?;
    let num_outputs =
        num_outputs.ok_or_else(|| ParseError::new(eof, "missing .o directive"))?;
    Ok(PlaDocument {
        num_inputs,
        num_outputs,
        input_labels,
        output_labels,
        rows,
        annotations,
        declared_products,
    })
}

fn parse_count(line: usize, directive: &str, token: Option<&str>) -> Result<usize, ParseError> {
    let token = token
        .ok_or_else(|| ParseError::new(line, format!("expected a count after {directive}")))?;
    let value: usize = token
        .parse()
        .map_err(|_| ParseError::new(line, format!("expected a count after {directive}, found {token:?}")))?;
    if value == 0 && (directive == ".i" || directive == ".o") {
        return Err(ParseError::new(line, format!("{directive} count must be at least 1")));
    }
    Ok(value)
}

pub fn write_pla(doc: &PlaDocument) -> String {
    let mut out = String::new();
    out.push_str(&format!(".i {}\n", doc.num_inputs));
    out.push_str(&format!(".o {}\n", doc.num_outputs));
    if let Some(labels) = &doc.input_labels {
        out.push_str(&format!(".ilb {}\n", labels.join(" ")));
    }
    if let Some(labels) = &doc.output_labels {
        out.push_str(&format!(".ob {}\n", labels.join(" ")));
    }
    out.push_str(&format!(".p {}\n", doc.rows.len()));
    for note in &doc.annotations {
        out.push_str(note);
        out.push('\n');
    }
    for row in &doc.rows {
        for t in &row.inputs {
            out.push(t.to_char());
        }
        out.push(' ');
        for t in &row.outputs {
            out.push(t.to_char());
        }
        out.push('\n');
    }
    out.push_str(".e\n");
    out
}

/// The cube described by a PLA input part: dashes free, digits fixed.
fn row_input_cube(inputs: &[Trit]) -> Result<Cube, ModelError> {
    let n = inputs.len() as u32;
    if n > MAX_DIMENSION {
        return Err(ModelError::DimensionTooLarge(n));
    }
    let mut mask = 0u32;
    let mut values = 0u32;
    for (var, t) in inputs.iter().enumerate() {
        let pos = n - 1 - var as u32;
        match t {
            Trit::Dash => {}
            Trit::Zero => mask |= 1 << pos,
            Trit::One => {
                mask |= 1 << pos;
                values |= 1 << pos;
            }
        }
    }
    Cube::new(n, mask, values)
}

fn cube_row_text(cube: &Cube) -> String {
    let n = cube.dimension();
    (0..n)
        .map(|var| {
            let pos = n - 1 - var;
            if cube.fixed_mask() >> pos & 1 == 0 {
                '-'
            } else if cube.fixed_values() >> pos & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Expands every row whose chosen output column is `1` into its ON
/// coordinates and unions them. Dash outputs contribute nothing.
pub fn extract_function(doc: &PlaDocument, output_index: usize) -> Result<TruthFunction, ExtractError> {
    if output_index >= doc.num_outputs {
        return Err(ExtractError::OutputIndexOutOfRange {
            index: output_index,
            outputs: doc.num_outputs,
        });
    }
    let n = doc.num_inputs as u32;
    if n > MAX_DIMENSION {
        return Err(ExtractError::Model(ModelError::DimensionTooLarge(n)));
    }
    let mut on: HashSet<Coordinate> = HashSet::new();
    for row in &doc.rows {
        if row.outputs[output_index] != Trit::One {
            continue;
        }
        let cube = row_input_cube(&row.inputs)?;
        on.extend(cube.members());
    }
    Ok(TruthFunction::new(n, on)?)
}

/// Renders a cover as a single-output PLA, one row per cube.
pub fn write_cover_pla(cover: &Cover) -> String {
    let mut out = String::new();
    out.push_str(&format!(".i {}\n", cover.dimension()));
    out.push_str(".o 1\n");
    out.push_str(&format!(".p {}\n", cover.len()));
    for cube in cover.cubes() {
        out.push_str(&cube_row_text(cube));
        out.push_str(" 1\n");
    }
    out.push_str(".e\n");
    out
}

/// Renders a cover as `+`-joined product terms; the empty cover is "0".
pub fn write_cover_sop(cover: &Cover, names: &VarNames) -> String {
    if cover.is_empty() {
        return "0".to_owned();
    }
    cover
        .cubes()
        .iter()
        .map(|cube| cube.expression(names))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Parses `+`-joined product terms back into a cover. Literals are variable
/// names with an optional trailing apostrophe for the complement; whitespace
/// is ignored everywhere. "0" alone is the empty cover, "1" the universe.
pub fn parse_cover_sop(text: &str, n: u32, names: &VarNames) -> Result<Cover, ParseError> {
    assert_eq!(names.len(), n as usize, "name list must match dimension");
    let mut chars: Vec<(char, usize)> = Vec::new();
    let mut line = 1;
    for c in text.chars() {
        if c == '\n' {
            line += 1;
        } else if !c.is_whitespace() {
            chars.push((c, line));
        }
    }
    if chars.is_empty() {
        return Err(ParseError::new(1, "empty expression"));
    }
    let terms: Vec<&[(char, usize)]> = chars.split(|&(c, _)| c == '+').collect();
    if terms.len() == 1 && terms[0].len() == 1 && terms[0][0].0 == '0' {
        return Ok(Cover::empty(n));
    }
    let mut cubes = Vec::with_capacity(terms.len());
    for term in terms {
        cubes.push(parse_term(term, n, names)?);
    }
    Ok(Cover::from_cubes(n, cubes).expect("terms are built at the requested dimension"))
}

fn parse_term(term: &[(char, usize)], n: u32, names: &VarNames) -> Result<Cube, ParseError> {
    if term.is_empty() {
        return Err(ParseError::new(1, "empty term"));
    }
    if term.len() == 1 && term[0].0 == '1' {
        return Ok(Cube::universe(n));
    }
    if term.len() == 1 && term[0].0 == '0' {
        return Err(ParseError::new(term[0].1, "'0' cannot appear inside a sum"));
    }
    let mut mask = 0u32;
    let mut values = 0u32;
    let mut i = 0;
    while i < term.len() {
        let line = term[i].1;
        let mut matched: Option<(usize, u32)> = None;
        for var in 0..n {
            let name: Vec<char> = names.get(var).chars().collect();
            let fits = term.len() - i >= name.len()
                && name.iter().enumerate().all(|(j, &c)| term[i + j].0 == c);
            if fits && matched.map_or(true, |(len, _)| name.len() > len) {
                matched = Some((name.len(), var));
            }
        }
        let Some((len, var)) = matched else {
            return Err(ParseError::new(line, format!("unexpected character {:?}", term[i].0)));
        };
        i += len;
        let complemented = i < term.len() && term[i].0 == '\'';
        if complemented {
            i += 1;
        }
        let pos = n - 1 - var;
        let bit = u32::from(!complemented) << pos;
        if mask >> pos & 1 == 1 && values & 1 << pos != bit {
            return Err(ParseError::new(
                line,
                format!("contradictory literal for variable {}", names.get(var)),
            ));
        }
        mask |= 1 << pos;
        values = values & !(1 << pos) | bit;
    }
    Ok(Cube::new(n, mask, values).expect("literal bits stay within dimension"))
}

pub fn parse_truth_table(text: &str) -> Result<TruthFunction, ParseError> {
    let mut n: Option<u32> = None;
    let mut on: Vec<Coordinate> = Vec::new();
    let mut line_count = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        line_count = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(ParseError::new(line, "expected '<input bits> <output bit>'"));
        }
        let width = tokens[0].chars().count() as u32;
        match n {
            None => {
                if width > MAX_DIMENSION {
                    return Err(ParseError::new(
                        line,
                        format!("input width {width} exceeds the maximum dimension {MAX_DIMENSION}"),
                    ));
                }
                n = Some(width);
            }
            Some(expect) if expect != width => {
                return Err(ParseError::new(
                    line,
                    format!("row width {width} does not match earlier width {expect}"),
                ));
            }
            _ => {}
        }
        let mut bits = 0u32;
        for c in tokens[0].chars() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                _ => {
                    return Err(ParseError::new(line, format!("illegal character {c:?} in input bits")))
                }
            }
        }
        match tokens[1] {
            "0" => {}
            "1" => on.push(Coordinate::new(bits)),
            other => {
                return Err(ParseError::new(line, format!("output bit must be 0 or 1, found {other:?}")))
            }
        }
    }
    let Some(n) = n else {
        return Err(ParseError::new(line_count.max(1), "empty truth table"));
    };
    Ok(TruthFunction::new(n, on).expect("row width was range checked"))
}

/// Writes every row of the table; rows not in the ON-set print 0.
pub fn write_truth_table(f: &TruthFunction) -> String {
    let n = f.dimension();
    let mut out = String::new();
    for bits in 0..space_size(n) {
        let c = Coordinate::new(bits as u32);
        out.push_str(&c.bit_string(n));
        out.push(' ');
        out.push(if f.contains(c) { '1' } else { '0' });
        out.push('\n');
    }
    out
}

pub fn parse_minterm_list(text: &str) -> Result<TruthFunction, ParseError> {
    let mut n: Option<u32> = None;
    let mut on: Vec<Coordinate> = Vec::new();
    let mut line_count = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        line_count = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match n {
            None => {
                let Some(dims) = content.strip_prefix("n=") else {
                    return Err(ParseError::new(line, "expected a header of the form n=<dims>"));
                };
                let dims: u32 = dims.trim().parse().map_err(|_| {
                    ParseError::new(line, format!("expected a dimension count, found {dims:?}"))
                })?;
                if dims > MAX_DIMENSION {
                    return Err(ParseError::new(
                        line,
                        format!("dimension {dims} exceeds the maximum {MAX_DIMENSION}"),
                    ));
                }
                n = Some(dims);
            }
            Some(dims) => {
                let index: u64 = content.parse().map_err(|_| {
                    ParseError::new(line, format!("expected a decimal minterm index, found {content:?}"))
                })?;
                if index >= space_size(dims) {
                    return Err(ParseError::new(
                        line,
                        format!("minterm {index} out of range for dimension {dims}"),
                    ));
                }
                on.push(Coordinate::new(index as u32));
            }
        }
    }
    let Some(n) = n else {
        return Err(ParseError::new(line_count.max(1), "missing n=<dims> header"));
    };
    Ok(TruthFunction::new(n, on).expect("indices were range checked"))
}

pub fn write_minterm_list(f: &TruthFunction) -> String {
    let mut out = format!("n={}\n", f.dimension());
    for c in f.on_set() {
        out.push_str(&c.bits().to_string());
        out.push('\n');
    }
    out
}

/// The instance file formats understood by the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceFormat {
    Pla,
    TruthTable,
    MintermList,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
}

/// Reads a function from text in the given format. `output_index` selects the
/// PLA output column; the single-output formats only accept index 0.
pub fn read_function(
    text: &str,
    format: InstanceFormat,
    output_index: usize,
) -> Result<TruthFunction, ReadError> {
    match format {
        InstanceFormat::Pla => {
            let doc = parse_pla(text)?;
            Ok(extract_function(&doc, output_index)?)
        }
        InstanceFormat::TruthTable | InstanceFormat::MintermList => {
            if output_index != 0 {
                return Err(ReadError::Extract(ExtractError::OutputIndexOutOfRange {
                    index: output_index,
                    outputs: 1,
                }));
            }
            match format {
                InstanceFormat::TruthTable => Ok(parse_truth_table(text)?),
                _ => Ok(parse_minterm_list(text)?),
            }
        }
    }
}

/// Writes a function as text. The PLA form lists one minterm row per ON
/// coordinate; the truth table writes all `2^n` rows.
pub fn write_function(f: &TruthFunction, format: InstanceFormat) -> String {
    match format {
        InstanceFormat::Pla => {
            let n = f.dimension();
            let rows = f
                .on_set()
                .iter()
                .map(|c| PlaRow {
                    inputs: (0..n)
                        .map(|var| if c.variable(var, n) { Trit::One } else { Trit::Zero })
                        .collect(),
                    outputs: vec![Trit::One],
                })
                .collect();
            write_pla(&PlaDocument {
                num_inputs: n as usize,
                num_outputs: 1,
                input_labels: None,
                output_labels: None,
                rows,
                annotations: Vec::new(),
                declared_products: None,
            })
        }
        InstanceFormat::TruthTable => write_truth_table(f),
        InstanceFormat::MintermList => write_minterm_list(f),
    }
}
