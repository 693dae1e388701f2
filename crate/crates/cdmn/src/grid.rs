//! Workbook ingestion: a CSV-style cell grid split into table blocks.
//!
//! A workbook is a sequence of blocks separated by fully blank lines. Row 1
//! of a block is the title row (`name, hit policy[, default=...]`), row 2
//! holds the column headers with a single `||` cell between inputs and
//! outputs, and the remaining rows form the body.

use std::io::Read;

use thiserror::Error;

/// The separator cell between input and output columns.
pub const SEPARATOR: &str = "||";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("input is not valid UTF-8 (byte offset {0})")]
    InvalidEncoding(usize),
    #[error("row {0}: quoted cell is never closed")]
    UnbalancedQuote(usize),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("the workbook contains no tables")]
    EmptyModel,
    #[error("row {row}: unknown hit policy `{token}`")]
    UnknownHitPolicy { row: usize, token: String },
    #[error("row {0}: the C (collect) hit policy is not supported; use a relation instead")]
    CollectNotSupported(usize),
    #[error("row {0}: missing hit policy")]
    MissingHitPolicy(usize),
    #[error("row {row}: `{name}` is a data table and cannot also carry hit policy `{token}`")]
    AmbiguousTitle { row: usize, name: String, token: String },
    #[error("row {row}: glossary title `{name}` names no known glossary table")]
    UnknownGlossaryKind { row: usize, name: String },
    #[error("row {row}: unexpected title cell `{cell}`")]
    UnexpectedTitleCell { row: usize, cell: String },
    #[error("row {0}: table has no header row")]
    MissingHeader(usize),
    #[error("row {0}: header row needs exactly one `||` separator cell")]
    MissingSeparator(usize),
    #[error("row {0}: table has no output columns")]
    NoOutputs(usize),
    #[error("row {row}, column {column}: cell under the `||` separator must be empty")]
    SeparatorNotEmpty { row: usize, column: usize },
    #[error("column {column} of the table starting at row {row} is blank")]
    BlankColumn { row: usize, column: usize },
    #[error("row {0}: a goal table has exactly one body row")]
    GoalRowCount(usize),
}

/// Rows of raw cell text, exactly as read.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawGrid {
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HitPolicy {
    Unique,
    Any,
    First,
    Every,
    Sum,
    Min,
    Max,
    Count,
}

impl HitPolicy {
    pub fn parse(token: &str) -> Option<HitPolicy> {
        Some(match token.trim() {
            "U" => HitPolicy::Unique,
            "A" => HitPolicy::Any,
            "F" => HitPolicy::First,
            "E*" => HitPolicy::Every,
            "C+" => HitPolicy::Sum,
            "C<" => HitPolicy::Min,
            "C>" => HitPolicy::Max,
            "C#" => HitPolicy::Count,
            _ => return None,
        })
    }

    pub fn token(self) -> &'static str {
        match self {
            HitPolicy::Unique => "U",
            HitPolicy::Any => "A",
            HitPolicy::First => "F",
            HitPolicy::Every => "E*",
            HitPolicy::Sum => "C+",
            HitPolicy::Min => "C<",
            HitPolicy::Max => "C>",
            HitPolicy::Count => "C#",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockKind {
    GlossaryType,
    GlossaryFunction,
    GlossaryConstant,
    GlossaryRelation,
    GlossaryBoolean,
    Decision,
    Constraint,
    Data,
    Goal,
}

impl BlockKind {
    pub fn is_glossary(self) -> bool {
        matches!(
            self,
            BlockKind::GlossaryType
                | BlockKind::GlossaryFunction
                | BlockKind::GlossaryConstant
                | BlockKind::GlossaryRelation
                | BlockKind::GlossaryBoolean
        )
    }

    fn has_separator(self) -> bool {
        matches!(self, BlockKind::Decision | BlockKind::Constraint | BlockKind::Data)
    }
}

/// Where a block sits in the source file (1-based).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockOrigin {
    pub first_row: usize,
    /// Source column of each retained column (the separator is dropped).
    pub columns: Vec<usize>,
}

/// A rectangular table. Header and body exclude the `||` column; the first
/// `n_inputs` columns are inputs, the rest outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableBlock {
    pub name: String,
    pub kind: BlockKind,
    pub hit_policy: Option<HitPolicy>,
    /// Text after `default=` in the title row, if present.
    pub default: Option<String>,
    pub header_row: Vec<String>,
    pub body: Vec<Vec<String>>,
    pub n_inputs: usize,
    pub n_outputs: usize,
    pub origin: BlockOrigin,
}

impl TableBlock {
    /// 1-based file row of body row `i`.
    pub fn body_row(&self, i: usize) -> usize {
        self.origin.first_row + 2 + i
    }

    pub fn header_file_row(&self) -> usize {
        self.origin.first_row + 1
    }

    /// 1-based file column of column `j`.
    pub fn file_column(&self, j: usize) -> usize {
        self.origin.columns.get(j).copied().unwrap_or(j + 1)
    }

    /// Source rows covered by the body, as an inclusive range.
    pub fn body_rows(&self) -> (usize, usize) {
        let first = self.origin.first_row + 2;
        (first, first + self.body.len().saturating_sub(1))
    }
}

/// Reads the workbook grid from a byte stream.
pub fn load_grid(mut source: impl Read) -> Result<RawGrid, GridError> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes).map_err(|e| GridError::Io(e.to_string()))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| GridError::InvalidEncoding(e.valid_up_to()))?;
    parse_grid(text)
}

/// Parses RFC-4180 style text. Unlike most CSV readers, blank lines are
/// kept as rows because they delimit tables.
pub fn parse_grid(text: &str) -> Result<RawGrid, GridError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut rows = Vec::new();
    if text.is_empty() {
        return Ok(RawGrid { rows });
    }
    let mut row: Vec<String> = Vec::new();
    let mut cell = String::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    let mut quote_line = 0;
    let mut in_quotes = false;
    let mut at_row_start = true;
    while let Some(c) = chars.next() {
        at_row_start = false;
        if in_quotes {
            match c {
                '"' if chars.peek() == Some(&'"') => {
                    chars.next();
                    cell.push('"');
                }
                '"' => in_quotes = false,
                '\n' => {
                    line += 1;
                    cell.push(c);
                }
                _ => cell.push(c),
            }
            continue;
        }
        match c {
            '"' => {
                in_quotes = true;
                quote_line = line;
            }
            ',' => row.push(std::mem::take(&mut cell)),
            '\r' if chars.peek() == Some(&'\n') => {}
            '\n' | '\r' => {
                row.push(std::mem::take(&mut cell));
                rows.push(std::mem::take(&mut row));
                line += 1;
                at_row_start = true;
            }
            _ => cell.push(c),
        }
    }
    if in_quotes {
        return Err(GridError::UnbalancedQuote(quote_line));
    }
    if !at_row_start {
        row.push(cell);
        rows.push(row);
    }
    Ok(RawGrid { rows })
}

fn is_blank_row(row: &[String]) -> bool {
    row.iter().all(|c| c.trim().is_empty())
}

/// Determines the block kind and hit policy from the title row.
pub fn classify_block(title_row: &[String]) -> Result<(BlockKind, Option<HitPolicy>), GridError> {
    classify_at(title_row, 0)
}

fn classify_at(title_row: &[String], row: usize) -> Result<(BlockKind, Option<HitPolicy>), GridError> {
    let name = title_row.first().map(|s| s.trim()).unwrap_or("");
    let policy_cell = title_row.get(1).map(|s| s.trim()).unwrap_or("");
    let lower = name.to_lowercase();
    let mut words = lower.split(|c: char| c.is_whitespace() || c == ':').filter(|w| !w.is_empty());
    if words.next() == Some("glossary") {
        for w in words {
            let kind = match w {
                "type" | "types" => BlockKind::GlossaryType,
                "function" | "functions" => BlockKind::GlossaryFunction,
                "constant" | "constants" => BlockKind::GlossaryConstant,
                "relation" | "relations" => BlockKind::GlossaryRelation,
                "boolean" | "booleans" => BlockKind::GlossaryBoolean,
                _ => continue,
            };
            return Ok((kind, None));
        }
        return Err(GridError::UnknownGlossaryKind { row, name: name.to_string() });
    }
    if lower == "goal" {
        return Ok((BlockKind::Goal, None));
    }
    if lower.contains("data table") {
        if !policy_cell.is_empty() {
            return Err(GridError::AmbiguousTitle { row, name: name.to_string(), token: policy_cell.to_string() });
        }
        return Ok((BlockKind::Data, None));
    }
    if policy_cell.is_empty() {
        return Err(GridError::MissingHitPolicy(row));
    }
    if policy_cell == "C" {
        return Err(GridError::CollectNotSupported(row));
    }
    match HitPolicy::parse(policy_cell) {
        Some(HitPolicy::Every) => Ok((BlockKind::Constraint, Some(HitPolicy::Every))),
        Some(p) => Ok((BlockKind::Decision, Some(p))),
        None => Err(GridError::UnknownHitPolicy { row, token: policy_cell.to_string() }),
    }
}

/// Splits the grid into maximal runs of non-blank rows and classifies each.
pub fn segment_blocks(grid: &RawGrid) -> Result<Vec<TableBlock>, GridError> {
    let mut blocks = Vec::new();
    let mut start = None;
    for (i, row) in grid.rows.iter().enumerate() {
        match (is_blank_row(row), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                blocks.push(build_block(&grid.rows[s..i], s + 1)?);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        blocks.push(build_block(&grid.rows[s..], s + 1)?);
    }
    if blocks.is_empty() {
        return Err(GridError::EmptyModel);
    }
    Ok(blocks)
}

fn build_block(rows: &[Vec<String>], first_row: usize) -> Result<TableBlock, GridError> {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut r: Vec<String> = r.iter().map(|c| c.trim().to_string()).collect();
            r.resize(width, String::new());
            r
        })
        .collect();
    // Spreadsheet exports pad every row to the sheet width.
    let mut used = width;
    while used > 0 && cells.iter().all(|r| r[used - 1].is_empty()) {
        used -= 1;
    }
    for r in &mut cells {
        r.truncate(used);
    }
    for j in 0..used {
        if cells.len() > 1 && cells[1..].iter().all(|r| r[j].is_empty()) {
            return Err(GridError::BlankColumn { row: first_row, column: j + 1 });
        }
    }

    let title = &cells[0];
    let (kind, hit_policy) = classify_at(title, first_row)?;
    let name = title[0].clone();
    let mut default = None;
    let extra_from = if kind.is_glossary() || kind == BlockKind::Goal || kind == BlockKind::Data { 1 } else { 2 };
    for cell in title.iter().skip(extra_from) {
        if cell.is_empty() {
            continue;
        }
        match cell.strip_prefix("default=") {
            Some(v) if default.is_none() && matches!(kind, BlockKind::Decision | BlockKind::Constraint) => {
                default = Some(v.trim().to_string())
            }
            _ => return Err(GridError::UnexpectedTitleCell { row: first_row, cell: cell.clone() }),
        }
    }
    if cells.len() < 2 {
        return Err(GridError::MissingHeader(first_row));
    }
    let mut header = cells[1].clone();
    let mut body: Vec<Vec<String>> = cells[2..].to_vec();
    let mut columns: Vec<usize> = (1..=used).collect();

    let (n_inputs, n_outputs) = if kind.has_separator() {
        let seps: Vec<usize> = header.iter().enumerate().filter(|(_, c)| *c == SEPARATOR).map(|(j, _)| j).collect();
        let [sep] = seps[..] else {
            return Err(GridError::MissingSeparator(first_row + 1));
        };
        for (i, r) in body.iter().enumerate() {
            if !(r[sep].is_empty() || r[sep] == SEPARATOR) {
                return Err(GridError::SeparatorNotEmpty { row: first_row + 2 + i, column: sep + 1 });
            }
        }
        header.remove(sep);
        for r in &mut body {
            r.remove(sep);
        }
        columns.remove(sep);
        let n_outputs = header.len() - sep;
        if n_outputs == 0 {
            return Err(GridError::NoOutputs(first_row + 1));
        }
        (sep, n_outputs)
    } else {
        // Glossary and goal headers are fixed; trailing blank header cells are not columns.
        while header.last().is_some_and(String::is_empty) && body.iter().all(|r| r.last().is_some_and(String::is_empty)) {
            header.pop();
            for r in &mut body {
                r.pop();
            }
            columns.pop();
        }
        (header.len(), 0)
    };
    if kind == BlockKind::Goal && body.len() != 1 {
        return Err(GridError::GoalRowCount(first_row));
    }
    Ok(TableBlock {
        name,
        kind,
        hit_policy,
        default,
        header_row: header,
        body,
        n_inputs,
        n_outputs,
        origin: BlockOrigin { first_row, columns },
    })
}

fn quote(cell: &str) -> String {
    if cell.contains([',', '"', '\n', '\r']) || cell.trim() != cell {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

fn join(cells: &[String]) -> String {
    cells.iter().map(|c| quote(c)).collect::<Vec<_>>().join(",")
}

/// Serializes a block in the workbook format.
pub fn render_block(block: &TableBlock) -> String {
    let mut title = vec![block.name.clone()];
    if let Some(p) = block.hit_policy {
        title.push(p.token().to_string());
    }
    if let Some(d) = &block.default {
        title.push(format!("default={d}"));
    }
    let mut lines = vec![join(&title)];
    let with_sep = |row: &[String], sep: &str| -> Vec<String> {
        if block.kind.has_separator() {
            let mut r = row.to_vec();
            r.insert(block.n_inputs, sep.to_string());
            r
        } else {
            row.to_vec()
        }
    };
    lines.push(join(&with_sep(&block.header_row, SEPARATOR)));
    for r in &block.body {
        lines.push(join(&with_sep(r, "")));
    }
    lines.join("\n") + "\n"
}

/// Serializes a whole workbook, blocks separated by blank lines.
pub fn render_blocks(blocks: &[TableBlock]) -> String {
    blocks.iter().map(render_block).collect::<Vec<_>>().join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    const ADULT: &str = "Adult,U\nAge of Person,||,Person is Adult\n>= 18,,Yes\n< 18,,No";

    #[test]
    fn plain_split() {
        let g = parse_grid("Adult,U\nAge of Person,Person is Adult\n>= 18,Yes\n< 18,No").unwrap();
        assert_eq!(g.rows.len(), 4);
        assert!(g.rows.iter().all(|r| r.len() == 2));
        assert_eq!(g.rows[2], vec![">= 18", "Yes"]);
    }

    #[test]
    fn empty_stream_has_no_rows() {
        assert_eq!(load_grid(&b""[..]).unwrap().rows.len(), 0);
        assert_eq!(segment_blocks(&RawGrid::default()), Err(GridError::EmptyModel));
    }

    #[test]
    fn blank_rows_are_kept() {
        let g = parse_grid("a,U\n\nb,U\n").unwrap();
        assert_eq!(g.rows, vec![vec!["a", "U"], vec![""], vec!["b", "U"]]);
    }

    #[test]
    fn quoted_cells() {
        let g = parse_grid("x,\"France,Luxembourg\",\"say \"\"hi\"\"\"\r\n").unwrap();
        assert_eq!(g.rows, vec![vec!["x", "France,Luxembourg", "say \"hi\""]]);
        assert_eq!(parse_grid("a,\"open\nb"), Err(GridError::UnbalancedQuote(1)));
    }

    #[test]
    fn invalid_utf8() {
        assert!(matches!(load_grid(&[b'a', 0xff, b'b'][..]), Err(GridError::InvalidEncoding(1))));
    }

    #[test]
    fn adult_table_block() {
        let blocks = segment_blocks(&parse_grid(ADULT).unwrap()).unwrap();
        assert_eq!(blocks.len(), 1);
        let b = &blocks[0];
        assert_eq!(b.kind, BlockKind::Decision);
        assert_eq!(b.hit_policy, Some(HitPolicy::Unique));
        assert_eq!(b.body.len(), 2);
        assert_eq!((b.n_inputs, b.n_outputs), (1, 1));
        assert_eq!(b.header_row, vec!["Age of Person", "Person is Adult"]);
        assert_eq!(b.file_column(1), 3);
        assert_eq!(b.body_row(1), 4);
    }

    #[test]
    fn two_runs_two_blocks() {
        let text = format!("{ADULT}\n\nCountry borders data table\nCountry called c1,||,c1 borders c2\nBelgium,,Yes\n");
        let blocks = segment_blocks(&parse_grid(&text).unwrap()).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[1].kind, BlockKind::Data);
        assert_eq!(blocks[1].hit_policy, None);
        assert_eq!(blocks[1].origin.first_row, 6);
    }

    #[test]
    fn classification() {
        let t = |cells: &[&str]| classify_block(&cells.iter().map(|s| s.to_string()).collect::<Vec<_>>());
        assert_eq!(t(&["No two shifts per day", "E*"]), Ok((BlockKind::Constraint, Some(HitPolicy::Every))));
        assert_eq!(t(&["Adult", "U"]), Ok((BlockKind::Decision, Some(HitPolicy::Unique))));
        assert_eq!(t(&["X", "C"]), Err(GridError::CollectNotSupported(0)));
        assert!(matches!(t(&["X", "Q"]), Err(GridError::UnknownHitPolicy { .. })));
        assert!(matches!(t(&["Country data table", "U"]), Err(GridError::AmbiguousTitle { .. })));
        assert_eq!(t(&["Glossary: Relation"]), Ok((BlockKind::GlossaryRelation, None)));
        assert_eq!(t(&["Goal"]), Ok((BlockKind::Goal, None)));
        assert_eq!(t(&["Country borders Data Table"]), Ok((BlockKind::Data, None)));
    }

    #[test]
    fn spreadsheet_padding_is_trimmed_but_inner_blank_columns_rejected() {
        let g = parse_grid("Adult,U,,,\nAge,||,Adult,,\n>= 18,,Yes,,\n").unwrap();
        let b = &segment_blocks(&g).unwrap()[0];
        assert_eq!(b.header_row.len(), 2);
        let g = parse_grid("Adult,U,,\nAge,,||,Adult\n1,,,Yes\n").unwrap();
        assert!(matches!(segment_blocks(&g), Err(GridError::BlankColumn { column: 2, .. })));
    }

    #[test]
    fn default_cell_and_separator_errors() {
        let g = parse_grid("Adult,U,default=No\nAge,||,Adult\n>= 18,,Yes\n").unwrap();
        assert_eq!(segment_blocks(&g).unwrap()[0].default.as_deref(), Some("No"));
        let g = parse_grid("Adult,U\nAge,Adult\n>= 18,Yes\n").unwrap();
        assert_eq!(segment_blocks(&g), Err(GridError::MissingSeparator(2)));
        let g = parse_grid("Adult,U\nAge,||,Adult\n>= 18,x,Yes\n").unwrap();
        assert!(matches!(segment_blocks(&g), Err(GridError::SeparatorNotEmpty { row: 3, column: 2 })));
    }

    #[test]
    fn goal_block() {
        let g = parse_grid("Goal\nExecute\nget all models\n").unwrap();
        let b = &segment_blocks(&g).unwrap()[0];
        assert_eq!(b.kind, BlockKind::Goal);
        assert_eq!(b.body, vec![vec!["get all models".to_string()]]);
        let g = parse_grid("Goal\nExecute\nget all models\nget 1 models\n").unwrap();
        assert_eq!(segment_blocks(&g), Err(GridError::GoalRowCount(1)));
    }
}
