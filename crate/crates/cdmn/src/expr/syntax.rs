//! Untyped syntax of cell entries and header expressions.
//!
//! Operators must be separated from words by whitespace, so `nb of x + 1`
//! splits into the phrase `nb of x` and the literal `1`, while `-5` stays a
//! single negative literal. Parentheses group. Additive and multiplicative
//! operators may not be mixed without parentheses.

use std::fmt;

use crate::fo::{ArithOp, CmpOp};

use super::ExprError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhraseItem {
    Word(String),
    Group(SynTerm),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SynTerm {
    Int(i64),
    /// Words (and parenthesised sub-terms) resolved later against the vocabulary.
    Phrase(Vec<PhraseItem>),
    Binary(ArithOp, Box<SynTerm>, Box<SynTerm>),
}

/// A parsed cell entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellExpr {
    Irrelevant,
    Compare(CmpOp, SynTerm),
    Not(SynTerm),
    List(Vec<SynTerm>),
    Range { lo: SynTerm, lo_closed: bool, hi: SynTerm, hi_closed: bool },
    Single(SynTerm),
    YesAtom,
    NoAtom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Word(String),
    Op(ArithOp),
    Open,
    Close,
}

fn arith_op(token: &str) -> Option<ArithOp> {
    Some(match token {
        "+" => ArithOp::Add,
        "-" | "−" => ArithOp::Sub,
        "*" | "×" => ArithOp::Mul,
        "/" | "÷" => ArithOp::Div,
        _ => return None,
    })
}

fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        if let Some(op) = arith_op(chunk) {
            out.push(Token::Op(op));
            continue;
        }
        let mut word = String::new();
        for c in chunk.chars() {
            match c {
                '(' | ')' => {
                    if !word.is_empty() {
                        out.push(Token::Word(std::mem::take(&mut word)));
                    }
                    out.push(if c == '(' { Token::Open } else { Token::Close });
                }
                _ => word.push(c),
            }
        }
        if !word.is_empty() {
            out.push(Token::Word(word));
        }
    }
    out
}

fn is_additive(op: ArithOp) -> bool {
    matches!(op, ArithOp::Add | ArithOp::Sub)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn malformed(&self) -> ExprError {
        ExprError::MalformedExpression(self.text.to_string())
    }

    /// operand (op operand)*, all operators from the same precedence class.
    fn expr(&mut self) -> Result<SynTerm, ExprError> {
        let mut left = self.operand()?;
        let mut class = None;
        while let Some(Token::Op(op)) = self.tokens.get(self.pos).cloned() {
            self.pos += 1;
            match class {
                Some(c) if c != is_additive(op) => return Err(self.malformed()),
                _ => class = Some(is_additive(op)),
            }
            let right = self.operand()?;
            left = SynTerm::Binary(op, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn operand(&mut self) -> Result<SynTerm, ExprError> {
        let mut items = Vec::new();
        loop {
            match self.tokens.get(self.pos).cloned() {
                Some(Token::Word(w)) => {
                    self.pos += 1;
                    items.push(PhraseItem::Word(w));
                }
                Some(Token::Open) => {
                    self.pos += 1;
                    let inner = self.expr()?;
                    if self.tokens.get(self.pos) != Some(&Token::Close) {
                        return Err(self.malformed());
                    }
                    self.pos += 1;
                    items.push(PhraseItem::Group(inner));
                }
                _ => break,
            }
        }
        match items.len() {
            0 => Err(self.malformed()),
            1 => Ok(match items.pop().unwrap() {
                PhraseItem::Group(t) => t,
                PhraseItem::Word(w) => match w.parse::<i64>() {
                    Ok(n) => SynTerm::Int(n),
                    Err(_) => SynTerm::Phrase(vec![PhraseItem::Word(w)]),
                },
            }),
            _ => Ok(SynTerm::Phrase(items)),
        }
    }
}

/// Parses a term: phrases, integer literals, arithmetic and parentheses.
pub fn parse_term(text: &str) -> Result<SynTerm, ExprError> {
    let mut p = Parser { tokens: tokenize(text), pos: 0, text };
    let t = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.malformed());
    }
    Ok(t)
}

const COMPARISONS: [(&str, CmpOp); 10] = [
    ("<=", CmpOp::Leq),
    (">=", CmpOp::Geq),
    ("!=", CmpOp::Neq),
    ("≤", CmpOp::Leq),
    ("≥", CmpOp::Geq),
    ("≠", CmpOp::Neq),
    ("<", CmpOp::Lt),
    (">", CmpOp::Gt),
    ("==", CmpOp::Eq),
    ("=", CmpOp::Eq),
];

/// Splits at commas outside parentheses, or returns `None` on unbalanced
/// parentheses.
fn split_top_level(text: &str) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    parts.push(&text[start..]);
    Some(parts)
}

fn parse_range(text: &str) -> Result<Option<CellExpr>, ExprError> {
    let malformed = || ExprError::MalformedRange(text.to_string());
    let Some(first) = text.chars().next() else { return Ok(None) };
    let Some(last) = text.chars().last() else { return Ok(None) };
    if !matches!(first, '[' | '(' | ']') || !matches!(last, ']' | ')' | '[') || text.len() < 2 {
        return Ok(None);
    }
    let inner = &text[first.len_utf8()..text.len() - last.len_utf8()];
    if first == '(' {
        // `(a + b)` is a parenthesised term, `(a, b)` an open range.
        match split_top_level(inner) {
            Some(parts) if parts.len() == 2 => {}
            _ if inner.contains("..") => return Err(malformed()),
            _ => return Ok(None),
        }
    }
    if first == ']' || last == '[' || inner.contains("..") {
        return Err(malformed());
    }
    let parts = split_top_level(inner).ok_or_else(malformed)?;
    let [lo, hi] = parts[..] else { return Err(malformed()) };
    let lo = parse_term(lo.trim()).map_err(|_| malformed())?;
    let hi = parse_term(hi.trim()).map_err(|_| malformed())?;
    if let (SynTerm::Int(a), SynTerm::Int(b)) = (&lo, &hi) {
        if a > b {
            return Err(malformed());
        }
    }
    Ok(Some(CellExpr::Range { lo, lo_closed: first == '[', hi, hi_closed: last == ']' }))
}

/// Parses a cell entry.
pub fn parse_cell(text: &str) -> Result<CellExpr, ExprError> {
    let text = text.trim();
    match text {
        "" | "-" => return Ok(CellExpr::Irrelevant),
        "Yes" => return Ok(CellExpr::YesAtom),
        "No" => return Ok(CellExpr::NoAtom),
        _ => {}
    }
    if let Some(rest) = text.strip_prefix("Not ") {
        return Ok(CellExpr::Not(parse_term(rest.trim())?));
    }
    for (token, op) in COMPARISONS {
        if let Some(rest) = text.strip_prefix(token) {
            return Ok(CellExpr::Compare(op, parse_term(rest.trim())?));
        }
    }
    if let Some(range) = parse_range(text)? {
        return Ok(range);
    }
    let parts = split_top_level(text).ok_or_else(|| ExprError::MalformedExpression(text.to_string()))?;
    if parts.len() > 1 {
        let items = parts.iter().map(|p| parse_term(p.trim())).collect::<Result<_, _>>()?;
        return Ok(CellExpr::List(items));
    }
    Ok(CellExpr::Single(parse_term(text)?))
}

impl SynTerm {
    /// The words of a plain phrase without groups, joined by spaces.
    pub fn plain_words(&self) -> Option<String> {
        match self {
            SynTerm::Phrase(items) => items
                .iter()
                .map(|i| match i {
                    PhraseItem::Word(w) => Some(w.as_str()),
                    PhraseItem::Group(_) => None,
                })
                .collect::<Option<Vec<_>>>()
                .map(|w| w.join(" ")),
            _ => None,
        }
    }
}

impl fmt::Display for SynTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynTerm::Int(n) => write!(f, "{n}"),
            SynTerm::Phrase(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    match item {
                        PhraseItem::Word(w) => f.write_str(w)?,
                        PhraseItem::Group(t) => write!(f, "({t})")?,
                    }
                }
                Ok(())
            }
            SynTerm::Binary(op, l, r) => {
                let side = |t: &SynTerm| match t {
                    SynTerm::Binary(..) => format!("({t})"),
                    _ => t.to_string(),
                };
                write!(f, "{} {op} {}", side(l), side(r))
            }
        }
    }
}

impl fmt::Display for CellExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellExpr::Irrelevant => f.write_str("-"),
            CellExpr::Compare(op, t) => write!(f, "{op} {t}"),
            CellExpr::Not(t) => write!(f, "Not {t}"),
            CellExpr::List(items) => {
                let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join(", "))
            }
            CellExpr::Range { lo, lo_closed, hi, hi_closed } => {
                let open = if *lo_closed { '[' } else { '(' };
                let close = if *hi_closed { ']' } else { ')' };
                write!(f, "{open}{lo}, {hi}{close}")
            }
            CellExpr::Single(t) => write!(f, "{t}"),
            CellExpr::YesAtom => f.write_str("Yes"),
            CellExpr::NoAtom => f.write_str("No"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(w: &str) -> SynTerm {
        SynTerm::Phrase(vec![PhraseItem::Word(w.into())])
    }

    #[test]
    fn comparisons_in_both_spellings() {
        assert_eq!(parse_cell("≥ 18"), Ok(CellExpr::Compare(CmpOp::Geq, SynTerm::Int(18))));
        assert_eq!(parse_cell(">= 18"), Ok(CellExpr::Compare(CmpOp::Geq, SynTerm::Int(18))));
        assert_eq!(parse_cell("<18"), Ok(CellExpr::Compare(CmpOp::Lt, SynTerm::Int(18))));
        assert_eq!(parse_cell("!= Red"), Ok(CellExpr::Compare(CmpOp::Neq, word("Red"))));
    }

    #[test]
    fn simple_forms() {
        assert_eq!(parse_cell("-"), Ok(CellExpr::Irrelevant));
        assert_eq!(parse_cell("  "), Ok(CellExpr::Irrelevant));
        assert_eq!(parse_cell("Not Red"), Ok(CellExpr::Not(word("Red"))));
        assert_eq!(parse_cell("Yes"), Ok(CellExpr::YesAtom));
        assert_eq!(parse_cell("-5"), Ok(CellExpr::Single(SynTerm::Int(-5))));
        assert_eq!(parse_cell("Red, Blue"), Ok(CellExpr::List(vec![word("Red"), word("Blue")])));
    }

    #[test]
    fn ranges() {
        assert_eq!(
            parse_cell("[0, 10)"),
            Ok(CellExpr::Range { lo: SynTerm::Int(0), lo_closed: true, hi: SynTerm::Int(10), hi_closed: false })
        );
        assert_eq!(
            parse_cell("(1, 2]"),
            Ok(CellExpr::Range { lo: SynTerm::Int(1), lo_closed: false, hi: SynTerm::Int(2), hi_closed: true })
        );
        assert!(matches!(parse_cell("[0..10]"), Err(ExprError::MalformedRange(_))));
        assert!(matches!(parse_cell("]0, 10["), Err(ExprError::MalformedRange(_))));
        assert!(matches!(parse_cell("[10, 0]"), Err(ExprError::MalformedRange(_))));
        assert!(matches!(parse_cell("[10]"), Err(ExprError::MalformedRange(_))));
    }

    #[test]
    fn parenthesised_term_is_not_a_range() {
        let t = parse_cell("(a + 1) * 2").unwrap();
        assert_eq!(t.to_string(), "(a + 1) * 2");
        assert_eq!(parse_cell("(a + 1)").unwrap(), CellExpr::Single(parse_term("a + 1").unwrap()));
    }

    #[test]
    fn arithmetic_and_phrases() {
        let t = parse_term("nb nights of Doctor + 1").unwrap();
        assert_eq!(
            t,
            SynTerm::Binary(
                ArithOp::Add,
                Box::new(SynTerm::Phrase(
                    ["nb", "nights", "of", "Doctor"].iter().map(|w| PhraseItem::Word(w.to_string())).collect()
                )),
                Box::new(SynTerm::Int(1)),
            )
        );
        assert!(matches!(parse_term("a + b * c"), Err(ExprError::MalformedExpression(_))));
        assert!(parse_term("a + (b * c)").is_ok());
        assert!(matches!(parse_term("a +"), Err(ExprError::MalformedExpression(_))));
        assert!(matches!(parse_term("(a"), Err(ExprError::MalformedExpression(_))));
        let nested = parse_term("price of (spouse of p)").unwrap();
        assert_eq!(nested.to_string(), "price of (spouse of p)");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn syn_term() -> impl Strategy<Value = SynTerm> {
            let leaf = prop_oneof![
                (-50i64..50).prop_map(SynTerm::Int),
                proptest::collection::vec("[a-z]{1,5}", 1..4)
                    .prop_map(|ws| SynTerm::Phrase(ws.into_iter().map(PhraseItem::Word).collect())),
            ];
            leaf.prop_recursive(3, 12, 3, |inner| {
                prop_oneof![
                    (
                        prop_oneof![Just(ArithOp::Add), Just(ArithOp::Sub), Just(ArithOp::Mul), Just(ArithOp::Div)],
                        inner.clone(),
                        inner.clone()
                    )
                        .prop_map(|(op, l, r)| SynTerm::Binary(op, Box::new(l), Box::new(r))),
                    ("[a-z]{1,5}", inner).prop_map(|(w, t)| SynTerm::Phrase(vec![
                        PhraseItem::Word(w),
                        PhraseItem::Group(t)
                    ])),
                ]
            })
        }

        fn cell() -> impl Strategy<Value = CellExpr> {
            let op = prop_oneof![
                Just(CmpOp::Eq),
                Just(CmpOp::Neq),
                Just(CmpOp::Lt),
                Just(CmpOp::Leq),
                Just(CmpOp::Gt),
                Just(CmpOp::Geq)
            ];
            prop_oneof![
                Just(CellExpr::Irrelevant),
                Just(CellExpr::YesAtom),
                Just(CellExpr::NoAtom),
                (op, syn_term()).prop_map(|(o, t)| CellExpr::Compare(o, t)),
                syn_term().prop_map(CellExpr::Not),
                proptest::collection::vec(syn_term(), 2..4).prop_map(CellExpr::List),
                (any::<bool>(), -20i64..0, any::<bool>(), 0i64..20).prop_map(|(lc, lo, hc, hi)| CellExpr::Range {
                    lo: SynTerm::Int(lo),
                    lo_closed: lc,
                    hi: SynTerm::Int(hi),
                    hi_closed: hc,
                }),
                syn_term().prop_map(CellExpr::Single),
            ]
        }

        proptest! {
            #[test]
            fn render_then_parse_is_identity(c in cell()) {
                let rendered = c.to_string();
                prop_assert_eq!(parse_cell(&rendered), Ok(c), "rendered as {}", rendered);
            }
        }
    }
}
