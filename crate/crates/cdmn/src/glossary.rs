//! The typed vocabulary declared by the glossary tables.
//!
//! Symbol descriptions have no fixed syntax: every whitespace-separated
//! token equal to a declared type name (case-sensitive) is an argument slot,
//! the remaining words name the symbol. `nb nights of Doctor` is a unary
//! function named `nb_nights_of_Doctor` internally.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::fo::Value;
use crate::grid::{BlockKind, TableBlock};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlossaryError {
    #[error("no Type glossary table")]
    MissingTypeTable,
    #[error("more than one {0:?} table")]
    DuplicateGlossaryTable(BlockKind),
    #[error("unexpected glossary header `{0}`")]
    BadHeader(String),
    #[error("type name `{0}` must start with an uppercase letter")]
    InvalidTypeName(String),
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("malformed type values `{0}`")]
    MalformedValues(String),
    #[error("relation `{0}` has no argument types")]
    NoArguments(String),
    #[error("`{0}` has no name words besides its argument types")]
    NoNameWords(String),
    #[error("symbol `{0}` is declared twice")]
    DuplicateSymbol(String),
    #[error("domain element `{element}` belongs to both `{first}` and `{second}`")]
    ClashingDomainElement { element: String, first: String, second: String },
    #[error("domain element `{0}` collides with a declared symbol")]
    ElementShadowsSymbol(String),
    #[error("`{0}` matches no symbol of the vocabulary")]
    UnresolvedSymbol(String),
    #[error("`{phrase}` matches both `{first}` and `{second}`")]
    AmbiguousMatch { phrase: String, first: String, second: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDecl {
    pub name: String,
    /// Domain from the glossary, or inferred from data tables later.
    pub domain: Option<Vec<Value>>,
    /// Whether the domain was enumerated in the glossary.
    pub declared: bool,
    pub is_numeric: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TemplateToken {
    Word(String),
    /// Index into `arg_types`.
    Slot(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Function,
    Constant,
    Relation,
    Boolean,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    /// Internal name: template words and slot type names joined by `_`.
    pub name: String,
    pub template: Vec<TemplateToken>,
    pub arg_types: Vec<String>,
    pub result_type: Option<String>,
    pub kind: SymbolKind,
}

impl Signature {
    pub fn arity(&self) -> usize {
        self.arg_types.len()
    }

    pub fn is_predicate(&self) -> bool {
        matches!(self.kind, SymbolKind::Relation | SymbolKind::Boolean)
    }

    /// Template with `_` in place of each slot, e.g. `nb nights of _`.
    pub fn template_key(&self) -> String {
        self.template
            .iter()
            .map(|t| match t {
                TemplateToken::Word(w) => w.as_str(),
                TemplateToken::Slot(_) => "_",
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Description with slots filled by their type names.
    pub fn render(&self) -> String {
        self.template
            .iter()
            .map(|t| match t {
                TemplateToken::Word(w) => w.as_str(),
                TemplateToken::Slot(i) => self.arg_types[*i].as_str(),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn word_count(&self) -> usize {
        self.template.iter().filter(|t| matches!(t, TemplateToken::Word(_))).count()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name, self.arg_types.join(", "))?;
        if let Some(r) = &self.result_type {
            write!(f, " -> {r}")?;
        }
        Ok(())
    }
}

/// Splits a description into words and argument slots.
pub fn parse_signature(description: &str, type_names: &BTreeSet<String>) -> Signature {
    let mut template = Vec::new();
    let mut arg_types = Vec::new();
    let mut name_parts = Vec::new();
    for token in description.split_whitespace() {
        name_parts.push(token);
        if type_names.contains(token) {
            template.push(TemplateToken::Slot(arg_types.len()));
            arg_types.push(token.to_string());
        } else {
            template.push(TemplateToken::Word(token.to_string()));
        }
    }
    Signature {
        name: name_parts.join("_"),
        template,
        arg_types,
        result_type: None,
        kind: SymbolKind::Relation,
    }
}

/// Canonical name of a phrase used as a whole (constants, booleans).
pub fn canonical_name(phrase: &str) -> String {
    phrase.split_whitespace().collect::<Vec<_>>().join("_")
}

/// Outcome of resolving a phrase against the vocabulary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Resolution<'v> {
    /// A symbol; `args` holds the half-open item ranges filling each slot.
    Symbol { sig: &'v Signature, args: Vec<(usize, usize)> },
    Element { value: Value, ty: &'v str },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub types: BTreeMap<String, TypeDecl>,
    pub symbols: BTreeMap<String, Signature>,
    /// Symbolic domain element name -> its type.
    pub auto_constants: BTreeMap<String, String>,
}

impl Vocabulary {
    pub fn type_names(&self) -> BTreeSet<String> {
        self.types.keys().cloned().collect()
    }

    pub fn symbol(&self, name: &str) -> Option<&Signature> {
        self.symbols.get(name)
    }

    pub fn is_numeric(&self, ty: &str) -> bool {
        self.types.get(ty).is_some_and(|t| t.is_numeric)
    }

    pub fn domain(&self, ty: &str) -> Option<&[Value]> {
        self.types.get(ty).and_then(|t| t.domain.as_deref())
    }

    pub fn symbols_of(&self, kind: SymbolKind) -> impl Iterator<Item = &Signature> {
        self.symbols.values().filter(move |s| s.kind == kind)
    }

    fn add_symbol(&mut self, sig: Signature) -> Result<(), GlossaryError> {
        let dup = self.symbols.contains_key(&sig.name)
            || self.auto_constants.contains_key(&sig.name)
            || (!sig.arg_types.is_empty()
                && self
                    .symbols
                    .values()
                    .any(|s| !s.arg_types.is_empty() && s.template_key() == sig.template_key()));
        if dup {
            return Err(GlossaryError::DuplicateSymbol(sig.render()));
        }
        self.symbols.insert(sig.name.clone(), sig);
        Ok(())
    }

    /// Sets the domain of a type (declared or inferred from data) and
    /// registers an auto-constant for every symbolic element.
    pub fn set_domain(&mut self, ty: &str, values: Vec<Value>) -> Result<(), GlossaryError> {
        for v in &values {
            if let Value::Elem(e) = v {
                if let Some(first) = self.auto_constants.get(e) {
                    if first != ty {
                        return Err(GlossaryError::ClashingDomainElement {
                            element: e.clone(),
                            first: first.clone(),
                            second: ty.to_string(),
                        });
                    }
                }
                if self.symbols.contains_key(e) {
                    return Err(GlossaryError::ElementShadowsSymbol(e.clone()));
                }
            }
        }
        for v in &values {
            if let Value::Elem(e) = v {
                self.auto_constants.insert(e.clone(), ty.to_string());
            }
        }
        let decl = self.types.get_mut(ty).ok_or_else(|| GlossaryError::UnknownType(ty.to_string()))?;
        if !decl.declared {
            decl.is_numeric = !values.is_empty() && values.iter().all(|v| matches!(v, Value::Int(_)));
        }
        decl.domain = Some(values);
        Ok(())
    }

    /// Resolves a phrase given as plain text (words separated by whitespace).
    pub fn resolve_symbol(&self, phrase: &str) -> Result<(&Signature, Vec<String>), GlossaryError> {
        let words: Vec<&str> = phrase.split_whitespace().collect();
        let items: Vec<Option<&str>> = words.iter().map(|w| Some(*w)).collect();
        match self.resolve_items(&items, phrase)? {
            Resolution::Symbol { sig, args } => {
                Ok((sig, args.iter().map(|(a, b)| words[*a..*b].join(" ")).collect()))
            }
            Resolution::Element { .. } => Err(GlossaryError::UnresolvedSymbol(phrase.to_string())),
        }
    }

    /// Resolves a phrase of items (`None` marks a parenthesised group, which
    /// only a slot may absorb). Whole-phrase constants and booleans win over
    /// templates; among templates the one with the most words wins.
    pub fn resolve_items(&self, items: &[Option<&str>], phrase: &str) -> Result<Resolution<'_>, GlossaryError> {
        if items.iter().all(Option::is_some) {
            let joined = items.iter().map(|w| w.unwrap()).collect::<Vec<_>>().join("_");
            if let Some(sig) = self.symbols.get(&joined) {
                if sig.arg_types.is_empty() {
                    return Ok(Resolution::Symbol { sig, args: Vec::new() });
                }
            }
            if let [Some(word)] = items {
                if let Some(ty) = self.auto_constants.get(*word) {
                    return Ok(Resolution::Element { value: Value::elem(*word), ty });
                }
            }
        }
        let mut best: Option<(&Signature, Vec<(usize, usize)>)> = None;
        for sig in self.symbols.values().filter(|s| !s.arg_types.is_empty()) {
            let Some(args) = match_template(&sig.template, items) else { continue };
            match &best {
                Some((b, _)) if b.word_count() > sig.word_count() => {}
                Some((b, _)) if b.word_count() == sig.word_count() => {
                    return Err(GlossaryError::AmbiguousMatch {
                        phrase: phrase.to_string(),
                        first: b.name.clone(),
                        second: sig.name.clone(),
                    })
                }
                _ => best = Some((sig, args)),
            }
        }
        best.map(|(sig, args)| Resolution::Symbol { sig, args })
            .ok_or_else(|| GlossaryError::UnresolvedSymbol(phrase.to_string()))
    }
}

/// Aligns template words with items; each slot captures one or more items,
/// earlier slots as many as possible.
fn match_template(template: &[TemplateToken], items: &[Option<&str>]) -> Option<Vec<(usize, usize)>> {
    fn go(t: &[TemplateToken], items: &[Option<&str>], pos: usize, out: &mut Vec<(usize, usize)>) -> bool {
        let Some((first, rest)) = t.split_first() else {
            return pos == items.len();
        };
        match first {
            TemplateToken::Word(w) => items.get(pos) == Some(&Some(w.as_str())) && go(rest, items, pos + 1, out),
            TemplateToken::Slot(_) => {
                let min_rest = rest.len();
                let max_end = items.len().saturating_sub(min_rest);
                for end in (pos + 1..=max_end).rev() {
                    out.push((pos, end));
                    if go(rest, items, end, out) {
                        return true;
                    }
                    out.pop();
                }
                false
            }
        }
    }
    let mut out = Vec::new();
    go(template, items, 0, &mut out).then_some(out)
}

fn column_index(block: &TableBlock, name: &str) -> Option<usize> {
    block.header_row.iter().position(|h| h.eq_ignore_ascii_case(name))
}

fn check_header(block: &TableBlock, allowed: &[&str]) -> Result<()> {
    for (j, h) in block.header_row.iter().enumerate() {
        if !allowed.iter().any(|a| h.eq_ignore_ascii_case(a)) {
            return Err(Error::from(GlossaryError::BadHeader(h.clone())).at(
                &block.name,
                block.header_file_row(),
                Some(block.file_column(j)),
            ));
        }
    }
    if column_index(block, "Name").is_none() {
        return Err(Error::from(GlossaryError::BadHeader(block.header_row.join(", "))).at(
            &block.name,
            block.header_file_row(),
            None,
        ));
    }
    Ok(())
}

/// Parses the `Values` cell of the Type table: a list or `[a..b]`.
fn parse_values(text: &str, kind: &str) -> Result<Option<(Vec<Value>, bool)>, GlossaryError> {
    let text = text.trim();
    let malformed = || GlossaryError::MalformedValues(text.to_string());
    let numeric_kind = match kind.to_ascii_lowercase().as_str() {
        "" => None,
        "int" | "integer" => Some(true),
        "string" => Some(false),
        _ => return Err(GlossaryError::MalformedValues(format!("unsupported type kind `{kind}`"))),
    };
    if text.is_empty() {
        return Ok(None);
    }
    if let Some(inner) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let (lo, hi) = inner.split_once("..").ok_or_else(malformed)?;
        let lo: i64 = lo.trim().parse().map_err(|_| malformed())?;
        let hi: i64 = hi.trim().parse().map_err(|_| malformed())?;
        if lo > hi || numeric_kind == Some(false) {
            return Err(malformed());
        }
        return Ok(Some(((lo..=hi).map(Value::Int).collect(), true)));
    }
    let mut values = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() || item.contains(char::is_whitespace) {
            return Err(malformed());
        }
        let v = item.parse::<i64>().map(Value::Int).unwrap_or_else(|_| Value::elem(item));
        if values.contains(&v) {
            return Err(malformed());
        }
        values.push(v);
    }
    let all_int = values.iter().all(|v| matches!(v, Value::Int(_)));
    if numeric_kind == Some(true) && !all_int {
        return Err(malformed());
    }
    Ok(Some((values, all_int && numeric_kind != Some(false))))
}

/// Builds the vocabulary from the glossary blocks.
pub fn build_vocabulary(glossary_blocks: &[&TableBlock]) -> Result<Vocabulary> {
    let mut by_kind: BTreeMap<BlockKind, &TableBlock> = BTreeMap::new();
    for b in glossary_blocks {
        if by_kind.insert(b.kind, b).is_some() {
            return Err(Error::from(GlossaryError::DuplicateGlossaryTable(b.kind)).at(&b.name, b.origin.first_row, None));
        }
    }
    let type_block = by_kind.get(&BlockKind::GlossaryType).ok_or(GlossaryError::MissingTypeTable)?;
    let mut vocab = Vocabulary::default();

    check_header(type_block, &["Name", "Type", "Values"])?;
    let name_col = column_index(type_block, "Name").unwrap();
    let kind_col = column_index(type_block, "Type");
    let values_col = column_index(type_block, "Values");
    let mut declared = Vec::new();
    for (i, row) in type_block.body.iter().enumerate() {
        let at = |e: GlossaryError, col: usize| Error::from(e).at(&type_block.name, type_block.body_row(i), Some(type_block.file_column(col)));
        let name = row[name_col].trim().to_string();
        if name.is_empty() {
            continue;
        }
        if !name.starts_with(|c: char| c.is_uppercase()) || name.contains(char::is_whitespace) {
            return Err(at(GlossaryError::InvalidTypeName(name), name_col));
        }
        if vocab.types.contains_key(&name) {
            return Err(at(GlossaryError::DuplicateSymbol(name), name_col));
        }
        let kind = kind_col.map(|c| row[c].as_str()).unwrap_or("");
        let values = values_col.map(|c| row[c].as_str()).unwrap_or("");
        let parsed = parse_values(values, kind).map_err(|e| at(e, values_col.or(kind_col).unwrap_or(name_col)))?;
        let is_numeric = match &parsed {
            Some((_, numeric)) => *numeric,
            None => kind.eq_ignore_ascii_case("int") || kind.eq_ignore_ascii_case("integer"),
        };
        vocab.types.insert(
            name.clone(),
            TypeDecl { name: name.clone(), domain: None, declared: parsed.is_some(), is_numeric },
        );
        if let Some((values, _)) = parsed {
            declared.push((name, values, type_block.body_row(i)));
        }
    }
    let type_names = vocab.type_names();

    let specs = [
        (BlockKind::GlossaryFunction, SymbolKind::Function, &["Name", "Type"][..]),
        (BlockKind::GlossaryConstant, SymbolKind::Constant, &["Name", "Type"][..]),
        (BlockKind::GlossaryRelation, SymbolKind::Relation, &["Name"][..]),
        (BlockKind::GlossaryBoolean, SymbolKind::Boolean, &["Name"][..]),
    ];
    for (block_kind, kind, header) in specs {
        let Some(block) = by_kind.get(&block_kind) else { continue };
        check_header(block, header)?;
        let name_col = column_index(block, "Name").unwrap();
        let type_col = column_index(block, "Type");
        if header.len() == 2 && type_col.is_none() {
            return Err(Error::from(GlossaryError::BadHeader(block.header_row.join(", "))).at(
                &block.name,
                block.header_file_row(),
                None,
            ));
        }
        for (i, row) in block.body.iter().enumerate() {
            let at = |e: GlossaryError, col: usize| Error::from(e).at(&block.name, block.body_row(i), Some(block.file_column(col)));
            let description = row[name_col].trim();
            if description.is_empty() {
                continue;
            }
            let result_type = match type_col {
                Some(c) => {
                    let t = row[c].trim();
                    if !type_names.contains(t) {
                        return Err(at(GlossaryError::UnknownType(t.to_string()), c));
                    }
                    Some(t.to_string())
                }
                None => None,
            };
            let mut sig = match kind {
                SymbolKind::Function | SymbolKind::Relation => parse_signature(description, &type_names),
                SymbolKind::Constant | SymbolKind::Boolean => Signature {
                    name: canonical_name(description),
                    template: description.split_whitespace().map(|w| TemplateToken::Word(w.to_string())).collect(),
                    arg_types: Vec::new(),
                    result_type: None,
                    kind,
                },
            };
            sig.result_type = result_type;
            sig.kind = match kind {
                // A function without arguments is a constant.
                SymbolKind::Function if sig.arg_types.is_empty() => SymbolKind::Constant,
                k => k,
            };
            if kind == SymbolKind::Relation && sig.arg_types.is_empty() {
                return Err(at(GlossaryError::NoArguments(description.to_string()), name_col));
            }
            if !sig.arg_types.is_empty() && sig.word_count() == 0 {
                return Err(at(GlossaryError::NoNameWords(description.to_string()), name_col));
            }
            vocab.add_symbol(sig).map_err(|e| at(e, name_col))?;
        }
    }

    for (ty, values, row) in declared {
        vocab.set_domain(&ty, values).map_err(|e| Error::from(e).at(&type_block.name, row, None))?;
    }
    Ok(vocab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{parse_grid, segment_blocks};

    fn names(list: &[&str]) -> BTreeSet<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    pub(crate) const DOCTOR_GLOSSARY: &str = "\
Glossary Type
Name,Type,Values
Doctor,String,\"Fleming, Freud, Heimlich, Eustachi, Golgi\"
Day,String,\"d1, d2\"
Time,String,\"Morning, Night\"
Number,Int,[0..7]

Glossary Function
Name,Type
nb nights of Doctor,Number
nb shifts of Doctor on Day,Number
present doctor on Day at Time,Doctor

Glossary Constant
Name,Type
Head,Doctor

Glossary Relation
Name
Doctor is on leave
Doctor is available on Day at Time

Glossary Boolean
Name
Complete
";

    fn doctor_vocab() -> Vocabulary {
        let blocks = segment_blocks(&parse_grid(DOCTOR_GLOSSARY).unwrap()).unwrap();
        build_vocabulary(&blocks.iter().collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn signature_slots() {
        let types = names(&["Doctor", "Day", "Time", "Number"]);
        let s = parse_signature("nb nights of Doctor", &types);
        assert_eq!(s.template_key(), "nb nights of _");
        assert_eq!(s.arg_types, vec!["Doctor"]);
        assert_eq!(s.name, "nb_nights_of_Doctor");
        let s = parse_signature("present doctor on Day at Time", &types);
        assert_eq!(s.arg_types, vec!["Day", "Time"]);
        let s = parse_signature("Doctor is available on Day at Time", &types);
        assert_eq!(s.arg_types, vec!["Doctor", "Day", "Time"]);
        assert_eq!(s.render(), "Doctor is available on Day at Time");
    }

    #[test]
    fn doctor_planning_glossary() {
        let v = doctor_vocab();
        assert_eq!(v.type_names(), names(&["Day", "Doctor", "Number", "Time"]));
        let f = v.symbol("nb_nights_of_Doctor").unwrap();
        assert_eq!((f.kind, f.arg_types.clone(), f.result_type.as_deref()), (SymbolKind::Function, vec!["Doctor".to_string()], Some("Number")));
        let head = v.symbol("Head").unwrap();
        assert_eq!((head.kind, head.result_type.as_deref()), (SymbolKind::Constant, Some("Doctor")));
        let leave = v.symbol("Doctor_is_on_leave").unwrap();
        assert_eq!((leave.kind, leave.arity()), (SymbolKind::Relation, 1));
        assert_eq!(v.symbol("Complete").unwrap().kind, SymbolKind::Boolean);
        assert_eq!(v.auto_constants.get("Fleming").map(String::as_str), Some("Doctor"));
        assert!(v.is_numeric("Number"));
        assert_eq!(v.domain("Number").unwrap().len(), 8);
    }

    #[test]
    fn resolution() {
        let v = doctor_vocab();
        let (sig, args) = v.resolve_symbol("nb shifts of Golgi on d2").unwrap();
        assert_eq!(sig.name, "nb_shifts_of_Doctor_on_Day");
        assert_eq!(args, vec!["Golgi", "d2"]);
        let (sig, args) = v.resolve_symbol("Head").unwrap();
        assert_eq!((sig.name.as_str(), args.len()), ("Head", 0));
        assert_eq!(v.resolve_symbol("nonsense phrase"), Err(GlossaryError::UnresolvedSymbol("nonsense phrase".into())));
        for (e, ty) in &v.auto_constants {
            let items = [Some(e.as_str())];
            assert_eq!(v.resolve_items(&items, e), Ok(Resolution::Element { value: Value::elem(e), ty }));
        }
    }

    #[test]
    fn minimal_glossary_and_errors() {
        let build = |text: &str| {
            let blocks = segment_blocks(&parse_grid(text).unwrap()).unwrap();
            build_vocabulary(&blocks.iter().collect::<Vec<_>>())
        };
        let v = build("Glossary Type\nName,Type,Values\nColor,String,\"Red, Green\"\n").unwrap();
        assert!(v.symbols.is_empty());
        let err = build("Glossary Type\nName,Type,Values\nColor,String,Red\n\nGlossary Function\nName,Type\ncolor of Country,Color\n");
        assert!(err.is_ok(), "Country is not a type, so this is a constant");
        let err = build("Glossary Type\nName,Type,Values\nColor,String,Red\n\nGlossary Function\nName,Type\ncolor of Color,Shade\n").unwrap_err();
        assert_eq!(err.kind(), &Error::Glossary(GlossaryError::UnknownType("Shade".into())));
        let err = build("Glossary Type\nName,Type,Values\nA,String,x\nB,String,x\n").unwrap_err();
        assert!(matches!(err.kind(), Error::Glossary(GlossaryError::ClashingDomainElement { .. })));
        let err = build("Glossary Type\nName,Type,Values\nColor,String,Red\n\nGlossary Relation\nName\nit rains\n").unwrap_err();
        assert!(matches!(err.kind(), Error::Glossary(GlossaryError::NoArguments(_))));
        let err = build("Glossary Relation\nName\nit rains\n").unwrap_err();
        assert_eq!(err.kind(), &Error::Glossary(GlossaryError::MissingTypeTable));
        let err = build("Glossary Type\nName,Type,Values\nColor,String,Red\n\nGlossary Function\nName,Type\nshade of Color,Color\nshade of Color,Color\n").unwrap_err();
        assert!(matches!(err.kind(), Error::Glossary(GlossaryError::DuplicateSymbol(_))));
        let err = build("Glossary Type\nName,Type,Values\ncolor,String,Red\n").unwrap_err();
        assert!(matches!(err.kind(), Error::Glossary(GlossaryError::InvalidTypeName(_))));
    }

    #[test]
    fn repeated_type_gives_positional_slots() {
        let types = names(&["Country"]);
        let s = parse_signature("distance from Country to Country", &types);
        assert_eq!(s.arg_types, vec!["Country", "Country"]);
    }

    #[test]
    fn longest_template_wins() {
        let text = "Glossary Type\nName,Type,Values\nP,String,\"a, b\"\n\nGlossary Relation\nName\nP likes P\nP likes P a lot\n";
        let blocks = segment_blocks(&parse_grid(text).unwrap()).unwrap();
        let v = build_vocabulary(&blocks.iter().collect::<Vec<_>>()).unwrap();
        let (sig, args) = v.resolve_symbol("a likes b a lot").unwrap();
        assert_eq!((sig.name.as_str(), args), ("P_likes_P_a_lot", vec!["a".to_string(), "b".to_string()]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn signature_render_roundtrip(words in proptest::collection::vec(prop_oneof![
                Just("Doctor".to_string()), Just("Day".to_string()), "[a-z]{1,6}"
            ], 1..6)) {
                let types = names(&["Doctor", "Day"]);
                let desc = words.join("  ");
                let sig = parse_signature(&desc, &types);
                prop_assert_eq!(sig.render(), words.join(" "));
                prop_assert_eq!(sig.arity(), words.iter().filter(|w| types.contains(*w)).count());
            }
        }
    }
}
