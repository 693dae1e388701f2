//! Typed resolution of header expressions and cell terms.

use std::fmt;

use crate::fo::{ArithOp, Formula, Term, Value, Var};
use crate::glossary::{GlossaryError, Resolution, SymbolKind, Vocabulary};

use super::syntax::{parse_term, PhraseItem, SynTerm};
use super::ExprError;

/// Static type of a term: a declared type, or an anonymous integer.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExprType {
    Named(String),
    Int,
}

impl fmt::Display for ExprType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprType::Named(t) => f.write_str(t),
            ExprType::Int => f.write_str("an integer"),
        }
    }
}

impl ExprType {
    pub fn is_numeric(&self, vocab: &Vocabulary) -> bool {
        match self {
            ExprType::Int => true,
            ExprType::Named(t) => vocab.is_numeric(t),
        }
    }

    /// Whether values of `self` and `other` may be compared for equality.
    pub fn compatible(&self, other: &ExprType, vocab: &Vocabulary) -> bool {
        match (self, other) {
            (ExprType::Named(a), ExprType::Named(b)) if a == b => true,
            _ => self.is_numeric(vocab) && other.is_numeric(vocab),
        }
    }
}

/// A resolved header (or cell) expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeaderExpr {
    /// A bare type name introducing a fresh variable.
    TypeVar(Var),
    /// `Type called name`.
    NamedVar(Var),
    /// A later use of an introduced variable.
    VarRef(Var),
    Const { symbol: String, ty: String },
    Literal(Value, ExprType),
    Arith(ArithOp, Box<HeaderExpr>, Box<HeaderExpr>),
    FuncApp { symbol: String, args: Vec<HeaderExpr>, ty: String },
    RelApp { symbol: String, args: Vec<HeaderExpr> },
    Prop(String),
    /// `#Type`, the number of elements of the type.
    CountOfType(String),
}

impl HeaderExpr {
    pub fn is_atom(&self) -> bool {
        matches!(self, HeaderExpr::RelApp { .. } | HeaderExpr::Prop(_))
    }

    pub fn introduced(&self) -> Option<&Var> {
        match self {
            HeaderExpr::TypeVar(v) | HeaderExpr::NamedVar(v) => Some(v),
            _ => None,
        }
    }

    pub fn ty(&self) -> Option<ExprType> {
        Some(match self {
            HeaderExpr::TypeVar(v) | HeaderExpr::NamedVar(v) | HeaderExpr::VarRef(v) => ExprType::Named(v.ty.clone()),
            HeaderExpr::Const { ty, .. } | HeaderExpr::FuncApp { ty, .. } => ExprType::Named(ty.clone()),
            HeaderExpr::Literal(_, ty) => ty.clone(),
            HeaderExpr::Arith(..) | HeaderExpr::CountOfType(_) => ExprType::Int,
            HeaderExpr::RelApp { .. } | HeaderExpr::Prop(_) => return None,
        })
    }

    /// The symbol a header applies at top level, if any.
    pub fn symbol(&self) -> Option<&str> {
        match self {
            HeaderExpr::Const { symbol, .. }
            | HeaderExpr::FuncApp { symbol, .. }
            | HeaderExpr::RelApp { symbol, .. }
            | HeaderExpr::Prop(symbol) => Some(symbol),
            _ => None,
        }
    }

    /// The logical term denoted by a term-denoting expression.
    pub fn term(&self) -> Option<Term> {
        Some(match self {
            HeaderExpr::TypeVar(v) | HeaderExpr::NamedVar(v) | HeaderExpr::VarRef(v) => Term::var(v),
            HeaderExpr::Const { symbol, .. } => Term::constant(symbol.clone()),
            HeaderExpr::Literal(v, _) => Term::Value(v.clone()),
            HeaderExpr::Arith(op, l, r) => Term::arith(*op, l.term()?, r.term()?),
            HeaderExpr::FuncApp { symbol, args, .. } => {
                Term::app(symbol.clone(), args.iter().map(HeaderExpr::term).collect::<Option<_>>()?)
            }
            HeaderExpr::CountOfType(ty) => Term::count(vec![Var::new("x", ty.clone())], Formula::True),
            HeaderExpr::RelApp { .. } | HeaderExpr::Prop(_) => return None,
        })
    }

    /// The atom denoted by an atom-denoting expression.
    pub fn atom(&self) -> Option<Formula> {
        match self {
            HeaderExpr::RelApp { symbol, args } => Some(Formula::Pred(
                symbol.clone(),
                args.iter().map(HeaderExpr::term).collect::<Option<_>>()?,
            )),
            HeaderExpr::Prop(p) => Some(Formula::Prop(p.clone())),
            _ => None,
        }
    }
}

impl fmt::Display for HeaderExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.term(), self.atom()) {
            (Some(t), _) => write!(f, "{t}"),
            (_, Some(a)) => write!(f, "{a}"),
            _ => f.write_str("?"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct ScopeEntry {
    var: Var,
    column: usize,
    named: bool,
}

/// Variables introduced by the input columns of one table, left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Scope {
    entries: Vec<ScopeEntry>,
}

impl Scope {
    pub fn new() -> Self {
        Scope::default()
    }

    /// Introduced variables in column order.
    pub fn vars(&self) -> Vec<Var> {
        self.entries.iter().map(|e| e.var.clone()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The variable introduced by a bare type name.
    pub fn type_var(&self, ty: &str) -> Option<&Var> {
        self.entries.iter().find(|e| !e.named && e.var.ty == ty).map(|e| &e.var)
    }

    pub fn named(&self, name: &str) -> Option<&Var> {
        self.entries.iter().find(|e| e.named && e.var.name == name).map(|e| &e.var)
    }

    pub fn introducing_column(&self, var: &Var) -> Option<usize> {
        self.entries.iter().find(|e| e.var == *var).map(|e| e.column)
    }

    fn introduce(&mut self, var: Var, column: usize, named: bool) {
        self.entries.push(ScopeEntry { var, column, named });
    }
}

/// Parses the header of column `column`. Input columns may introduce
/// variables; a later bare type name or called-name refers back to them.
pub fn parse_header(
    text: &str,
    vocab: &Vocabulary,
    scope: &mut Scope,
    column: usize,
    input: bool,
) -> Result<HeaderExpr, ExprError> {
    let syn = parse_term(text)?;
    let mut r = Resolver { vocab, scope };
    r.term(&syn, input.then_some(column))
}

/// Resolves a term appearing in a cell; nothing is introduced.
pub fn resolve_term(syn: &SynTerm, vocab: &Vocabulary, scope: &Scope) -> Result<HeaderExpr, ExprError> {
    let mut scope = scope.clone();
    Resolver { vocab, scope: &mut scope }.term(syn, None)
}

struct Resolver<'a> {
    vocab: &'a Vocabulary,
    scope: &'a mut Scope,
}

fn render_items(items: &[PhraseItem]) -> String {
    SynTerm::Phrase(items.to_vec()).to_string()
}

impl Resolver<'_> {
    fn term(&mut self, syn: &SynTerm, intro: Option<usize>) -> Result<HeaderExpr, ExprError> {
        match syn {
            SynTerm::Int(n) => Ok(HeaderExpr::Literal(Value::Int(*n), ExprType::Int)),
            SynTerm::Binary(op, l, r) => {
                let l = self.term(l, None)?;
                let r = self.term(r, None)?;
                for side in [&l, &r] {
                    match side.ty() {
                        Some(t) if t.is_numeric(self.vocab) => {}
                        Some(t) => {
                            return Err(ExprError::TypeMismatch {
                                phrase: syn.to_string(),
                                expected: "a number".into(),
                                found: t.to_string(),
                            })
                        }
                        None => return Err(ExprError::AtomAsTerm(side.to_string())),
                    }
                }
                Ok(HeaderExpr::Arith(*op, Box::new(l), Box::new(r)))
            }
            SynTerm::Phrase(items) => self.phrase(items, intro),
        }
    }

    fn is_taken_name(&self, name: &str) -> bool {
        self.vocab.symbols.contains_key(name)
            || self.vocab.auto_constants.contains_key(name)
            || self.vocab.types.contains_key(name)
    }

    fn phrase(&mut self, items: &[PhraseItem], intro: Option<usize>) -> Result<HeaderExpr, ExprError> {
        let text = render_items(items);
        let words: Option<Vec<&str>> = items
            .iter()
            .map(|i| match i {
                PhraseItem::Word(w) => Some(w.as_str()),
                PhraseItem::Group(_) => None,
            })
            .collect();
        match (items, words.as_deref()) {
            ([PhraseItem::Group(inner)], _) => return self.term(inner, intro),
            (_, Some([w])) => {
                if let Some(ty) = w.strip_prefix('#').filter(|t| self.vocab.types.contains_key(*t)) {
                    return Ok(HeaderExpr::CountOfType(ty.to_string()));
                }
                if self.vocab.types.contains_key(*w) {
                    if let Some(v) = self.scope.type_var(w) {
                        return Ok(HeaderExpr::VarRef(v.clone()));
                    }
                    let Some(column) = intro else {
                        return Err(ExprError::UnboundVariable(w.to_string()));
                    };
                    let var = Var::new(*w, *w);
                    self.scope.introduce(var.clone(), column, false);
                    return Ok(HeaderExpr::TypeVar(var));
                }
                if let Some(v) = self.scope.named(w) {
                    return Ok(HeaderExpr::VarRef(v.clone()));
                }
            }
            (_, Some([ty, "called", name])) if self.vocab.types.contains_key(*ty) => {
                let Some(column) = intro else {
                    return Err(ExprError::VariableOutsideInput(text));
                };
                if let Some(v) = self.scope.named(name) {
                    if v.ty != *ty {
                        return Err(ExprError::VariableRedeclaration {
                            name: name.to_string(),
                            existing: v.ty.clone(),
                            requested: ty.to_string(),
                        });
                    }
                    return Ok(HeaderExpr::VarRef(v.clone()));
                }
                if self.is_taken_name(name) {
                    return Err(ExprError::VariableShadowsConstant(name.to_string()));
                }
                let var = Var::new(*name, *ty);
                self.scope.introduce(var.clone(), column, true);
                return Ok(HeaderExpr::NamedVar(var));
            }
            _ => {}
        }

        let opt: Vec<Option<&str>> = items
            .iter()
            .map(|i| match i {
                PhraseItem::Word(w) => Some(w.as_str()),
                PhraseItem::Group(_) => None,
            })
            .collect();
        let resolution = match self.vocab.resolve_items(&opt, &text) {
            Ok(r) => r,
            Err(GlossaryError::UnresolvedSymbol(_)) => return Err(ExprError::UnknownHeaderSymbol(text)),
            Err(e) => return Err(e.into()),
        };
        let (sig, ranges) = match resolution {
            Resolution::Element { value, ty } => return Ok(HeaderExpr::Literal(value, ExprType::Named(ty.to_string()))),
            Resolution::Symbol { sig, args } => (sig.clone(), args),
        };
        let mut args = Vec::with_capacity(ranges.len());
        for (slot, (a, b)) in ranges.into_iter().enumerate() {
            let arg = self.phrase(&items[a..b], None)?;
            let expected = ExprType::Named(sig.arg_types[slot].clone());
            match arg.ty() {
                None => return Err(ExprError::AtomAsTerm(render_items(&items[a..b]))),
                Some(found) if !found.compatible(&expected, self.vocab) => {
                    return Err(ExprError::TypeMismatch {
                        phrase: render_items(&items[a..b]),
                        expected: expected.to_string(),
                        found: found.to_string(),
                    })
                }
                Some(_) => args.push(arg),
            }
        }
        let result_ty = sig.result_type.clone().unwrap_or_default();
        Ok(match sig.kind {
            SymbolKind::Constant => HeaderExpr::Const { symbol: sig.name, ty: result_ty },
            SymbolKind::Function => HeaderExpr::FuncApp { symbol: sig.name, args, ty: result_ty },
            SymbolKind::Relation => HeaderExpr::RelApp { symbol: sig.name, args },
            SymbolKind::Boolean => HeaderExpr::Prop(sig.name),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glossary::build_vocabulary;
    use crate::grid::{parse_grid, segment_blocks};

    fn vocab(text: &str) -> Vocabulary {
        let blocks = segment_blocks(&parse_grid(text).unwrap()).unwrap();
        build_vocabulary(&blocks.iter().collect::<Vec<_>>()).unwrap()
    }

    const DOCTORS: &str = "\
Glossary Type
Name,Type,Values
Doctor,String,\"Fleming, Golgi\"
Day,String,\"d1, d2\"
Number,Int,[0..3]

Glossary Function
Name,Type
nb shifts of Doctor on Day,Number
";

    const MAP: &str = "\
Glossary Type
Name,Type,Values
Country,String,\"Belgium, France\"
Color,String,\"Red, Green\"

Glossary Function
Name,Type
color of Country,Color

Glossary Relation
Name
Country borders Country
";

    #[test]
    fn variables_then_function() {
        let v = vocab(DOCTORS);
        let mut s = Scope::new();
        let x = parse_header("Doctor", &v, &mut s, 0, true).unwrap();
        let y = parse_header("Day", &v, &mut s, 1, true).unwrap();
        let f = parse_header("nb shifts of Doctor on Day", &v, &mut s, 2, false).unwrap();
        assert_eq!(x, HeaderExpr::TypeVar(Var::new("Doctor", "Doctor")));
        assert_eq!(y, HeaderExpr::TypeVar(Var::new("Day", "Day")));
        assert_eq!(f.to_string(), "nb_shifts_of_Doctor_on_Day(Doctor, Day)");
        assert_eq!(s.vars().len(), 2);
        assert_eq!(parse_header("Doctor", &v, &mut s, 3, true).unwrap(), HeaderExpr::VarRef(Var::new("Doctor", "Doctor")));
    }

    #[test]
    fn named_variables_and_relation() {
        let v = vocab(MAP);
        let mut s = Scope::new();
        let c1 = parse_header("Country called c1", &v, &mut s, 0, true).unwrap();
        let c2 = parse_header("Country called c2", &v, &mut s, 1, true).unwrap();
        assert!(matches!(c1, HeaderExpr::NamedVar(_)) && matches!(c2, HeaderExpr::NamedVar(_)));
        let b = parse_header("c1 borders c2", &v, &mut s, 2, true).unwrap();
        assert!(b.is_atom());
        assert_eq!(b.to_string(), "Country_borders_Country(c1, c2)");
        let col = parse_header("color of c1", &v, &mut s, 3, false).unwrap();
        assert_eq!(col.to_string(), "color_of_Country(c1)");
        assert_eq!(s.introducing_column(&Var::new("c2", "Country")), Some(1));
    }

    #[test]
    fn count_of_type() {
        let v = vocab(DOCTORS);
        let h = parse_header("#Doctor", &v, &mut Scope::new(), 0, false).unwrap();
        assert_eq!(h, HeaderExpr::CountOfType("Doctor".into()));
        assert_eq!(h.to_string(), "#{x[Doctor]: true}");
    }

    #[test]
    fn header_errors() {
        let v = vocab(MAP);
        let mut s = Scope::new();
        assert!(matches!(parse_header("color of Country", &v, &mut s, 0, false), Err(ExprError::UnboundVariable(_))));
        assert!(matches!(parse_header("Country called Red", &v, &mut s, 0, true), Err(ExprError::VariableShadowsConstant(_))));
        parse_header("Country called c", &v, &mut s, 0, true).unwrap();
        assert!(matches!(parse_header("Color called c", &v, &mut s, 1, true), Err(ExprError::VariableRedeclaration { .. })));
        assert!(matches!(parse_header("Color called d", &v, &mut s, 1, false), Err(ExprError::VariableOutsideInput(_))));
        assert!(matches!(parse_header("color of Red", &v, &mut s, 1, false), Err(ExprError::TypeMismatch { .. })));
        assert!(matches!(parse_header("weight of c", &v, &mut s, 1, false), Err(ExprError::UnknownHeaderSymbol(_))));
        assert!(matches!(parse_header("(c borders c) + 1", &v, &mut s, 1, false), Err(ExprError::AtomAsTerm(_))));
    }

    #[test]
    fn elements_and_nested_terms() {
        let v = vocab(MAP);
        let h = resolve_term(&parse_term("color of Belgium").unwrap(), &v, &Scope::new()).unwrap();
        assert_eq!(h.term(), Some(Term::app("color_of_Country", vec![Term::elem("Belgium")])));
        let e = resolve_term(&parse_term("Red").unwrap(), &v, &Scope::new()).unwrap();
        assert_eq!(e, HeaderExpr::Literal(Value::elem("Red"), ExprType::Named("Color".into())));
    }
}
