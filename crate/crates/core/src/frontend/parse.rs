//! Recursive-descent parser for `.wd` documents.
//!
//! ```text
//! document   := field-decl block-decl* rep-decl
//! field-decl := "field" "q" "=" INT "psi" "=" INT
//! block-decl := "block" IDENT "{" "dim" "=" INT "a" "=" INT "dimI" "=" INT
//!               ("detPhi" "=" NUMBER)? ("eps" "=" NUMBER)? ("profile" "=" "[" pairs "]")? "}"
//! pairs      := ( "(" INT "," INT ")" ( "," "(" INT "," INT ")" )* )?
//! rep-decl   := "rep" "{" summand (";" summand)* "}"
//! summand    := "tw" "(" IDENT ")" "*" IDENT "*" "Sp" "(" INT ")"
//! ```
//!
//! A profile pair `(k, f)` is the index `[I : I_k]` together with
//! `dim V^{I_k}`; the profile starts implicitly at `dim V^I = dimI`.
//! `#` starts a comment that runs to the end of the line.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::model::gauss::{self, GaussRat};
use crate::model::{
    BlockConstant, FieldData, GaloisBlock, RamificationProfile, Summand, WDRep, TRIVIAL_BLOCK_ID,
};

use super::{Document, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Punct(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(s) => format!("integer {s}"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

impl Token {
    fn width(&self) -> usize {
        match &self.tok {
            Tok::Ident(s) | Tok::Int(s) => s.len(),
            Tok::Punct(_) => 1,
            Tok::Eof => 0,
        }
    }

    fn touches(&self, next: &Token) -> bool {
        self.line == next.line && self.col + self.width() == next.col
    }
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (start_line, start_col) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars
                .peek()
                .filter(|c| c.is_ascii_alphanumeric() || **c == '_')
            {
                s.push(c);
                chars.next();
                col += 1;
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek().filter(|c| c.is_ascii_digit()) {
                s.push(c);
                chars.next();
                col += 1;
            }
            Tok::Int(s)
        } else if "={}()[];*/+-,".contains(c) {
            chars.next();
            col += 1;
            Tok::Punct(c)
        } else {
            return Err(ParseError::Syntax {
                line: start_line,
                col: start_col,
                message: format!("unexpected character {c:?}"),
            });
        };
        tokens.push(Token {
            tok,
            line: start_line,
            col: start_col,
        });
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, at: &Token, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            line: at.line,
            col: at.col,
            message: format!("expected {expected}, found {}", at.tok.describe()),
        })
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<Token, ParseError> {
        if self.is_keyword(kw) {
            Ok(self.advance())
        } else {
            self.syntax(self.peek(), &format!("`{kw}`"))
        }
    }

    fn is_punct(&self, c: char) -> bool {
        self.peek().tok == Tok::Punct(c)
    }

    fn punct(&mut self, c: char) -> Result<Token, ParseError> {
        if self.is_punct(c) {
            Ok(self.advance())
        } else {
            self.syntax(self.peek(), &format!("`{c}`"))
        }
    }

    fn ident(&mut self) -> Result<(String, Token), ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.advance()))
            }
            _ => self.syntax(self.peek(), "an identifier"),
        }
    }

    fn uint<T: std::str::FromStr>(&mut self) -> Result<(T, Token), ParseError> {
        match &self.peek().tok {
            Tok::Int(s) => {
                let t = self.peek().clone();
                let v = s.parse().map_err(|_| ParseError::Syntax {
                    line: t.line,
                    col: t.col,
                    message: format!("integer {s} is out of range"),
                })?;
                self.advance();
                Ok((v, t))
            }
            _ => self.syntax(self.peek(), "an integer"),
        }
    }

    fn int(&mut self) -> Result<(i64, Token), ParseError> {
        let start = self.peek().clone();
        let negative = self.is_punct('-');
        if negative {
            self.advance();
        }
        let (v, _): (i64, _) = self.uint()?;
        Ok((if negative { -v } else { v }, start))
    }

    fn assign<T: std::str::FromStr>(&mut self, kw: &str) -> Result<(T, Token), ParseError> {
        self.keyword(kw)?;
        self.punct('=')?;
        self.uint()
    }

    /// Contiguous number-shaped tokens, re-assembled and parsed exactly.
    fn number(&mut self) -> Result<GaussRat, ParseError> {
        let start = self.peek().clone();
        let mut text = String::new();
        let mut prev: Option<Token> = None;
        loop {
            // NUMBER is a single lexeme: no whitespace inside
            if prev.as_ref().is_some_and(|p| !p.touches(self.peek())) {
                break;
            }
            match &self.peek().tok {
                Tok::Int(s) => text.push_str(s),
                Tok::Ident(s) if s == "i" => text.push('i'),
                Tok::Punct(c) if "/+-*".contains(*c) => text.push(*c),
                _ => break,
            }
            prev = Some(self.advance());
        }
        if text.is_empty() {
            return self.syntax(&start, "a number");
        }
        gauss::parse(&text).ok_or_else(|| ParseError::Syntax {
            line: start.line,
            col: start.col,
            message: format!("malformed number `{text}` (expected p/q or p/q+r/s*i)"),
        })
    }

    fn profile_pairs(&mut self) -> Result<Vec<(u64, u32)>, ParseError> {
        self.punct('[')?;
        let mut pairs = Vec::new();
        if !self.is_punct(']') {
            loop {
                self.punct('(')?;
                let (index, _) = self.uint()?;
                self.punct(',')?;
                let (fixed, _) = self.uint()?;
                self.punct(')')?;
                pairs.push((index, fixed));
                if self.is_punct(',') {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.punct(']')?;
        Ok(pairs)
    }
}

fn semantic(at: &Token, constraint: impl Into<String>) -> ParseError {
    ParseError::Semantic {
        line: at.line,
        col: at.col,
        constraint: constraint.into(),
    }
}

fn parse_block(p: &mut Parser) -> Result<GaloisBlock, ParseError> {
    p.keyword("block")?;
    let (id, id_tok) = p.ident()?;
    if id == TRIVIAL_BLOCK_ID {
        return Err(semantic(
            &id_tok,
            "`triv` is reserved for the trivial block",
        ));
    }
    p.punct('{')?;
    let (dim, _): (u32, _) = p.assign("dim")?;
    let (a, _): (u32, _) = p.assign("a")?;
    let (dim_i, _): (u32, _) = p.assign("dimI")?;
    let mut det_phi = BlockConstant::Symbolic;
    let mut eps = BlockConstant::Symbolic;
    let mut pairs = None;
    if p.is_keyword("detPhi") {
        p.advance();
        p.punct('=')?;
        det_phi = BlockConstant::Value(p.number()?);
    }
    if p.is_keyword("eps") {
        p.advance();
        p.punct('=')?;
        eps = BlockConstant::Value(p.number()?);
    }
    let profile_tok = p.peek().clone();
    if p.is_keyword("profile") {
        p.advance();
        p.punct('=')?;
        pairs = Some(p.profile_pairs()?);
    }
    p.punct('}')?;

    let profile = match pairs {
        None => None,
        Some(pairs) => {
            let fixed = std::iter::once(dim_i)
                .chain(pairs.iter().map(|&(_, f)| f))
                .collect();
            let indices = pairs.iter().map(|&(k, _)| k).collect();
            Some(
                RamificationProfile::new(dim, fixed, indices)
                    .map_err(|e| semantic(&profile_tok, e.to_string()))?,
            )
        }
    };
    GaloisBlock::new(id, dim, a, dim_i, det_phi, eps, profile)
        .map_err(|e| semantic(&id_tok, e.to_string()))
}

pub fn parse(text: &str) -> Result<Document, ParseError> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    p.keyword("field")?;
    let (q, q_tok): (u64, _) = p.assign("q")?;
    p.keyword("psi")?;
    p.punct('=')?;
    let (psi, _) = p.int()?;
    let field = FieldData::new(q, psi).map_err(|e| semantic(&q_tok, e.to_string()))?;

    let mut catalog: BTreeMap<String, Arc<GaloisBlock>> = BTreeMap::new();
    let mut blocks = Vec::new();
    while p.is_keyword("block") {
        let at = p.tokens[p.pos + 1].clone();
        let block = Arc::new(parse_block(&mut p)?);
        if catalog.contains_key(&block.id) {
            return Err(semantic(
                &at,
                format!("block {} is declared twice", block.id),
            ));
        }
        catalog.insert(block.id.clone(), block.clone());
        blocks.push(block);
    }
    catalog.insert(TRIVIAL_BLOCK_ID.into(), Arc::new(GaloisBlock::trivial()));

    p.keyword("rep")?;
    p.punct('{')?;
    let mut var_names: Vec<String> = Vec::new();
    let mut summands = Vec::new();
    loop {
        p.keyword("tw")?;
        p.punct('(')?;
        let (var, var_tok) = p.ident()?;
        p.punct(')')?;
        p.punct('*')?;
        let (block_id, block_tok) = p.ident()?;
        p.punct('*')?;
        p.keyword("Sp")?;
        p.punct('(')?;
        let (sp_dim, sp_tok): (u32, _) = p.uint()?;
        p.punct(')')?;

        if var_names.contains(&var) {
            return Err(semantic(&var_tok, format!("variable {var} is used twice")));
        }
        let block = catalog
            .get(&block_id)
            .ok_or_else(|| semantic(&block_tok, format!("block {block_id} is not declared")))?;
        if sp_dim == 0 {
            return Err(semantic(&sp_tok, "Sp dimension must be >= 1"));
        }
        var_names.push(var);
        summands.push(Summand {
            block: block.clone(),
            sp_dim,
            var: summands.len() + 1,
        });
        if p.is_punct(';') {
            p.advance();
        } else {
            break;
        }
    }
    p.punct('}')?;
    if p.peek().tok != Tok::Eof {
        return p.syntax(p.peek(), "end of input");
    }
    let rep = WDRep::new(summands).map_err(|e| semantic(&p.tokens[0], e.to_string()))?;
    Ok(Document {
        field,
        blocks,
        var_names,
        rep,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::gauss::from_int;

    #[test]
    fn steinberg_document() {
        let doc = parse("field q=5 psi=0  rep { tw(s1)*triv*Sp(2) }").unwrap();
        assert_eq!(doc.field, FieldData::new(5, 0).unwrap());
        assert_eq!(doc.var_names, vec!["s1"]);
        assert_eq!(doc.rep, WDRep::unramified(&[2]).unwrap());
    }

    #[test]
    fn blocks_and_profiles() {
        let text = "
            field q=3 psi=-1
            # a wild quadratic block
            block V { dim=2 a=3 dimI=0 detPhi=1 eps=1/2-3*i profile=[(2,0),(2,2)] }
            block chi { dim=1 a=1 dimI=0 }
            rep { tw(x)*V*Sp(2); tw(y)*chi*Sp(1); tw(z)*triv*Sp(3) }
        ";
        let doc = parse(text).unwrap();
        assert_eq!(doc.field.psi_conductor(), -1);
        assert_eq!(doc.blocks.len(), 2);
        let v = &doc.blocks[0];
        assert_eq!(v.det_phi, BlockConstant::Value(from_int(1)));
        assert_eq!(
            v.eps,
            BlockConstant::Value(gauss::parse("1/2-3*i").unwrap())
        );
        assert_eq!(v.profile.as_ref().unwrap().fixed_dims(), &[0, 0, 2]);
        assert_eq!(v.profile.as_ref().unwrap().indices(), &[2, 2]);
        assert_eq!(doc.rep.rank(), 3);
        assert_eq!(doc.var_names, vec!["x", "y", "z"]);
    }

    fn error_of(text: &str) -> ParseError {
        parse(text).unwrap_err()
    }

    #[test]
    fn sp_zero_is_rejected() {
        let e = error_of("field q=5 psi=0 rep { tw(s1)*triv*Sp(0) }");
        assert_eq!(
            e,
            ParseError::Semantic {
                line: 1,
                col: 38,
                constraint: "Sp dimension must be >= 1".into()
            }
        );
        // without the field line the document is incomplete
        assert!(matches!(
            error_of("rep { tw(s1)*triv*Sp(0) }"),
            ParseError::Syntax {
                line: 1,
                col: 1,
                ..
            }
        ));
    }

    #[test]
    fn semantic_errors_name_the_constraint() {
        let cases = [
            ("field q=5 psi=0 rep { tw(s)*V*Sp(1) }", "block V is not declared"),
            (
                "field q=5 psi=0 rep { tw(s)*triv*Sp(1); tw(s)*triv*Sp(2) }",
                "variable s is used twice",
            ),
            (
                "field q=5 psi=0 block triv { dim=1 a=0 dimI=1 } rep { tw(s)*triv*Sp(1) }",
                "reserved",
            ),
            (
                "field q=5 psi=0 block V { dim=2 a=0 dimI=1 } rep { tw(s)*V*Sp(1) }",
                "a = 0 requires dimI = dim",
            ),
            (
                "field q=5 psi=0 block V { dim=1 a=1 dimI=0 profile=[(2,0),(4,1)] } rep { tw(s)*V*Sp(1) }",
                "not an integer",
            ),
            (
                "field q=5 psi=0 block V { dim=1 a=2 dimI=0 profile=[(1,1)] } rep { tw(s)*V*Sp(1) }",
                "disagrees",
            ),
            (
                "field q=5 psi=0 block V { dim=1 a=1 dimI=0 } block V { dim=1 a=1 dimI=0 } rep { tw(s)*V*Sp(1) }",
                "declared twice",
            ),
            ("field q=1 psi=0 rep { tw(s)*triv*Sp(1) }", "at least 2"),
        ];
        for (text, needle) in cases {
            match error_of(text) {
                ParseError::Semantic { constraint, .. } => {
                    assert!(constraint.contains(needle), "{constraint:?} vs {needle:?}")
                }
                other => panic!("expected semantic error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = error_of("field q=5 psi=0\nrep { tw(s)*triv*Sp(2) ");
        assert!(matches!(e, ParseError::Syntax { line: 2, .. }), "{e:?}");
        let e =
            error_of("field q=5 psi=0 block V { dim=1 a=1 dimI=0 eps=1.5 } rep { tw(s)*V*Sp(1) }");
        assert!(matches!(e, ParseError::Syntax { .. }), "{e:?}");
        let e =
            error_of("field q=5 psi=0 block V { dim=1 a=1 dimI=0 eps=2 3 } rep { tw(s)*V*Sp(1) }");
        assert!(matches!(e, ParseError::Syntax { .. }), "{e:?}");
        let e = error_of("field q=5 psi=0 rep { tw(s)*triv*Sp(2) } extra");
        assert!(matches!(e, ParseError::Syntax { .. }), "{e:?}");
        let e = error_of("field q=5 psi=0 rep { tw(s)*triv*Sp(99999999999) }");
        assert!(matches!(e, ParseError::Syntax { .. }), "{e:?}");
        let e = error_of("field q=5 psi=0 rep { tw(s)*triv*Sp(2) } @");
        assert!(matches!(e, ParseError::Syntax { col: 42, .. }), "{e:?}");
        assert!(matches!(error_of(""), ParseError::Syntax { .. }));
    }
}
