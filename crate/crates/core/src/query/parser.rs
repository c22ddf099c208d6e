use crate::rdf::vocab::{rdf, xsd};
use crate::rdf::{make_literal, Datatype, Iri, Literal, Term};
use crate::turtle::lexer::{Dialect, Lexer, Token, TokenKind};
use crate::turtle::{resolve_iri, ParseDiagnostic, ParseError, Position, PrefixMap};

use super::ast::{CompareOp, Expr, OrderCondition, PatternTerm, Query, QueryError, TriplePattern, Variable};

type PResult<T> = Result<T, ParseDiagnostic>;

/// Parses one SELECT query. Prefixes declared in the text take precedence
/// over `prefixes`.
pub fn parse_query(text: &str, prefixes: &PrefixMap) -> Result<Query, ParseError> {
    let mut parser = QueryParser {
        lexer: Lexer::new(text, Dialect::Query),
        peeked: None,
        prefixes: prefixes.clone(),
        checks: Vec::new(),
    };
    parser.query().map_err(|d| ParseError { diagnostics: vec![d] })
}

struct QueryParser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<Token>,
    prefixes: PrefixMap,
    /// Variables that must occur in the graph pattern, in source order.
    checks: Vec<(Variable, Position)>,
}

fn is_keyword(token: &Token, keyword: &str) -> bool {
    matches!(&token.kind, TokenKind::Word(w) if w.eq_ignore_ascii_case(keyword))
}

fn unexpected(token: &Token, expected: &str) -> ParseDiagnostic {
    ParseDiagnostic::error(token.pos, format!("expected {expected}, found {}", token.kind.describe()))
}

impl QueryParser<'_> {
    fn peek(&mut self) -> PResult<&Token> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next_token()?);
        }
        Ok(self.peeked.as_ref().expect("just filled"))
    }

    fn next(&mut self) -> PResult<Token> {
        self.peek()?;
        Ok(self.peeked.take().expect("just filled"))
    }

    fn peek_keyword(&mut self, keyword: &str) -> PResult<bool> {
        Ok(is_keyword(self.peek()?, keyword))
    }

    fn expect_keyword(&mut self, keyword: &str) -> PResult<Token> {
        let token = self.next()?;
        if is_keyword(&token, keyword) {
            Ok(token)
        } else {
            Err(unexpected(&token, &format!("`{keyword}`")))
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> PResult<Token> {
        let token = self.next()?;
        if token.kind == kind {
            Ok(token)
        } else {
            Err(unexpected(&token, what))
        }
    }

    fn query(&mut self) -> PResult<Query> {
        self.prologue()?;
        let select = self.expect_keyword("SELECT")?;
        let distinct = if self.peek_keyword("DISTINCT")? {
            self.next()?;
            true
        } else {
            false
        };
        let mut projection = Vec::new();
        if self.peek()?.kind == TokenKind::Op("*") {
            self.next()?;
        } else {
            while let TokenKind::Var(_) = self.peek()?.kind {
                let token = self.next()?;
                let v = self.variable(&token)?;
                if projection.contains(&v) {
                    return Err(ParseDiagnostic::error(token.pos, QueryError::DuplicateProjection(v).to_string()));
                }
                self.checks.push((v.clone(), token.pos));
                projection.push(v);
            }
            if projection.is_empty() {
                let token = self.next()?;
                return Err(unexpected(&token, "`*` or at least one projected variable"));
            }
        }
        if self.peek_keyword("WHERE")? {
            self.next()?;
        }
        let open = self.expect(TokenKind::LBrace, "`{` opening the graph pattern")?;
        let (patterns, filters) = self.group_body()?;
        if patterns.is_empty() {
            return Err(ParseDiagnostic::error(open.pos, QueryError::EmptyPattern.to_string()));
        }
        let mut order_by = Vec::new();
        if self.peek_keyword("ORDER")? {
            self.next()?;
            self.expect_keyword("BY")?;
            loop {
                let token = self.peek()?.clone();
                let descending = match &token.kind {
                    TokenKind::Var(_) => None,
                    _ if is_keyword(&token, "ASC") => Some(false),
                    _ if is_keyword(&token, "DESC") => Some(true),
                    _ => break,
                };
                self.next()?;
                let var_token = if descending.is_some() {
                    self.expect(TokenKind::LParen, "`(` after ASC or DESC")?;
                    let v = self.next()?;
                    self.expect(TokenKind::RParen, "`)` closing the order condition")?;
                    v
                } else {
                    token
                };
                let variable = self.variable(&var_token)?;
                self.checks.push((variable.clone(), var_token.pos));
                order_by.push(OrderCondition { variable, descending: descending.unwrap_or(false) });
            }
            if order_by.is_empty() {
                let token = self.next()?;
                return Err(unexpected(&token, "an order condition"));
            }
        }
        let end = self.next()?;
        if end.kind != TokenKind::Eof {
            return Err(unexpected(&end, "end of query"));
        }

        let bound: Vec<&Variable> = patterns.iter().flat_map(TriplePattern::variables).collect();
        for (v, pos) in &self.checks {
            if !bound.contains(&v) {
                return Err(ParseDiagnostic::error(*pos, QueryError::UnboundVariable(v.clone()).to_string()));
            }
        }
        let query = Query::new(projection, distinct, patterns, filters, order_by)
            .map_err(|e| ParseDiagnostic::error(select.pos, e.to_string()))?;
        Ok(query.with_prefixes(self.prefixes.clone()))
    }

    fn prologue(&mut self) -> PResult<()> {
        loop {
            if self.peek_keyword("PREFIX")? {
                self.next()?;
                let label = self.next()?;
                let name = match &label.kind {
                    TokenKind::PrefixedName { prefix, local } if local.is_empty() => prefix.clone(),
                    _ => return Err(unexpected(&label, "a prefix label such as `zamoa:`")),
                };
                let iri_token = self.next()?;
                let TokenKind::IriRef(reference) = &iri_token.kind else {
                    return Err(unexpected(&iri_token, "a namespace IRI in angle brackets"));
                };
                let ns = resolve_iri(reference, self.prefixes.base(), iri_token.pos)?;
                self.prefixes.insert(name, ns);
            } else if self.peek_keyword("BASE")? {
                self.next()?;
                let iri_token = self.next()?;
                let TokenKind::IriRef(reference) = &iri_token.kind else {
                    return Err(unexpected(&iri_token, "a base IRI in angle brackets"));
                };
                let base = resolve_iri(reference, self.prefixes.base(), iri_token.pos)?;
                self.prefixes.set_base(Some(base));
            } else {
                return Ok(());
            }
        }
    }

    /// Triples blocks and filters up to and including the closing `}`.
    fn group_body(&mut self) -> PResult<(Vec<TriplePattern>, Vec<Expr>)> {
        let mut patterns = Vec::new();
        let mut filters = Vec::new();
        loop {
            let token = self.peek()?.clone();
            match &token.kind {
                TokenKind::RBrace => {
                    self.next()?;
                    return Ok((patterns, filters));
                }
                TokenKind::Dot => {
                    self.next()?;
                }
                _ if is_keyword(&token, "FILTER") => {
                    self.next()?;
                    filters.push(self.constraint()?);
                }
                _ if is_keyword(&token, "OPTIONAL") || is_keyword(&token, "UNION") || is_keyword(&token, "MINUS") => {
                    return Err(ParseDiagnostic::error(
                        token.pos,
                        format!("{} is not supported", token.kind.describe()),
                    ));
                }
                _ => {
                    self.triples(&mut patterns)?;
                    let next = self.peek()?.clone();
                    match next.kind {
                        TokenKind::Dot | TokenKind::RBrace => {}
                        _ if is_keyword(&next, "FILTER") => {}
                        _ => return Err(unexpected(&next, "`.` or `}` after a triple pattern")),
                    }
                }
            }
        }
    }

    /// Patterns only, for `EXISTS` blocks.
    fn pattern_block(&mut self) -> PResult<Vec<TriplePattern>> {
        self.expect(TokenKind::LBrace, "`{` opening the pattern")?;
        let saved = std::mem::take(&mut self.checks);
        let (patterns, filters) = self.group_body()?;
        self.checks = saved;
        if !filters.is_empty() {
            let token = self.peek()?.clone();
            return Err(ParseDiagnostic::error(token.pos, "FILTER inside an EXISTS block is not supported"));
        }
        Ok(patterns)
    }

    fn triples(&mut self, out: &mut Vec<TriplePattern>) -> PResult<()> {
        let subject_token = self.next()?;
        let subject = self.subject(&subject_token)?;
        loop {
            let predicate = self.predicate()?;
            loop {
                let object = self.object()?;
                out.push(
                    TriplePattern::new(subject.clone(), predicate.clone(), object)
                        .map_err(|e| ParseDiagnostic::error(subject_token.pos, e.to_string()))?,
                );
                if self.peek()?.kind == TokenKind::Comma {
                    self.next()?;
                } else {
                    break;
                }
            }
            if self.peek()?.kind != TokenKind::Semicolon {
                return Ok(());
            }
            while self.peek()?.kind == TokenKind::Semicolon {
                self.next()?;
            }
            if matches!(self.peek()?.kind, TokenKind::Dot | TokenKind::RBrace) {
                return Ok(());
            }
        }
    }

    fn variable(&self, token: &Token) -> PResult<Variable> {
        match &token.kind {
            TokenKind::Var(name) => {
                Variable::new(name.clone()).map_err(|e| ParseDiagnostic::error(token.pos, e.to_string()))
            }
            _ => Err(unexpected(token, "a variable")),
        }
    }

    fn subject(&mut self, token: &Token) -> PResult<PatternTerm> {
        match &token.kind {
            TokenKind::Var(_) => self.variable(token).map(PatternTerm::Var),
            TokenKind::IriRef(_) | TokenKind::PrefixedName { .. } => self.iri(token).map(PatternTerm::from),
            TokenKind::String(_) | TokenKind::Integer(_) | TokenKind::Decimal(_) => {
                Err(ParseDiagnostic::error(token.pos, QueryError::LiteralSubject.to_string()))
            }
            TokenKind::Word(w) if w == "true" || w == "false" => {
                Err(ParseDiagnostic::error(token.pos, QueryError::LiteralSubject.to_string()))
            }
            TokenKind::BlankLabel(_) | TokenKind::LBracket => Err(ParseDiagnostic::error(
                token.pos,
                "blank nodes are not supported in query patterns; use a variable",
            )),
            _ => Err(unexpected(token, "a subject (variable or IRI)")),
        }
    }

    fn predicate(&mut self) -> PResult<PatternTerm> {
        let token = self.next()?;
        match &token.kind {
            TokenKind::Word(w) if w == "a" => Ok(Iri::new(rdf::TYPE).expect("constant").into()),
            TokenKind::Var(_) => self.variable(&token).map(PatternTerm::Var),
            TokenKind::IriRef(_) | TokenKind::PrefixedName { .. } => self.iri(&token).map(PatternTerm::from),
            _ => Err(unexpected(&token, "a predicate (variable, IRI or `a`)")),
        }
    }

    fn object(&mut self) -> PResult<PatternTerm> {
        let token = self.next()?;
        match &token.kind {
            TokenKind::Var(_) => self.variable(&token).map(PatternTerm::Var),
            TokenKind::BlankLabel(_) | TokenKind::LBracket => Err(ParseDiagnostic::error(
                token.pos,
                "blank nodes are not supported in query patterns; use a variable",
            )),
            _ => self.constant(&token).map(PatternTerm::Term),
        }
    }

    /// An IRI or literal.
    fn constant(&mut self, token: &Token) -> PResult<Term> {
        match &token.kind {
            TokenKind::IriRef(_) | TokenKind::PrefixedName { .. } => self.iri(token).map(Term::Iri),
            TokenKind::String(value) => self.literal_tail(value, token.pos),
            TokenKind::Integer(n) => shorthand(n, xsd::INTEGER, token.pos),
            TokenKind::Decimal(n) => shorthand(n, xsd::DECIMAL, token.pos),
            TokenKind::Double(n) => {
                Err(ParseDiagnostic::error(token.pos, format!("double literal `{n}` is not supported; use a decimal")))
            }
            TokenKind::Word(w) if w == "true" || w == "false" => shorthand(w, xsd::BOOLEAN, token.pos),
            _ => Err(unexpected(token, "an IRI or a literal")),
        }
    }

    fn literal_tail(&mut self, value: &str, pos: Position) -> PResult<Term> {
        let next = self.peek()?.clone();
        match &next.kind {
            TokenKind::AtWord(lang) => {
                self.next()?;
                Literal::new(value, Datatype::LangString, Some(lang))
                    .map(Term::Literal)
                    .map_err(|e| ParseDiagnostic::error(next.pos, e.to_string()))
            }
            TokenKind::DoubleCaret => {
                self.next()?;
                let dt_token = self.next()?;
                let datatype = match &dt_token.kind {
                    TokenKind::IriRef(_) | TokenKind::PrefixedName { .. } => self.iri(&dt_token)?,
                    _ => return Err(unexpected(&dt_token, "a datatype IRI after `^^`")),
                };
                make_literal(value, &datatype, None).map_err(|e| ParseDiagnostic::error(pos, e.to_string()))
            }
            _ => Ok(Term::Literal(Literal::string(value))),
        }
    }

    fn iri(&self, token: &Token) -> PResult<Iri> {
        match &token.kind {
            TokenKind::IriRef(reference) => resolve_iri(reference, self.prefixes.base(), token.pos),
            TokenKind::PrefixedName { prefix, local } => match self.prefixes.get(prefix) {
                Some(ns) => Iri::new(format!("{}{local}", ns.as_str()))
                    .map_err(|e| ParseDiagnostic::error(token.pos, e.to_string())),
                None => Err(ParseDiagnostic::error(token.pos, format!("undeclared prefix `{prefix}:`"))),
            },
            _ => Err(unexpected(token, "an IRI")),
        }
    }

    /// `FILTER (expr)` or `FILTER [NOT] EXISTS { ... }`.
    fn constraint(&mut self) -> PResult<Expr> {
        let token = self.peek()?.clone();
        if token.kind == TokenKind::LParen {
            self.next()?;
            let e = self.or_expr()?;
            self.expect(TokenKind::RParen, "`)` closing the filter")?;
            Ok(e)
        } else if is_keyword(&token, "NOT") || is_keyword(&token, "EXISTS") {
            self.exists()
        } else {
            self.next()?;
            Err(unexpected(&token, "`(` or EXISTS after FILTER"))
        }
    }

    fn exists(&mut self) -> PResult<Expr> {
        let negated = if self.peek_keyword("NOT")? {
            self.next()?;
            true
        } else {
            false
        };
        self.expect_keyword("EXISTS")?;
        let patterns = self.pattern_block()?;
        if patterns.is_empty() {
            let token = self.peek()?.clone();
            return Err(ParseDiagnostic::error(token.pos, "EXISTS needs at least one triple pattern"));
        }
        Ok(Expr::Exists { negated, patterns })
    }

    fn or_expr(&mut self) -> PResult<Expr> {
        let mut left = self.and_expr()?;
        while self.peek()?.kind == TokenKind::Op("||") {
            self.next()?;
            let right = self.and_expr()?;
            left = Expr::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> PResult<Expr> {
        let mut left = self.unary()?;
        while self.peek()?.kind == TokenKind::Op("&&") {
            self.next()?;
            let right = self.unary()?;
            left = Expr::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let token = self.peek()?.clone();
        if token.kind == TokenKind::Op("!") {
            self.next()?;
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        if token.kind == TokenKind::LParen {
            self.next()?;
            let e = self.or_expr()?;
            self.expect(TokenKind::RParen, "`)`")?;
            return Ok(e);
        }
        if is_keyword(&token, "NOT") || is_keyword(&token, "EXISTS") {
            return self.exists();
        }
        if is_keyword(&token, "LANG") {
            return self.lang();
        }
        let left = self.operand()?;
        let op_token = self.next()?;
        let op = match &op_token.kind {
            TokenKind::Op(symbol) => CompareOp::from_symbol(symbol),
            _ => None,
        }
        .ok_or_else(|| unexpected(&op_token, "a comparison operator"))?;
        let right = self.operand()?;
        Ok(Expr::Compare(op, left, right))
    }

    /// `LANG(?v) = "tag"` or `LANG(?v) != "tag"`.
    fn lang(&mut self) -> PResult<Expr> {
        self.next()?;
        self.expect(TokenKind::LParen, "`(` after LANG")?;
        let var_token = self.next()?;
        let variable = self.variable(&var_token)?;
        self.checks.push((variable.clone(), var_token.pos));
        self.expect(TokenKind::RParen, "`)` closing LANG")?;
        let op_token = self.next()?;
        let negated = match op_token.kind {
            TokenKind::Op("=") => false,
            TokenKind::Op("!=") => true,
            _ => return Err(unexpected(&op_token, "`=` or `!=` after LANG(...)")),
        };
        let tag_token = self.next()?;
        let TokenKind::String(tag) = &tag_token.kind else {
            return Err(unexpected(&tag_token, "a language tag string"));
        };
        let e = Expr::Lang { variable, tag: tag.clone() };
        Ok(if negated { Expr::Not(Box::new(e)) } else { e })
    }

    fn operand(&mut self) -> PResult<PatternTerm> {
        let token = self.next()?;
        match &token.kind {
            TokenKind::Var(_) => {
                let v = self.variable(&token)?;
                self.checks.push((v.clone(), token.pos));
                Ok(PatternTerm::Var(v))
            }
            _ => self.constant(&token).map(PatternTerm::Term),
        }
    }
}

fn shorthand(lexical: &str, datatype: &str, pos: Position) -> PResult<Term> {
    make_literal(lexical, &Iri::new(datatype).expect("constant"), None)
        .map_err(|e| ParseDiagnostic::error(pos, e.to_string()))
}
