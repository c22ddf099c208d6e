use crate::rdf::vocab::{rdf, xsd};
use crate::rdf::{make_literal, BlankNode, Graph, Iri, Literal, Term, Triple};

use super::diagnostic::{ParseDiagnostic, ParseError, Position};
use super::lexer::{Dialect, Lexer, Token, TokenKind};
use super::prefix::PrefixMap;

/// Result of a successful parse.
#[derive(Debug, Clone)]
pub struct ParsedTurtle {
    pub graph: Graph,
    pub prefixes: PrefixMap,
    pub warnings: Vec<ParseDiagnostic>,
}

/// Parses a Turtle document. The first error aborts the parse.
pub fn parse_turtle(text: &str, base: Option<&Iri>) -> Result<ParsedTurtle, ParseError> {
    let mut parser = TurtleParser {
        lexer: Lexer::new(text, Dialect::Turtle),
        peeked: None,
        prefixes: PrefixMap::new(),
        graph: Graph::new(),
        warnings: Vec::new(),
        warned_empty_prefix: false,
    };
    parser.prefixes.set_base(base.cloned());
    match parser.document() {
        Ok(()) => Ok(ParsedTurtle { graph: parser.graph, prefixes: parser.prefixes, warnings: parser.warnings }),
        Err(diagnostic) => {
            let mut diagnostics = parser.warnings;
            diagnostics.push(diagnostic);
            Err(ParseError { diagnostics })
        }
    }
}

/// Resolves an IRI reference against `base`; relative references need a base.
pub(crate) fn resolve_iri(reference: &str, base: Option<&Iri>, pos: Position) -> Result<Iri, ParseDiagnostic> {
    match Iri::new(reference) {
        Ok(iri) => return Ok(iri),
        Err(crate::rdf::TermError::RelativeIri(_)) => {}
        Err(e) => return Err(ParseDiagnostic::error(pos, e.to_string())),
    }
    let Some(base) = base else {
        return Err(ParseDiagnostic::error(pos, format!("relative IRI <{reference}> with no base IRI")));
    };
    let joined = url::Url::parse(base.as_str())
        .and_then(|b| b.join(reference))
        .map_err(|e| ParseDiagnostic::error(pos, format!("cannot resolve <{reference}>: {e}")))?;
    Iri::new(joined.as_str()).map_err(|e| ParseDiagnostic::error(pos, e.to_string()))
}

struct TurtleParser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<Token>,
    prefixes: PrefixMap,
    graph: Graph,
    warnings: Vec<ParseDiagnostic>,
    warned_empty_prefix: bool,
}

type PResult<T> = Result<T, ParseDiagnostic>;

impl TurtleParser<'_> {
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

    fn expect(&mut self, kind: TokenKind, what: &str) -> PResult<Token> {
        let token = self.next()?;
        if token.kind == kind {
            Ok(token)
        } else {
            Err(unexpected(&token, what))
        }
    }

    fn document(&mut self) -> PResult<()> {
        loop {
            let token = self.peek()?.clone();
            match &token.kind {
                TokenKind::Eof => return Ok(()),
                TokenKind::AtWord(w) if w == "prefix" => {
                    self.next()?;
                    self.prefix_body()?;
                    self.expect(TokenKind::Dot, "`.` after @prefix directive")?;
                }
                TokenKind::AtWord(w) if w == "base" => {
                    self.next()?;
                    self.base_body()?;
                    self.expect(TokenKind::Dot, "`.` after @base directive")?;
                }
                TokenKind::AtWord(w) => {
                    return Err(ParseDiagnostic::error(token.pos, format!("unknown directive `@{w}`")))
                }
                TokenKind::Word(w) if w.eq_ignore_ascii_case("prefix") => {
                    self.next()?;
                    self.prefix_body()?;
                }
                TokenKind::Word(w) if w.eq_ignore_ascii_case("base") => {
                    self.next()?;
                    self.base_body()?;
                }
                _ => {
                    self.triples()?;
                    self.expect(TokenKind::Dot, "`.` at end of statement")?;
                }
            }
        }
    }

    fn prefix_body(&mut self) -> PResult<()> {
        let label = self.next()?;
        let name = match &label.kind {
            TokenKind::PrefixedName { prefix, local } if local.is_empty() => prefix.clone(),
            _ => return Err(unexpected(&label, "a prefix label such as `ex:`")),
        };
        let iri_token = self.next()?;
        let TokenKind::IriRef(reference) = &iri_token.kind else {
            return Err(unexpected(&iri_token, "a namespace IRI in angle brackets"));
        };
        let ns = resolve_iri(reference, self.prefixes.base(), iri_token.pos)?;
        self.prefixes.insert(name, ns);
        Ok(())
    }

    fn base_body(&mut self) -> PResult<()> {
        let iri_token = self.next()?;
        let TokenKind::IriRef(reference) = &iri_token.kind else {
            return Err(unexpected(&iri_token, "a base IRI in angle brackets"));
        };
        let base = resolve_iri(reference, self.prefixes.base(), iri_token.pos)?;
        self.prefixes.set_base(Some(base));
        Ok(())
    }

    fn triples(&mut self) -> PResult<()> {
        let subject = self.subject()?;
        loop {
            let predicate = self.predicate()?;
            loop {
                let object = self.object()?;
                let triple = Triple::new(subject.clone(), predicate.clone(), object)
                    .expect("subject parser never yields a literal");
                self.graph.insert(triple).expect("parser graph is not frozen");
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
            if matches!(self.peek()?.kind, TokenKind::Dot) {
                return Ok(());
            }
        }
    }

    fn subject(&mut self) -> PResult<Term> {
        let token = self.next()?;
        match &token.kind {
            TokenKind::IriRef(_) | TokenKind::PrefixedName { .. } => self.iri(&token).map(Term::Iri),
            TokenKind::BlankLabel(label) => blank(label, token.pos),
            TokenKind::LBracket => Err(unsupported_bracket(&token)),
            TokenKind::LParen => Err(unsupported_paren(&token)),
            TokenKind::String(_) | TokenKind::Integer(_) | TokenKind::Decimal(_) => {
                Err(ParseDiagnostic::error(token.pos, "a literal cannot be the subject of a triple"))
            }
            _ => Err(unexpected(&token, "a subject (IRI or blank node)")),
        }
    }

    fn predicate(&mut self) -> PResult<Iri> {
        let token = self.next()?;
        match &token.kind {
            TokenKind::Word(w) if w == "a" => Ok(Iri::new(rdf::TYPE).expect("constant")),
            TokenKind::IriRef(_) | TokenKind::PrefixedName { .. } => self.iri(&token),
            _ => Err(unexpected(&token, "a predicate (IRI or `a`)")),
        }
    }

    fn object(&mut self) -> PResult<Term> {
        let token = self.next()?;
        match &token.kind {
            TokenKind::IriRef(_) | TokenKind::PrefixedName { .. } => self.iri(&token).map(Term::Iri),
            TokenKind::BlankLabel(label) => blank(label, token.pos),
            TokenKind::String(value) => self.literal_tail(value, token.pos),
            TokenKind::Integer(n) => shorthand(n, xsd::INTEGER, token.pos),
            TokenKind::Decimal(n) => shorthand(n, xsd::DECIMAL, token.pos),
            TokenKind::Double(n) => {
                Err(ParseDiagnostic::error(token.pos, format!("double literal `{n}` is not supported; use a decimal")))
            }
            TokenKind::Word(w) if w == "true" || w == "false" => shorthand(w, xsd::BOOLEAN, token.pos),
            TokenKind::LBracket => Err(unsupported_bracket(&token)),
            TokenKind::LParen => Err(unsupported_paren(&token)),
            _ => Err(unexpected(&token, "an object (IRI, blank node or literal)")),
        }
    }

    fn literal_tail(&mut self, value: &str, pos: Position) -> PResult<Term> {
        let next = self.peek()?.clone();
        match &next.kind {
            TokenKind::AtWord(lang) => {
                self.next()?;
                Literal::new(value, crate::rdf::Datatype::LangString, Some(lang))
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

    fn iri(&mut self, token: &Token) -> PResult<Iri> {
        match &token.kind {
            TokenKind::IriRef(reference) => resolve_iri(reference, self.prefixes.base(), token.pos),
            TokenKind::PrefixedName { prefix, local } => {
                if let Some(ns) = self.prefixes.get(prefix) {
                    return Iri::new(format!("{}{local}", ns.as_str()))
                        .map_err(|e| ParseDiagnostic::error(token.pos, e.to_string()));
                }
                if prefix.is_empty() {
                    if let Some(base) = self.prefixes.base().cloned() {
                        if !self.warned_empty_prefix {
                            self.warned_empty_prefix = true;
                            self.warnings.push(ParseDiagnostic::warning(
                                token.pos,
                                format!("empty prefix `:` is not declared; using the base IRI {base}"),
                            ));
                        }
                        return Iri::new(format!("{}{local}", base.as_str()))
                            .map_err(|e| ParseDiagnostic::error(token.pos, e.to_string()));
                    }
                }
                Err(ParseDiagnostic::error(token.pos, format!("undeclared prefix `{prefix}:`")))
            }
            _ => Err(unexpected(token, "an IRI")),
        }
    }
}

fn blank(label: &str, pos: Position) -> PResult<Term> {
    BlankNode::new(label).map(Term::Blank).map_err(|e| ParseDiagnostic::error(pos, e.to_string()))
}

fn shorthand(lexical: &str, datatype: &str, pos: Position) -> PResult<Term> {
    make_literal(lexical, &Iri::new(datatype).expect("constant"), None)
        .map_err(|e| ParseDiagnostic::error(pos, e.to_string()))
}

fn unexpected(token: &Token, expected: &str) -> ParseDiagnostic {
    ParseDiagnostic::error(token.pos, format!("expected {expected}, found {}", token.kind.describe()))
}

fn unsupported_bracket(token: &Token) -> ParseDiagnostic {
    ParseDiagnostic::error(token.pos, "anonymous blank node property lists `[ ]` are not supported")
}

fn unsupported_paren(token: &Token) -> ParseDiagnostic {
    ParseDiagnostic::error(token.pos, "collections `( )` are not supported")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::Datatype;

    const HICO: &str = r#"@prefix crm: <http://www.cidoc-crm.org/cidoc-crm/>.
@prefix hico: <http://purl.org/emmedi/hico/> .
@prefix prov: <http://www.w3.org/ns/prov#> .

:39794-creation-1 a crm:E65_Creation ;
    crm:P14_carried_out_by :baldassarre ;
    prov:wasGeneratedBy :39794-authorship-attribution-1.

:39794-authorship-attribution-1 a hico:InterpretationAct.
"#;

    fn base() -> Iri {
        Iri::new("https://example.org/zeri/").unwrap()
    }

    #[test]
    fn hico_snippet_has_four_triples() {
        let parsed = parse_turtle(HICO, Some(&base())).unwrap();
        assert_eq!(parsed.graph.len(), 4);
        assert_eq!(parsed.prefixes.len(), 3);
        assert_eq!(parsed.warnings.len(), 1);
        let creation: Term = Iri::new("https://example.org/zeri/39794-creation-1").unwrap().into();
        assert_eq!(parsed.graph.triples_matching(Some(&creation), None, None).len(), 3);
    }

    #[test]
    fn hico_without_base_fails_at_first_use() {
        let err = parse_turtle(HICO, None).unwrap_err();
        let d = err.first_error();
        assert_eq!((d.line, d.column), (5, 1));
    }

    #[test]
    fn empty_document() {
        let parsed = parse_turtle("", None).unwrap();
        assert!(parsed.graph.is_empty());
        assert!(parsed.prefixes.is_empty());
    }

    #[test]
    fn bare_words_are_rejected_on_line_one() {
        let err = parse_turtle("x y z .", None).unwrap_err();
        assert_eq!(err.first_error().line, 1);
        assert_eq!(err.first_error().column, 1);
    }

    #[test]
    fn literals_and_lists() {
        let doc = r#"PREFIX ex: <http://e.org/>
ex:s ex:p "a", "b"@IT ; ex:q 1949, 2.5, true ; ex:r "1949"^^<http://www.w3.org/2001/XMLSchema#gYear> ; .
"#;
        let g = parse_turtle(doc, None).unwrap().graph;
        assert_eq!(g.len(), 6);
        let s: Term = Iri::new("http://e.org/s").unwrap().into();
        let r = Iri::new("http://e.org/r").unwrap();
        let o = g.objects(&s, &r)[0].as_literal().unwrap();
        assert_eq!(o.datatype(), Datatype::GYear);
    }

    #[test]
    fn relative_iris_need_a_base() {
        assert!(parse_turtle("<s> <http://e.org/p> <o> .", None).is_err());
        let g = parse_turtle("@base <http://e.org/a/> . <s> <p> <../o> .", None).unwrap().graph;
        let t = g.iter().next().unwrap();
        assert_eq!(t.object().as_iri().unwrap().as_str(), "http://e.org/o");
    }

    #[test]
    fn unsupported_constructs_are_positioned() {
        for (doc, col) in [
            ("@prefix ex: <http://e.org/> .\nex:s ex:p [ ex:q 1 ] .", 11),
            ("@prefix ex: <http://e.org/> .\nex:s ex:p ( 1 2 ) .", 11),
            ("@prefix ex: <http://e.org/> .\nex:s ex:p \"\"\"long\"\"\" .", 11),
            ("@prefix ex: <http://e.org/> .\nex:s ex:p 1.0e3 .", 11),
            ("@prefix ex: <http://e.org/> .\nex:s ex:p \"12x\"^^<http://www.w3.org/2001/XMLSchema#integer> .", 11),
        ] {
            let err = parse_turtle(doc, None).unwrap_err();
            let d = err.first_error();
            assert_eq!((d.line, d.column), (2, col), "{doc}");
        }
    }

    #[test]
    fn missing_final_dot_points_at_last_character() {
        let err = parse_turtle("@prefix ex: <http://e.org/> .\nex:s ex:p ex:o", None).unwrap_err();
        let d = err.first_error();
        assert_eq!((d.line, d.column), (2, 14));
    }
}
