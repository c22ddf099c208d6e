use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use super::vocab::{rdf, xsd};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("IRI `{0}` is not absolute")]
    RelativeIri(String),
    #[error("IRI `{0}` contains a forbidden character")]
    InvalidIri(String),
    #[error("invalid blank node label `{0}`")]
    InvalidBlankNode(String),
    #[error("lexical form `{lexical}` is not a valid {datatype}")]
    IllFormedLiteral { lexical: String, datatype: &'static str },
    #[error("language tag given for non-language datatype {0}")]
    LangWithoutLangString(&'static str),
    #[error("language-string literal without a language tag")]
    MissingLanguageTag,
    #[error("invalid language tag `{0}`")]
    InvalidLanguageTag(String),
    #[error("unsupported datatype <{0}>")]
    UnsupportedDatatype(String),
    #[error("a literal cannot be the subject of a triple")]
    LiteralSubject,
}

/// An absolute IRI reference.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, TermError> {
        let value = value.into();
        if value.chars().any(|c| c.is_whitespace() || c.is_control() || "<>\"{}|^`\\".contains(c)) {
            return Err(TermError::InvalidIri(value));
        }
        if !has_scheme(&value) {
            return Err(TermError::RelativeIri(value));
        }
        Ok(Iri(value))
    }

    /// Builds an IRI from a string known to be absolute, such as a vocabulary constant.
    pub(crate) fn new_unchecked(value: impl Into<String>) -> Self {
        let value = value.into();
        debug_assert!(has_scheme(&value), "not absolute: {value}");
        Iri(value)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Splits at the last `#` or `/`, returning the local part.
    pub fn local_name(&self) -> &str {
        match self.0.rfind(['#', '/']) {
            Some(i) => &self.0[i + 1..],
            None => &self.0,
        }
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

fn has_scheme(value: &str) -> bool {
    let Some(colon) = value.find(':') else {
        return false;
    };
    let scheme = &value[..colon];
    let mut chars = scheme.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn new(label: impl Into<String>) -> Result<Self, TermError> {
        let label = label.into();
        let valid = !label.is_empty()
            && !label.ends_with('.')
            && label.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'));
        if valid {
            Ok(BlankNode(label))
        } else {
            Err(TermError::InvalidBlankNode(label))
        }
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

/// The closed set of literal datatypes the engine understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Datatype {
    String,
    LangString,
    Integer,
    Decimal,
    Boolean,
    Date,
    GYear,
}

impl Datatype {
    pub const ALL: [Datatype; 7] = [
        Datatype::String,
        Datatype::LangString,
        Datatype::Integer,
        Datatype::Decimal,
        Datatype::Boolean,
        Datatype::Date,
        Datatype::GYear,
    ];

    pub fn iri_str(self) -> &'static str {
        match self {
            Datatype::String => xsd::STRING,
            Datatype::LangString => rdf::LANG_STRING,
            Datatype::Integer => xsd::INTEGER,
            Datatype::Decimal => xsd::DECIMAL,
            Datatype::Boolean => xsd::BOOLEAN,
            Datatype::Date => xsd::DATE,
            Datatype::GYear => xsd::GYEAR,
        }
    }

    pub fn iri(self) -> Iri {
        Iri::new_unchecked(self.iri_str())
    }

    pub fn from_iri(iri: &str) -> Option<Self> {
        Datatype::ALL.into_iter().find(|d| d.iri_str() == iri)
    }

    fn name(self) -> &'static str {
        match self {
            Datatype::String => "xsd:string",
            Datatype::LangString => "rdf:langString",
            Datatype::Integer => "xsd:integer",
            Datatype::Decimal => "xsd:decimal",
            Datatype::Boolean => "xsd:boolean",
            Datatype::Date => "xsd:date",
            Datatype::GYear => "xsd:gYear",
        }
    }

    /// Whether a literal of type `self` is acceptable where `expected` is declared.
    /// Integers are a restriction of decimals.
    pub fn conforms_to(self, expected: Datatype) -> bool {
        self == expected || (self == Datatype::Integer && expected == Datatype::Decimal)
    }

    fn is_well_formed(self, lexical: &str) -> bool {
        match self {
            Datatype::String | Datatype::LangString => true,
            Datatype::Integer => ExactDecimal::parse_integer(lexical).is_some(),
            Datatype::Decimal => ExactDecimal::parse(lexical).is_some(),
            Datatype::Boolean => matches!(lexical, "true" | "false" | "1" | "0"),
            Datatype::GYear => parse_gyear(lexical).is_some(),
            Datatype::Date => parse_date(lexical).is_some(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: String,
    datatype: Datatype,
    lang: Option<String>,
}

impl Literal {
    pub fn new(lexical: impl Into<String>, datatype: Datatype, lang: Option<&str>) -> Result<Self, TermError> {
        let lexical = lexical.into();
        let lang = match (datatype, lang) {
            (Datatype::LangString, Some(tag)) => {
                if !is_language_tag(tag) {
                    return Err(TermError::InvalidLanguageTag(tag.to_owned()));
                }
                Some(tag.to_ascii_lowercase())
            }
            (Datatype::LangString, None) => return Err(TermError::MissingLanguageTag),
            (other, Some(_)) => return Err(TermError::LangWithoutLangString(other.name())),
            (_, None) => None,
        };
        if !datatype.is_well_formed(&lexical) {
            return Err(TermError::IllFormedLiteral { lexical, datatype: datatype.name() });
        }
        Ok(Literal { lexical, datatype, lang })
    }

    pub fn string(value: impl Into<String>) -> Self {
        Literal { lexical: value.into(), datatype: Datatype::String, lang: None }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Datatype {
        self.datatype
    }

    pub fn lang(&self) -> Option<&str> {
        self.lang.as_deref()
    }

    /// Numeric value of integer, decimal and gYear literals; gYear counts as its year.
    pub fn numeric_value(&self) -> Option<ExactDecimal> {
        match self.datatype {
            Datatype::Integer | Datatype::Decimal => ExactDecimal::parse(&self.lexical),
            Datatype::GYear => parse_gyear(&self.lexical).map(ExactDecimal::from),
            _ => None,
        }
    }

    /// `(year, month, day)` of a date literal.
    pub fn date_value(&self) -> Option<(i64, u8, u8)> {
        match self.datatype {
            Datatype::Date => parse_date(&self.lexical),
            _ => None,
        }
    }

    pub fn boolean_value(&self) -> Option<bool> {
        match (self.datatype, self.lexical.as_str()) {
            (Datatype::Boolean, "true" | "1") => Some(true),
            (Datatype::Boolean, "false" | "0") => Some(false),
            _ => None,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", escape_string(&self.lexical))?;
        match (&self.lang, self.datatype) {
            (Some(lang), _) => write!(f, "@{lang}"),
            (None, Datatype::String) => Ok(()),
            (None, dt) => write!(f, "^^<{}>", dt.iri_str()),
        }
    }
}

/// Escapes a lexical form for a double-quoted Turtle or N-Triples string.
pub fn escape_string(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn is_language_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let primary = parts.next().unwrap_or("");
    (1..=8).contains(&primary.len())
        && primary.chars().all(|c| c.is_ascii_alphabetic())
        && parts.all(|p| (1..=8).contains(&p.len()) && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

fn split_timezone(lexical: &str) -> Option<&str> {
    if let Some(body) = lexical.strip_suffix('Z') {
        return Some(body);
    }
    if lexical.len() > 6 {
        let (body, tz) = lexical.split_at(lexical.len() - 6);
        let b = tz.as_bytes();
        if (b[0] == b'+' || b[0] == b'-')
            && b[1].is_ascii_digit()
            && b[2].is_ascii_digit()
            && b[3] == b':'
            && b[4].is_ascii_digit()
            && b[5].is_ascii_digit()
        {
            let hours = (b[1] - b'0') * 10 + (b[2] - b'0');
            let minutes = (b[4] - b'0') * 10 + (b[5] - b'0');
            if hours > 14 || minutes > 59 || (hours == 14 && minutes > 0) {
                return None;
            }
            return Some(body);
        }
    }
    Some(lexical)
}

fn parse_year(text: &str) -> Option<i64> {
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    if digits.len() < 4 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if digits.len() > 4 && digits.starts_with('0') {
        return None;
    }
    let year: i64 = digits.parse().ok()?;
    if year == 0 && negative {
        return None;
    }
    Some(if negative { -year } else { year })
}

fn parse_gyear(lexical: &str) -> Option<i64> {
    parse_year(split_timezone(lexical)?)
}

fn parse_date(lexical: &str) -> Option<(i64, u8, u8)> {
    let body = split_timezone(lexical)?;
    if body.len() < 10 {
        return None;
    }
    let (year_part, rest) = body.split_at(body.len() - 6);
    let rest = rest.as_bytes();
    if rest[0] != b'-' || rest[3] != b'-' || !rest[1..3].iter().chain(&rest[4..6]).all(u8::is_ascii_digit) {
        return None;
    }
    let year = parse_year(year_part)?;
    let month = (rest[1] - b'0') * 10 + (rest[2] - b'0');
    let day = (rest[4] - b'0') * 10 + (rest[5] - b'0');
    let leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    let max_day = match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if leap => 29,
        2 => 28,
        _ => return None,
    };
    if day == 0 || day > max_day {
        return None;
    }
    Some((year, month, day))
}

/// Arbitrary-precision decimal used for exact numeric comparison of lexical forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactDecimal {
    negative: bool,
    /// Integer digits without leading zeros.
    whole: String,
    /// Fraction digits without trailing zeros.
    fraction: String,
}

impl ExactDecimal {
    pub fn parse(lexical: &str) -> Option<Self> {
        let (negative, body) = match lexical.as_bytes().first() {
            Some(b'-') => (true, &lexical[1..]),
            Some(b'+') => (false, &lexical[1..]),
            _ => (false, lexical),
        };
        let (whole, fraction) = match body.split_once('.') {
            Some((w, f)) => (w, f),
            None => (body, ""),
        };
        if whole.is_empty() && fraction.is_empty() {
            return None;
        }
        if body.contains('.') && fraction.is_empty() && whole.is_empty() {
            return None;
        }
        if !whole.bytes().all(|b| b.is_ascii_digit()) || !fraction.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let whole = whole.trim_start_matches('0').to_owned();
        let fraction = fraction.trim_end_matches('0').to_owned();
        let zero = whole.is_empty() && fraction.is_empty();
        Some(ExactDecimal { negative: negative && !zero, whole, fraction })
    }

    fn parse_integer(lexical: &str) -> Option<Self> {
        let digits = lexical.strip_prefix(['+', '-']).unwrap_or(lexical);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        ExactDecimal::parse(lexical)
    }

    fn cmp_magnitude(&self, other: &Self) -> Ordering {
        self.whole
            .len()
            .cmp(&other.whole.len())
            .then_with(|| self.whole.cmp(&other.whole))
            .then_with(|| self.fraction.cmp(&other.fraction))
    }
}

impl From<i64> for ExactDecimal {
    fn from(value: i64) -> Self {
        ExactDecimal::parse(&value.to_string()).expect("integer is a valid decimal")
    }
}

impl Ord for ExactDecimal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.negative, other.negative) {
            (false, true) => Ordering::Greater,
            (true, false) => Ordering::Less,
            (false, false) => self.cmp_magnitude(other),
            (true, true) => other.cmp_magnitude(self),
        }
    }
}

impl PartialOrd for ExactDecimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An RDF term: IRI, blank node or literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    Blank(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Result<Self, TermError> {
        Iri::new(value).map(Term::Iri)
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<BlankNode> for Term {
    fn from(node: BlankNode) -> Self {
        Term::Blank(node)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => iri.fmt(f),
            Term::Blank(node) => node.fmt(f),
            Term::Literal(lit) => lit.fmt(f),
        }
    }
}

/// Builds a literal from a datatype IRI, checking the lexical form.
pub fn make_literal(lexical: &str, datatype: &Iri, lang: Option<&str>) -> Result<Term, TermError> {
    let dt = Datatype::from_iri(datatype.as_str())
        .ok_or_else(|| TermError::UnsupportedDatatype(datatype.as_str().to_owned()))?;
    Literal::new(lexical, dt, lang).map(Term::Literal)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Iri, object: Term) -> Result<Self, TermError> {
        if subject.is_literal() {
            return Err(TermError::LiteralSubject);
        }
        Ok(Triple { subject, predicate, object })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn into_parts(self) -> (Term, Iri, Term) {
        (self.subject, self.predicate, self.object)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dt(d: Datatype) -> Iri {
        d.iri()
    }

    #[test]
    fn gyear_literal_from_scenario() {
        let term = make_literal("1949", &dt(Datatype::GYear), None).unwrap();
        let lit = term.as_literal().unwrap();
        assert_eq!(lit.datatype(), Datatype::GYear);
        assert_eq!(lit.numeric_value(), Some(ExactDecimal::from(1949)));
    }

    #[test]
    fn empty_string_is_valid() {
        let term = make_literal("", &dt(Datatype::String), None).unwrap();
        assert_eq!(term.as_literal().unwrap().lexical(), "");
    }

    #[test]
    fn ill_formed_integer() {
        let err = make_literal("12x", &dt(Datatype::Integer), None).unwrap_err();
        assert!(matches!(err, TermError::IllFormedLiteral { .. }));
    }

    #[test]
    fn lang_requires_lang_string() {
        let err = make_literal("Roma", &dt(Datatype::String), Some("it")).unwrap_err();
        assert_eq!(err, TermError::LangWithoutLangString("xsd:string"));
        let ok = make_literal("Roma", &dt(Datatype::LangString), Some("IT")).unwrap();
        assert_eq!(ok.as_literal().unwrap().lang(), Some("it"));
        assert_eq!(make_literal("Roma", &dt(Datatype::LangString), None).unwrap_err(), TermError::MissingLanguageTag);
    }

    #[test]
    fn unsupported_datatype() {
        let double = Iri::new("http://www.w3.org/2001/XMLSchema#double").unwrap();
        assert!(matches!(make_literal("1.0e3", &double, None), Err(TermError::UnsupportedDatatype(_))));
    }

    #[test]
    fn temporal_grammars() {
        assert!(Literal::new("2008-02-29", Datatype::Date, None).is_ok());
        assert!(Literal::new("2009-02-29", Datatype::Date, None).is_err());
        assert!(Literal::new("2009-13-01", Datatype::Date, None).is_err());
        assert!(Literal::new("1980Z", Datatype::GYear, None).is_ok());
        assert!(Literal::new("1980+01:00", Datatype::GYear, None).is_ok());
        assert!(Literal::new("980", Datatype::GYear, None).is_err());
        assert!(Literal::new("-0000", Datatype::GYear, None).is_err());
        assert!(Literal::new("1.5", Datatype::Integer, None).is_err());
        assert!(Literal::new(".5", Datatype::Decimal, None).is_ok());
        assert!(Literal::new(".", Datatype::Decimal, None).is_err());
        assert!(Literal::new("maybe", Datatype::Boolean, None).is_err());
    }

    #[test]
    fn decimal_ordering_is_exact() {
        let d = |s| ExactDecimal::parse(s).unwrap();
        assert!(d("15000") < d("30000"));
        assert!(d("-2") < d("-1.5"));
        assert!(d("0.10") == d(".1"));
        assert!(d("-0") == d("0"));
        assert!(d("100000000000000000000000001") > d("100000000000000000000000000.9"));
    }

    #[test]
    fn iri_must_be_absolute() {
        assert!(Iri::new("https://w3id.org/zeri/ontology/zamo/agents#Agent").is_ok());
        assert!(matches!(Iri::new("Agent"), Err(TermError::RelativeIri(_))));
        assert!(matches!(Iri::new("http://a b"), Err(TermError::InvalidIri(_))));
        assert!(matches!(Iri::new("1http:x"), Err(TermError::RelativeIri(_))));
    }

    #[test]
    fn literal_cannot_be_subject() {
        let p = Iri::new("http://example.org/p").unwrap();
        let err = Triple::new(Literal::string("x").into(), p, Literal::string("y").into()).unwrap_err();
        assert_eq!(err, TermError::LiteralSubject);
    }
}
