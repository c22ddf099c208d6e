use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::ontology::{OntologySchema, Range};
use crate::rdf::vocab::rdf;
use crate::rdf::{Graph, Iri, Term, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// `(x a C), C ⊑ D ⇒ (x a D)`
    TypeViaSubclass,
    /// `(s p o), p ⊑ q ⇒ (s q o)`
    PropagateSubproperty,
    /// `(s p o), domain(p) = C ⇒ (s a C)`
    DomainTyping,
    /// `(s p o), range(p) = C, o not a literal ⇒ (o a C)`
    RangeTyping,
    /// `(s p o), inverse(p) = q, o not a literal ⇒ (o q s)`
    InverseCompletion,
}

impl Rule {
    pub const ALL: [Rule; 5] = [
        Rule::TypeViaSubclass,
        Rule::PropagateSubproperty,
        Rule::DomainTyping,
        Rule::RangeTyping,
        Rule::InverseCompletion,
    ];
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A subset of the rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RuleSet(u8);

impl RuleSet {
    pub fn all() -> Self {
        RuleSet(0b1_1111)
    }

    pub fn none() -> Self {
        RuleSet(0)
    }

    /// The rule subset whose members are the set bits of `bits` in [`Rule::ALL`] order.
    pub fn from_bits(bits: u8) -> Self {
        RuleSet(bits & 0b1_1111)
    }

    /// All 32 subsets.
    pub fn subsets() -> impl Iterator<Item = RuleSet> {
        (0u8..32).map(RuleSet)
    }

    fn bit(rule: Rule) -> u8 {
        1 << Rule::ALL.iter().position(|r| *r == rule).expect("listed rule")
    }

    pub fn with(self, rule: Rule) -> Self {
        RuleSet(self.0 | Self::bit(rule))
    }

    pub fn without(self, rule: Rule) -> Self {
        RuleSet(self.0 & !Self::bit(rule))
    }

    pub fn contains(self, rule: Rule) -> bool {
        self.0 & Self::bit(rule) != 0
    }

    pub fn rules(self) -> impl Iterator<Item = Rule> {
        Rule::ALL.into_iter().filter(move |r| self.contains(*r))
    }
}

impl FromIterator<Rule> for RuleSet {
    fn from_iter<I: IntoIterator<Item = Rule>>(iter: I) -> Self {
        iter.into_iter().fold(RuleSet::none(), RuleSet::with)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SaturationStats {
    /// Worklist generations processed; generation 0 is the input.
    pub rounds: usize,
    /// Triples added to the input.
    pub derived: usize,
}

/// Least fixpoint of `rules` over `data`. The input is not modified and the
/// result is unfrozen.
pub fn saturate(data: &Graph, schema: &OntologySchema, rules: RuleSet) -> Graph {
    saturate_with_stats(data, schema, rules).0
}

pub fn saturate_with_stats(data: &Graph, schema: &OntologySchema, rules: RuleSet) -> (Graph, SaturationStats) {
    let plan = Plan::new(schema, rules);
    let mut out = Graph::new();
    let mut current: VecDeque<Triple> = VecDeque::new();
    for t in data {
        out.insert(t.clone()).expect("fresh graph is not frozen");
        current.push_back(t.clone());
    }
    let mut stats = SaturationStats::default();
    let mut derived = Vec::new();
    while !current.is_empty() {
        let mut next = VecDeque::new();
        for t in current.drain(..) {
            derived.clear();
            plan.consequences(&t, &mut derived);
            for d in derived.drain(..) {
                if out.insert(d.clone()).expect("fresh graph is not frozen") {
                    stats.derived += 1;
                    next.push_back(d);
                }
            }
        }
        stats.rounds += 1;
        current = next;
    }
    (out, stats)
}

/// Precomputed closures for the enabled rules.
struct Plan {
    rdf_type: Iri,
    superclasses: BTreeMap<Iri, Vec<Iri>>,
    superproperties: BTreeMap<Iri, Vec<Iri>>,
    domain: BTreeMap<Iri, Iri>,
    range: BTreeMap<Iri, Iri>,
    inverse: BTreeMap<Iri, Iri>,
}

fn strict_closure(edges: &BTreeSet<(Iri, Iri)>) -> BTreeMap<Iri, Vec<Iri>> {
    let starts: BTreeSet<&Iri> = edges.iter().map(|(a, _)| a).collect();
    starts
        .into_iter()
        .map(|s| {
            let ups: Vec<Iri> = crate::ontology::reachable(edges, s).into_iter().filter(|u| u != s).collect();
            (s.clone(), ups)
        })
        .collect()
}

impl Plan {
    fn new(schema: &OntologySchema, rules: RuleSet) -> Self {
        let on = |rule| rules.contains(rule);
        Plan {
            rdf_type: Iri::new(rdf::TYPE).expect("constant"),
            superclasses: if on(Rule::TypeViaSubclass) {
                strict_closure(&schema.sub_class_edges)
            } else {
                BTreeMap::new()
            },
            superproperties: if on(Rule::PropagateSubproperty) {
                strict_closure(&schema.sub_property_edges)
            } else {
                BTreeMap::new()
            },
            domain: if on(Rule::DomainTyping) { schema.domain.clone() } else { BTreeMap::new() },
            range: if on(Rule::RangeTyping) {
                schema
                    .range
                    .iter()
                    .filter_map(|(p, r)| match r {
                        Range::Class(c) => Some((p.clone(), c.clone())),
                        _ => None,
                    })
                    .collect()
            } else {
                BTreeMap::new()
            },
            inverse: if on(Rule::InverseCompletion) { schema.inverse.clone() } else { BTreeMap::new() },
        }
    }

    fn typed(&self, subject: &Term, class: &Iri) -> Triple {
        Triple::new(subject.clone(), self.rdf_type.clone(), class.clone().into()).expect("non-literal subject")
    }

    fn consequences(&self, t: &Triple, out: &mut Vec<Triple>) {
        let (s, p, o) = (t.subject(), t.predicate(), t.object());
        if *p == self.rdf_type {
            if let Some(class) = o.as_iri() {
                for sup in self.superclasses.get(class).into_iter().flatten() {
                    out.push(self.typed(s, sup));
                }
            }
        }
        for q in self.superproperties.get(p).into_iter().flatten() {
            out.push(Triple::new(s.clone(), q.clone(), o.clone()).expect("subject unchanged"));
        }
        if let Some(c) = self.domain.get(p) {
            out.push(self.typed(s, c));
        }
        if !o.is_literal() {
            if let Some(c) = self.range.get(p) {
                out.push(self.typed(o, c));
            }
            if let Some(q) = self.inverse.get(p) {
                out.push(Triple::new(o.clone(), q.clone(), s.clone()).expect("object is not a literal"));
            }
        }
    }
}
