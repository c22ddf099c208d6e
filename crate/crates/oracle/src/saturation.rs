use std::collections::BTreeSet;

use zamo::inference::{Rule, RuleSet};
use zamo::ontology::{OntologySchema, Range};
use zamo::rdf::vocab::rdf;
use zamo::{Graph, Iri, Term, Triple};

/// Applies every enabled rule to every triple, using only the direct schema
/// edges, until a full pass adds nothing.
pub fn naive_saturate(data: &Graph, schema: &OntologySchema, rules: RuleSet) -> BTreeSet<Triple> {
    let rdf_type = Iri::new(rdf::TYPE).unwrap();
    let typed = |s: &Term, c: &Iri| Triple::new(s.clone(), rdf_type.clone(), Term::Iri(c.clone())).unwrap();
    let mut all: BTreeSet<Triple> = data.iter().cloned().collect();
    loop {
        let mut new = Vec::new();
        for t in &all {
            let (s, p, o) = (t.subject(), t.predicate(), t.object());
            if rules.contains(Rule::TypeViaSubclass) && *p == rdf_type {
                for (sub, sup) in &schema.sub_class_edges {
                    if o.as_iri() == Some(sub) {
                        new.push(typed(s, sup));
                    }
                }
            }
            if rules.contains(Rule::PropagateSubproperty) {
                for (sub, sup) in &schema.sub_property_edges {
                    if p == sub {
                        new.push(Triple::new(s.clone(), sup.clone(), o.clone()).unwrap());
                    }
                }
            }
            if rules.contains(Rule::DomainTyping) {
                if let Some(c) = schema.domain.get(p) {
                    new.push(typed(s, c));
                }
            }
            if o.is_literal() {
                continue;
            }
            if rules.contains(Rule::RangeTyping) {
                if let Some(Range::Class(c)) = schema.range.get(p) {
                    new.push(typed(o, c));
                }
            }
            if rules.contains(Rule::InverseCompletion) {
                if let Some(q) = schema.inverse.get(p) {
                    new.push(Triple::new(o.clone(), q.clone(), s.clone()).unwrap());
                }
            }
        }
        let before = all.len();
        all.extend(new);
        if all.len() == before {
            return all;
        }
    }
}
