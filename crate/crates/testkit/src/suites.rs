//! Randomized property suites shared by the crate tests and the acceptance run.

use std::collections::BTreeSet;
use std::fmt;

use nis_core::dsl;
use nis_core::gap::{gap_report, report_rows, run_missing_measures_query};
use nis_core::kb::{Iri, KnowledgeBase};
use nis_core::reasoner::{classify, realize, Inference};
use nis_core::turtle::{parse_turtle, serialize};

use crate::gen::{self, KbShape, MeasureShape};
use crate::{fixtures, rng};

/// Result of running a suite: how many cases ran and what went wrong.
#[derive(Debug, Default)]
pub struct Outcome {
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.cases > 0 && self.failures.is_empty()
    }

    fn fail(&mut self, msg: String) {
        // Keep reports readable when everything breaks at once.
        if self.failures.len() < 20 {
            self.failures.push(msg);
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} cases, {} failures", self.cases, self.failures.len())?;
        for m in &self.failures {
            write!(f, "\n  {m}")?;
        }
        Ok(())
    }
}

fn compiled(ms: &dsl::MeasureSet) -> KnowledgeBase {
    dsl::compile(ms).expect("generated measure sets compile")
}

/// Engine classification and realization against the brute-force oracle.
pub fn oracle_equivalence(cases: usize, seed: u64) -> Outcome {
    let mut out = Outcome::default();
    let shape = KbShape::default();
    for case in 0..cases {
        let mut r = rng(seed + case as u64);
        let (kb, _) = gen::random_kb(&mut r, &shape);
        let subs = classify(&kb);
        let expected = crate::oracle::classify(&kb);
        if subs != expected {
            out.fail(format!(
                "case {case}: subsumption differs\n{}",
                serialize(&kb)
            ));
        }
        let types = realize(&kb, &subs);
        let expected_types = crate::oracle::realize(&kb, &expected);
        if types != expected_types {
            out.fail(format!("case {case}: types differ\n{}", serialize(&kb)));
        }
        out.cases += 1;
    }
    out
}

fn defined_classes(kb: &KnowledgeBase) -> Vec<Iri> {
    kb.definitions().map(|(c, _)| c.clone()).collect()
}

/// Adding one class or object-property assertion never removes an inferred
/// type and never adds a gap row.
pub fn monotonicity(cases: usize, seed: u64) -> Outcome {
    let mut out = Outcome::default();
    let shape = KbShape::default();
    for case in 0..cases {
        let mut r = rng(seed + case as u64);
        let (kb, sig) = gen::random_kb(&mut r, &shape);
        let extra = sig.assertion(&mut r, false);
        let mut bigger = kb.clone();
        bigger.add_assertion(extra.clone());
        let (before, after) = (Inference::new(&kb), Inference::new(&bigger));
        for (ind, types) in before.types().iter() {
            for t in types {
                if !after.types().has_type(ind, t) {
                    out.fail(format!(
                        "case {case}: {ind} lost {t} after adding {extra:?}"
                    ));
                }
            }
        }
        for target in defined_classes(&kb) {
            for ind in kb.individuals() {
                let old =
                    gap_report(&kb, &before, ind, &target).expect("target and individual exist");
                let new =
                    gap_report(&bigger, &after, ind, &target).expect("target and individual exist");
                let old_rows: BTreeSet<_> = old.rows.iter().collect();
                if let Some(row) = new.rows.iter().find(|r| !old_rows.contains(r)) {
                    out.fail(format!(
                        "case {case}: gap row {row} appeared after adding {extra:?}"
                    ));
                }
            }
        }
        out.cases += 1;
    }
    out
}

fn same_content(a: &KnowledgeBase, b: &KnowledgeBase) -> bool {
    a.tbox() == b.tbox() && a.abox() == b.abox()
}

/// Serializing then parsing gives back the same axioms and assertions, for the
/// seed ontology and `cases` random compiled KBs with organizations.
pub fn round_trip(cases: usize, seed: u64) -> Outcome {
    let mut out = Outcome::default();
    let check = |name: String, kb: &KnowledgeBase, out: &mut Outcome| {
        let text = serialize(kb);
        match parse_turtle(&text) {
            Ok(parsed) if same_content(&parsed.kb, kb) && parsed.warnings.is_empty() => {}
            Ok(_) => out.fail(format!("{name}: content changed\n{text}")),
            Err(e) => out.fail(format!("{name}: {}\n{text}", e.diagnostic())),
        }
        out.cases += 1;
    };
    check("seed".into(), &fixtures::seed_kb(), &mut out);
    for case in 0..cases {
        let mut r = rng(seed + case as u64);
        let (_, ms) = gen::random_measures(&mut r, &MeasureShape::default());
        let mut kb = compiled(&ms);
        gen::add_organizations(&mut r, &mut kb, &ms, 2);
        check(format!("case {case}"), &kb, &mut out);
    }
    out
}

/// An organization asserted `Agent` has no gap rows exactly when it is
/// inferred to belong to its target agent class.
pub fn zero_gap_membership(cases: usize, seed: u64) -> Outcome {
    let mut out = Outcome::default();
    for case in 0..cases {
        let mut r = rng(seed + case as u64);
        let (_, ms) = gen::random_measures(&mut r, &MeasureShape::default());
        let mut kb = compiled(&ms);
        let orgs = gen::add_organizations(&mut r, &mut kb, &ms, 4);
        let inf = Inference::new(&kb);
        for org in orgs {
            let report =
                gap_report(&kb, &inf, &org.individual, &org.target).expect("target is defined");
            let member = inf.types().has_type(&org.individual, &org.target);
            if report.rows.is_empty() != member {
                out.fail(format!(
                    "case {case}: {} rows={} member={member}",
                    org.individual,
                    report.rows.len()
                ));
            }
            out.cases += 1;
        }
    }
    out
}

/// Engine gap rows equal the literal missing-measures query, for compiled KBs
/// whose blocks all have at least two measures.
pub fn listing_equivalence(cases: usize, seed: u64) -> Outcome {
    let mut out = Outcome::default();
    let shape = MeasureShape {
        min_measures: 2,
        ..MeasureShape::default()
    };
    for case in 0..cases {
        let mut r = rng(seed + case as u64);
        let (_, ms) = gen::random_measures(&mut r, &shape);
        let mut kb = compiled(&ms);
        let orgs = gen::add_organizations(&mut r, &mut kb, &ms, 3);
        let inf = Inference::new(&kb);
        for org in orgs {
            let report =
                gap_report(&kb, &inf, &org.individual, &org.target).expect("target is defined");
            let query = run_missing_measures_query(&kb, inf.types(), &org.individual, &org.target)
                .expect("query is supported");
            if report_rows(&report.rows) != query {
                out.fail(format!(
                    "case {case}: {} engine and query rows differ",
                    org.individual
                ));
            }
            out.cases += 1;
        }
    }
    out
}
