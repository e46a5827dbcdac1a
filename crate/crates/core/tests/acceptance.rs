//! The eight acceptance criteria, one test each. Every test prints a single
//! `criterion N: PASS|FAIL ...` line; run with `--nocapture` to see them.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use awarekit::enumerate::EnumConfig;
use awarekit::fh::{build_category, category_equivalence_suite};
use awarekit::fixtures::{fig1l, fig1r};
use awarekit::genmodels::{gen_fh, gen_hms, gen_implicit, Caps};
use awarekit::hms::suite::explicit_laws;
use awarekit::hms::SuiteConfig;
use awarekit::implicit::{derivation_suite, implicit_laws, ComplementedModel};
use awarekit::lpa::{check_proof, fuzz_soundness, parse_proof, FuzzConfig, ModelClass};
use awarekit::mutation::{detect, Mutation};
use awarekit::semantics::{satisfies, TruthValue};
use awarekit::syntax::parse_any_agent;
use awarekit::transforms::{
    equivalence_check, fh_star_transform, fh_transform, hms_transform, round_trip, truncated_hms_transform, ModelRef,
    Transform,
};
use awarekit::Report;

const CAPS: Caps = Caps::new(3, 5, 2);

/// Prints the verdict line and fails the test on a miss.
fn verdict(n: usize, what: &str, report: &Report, elapsed: Duration, limit: Option<Duration>) {
    let slow = limit.is_some_and(|l| elapsed > l);
    let ok = report.is_empty() && !slow;
    let limit = limit.map_or(String::new(), |l| format!(" (limit {:.0?})", l));
    println!(
        "criterion {n}: {} {what}: {} counterexamples in {:.2?}{limit}",
        if ok { "PASS" } else { "FAIL" },
        report.len(),
        elapsed
    );
    assert!(report.is_empty(), "criterion {n}: {report}");
    assert!(!slow, "criterion {n} too slow: {elapsed:?}");
}

fn corpus() -> Vec<(String, ComplementedModel)> {
    let mut v = vec![("fig1L".to_string(), fig1l()), ("fig1R".to_string(), fig1r())];
    v.extend((0..100).map(|s| (format!("seed {s}"), gen_hms(s, CAPS).unwrap())));
    v
}

fn tagged(report: &mut Report, tag: &str, r: Report) {
    for v in r.violations {
        report.push(v.law, format!("{tag}: {}", v.witness));
    }
}

#[test]
fn criterion_1_fixture_truths() {
    let t = Instant::now();
    let mut report = Report::new();
    let expect = |report: &mut Report, m: &ComplementedModel, name: &str, f: &str, want: TruthValue| {
        let s = m.lattice().parse_state("pq:pq").unwrap();
        let got = satisfies(m, s, &parse_any_agent(f).unwrap()).unwrap();
        if got != want {
            report.push(awarekit::Law::FormulaDisagreement, format!("{name}: {f} is {got}, expected {want}"));
        }
    };
    let (l, r) = (fig1l(), fig1r());
    tagged(&mut report, "fig1L", l.validate());
    tagged(&mut report, "fig1R", r.validate());
    expect(&mut report, &l, "fig1L", "k_1 p", TruthValue::True);
    expect(&mut report, &l, "fig1L", "a_1 q", TruthValue::False);
    expect(&mut report, &r, "fig1R", "l_1 q", TruthValue::True);
    expect(&mut report, &r, "fig1R", "a_1 q", TruthValue::False);
    expect(&mut report, &r, "fig1R", "k_1 q", TruthValue::False);
    verdict(1, "fixture truths at pq", &report, t.elapsed(), Some(Duration::from_secs(1)));
}

#[test]
fn criterion_2_explicit_suite() {
    let t = Instant::now();
    let cfg = SuiteConfig::default();
    let mut report = Report::new();
    for (name, m) in corpus() {
        tagged(&mut report, &name, m.base.validate());
        tagged(&mut report, &name, explicit_laws(&m, &cfg));
    }
    verdict(2, "explicit laws on 102 models", &report, t.elapsed(), Some(Duration::from_secs(60)));
}

#[test]
fn criterion_3_implicit_suite() {
    let t = Instant::now();
    let cfg = SuiteConfig::default();
    let mut report = Report::new();
    for (name, m) in corpus() {
        tagged(&mut report, &name, m.validate());
        tagged(&mut report, &name, implicit_laws(&m, &cfg));
    }
    verdict(3, "implicit laws on 102 models", &report, t.elapsed(), None);
}

#[test]
fn criterion_4_derivation_suite() {
    let t = Instant::now();
    let cfg = SuiteConfig::default();
    let mut report = Report::new();
    for s in 0..100 {
        let im = gen_implicit(s, CAPS).unwrap();
        tagged(&mut report, &format!("seed {s}"), im.validate());
        tagged(&mut report, &format!("seed {s}"), derivation_suite(&im, &cfg).unwrap());
    }
    verdict(4, "derived correspondences on 100 models", &report, t.elapsed(), None);
}

#[test]
fn criterion_5_category_suite() {
    let t = Instant::now();
    let cfg = EnumConfig::with_depth(2);
    let mut report = Report::new();
    for s in 0..50 {
        let c = build_category(&gen_fh(s, CAPS).unwrap(), true).unwrap();
        tagged(&mut report, &format!("seed {s}"), c.validate());
        tagged(&mut report, &format!("seed {s}"), category_equivalence_suite(&c, &cfg));
    }
    verdict(5, "categories of 50 awareness structures", &report, t.elapsed(), None);
}

#[test]
fn criterion_6_transform_equivalence() {
    let t = Instant::now();
    let cfg = EnumConfig::with_depth(2);
    let mut report = Report::new();
    for s in 0..50 {
        let tag = format!("seed {s}");
        let k = gen_fh(s, CAPS).unwrap();
        let m = hms_transform(&k, true).unwrap();
        tagged(&mut report, &tag, equivalence_check(ModelRef::Fh(&k), ModelRef::Complemented(&m), Transform::Hms, &cfg).unwrap());
        let im = truncated_hms_transform(&k, true).unwrap();
        tagged(&mut report, &tag, equivalence_check(ModelRef::Fh(&k), ModelRef::Implicit(&im), Transform::ImplicitHms, &cfg).unwrap());
        tagged(&mut report, &tag, round_trip(&k, true, &cfg).unwrap());

        let h = gen_hms(s, CAPS).unwrap();
        let back = fh_transform(&h).unwrap();
        tagged(&mut report, &tag, equivalence_check(ModelRef::Complemented(&h), ModelRef::Fh(&back), Transform::Fh, &cfg).unwrap());
        let g = gen_implicit(s, CAPS).unwrap();
        let star = fh_star_transform(&g).unwrap();
        tagged(&mut report, &tag, equivalence_check(ModelRef::Implicit(&g), ModelRef::Fh(&star), Transform::FhStar, &cfg).unwrap());
    }
    verdict(6, "all transform directions and the round trip", &report, t.elapsed(), Some(Duration::from_secs(300)));
}

#[test]
fn criterion_7_lpa_soundness_and_proofs() {
    let t = Instant::now();
    let cfg = FuzzConfig::default();
    let mut report = Report::new();
    let mut instances = 0;
    for class in ModelClass::ALL {
        let o = fuzz_soundness(class, &cfg).unwrap();
        assert_eq!(o.trials, 200);
        instances += o.tally.schema_instances + o.tally.rule_applications;
        report.extend(o.report);
    }
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/proofs");
    let mut accepted = 0;
    for e in std::fs::read_dir(&dir).unwrap() {
        let path = e.unwrap().path();
        if path.extension().is_some_and(|x| x == "proof") {
            let v = check_proof(&parse_proof(&std::fs::read_to_string(&path).unwrap()).unwrap());
            if !v.accepted {
                report.push(awarekit::Law::SchemaCounterexample, format!("{} rejected: {:?}", path.display(), v.failure));
            }
            accepted += 1;
        }
    }
    let manifest: Vec<serde_json::Value> =
        serde_json::from_str(&std::fs::read_to_string(dir.join("corrupted/MANIFEST.json")).unwrap()).unwrap();
    assert_eq!(manifest.len(), 10);
    for entry in &manifest {
        let file = entry["file"].as_str().unwrap();
        let want = entry["line"].as_u64().unwrap() as usize;
        let v = check_proof(&parse_proof(&std::fs::read_to_string(dir.join("corrupted").join(file)).unwrap()).unwrap());
        let got = v.failure.map(|f| f.line);
        if got != Some(want) {
            report.push(awarekit::Law::SchemaCounterexample, format!("{file}: rejected at {got:?}, documented line {want}"));
        }
    }
    assert!(accepted >= 1);
    let what = format!(
        "{instances} schema instances and rule applications, {accepted} example proofs, {} corrupted proofs",
        manifest.len()
    );
    verdict(7, &what, &report, t.elapsed(), None);
}

#[test]
fn criterion_8_mutation_sensitivity() {
    let t = Instant::now();
    let mut report = Report::new();
    for m in Mutation::ALL {
        let d = detect(m).unwrap();
        if !d.caught() {
            report.push(awarekit::Law::FormulaDisagreement, format!("mutation {} not caught", m.name()));
        }
    }
    verdict(8, "8 single-point mutations", &report, t.elapsed(), None);
}
