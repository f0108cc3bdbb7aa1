use super::*;
use crate::linalg::Field;
use crate::Error;

const UNIT_Q: &str = "field Q\nmonoid K\n  dims 1\n  mult * [1]\n  unit * [1]\nend\n";

const SIERPINSKI: &str = "\
field Q
space
  opens empty U X
  include empty U
  include U X
end
monoid A
  dims 0 1 2
  restrict U X [1 0]
  mult U [1]
  mult X [1 0 0 0; 0 0 0 1]
  unit U [1]
  unit X [1; 1]
end
element e of A = [1 0]
";

#[test]
fn minimal_file_round_trips() {
    let ws = Workspace::parse(UNIT_Q).unwrap();
    assert_eq!(ws.emit(), UNIT_Q);
    assert_eq!(Workspace::parse(&ws.emit()).unwrap(), ws);
    assert!(ws.monoid("K").is_ok());
}

#[test]
fn emit_is_canonical() {
    let messy = "# comment\nfield   Q\n\nmonoid K   # trailing\n dims 1\n unit * [1]\n mult * [ 1 ]\nend\n";
    let ws = Workspace::parse(messy).unwrap();
    let canon = ws.emit();
    assert_eq!(Workspace::parse(&canon).unwrap().emit(), canon);
}

#[test]
fn wrong_table_shape_names_the_block() {
    let text = "field Q\nmonoid A\n  dims 2\n  mult * [1 0 0; 0 1 0]\n  unit * [1; 0]\nend\n";
    match Workspace::parse(text) {
        Err(Error::Semantic { block, .. }) => assert_eq!(block, "monoid A"),
        other => panic!("expected a semantic error, got {other:?}"),
    }
}

#[test]
fn parse_errors_are_located() {
    let text = "field Q\nmonoid A\n  dims 1\n  mult * [1\nend\n";
    match Workspace::parse(text) {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (4, 10)),
        other => panic!("expected a parse error, got {other:?}"),
    }
    assert!(matches!(Workspace::parse("field Q7\n"), Err(Error::Parse { line: 1, .. })));
}

#[test]
fn sierpinski_workspace_parses() {
    let ws = Workspace::parse(SIERPINSKI).unwrap();
    let a = ws.monoid("A").unwrap();
    assert_eq!(a.carrier().dims(), &[0, 1, 2]);
    assert_eq!(ws.emit(), SIERPINSKI);
    let unknown = SIERPINSKI.replace("include U X", "include U Y");
    assert!(matches!(Workspace::parse(&unknown), Err(Error::Semantic { block, .. }) if block == "space"));
    // A restriction that is not an algebra map.
    let bad = SIERPINSKI.replace("restrict U X [1 0]", "restrict U X [1 1]");
    assert!(matches!(Workspace::parse(&bad), Err(Error::Semantic { block, .. }) if block == "monoid A"));
}

#[test]
fn unresolved_names_are_semantic_errors() {
    let text = format!("{UNIT_Q}element t of B = [1]\n");
    assert!(matches!(Workspace::parse(&text), Err(Error::Semantic { block, .. }) if block == "element t"));
    let twice = format!("{UNIT_Q}{}", &UNIT_Q[8..]);
    assert!(matches!(Workspace::parse(&twice), Err(Error::Semantic { .. })));
}

fn counts(field: Field) -> Vec<usize> {
    let corpus = corpus_generate(field, 3).unwrap();
    (1..=3).map(|d| corpus.iter().filter(|e| e.monoid.carrier().total_dim() == d).count()).collect()
}

#[test]
fn corpus_class_counts() {
    // k; k², k[x]/x², k_2; and six classes in dimension 3.
    assert_eq!(counts(Field::Prime(2)), vec![1, 3, 6]);
    assert_eq!(counts(Field::Prime(3)), vec![1, 3, 6]);
    assert_eq!(corpus_generate(Field::Rational, 3).unwrap().len(), 7);
    assert!(corpus_generate(Field::Prime(2), 4).is_err());
    assert!(corpus_generate(Field::Prime(5), 2).is_err());
}

#[test]
fn f2_dim2_is_the_three_classes() {
    let corpus = corpus_generate(Field::Prime(2), 2).unwrap();
    let mut units: Vec<usize> = corpus
        .iter()
        .filter(|e| e.monoid.carrier().total_dim() == 2)
        .map(|e| {
            let r = classical(&e.monoid).unwrap();
            let all = r.elements(100).unwrap();
            all.iter().filter(|x| r.inverse(x).is_some()).count()
        })
        .collect();
    units.sort();
    // F2×F2 has one unit, F2[x]/x² two, F4 three.
    assert_eq!(units, vec![1, 2, 3]);
}

fn sample_report() -> CertificateReport {
    let ring = crate::algebras::to_ring(&crate::algebras::split(Field::Rational, 2)).unwrap();
    let mut rep = CertificateReport::new("check-cover A t1 t2".into(), Verdict::Positive, digest("x"));
    rep.fact("cover", "yes");
    rep.witness(Witness::UnitIdeal {
        table: Table::of(&ring),
        elements: vec![vec!["1/1".into(), "0/1".into()], vec!["0/1".into(), "1/1".into()]],
        coefficients: vec![vec!["1/1".into(), "0/1".into()], vec!["0/1".into(), "1/1".into()]],
    });
    rep
}

#[test]
fn report_mirrors_and_verifies() {
    let rep = sample_report();
    assert_eq!(CertificateReport::from_machine(&rep.to_machine()).unwrap(), rep);
    let text = rep.to_text();
    assert!(text.contains("verdict = positive"));
    assert!(text.contains("witnesses.0.elements = [1 0; 0 1]"));
    let keys: Vec<&str> = text.lines().map(|l| l.split(" = ").next().unwrap()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys.len(), sorted.len());
    verify_report(&rep).unwrap();
}

#[test]
fn doctored_witness_fails_verification() {
    let mut rep = sample_report();
    if let Witness::UnitIdeal { coefficients, .. } = &mut rep.witnesses[0] {
        coefficients[1][1] = "2/1".into();
    }
    assert!(verify_report(&rep).is_err());
    let mut bare = sample_report();
    bare.witnesses.clear();
    assert!(verify_report(&bare).is_err());
}

#[test]
fn digests_are_stable() {
    assert_eq!(
        digest(""),
        "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
    );
}
