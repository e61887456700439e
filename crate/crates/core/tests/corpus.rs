use std::path::PathBuf;

use sovcat_core::diagram::corpus::{load_dir, ExpectedError};
use sovcat_core::Tolerance;

fn dir(sub: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(sub)
}

#[test]
fn positive_corpus_evaluates_to_documented_shapes() {
    let cases = load_dir(&dir("ok")).unwrap();
    assert!(cases.len() >= 20);
    let tol = Tolerance::default();
    for case in &cases {
        assert!(case.error.is_none(), "{}", case.path.display());
        assert!(
            case.shape.is_some() || case.dom.is_some() || case.value.is_some(),
            "{} documents nothing",
            case.path.display()
        );
        if let Err(e) = case.run(&tol) {
            panic!("{e}");
        }
    }
}

#[test]
fn error_corpora_report_positions() {
    let tol = Tolerance::default();
    for (sub, want) in [("syntax", "Syntax"), ("type", "Type"), ("unbound", "Unbound")] {
        let cases = load_dir(&dir(sub)).unwrap();
        assert!(!cases.is_empty(), "{sub}");
        for case in &cases {
            let kind = match case.error.as_ref().expect("expected error directive") {
                ExpectedError::Syntax(_) => "Syntax",
                ExpectedError::Type(_) => "Type",
                ExpectedError::Unbound(..) => "Unbound",
            };
            assert_eq!(kind, want, "{}", case.path.display());
            if let Err(e) = case.run(&tol) {
                panic!("{e}");
            }
        }
    }
}
