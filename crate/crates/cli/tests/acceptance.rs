//! Acceptance run: one line per criterion, nonzero exit if any fails.
//! Exact arithmetic throughout; a single disagreement fails its criterion.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use moncat::crosscheck::{corpus_suite, presheaf_suite, CheckOptions, SuiteTally};
use moncat::io::{classical, corpus_generate, CertificateReport, CorpusEntry, Verdict};
use moncat::linalg::Field;

type Outcome = Result<String, String>;

struct Corpus {
    entries: Vec<(Field, CorpusEntry)>,
    tallies: Vec<SuiteTally>,
}

fn corpus() -> Result<Corpus, String> {
    let mut entries = Vec::new();
    let mut tallies = Vec::new();
    for f in [Field::Prime(2), Field::Prime(3), Field::Rational] {
        let c = corpus_generate(f, 3).map_err(|e| e.to_string())?;
        tallies.extend(corpus_suite(&c, CheckOptions::default()).map_err(|e| e.to_string())?);
        entries.extend(c.into_iter().map(|e| (f, e)));
    }
    Ok(Corpus { entries, tallies })
}

fn total(c: &Corpus, criterion: usize) -> usize {
    c.tallies.iter().map(|t| t.count(criterion)).sum()
}

/// Every monoid contributed at least one check to `criterion`.
fn each(c: &Corpus, criterion: usize, what: &str) -> Outcome {
    if let Some(t) = c.tallies.iter().find(|t| t.count(criterion) == 0) {
        return Err(format!("no {what} checked on {}", t.name));
    }
    Ok(format!("{} {what} across {} monoids", total(c, criterion), c.tallies.len()))
}

fn cover(c: &Corpus) -> Outcome {
    let n = total(c, 1);
    if n < 500 {
        return Err(format!("only {n} cover queries"));
    }
    Ok(format!("{n} cover queries agree with ideal membership"))
}

fn hierarchy(c: &Corpus) -> Outcome {
    for t in &c.tallies {
        if t.integral && !t.reduced {
            return Err(format!("{} is integral but not reduced", t.name));
        }
    }
    // Dimension-2 algebras over F2 told apart by their unit count:
    // F4 has 3, F2[x]/(x^2) has 2, F2 x F2 has 1.
    let mut seen = BTreeSet::new();
    for (f, e) in &c.entries {
        if *f != Field::Prime(2) || e.monoid.carrier().total_dim() != 2 {
            continue;
        }
        let r = classical(&e.monoid).map_err(|e| e.to_string())?;
        let units = r.elements(u64::MAX).unwrap().iter().filter(|x| r.inverse(x).is_some()).count();
        let t = c.tallies.iter().find(|t| t.name == e.name).unwrap();
        let expected = match units {
            3 => (true, true),
            1 => (false, true),
            2 => (false, false),
            _ => return Err(format!("{} has {units} units", e.name)),
        };
        if (t.integral, t.reduced) != expected {
            return Err(format!("{}: integral {}, reduced {}", e.name, t.integral, t.reduced));
        }
        seen.insert(units);
    }
    if seen.len() != 3 {
        return Err(format!("expected three F2 classes in dimension 2, found {}", seen.len()));
    }
    let integral = c.tallies.iter().filter(|t| t.integral).count();
    Ok(format!("{} monoids, {integral} integral; F2 dimension-2 table matches", c.tallies.len()))
}

fn function_field(c: &Corpus) -> Outcome {
    for t in &c.tallies {
        if t.integral && t.count(8) == 0 {
            return Err(format!("{} is integral but its function field was not checked", t.name));
        }
    }
    let n = c.tallies.iter().filter(|t| t.integral).count();
    Ok(format!("{} comparisons over {n} integral monoids", total(c, 8)))
}

fn workspace(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "workspaces", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn moncat(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_moncat"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn report(ws: &str, args: &[&str]) -> Result<CertificateReport, String> {
    let path = workspace(ws);
    let mut full = vec!["-w", &path, "--format", "machine"];
    full.extend_from_slice(args);
    let (code, out, err) = moncat(&full);
    if code != 0 {
        return Err(format!("{ws} {args:?} exited {code}: {}", err.trim()));
    }
    let r = CertificateReport::from_machine(out.trim())?;
    moncat::io::verify_report(&r).map_err(|e| format!("{ws} {args:?}: {e}"))?;
    Ok(r)
}

fn positive(ws: &str, args: &[&str]) -> Result<CertificateReport, String> {
    let r = report(ws, args)?;
    if r.verdict != Verdict::Positive {
        return Err(format!("{ws} {args:?}: negative verdict"));
    }
    Ok(r)
}

fn closed_subschemes() -> Outcome {
    let schemes = [("schemes.ws", "P"), ("schemes.ws", "T"), ("schemes.ws", "L"), ("sierpinski.ws", "P")];
    for (ws, s) in schemes {
        positive(ws, &["glue", s])?;
    }
    let sheaves = [
        ("schemes.ws", "shared"),
        ("schemes.ws", "outer"),
        ("schemes.ws", "point"),
        ("schemes.ws", "generic"),
        ("sierpinski.ws", "shared"),
        ("sierpinski.ws", "outer"),
    ];
    let mut squares = 0;
    for (ws, j) in sheaves {
        let r = positive(ws, &["closed-subscheme", j])?;
        for (k, v) in r.facts.iter().filter(|(k, _)| k.starts_with("base-change.")) {
            if !v.ends_with("iso=true") {
                return Err(format!("{ws} {j}: {k} = {v}"));
            }
            squares += 1;
        }
    }
    let integral = [
        ("schemes.ws", "shared"),
        ("schemes.ws", "point"),
        ("schemes.ws", "generic"),
        ("sierpinski.ws", "shared"),
    ];
    for (ws, j) in integral {
        let r = positive(ws, &["local-ring", j])?;
        if r.facts.get("units-verified").is_none_or(|v| v == "0") {
            return Err(format!("{ws} {j}: no units verified"));
        }
    }
    Ok(format!(
        "{} glued schemes (one on the Sierpiński space), {squares} base-change squares, {} local rings",
        schemes.len(),
        integral.len()
    ))
}

fn presheaves() -> Outcome {
    let mut n = 0;
    for f in [Field::Rational, Field::Prime(2), Field::Prime(3)] {
        n += presheaf_suite(f, 24, 11, CheckOptions::default()).map_err(|e| e.to_string())?;
    }
    if n < 20 {
        return Err(format!("only {n} presheaves"));
    }
    Ok(format!("{n} presheaves, Hom(1, M) matches global sections"))
}

fn severity() -> Outcome {
    let schemes = workspace("schemes.ws");
    let sierpinski = workspace("sierpinski.ws");
    for n in 1..=10 {
        let fault = n.to_string();
        let args: Vec<&str> = match n {
            1..=8 => vec!["corpus-run", "--field", "F2", "--dim-max", "2"],
            9 => vec!["-w", &schemes, "closed-subscheme", "point"],
            _ => vec!["-w", &sierpinski, "cross-check"],
        };
        let mut full = args.clone();
        full.extend(["--inject-fault", &fault]);
        let (code, _, err) = moncat(&full);
        if code != 3 {
            return Err(format!("fault {n} exited {code}: {}", err.trim()));
        }
    }
    let controls: [(&str, &[&str]); 6] = [
        ("doctored.ws", &["glue", "P"]),
        ("doctored.ws", &["glue", "T"]),
        ("doctored.ws", &["glue", "S"]),
        ("qq.ws", &["check-conservative", "A", "id", "t1"]),
        ("qq.ws", &["check-cover", "A", "t1"]),
        ("schemes.ws", &["closed-subscheme", "mismatch"]),
    ];
    for (ws, args) in controls {
        let r = report(ws, args)?;
        if r.verdict != Verdict::Negative {
            return Err(format!("{ws} {args:?}: expected a negative verdict"));
        }
    }
    Ok(format!("10 injected faults exit 3, {} negative controls exit 0", controls.len()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = corpus();
    let on_corpus = |f: &dyn Fn(&Corpus) -> Outcome| corpus.as_ref().map_err(|e| e.clone()).and_then(f);
    let results: Vec<(&str, Outcome)> = vec![
        ("cover biconditional", on_corpus(&cover)),
        ("localization compatibility", on_corpus(&|c| each(c, 2, "localizations"))),
        ("quotient compatibility", on_corpus(&|c| each(c, 3, "quotients"))),
        ("base change", on_corpus(&|c| each(c, 4, "base-change triples"))),
        ("flat epi certificates", on_corpus(&|c| each(c, 5, "localizations certified"))),
        ("zero detection", on_corpus(&|c| each(c, 6, "module/cover pairs"))),
        ("integrality hierarchy", on_corpus(&hierarchy)),
        ("function field", on_corpus(&function_field)),
        ("closed subscheme gluing", closed_subschemes()),
        ("presheaf global sections", presheaves()),
        ("self-test severity", severity()),
    ];
    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({e})", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass in {:.1?}", results.len() - failed, results.len(), start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
