//! The acceptance criteria, run in order. One line per criterion; the
//! process exits non-zero if any of them fails.

use std::time::Instant;

use greenring::greenring::{derive_tables, Presentation, RingElement};
use greenring::modcat::{IndecLabel, Sign};
use greenring::verify::{lemma_sweep, CheckReport, Status, Verifier};

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

/// All reports pass; otherwise the first offender.
fn all_pass(what: &str, reps: &[CheckReport]) -> Outcome {
    let bad: Vec<&CheckReport> = reps.iter().filter(|r| r.status != Status::Pass).collect();
    match bad.first() {
        None if reps.len() == 1 => pass(reps[0].detail.clone().unwrap_or_default()),
        None => pass(format!("{} {what} checks", reps.len())),
        Some(r) => fail(format!(
            "{} of {} {what} checks not passing; first: {} {} {} {}",
            bad.len(),
            reps.len(),
            r.status.as_str(),
            r.id,
            r.inputs,
            r.detail.as_deref().unwrap_or("")
        )),
    }
}

fn merge(parts: Vec<(&str, Outcome)>) -> Outcome {
    let ok = parts.iter().all(|(_, o)| o.ok);
    let detail = parts.iter().map(|(k, o)| format!("{k}: {}", o.detail)).collect::<Vec<_>>().join("; ");
    Outcome { ok, detail }
}

fn rewriting(v3: &Verifier) -> Outcome {
    let pr = Presentation::get(3);
    let zz = pr.normal_form(&RingElement::z_plus().mul(&RingElement::z_minus()));
    let want = RingElement::int(-3)
        .sub(&RingElement::xy(1, 1).scale_int(2))
        .add(&RingElement::xy(0, 3).scale_int(2))
        .add(&RingElement::xy(2, 2).scale_int(4));
    if zz != want {
        return fail(format!("z+ z- = {zz}"));
    }
    let p = |l, r| v3.class(&IndecLabel::proj(3, l, r).unwrap());
    let lhs = match (p(1, 0), p(3, 2)) {
        (Ok(a), Ok(b)) => pr.normal_form(&a.add(&b)),
        (Err(e), _) | (_, Err(e)) => return fail(e.to_string()),
    };
    let f1 = pr.f_poly(1);
    let xf = pr.normal_form(&RingElement::x().mul(f1).mul(f1));
    let want = RingElement::xy(1, 4).sub(&RingElement::xy(2, 2).scale_int(2)).add(&RingElement::one());
    if lhs != xf || xf != want {
        return fail(format!("[P(1,0)] + [P(3,2)] = {lhs}, x f1^2 = {xf}"));
    }
    pass(format!("z+ z- = {zz}; [P(1,0)] + [P(3,2)] = x f1^2 = {xf}"))
}

fn decomposition(v3: &Verifier) -> Outcome {
    let n = 3;
    let cases = [
        (
            IndecLabel::simple(n, 3, 1).unwrap(),
            IndecLabel::simple(n, 3, 0).unwrap(),
            vec![(IndecLabel::proj(n, 1, 0).unwrap(), 1), (IndecLabel::simple(n, 3, 2).unwrap(), 1)],
            9,
        ),
        (
            IndecLabel::syz(n, Sign::Plus, 1, 1, 0).unwrap(),
            IndecLabel::syz(n, Sign::Minus, 1, 1, 0).unwrap(),
            vec![
                (IndecLabel::simple(n, 1, 0).unwrap(), 1),
                (IndecLabel::proj(n, 2, 1).unwrap(), 2),
                (IndecLabel::simple(n, 3, 2).unwrap(), 4),
            ],
            25,
        ),
    ];
    let mut notes = Vec::new();
    for (a, b, mut want, dim) in cases {
        let mut got = match v3.cat.decompose_tensor(&a, &b) {
            Ok(g) => g,
            Err(e) => return fail(format!("{a} ⊗ {b}: {e}")),
        };
        got.sort();
        want.sort();
        let audit: Vec<usize> = got.iter().map(|(l, k)| k * l.dim(n)).collect();
        let total: usize = audit.iter().sum();
        let shown = got
            .iter()
            .map(|(l, k)| if *k == 1 { l.to_string() } else { format!("{k}{l}") })
            .collect::<Vec<_>>()
            .join(" + ");
        if got != want || total != dim || a.dim(n) * b.dim(n) != dim {
            return fail(format!("{a} ⊗ {b} = {shown}, dims {total}"));
        }
        let audit = audit.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" + ");
        notes.push(format!("{a} ⊗ {b} = {shown} ({dim} = {audit})"));
    }
    pass(notes.join("; "))
}

fn main() {
    let t0 = Instant::now();
    let mut results: Vec<(u32, &str, Outcome, f64)> = Vec::new();
    let mut run = |k: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        let secs = t.elapsed().as_secs_f64();
        println!(
            "criterion {k} {} {name} ({secs:.1}s): {}",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push((k, name, o, secs));
    };

    run(1, "binomial identity sweep", &mut || {
        let r = lemma_sweep(60);
        all_pass("identity", &[r])
    });

    let tables = |n, m| derive_tables(n, m).unwrap_or_else(|e| panic!("deriving tables for n={n}: {e}"));
    let v3 = Verifier::new(tables(3, 4)).expect("n=3 verifier");
    let v4 = Verifier::new(tables(4, 3)).expect("n=4 verifier");

    run(2, "rewriting soundness at n=3", &mut || rewriting(&v3));
    run(3, "oracle decompositions at n=3", &mut || decomposition(&v3));
    run(4, "cross-check sweep at n=3", &mut || all_pass("product", &v3.crosscheck_sweep(2, 2, 1)));
    run(5, "named relations at n=3 and n=4", &mut || {
        merge(vec![
            ("n=3", all_pass("relation", &v3.all_relations(&[1, 2]))),
            ("n=4", all_pass("relation", &v4.all_relations(&[1, 2]))),
        ])
    });
    run(6, "syzygy law on bands at n=3 and n=4", &mut || {
        merge(vec![
            ("n=3", all_pass("band", &v3.verify_omega_band(2, 1))),
            ("n=4", all_pass("band", &v4.verify_omega_band(2, 1))),
        ])
    });
    run(7, "normal-form robustness", &mut || all_pass("robustness", &[v3.robustness(1000, 0)]));
    run(8, "basis unimodularity at n=3 and n=4", &mut || {
        merge(vec![
            ("n=3", all_pass("block", &v3.verify_basis(3))),
            ("n=4", all_pass("block", &v4.verify_basis(3))),
        ])
    });
    run(9, "stable quotient at n=3", &mut || all_pass("stable", &v3.stable_checks()));

    let passed = results.iter().filter(|r| r.2.ok).count();
    println!(
        "acceptance: {passed}/{} criteria passed in {:.1}s",
        results.len(),
        t0.elapsed().as_secs_f64()
    );
    if passed != results.len() {
        std::process::exit(1);
    }
}
