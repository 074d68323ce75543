use super::*;
use crate::greenring::derive_tables;

fn show(reps: &[CheckReport]) -> usize {
    let mut bad = 0;
    for r in reps {
        if !r.passed() {
            bad += 1;
            eprintln!("{}", r.to_json());
        }
    }
    bad
}

#[test]
fn suites_n3() {
    let v = Verifier::new(derive_tables(3, 4).unwrap()).unwrap();
    let t = std::time::Instant::now();
    let rel = v.all_relations(&[1, 2]);
    eprintln!("relations: {} reports, {:?}", rel.len(), t.elapsed());
    let basis = v.verify_basis(3);
    eprintln!("basis: {} reports, {:?}", basis.len(), t.elapsed());
    let om = v.verify_omega_band(2, 1);
    eprintln!("omega: {} reports, {:?}", om.len(), t.elapsed());
    let rob = v.robustness(200, 1);
    eprintln!("robust {:?}", t.elapsed());
    let st = v.stable_checks();
    let bad = show(&rel) + show(&basis) + show(&om) + show(&[rob]) + show(&st);
    assert_eq!(bad, 0);
}

#[test]
#[ignore]
fn suites_n4() {
    let t = std::time::Instant::now();
    let v = Verifier::new(derive_tables(4, 3).unwrap()).unwrap();
    eprintln!("tables {:?}", t.elapsed());
    let rel = v.all_relations(&[1, 2]);
    eprintln!("relations: {} reports, {:?}", rel.len(), t.elapsed());
    let basis = v.verify_basis(3);
    eprintln!("basis {:?}", t.elapsed());
    let om = v.verify_omega_band(2, 1);
    eprintln!("omega {:?}", t.elapsed());
    let bad = show(&rel) + show(&basis) + show(&om);
    assert_eq!(bad, 0);
}

#[test]
#[ignore]
fn sweep_n3() {
    let t = std::time::Instant::now();
    let v = Verifier::new(derive_tables(3, 4).unwrap()).unwrap();
    let reps = v.crosscheck_sweep(2, 2, 1);
    eprintln!("sweep: {} reports, {:?}", reps.len(), t.elapsed());
    assert_eq!(show(&reps), 0);
}
