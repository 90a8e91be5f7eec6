mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tarski_core::corpus::{fixtures, random_space};
use tarski_core::type_engine::{TypeEngine, Verdict};

use common::{box_elements, BoxOracle};

#[test]
fn decide_equal_matches_box_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut spaces: Vec<_> = fixtures().into_iter().filter(|c| c.space.num_atoms() <= 3).collect();
    while spaces.len() < 24 {
        spaces.push(random_space(&mut rng, 3, 8));
    }
    let mut mismatches = Vec::new();
    let mut unknown = 0;
    let mut pairs = 0;
    for c in &spaces {
        let engine = TypeEngine::new(c.space.clone());
        let mut oracle = BoxOracle::new(&c.space, 8);
        let elems = box_elements(c.space.num_atoms(), 3);
        for (i, p) in elems.iter().enumerate() {
            for q in &elems[i..] {
                pairs += 1;
                let d = engine.decide_equal(p, q).unwrap();
                engine.audit_equal(p, q, &d).unwrap();
                let truth = oracle.equal(p, q);
                match d.verdict {
                    Verdict::Unknown => unknown += 1,
                    Verdict::Equal if truth => {}
                    Verdict::NotEqual if !truth => {}
                    v => mismatches.push(format!("{}: {p:?} vs {q:?}: engine {v:?}, oracle {truth}", c.name)),
                }
            }
        }
    }
    for m in mismatches.iter().take(20) {
        eprintln!("{m}");
    }
    eprintln!("{pairs} pairs, {unknown} unknown, {} mismatches", mismatches.len());
    assert_eq!(unknown, 0);
    assert!(mismatches.is_empty());
}

#[test]
fn decide_leq_matches_box_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut spaces: Vec<_> = fixtures().into_iter().filter(|c| c.space.num_atoms() <= 3).collect();
    while spaces.len() < 16 {
        spaces.push(random_space(&mut rng, 3, 8));
    }
    let mut mismatches = Vec::new();
    let mut unknown = 0;
    for c in &spaces {
        let engine = TypeEngine::new(c.space.clone());
        let mut oracle = BoxOracle::new(&c.space, 8);
        let n = c.space.num_atoms();
        let elems = box_elements(n, 2);
        let gammas = box_elements(n, 4);
        for a in &elems {
            for b in &elems {
                let d = engine.decide_leq(a, b).unwrap();
                engine.audit_leq(a, b, &d).unwrap();
                let truth = gammas.iter().any(|g| {
                    let s = a.add(g).unwrap();
                    s.finite().iter().all(|&m| m <= 8) && oracle.equal(&s, b)
                });
                match d.verdict {
                    Verdict::Unknown => unknown += 1,
                    Verdict::Leq if truth => {}
                    Verdict::NotLeq if !truth => {}
                    v => mismatches.push(format!("{}: {a:?} ⪯ {b:?}: engine {v:?}, oracle {truth}", c.name)),
                }
            }
        }
    }
    for m in mismatches.iter().take(20) {
        eprintln!("{m}");
    }
    assert_eq!(unknown, 0);
    assert!(mismatches.is_empty());
}
