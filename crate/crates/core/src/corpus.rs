//! Fixture spaces and a seeded generator of small random spaces.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::inverse_semigroup::check_inverse_monoid;
use crate::statmeas::{build_space, transformation_closure, with_trivial_symmetry, FiniteMeasurableSpace, StatSpace};

pub const MAX_CORPUS_ATOMS: usize = 5;
pub const MAX_CORPUS_ORDER: usize = 8;

#[derive(Clone, Debug)]
pub struct CorpusSpace {
    pub name: String,
    pub space: Arc<StatSpace>,
    /// Atom-level generators, before inflation.
    pub generators: Vec<Vec<usize>>,
}

/// Four points, two commuting swaps `0↔2` and `1↔3`.
pub fn parity_space() -> Arc<StatSpace> {
    let space = FiniteMeasurableSpace::discrete(4).expect("four points");
    Arc::new(
        StatSpace::from_generators(space, &[vec![2, 1, 0, 3], vec![0, 3, 2, 1]], 16).expect("parity action is valid"),
    )
}

/// Two points and the idempotent map sending both to `0`.
pub fn collapse_space() -> Arc<StatSpace> {
    let space = FiniteMeasurableSpace::discrete(2).expect("two points");
    Arc::new(StatSpace::from_generators(space, &[vec![0, 0]], 16).expect("collapse action is valid"))
}

pub fn trivial_space(n: usize) -> Arc<StatSpace> {
    Arc::new(with_trivial_symmetry(
        FiniteMeasurableSpace::discrete(n).expect("nonempty"),
    ))
}

pub fn fixtures() -> Vec<CorpusSpace> {
    vec![
        CorpusSpace {
            name: "parity".into(),
            space: parity_space(),
            generators: vec![vec![2, 1, 0, 3], vec![0, 3, 2, 1]],
        },
        CorpusSpace {
            name: "collapse".into(),
            space: collapse_space(),
            generators: vec![vec![0, 0]],
        },
        CorpusSpace {
            name: "trivial-1".into(),
            space: trivial_space(1),
            generators: vec![],
        },
        CorpusSpace {
            name: "trivial-3".into(),
            space: trivial_space(3),
            generators: vec![],
        },
    ]
}

fn random_permutation(rng: &mut ChaCha8Rng, k: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..k).collect();
    p.shuffle(rng);
    p
}

/// An idempotent map: identity on a random image, other points sent into it.
fn random_retraction(rng: &mut ChaCha8Rng, k: usize) -> Vec<usize> {
    let keep: Vec<usize> = (0..k).filter(|_| rng.gen_bool(0.6)).collect();
    let keep = if keep.is_empty() {
        vec![rng.gen_range(0..k)]
    } else {
        keep
    };
    (0..k)
        .map(|x| {
            if keep.contains(&x) {
                x
            } else {
                keep[rng.gen_range(0..keep.len())]
            }
        })
        .collect()
}

/// Copies every atom-level map onto `copies` points per atom.
fn inflate(map: &[usize], copies: usize) -> Vec<usize> {
    (0..map.len() * copies)
        .map(|p| map[p / copies] * copies + p % copies)
        .collect()
}

/// A random valid space on at most `max_atoms` atoms whose monoid has order
/// at most `max_order`. Half of the draws add an idempotent generator.
pub fn random_space(rng: &mut ChaCha8Rng, max_atoms: usize, max_order: usize) -> CorpusSpace {
    loop {
        let k = rng.gen_range(1..=max_atoms);
        let mut gens = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            gens.push(random_permutation(rng, k));
        }
        let idempotent = rng.gen_bool(0.5);
        if idempotent {
            gens.push(random_retraction(rng, k));
        }
        let Ok((table, _)) = transformation_closure(k, &gens, max_order + 1) else {
            continue;
        };
        if table.order > max_order || !check_inverse_monoid(&table).is_valid() {
            continue;
        }
        let copies = rng.gen_range(1..=2);
        let points: Vec<String> = (0..k * copies).map(|p| format!("p{p}")).collect();
        let atoms: Vec<Vec<usize>> = (0..k).map(|a| (a * copies..(a + 1) * copies).collect()).collect();
        let Ok(space) = build_space(points, atoms) else {
            continue;
        };
        let inflated: Vec<Vec<usize>> = gens.iter().map(|g| inflate(g, copies)).collect();
        let Ok(stat) = StatSpace::from_generators(space, &inflated, max_order + 1) else {
            continue;
        };
        let kind = if idempotent { "mixed" } else { "group" };
        return CorpusSpace {
            name: format!("{kind}-{k}x{copies}-order{}", table.order),
            space: Arc::new(stat),
            generators: gens,
        };
    }
}

/// `count` random spaces from a fixed seed; the same seed gives the same list.
pub fn generate_corpus(seed: u64, count: usize) -> Vec<CorpusSpace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let mut c = random_space(&mut rng, MAX_CORPUS_ATOMS, MAX_CORPUS_ORDER);
            c.name = format!("gen{i:03}-{}", c.name);
            c
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic_and_bounded() {
        let a = generate_corpus(7, 30);
        let b = generate_corpus(7, 30);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.generators, y.generators);
            assert!(x.space.num_atoms() <= MAX_CORPUS_ATOMS);
            assert!(x.space.monoid().order() <= MAX_CORPUS_ORDER);
        }
        assert!(a.iter().any(|c| c.name.contains("mixed")));
        assert!(a.iter().any(|c| c.name.contains("group")));
    }

    #[test]
    fn inflation_respects_composition() {
        let f = vec![1, 0, 0];
        let g = vec![2, 2, 1];
        let fg: Vec<usize> = f.iter().map(|&x| g[x]).collect();
        let lhs: Vec<usize> = inflate(&f, 2).iter().map(|&x| inflate(&g, 2)[x]).collect();
        assert_eq!(lhs, inflate(&fg, 2));
    }
}
