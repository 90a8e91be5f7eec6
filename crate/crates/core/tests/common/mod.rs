//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use tarski_core::statmeas::{AtomSet, StatSpace};
use tarski_core::type_engine::AbarElement;

/// Union-find congruence closure of countable equidecomposability on the box
/// of elements with finite multiplicities at most `bound` (plus ω).
///
/// Generators are the atomic moves `[a] ~ [s⁻¹a]`; every derived pair
/// `P ~ Q` also yields `ω·supp P ~ ω·supp Q`. Pairs are translated by every
/// element of the box and closed to a fixed point.
pub struct BoxOracle {
    n: usize,
    bound: u32,
    parent: Vec<usize>,
}

const OMEGA: u32 = u32::MAX;

impl BoxOracle {
    pub fn new(space: &StatSpace, bound: u32) -> Self {
        let n = space.num_atoms();
        let size = (bound as usize + 2).pow(n as u32);
        let mut o = Self {
            n,
            bound,
            parent: (0..size).collect(),
        };
        let mut gens: HashSet<(Vec<u32>, Vec<u32>)> = HashSet::new();
        for s in space.monoid().elements() {
            for a in 0..n {
                let lhs: Vec<u32> = (0..n).map(|b| (a == b) as u32).collect();
                let r = space.pullback_atom(s, a);
                let rhs: Vec<u32> = (0..n).map(|b| r.contains(b) as u32).collect();
                if lhs != rhs {
                    gens.insert((lhs, rhs));
                }
            }
        }
        let mut applied: HashSet<(Vec<u32>, Vec<u32>)> = HashSet::new();
        loop {
            let fresh: Vec<_> = gens.difference(&applied).cloned().collect();
            if fresh.is_empty() {
                break;
            }
            for g in fresh {
                o.translate_all(&g.0, &g.1);
                applied.insert(g);
            }
            // ω-folds of everything derived so far
            let mut supports: std::collections::HashMap<usize, HashSet<u64>> = Default::default();
            for code in 0..o.parent.len() {
                let root = o.find(code);
                let v = o.decode(code);
                let sup = v
                    .iter()
                    .enumerate()
                    .filter(|(_, &m)| m > 0)
                    .fold(0u64, |acc, (a, _)| acc | 1 << a);
                supports.entry(root).or_default().insert(sup);
            }
            for sups in supports.values() {
                let list: Vec<u64> = sups.iter().copied().collect();
                for i in 0..list.len() {
                    for j in i + 1..list.len() {
                        let x = o.omega_vec(list[i]);
                        let y = o.omega_vec(list[j]);
                        if !gens.contains(&(y.clone(), x.clone())) {
                            gens.insert((x, y));
                        }
                    }
                }
            }
        }
        o
    }

    fn omega_vec(&self, sup: u64) -> Vec<u32> {
        (0..self.n).map(|a| if sup >> a & 1 == 1 { OMEGA } else { 0 }).collect()
    }

    fn base(&self) -> usize {
        self.bound as usize + 2
    }

    fn decode(&self, mut code: usize) -> Vec<u32> {
        let base = self.base();
        (0..self.n)
            .map(|_| {
                let d = code % base;
                code /= base;
                if d == base - 1 {
                    OMEGA
                } else {
                    d as u32
                }
            })
            .collect()
    }

    fn encode(&self, v: &[u32]) -> Option<usize> {
        let base = self.base();
        let mut code = 0;
        for &m in v.iter().rev() {
            let d = if m == OMEGA {
                base - 1
            } else if m <= self.bound {
                m as usize
            } else {
                return None;
            };
            code = code * base + d;
        }
        Some(code)
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn translate_all(&mut self, x: &[u32], y: &[u32]) {
        let add = |p: &[u32], z: &[u32]| -> Vec<u32> {
            p.iter()
                .zip(z)
                .map(|(&a, &b)| if a == OMEGA || b == OMEGA { OMEGA } else { a + b })
                .collect()
        };
        for code in 0..self.parent.len() {
            let z = self.decode(code);
            if let (Some(a), Some(b)) = (self.encode(&add(x, &z)), self.encode(&add(y, &z))) {
                self.union(a, b);
            }
        }
    }

    fn code_of(&self, p: &AbarElement) -> usize {
        let v: Vec<u32> = (0..self.n)
            .map(|a| if p.omega().contains(a) { OMEGA } else { p.finite()[a] })
            .collect();
        self.encode(&v).expect("element inside the box")
    }

    pub fn equal(&mut self, p: &AbarElement, q: &AbarElement) -> bool {
        let (a, b) = (self.code_of(p), self.code_of(q));
        self.find(a) == self.find(b)
    }
}

/// Elements with finite multiplicities at most `bound`, plus ω.
pub fn box_elements(n: usize, bound: u32) -> Vec<AbarElement> {
    let base = bound as usize + 2;
    (0..base.pow(n as u32))
        .map(|mut code| {
            let mut finite = vec![0u32; n];
            let mut omega = AtomSet::EMPTY;
            for (a, slot) in finite.iter_mut().enumerate() {
                let d = code % base;
                code /= base;
                if d == base - 1 {
                    omega = omega.with(a);
                } else {
                    *slot = d as u32;
                }
            }
            AbarElement::from_parts(finite, omega)
        })
        .collect()
}
