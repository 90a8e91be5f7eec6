//! JSON formats: space files, set expressions, realizations, measures and
//! decision reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::inverse_semigroup::{check_inverse_monoid, InverseMonoidTable, MonoidTable};
use crate::linalg::Q;
use crate::measures::RationalStationaryMeasure;
use crate::statmeas::{build_space, validate_action, AtomSet, FiniteMeasurableSpace, StatSpace};
use crate::type_engine::{AbarElement, Chain, ChainStep, Decision, MeasureWitness, Move, Realization, Witness};

pub const SCHEMA_VERSION: u32 = 1;

/// Largest monoid closed from generators in a space file.
pub const GENERATOR_CLOSURE_CAP: usize = 4096;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

/// A point map keyed by point label.
pub type PointMap = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MonoidSpec {
    /// Total point maps, closed under composition.
    Generators {
        generators: Vec<PointMap>,
    },
    Table(MonoidTable),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceFile {
    #[serde(default = "schema_version")]
    pub schema: u32,
    pub points: Vec<String>,
    /// Atoms as lists of point labels.
    pub atoms: Vec<Vec<String>>,
    pub monoid: MonoidSpec,
    /// Action of each table element, keyed by element label or index.
    #[serde(default)]
    pub action: BTreeMap<String, PointMap>,
}

/// Result of validating a space file.
#[derive(Clone, Debug)]
pub struct SpaceCheck {
    pub space: Option<StatSpace>,
    pub failures: Vec<String>,
}

impl SpaceCheck {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

fn point_index(points: &[String], label: &str) -> Result<usize> {
    points
        .iter()
        .position(|p| p == label)
        .ok_or_else(|| Error::Malformed(format!("unknown point '{label}'")))
}

fn total_map(points: &[String], m: &PointMap) -> Result<Vec<usize>> {
    points
        .iter()
        .map(|p| {
            let y = m
                .get(p)
                .ok_or_else(|| Error::Malformed(format!("map leaves point '{p}' undefined")))?;
            point_index(points, y)
        })
        .collect()
}

impl SpaceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(format!("space file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    fn measurable(&self) -> Result<FiniteMeasurableSpace> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| a.iter().map(|p| point_index(&self.points, p)).collect())
            .collect::<Result<_>>()?;
        build_space(self.points.clone(), atoms)
    }

    /// Full validation: partition, monoid axioms, action laws and
    /// measurability. Errors only for references to unknown names.
    pub fn check(&self) -> Result<SpaceCheck> {
        let mut failures = Vec::new();
        if self.schema != SCHEMA_VERSION {
            failures.push(format!("schema version {} (expected {SCHEMA_VERSION})", self.schema));
        }
        let space = match self.measurable() {
            Ok(s) => s,
            Err(e) => {
                failures.push(e.to_string());
                return Ok(SpaceCheck { space: None, failures });
            }
        };
        match &self.monoid {
            MonoidSpec::Generators { generators } => {
                let gens = generators
                    .iter()
                    .map(|g| total_map(&self.points, g))
                    .collect::<Result<Vec<_>>>()?;
                match StatSpace::from_generators(space, &gens, GENERATOR_CLOSURE_CAP) {
                    Ok(s) => Ok(SpaceCheck {
                        space: Some(s),
                        failures,
                    }),
                    Err(e) => {
                        failures.push(e.to_string());
                        Ok(SpaceCheck { space: None, failures })
                    }
                }
            }
            MonoidSpec::Table(table) => {
                let report = check_inverse_monoid(table);
                if !report.is_valid() {
                    failures.extend(report.failures.iter().map(|f| f.to_string()));
                    return Ok(SpaceCheck { space: None, failures });
                }
                let monoid = InverseMonoidTable::new(table.clone())?;
                let mut action = Vec::new();
                for s in 0..table.order {
                    let m = self
                        .action
                        .get(&table.label(s))
                        .or_else(|| self.action.get(&s.to_string()))
                        .ok_or_else(|| Error::Malformed(format!("no action given for element {}", table.label(s))))?;
                    action.push(total_map(&self.points, m)?);
                }
                let report = validate_action(&space, &monoid, &action);
                if !report.is_valid() {
                    failures.extend(report.violations.iter().map(|v| v.to_string()));
                    return Ok(SpaceCheck { space: None, failures });
                }
                let s = StatSpace::new(space, monoid, action)?;
                Ok(SpaceCheck {
                    space: Some(s),
                    failures,
                })
            }
        }
    }

    /// The validated space, or the first failure.
    pub fn load(&self) -> Result<StatSpace> {
        let check = self.check()?;
        match check.space {
            Some(s) if check.failures.is_empty() => Ok(s),
            _ => Err(Error::InvalidAction(check.failures.join("; "))),
        }
    }

    /// Explicit-table form of a space.
    pub fn of_space(space: &StatSpace) -> Self {
        let fs = space.space();
        let points = fs.points().to_vec();
        let table = space.monoid().table().clone();
        let action = (0..table.order)
            .map(|s| {
                let map = space
                    .action(s)
                    .iter()
                    .enumerate()
                    .map(|(x, &y)| (points[x].clone(), points[y].clone()))
                    .collect();
                (table.label(s), map)
            })
            .collect();
        Self {
            schema: SCHEMA_VERSION,
            atoms: fs
                .atoms()
                .iter()
                .map(|a| a.iter().map(|&p| points[p].clone()).collect())
                .collect(),
            points,
            monoid: MonoidSpec::Table(table),
            action,
        }
    }
}

/// Comma-separated point labels or atom indices; the empty string is `∅`.
/// Points must fill whole atoms.
pub fn parse_set(space: &StatSpace, expr: &str) -> Result<AtomSet> {
    let fs = space.space();
    let mut points = Vec::new();
    for token in expr.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some(p) = fs.point_index(token) {
            points.push(p);
        } else if let Some(a) = token.parse::<usize>().ok().filter(|&a| a < fs.num_atoms()) {
            points.extend(fs.atoms()[a].iter().copied());
        } else {
            return Err(Error::Malformed(format!("'{token}' names no point or atom")));
        }
    }
    fs.measurable_set(&points)
}

/// Sum of terms `k*SET` or `w*SET` (`ω` also accepted); a bare `SET`
/// counts once. `SET` uses the syntax of [`parse_set`].
pub fn parse_element(space: &StatSpace, expr: &str) -> Result<AbarElement> {
    let n = space.num_atoms();
    let mut acc = AbarElement::zero(n);
    for term in expr.split('+').map(str::trim).filter(|t| !t.is_empty()) {
        let (coeff, set) = match term.split_once('*') {
            Some((c, set)) => (c.trim(), set),
            None => ("1", term),
        };
        let set = parse_set(space, set)?;
        let part = match coeff {
            "w" | "ω" => AbarElement::omega_of(n, set),
            k => {
                let k = k
                    .parse::<u32>()
                    .map_err(|_| Error::Malformed(format!("bad multiplicity '{k}'")))?;
                AbarElement::of_set(n, set).scale(k)
            }
        };
        acc = acc.add(&part)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceJson {
    #[serde(default)]
    pub finite: BTreeMap<usize, u32>,
    #[serde(default)]
    pub omega: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveJson {
    pub s: usize,
    pub t: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationJson {
    pub left: Vec<PieceJson>,
    pub right: Vec<PieceJson>,
    pub moves: Vec<MoveJson>,
}

pub fn piece_json(p: &AbarElement) -> PieceJson {
    PieceJson {
        finite: p
            .finite()
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(a, &m)| (a, m))
            .collect(),
        omega: p.omega().iter().collect(),
    }
}

pub fn piece_from_json(n: usize, p: &PieceJson) -> Result<AbarElement> {
    let mut finite = vec![0u32; n];
    for (&a, &m) in &p.finite {
        if a >= n {
            return Err(Error::OutOfRange { value: a, bound: n });
        }
        finite[a] = m;
    }
    if let Some(&a) = p.omega.iter().find(|&&a| a >= n) {
        return Err(Error::OutOfRange { value: a, bound: n });
    }
    Ok(AbarElement::from_parts(
        finite,
        AtomSet::from_atoms(p.omega.iter().copied()),
    ))
}

pub fn realization_json(r: &Realization) -> RealizationJson {
    RealizationJson {
        left: r.left.iter().map(piece_json).collect(),
        right: r.right.iter().map(piece_json).collect(),
        moves: r.moves.iter().map(|m| MoveJson { s: m.s, t: m.t }).collect(),
    }
}

pub fn realization_from_json(n: usize, r: &RealizationJson) -> Result<Realization> {
    Ok(Realization {
        left: r.left.iter().map(|p| piece_from_json(n, p)).collect::<Result<_>>()?,
        right: r.right.iter().map(|p| piece_from_json(n, p)).collect::<Result<_>>()?,
        moves: r.moves.iter().map(|m| Move { s: m.s, t: m.t }).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureJson {
    pub finite: BTreeMap<usize, String>,
    pub infinite: Vec<usize>,
}

pub fn measure_json(m: &RationalStationaryMeasure) -> MeasureJson {
    MeasureJson {
        finite: (0..m.finite.len())
            .filter(|&a| !m.infinite.contains(a))
            .map(|a| (a, m.finite[a].to_string()))
            .collect(),
        infinite: m.infinite.iter().collect(),
    }
}

pub fn measure_from_json(n: usize, m: &MeasureJson) -> Result<RationalStationaryMeasure> {
    let mut finite = vec![Q::from_integer(0.into()); n];
    for (&a, v) in &m.finite {
        if a >= n {
            return Err(Error::OutOfRange { value: a, bound: n });
        }
        finite[a] = v
            .parse::<Q>()
            .map_err(|e| Error::Malformed(format!("value '{v}' of atom {a}: {e}")))?;
    }
    if let Some(&a) = m.infinite.iter().find(|&&a| a >= n) {
        return Err(Error::OutOfRange { value: a, bound: n });
    }
    Ok(RationalStationaryMeasure {
        finite,
        infinite: AtomSet::from_atoms(m.infinite.iter().copied()),
    })
}

fn measure_witness_json(w: &MeasureWitness) -> Value {
    json!({"values": w.values, "infinite": w.infinite.iter().collect::<Vec<_>>()})
}

fn chain_json(space: &StatSpace, c: &Chain) -> Value {
    let steps: Vec<Value> = c
        .steps
        .iter()
        .map(|s| match s {
            ChainStep::Move { realization, to } => json!({
                "move": realization_json(realization),
                "to": to.render(space),
            }),
            ChainStep::Absorb { to } => json!({"absorb": to.render(space)}),
        })
        .collect();
    json!({"start": c.start.render(space), "moves": c.moves(), "steps": steps})
}

/// Machine-readable decision with its witness.
pub fn decision_json(space: &StatSpace, d: &Decision) -> Value {
    let witness = match &d.witness {
        Witness::Chain(c) => json!({"kind": "chain", "chain": chain_json(space, c)}),
        Witness::Dominated { gamma, chain } => json!({
            "kind": "dominated",
            "gamma": gamma.render(space),
            "chain": chain_json(space, chain),
        }),
        Witness::Functional { y, vanishing_on } => json!({
            "kind": "functional",
            "y": y,
            "vanishing_on": vanishing_on.iter().collect::<Vec<_>>(),
        }),
        Witness::Measure(m) => json!({"kind": "measure", "measure": measure_witness_json(m)}),
        Witness::ClosedClass {
            modulo,
            class_of,
            cap,
            size,
            escapes,
        } => json!({
            "kind": "closed-class",
            "modulo": modulo.iter().collect::<Vec<_>>(),
            "class_of": class_of,
            "cap": cap,
            "size": size,
            "escapes": escapes.iter().map(|(d, m)| json!({"atom": d, "measure": measure_witness_json(m)})).collect::<Vec<_>>(),
        }),
        Witness::Exhausted { reason } => json!({"kind": "exhausted", "reason": reason}),
    };
    json!({"verdict": d.verdict, "witness": witness})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{collapse_space, parity_space};
    use crate::linalg::q;

    #[test]
    fn space_round_trip() {
        for s in [parity_space(), collapse_space()] {
            let text = SpaceFile::of_space(&s).to_json();
            let back = SpaceFile::from_json(&text).unwrap().load().unwrap();
            assert_eq!(back.monoid().order(), s.monoid().order());
            assert_eq!(back.num_atoms(), s.num_atoms());
            for e in s.monoid().elements() {
                assert_eq!(back.action(e), s.action(e));
            }
        }
    }

    #[test]
    fn generators_and_failures() {
        let text = r#"{"points":["x","y"],"atoms":[["x"],["y"]],"monoid":{"generators":[{"x":"x","y":"x"}]}}"#;
        let s = SpaceFile::from_json(text).unwrap().load().unwrap();
        assert_eq!(s.monoid().order(), 2);

        let bad = r#"{"points":["x"],"atoms":[["x"]],
            "monoid":{"order":3,"unit":0,"mul":[[0,1,2],[1,1,1],[2,2,2]]},
            "action":{"0":{"x":"x"},"1":{"x":"x"},"2":{"x":"x"}}}"#;
        let check = SpaceFile::from_json(bad).unwrap().check().unwrap();
        assert!(!check.is_valid());
        assert!(
            check.failures.iter().any(|f| f.contains("do not commute")),
            "{:?}",
            check.failures
        );

        let err = SpaceFile::from_json("{\"points\": [\"x\",]}").unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
        let partial = r#"{"points":["x","y"],"atoms":[["x"],["y"]],"monoid":{"generators":[{"x":"y"}]}}"#;
        assert!(SpaceFile::from_json(partial).unwrap().check().is_err());
    }

    #[test]
    fn set_expressions() {
        let p = parity_space();
        assert_eq!(parse_set(&p, "0,1").unwrap(), AtomSet(0b0011));
        assert_eq!(parse_set(&p, "").unwrap(), AtomSet::EMPTY);
        assert!(parse_set(&p, "7").is_err());
        let x = parse_element(&p, "3*0,1 + w*2 + 3").unwrap();
        assert_eq!(x.finite(), &[3, 3, 0, 1]);
        assert_eq!(x.omega(), AtomSet::singleton(2));
        assert_eq!(parse_element(&p, "0").unwrap(), AbarElement::atom(4, 0));
        assert!(parse_element(&p, "x*0").is_err());
    }

    #[test]
    fn measure_round_trip() {
        let m = RationalStationaryMeasure {
            finite: vec![q(1) / q(3), q(0), q(0)],
            infinite: AtomSet::singleton(2),
        };
        let j = measure_json(&m);
        assert_eq!(j.finite[&0], "1/3");
        let text = serde_json::to_string(&j).unwrap();
        let back: MeasureJson = serde_json::from_str(&text).unwrap();
        assert_eq!(measure_from_json(3, &back).unwrap(), m);
    }
}
