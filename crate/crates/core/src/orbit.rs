//! Orbits of invertible maps, orbit boards, and exact homomesy checks.

use std::collections::HashSet;
use std::hash::Hash;

use num_integer::Integer;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{Error, Limits, Result};
use crate::poset::{linear_extension, Poset};
use crate::stat::{ratio_string, Observable, Statistic};
use crate::whirl::{whirl_along, PPartition};

/// One cycle of a bijection, rotated so that `states[0]` is the least
/// state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit<S> {
    states: Vec<S>,
}

impl<S: Ord> Orbit<S> {
    fn canonical(mut states: Vec<S>) -> Self {
        let least = (0..states.len())
            .min_by(|&a, &b| states[a].cmp(&states[b]))
            .unwrap_or(0);
        states.rotate_left(least);
        Orbit { states }
    }
}

impl<S> Orbit<S> {
    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn representative(&self) -> &S {
        &self.states[0]
    }
}

/// The cycle through `x0` in step order, starting at `x0`.
pub fn cycle_from<S, F>(mut step: F, x0: &S, limits: Limits) -> Result<Vec<S>>
where
    S: Clone + PartialEq,
    F: FnMut(&S) -> S,
{
    let mut states = vec![x0.clone()];
    loop {
        let next = step(states.last().expect("nonempty"));
        if next == *x0 {
            return Ok(states);
        }
        if states.len() >= limits.max_states {
            return Err(Error::Resource {
                what: "orbit length".into(),
                cap: limits.max_states,
            });
        }
        states.push(next);
    }
}

pub fn orbit_of<S, F>(step: F, x0: &S, limits: Limits) -> Result<Orbit<S>>
where
    S: Clone + Ord,
    F: FnMut(&S) -> S,
{
    Ok(Orbit::canonical(cycle_from(step, x0, limits)?))
}

/// Splits `space` into orbits, sorted by representative.
pub fn all_orbits<S, F>(mut step: F, space: &[S], limits: Limits) -> Result<Vec<Orbit<S>>>
where
    S: Clone + Ord + Hash,
    F: FnMut(&S) -> S,
{
    let mut seen: HashSet<S> = HashSet::with_capacity(space.len());
    let mut out = Vec::new();
    for x in space {
        if seen.contains(x) {
            continue;
        }
        let orbit = orbit_of(&mut step, x, limits)?;
        seen.extend(orbit.states.iter().cloned());
        out.push(orbit);
    }
    out.sort_by(|a, b| a.representative().cmp(b.representative()));
    Ok(out)
}

/// Least common multiple of the orbit lengths.
pub fn map_order<S>(orbits: &[Orbit<S>]) -> u128 {
    orbits.iter().fold(1u128, |acc, o| acc.lcm(&(o.len() as u128)))
}

/// Sorted multiset of orbit lengths.
pub fn orbit_lengths<S>(orbits: &[Orbit<S>]) -> Vec<usize> {
    let mut v: Vec<usize> = orbits.iter().map(Orbit::len).collect();
    v.sort_unstable();
    v
}

pub fn orbit_average<S: Observable>(stat: &Statistic<S>, orbit: &Orbit<S>) -> BigRational {
    average_of(stat, orbit.states())
}

pub fn average_of<S: Observable>(stat: &Statistic<S>, states: &[S]) -> BigRational {
    stat.total(states) / BigRational::from_integer(states.len().into())
}

fn ser_ratio<Z: Serializer>(r: &BigRational, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
    s.serialize_str(&ratio_string(r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitAverage {
    pub representative: String,
    pub length: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub average: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HomomesyVerdict {
    Homomesic {
        #[serde(serialize_with = "ser_ratio")]
        value: BigRational,
    },
    /// Indices into the per-orbit list of two orbits with different
    /// averages.
    NotHomomesic { first: usize, second: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomomesyReport {
    pub statistic: String,
    pub orbits: Vec<OrbitAverage>,
    pub verdict: HomomesyVerdict,
}

impl HomomesyReport {
    pub fn is_homomesic(&self) -> bool {
        matches!(self.verdict, HomomesyVerdict::Homomesic { .. })
    }

    /// The common average, if there is one.
    pub fn value(&self) -> Option<&BigRational> {
        match &self.verdict {
            HomomesyVerdict::Homomesic { value } => Some(value),
            HomomesyVerdict::NotHomomesic { .. } => None,
        }
    }
}

pub fn homomesy_check<S: Observable>(
    stat: &Statistic<S>,
    orbits: &[Orbit<S>],
    render: impl Fn(&S) -> String,
) -> HomomesyReport {
    let averages: Vec<OrbitAverage> = orbits
        .iter()
        .map(|o| OrbitAverage {
            representative: render(o.representative()),
            length: o.len(),
            average: orbit_average(stat, o),
        })
        .collect();
    let verdict = match averages.iter().position(|a| a.average != averages[0].average) {
        Some(j) => HomomesyVerdict::NotHomomesic { first: 0, second: j },
        None => HomomesyVerdict::Homomesic {
            value: averages
                .first()
                .map_or_else(|| BigRational::from_integer(0.into()), |a| a.average.clone()),
        },
    };
    HomomesyReport {
        statistic: stat.text().to_string(),
        orbits: averages,
        verdict,
    }
}

/// Successive states of one whirling orbit, read cyclically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitBoard {
    rows: Vec<PPartition>,
}

impl OrbitBoard {
    /// Checks that each row whirls to the next, cyclically.
    pub fn new(poset: &Poset, rows: Vec<PPartition>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Precondition("empty orbit board".into()));
        }
        let ext = linear_extension(poset);
        for (i, row) in rows.iter().enumerate() {
            let next = &rows[(i + 1) % rows.len()];
            if whirl_along(poset, row, &ext) != *next {
                return Err(Error::Precondition(format!(
                    "row {i} {row} does not whirl to row {} {next}",
                    (i + 1) % rows.len()
                )));
            }
        }
        Ok(OrbitBoard { rows })
    }

    /// The board of the orbit through `f`, starting at `f`.
    pub fn from_seed(poset: &Poset, f: &PPartition, limits: Limits) -> Result<Self> {
        let ext = linear_extension(poset);
        let rows = cycle_from(|g| whirl_along(poset, g, &ext), f, limits)?;
        Ok(OrbitBoard { rows })
    }

    pub fn from_orbit(orbit: &Orbit<PPartition>) -> Self {
        OrbitBoard {
            rows: orbit.states().to_vec(),
        }
    }

    pub fn rows(&self) -> &[PPartition] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn width(&self) -> usize {
        self.rows[0].labels().len()
    }

    pub fn k(&self) -> u32 {
        self.rows[0].bound()
    }

    /// Label at `(row mod len, x)`.
    pub fn label(&self, row: usize, x: usize) -> u32 {
        self.rows[row % self.rows.len()].label(x)
    }
}

/// An orbit board repeated `multiple` times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperOrbitBoard {
    orbit: OrbitBoard,
    multiple: usize,
    expanded: OrbitBoard,
}

impl SuperOrbitBoard {
    pub fn new(orbit: OrbitBoard, multiple: usize) -> Result<Self> {
        if multiple == 0 {
            return Err(Error::Precondition("super-orbit multiple must be positive".into()));
        }
        let rows = orbit
            .rows
            .iter()
            .cycle()
            .take(orbit.len() * multiple)
            .cloned()
            .collect();
        Ok(SuperOrbitBoard {
            orbit,
            multiple,
            expanded: OrbitBoard { rows },
        })
    }

    pub fn orbit(&self) -> &OrbitBoard {
        &self.orbit
    }

    pub fn multiple(&self) -> usize {
        self.multiple
    }

    /// The repeated rows as one cyclic board.
    pub fn board(&self) -> &OrbitBoard {
        &self.expanded
    }

    pub fn len(&self) -> usize {
        self.expanded.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}
