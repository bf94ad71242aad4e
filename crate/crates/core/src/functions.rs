//! Whirling of functions `[n] -> [k]` inside a constrained family.

use std::fmt;

use crate::error::{Error, Limits, Result};
use crate::stat::Predicate;

/// A function `[n] -> [k]` in one-line notation, values in `1..=k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OneLineFunction {
    values: Vec<u32>,
    k: u32,
}

impl OneLineFunction {
    pub fn new(values: Vec<u32>, k: u32) -> Result<Self> {
        if values.is_empty() || k == 0 {
            return Err(Error::InvalidSize("need n >= 1 and k >= 1".into()));
        }
        if let Some(v) = values.iter().find(|&&v| v < 1 || v > k) {
            return Err(Error::Precondition(format!("value {v} outside 1..={k}")));
        }
        Ok(OneLineFunction { values, k })
    }

    /// Accepts a digit string (`415`) or a comma list (`4,1,5`).
    pub fn parse(text: &str, k: u32) -> Result<Self> {
        let t = text.trim();
        let values: Option<Vec<u32>> = if t.contains(',') {
            t.split(',').map(|p| p.trim().parse().ok()).collect()
        } else {
            t.chars().map(|c| c.to_digit(10)).collect()
        };
        let values =
            values.ok_or_else(|| Error::parse(1, 1, format!("bad one-line function {t:?}")))?;
        Self::new(values, k)
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `|f^{-1}(j)|`.
    pub fn preimage_size(&self, j: u32) -> usize {
        self.values.iter().filter(|&&v| v == j).count()
    }
}

impl fmt::Display for OneLineFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k <= 9 {
            for v in &self.values {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.values.iter().map(u32::to_string).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for OneLineFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Debug)]
pub enum FamilyKind {
    /// Every preimage has at most `m` elements.
    Inj(usize),
    /// Every value in `[k]` has at least `m` preimages.
    Sur(usize),
    Custom(Predicate<OneLineFunction>),
}

/// A set of functions `[n] -> [k]` cut out by a membership test.
#[derive(Clone, Debug)]
pub struct FunctionFamily {
    n: usize,
    k: u32,
    kind: FamilyKind,
}

impl FunctionFamily {
    fn checked(n: usize, k: u32, kind: FamilyKind) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidSize("need n >= 1 and k >= 1".into()));
        }
        Ok(FunctionFamily { n, k, kind })
    }

    pub fn inj(m: usize, n: usize, k: u32) -> Result<Self> {
        Self::checked(n, k, FamilyKind::Inj(m))
    }

    pub fn sur(m: usize, n: usize, k: u32) -> Result<Self> {
        Self::checked(n, k, FamilyKind::Sur(m))
    }

    /// A family given by a predicate such as `f(1) != f(2)`.
    pub fn custom(n: usize, k: u32, predicate: &str) -> Result<Self> {
        let p = Predicate::for_functions(predicate, n, k)?;
        Self::checked(n, k, FamilyKind::Custom(p))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn contains(&self, f: &OneLineFunction) -> bool {
        if f.n() != self.n || f.k() != self.k {
            return false;
        }
        self.admits(&f.values)
    }

    fn admits(&self, values: &[u32]) -> bool {
        let counts = || {
            let mut c = vec![0usize; self.k as usize + 1];
            for &v in values {
                c[v as usize] += 1;
            }
            c
        };
        match &self.kind {
            FamilyKind::Inj(m) => counts()[1..].iter().all(|c| c <= m),
            FamilyKind::Sur(m) => counts()[1..].iter().all(|c| c >= m),
            FamilyKind::Custom(p) => p.holds(&OneLineFunction {
                values: values.to_vec(),
                k: self.k,
            }),
        }
    }

    /// All members in lexicographic order.
    pub fn members(&self, limits: Limits) -> Result<Vec<OneLineFunction>> {
        let total = (self.k as u128).checked_pow(self.n as u32);
        if total.is_none_or(|t| t > limits.max_states as u128) {
            return Err(Error::Resource {
                what: format!("function space [{}]^[{}]", self.k, self.n),
                cap: limits.max_states,
            });
        }
        let mut out = Vec::new();
        let mut values = vec![1u32; self.n];
        loop {
            if self.admits(&values) {
                out.push(OneLineFunction {
                    values: values.clone(),
                    k: self.k,
                });
            }
            let Some(i) = (0..self.n).rev().find(|&i| values[i] < self.k) else {
                return Ok(out);
            };
            values[i] += 1;
            for v in &mut values[i + 1..] {
                *v = 1;
            }
        }
    }
}

impl fmt::Display for FunctionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FamilyKind::Inj(m) => write!(f, "Inj_{m}({},{})", self.n, self.k),
            FamilyKind::Sur(m) => write!(f, "Sur_{m}({},{})", self.n, self.k),
            FamilyKind::Custom(p) => write!(f, "{{f in [{}]^[{}] : {}}}", self.k, self.n, p.text()),
        }
    }
}

/// Adds 1 (cycling through `1..=k`) at position `i` (1-based) until the
/// function is back in the family.
pub fn whirl_function_at(
    family: &FunctionFamily,
    f: &OneLineFunction,
    i: usize,
) -> Result<OneLineFunction> {
    if !family.contains(f) {
        return Err(Error::Precondition(format!("{f} is not in {family}")));
    }
    if i < 1 || i > family.n {
        return Err(Error::IndexOutOfRange {
            index: i,
            size: family.n,
        });
    }
    let mut values = f.values.clone();
    loop {
        values[i - 1] = values[i - 1] % family.k + 1;
        if family.admits(&values) {
            return Ok(OneLineFunction {
                values,
                k: family.k,
            });
        }
    }
}

/// Whirls at positions `1, 2, .., n` in that order.
pub fn whirl_function(family: &FunctionFamily, f: &OneLineFunction) -> Result<OneLineFunction> {
    let mut g = f.clone();
    for i in 1..=family.n {
        g = whirl_function_at(family, &g, i)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn olf(s: &str, k: u32) -> OneLineFunction {
        OneLineFunction::parse(s, k).unwrap()
    }

    #[test]
    fn custom_family_step() {
        let fam = FunctionFamily::custom(5, 4, "f(1) != f(2)").unwrap();
        let g = whirl_function_at(&fam, &olf("21344", 4), 2).unwrap();
        assert_eq!(g, olf("23344", 4));
    }

    #[test]
    fn injective_steps() {
        let fam = FunctionFamily::inj(1, 3, 6).unwrap();
        assert_eq!(whirl_function_at(&fam, &olf("415", 6), 1).unwrap(), olf("615", 6));
        let g = whirl_function(&fam, &olf("415", 6)).unwrap();
        assert_eq!(g, olf("621", 6));
        assert_eq!(whirl_function(&fam, &g).unwrap(), olf("342", 6));
    }

    #[test]
    fn unconstrained_position_moves_once() {
        let fam = FunctionFamily::custom(3, 5, "f(1) != f(2)").unwrap();
        assert_eq!(whirl_function_at(&fam, &olf("125", 5), 3).unwrap(), olf("121", 5));
    }

    #[test]
    fn rejects_non_members() {
        let fam = FunctionFamily::inj(1, 3, 6).unwrap();
        assert!(whirl_function_at(&fam, &olf("441", 6), 1).is_err());
        assert!(whirl_function_at(&fam, &olf("415", 6), 4).is_err());
    }

    #[test]
    fn bijections_of_three_are_fixed() {
        let fam = FunctionFamily::sur(1, 3, 3).unwrap();
        let members = fam.members(Limits::default()).unwrap();
        assert_eq!(members.len(), 6);
        for f in &members {
            // any single changed value repeats another one, so each step
            // cycles all the way back
            for i in 1..=3 {
                let mut changed = 0;
                for v in 1..=3u32 {
                    let mut vals = f.values().to_vec();
                    vals[i - 1] = v;
                    if fam.contains(&OneLineFunction::new(vals, 3).unwrap()) {
                        changed += 1;
                    }
                }
                assert_eq!(changed, 1);
            }
            assert_eq!(&whirl_function(&fam, f).unwrap(), f);
        }
    }

    #[test]
    fn member_counts() {
        let count = |fam: FunctionFamily| fam.members(Limits::default()).unwrap().len();
        assert_eq!(count(FunctionFamily::inj(1, 3, 6).unwrap()), 120);
        assert_eq!(count(FunctionFamily::sur(1, 4, 2).unwrap()), 14);
        assert_eq!(count(FunctionFamily::inj(2, 3, 4).unwrap()), 60);
        assert_eq!(count(FunctionFamily::inj(5, 2, 3).unwrap()), 9);
        assert!(FunctionFamily::inj(1, 12, 9).unwrap().members(Limits::with_cap(1000)).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(olf("415", 6).to_string(), "415");
        assert_eq!(olf("10,2,3", 12).to_string(), "10,2,3");
        assert!(OneLineFunction::parse("407", 6).is_err());
        assert_eq!(FunctionFamily::inj(1, 3, 6).unwrap().to_string(), "Inj_1(3,6)");
    }
}
