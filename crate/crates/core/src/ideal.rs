//! Order ideals, toggles, and rowmotion.

use std::fmt;

use crate::error::{Error, Limits, Result};
use crate::poset::{LinearExtension, Poset};
use crate::set::ElementSet;

/// A downward-closed subset of a poset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderIdeal {
    members: ElementSet,
}

impl OrderIdeal {
    pub fn empty(poset: &Poset) -> Self {
        OrderIdeal {
            members: ElementSet::empty(poset.size()),
        }
    }

    pub fn full(poset: &Poset) -> Self {
        OrderIdeal {
            members: ElementSet::full(poset.size()),
        }
    }

    /// Validates downward closure.
    pub fn new(poset: &Poset, members: ElementSet) -> Result<Self> {
        if members.universe() != poset.size() {
            return Err(Error::Precondition(format!(
                "set over {} elements used with poset of size {}",
                members.universe(),
                poset.size()
            )));
        }
        if !is_order_ideal(poset, &members) {
            return Err(Error::Precondition(format!(
                "{:?} is not downward closed",
                members
            )));
        }
        Ok(OrderIdeal { members })
    }

    /// The ideal generated by `generators`.
    pub fn generated_by(poset: &Poset, generators: impl IntoIterator<Item = usize>) -> Self {
        let mut members = ElementSet::empty(poset.size());
        for g in generators {
            members.union_with(poset.down_set(g));
        }
        OrderIdeal { members }
    }

    pub fn from_names(poset: &Poset, names: &[&str]) -> Result<Self> {
        let mut members = ElementSet::empty(poset.size());
        for n in names {
            let x = poset
                .index_of(n)
                .ok_or_else(|| Error::UnknownAtom(n.to_string()))?;
            members.insert(x);
        }
        Self::new(poset, members)
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Sorted member names.
    pub fn member_names<'a>(&self, poset: &'a Poset) -> Vec<&'a str> {
        self.members.iter().map(|x| poset.name(x)).collect()
    }

    pub fn to_bit_string(&self) -> String {
        self.members.to_bit_string()
    }
}

impl fmt::Debug for OrderIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrderIdeal({})", self.members.to_bit_string())
    }
}

pub fn is_order_ideal(poset: &Poset, set: &ElementSet) -> bool {
    set.iter()
        .all(|x| poset.lower_covers(x).iter().all(|&y| set.contains(y)))
}

pub fn toggle(poset: &Poset, ideal: &OrderIdeal, x: usize) -> Result<OrderIdeal> {
    if x >= poset.size() {
        return Err(Error::IndexOutOfRange {
            index: x,
            size: poset.size(),
        });
    }
    Ok(toggle_unchecked(poset, ideal, x))
}

fn toggle_unchecked(poset: &Poset, ideal: &OrderIdeal, x: usize) -> OrderIdeal {
    let mut out = ideal.clone();
    toggle_in_place(poset, &mut out.members, x);
    out
}

#[inline]
fn toggle_in_place(poset: &Poset, members: &mut ElementSet, x: usize) {
    if members.contains(x) {
        // removable iff x is maximal in the ideal
        if poset.upper_covers(x).iter().all(|&y| !members.contains(y)) {
            members.remove(x);
        }
    } else if poset.lower_covers(x).iter().all(|&y| members.contains(y)) {
        members.insert(x);
    }
}

/// Complement, take minimal elements, saturate down.
pub fn rowmotion_direct(poset: &Poset, ideal: &OrderIdeal) -> OrderIdeal {
    let complement = ideal.members.complement();
    let minimal = complement
        .iter()
        .filter(|&x| poset.lower_covers(x).iter().all(|&y| ideal.contains(y)));
    OrderIdeal::generated_by(poset, minimal)
}

/// Toggles once at every element, last element of `ext` first.
pub fn rowmotion_toggles(
    poset: &Poset,
    ideal: &OrderIdeal,
    ext: &LinearExtension,
) -> Result<OrderIdeal> {
    let ext = LinearExtension::new(poset, ext.as_slice().to_vec())?;
    let mut members = ideal.members.clone();
    for &x in ext.as_slice().iter().rev() {
        toggle_in_place(poset, &mut members, x);
    }
    Ok(OrderIdeal { members })
}

/// All order ideals, sorted.
///
/// Builds ideals by walking a linear extension and deciding each element in
/// turn; an element may be included only when its lower covers are.
pub fn enumerate_ideals(poset: &Poset, limits: Limits) -> Result<Vec<OrderIdeal>> {
    let ext = crate::poset::linear_extension(poset);
    let order = ext.as_slice();
    let mut out = Vec::new();
    let mut current = ElementSet::empty(poset.size());

    fn go(
        poset: &Poset,
        order: &[usize],
        depth: usize,
        current: &mut ElementSet,
        out: &mut Vec<OrderIdeal>,
        cap: usize,
    ) -> Result<()> {
        if depth == order.len() {
            if out.len() >= cap {
                return Err(Error::Resource {
                    what: "order ideal count".into(),
                    cap,
                });
            }
            out.push(OrderIdeal {
                members: current.clone(),
            });
            return Ok(());
        }
        let x = order[depth];
        go(poset, order, depth + 1, current, out, cap)?;
        if poset.lower_covers(x).iter().all(|&y| current.contains(y)) {
            current.insert(x);
            go(poset, order, depth + 1, current, out, cap)?;
            current.remove(x);
        }
        Ok(())
    }

    go(poset, order, 0, &mut current, &mut out, limits.max_states)?;
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{all_linear_extensions, make_chain, make_v, product_with_chain, Poset};

    fn ideal(p: &Poset, names: &[&str]) -> OrderIdeal {
        OrderIdeal::from_names(p, names).unwrap()
    }

    /// The 7-element poset of the worked toggle example, labeled 1..7 along
    /// its linear extension.
    pub(crate) fn two_diamonds() -> Poset {
        let names = (1..=7).map(|i| i.to_string()).collect();
        let rel = |a: usize, b: usize| (a - 1, b - 1);
        Poset::from_relations(
            names,
            &[rel(2, 5), rel(2, 4), rel(1, 4), rel(1, 3), rel(5, 7), rel(4, 7), rel(4, 6), rel(3, 6)],
        )
        .unwrap()
    }

    #[test]
    fn ideal_predicate() {
        let v = make_v();
        let set = |names: &[&str]| {
            ElementSet::from_indices(3, names.iter().map(|n| v.index_of(n).unwrap()))
        };
        assert!(is_order_ideal(&v, &set(&["c"])));
        assert!(!is_order_ideal(&v, &set(&["l"])));
        assert!(is_order_ideal(&v, &set(&[])));
    }

    #[test]
    fn toggles_on_v() {
        let v = make_v();
        let c = v.index_of("c").unwrap();
        let l = v.index_of("l").unwrap();
        assert_eq!(toggle(&v, &OrderIdeal::empty(&v), c).unwrap(), ideal(&v, &["c"]));
        assert_eq!(toggle(&v, &ideal(&v, &["c"]), l).unwrap(), ideal(&v, &["c", "l"]));
        let full = OrderIdeal::full(&v);
        assert_eq!(toggle(&v, &full, c).unwrap(), full);
        assert!(toggle(&v, &full, 3).is_err());
    }

    #[test]
    fn rowmotion_on_v() {
        let v = make_v();
        assert_eq!(rowmotion_direct(&v, &OrderIdeal::empty(&v)), ideal(&v, &["c"]));
        assert_eq!(rowmotion_direct(&v, &ideal(&v, &["c"])), OrderIdeal::full(&v));
        assert_eq!(rowmotion_direct(&v, &OrderIdeal::full(&v)), OrderIdeal::empty(&v));
    }

    #[test]
    fn three_step_example() {
        let p = two_diamonds();
        let start = ideal(&p, &["1", "2", "5"]);
        assert_eq!(rowmotion_direct(&p, &start), ideal(&p, &["1", "2", "3", "4"]));
    }

    #[test]
    fn worked_toggle_sequence() {
        let p = two_diamonds();
        let start = ideal(&p, &["1", "2", "3", "4", "6"]);
        let ext = LinearExtension::new(&p, (0..7).collect()).unwrap();
        let end = rowmotion_toggles(&p, &start, &ext).unwrap();
        assert_eq!(end, ideal(&p, &["2", "5"]));
        assert_eq!(end, rowmotion_direct(&p, &start));
    }

    #[test]
    fn rowmotion_on_three_chain() {
        let c3 = make_chain(3).unwrap();
        let ext = crate::poset::linear_extension(&c3);
        let image = rowmotion_toggles(&c3, &OrderIdeal::empty(&c3), &ext).unwrap();
        assert_eq!(image, ideal(&c3, &["0"]));
    }

    #[test]
    fn toggle_product_matches_definition_everywhere() {
        for p in [make_v(), two_diamonds(), make_chain(4).unwrap()] {
            let exts = all_linear_extensions(&p, 10_000).unwrap();
            for i in enumerate_ideals(&p, Limits::default()).unwrap() {
                let direct = rowmotion_direct(&p, &i);
                for ext in &exts {
                    assert_eq!(rowmotion_toggles(&p, &i, ext).unwrap(), direct);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_extension() {
        let v = make_v();
        let bogus = LinearExtension::new(&make_chain(3).unwrap(), vec![0, 1, 2]).unwrap();
        assert!(rowmotion_toggles(&v, &OrderIdeal::empty(&v), &bogus).is_err());
    }

    #[test]
    fn ideal_counts() {
        assert_eq!(enumerate_ideals(&make_v(), Limits::default()).unwrap().len(), 5);
        let v4 = product_with_chain(&make_v(), 4, Limits::default()).unwrap();
        assert_eq!(enumerate_ideals(&v4, Limits::default()).unwrap().len(), 55);
        for n in 1..8 {
            let c = make_chain(n).unwrap();
            assert_eq!(enumerate_ideals(&c, Limits::default()).unwrap().len(), n + 1);
        }
        let err = enumerate_ideals(&v4, Limits::with_cap(10)).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn enumeration_matches_subset_filter() {
        let p = two_diamonds();
        let brute: Vec<OrderIdeal> = (0u32..1 << 7)
            .map(|mask| ElementSet::from_indices(7, (0..7).filter(|i| mask >> i & 1 == 1)))
            .filter(|s| is_order_ideal(&p, s))
            .map(|s| OrderIdeal::new(&p, s).unwrap())
            .collect();
        let mut brute = brute;
        brute.sort();
        assert_eq!(enumerate_ideals(&p, Limits::default()).unwrap(), brute);
    }

    #[test]
    fn toggles_are_involutions() {
        let p = two_diamonds();
        for i in enumerate_ideals(&p, Limits::default()).unwrap() {
            for x in 0..p.size() {
                let once = toggle(&p, &i, x).unwrap();
                assert!(is_order_ideal(&p, once.members()));
                assert_eq!(toggle(&p, &once, x).unwrap(), i);
                for y in 0..p.size() {
                    if !p.comparable(x, y) {
                        let xy = toggle(&p, &toggle(&p, &i, y).unwrap(), x).unwrap();
                        let yx = toggle(&p, &once, y).unwrap();
                        assert_eq!(xy, yx);
                    }
                }
            }
        }
    }
}
