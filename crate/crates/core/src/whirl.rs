//! k-bounded P-partitions, whirling, and the equivariant bijection with
//! order ideals of `P x [k]`.

use std::fmt;

use crate::error::{Error, Limits, Result};
use crate::ideal::{enumerate_ideals, OrderIdeal};
use crate::poset::{linear_extension, product_with_chain, LinearExtension, Poset};
use crate::set::ElementSet;

/// A weakly order-reversing labeling `P -> {0, .., k}`.
///
/// Labels are stored in element-index order; ordering is lexicographic on
/// the labels.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PPartition {
    labels: Vec<u32>,
    bound: u32,
}

impl PPartition {
    pub fn new(poset: &Poset, labels: Vec<u32>, k: u32) -> Result<Self> {
        if labels.len() != poset.size() {
            return Err(Error::Precondition(format!(
                "{} labels for a poset of size {}",
                labels.len(),
                poset.size()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&v| v > k) {
            return Err(Error::Precondition(format!("label {bad} exceeds bound {k}")));
        }
        let f = PPartition { labels, bound: k };
        if let Some(&(a, b)) = poset.covers().iter().find(|&&(a, b)| f.labels[a] < f.labels[b]) {
            return Err(Error::Precondition(format!(
                "not order-reversing: f({}) = {} < f({}) = {}",
                poset.name(a),
                f.labels[a],
                poset.name(b),
                f.labels[b]
            )));
        }
        Ok(f)
    }

    pub fn zero(poset: &Poset, k: u32) -> Self {
        PPartition {
            labels: vec![0; poset.size()],
            bound: k,
        }
    }

    pub fn constant(poset: &Poset, k: u32, value: u32) -> Result<Self> {
        Self::new(poset, vec![value; poset.size()], k)
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> u32 {
        self.labels[x]
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// Parses `(1,3,3)`; whitespace is ignored and the parentheses are
    /// optional.
    pub fn parse(poset: &Poset, text: &str, k: u32) -> Result<Self> {
        let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
        let labels = inner
            .split(',')
            .map(|t| {
                t.trim().parse::<u32>().map_err(|_| {
                    Error::parse(1, 1, format!("bad label {:?} in partition {text:?}", t.trim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(poset, labels, k)
    }
}

impl fmt::Display for PPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.labels.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for PPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/k={}", self.bound)
    }
}

fn admissible(poset: &Poset, labels: &[u32], x: usize, v: u32) -> bool {
    poset.lower_covers(x).iter().all(|&y| labels[y] >= v)
        && poset.upper_covers(x).iter().all(|&y| labels[y] <= v)
}

fn whirl_at_in_place(poset: &Poset, labels: &mut [u32], k: u32, x: usize) {
    let mut v = labels[x];
    loop {
        v = if v == k { 0 } else { v + 1 };
        if admissible(poset, labels, x, v) {
            break;
        }
    }
    labels[x] = v;
}

/// Adds 1 modulo `k+1` at `x` until the labeling is order-reversing again.
pub fn whirl_at(poset: &Poset, f: &PPartition, x: usize) -> Result<PPartition> {
    if x >= poset.size() {
        return Err(Error::IndexOutOfRange {
            index: x,
            size: poset.size(),
        });
    }
    let mut labels = f.labels.clone();
    whirl_at_in_place(poset, &mut labels, f.bound, x);
    Ok(PPartition {
        labels,
        bound: f.bound,
    })
}

/// Whirls once at every element, maximal elements first (decreasing order
/// along the default linear extension).
pub fn whirl(poset: &Poset, f: &PPartition) -> PPartition {
    whirl_along(poset, f, &linear_extension(poset))
}

/// [`whirl`] along a caller-supplied linear extension of `poset`.
pub fn whirl_along(poset: &Poset, f: &PPartition, ext: &LinearExtension) -> PPartition {
    let mut labels = f.labels.clone();
    for &x in ext.as_slice().iter().rev() {
        whirl_at_in_place(poset, &mut labels, f.bound, x);
    }
    PPartition {
        labels,
        bound: f.bound,
    }
}

/// Iterates [`whirl`] `times` times.
pub fn whirl_pow(poset: &Poset, f: &PPartition, times: usize) -> PPartition {
    let ext = linear_extension(poset);
    let mut g = f.clone();
    for _ in 0..times {
        g = whirl_along(poset, &g, &ext);
    }
    g
}

fn factor_of(product: &Poset) -> Result<(&Poset, usize)> {
    let info = product
        .product_info()
        .ok_or_else(|| Error::Precondition("poset is not a product with a chain".into()))?;
    Ok((&info.base, info.k))
}

/// The ideal of `P x [k]` whose fiber over `x` is `(x,1..f(x))`.
pub fn phi(product: &Poset, f: &PPartition) -> Result<OrderIdeal> {
    let (base, k) = factor_of(product)?;
    if f.labels.len() != base.size() || f.bound as usize != k {
        return Err(Error::Precondition(format!(
            "partition {f:?} does not live on the factor of a {}-element product with k={k}",
            product.size()
        )));
    }
    let mut members = ElementSet::empty(product.size());
    for (x, &v) in f.labels.iter().enumerate() {
        for level in 1..=v as usize {
            members.insert(x * k + level - 1);
        }
    }
    OrderIdeal::new(product, members)
}

/// Fiber counts of an ideal of `P x [k]`.
pub fn phi_inv(product: &Poset, ideal: &OrderIdeal) -> Result<PPartition> {
    let (base, k) = factor_of(product)?;
    if ideal.members().universe() != product.size() {
        return Err(Error::Precondition("ideal belongs to a different poset".into()));
    }
    let mut labels = vec![0u32; base.size()];
    for x in ideal.members().iter() {
        labels[x / k] += 1;
    }
    Ok(PPartition {
        labels,
        bound: k as u32,
    })
}

/// All of `F_k(P)`, sorted, obtained by transporting `J(P x [k])`.
pub fn enumerate_partitions(base: &Poset, k: u32, limits: Limits) -> Result<Vec<PPartition>> {
    let product = product_with_chain(base, k as usize, limits)?;
    let mut out = enumerate_ideals(&product, limits)?
        .iter()
        .map(|i| phi_inv(&product, i))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::rowmotion_direct;
    use crate::poset::{all_linear_extensions, make_chain, make_claw, make_v};

    fn pp(p: &Poset, labels: &[u32], k: u32) -> PPartition {
        PPartition::new(p, labels.to_vec(), k).unwrap()
    }

    #[test]
    fn whirl_at_steps_on_v() {
        let v = make_v();
        let (l, c, r) = (0, 1, 2);
        let f = pp(&v, &[0, 2, 2], 2);
        let f1 = whirl_at(&v, &f, l).unwrap();
        assert_eq!(f1.labels(), &[1, 2, 2]);
        let f2 = whirl_at(&v, &f1, r).unwrap();
        assert_eq!(f2.labels(), &[1, 2, 0]);
        let f3 = whirl_at(&v, &f2, c).unwrap();
        assert_eq!(f3.labels(), &[1, 1, 0]);
        assert_eq!(whirl(&v, &f), f3);
    }

    #[test]
    fn whirl_examples() {
        let c3 = make_chain(3).unwrap();
        assert_eq!(whirl(&c3, &pp(&c3, &[4, 1, 0], 4)).labels(), &[2, 2, 1]);
        let v = make_v();
        assert_eq!(whirl(&v, &pp(&v, &[1, 3, 3], 4)).labels(), &[2, 4, 0]);
    }

    #[test]
    fn rejects_non_partitions() {
        let v = make_v();
        assert!(PPartition::new(&v, vec![2, 1, 0], 2).is_err());
        assert!(PPartition::new(&v, vec![0, 3, 0], 2).is_err());
        assert!(PPartition::new(&v, vec![0, 0], 2).is_err());
    }

    #[test]
    fn parse_and_display() {
        let v = make_v();
        let f = PPartition::parse(&v, "(1, 3,3)", 4).unwrap();
        assert_eq!(f.to_string(), "(1,3,3)");
        assert!(PPartition::parse(&v, "(1,x,3)", 4).is_err());
    }

    #[test]
    fn phi_examples() {
        let v = make_v();
        let v4 = product_with_chain(&v, 4, Limits::default()).unwrap();
        let i = phi(&v4, &pp(&v, &[1, 3, 3], 4)).unwrap();
        assert_eq!(i.len(), 7);
        assert!(phi(&v4, &PPartition::zero(&v, 4)).unwrap().is_empty());
        assert_eq!(phi(&v4, &pp(&v, &[4, 4, 4], 4)).unwrap(), OrderIdeal::full(&v4));
        assert_eq!(phi_inv(&v4, &OrderIdeal::empty(&v4)).unwrap(), PPartition::zero(&v, 4));
        assert_eq!(phi_inv(&v4, &OrderIdeal::full(&v4)).unwrap().labels(), &[4, 4, 4]);
        let first_board = OrderIdeal::generated_by(
            &v4,
            [v4.product_index(1, 4).unwrap(), v4.product_index(2, 3).unwrap()],
        );
        assert_eq!(phi_inv(&v4, &first_board).unwrap().labels(), &[0, 4, 3]);
    }

    #[test]
    fn whirl_independent_of_extension() {
        for p in [make_v(), make_claw(3).unwrap(), make_chain(3).unwrap()] {
            let exts = all_linear_extensions(&p, 1000).unwrap();
            for k in 1..=3 {
                for f in enumerate_partitions(&p, k, Limits::default()).unwrap() {
                    let w = whirl(&p, &f);
                    for e in &exts {
                        assert_eq!(whirl_along(&p, &f, e), w);
                    }
                }
            }
        }
    }

    #[test]
    fn equivariance_and_bijection_small() {
        for base in [make_v(), make_claw(3).unwrap()] {
            for k in 1..=3u32 {
                let prod = product_with_chain(&base, k as usize, Limits::default()).unwrap();
                let ideals = enumerate_ideals(&prod, Limits::default()).unwrap();
                for i in &ideals {
                    let f = phi_inv(&prod, i).unwrap();
                    assert_eq!(&phi(&prod, &f).unwrap(), i);
                    assert_eq!(phi(&prod, &whirl(&base, &f)).unwrap(), rowmotion_direct(&prod, i));
                }
            }
        }
    }

    #[test]
    fn k_one_is_rowmotion() {
        let v = make_v();
        let v1 = product_with_chain(&v, 1, Limits::default()).unwrap();
        for i in enumerate_ideals(&v, Limits::default()).unwrap() {
            let labels = (0..3).map(|x| i.contains(x) as u32).collect();
            let f = PPartition::new(&v, labels, 1).unwrap();
            let next: Vec<u32> = (0..3).map(|x| rowmotion_direct(&v, &i).contains(x) as u32).collect();
            assert_eq!(whirl(&v, &f).labels(), &next[..]);
            assert_eq!(phi(&v1, &f).unwrap().members(), i.members());
        }
    }
}
