//! Finite posets on dense indices, the chain/claw families, products with
//! chains, and linear extensions.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;

use crate::error::{Error, Limits, Result};
use crate::set::ElementSet;

/// Name of the minimum element of a claw with `n != 2` leaves.
pub const HUB_NAME: &str = "0hat";

/// A finite poset. Immutable after construction.
///
/// `covers` is always the transitive reduction of the order, and
/// `down[x]` holds the principal ideal `{y : y <= x}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    covers: Vec<(usize, usize)>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    down: Vec<ElementSet>,
    product: Option<Box<ProductInfo>>,
}

/// Factor data for posets built by [`product_with_chain`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductInfo {
    pub base: Poset,
    pub k: usize,
}

/// An element `(x, level)` of `P x [k]`, with `level` in `1..=k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductElement {
    pub base: usize,
    pub level: usize,
}

/// The minimum and the leaves of a claw-shaped poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClawShape {
    pub hub: usize,
    pub leaves: Vec<usize>,
}

/// A listing of all elements in which `a < b` implies `a` comes first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearExtension(Vec<usize>);

impl LinearExtension {
    /// Checks that `order` is a linear extension of `poset`.
    pub fn new(poset: &Poset, order: Vec<usize>) -> Result<Self> {
        let p = poset.size();
        if order.len() != p {
            return Err(Error::InvalidLinearExtension(format!(
                "length {} != poset size {p}",
                order.len()
            )));
        }
        let mut position = vec![usize::MAX; p];
        for (i, &x) in order.iter().enumerate() {
            if x >= p {
                return Err(Error::IndexOutOfRange { index: x, size: p });
            }
            if position[x] != usize::MAX {
                return Err(Error::InvalidLinearExtension(format!(
                    "element {x} listed twice"
                )));
            }
            position[x] = i;
        }
        for &(a, b) in poset.covers() {
            if position[a] > position[b] {
                return Err(Error::InvalidLinearExtension(format!(
                    "{} listed after {}",
                    poset.name(a),
                    poset.name(b)
                )));
            }
        }
        Ok(LinearExtension(order))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Poset {
    /// Builds a poset from arbitrary strict relations `a < b`. The relations
    /// are closed transitively and reduced to covers.
    pub fn from_relations(names: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let p = names.len();
        if p == 0 {
            return Err(Error::InvalidSize("poset must have at least one element".into()));
        }
        for &(a, b) in relations {
            for x in [a, b] {
                if x >= p {
                    return Err(Error::IndexOutOfRange { index: x, size: p });
                }
            }
            if a == b {
                return Err(Error::MalformedPoset(format!("relation {a} < {a} is cyclic")));
            }
        }
        let mut below = vec![Vec::new(); p];
        for &(a, b) in relations {
            if !below[b].contains(&a) {
                below[b].push(a);
            }
        }
        let order = topological_order(p, &below)?;
        let down = closure(p, &below, &order);

        let mut covers = Vec::new();
        for b in 0..p {
            let mut implied = ElementSet::empty(p);
            for c in down[b].iter().filter(|&c| c != b) {
                for a in down[c].iter().filter(|&a| a != c) {
                    implied.insert(a);
                }
            }
            for a in down[b].iter() {
                if a != b && !implied.contains(a) {
                    covers.push((a, b));
                }
            }
        }
        Ok(Self::assemble(names, covers, down, None))
    }

    /// Builds from a cover list already known to be a Hasse diagram.
    fn from_hasse(names: Vec<String>, covers: Vec<(usize, usize)>, product: Option<ProductInfo>) -> Result<Self> {
        let p = names.len();
        let mut below = vec![Vec::new(); p];
        for &(a, b) in &covers {
            below[b].push(a);
        }
        let order = topological_order(p, &below)?;
        let down = closure(p, &below, &order);
        Ok(Self::assemble(names, covers, down, product.map(Box::new)))
    }

    fn assemble(
        names: Vec<String>,
        mut covers: Vec<(usize, usize)>,
        down: Vec<ElementSet>,
        product: Option<Box<ProductInfo>>,
    ) -> Self {
        let p = names.len();
        covers.sort_unstable();
        covers.dedup();
        let mut lower = vec![Vec::new(); p];
        let mut upper = vec![Vec::new(); p];
        for &(a, b) in &covers {
            lower[b].push(a);
            upper[a].push(b);
        }
        Poset {
            names,
            covers,
            lower,
            upper,
            down,
            product,
        }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    /// Sorted cover pairs `(a, b)` meaning `a` is covered by `b`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Elements covered by `x`.
    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    /// Elements covering `x`.
    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    /// The principal ideal generated by `x`.
    pub fn down_set(&self, x: usize) -> &ElementSet {
        &self.down[x]
    }

    pub fn covered_by(&self, a: usize, b: usize) -> bool {
        self.covers.binary_search(&(a, b)).is_ok()
    }

    /// `a <= b` in the poset.
    pub fn leq(&self, a: usize, b: usize) -> Result<bool> {
        let p = self.size();
        for x in [a, b] {
            if x >= p {
                return Err(Error::IndexOutOfRange { index: x, size: p });
            }
        }
        Ok(self.down[b].contains(a))
    }

    #[inline]
    pub(crate) fn leq_unchecked(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq_unchecked(a, b) || self.leq_unchecked(b, a)
    }

    pub fn product_info(&self) -> Option<&ProductInfo> {
        self.product.as_deref()
    }

    /// The `(base, level)` pair of an element of a product poset.
    pub fn product_element(&self, x: usize) -> Option<ProductElement> {
        let info = self.product.as_ref()?;
        (x < self.size()).then(|| ProductElement {
            base: x / info.k,
            level: x % info.k + 1,
        })
    }

    /// Dense index of `(base, level)` in a product poset.
    pub fn product_index(&self, base: usize, level: usize) -> Option<usize> {
        let info = self.product.as_ref()?;
        (base < info.base.size() && (1..=info.k).contains(&level))
            .then(|| base * info.k + level - 1)
    }

    /// Looks an element up by display name. `ℓ` is accepted for `l` and
    /// `0̂`, `0` for the claw minimum.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Some(i);
        }
        let alias = match name {
            "ℓ" => "l",
            "0̂" | "0" | "hub" => HUB_NAME,
            _ => return None,
        };
        self.names.iter().position(|n| n == alias)
    }

    /// Detects a claw: a unique minimum covered by every other element,
    /// with no other relations. `V` and the 2-chain qualify.
    pub fn claw_shape(&self) -> Option<ClawShape> {
        let p = self.size();
        if p < 2 {
            return None;
        }
        let minima: Vec<usize> = (0..p).filter(|&x| self.lower[x].is_empty()).collect();
        let [hub] = minima[..] else { return None };
        if self.covers.len() != p - 1 || self.upper[hub].len() != p - 1 {
            return None;
        }
        let leaves = (0..p).filter(|&x| x != hub).collect();
        Some(ClawShape { hub, leaves })
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.lower[x].is_empty()).collect()
    }
}

fn topological_order(p: usize, below: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut above = vec![Vec::new(); p];
    let mut indegree = vec![0usize; p];
    for (b, lows) in below.iter().enumerate() {
        indegree[b] = lows.len();
        for &a in lows {
            above[a].push(b);
        }
    }
    let mut heap: BinaryHeap<Reverse<usize>> =
        (0..p).filter(|&x| indegree[x] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(p);
    while let Some(Reverse(x)) = heap.pop() {
        order.push(x);
        for &y in &above[x] {
            indegree[y] -= 1;
            if indegree[y] == 0 {
                heap.push(Reverse(y));
            }
        }
    }
    if order.len() != p {
        return Err(Error::MalformedPoset("cover relation contains a cycle".into()));
    }
    Ok(order)
}

fn closure(p: usize, below: &[Vec<usize>], order: &[usize]) -> Vec<ElementSet> {
    let mut down = vec![ElementSet::empty(p); p];
    for &x in order {
        let mut d = ElementSet::empty(p);
        d.insert(x);
        for &y in &below[x] {
            d.union_with(&down[y]);
        }
        down[x] = d;
    }
    down
}

/// The chain `0 < 1 < ... < n-1`.
pub fn make_chain(n: usize) -> Result<Poset> {
    if n == 0 {
        return Err(Error::InvalidSize("chain length must be at least 1".into()));
    }
    let names = (0..n).map(|i| i.to_string()).collect();
    let covers = (1..n).map(|i| (i - 1, i)).collect();
    Poset::from_hasse(names, covers, None)
}

/// The three-element `V` poset in index order `(l, c, r)`, with `c` below
/// both `l` and `r`.
pub fn make_v() -> Poset {
    let names = ["l", "c", "r"].map(String::from).to_vec();
    Poset::from_hasse(names, vec![(1, 0), (1, 2)], None).expect("V is acyclic")
}

/// The claw `C_n`: `n` pairwise incomparable leaves `b1..bn` covering a
/// minimum `0hat`, in index order `(b1, .., bn, 0hat)`. `C_2` is returned
/// as [`make_v`].
pub fn make_claw(n: usize) -> Result<Poset> {
    if n == 0 {
        return Err(Error::InvalidSize("claw must have at least one leaf".into()));
    }
    if n == 2 {
        return Ok(make_v());
    }
    let mut names: Vec<String> = (1..=n).map(|i| format!("b{i}")).collect();
    names.push(HUB_NAME.to_string());
    let covers = (0..n).map(|i| (n, i)).collect();
    Poset::from_hasse(names, covers, None)
}

/// `P x [k]` in fiber-major order: index `x * k + (level - 1)`.
pub fn product_with_chain(base: &Poset, k: usize, limits: Limits) -> Result<Poset> {
    if k == 0 {
        return Err(Error::InvalidSize("chain factor must have k >= 1".into()));
    }
    let p = base.size();
    let total = p
        .checked_mul(k)
        .filter(|&t| t <= limits.max_elements)
        .ok_or_else(|| Error::Resource {
            what: format!("product size {p} x {k}"),
            cap: limits.max_elements,
        })?;
    let idx = |x: usize, level: usize| x * k + level - 1;
    let mut names = Vec::with_capacity(total);
    for x in 0..p {
        for level in 1..=k {
            names.push(format!("{}_{level}", base.name(x)));
        }
    }
    let mut covers = Vec::new();
    for x in 0..p {
        for level in 1..k {
            covers.push((idx(x, level), idx(x, level + 1)));
        }
    }
    for &(a, b) in base.covers() {
        for level in 1..=k {
            covers.push((idx(a, level), idx(b, level)));
        }
    }
    Poset::from_hasse(
        names,
        covers,
        Some(ProductInfo {
            base: base.clone(),
            k,
        }),
    )
}

/// Deterministic linear extension: smallest index first among available
/// minimal elements, except that products with a chain are traversed fiber
/// by fiber following the base extension.
pub fn linear_extension(poset: &Poset) -> LinearExtension {
    if let Some(info) = poset.product_info() {
        let base = linear_extension(&info.base);
        let order = base
            .as_slice()
            .iter()
            .flat_map(|&x| (0..info.k).map(move |j| x * info.k + j))
            .collect();
        return LinearExtension(order);
    }
    let p = poset.size();
    let below: Vec<Vec<usize>> = (0..p).map(|x| poset.lower_covers(x).to_vec()).collect();
    let order = topological_order(p, &below).expect("validated posets are acyclic");
    LinearExtension(order)
}

/// Every linear extension, in lexicographic order. Fails once more than
/// `cap` extensions exist.
pub fn all_linear_extensions(poset: &Poset, cap: usize) -> Result<Vec<LinearExtension>> {
    fn go(
        poset: &Poset,
        placed: &mut ElementSet,
        current: &mut Vec<usize>,
        out: &mut Vec<LinearExtension>,
        cap: usize,
    ) -> Result<()> {
        if current.len() == poset.size() {
            if out.len() == cap {
                return Err(Error::Resource {
                    what: "linear extension count".into(),
                    cap,
                });
            }
            out.push(LinearExtension(current.clone()));
            return Ok(());
        }
        for x in 0..poset.size() {
            if !placed.contains(x) && poset.lower_covers(x).iter().all(|&y| placed.contains(y)) {
                placed.insert(x);
                current.push(x);
                go(poset, placed, current, out, cap)?;
                current.pop();
                placed.remove(x);
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(
        poset,
        &mut ElementSet::empty(poset.size()),
        &mut Vec::new(),
        &mut out,
        cap,
    )?;
    Ok(out)
}

/// A random naturally labeled poset: each pair `i < j` is related with
/// probability `density`, then reduced to covers.
pub fn random_poset<R: Rng + ?Sized>(p: usize, density: f64, rng: &mut R) -> Result<Poset> {
    let mut relations = Vec::new();
    for j in 0..p {
        for i in 0..j {
            if rng.gen_bool(density) {
                relations.push((i, j));
            }
        }
    }
    let names = (0..p).map(|i| i.to_string()).collect();
    Poset::from_relations(names, &relations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_closure(p: &Poset) -> Vec<Vec<bool>> {
        let n = p.size();
        let mut r = vec![vec![false; n]; n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in p.covers() {
            r[a][b] = true;
        }
        for m in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if r[i][m] && r[m][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
        r
    }

    fn assert_closure_matches(p: &Poset) {
        let r = brute_closure(p);
        for a in 0..p.size() {
            for b in 0..p.size() {
                assert_eq!(p.leq(a, b).unwrap(), r[a][b], "{a} <= {b}");
            }
        }
    }

    #[test]
    fn chain_constructor() {
        assert!(make_chain(1).unwrap().covers().is_empty());
        assert_eq!(make_chain(3).unwrap().covers(), &[(0, 1), (1, 2)]);
        let c2 = make_chain(2).unwrap();
        assert!(c2.leq(0, 1).unwrap());
        assert!(!c2.leq(1, 0).unwrap());
        assert!(matches!(make_chain(0), Err(Error::InvalidSize(_))));
    }

    #[test]
    fn claw_constructor() {
        let v = make_claw(2).unwrap();
        assert_eq!(v, make_v());
        let c = v.index_of("c").unwrap();
        let l = v.index_of("ℓ").unwrap();
        let r = v.index_of("r").unwrap();
        assert_eq!(v.covers(), &[(c, l), (c, r)]);
        let c4 = make_claw(4).unwrap();
        assert_eq!(c4.size(), 5);
        assert_eq!(c4.covers().len(), 4);
        assert!(c4.covers().iter().all(|&(a, _)| a == 4));
        let c1 = make_claw(1).unwrap();
        assert_eq!(c1.covers(), &[(1, 0)]);
        assert!(matches!(make_claw(0), Err(Error::InvalidSize(_))));
    }

    #[test]
    fn product_cover_counts() {
        let v = make_v();
        let v2 = product_with_chain(&v, 2, Limits::default()).unwrap();
        assert_eq!(v2.size(), 6);
        // 3 fiber covers + 2 base covers at each of 2 levels
        assert_eq!(v2.covers().len(), 7);
        let v4 = product_with_chain(&v, 4, Limits::default()).unwrap();
        assert_eq!(v4.size(), 12);
        let chain = product_with_chain(&make_chain(1).unwrap(), 5, Limits::default()).unwrap();
        assert_eq!(chain.covers(), make_chain(5).unwrap().covers());
    }

    #[test]
    fn product_respects_cap() {
        let err = product_with_chain(&make_v(), 10, Limits::with_cap(20)).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn product_order_is_componentwise() {
        for base in [make_v(), make_claw(3).unwrap(), make_chain(3).unwrap()] {
            for k in 1..=4 {
                let prod = product_with_chain(&base, k, Limits::default()).unwrap();
                assert_closure_matches(&prod);
                for a in 0..prod.size() {
                    for b in 0..prod.size() {
                        let ea = prod.product_element(a).unwrap();
                        let eb = prod.product_element(b).unwrap();
                        let expected =
                            base.leq(ea.base, eb.base).unwrap() && ea.level <= eb.level;
                        assert_eq!(prod.leq(a, b).unwrap(), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn linear_extensions_of_small_posets() {
        let v = make_v();
        let names: Vec<&str> = linear_extension(&v).as_slice().iter().map(|&x| v.name(x)).collect();
        assert_eq!(names, ["c", "l", "r"]);
        assert_eq!(linear_extension(&make_chain(3).unwrap()).as_slice(), &[0, 1, 2]);

        // fiber by fiber: c_1..c_4, then l, then r
        let v4 = product_with_chain(&v, 4, Limits::default()).unwrap();
        let ext = linear_extension(&v4);
        let labels: Vec<String> = ext.as_slice().iter().map(|&x| v4.name(x).to_string()).collect();
        assert_eq!(
            labels,
            ["c_1", "c_2", "c_3", "c_4", "l_1", "l_2", "l_3", "l_4", "r_1", "r_2", "r_3", "r_4"]
        );
        assert!(LinearExtension::new(&v4, ext.as_slice().to_vec()).is_ok());
    }

    #[test]
    fn invalid_extensions_rejected() {
        let v = make_v();
        assert!(LinearExtension::new(&v, vec![0, 1, 2]).is_err());
        assert!(LinearExtension::new(&v, vec![1, 0]).is_err());
        assert!(LinearExtension::new(&v, vec![1, 0, 0]).is_err());
        assert!(LinearExtension::new(&v, vec![1, 0, 7]).is_err());
    }

    #[test]
    fn relations_are_reduced_and_cycles_rejected() {
        let names: Vec<String> = (0..3).map(|i| i.to_string()).collect();
        let p = Poset::from_relations(names.clone(), &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
        assert!(matches!(
            Poset::from_relations(names.clone(), &[(0, 1), (1, 0)]),
            Err(Error::MalformedPoset(_))
        ));
        assert!(Poset::from_relations(names, &[(0, 0)]).is_err());
    }

    #[test]
    fn leq_basics() {
        let v = make_v();
        assert!(v.leq(1, 0).unwrap());
        assert!(!v.leq(0, 2).unwrap());
        for x in 0..3 {
            assert!(v.leq(x, x).unwrap());
        }
        assert!(matches!(v.leq(0, 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn random_posets_are_transitively_reduced() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let p = random_poset(6, 0.4, &mut rng).unwrap();
            assert_closure_matches(&p);
            for &(a, b) in p.covers() {
                let bypass = (0..p.size()).any(|c| {
                    c != a && c != b && p.leq(a, c).unwrap() && p.leq(c, b).unwrap()
                });
                assert!(!bypass, "cover ({a},{b}) is implied");
            }
            for ext in all_linear_extensions(&p, 10_000).unwrap() {
                assert!(LinearExtension::new(&p, ext.as_slice().to_vec()).is_ok());
            }
        }
    }

    #[test]
    fn claw_shape_detection() {
        let v = make_v();
        assert_eq!(v.claw_shape(), Some(ClawShape { hub: 1, leaves: vec![0, 2] }));
        assert!(make_chain(2).unwrap().claw_shape().is_some());
        assert!(make_chain(3).unwrap().claw_shape().is_none());
        assert!(product_with_chain(&v, 2, Limits::default()).unwrap().claw_shape().is_none());
    }
}
