//! Whorms: maximal chains of whirl-successive cells in an orbit board, and
//! the claw operators `A(f)`, `alpha(f)` and the cyclic shift within `A`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbit::{OrbitBoard, SuperOrbitBoard};
use crate::poset::{ClawShape, Poset};
use crate::whirl::PPartition;

/// The label of `element` in board row `row`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WhirlCell {
    pub row: usize,
    pub element: usize,
    pub value: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Whorm {
    pub id: usize,
    /// Sorted by `(row, element)`.
    pub cells: Vec<WhirlCell>,
}

impl Whorm {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Elements touched, ascending.
    pub fn columns(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.cells.iter().map(|c| c.element).collect();
        set.into_iter().collect()
    }

    fn column_cells(&self, x: usize) -> impl Iterator<Item = &WhirlCell> {
        self.cells.iter().filter(move |c| c.element == x)
    }
}

/// Partition of every board cell into whorms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    whorms: Vec<Whorm>,
    owner: Vec<usize>,
    width: usize,
}

impl Decomposition {
    pub fn whorms(&self) -> &[Whorm] {
        &self.whorms
    }

    pub fn len(&self) -> usize {
        self.whorms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.whorms.is_empty()
    }

    /// Id of the whorm holding `(row, element)`.
    pub fn owner(&self, row: usize, element: usize) -> usize {
        self.owner[row * self.width + element]
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn claw_of(poset: &Poset) -> Result<ClawShape> {
    poset.claw_shape().ok_or_else(|| {
        Error::Unsupported("whorm analysis is only supported on claw posets".into())
    })
}

/// Whorm decomposition of a board over a claw poset (including `V`).
pub fn decompose_whorms(poset: &Poset, board: &OrbitBoard) -> Result<Decomposition> {
    claw_of(poset)?;
    Ok(decompose_whorms_experimental(poset, board))
}

/// The same relation applied to an arbitrary poset. No structural claims
/// are made about the result.
pub fn decompose_whorms_experimental(poset: &Poset, board: &OrbitBoard) -> Decomposition {
    let (len, width) = (board.len(), board.width());
    let id = |r: usize, x: usize| r * width + x;
    let mut uf = UnionFind((0..len * width).collect());
    for r in 0..len {
        for x in 0..width {
            let v = board.label(r, x);
            if board.label(r + 1, x) == v + 1 {
                uf.union(id(r, x), id((r + 1) % len, x));
            }
            for &y in poset.lower_covers(x) {
                if board.label(r, y) == v {
                    uf.union(id(r, x), id(r, y));
                }
            }
        }
    }
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut whorms: Vec<Whorm> = Vec::new();
    let mut owner = vec![0; len * width];
    for r in 0..len {
        for x in 0..width {
            let root = uf.find(id(r, x));
            let next = whorms.len();
            let w = *ids.entry(root).or_insert(next);
            if w == next {
                whorms.push(Whorm {
                    id: w,
                    cells: Vec::new(),
                });
            }
            whorms[w].cells.push(WhirlCell {
                row: r,
                element: x,
                value: board.label(r, x),
            });
            owner[id(r, x)] = w;
        }
    }
    Decomposition {
        whorms,
        owner,
        width,
    }
}

/// Which outer columns a whorm on `V` starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
    TwoTailed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WhormMetrics {
    /// Cells in each tail column.
    pub t: u32,
    /// Cells in the head column.
    pub h: u32,
    pub tail_columns: Vec<usize>,
    pub size: usize,
    pub side: Option<Side>,
}

impl WhormMetrics {
    pub fn tail_count(&self) -> usize {
        self.tail_columns.len()
    }
}

fn is_v(poset: &Poset) -> bool {
    poset.names() == ["l", "c", "r"] && poset.claw_shape().is_some()
}

/// `t = 1 + min` of the head-column labels and `h = k + 2 - t`.
pub fn whorm_metrics(poset: &Poset, whorm: &Whorm, k: u32) -> Result<WhormMetrics> {
    let claw = claw_of(poset)?;
    let head_min = whorm
        .column_cells(claw.hub)
        .map(|c| c.value)
        .min()
        .ok_or_else(|| Error::Precondition(format!("whorm {} has no head cell", whorm.id)))?;
    let t = head_min + 1;
    let tail_columns: Vec<usize> = whorm
        .columns()
        .into_iter()
        .filter(|&x| x != claw.hub)
        .collect();
    let side = is_v(poset).then(|| match tail_columns[..] {
        [0] => Side::Left,
        [2] => Side::Right,
        _ => Side::TwoTailed,
    });
    Ok(WhormMetrics {
        t,
        h: k + 2 - t,
        tail_columns,
        size: whorm.len(),
        side,
    })
}

/// Whorm ids in "in front of" order, starting with the whorm holding the
/// head cell of row 0: the whorm after `a` owns the head cell one row below
/// the cell where `a` reaches `k`.
pub fn whorm_cycle(poset: &Poset, board: &OrbitBoard, dec: &Decomposition) -> Result<Vec<usize>> {
    let hub = claw_of(poset)?.hub;
    let k = board.k();
    let mut next: BTreeMap<usize, usize> = BTreeMap::new();
    for r in 0..board.len() {
        if board.label(r, hub) == k {
            let from = dec.owner(r, hub);
            let to = dec.owner((r + 1) % board.len(), hub);
            if next.insert(from, to).is_some_and(|old| old != to) {
                return Err(Error::Precondition(format!(
                    "whorm {from} reaches k twice in the head column"
                )));
            }
        }
    }
    let start = dec.owner(0, hub);
    let mut cycle = vec![start];
    loop {
        let cur = *cycle.last().expect("nonempty");
        let nxt = *next
            .get(&cur)
            .ok_or_else(|| Error::Precondition(format!("whorm {cur} never reaches k")))?;
        if nxt == start {
            return Ok(cycle);
        }
        if cycle.len() > dec.len() {
            return Err(Error::Precondition("in-front-of relation is not a cycle".into()));
        }
        cycle.push(nxt);
    }
}

/// Labels attained on the leaves of a claw partition.
pub fn value_set_a(poset: &Poset, f: &PPartition) -> Result<BTreeSet<u32>> {
    let claw = claw_of(poset)?;
    Ok(claw.leaves.iter().map(|&x| f.label(x)).collect())
}

pub fn alpha(poset: &Poset, f: &PPartition) -> Result<usize> {
    Ok(value_set_a(poset, f)?.len())
}

/// Replaces each leaf label by the next larger value of `A(f)`, wrapping
/// to the least; the hub label is kept.
pub fn whirl_bar_a(poset: &Poset, f: &PPartition) -> Result<PPartition> {
    let claw = claw_of(poset)?;
    let a = value_set_a(poset, f)?;
    let least = *a.first().expect("claws have leaves");
    let mut labels = f.labels().to_vec();
    for &x in &claw.leaves {
        let v = f.label(x);
        labels[x] = a.range(v + 1..).next().copied().unwrap_or(least);
    }
    PPartition::new(poset, labels, f.bound())
}

/// The board repeated up to `alpha (k+2)` rows.
pub fn default_super_board(poset: &Poset, board: &OrbitBoard) -> Result<SuperOrbitBoard> {
    let a = alpha(poset, &board.rows()[0])?;
    let target = a * (board.k() as usize + 2);
    if !target.is_multiple_of(board.len()) {
        return Err(Error::Precondition(format!(
            "orbit length {} does not divide alpha(k+2) = {target}",
            board.len()
        )));
    }
    SuperOrbitBoard::new(board.clone(), target / board.len())
}

/// Outcome of the tail-length identities on one super board.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailSumReport {
    pub k: u32,
    pub alpha: usize,
    pub board_len: usize,
    pub whorm_count: usize,
    /// `t` of each whorm in in-front-of order.
    pub cycle_t: Vec<u32>,
    pub multi_tailed: bool,
    pub failures: Vec<String>,
}

impl TailSumReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks, on the default super board of `board`:
///
/// * every whorm has `t` cells in each tail column and `h` in the head,
///   with labels rising by one down each column and `t + h = k + 2`;
/// * any `alpha + 1` consecutive whorms have tail lengths summing to
///   `alpha (k+2)`, and `t` repeats with period `alpha + 1`;
/// * every leaf column meets exactly `alpha + 1` whorms;
/// * on `V`, at most six whorms (one-tailed) or two (two-tailed);
/// * on `V`, whorms are two-tailed exactly when `f(l) = f(r)`.
pub fn check_tail_sums(poset: &Poset, board: &OrbitBoard) -> Result<TailSumReport> {
    let claw = claw_of(poset)?;
    let sup = default_super_board(poset, board)?;
    let b = sup.board();
    let k = b.k();
    let a = alpha(poset, &b.rows()[0])?;
    let dec = decompose_whorms(poset, b)?;
    let mut failures = Vec::new();
    let len = b.len();

    let mut t_of = Vec::with_capacity(dec.len());
    let mut multi = false;
    for w in dec.whorms() {
        let m = whorm_metrics(poset, w, k)?;
        multi |= m.tail_count() > 1;
        if m.tail_count() == 0 {
            failures.push(format!("whorm {} has no tail", w.id));
        }
        for x in w.columns() {
            let want = if x == claw.hub { m.h } else { m.t };
            let start = if x == claw.hub { m.t - 1 } else { 0 };
            if !column_is_run(w, x, len, start, want) {
                failures.push(format!(
                    "whorm {} column {}: expected labels {start}..{} on consecutive rows",
                    w.id,
                    poset.name(x),
                    start + want - 1
                ));
            }
        }
        t_of.push(m.t);
    }

    let cycle = whorm_cycle(poset, b, &dec)?;
    if cycle.len() != dec.len() {
        failures.push(format!(
            "in-front-of cycle visits {} of {} whorms",
            cycle.len(),
            dec.len()
        ));
    }
    let cycle_t: Vec<u32> = cycle.iter().map(|&w| t_of[w]).collect();
    let m = cycle_t.len();
    let target = (a * (k as usize + 2)) as u32;
    for i in 0..m {
        let window: u32 = (0..=a).map(|j| cycle_t[(i + j) % m]).sum();
        if window != target {
            failures.push(format!(
                "window of {} whorms from position {i} sums to {window}, expected {target}",
                a + 1
            ));
        }
        if cycle_t[i] != cycle_t[(i + a + 1) % m] {
            failures.push(format!(
                "t at position {i} differs from t at position {}",
                (i + a + 1) % m
            ));
        }
    }

    for &x in &claw.leaves {
        let met: BTreeSet<usize> = (0..len).map(|r| dec.owner(r, x)).collect();
        if met.len() != a + 1 {
            failures.push(format!(
                "column {} meets {} whorms, expected {}",
                poset.name(x),
                met.len(),
                a + 1
            ));
        }
    }

    if is_v(poset) {
        let (bound, label) = if multi { (2, "two") } else { (6, "one") };
        if dec.len() > bound {
            failures.push(format!(
                "{label}-tailed board has {} whorms, more than {bound}",
                dec.len()
            ));
        }
        let symmetric = b.rows()[0].label(0) == b.rows()[0].label(2);
        if symmetric != multi {
            failures.push("tail count disagrees with f(l) = f(r)".into());
        }
    }

    Ok(TailSumReport {
        k,
        alpha: a,
        board_len: len,
        whorm_count: dec.len(),
        cycle_t,
        multi_tailed: multi,
        failures,
    })
}

/// `whorm` has exactly `count` cells in column `x`, on cyclically
/// consecutive rows, labeled `start, start+1, ..`.
fn column_is_run(whorm: &Whorm, x: usize, len: usize, start: u32, count: u32) -> bool {
    let cells: Vec<&WhirlCell> = whorm.column_cells(x).collect();
    if cells.len() != count as usize {
        return false;
    }
    let Some(first) = cells.iter().find(|c| c.value == start) else {
        return false;
    };
    (0..count).all(|d| {
        let row = (first.row + d as usize) % len;
        cells.iter().any(|c| c.row == row && c.value == start + d)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Limits;
    use crate::poset::{make_chain, make_claw, make_v};
    use crate::whirl::{enumerate_partitions, whirl_pow};

    fn pp(p: &Poset, labels: &[u32], k: u32) -> PPartition {
        PPartition::new(p, labels.to_vec(), k).unwrap()
    }

    fn board(p: &Poset, labels: &[u32], k: u32) -> OrbitBoard {
        OrbitBoard::from_seed(p, &pp(p, labels, k), Limits::default()).unwrap()
    }

    /// The twelve-row `k = 4` board drawn with every whorm colored.
    fn onewhorm_board() -> (Poset, OrbitBoard) {
        let v = make_v();
        let rows = [
            [1, 2, 2],
            [2, 3, 0],
            [3, 4, 1],
            [4, 4, 2],
            [0, 3, 3],
            [1, 4, 0],
            [2, 2, 1],
            [0, 3, 2],
            [1, 4, 3],
            [2, 4, 4],
            [3, 3, 0],
            [0, 4, 1],
        ];
        let rows = rows.iter().map(|r| pp(&v, r, 4)).collect();
        let b = OrbitBoard::new(&v, rows).unwrap();
        (v, b)
    }

    #[test]
    fn onewhorm_board_decomposes_into_six() {
        let (v, b) = onewhorm_board();
        let dec = decompose_whorms(&v, &b).unwrap();
        assert_eq!(dec.len(), 6);
        let cells: usize = dec.whorms().iter().map(Whorm::len).sum();
        assert_eq!(cells, 36);
        for w in dec.whorms() {
            assert_eq!(w.len(), 6);
        }
        // the isolated left whorm starts at (0,3,3)
        let red = dec.owner(4, 0);
        let red_metrics = whorm_metrics(&v, &dec.whorms()[red], 4).unwrap();
        assert_eq!((red_metrics.t, red_metrics.h), (3, 3));
        assert_eq!(red_metrics.side, Some(Side::Left));
        let expect: Vec<(usize, usize)> = vec![(4, 0), (5, 0), (6, 0), (6, 1), (7, 1), (8, 1)];
        let got: Vec<(usize, usize)> =
            dec.whorms()[red].cells.iter().map(|c| (c.row, c.element)).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn onewhorm_left_tails_and_cycle() {
        let (v, b) = onewhorm_board();
        let dec = decompose_whorms(&v, &b).unwrap();
        let mut left_t: Vec<(usize, u32)> = dec
            .whorms()
            .iter()
            .map(|w| whorm_metrics(&v, w, 4).unwrap())
            .zip(dec.whorms())
            .filter(|(m, _)| m.side == Some(Side::Left))
            .map(|(m, w)| (w.cells[0].row, m.t))
            .collect();
        left_t.sort();
        let ts: Vec<u32> = left_t.iter().map(|&(_, t)| t).collect();
        assert_eq!(ts, [5, 3, 4]);
        let cycle = whorm_cycle(&v, &b, &dec).unwrap();
        let cycle_t: Vec<u32> = cycle
            .iter()
            .map(|&w| whorm_metrics(&v, &dec.whorms()[w], 4).unwrap().t)
            .collect();
        assert_eq!(cycle_t, [3, 5, 4, 3, 5, 4]);
        for i in 0..6 {
            assert_eq!(cycle_t[i] + cycle_t[(i + 1) % 6] + cycle_t[(i + 2) % 6], 12);
        }
    }

    #[test]
    fn two_tailed_boards() {
        let v = make_v();
        let b = board(&v, &[0, 2, 0], 4);
        assert_eq!(b.len(), 6);
        let dec = decompose_whorms(&v, &b).unwrap();
        let metrics: Vec<WhormMetrics> =
            dec.whorms().iter().map(|w| whorm_metrics(&v, w, 4).unwrap()).collect();
        assert!(metrics.iter().all(|m| m.side == Some(Side::TwoTailed)));
        assert!(metrics.iter().any(|m| (m.t, m.h) == (4, 2)));

        let b = board(&v, &[6, 6, 6], 9);
        assert_eq!(b.len(), 11);
        let dec = decompose_whorms(&v, &b).unwrap();
        assert_eq!(dec.len(), 2);
        let mut ts: Vec<u32> =
            dec.whorms().iter().map(|w| whorm_metrics(&v, w, 9).unwrap().t).collect();
        ts.sort();
        assert_eq!(ts, [4, 7]);
        let report = check_tail_sums(&v, &b).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
        assert!(report.multi_tailed);
    }

    #[test]
    fn k_one_board_is_covered_once() {
        let v = make_v();
        let b = board(&v, &[0, 0, 0], 1);
        let rows: Vec<String> = b.rows().iter().map(|r| r.to_string()).collect();
        assert_eq!(rows, ["(0,0,0)", "(0,1,0)", "(1,1,1)"]);
        let dec = decompose_whorms(&v, &b).unwrap();
        let mut seen = [0; 9];
        for w in dec.whorms() {
            for c in &w.cells {
                seen[c.row * 3 + c.element] += 1;
            }
        }
        assert!(seen.iter().all(|&s| s == 1));
    }

    #[test]
    fn one_tailed_whorms_have_k_plus_two_cells() {
        let v = make_v();
        for k in 1..=5 {
            for f in enumerate_partitions(&v, k, Limits::default()).unwrap() {
                if f.label(0) == f.label(2) {
                    continue;
                }
                let b = OrbitBoard::from_seed(&v, &f, Limits::default()).unwrap();
                let dec = decompose_whorms(&v, &b).unwrap();
                for w in dec.whorms() {
                    assert_eq!(w.len(), k as usize + 2);
                    let m = whorm_metrics(&v, w, k).unwrap();
                    assert_eq!(m.t + m.h, k + 2);
                }
            }
        }
    }

    #[test]
    fn tail_sums_hold_on_small_claws() {
        for n in 1..=4 {
            let c = make_claw(n).unwrap();
            for k in 1..=4 {
                for f in enumerate_partitions(&c, k, Limits::default()).unwrap() {
                    let b = OrbitBoard::from_seed(&c, &f, Limits::default()).unwrap();
                    let r = check_tail_sums(&c, &b).unwrap();
                    assert!(r.passed(), "n={n} k={k} f={f}: {:?}", r.failures);
                    assert_eq!(r.whorm_count, r.alpha * (r.alpha + 1));
                }
            }
        }
    }

    #[test]
    fn value_sets() {
        let c6 = make_claw(6).unwrap();
        let f = pp(&c6, &[1, 3, 3, 0, 4, 1, 6], 9);
        assert_eq!(value_set_a(&c6, &f).unwrap(), BTreeSet::from([0, 1, 3, 4]));
        assert_eq!(alpha(&c6, &f).unwrap(), 4);
        assert_eq!(whirl_bar_a(&c6, &f).unwrap().labels(), &[3, 4, 4, 1, 0, 3, 6]);
        let c5 = make_claw(5).unwrap();
        assert_eq!(alpha(&c5, &pp(&c5, &[0, 0, 2, 5, 0, 6], 6)).unwrap(), 3);
        let g = pp(&c5, &[2, 2, 2, 2, 2, 3], 6);
        assert_eq!(alpha(&c5, &g).unwrap(), 1);
        assert_eq!(whirl_bar_a(&c5, &g).unwrap(), g);
    }

    #[test]
    fn bar_a_reflects_on_v() {
        let v = make_v();
        for k in 1..=5 {
            for f in enumerate_partitions(&v, k, Limits::default()).unwrap() {
                let l = f.labels();
                assert_eq!(whirl_bar_a(&v, &f).unwrap().labels(), &[l[2], l[1], l[0]]);
                assert_eq!(whirl_pow(&v, &f, k as usize + 2).labels(), &[l[2], l[1], l[0]]);
            }
        }
    }

    #[test]
    fn non_claws_are_refused() {
        let c3 = make_chain(3).unwrap();
        let b = board(&c3, &[2, 1, 0], 2);
        assert!(matches!(decompose_whorms(&c3, &b), Err(Error::Unsupported(_))));
        let dec = decompose_whorms_experimental(&c3, &b);
        let cells: usize = dec.whorms().iter().map(Whorm::len).sum();
        assert_eq!(cells, b.len() * 3);
    }
}
