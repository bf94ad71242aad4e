//! One checker per published identity. Each returns a report with exact
//! expected and observed values and a witness for every failure.

use std::collections::BTreeMap;
use std::fmt::Display;

use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Limits, Result};
use crate::functions::{whirl_function, FamilyKind, FunctionFamily, OneLineFunction};
use crate::ideal::{enumerate_ideals, rowmotion_direct, OrderIdeal};
use crate::orbit::{
    all_orbits, average_of, homomesy_check, map_order, orbit_average, orbit_lengths, orbit_of,
    Orbit, OrbitBoard,
};
use crate::poset::{make_claw, make_v, product_with_chain, Poset};
use crate::stat::{ratio, Statistic};
use crate::whirl::{enumerate_partitions, phi, phi_inv, whirl, whirl_pow, PPartition};
use crate::whorm::{alpha, decompose_whorms, whirl_bar_a, whorm_metrics};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Refuted,
    Skipped,
    /// Ran on an open conjecture; failures are findings, not errors.
    Exploratory,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
    /// A check that passes when a known-false claim is seen to fail.
    pub negative_control: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub claim: String,
    pub params: BTreeMap<String, String>,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub witnesses: Vec<String>,
    pub values: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    fn new(claim: &str) -> Self {
        VerificationReport {
            claim: claim.to_string(),
            params: BTreeMap::new(),
            verdict: Verdict::Verified,
            checks: Vec::new(),
            witnesses: Vec::new(),
            values: BTreeMap::new(),
            note: None,
        }
    }

    fn param(mut self, key: &str, value: impl Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    fn check(&mut self, name: impl Into<String>, expected: impl Display, observed: impl Display) {
        let (expected, observed) = (expected.to_string(), observed.to_string());
        self.checks.push(Check {
            name: name.into(),
            passed: expected == observed,
            expected,
            observed,
            negative_control: false,
        });
    }

    fn check_all(&mut self, name: impl Into<String>, total: usize, failure: Option<String>) {
        let name = name.into();
        let passed = failure.is_none();
        if let Some(w) = failure {
            self.witnesses.push(format!("{name}: {w}"));
        }
        self.checks.push(Check {
            name,
            expected: format!("all {total} cases"),
            observed: if passed {
                format!("all {total} cases")
            } else {
                "counterexample found".into()
            },
            passed,
            negative_control: false,
        });
    }

    fn control(&mut self, name: impl Into<String>, claimed: impl Display, observed: impl Display) {
        let (claimed, observed) = (claimed.to_string(), observed.to_string());
        self.checks.push(Check {
            name: name.into(),
            passed: claimed != observed,
            expected: format!("differs from claimed {claimed}"),
            observed,
            negative_control: true,
        });
    }

    fn value(&mut self, key: &str, value: impl Display) {
        self.values.insert(key.to_string(), value.to_string());
    }

    fn finish(mut self, exploratory: bool) -> Self {
        let failed = self.checks.iter().any(|c| !c.passed);
        self.verdict = match (exploratory, failed) {
            (true, _) => Verdict::Exploratory,
            (false, true) => Verdict::Refuted,
            (false, false) => Verdict::Verified,
        };
        self
    }

    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Verified | Verdict::Exploratory)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn run(
    report: VerificationReport,
    body: impl FnOnce(&mut VerificationReport) -> Result<bool>,
) -> VerificationReport {
    let mut report = report;
    match body(&mut report) {
        Ok(exploratory) => report.finish(exploratory),
        Err(e) if e.is_resource() => {
            report.note = Some(e.to_string());
            report.verdict = Verdict::Skipped;
            report
        }
        Err(e) => {
            report.check("evaluation", "no error", e);
            report.finish(false)
        }
    }
}

fn rowmotion_orbits(p: &Poset, limits: Limits) -> Result<Vec<Orbit<OrderIdeal>>> {
    let space = enumerate_ideals(p, limits)?;
    all_orbits(|i| rowmotion_direct(p, i), &space, limits)
}

fn q(n: i64, d: i64) -> BigRational {
    ratio(n, d)
}

/// Whether the orbit board through `f` contains a whorm with two or more
/// tails.
fn multi_tailed(base: &Poset, f: &PPartition, limits: Limits) -> Result<bool> {
    let board = OrbitBoard::from_seed(base, f, limits)?;
    let dec = decompose_whorms(base, &board)?;
    for w in dec.whorms() {
        if whorm_metrics(base, w, f.bound())?.tail_count() > 1 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `|J(V x [k])| = (k+1)(k+2)(2k+3)/6`.
pub fn verify_v_counting(k: u32, limits: Limits) -> VerificationReport {
    run(VerificationReport::new("v-count").param("k", k), |r| {
        let p = product_with_chain(&make_v(), k as usize, limits)?;
        let k = k as u128;
        let formula = (k + 1) * (k + 2) * (2 * k + 3) / 6;
        r.check("ideal count", formula, enumerate_ideals(&p, limits)?.len());
        Ok(false)
    })
}

/// `|J(C_n x [k])| = 1^n + 2^n + ... + (k+1)^n`.
pub fn verify_claw_counting(n: usize, k: u32, limits: Limits) -> VerificationReport {
    run(
        VerificationReport::new("claw-count").param("n", n).param("k", k),
        |r| {
            let p = product_with_chain(&make_claw(n)?, k as usize, limits)?;
            let formula: u128 = (1..=k as u128 + 1).map(|i| i.pow(n as u32)).sum();
            r.check("ideal count", formula, enumerate_ideals(&p, limits)?.len());
            Ok(false)
        },
    )
}

fn lengths_string(v: &[usize]) -> String {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &l in v {
        *counts.entry(l).or_default() += 1;
    }
    counts
        .iter()
        .map(|(l, c)| format!("{l}x{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Rowmotion on `J(V x [k])` has order exactly `2(k+2)`.
pub fn verify_v_order(k: u32, limits: Limits) -> VerificationReport {
    run(VerificationReport::new("v-order").param("k", k), |r| {
        let p = product_with_chain(&make_v(), k as usize, limits)?;
        let orbits = rowmotion_orbits(&p, limits)?;
        r.check("order", 2 * (k as u128 + 2), map_order(&orbits));
        r.value("orbit_lengths", lengths_string(&orbit_lengths(&orbits)));
        r.value("ideals", orbits.iter().map(Orbit::len).sum::<usize>());
        Ok(false)
    })
}

/// `w^{k+2}(x,y,z) = (z,y,x)` on every triple of `F_k(V)`.
pub fn verify_halfway(k: u32, limits: Limits) -> VerificationReport {
    run(VerificationReport::new("v-halfway").param("k", k), |r| {
        let v = make_v();
        let all = enumerate_partitions(&v, k, limits)?;
        let mut failure = None;
        for f in &all {
            let l = f.labels();
            let image = whirl_pow(&v, f, k as usize + 2);
            if image.labels() != [l[2], l[1], l[0]] {
                failure = Some(format!("w^{}{f} = {image}", k + 2));
                break;
            }
        }
        r.check_all("w^(k+2) reflects", all.len(), failure);
        if k == 4 {
            let f = PPartition::new(&v, vec![1, 3, 3], 4)?;
            r.check("w^6(1,3,3)", "(3,3,1)", whirl_pow(&v, &f, 6));
        }
        Ok(false)
    })
}

/// Both homomesies for rowmotion on `J(V x [k])` together with the flux
/// identities of [`verify_flux`].
pub fn verify_v_homomesies(k: u32, limits: Limits) -> VerificationReport {
    run(VerificationReport::new("v-homomesy").param("k", k), |r| {
        let p = product_with_chain(&make_v(), k as usize, limits)?;
        let orbits = rowmotion_orbits(&p, limits)?;
        v_homomesy_checks(r, &p, &orbits, k)?;
        flux_checks(r, &p, &orbits, k, limits)?;
        Ok(false)
    })
}

fn v_homomesy_checks(
    r: &mut VerificationReport,
    p: &Poset,
    orbits: &[Orbit<OrderIdeal>],
    k: u32,
) -> Result<()> {
    let render = |i: &OrderIdeal| i.to_bit_string();
    for i in 1..=k {
        let s = Statistic::for_ideals(&format!("chi(l,{i})-chi(r,{i})"), p)?;
        let rep = homomesy_check(&s, orbits, render);
        r.check(format!("{} mesic", s.text()), "0", display_value(&rep.verdict));
    }
    let s = Statistic::for_ideals(&format!("chi(l,1)+chi(r,1)-chi(c,{k})"), p)?;
    let rep = homomesy_check(&s, orbits, render);
    let want = q(2 * (k as i64 - 1), k as i64 + 2);
    r.check(format!("{} mesic", s.text()), &want, display_value(&rep.verdict));
    Ok(())
}

fn display_value(v: &crate::orbit::HomomesyVerdict) -> String {
    match v {
        crate::orbit::HomomesyVerdict::Homomesic { value } => value.to_string(),
        crate::orbit::HomomesyVerdict::NotHomomesic { .. } => "not homomesic".into(),
    }
}

/// `F_i - F_{k+2-i}` is `3(k+2-2i)/(k+2)`-mesic; `F_i - F_{i+1}` averages
/// `3/(k+2)` on one-tailed orbits; the successive claim fails on
/// two-tailed orbits once `k >= 4`.
pub fn verify_flux(k: u32, limits: Limits) -> VerificationReport {
    run(VerificationReport::new("flux").param("k", k), |r| {
        let p = product_with_chain(&make_v(), k as usize, limits)?;
        let orbits = rowmotion_orbits(&p, limits)?;
        flux_checks(r, &p, &orbits, k, limits)?;
        Ok(false)
    })
}

fn flux_checks(
    r: &mut VerificationReport,
    p: &Poset,
    orbits: &[Orbit<OrderIdeal>],
    k: u32,
    limits: Limits,
) -> Result<()> {
    let v = make_v();
    let kk = k as i64 + 2;
    for i in 1..=k as i64 + 1 {
        let s = Statistic::for_ideals(&format!("F({i})-F({})", kk - i), p)?;
        let rep = homomesy_check(&s, orbits, |x| x.to_bit_string());
        r.check(
            format!("{} mesic", s.text()),
            q(3 * (kk - 2 * i), kk),
            display_value(&rep.verdict),
        );
    }

    let mut two_tailed = Vec::with_capacity(orbits.len());
    let mut disagreement = None;
    for o in orbits {
        let f = phi_inv(p, o.representative())?;
        let by_whorms = multi_tailed(&v, &f, limits)?;
        if by_whorms != (f.label(0) == f.label(2)) && disagreement.is_none() {
            disagreement = Some(format!("orbit of {f}"));
        }
        two_tailed.push(by_whorms);
    }
    r.check_all("tail count matches f(l) = f(r)", orbits.len(), disagreement);

    let succ: Vec<Statistic<OrderIdeal>> = (1..=k)
        .map(|i| Statistic::for_ideals(&format!("F({i})-F({})", i + 1), p))
        .collect::<Result<_>>()?;
    let target = q(3, kk);
    let mut failure = None;
    let mut one_count = 0;
    for (o, &two) in orbits.iter().zip(&two_tailed) {
        if two {
            continue;
        }
        one_count += 1;
        for s in &succ {
            let avg = orbit_average(s, o);
            if avg != target && failure.is_none() {
                failure = Some(format!(
                    "{} averages {avg} on the orbit of {}",
                    s.text(),
                    phi_inv(p, o.representative())?
                ));
            }
        }
    }
    r.check_all(
        format!("F(i)-F(i+1) averages {target} on one-tailed orbits"),
        one_count * succ.len(),
        failure,
    );

    // Restricted to the stated range 2 <= i <= k-1.
    let mut broken = None;
    for (o, &two) in orbits.iter().zip(&two_tailed) {
        if !two || broken.is_some() {
            continue;
        }
        for s in succ.iter().take(k.saturating_sub(1) as usize).skip(1) {
            let avg = orbit_average(s, o);
            if avg != target {
                broken = Some((s.text().to_string(), avg, phi_inv(p, o.representative())?));
                break;
            }
        }
    }
    match broken {
        Some((text, avg, f)) => {
            r.control("successive flux on two-tailed orbits", &target, &avg);
            r.witnesses.push(format!("{text} averages {avg} on the two-tailed orbit of {f}"));
        }
        None if k >= 4 => r.control("successive flux on two-tailed orbits", &target, &target),
        None => r.value("two_tailed_successive_flux", "holds for k < 4"),
    }

    if k == 9 {
        let f = PPartition::new(&v, vec![6, 6, 6], 9)?;
        let seed = phi(p, &f)?;
        let o = orbit_of(|i| rowmotion_direct(p, i), &seed, limits)?;
        r.check("orbit of (6,6,6) length", 11, o.len());
        let f23 = Statistic::for_ideals("F(2)-F(3)", p)?;
        let f78 = Statistic::for_ideals("F(7)-F(8)", p)?;
        r.check("F(2)-F(3) on (6,6,6)", q(4, 11), orbit_average(&f23, &o));
        r.check("F(7)-F(8) on (6,6,6)", q(2, 11), orbit_average(&f78, &o));
        r.control("F(2)-F(3) on (6,6,6) vs 3/(k+2)", q(3, 11), orbit_average(&f23, &o));
        r.control("F(7)-F(8) on (6,6,6) vs 3/(k+2)", q(3, 11), orbit_average(&f78, &o));
    }
    Ok(())
}

/// `w^{k+2} f = wbar_A(f)` and `w^{alpha(k+2)} f = f` on every
/// `f` in `F_k(C_n)`.
pub fn verify_worder(n: usize, k: u32, limits: Limits) -> VerificationReport {
    run(
        VerificationReport::new("worder").param("n", n).param("k", k),
        |r| {
            let c = make_claw(n)?;
            let all = enumerate_partitions(&c, k, limits)?;
            let (mut bar_fail, mut period_fail) = (None, None);
            for f in &all {
                let after = whirl_pow(&c, f, k as usize + 2);
                let bar = whirl_bar_a(&c, f)?;
                if after != bar && bar_fail.is_none() {
                    bar_fail = Some(format!("w^{}{f} = {after}, wbar = {bar}", k + 2));
                }
                let a = alpha(&c, f)?;
                let back = whirl_pow(&c, f, a * (k as usize + 2));
                if back != *f && period_fail.is_none() {
                    period_fail = Some(format!("w^(alpha(k+2)){f} = {back}"));
                }
            }
            r.check_all("w^(k+2) = wbar_A", all.len(), bar_fail);
            r.check_all("w^(alpha(k+2)) = id", all.len(), period_fail);
            Ok(false)
        },
    )
}

/// Single-instance form of [`verify_worder`] for spaces too large to sweep.
pub fn verify_worder_instance(n: usize, k: u32, labels: &[u32]) -> VerificationReport {
    let shown: Vec<String> = labels.iter().map(u32::to_string).collect();
    run(
        VerificationReport::new("worder")
            .param("n", n)
            .param("k", k)
            .param("f", format!("({})", shown.join(","))),
        |r| {
            let c = make_claw(n)?;
            let f = PPartition::new(&c, labels.to_vec(), k)?;
            let bar = whirl_bar_a(&c, &f)?;
            r.check("w^(k+2) f", &bar, whirl_pow(&c, &f, k as usize + 2));
            r.value("wbar_A", &bar);
            Ok(false)
        },
    )
}

/// The seed `f_p` used to realize orbit length `p(k+2)`.
pub fn claw_seed(n: usize, k: u32, p: usize) -> Result<PPartition> {
    let c = make_claw(n)?;
    if p == 0 || p > n || p > k as usize + 1 {
        return Err(Error::Precondition(format!(
            "seed index {p} outside 1..=min(k+1, n)"
        )));
    }
    let mut labels: Vec<u32> = (0..n).map(|i| i.min(p - 1) as u32).collect();
    labels.push(p as u32 - 1);
    PPartition::new(&c, labels, k)
}

/// Rowmotion on `J(C_n x [k])` has order exactly
/// `(k+2) lcm(1, .., min(k+1, n))`.
pub fn verify_claw_period(n: usize, k: u32, limits: Limits) -> VerificationReport {
    run(
        VerificationReport::new("claw-period").param("n", n).param("k", k),
        |r| {
            let c = make_claw(n)?;
            let p = product_with_chain(&c, k as usize, limits)?;
            let m = n.min(k as usize + 1) as u128;
            let l = (1..=m).fold(1u128, |acc, i| acc.lcm(&i));
            let orbits = rowmotion_orbits(&p, limits)?;
            r.check("order", (k as u128 + 2) * l, map_order(&orbits));
            for s in 1..=m as usize {
                let f = claw_seed(n, k, s)?;
                let want = if s == k as usize + 1 {
                    k as usize + 1
                } else {
                    s * (k as usize + 2)
                };
                let len = orbit_of(|g| whirl(&c, g), &f, limits)?.len();
                r.check(format!("orbit length of seed {f}"), want, len);
            }
            Ok(false)
        },
    )
}

/// `(n alpha (k+2) - (n+alpha)(alpha+1)) / (alpha (k+2))`.
pub fn alpha_formula(n: usize, k: u32, a: usize) -> BigRational {
    let (n, k, a) = (n as i64, k as i64, a as i64);
    q(n * a * (k + 2) - (n + a) * (a + 1), a * (k + 2))
}

/// Leaf-difference homomesy, the alpha-dependent leaf-sum average, and the
/// generalized flux statistic (true on one-tailed orbits, false in
/// general).
pub fn verify_claw_homomesies(n: usize, k: u32, limits: Limits) -> VerificationReport {
    run(
        VerificationReport::new("claw-homomesy").param("n", n).param("k", k),
        |r| {
            let c = make_claw(n)?;
            let p = product_with_chain(&c, k as usize, limits)?;
            let orbits = rowmotion_orbits(&p, limits)?;
            let shape = c.claw_shape().expect("claw");
            let leaf = |i: usize| c.name(shape.leaves[i]).to_string();
            let hub = c.name(shape.hub).to_string();

            let mut failure = None;
            let mut count = 0;
            for i in 0..n {
                for j in i + 1..n {
                    for a in 1..=k {
                        let text = format!("chi({},{a})-chi({},{a})", leaf(i), leaf(j));
                        let s = Statistic::for_ideals(&text, &p)?;
                        let rep = homomesy_check(&s, &orbits, |x| x.to_bit_string());
                        count += 1;
                        if rep.value() != Some(&q(0, 1)) && failure.is_none() {
                            failure = Some(format!("{text}: {}", display_value(&rep.verdict)));
                        }
                    }
                }
            }
            r.check_all("leaf differences are 0-mesic", count, failure);

            let sum: Vec<String> = (0..n).map(|i| format!("chi({},1)", leaf(i))).collect();
            let text = format!("{}-chi({hub},{k})", sum.join("+"));
            let s = Statistic::for_ideals(&text, &p)?;
            let mut failure = None;
            let mut by_alpha: BTreeMap<usize, BigRational> = BTreeMap::new();
            for o in &orbits {
                let parts: Vec<PPartition> = o
                    .states()
                    .iter()
                    .map(|i| phi_inv(&p, i))
                    .collect::<Result<_>>()?;
                let a = alpha(&c, &parts[0])?;
                if parts.iter().any(|g| alpha(&c, g).ok() != Some(a)) && failure.is_none() {
                    failure = Some(format!("alpha varies along the orbit of {}", parts[0]));
                }
                let avg = orbit_average(&s, o);
                if avg != alpha_formula(n, k, a) && failure.is_none() {
                    failure = Some(format!(
                        "orbit of {} (alpha={a}) averages {avg}, formula gives {}",
                        parts[0],
                        alpha_formula(n, k, a)
                    ));
                }
                by_alpha.insert(a, avg);
            }
            r.check_all(format!("{text} matches the alpha formula"), orbits.len(), failure);
            for (a, avg) in &by_alpha {
                r.value(&format!("average_alpha_{a}"), avg);
            }
            if n == 2 {
                let reduced = q(2 * k as i64 - 2, k as i64 + 2);
                r.check("alpha formula at n=2, alpha=1", &reduced, alpha_formula(2, k, 1));
                r.check("alpha formula at n=2, alpha=2", &reduced, alpha_formula(2, k, 2));
            }

            // B_i - B_j averages (j-i)(n+1)/(k+2) on one-tailed orbits.
            let b: Vec<Statistic<OrderIdeal>> = (1..=k + 1)
                .map(|i| Statistic::for_ideals(&format!("B({i})"), &p))
                .collect::<Result<_>>()?;
            let mut failure = None;
            let mut cases = 0;
            let mut counterexample = None;
            for o in &orbits {
                let f = phi_inv(&p, o.representative())?;
                let one_tailed = !multi_tailed(&c, &f, limits)?;
                if one_tailed != (alpha(&c, &f)? == n) && failure.is_none() {
                    failure = Some(format!("tail count of {f} disagrees with alpha = n"));
                }
                let avgs: Vec<BigRational> = b.iter().map(|s| orbit_average(s, o)).collect();
                for i in 0..avgs.len() {
                    for j in 0..avgs.len() {
                        let want = q((j as i64 - i as i64) * (n as i64 + 1), k as i64 + 2);
                        let got = &avgs[i] - &avgs[j];
                        if one_tailed {
                            cases += 1;
                            if got != want && failure.is_none() {
                                failure = Some(format!(
                                    "B({})-B({}) averages {got} on one-tailed {f}",
                                    i + 1,
                                    j + 1
                                ));
                            }
                        } else if got != want && counterexample.is_none() {
                            counterexample = Some(format!(
                                "B({})-B({}) averages {got}, not {want}, on the orbit of {f}",
                                i + 1,
                                j + 1
                            ));
                        }
                    }
                }
            }
            r.check_all("B(i)-B(j) on one-tailed orbits", cases, failure);
            if let Some(c) = counterexample {
                r.value("general_b_flux_counterexample", c);
            }

            if (n, k) == (4, 6) {
                claw_flux_counterexample(r, &c, &p, limits)?;
            }
            Ok(false)
        },
    )
}

/// The six-row `C_4 x [6]` orbit through `(1,3,5,5,5)`.
pub const CLAW_FLUX_ROWS: [[u32; 5]; 6] = [
    [1, 3, 5, 5, 5],
    [2, 4, 0, 0, 6],
    [3, 5, 1, 1, 5],
    [4, 0, 2, 2, 6],
    [5, 1, 3, 3, 5],
    [0, 2, 4, 4, 6],
];

fn claw_flux_counterexample(
    r: &mut VerificationReport,
    c: &Poset,
    p: &Poset,
    limits: Limits,
) -> Result<()> {
    let seed = PPartition::new(c, CLAW_FLUX_ROWS[0].to_vec(), 6)?;
    let board = OrbitBoard::from_seed(c, &seed, limits)?;
    let rows: Vec<String> = board.rows().iter().map(|f| f.to_string()).collect();
    let want: Vec<String> = CLAW_FLUX_ROWS
        .iter()
        .map(|row| PPartition::new(c, row.to_vec(), 6).map(|f| f.to_string()))
        .collect::<Result<_>>()?;
    r.check("orbit of (1,3,5,5,5)", want.join(" "), rows.join(" "));
    let ideals: Vec<OrderIdeal> = board
        .rows()
        .iter()
        .map(|f| phi(p, f))
        .collect::<Result<_>>()?;
    let b32 = Statistic::for_ideals("B(3)-B(2)", p)?;
    let b23 = Statistic::for_ideals("B(2)-B(3)", p)?;
    r.check("B(3)-B(2) on (1,3,5,5,5)", q(-2, 3), average_of(&b32, &ideals));
    r.check("B(2)-B(3) on (1,3,5,5,5)", q(2, 3), average_of(&b23, &ideals));
    // generalized flux would give (j-i)(n+1)/(k+2) = -5/8 for B(3)-B(2)
    r.control("B(3)-B(2) vs generalized flux", q(-5, 8), average_of(&b32, &ideals));
    r.control("B(2)-B(3) vs generalized flux", q(5, 8), average_of(&b23, &ideals));
    let reduced = Statistic::for_ideals(
        "chi(0hat,1)+chi(b1,2)+chi(b2,2)+chi(b3,2)-chi(0hat,2)-chi(b1,3)-chi(b2,3)-chi(b3,3)",
        p,
    )?;
    r.check(
        "B(2)-B(3) ignoring the repeated column",
        q(1, 2),
        average_of(&reduced, &ideals),
    );
    Ok(())
}

/// `phi(w f) = rowmotion(phi f)` and `phi` is a bijection, on every state.
pub fn verify_equivariance(base: &Poset, k: u32, limits: Limits) -> VerificationReport {
    run(
        VerificationReport::new("equivariance")
            .param("p", base.size())
            .param("k", k),
        |r| {
            let p = product_with_chain(base, k as usize, limits)?;
            let ideals = enumerate_ideals(&p, limits)?;
            let (mut eq_fail, mut bij_fail) = (None, None);
            for i in &ideals {
                let f = phi_inv(&p, i)?;
                if phi(&p, &f)? != *i && bij_fail.is_none() {
                    bij_fail = Some(format!("phi(phi_inv({})) differs", i.to_bit_string()));
                }
                let lhs = phi(&p, &whirl(base, &f))?;
                let rhs = rowmotion_direct(&p, i);
                if lhs != rhs && eq_fail.is_none() {
                    eq_fail = Some(format!("f = {f}: phi(w f) != rowmotion(phi f)"));
                }
            }
            let parts = enumerate_partitions(base, k, limits)?;
            r.check("|F_k(P)| = |J(P x [k])|", ideals.len(), parts.len());
            r.check_all("phi is a bijection", ideals.len(), bij_fail);
            r.check_all("phi intertwines whirl and rowmotion", ideals.len(), eq_fail);
            Ok(false)
        },
    )
}

/// `eta_j` is `n/k`-mesic for whirling on `family`. `Sur_m` with `m > 1`
/// is run but reported as exploratory.
pub fn verify_jpr(family: &FunctionFamily, limits: Limits) -> VerificationReport {
    let exploratory = matches!(family.kind(), FamilyKind::Sur(m) if *m > 1)
        || matches!(family.kind(), FamilyKind::Custom(_));
    run(
        VerificationReport::new("jpr").param("family", family),
        |r| {
            let (n, k) = (family.n(), family.k());
            let members = family.members(limits)?;
            let step = |f: &OneLineFunction| whirl_function(family, f).expect("members stay members");
            let orbits = all_orbits(step, &members, limits)?;
            r.value("members", members.len());
            r.value("orbit_lengths", lengths_string(&orbit_lengths(&orbits)));
            let want = q(n as i64, k as i64);
            for j in 1..=k {
                let s = Statistic::for_functions(&format!("eta({j})"), n, k)?;
                let rep = homomesy_check(&s, &orbits, |f| f.to_string());
                r.check(format!("eta({j}) mesic"), &want, display_value(&rep.verdict));
            }
            if matches!(family.kind(), FamilyKind::Inj(1)) && (n, k) == (3, 6) {
                let f = OneLineFunction::parse("415", 6)?;
                let o = crate::orbit::cycle_from(step, &f, limits)?;
                let shown: Vec<String> = o.iter().map(|g| g.to_string()).collect();
                r.check(
                    "orbit of 415",
                    "415 621 342 563 124 356 412 534 651 263",
                    shown.join(" "),
                );
                for v in 1..=6 {
                    let hits: usize = o.iter().map(|g| g.preimage_size(v)).sum();
                    r.check(format!("occurrences of {v} in the 415 orbit"), 5, hits);
                }
            }
            Ok(exploratory)
        },
    )
}

/// Orbit-length multisets for rowmotion on `J(V x [3])` and `J(V x [4])`.
pub fn example_orbit_sizes(limits: Limits) -> VerificationReport {
    run(VerificationReport::new("v-orbit-sizes"), |r| {
        for k in [3, 4] {
            let p = product_with_chain(&make_v(), k, limits)?;
            let orbits = rowmotion_orbits(&p, limits)?;
            r.value(&format!("k={k}"), lengths_string(&orbit_lengths(&orbits)));
        }
        Ok(false)
    })
}

/// Parameters accepted by [`run_claim`]; unset values fall back to the
/// default grid of the claim.
#[derive(Clone, Debug, Default)]
pub struct ClaimParams {
    pub k: Option<u32>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub family: Option<String>,
}

pub const CLAIMS: [&str; 11] = [
    "v-count",
    "claw-count",
    "v-order",
    "v-halfway",
    "v-homomesy",
    "flux",
    "worder",
    "claw-period",
    "claw-homomesy",
    "equivariance",
    "jpr",
];

fn v_grid(params: &ClaimParams, default: std::ops::RangeInclusive<u32>) -> Vec<u32> {
    params.k.map_or_else(|| default.collect(), |k| vec![k])
}

fn claw_grid(params: &ClaimParams, extra: &[(usize, u32)]) -> Vec<(usize, u32)> {
    match (params.n, params.k) {
        (Some(n), Some(k)) => vec![(n, k)],
        (Some(n), None) => (1..=4).map(|k| (n, k)).collect(),
        (None, Some(k)) => (1..=4).map(|n| (n, k)).collect(),
        (None, None) => {
            let mut g: Vec<(usize, u32)> =
                (1..=4).flat_map(|n| (1..=4).map(move |k| (n, k))).collect();
            g.extend_from_slice(extra);
            g
        }
    }
}

/// Parses `inj`, `sur` or a custom predicate into a family over `[n] -> [k]`.
pub fn parse_family(text: &str, n: usize, k: u32, m: usize) -> Result<FunctionFamily> {
    match text.trim() {
        "inj" | "Inj" => FunctionFamily::inj(m, n, k),
        "sur" | "Sur" => FunctionFamily::sur(m, n, k),
        other => FunctionFamily::custom(n, k, other),
    }
}

/// Dispatches a claim id to its checkers over the requested grid.
pub fn run_claim(id: &str, params: &ClaimParams, limits: Limits) -> Result<Vec<VerificationReport>> {
    Ok(match id {
        "v-count" => v_grid(params, 1..=10)
            .into_iter()
            .map(|k| verify_v_counting(k, limits))
            .collect(),
        "claw-count" => claw_grid(params, &[(5, 3)])
            .into_iter()
            .map(|(n, k)| verify_claw_counting(n, k, limits))
            .collect(),
        "v-order" => {
            let mut out: Vec<_> = v_grid(params, 1..=8)
                .into_iter()
                .map(|k| verify_v_order(k, limits))
                .collect();
            if params.k.is_none() {
                out.push(example_orbit_sizes(limits));
            }
            out
        }
        "v-halfway" => v_grid(params, 1..=6)
            .into_iter()
            .map(|k| verify_halfway(k, limits))
            .collect(),
        "v-homomesy" => v_grid(params, 1..=8)
            .into_iter()
            .map(|k| verify_v_homomesies(k, limits))
            .collect(),
        "flux" => v_grid(params, 2..=9)
            .into_iter()
            .map(|k| verify_flux(k, limits))
            .collect(),
        "worder" => {
            let mut out: Vec<_> = claw_grid(params, &[])
                .into_iter()
                .map(|(n, k)| verify_worder(n, k, limits))
                .collect();
            if params.n.is_none() && params.k.is_none() {
                out.push(verify_worder_instance(6, 9, &[1, 3, 3, 0, 4, 1, 6]));
            }
            out
        }
        "claw-period" => claw_grid(params, &[(5, 3)])
            .into_iter()
            .map(|(n, k)| verify_claw_period(n, k, limits))
            .collect(),
        "claw-homomesy" => claw_grid(params, &[(4, 6)])
            .into_iter()
            .map(|(n, k)| verify_claw_homomesies(n, k, limits))
            .collect(),
        "equivariance" => {
            let ks = params.k.map_or_else(|| (1..=4).collect(), |k| vec![k]);
            let posets = match params.n {
                Some(n) => vec![make_claw(n)?],
                None => vec![make_v(), make_claw(3)?, make_claw(4)?],
            };
            let mut out = Vec::new();
            for p in &posets {
                for &k in &ks {
                    out.push(verify_equivariance(p, k, limits));
                }
            }
            out
        }
        "jpr" => {
            let families = match (&params.family, params.n, params.k) {
                (Some(text), Some(n), Some(k)) => {
                    vec![parse_family(text, n, k, params.m.unwrap_or(1))?]
                }
                (None, None, None) => vec![
                    FunctionFamily::inj(1, 3, 6)?,
                    FunctionFamily::inj(2, 3, 4)?,
                    FunctionFamily::sur(1, 3, 3)?,
                    FunctionFamily::sur(1, 4, 2)?,
                ],
                (family, Some(n), Some(k)) => {
                    let text = family.as_deref().unwrap_or("inj");
                    vec![parse_family(text, n, k, params.m.unwrap_or(1))?]
                }
                _ => {
                    return Err(Error::Precondition(
                        "jpr needs both --n and --k when either is given".into(),
                    ))
                }
            };
            families.iter().map(|f| verify_jpr(f, limits)).collect()
        }
        other => {
            return Err(Error::Precondition(format!(
                "unknown claim {other:?}; expected one of {}",
                CLAIMS.join(", ")
            )))
        }
    })
}
