//! Exhaustive checks over lines, perps, hyperplane sections and the group,
//! each producing a [`Check`] record inside a [`Report`].

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::construction::{Family, PointSet};
use crate::geometry::{pg4_points, Coords, Line, ModelKind, Quadric, SectionKind};
use crate::group::{GroupAction, OrbitClass};

/// How many witnesses a failing check keeps.
const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Witness {
    /// A line (by its point ids) with the wrong intersection size.
    Line { points: Vec<u32>, meets: usize },
    /// A point id, with a description of what went wrong there.
    Point { id: u32, note: String },
    /// A hyperplane section, by the coordinates of its dual point.
    Section { dual: Vec<u32>, meets: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub params: Value,
    pub observed: Value,
    pub expected: Value,
    pub witnesses: Vec<Witness>,
    pub passed: bool,
    /// Informational checks are reported but never change the verdict.
    pub gated: bool,
}

impl Check {
    /// A check that passes iff `witnesses` is empty.
    pub fn new(name: &str, params: Value, observed: Value, expected: Value, witnesses: Vec<Witness>) -> Self {
        let passed = witnesses.is_empty();
        Check { name: name.into(), params, observed, expected, witnesses, passed, gated: true }
    }

    pub fn informational(mut self) -> Self {
        self.gated = false;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub wall_time_ms: u64,
}

impl Report {
    /// Report over precomputed checks.
    pub fn of(checks: Vec<Check>) -> Self {
        Self::from_checks(checks, Instant::now())
    }

    fn from_checks(checks: Vec<Check>, start: Instant) -> Self {
        let mut r = Report { verdict: Verdict::Pass, checks, wall_time_ms: 0 };
        r.refresh(start);
        r
    }

    fn refresh(&mut self, start: Instant) {
        let failed = self.checks.iter().any(|c| c.gated && !c.passed);
        self.verdict = if failed { Verdict::Fail } else { Verdict::Pass };
        self.wall_time_ms = start.elapsed().as_millis() as u64;
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Append the checks of `other`; timings add up.
    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.wall_time_ms += other.wall_time_ms;
        let failed = self.checks.iter().any(|c| c.gated && !c.passed);
        self.verdict = if failed { Verdict::Fail } else { Verdict::Pass };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn coords_json(c: &Coords) -> Vec<u32> {
    c.iter().map(|x| x.index() as u32).collect()
}

fn hist_json(h: &BTreeMap<usize, usize>) -> Value {
    Value::Object(h.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}

/// Every line meets M in exactly m points, and |M| = m(q² + 1).
pub fn check_m_ovoid(quadric: &Quadric, lines: &[Line], set: &PointSet) -> Report {
    let start = Instant::now();
    let q = quadric.q() as usize;
    let m = set.m as usize;
    let member = set.bitmap(quadric.len());
    let counts: Vec<usize> = lines
        .par_iter()
        .map(|l| l.ids().iter().filter(|&&i| member[i as usize]).count())
        .collect();
    let mut hist = BTreeMap::new();
    for &c in &counts {
        *hist.entry(c).or_insert(0usize) += 1;
    }
    // extremal lines first
    let mut bad: Vec<usize> = (0..lines.len()).filter(|&i| counts[i] != m).collect();
    bad.sort_by_key(|&i| std::cmp::Reverse(counts[i].abs_diff(m)));
    let witnesses = bad
        .into_iter()
        .take(MAX_WITNESSES)
        .map(|i| Witness::Line { points: lines[i].ids().to_vec(), meets: counts[i] })
        .collect();
    let params = json!({ "q": q, "m": m, "model": set.model });
    let mut checks = vec![Check::new(
        "lines",
        params.clone(),
        json!({ "histogram": hist_json(&hist), "lines": lines.len() }),
        json!({ "histogram": { m.to_string(): (q + 1) * (q * q + 1) } }),
        witnesses,
    )];

    let want = m * (q * q + 1);
    let size_w = if set.len() == want {
        vec![]
    } else {
        vec![Witness::Point { id: set.ids.first().copied().unwrap_or(0), note: format!("|M| = {}", set.len()) }]
    };
    checks.push(Check::new("size", params.clone(), json!(set.len()), json!(want), size_w));

    // each point is on q + 1 lines
    let total: usize = counts.iter().sum();
    let total_w = if total == set.len() * (q + 1) {
        vec![]
    } else {
        vec![Witness::Point { id: 0, note: format!("sum over lines = {total}") }]
    };
    checks.push(Check::new("incidence_total", params, json!(total), json!(set.len() * (q + 1)), total_w));
    Report::from_checks(checks, start)
}

/// |P⊥ ∩ M| for every quadric point P, counted directly from the polar form.
pub fn perp_counts(quadric: &Quadric, set: &PointSet) -> Vec<usize> {
    let members: Vec<Coords> = set.ids.iter().map(|&i| *quadric.point(i).coords()).collect();
    quadric
        .points()
        .par_iter()
        .map(|p| {
            let l = quadric.functional(p.coords());
            members.iter().filter(|x| quadric.apply_functional(&l, x).is_zero()).count()
        })
        .collect()
}

/// Two-valued perp profile: (q+1)(m−1)+1 on M, (q+1)m off M.
pub fn perp_profile(quadric: &Quadric, set: &PointSet) -> Report {
    let start = Instant::now();
    let q = quadric.q() as usize;
    let m = set.m as usize;
    let member = set.bitmap(quadric.len());
    let counts = perp_counts(quadric, set);
    let inside = ((q + 1) * m + 1).saturating_sub(q + 1);
    let outside = (q + 1) * m;
    let mut hist_in = BTreeMap::new();
    let mut hist_out = BTreeMap::new();
    let mut witnesses = Vec::new();
    for (id, &c) in counts.iter().enumerate() {
        let (hist, want) = if member[id] { (&mut hist_in, inside) } else { (&mut hist_out, outside) };
        *hist.entry(c).or_insert(0usize) += 1;
        if c != want && witnesses.len() < MAX_WITNESSES {
            witnesses.push(Witness::Point {
                id: id as u32,
                note: format!("|P⊥ ∩ M| = {c}, expected {want}"),
            });
        }
    }
    let check = Check::new(
        "perp_profile",
        json!({ "q": q, "m": m }),
        json!({ "members": hist_json(&hist_in), "non_members": hist_json(&hist_out) }),
        json!({ "members": inside, "non_members": outside }),
        witnesses,
    );
    Report::from_checks(vec![check], start)
}

/// Elliptic-section intersection counts over all hyperplanes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionScan {
    /// Section kind counts, by kind.
    pub kinds: BTreeMap<String, usize>,
    /// |M ∩ E| for every elliptic E, as (dual coordinates, count).
    pub elliptic: Vec<(Coords, usize)>,
}

pub fn scan_sections(quadric: &Quadric, set: &PointSet) -> SectionScan {
    let q = quadric.q();
    let ctx = quadric.ctx();
    let member = set.bitmap(quadric.len());
    let duals: Vec<Coords> = pg4_points(ctx, quadric.model().kind()).map(|p| *p.coords()).collect();
    let per: Vec<(SectionKind, Coords, usize)> = duals
        .par_iter()
        .map(|c| {
            let l = quadric.functional(c);
            let (mut size, mut meets) = (0usize, 0usize);
            for (id, p) in quadric.points().iter().enumerate() {
                if quadric.apply_functional(&l, p.coords()).is_zero() {
                    size += 1;
                    meets += member[id] as usize;
                }
            }
            let kind = SectionKind::from_size(q, size).expect("sections of Q(4,q) have three sizes");
            (kind, *c, meets)
        })
        .collect();
    let mut kinds = BTreeMap::new();
    let mut elliptic = Vec::new();
    for (kind, c, meets) in per {
        *kinds.entry(format!("{kind:?}").to_lowercase()).or_insert(0) += 1;
        if kind == SectionKind::Elliptic {
            elliptic.push((c, meets));
        }
    }
    SectionScan { kinds, elliptic }
}

/// Elliptic sections meet M in m (mod p) points (gated) and in m (mod q)
/// points (informational); for the q ≡ 3 (mod 4) family the z = 0 section
/// meets M in (q² − 1)/2 points.
pub fn section_spectrum(quadric: &Quadric, set: &PointSet, family: Family) -> Report {
    let start = Instant::now();
    let ctx = quadric.ctx();
    let (p, q, m) = (ctx.p() as usize, quadric.q() as usize, set.m as usize);
    let scan = scan_sections(quadric, set);
    let params = json!({ "q": q, "p": p, "m": m, "sections": scan.kinds });

    let residues = |modulus: usize| {
        let mut h = BTreeMap::new();
        for &(_, c) in &scan.elliptic {
            *h.entry(c % modulus).or_insert(0usize) += 1;
        }
        h
    };
    let bad = |modulus: usize| -> Vec<Witness> {
        scan.elliptic
            .iter()
            .filter(|(_, c)| c % modulus != m % modulus)
            .take(MAX_WITNESSES)
            .map(|(d, c)| Witness::Section { dual: coords_json(d), meets: *c })
            .collect()
    };
    let mut counts = BTreeMap::new();
    for &(_, c) in &scan.elliptic {
        *counts.entry(c).or_insert(0usize) += 1;
    }
    let mut checks = vec![
        Check::new(
            "elliptic_mod_p",
            params.clone(),
            json!({ "counts": hist_json(&counts), "residues": hist_json(&residues(p)) }),
            json!({ "residue": m % p }),
            bad(p),
        ),
        Check::new(
            "elliptic_mod_q",
            params.clone(),
            json!({ "residues": hist_json(&residues(q)) }),
            json!({ "residue": m % q }),
            bad(q),
        )
        .informational(),
    ];
    if family == Family::QMinus1 && quadric.model().kind() == ModelKind::Split {
        let z0: Coords = [ctx.from_int(0), ctx.from_int(0), ctx.from_int(0), ctx.from_int(0), ctx.from_int(1)];
        let meets = scan.elliptic.iter().find(|(c, _)| *c == z0).map(|&(_, c)| c);
        let want = (q * q - 1) / 2;
        let w = match meets {
            Some(c) if c == want => vec![],
            other => vec![Witness::Section { dual: coords_json(&z0), meets: other.unwrap_or(0) }],
        };
        checks.push(Check::new("z0_section", params, json!(meets), json!(want), w));
    }
    Report::from_checks(checks, start)
}

/// Each generator of A maps M onto itself.
pub fn check_a_invariance(action: &GroupAction, set: &PointSet) -> Report {
    let start = Instant::now();
    let names = ["h_base", "h_circle", "sigma", "tau"];
    let checks = action
        .generator_permutations()
        .iter()
        .zip(names)
        .map(|(perm, name)| {
            let witnesses: Vec<Witness> = set
                .ids
                .iter()
                .filter(|&&i| !set.contains(perm[i as usize]))
                .take(MAX_WITNESSES)
                .map(|&i| Witness::Point { id: i, note: format!("image {} not in M", perm[i as usize]) })
                .collect();
            Check::new(
                &format!("invariance_{name}"),
                json!({ "generator": name }),
                json!(witnesses.is_empty()),
                json!(true),
                witnesses,
            )
        })
        .collect();
    Report::from_checks(checks, start)
}

/// |{g ∈ A : g(M) = M}|, by scanning all of A.
pub fn stabilizer_in_a_of_set(action: &GroupAction, set: &PointSet) -> usize {
    let group = action.group();
    let quadric = action.quadric();
    group
        .elements()
        .par_iter()
        .filter(|g| {
            set.ids.iter().all(|&i| {
                let img = group.apply(g, quadric.point(i)).expect("same model");
                quadric.id_of(&img).is_some_and(|j| set.contains(j))
            })
        })
        .count()
}

pub fn check_set_stabilizer(action: &GroupAction, set: &PointSet) -> Report {
    let start = Instant::now();
    let order = action.group().order();
    let s = stabilizer_in_a_of_set(action, set);
    let w = if s == order {
        vec![]
    } else {
        vec![Witness::Point { id: 0, note: format!("stabilizer has order {s}") }]
    };
    Report::from_checks(vec![Check::new("stabilizer_in_a", json!({}), json!(s), json!(order), w)], start)
}

/// For split points with x1x2y ≠ 0 and z = 1: the stabilizer in A has
/// order 4 exactly when sgn(x1x2) = −1 and sgn(1 − x1x2) = +1.
pub fn check_stabilizer_criterion(action: &GroupAction) -> Report {
    let start = Instant::now();
    let quadric = action.quadric();
    let f = quadric.ctx();
    let candidates: Vec<u32> = (0..quadric.len() as u32)
        .filter(|&id| {
            let (x1, x2, y, z) = quadric.point(id).split_coords().expect("split model");
            !(x1.is_zero() || x2.is_zero() || y.is_zero() || z.is_zero())
        })
        .collect();
    let results: Vec<(u32, usize, bool)> = candidates
        .par_iter()
        .map(|&id| {
            let p = quadric.point(id);
            let (x1, x2, _, z) = p.split_coords().expect("split");
            // rescale to z = 1; x1x2 scales by z⁻²
            let zi = f.inv(z).expect("nonzero");
            let t = f.mul(f.mul(x1, x2), f.mul(zi, zi));
            let predicted = f.sgn(t) == -1 && f.sgn(f.sub(crate::field::Fq::ONE, t)) == 1;
            let s = action.stabilizer_order(p).expect("on quadric");
            (id, s, predicted)
        })
        .collect();
    let mut hist = BTreeMap::new();
    let mut witnesses = Vec::new();
    for &(id, s, predicted) in &results {
        *hist.entry(s).or_insert(0usize) += 1;
        if (s == 4) != predicted && witnesses.len() < MAX_WITNESSES {
            witnesses.push(Witness::Point { id, note: format!("stabilizer {s}, criterion says {predicted}") });
        }
    }
    let check = Check::new(
        "stabilizer_criterion",
        json!({ "q": quadric.q(), "points": results.len() }),
        json!({ "stabilizer_orders": hist_json(&hist) }),
        json!("order 4 iff sgn(x1x2) = -1 and sgn(1 - x1x2) = 1"),
        witnesses,
    );
    Report::from_checks(vec![check], start)
}

/// Orbit-length multiset for q ≡ 3 (mod 4): one orbit each of lengths 2,
/// q − 1 and q + 1, (q+1)/2 short and 3(q+1)/4 long orbits.
pub fn expected_split_census(q: usize) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for (len, n) in [(2, 1), (q - 1, 1), (q + 1, 1), ((q * q - 1) / 2, (q + 1) / 2), (q * q - 1, 3 * (q + 1) / 4)] {
        *h.entry(len).or_insert(0) += n;
    }
    h
}

pub fn check_census(action: &GroupAction) -> Report {
    let start = Instant::now();
    let quadric = action.quadric();
    let q = quadric.q() as usize;
    let census = action.census();
    let mut hist = BTreeMap::new();
    for o in &census {
        *hist.entry(o.len()).or_insert(0usize) += 1;
    }
    let total: usize = census.iter().map(|o| o.len()).sum();
    let mut witnesses = Vec::new();
    let expected = if quadric.model().kind() == ModelKind::Split {
        let e = expected_split_census(q);
        if e != hist {
            witnesses.push(Witness::Point { id: 0, note: "orbit lengths differ from the formula".into() });
        }
        hist_json(&e)
    } else {
        Value::Null
    };
    if total != quadric.len() {
        witnesses.push(Witness::Point { id: 0, note: format!("orbits cover {total} points") });
    }
    let short = census.iter().filter(|o| OrbitClass::of_len(q as u64, o.len()) == OrbitClass::Short).count();
    let long = census.iter().filter(|o| OrbitClass::of_len(q as u64, o.len()) == OrbitClass::Long).count();
    let check = Check::new(
        "census",
        json!({ "q": q, "model": quadric.model().kind() }),
        json!({ "lengths": hist_json(&hist), "orbits": census.len(), "points": total, "short": short, "long": long }),
        expected,
        witnesses,
    );
    Report::from_checks(vec![check], start)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Include the full hyperplane scan.
    pub sections: bool,
}

/// Lines, perp profile and A-invariance (and optionally sections) for a
/// claimed m-ovoid.
pub fn verify_set(
    action: &GroupAction,
    lines: &[Line],
    set: &PointSet,
    family: Family,
    opts: VerifyOptions,
) -> Report {
    let start = Instant::now();
    let quadric = action.quadric();
    let mut report = check_m_ovoid(quadric, lines, set);
    report.merge(perp_profile(quadric, set));
    report.merge(check_a_invariance(action, set));
    if opts.sections {
        report.merge(section_spectrum(quadric, set, family));
    }
    report.refresh(start);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_movoid_split, build_movoid_trace, SplitParams};
    use crate::field::make_field_ctx;
    use crate::geometry::QuadricModel;
    use std::sync::Arc;

    fn quadric(p: u32, k: u32, kind: ModelKind) -> Quadric {
        Quadric::new(QuadricModel::new(Arc::new(make_field_ctx(p, k).unwrap()), kind))
    }

    fn split7() -> (Quadric, PointSet) {
        let quad = quadric(7, 1, ModelKind::Split);
        let set = {
            let action = GroupAction::new(&quad).unwrap();
            build_movoid_split(&action, &SplitParams::select(quad.ctx()).unwrap()).unwrap().set
        };
        (quad, set)
    }

    #[test]
    fn split_q7_passes_everything() {
        let (quad, set) = split7();
        let action = GroupAction::new(&quad).unwrap();
        let lines = quad.lines();
        let r = verify_set(&action, &lines, &set, Family::QMinus1, VerifyOptions { sections: true });
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.check("lines").unwrap().observed["histogram"], json!({ "3": 400 }));
        assert_eq!(
            r.check("perp_profile").unwrap().observed,
            json!({ "members": { "17": 150 }, "non_members": { "24": 250 } })
        );
        assert_eq!(r.check("z0_section").unwrap().observed, json!(24));
        assert_eq!(stabilizer_in_a_of_set(&action, &set), 96);
    }

    #[test]
    fn trace_q5_passes() {
        let quad = quadric(5, 1, ModelKind::Trace);
        let action = GroupAction::new(&quad).unwrap();
        let set = build_movoid_trace(&action).unwrap().set;
        let r = verify_set(&action, &quad.lines(), &set, Family::QPlus1, VerifyOptions { sections: true });
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.check("lines").unwrap().observed["histogram"], json!({ "3": 156 }));
        assert!(r.check("z0_section").is_none());
        assert_eq!(stabilizer_in_a_of_set(&action, &set), 48);
    }

    #[test]
    fn removing_a_point_fails_with_witness() {
        let (quad, mut set) = split7();
        set.ids.remove(0);
        let r = check_m_ovoid(&quad, &quad.lines(), &set);
        assert!(!r.passed());
        let c = r.check("lines").unwrap();
        assert!(!c.passed);
        assert!(matches!(c.witnesses[0], Witness::Line { meets: 2, .. }));
        assert_eq!(c.observed["histogram"]["2"], json!(8));
        assert!(r.check("incidence_total").unwrap().passed);
    }

    #[test]
    fn half_orbit_breaks_invariance() {
        let quad = quadric(7, 1, ModelKind::Split);
        let action = GroupAction::new(&quad).unwrap();
        let orbit = action.census().into_iter().find(|o| o.len() == 48).unwrap();
        let half = PointSet::new(ModelKind::Split, orbit.members[..24].to_vec(), 0);
        let r = check_a_invariance(&action, &half);
        assert!(!r.passed());
        assert!(r.checks.iter().any(|c| !c.witnesses.is_empty()));
        let full = PointSet::new(ModelKind::Split, orbit.members.clone(), 0);
        assert!(check_a_invariance(&action, &full).passed());
        assert_eq!(stabilizer_in_a_of_set(&action, &full), 96);
    }

    #[test]
    fn empty_set_profile() {
        let quad = quadric(3, 1, ModelKind::Split);
        let empty = PointSet::new(ModelKind::Split, vec![], 0);
        let r = perp_profile(&quad, &empty);
        assert!(r.passed());
        assert_eq!(r.check("perp_profile").unwrap().observed["non_members"], json!({ "0": 40 }));
    }

    #[test]
    fn perp_counts_agree_with_lines() {
        // |P⊥ ∩ M| = Σ over lines through P of |L ∩ M|, minus q·[P ∈ M]
        let (quad, set) = split7();
        let lines = quad.lines();
        let member = set.bitmap(quad.len());
        let mut through = vec![0usize; quad.len()];
        for l in &lines {
            let c = l.ids().iter().filter(|&&i| member[i as usize]).count();
            for &i in l.ids() {
                through[i as usize] += c;
            }
        }
        let q = quad.q() as usize;
        for (id, c) in perp_counts(&quad, &set).into_iter().enumerate() {
            assert_eq!(c, through[id] - q * member[id] as usize);
        }
    }

    #[test]
    fn stabilizer_criterion_q7() {
        let quad = quadric(7, 1, ModelKind::Split);
        let r = check_stabilizer_criterion(&GroupAction::new(&quad).unwrap());
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn census_q7_and_q11() {
        for q in [7, 11] {
            let quad = quadric(q, 1, ModelKind::Split);
            let r = check_census(&GroupAction::new(&quad).unwrap());
            assert!(r.passed(), "{}", r.to_json());
        }
        assert_eq!(expected_split_census(11).values().sum::<usize>(), 18);
    }

    #[test]
    fn random_subset_mod_p_usually_fails() {
        let quad = quadric(7, 1, ModelKind::Split);
        let set = PointSet::new(ModelKind::Split, (0..quad.len() as u32).step_by(2).collect(), 3);
        let r = section_spectrum(&quad, &set, Family::QMinus1);
        assert!(!r.passed());
    }
}
