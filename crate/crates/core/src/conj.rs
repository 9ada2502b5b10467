//! Conjugation action of Γ(I_k) on its regular subgroups, computed on parameters.
//!
//! Conjugating G_{g,h} by τ_x multiplies both parameters by x (and by τ_y, by y);
//! conjugating by σ_u adds (u·diff_x, u·diff_y). The translate generator for a
//! basis row u of I_k is conjugation by σ_{-u}: (g, h) ↦ (g - u·diff_x, h - u·diff_y).
//!
//! Orbit counting works on packed keys: the I_k-coordinates of g and h written as
//! 2·dim(I_k) base-p digits in a `u64`, with the generators precomputed as
//! coordinate matrices.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::census::{
    self, canonical_rep, canonicalize, checked_pow, diff_x, diff_y, enumerate_reg, Bounds,
    CensusReport, Check, RegParams,
};
use crate::error::{Error, Result};
use crate::fpring::{Context, IdealBasis, RingElem};
use crate::permrep::{gamma, group_closure, Perm};

/// Largest p for which the brute-force oracle runs.
pub const ORACLE_MAX_P: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ActionGen {
    ShiftX,
    ShiftY,
    /// Index into the echelon basis of I_k.
    Translate(usize),
}

/// Generators of the Γ(I_k) action on canonical parameters.
#[derive(Clone, Debug)]
pub struct ParamAction {
    ctx: Context,
    k: u32,
    ik: IdealBasis,
    dx: RingElem,
    dy: RingElem,
    // coordinate form, rows indexed by source coordinate
    mat_x: Vec<Vec<u8>>,
    mat_y: Vec<Vec<u8>>,
    const_coeff: Vec<u8>,
    f0_coords: Vec<u8>,
    trans: Vec<(Vec<u8>, Vec<u8>)>,
}

pub fn build_action(ctx: Context, k: u32) -> Result<ParamAction> {
    census::check_k_range(ctx, k)?;
    let ik = IdealBasis::ideal_ik(ctx, k);
    let coords = |v: &RingElem| {
        ik.coordinates(v)
            .ok_or_else(|| Error::Internal(format!("{v} is not in I_{k}")))
    };
    let mat_x = ik.rows().iter().map(|r| coords(&r.shift(1, 0))).collect::<Result<_>>()?;
    let mat_y = ik.rows().iter().map(|r| coords(&r.shift(0, 1))).collect::<Result<_>>()?;
    let const_coeff = ik.rows().iter().map(|r| r.coeff(0, 0).value()).collect();
    let f0_coords = coords(&RingElem::f0(ctx))?;
    let (dx, dy) = (diff_x(ctx), diff_y(ctx));
    let trans = ik
        .rows()
        .iter()
        .map(|u| Ok((coords(&canonical_rep(&(u * &dx)))?, coords(&canonical_rep(&(u * &dy)))?)))
        .collect::<Result<_>>()?;
    Ok(ParamAction {
        ctx,
        k,
        ik,
        dx,
        dy,
        mat_x,
        mat_y,
        const_coeff,
        f0_coords,
        trans,
    })
}

impl ParamAction {
    pub fn ctx(&self) -> Context {
        self.ctx
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// shift_x, shift_y, then one translate per basis row of I_k.
    pub fn generators(&self) -> Vec<ActionGen> {
        let mut gens = vec![ActionGen::ShiftX, ActionGen::ShiftY];
        gens.extend((0..self.ik.dim()).map(ActionGen::Translate));
        gens
    }

    /// Ring-level image of canonical parameters.
    pub fn apply(&self, gen: ActionGen, rp: &RegParams) -> RegParams {
        let (g, h) = match gen {
            ActionGen::ShiftX => (rp.g().shift(1, 0), rp.h().shift(1, 0)),
            ActionGen::ShiftY => (rp.g().shift(0, 1), rp.h().shift(0, 1)),
            ActionGen::Translate(r) => {
                let u = &self.ik.rows()[r];
                (rp.g() - &(u * &self.dx), rp.h() - &(u * &self.dy))
            }
        };
        canonicalize(&g, &h).expect("the action preserves compatibility")
    }

    /// The element of Γ(I_k) whose conjugation realizes `gen`.
    pub fn conjugator(&self, gen: ActionGen) -> Perm {
        use crate::permrep::{sigma, tau, Axis};
        match gen {
            ActionGen::ShiftX => tau(self.ctx, Axis::X),
            ActionGen::ShiftY => tau(self.ctx, Axis::Y),
            ActionGen::Translate(r) => sigma(&-&self.ik.rows()[r]),
        }
    }

    fn dim(&self) -> usize {
        self.ik.dim()
    }

    /// Packs the I_k-coordinates of g then h, most significant first.
    pub fn key(&self, rp: &RegParams) -> Result<u64> {
        let p = self.ctx.p() as u64;
        if checked_pow(self.ctx.p(), 2 * self.dim() as u32).is_none() {
            return Err(Error::Internal("parameter key does not fit in 64 bits".into()));
        }
        let mut key = 0u64;
        for v in [rp.g(), rp.h()] {
            let c = self
                .ik
                .coordinates(v)
                .ok_or_else(|| Error::Internal(format!("{v} is not in I_{}", self.k)))?;
            for d in c {
                key = key * p + d as u64;
            }
        }
        Ok(key)
    }

    fn unpack(&self, mut key: u64, buf: &mut [u8]) {
        let p = self.ctx.p() as u64;
        for slot in buf.iter_mut().rev() {
            *slot = (key % p) as u8;
            key /= p;
        }
    }

    fn pack(&self, digits: &[u8]) -> u64 {
        let p = self.ctx.p() as u64;
        digits.iter().fold(0u64, |acc, &d| acc * p + d as u64)
    }

    fn mat_apply(&self, mat: &[Vec<u8>], src: &[u8], dst: &mut [u8]) {
        let ctx = self.ctx;
        dst.fill(0);
        for (row, &c) in mat.iter().zip(src) {
            if c == 0 {
                continue;
            }
            for (d, &m) in dst.iter_mut().zip(row) {
                *d = ctx.add(*d, ctx.mul(c, m));
            }
        }
        // subtract the constant coefficient times f_0
        let c0 = dst
            .iter()
            .zip(&self.const_coeff)
            .fold(0u8, |acc, (&d, &k)| ctx.add(acc, ctx.mul(d, k)));
        if c0 != 0 {
            for (d, &f) in dst.iter_mut().zip(&self.f0_coords) {
                *d = ctx.sub(*d, ctx.mul(c0, f));
            }
        }
    }

    /// Key-level image; agrees with [`apply`](Self::apply).
    pub fn apply_key(&self, gen: ActionGen, key: u64) -> u64 {
        let n = self.dim();
        let mut src = vec![0u8; 2 * n];
        let mut dst = vec![0u8; 2 * n];
        self.unpack(key, &mut src);
        self.apply_digits(gen, &src, &mut dst);
        self.pack(&dst)
    }

    fn apply_digits(&self, gen: ActionGen, src: &[u8], dst: &mut [u8]) {
        let n = self.dim();
        let (sg, sh) = src.split_at(n);
        let (dg, dh) = dst.split_at_mut(n);
        match gen {
            ActionGen::ShiftX => {
                self.mat_apply(&self.mat_x, sg, dg);
                self.mat_apply(&self.mat_x, sh, dh);
            }
            ActionGen::ShiftY => {
                self.mat_apply(&self.mat_y, sg, dg);
                self.mat_apply(&self.mat_y, sh, dh);
            }
            ActionGen::Translate(r) => {
                let (tg, th) = &self.trans[r];
                for (d, (&s, &t)) in dg.iter_mut().zip(sg.iter().zip(tg)) {
                    *d = self.ctx.sub(s, t);
                }
                for (d, (&s, &t)) in dh.iter_mut().zip(sh.iter().zip(th)) {
                    *d = self.ctx.sub(s, t);
                }
            }
        }
    }
}

/// Orbit statistics of the conjugation action on reg(Γ(I_k), E_{p³}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub p: u32,
    pub k: u32,
    pub b_h: u64,
    /// size ↦ number of orbits of that size
    pub orbit_sizes: BTreeMap<u64, u64>,
    pub m_k: u64,
    pub max_orbit: u64,
    /// Least serialized parameters of each orbit, sorted.
    pub representatives: Vec<String>,
}

impl OrbitReport {
    pub fn total(&self) -> u64 {
        self.orbit_sizes.iter().map(|(s, m)| s * m).sum()
    }
}

/// Partitions the enumerated parameters into orbits by breadth-first search.
pub fn count_orbits(ctx: Context, k: u32, enum_cap: u64) -> Result<OrbitReport> {
    let params = enumerate_reg(ctx, k, enum_cap)?;
    orbits_of_params(ctx, k, &params)
}

/// [`count_orbits`] over an already enumerated parameter list.
pub fn orbits_of_params(ctx: Context, k: u32, params: &[RegParams]) -> Result<OrbitReport> {
    let action = build_action(ctx, k)?;
    let keys = params.iter().map(|rp| action.key(rp)).collect::<Result<Vec<u64>>>()?;
    let index: HashMap<u64, u32> = keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
    let gens = action.generators();
    let n = action.dim();
    let mut src = vec![0u8; 2 * n];
    let mut dst = vec![0u8; 2 * n];

    let mut visited = vec![false; keys.len()];
    let mut sizes: BTreeMap<u64, u64> = BTreeMap::new();
    let mut reps = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..keys.len() {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        queue.push_back(start);
        let mut size = 0u64;
        let mut least = start;
        while let Some(cur) = queue.pop_front() {
            size += 1;
            if params[cur] < params[least] {
                least = cur;
            }
            action.unpack(keys[cur], &mut src);
            for &gen in &gens {
                action.apply_digits(gen, &src, &mut dst);
                let img = action.pack(&dst);
                let &j = index.get(&img).ok_or_else(|| {
                    Error::Internal(format!("orbit left the enumerated set at key {img}"))
                })?;
                if !visited[j as usize] {
                    visited[j as usize] = true;
                    queue.push_back(j as usize);
                }
            }
        }
        *sizes.entry(size).or_default() += 1;
        reps.push(params[least].serialize());
    }
    reps.sort();
    Ok(OrbitReport {
        p: ctx.p(),
        k,
        b_h: reps.len() as u64,
        m_k: sizes.keys().next().copied().unwrap_or(0),
        max_orbit: sizes.keys().next_back().copied().unwrap_or(0),
        orbit_sizes: sizes,
        representatives: reps,
    })
}

fn pow_i(p: u32, e: i64) -> Option<u64> {
    if e < 0 {
        None
    } else {
        checked_pow(p, e as u32)
    }
}

/// Bound verdicts for one (p, k) plus structural checks on the orbit sizes.
pub fn check_bounds(report: &OrbitReport, census: &CensusReport) -> Result<(Bounds, Vec<Check>)> {
    if (report.p, report.k) != (census.p, census.k) {
        return Err(Error::Internal(format!(
            "orbit report for (p={}, k={}) vs census for (p={}, k={})",
            report.p, report.k, census.p, census.k
        )));
    }
    let (p, k) = (report.p as i64, report.k as i64);
    let dim_ik = census.dims.ik as i64;
    let b = report.b_h;
    let lower = pow_i(p as u32, 2 * p - k - 2).unwrap_or(1);
    let upper = pow_i(p as u32, 2 * p - k + 1).unwrap_or(u64::MAX);
    let orbit_lo = pow_i(p as u32, dim_ik - 4).unwrap_or(1).max(1);
    let orbit_hi = pow_i(p as u32, dim_ik - 1).unwrap_or(1);
    let bounds = Bounds {
        eq090616a_lower: Some(b >= lower),
        eq090616a_upper: Some(b <= upper),
        lemma070616a3: Some(report.m_k >= orbit_lo && report.max_orbit <= orbit_hi),
        theorem251015b: (k == p).then(|| b >= pow_i(p as u32, p - 2).unwrap_or(1)),
    };

    let gamma_order = pow_i(p as u32, 2 + dim_ik);
    let powers_dividing = report.orbit_sizes.keys().all(|&s| {
        let mut t = s;
        while t % p as u64 == 0 {
            t /= p as u64;
        }
        t == 1 && gamma_order.is_some_and(|g| g % s == 0)
    });
    let expected_total = pow_i(p as u32, census.reg_count_expected_exp as i64);
    let mut checks = vec![
        Check::new("bH_lower_bound", bounds.eq090616a_lower == Some(true)),
        Check::new("bH_upper_bound", bounds.eq090616a_upper == Some(true)),
        Check::new("orbit_size_sandwich", bounds.lemma070616a3 == Some(true)),
        Check::new("orbit_sizes_powers_of_p_dividing_gamma", powers_dividing),
        Check::new("orbit_sizes_sum_to_reg_count", Some(report.total()) == expected_total),
    ];
    checks.push(match bounds.theorem251015b {
        Some(ok) => Check::new("bH_at_k_eq_p", ok),
        None => Check::skipped("bH_at_k_eq_p"),
    });
    Ok((bounds, checks))
}

/// Copies orbit results and bound verdicts into the census report.
pub fn merge_into(census: &mut CensusReport, report: &OrbitReport) -> Result<()> {
    let (bounds, checks) = check_bounds(report, census)?;
    census.b_h = Some(report.b_h);
    census.orbit_sizes = Some(report.orbit_sizes.clone());
    census.m_k = Some(report.m_k);
    census.max_orbit = Some(report.max_orbit);
    census.bounds = bounds;
    for c in checks {
        if c.status == census::Status::Skipped {
            census.skipped.push(c.name.clone());
        }
        census.checks.push(c);
    }
    Ok(())
}

/// Census plus orbits for one configuration, with orbit items marked skipped over the cap.
pub fn full_report(ctx: Context, k: u32, enum_cap: u64) -> Result<CensusReport> {
    let (mut report, params) = census::census_with_params(ctx, k, enum_cap)?;
    match params {
        Some(params) => {
            let orbits = orbits_of_params(ctx, k, &params)?;
            merge_into(&mut report, &orbits)?;
        }
        None => mark_orbits_skipped(&mut report),
    }
    Ok(report)
}

/// Records the orbit items as skipped when the enumeration did not run.
pub fn mark_orbits_skipped(report: &mut CensusReport) {
    report.skip("orbits");
    if report.k == report.p {
        report.skip("bH_at_k_eq_p");
    }
}

/// A subgroup as its sorted element list.
pub type ElementSet = Vec<Perm>;

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub gamma_order: usize,
    pub subgroups: BTreeSet<ElementSet>,
    pub b_h: u64,
    pub orbit_sizes: BTreeMap<u64, u64>,
}

fn element_set(elems: impl IntoIterator<Item = Perm>) -> ElementSet {
    let mut v: Vec<Perm> = elems.into_iter().collect();
    v.sort();
    v
}

/// Regular elementary abelian subgroups of order p³ by exhaustive search inside
/// the materialized Γ(I_k), and their conjugacy classes by explicit conjugation.
///
/// The search knows nothing about parameters: a regular group has exactly one
/// element sending point 0 to each point, so it extends a partial group H by each
/// candidate sending 0 to the least point outside 0^H, keeping the candidate only
/// if it has order p, commutes with H and keeps H semiregular.
pub fn oracle_reg_and_orbits(ctx: Context, k: u32, closure_cap: usize) -> Result<OracleResult> {
    let p = ctx.p();
    if p > ORACLE_MAX_P {
        return Err(Error::OracleOutOfScale(format!(
            "brute-force oracle runs only for p <= {ORACLE_MAX_P}, got p = {p}"
        )));
    }
    census::check_k_range(ctx, k)?;
    let elems: Vec<Perm> = group_closure(&gamma(&IdealBasis::ideal_ik(ctx, k)), closure_cap)?
        .into_iter()
        .collect();
    let degree = ctx.degree();
    let mut by_target: Vec<Vec<usize>> = vec![Vec::new(); degree];
    for (idx, e) in elems.iter().enumerate() {
        if e.order() == p as u64 {
            by_target[e.apply(0)].push(idx);
        }
    }

    let mut found = BTreeSet::new();
    let identity = Perm::identity(degree);
    extend(&elems, &by_target, vec![identity], Vec::new(), degree, &mut found);

    let mut sizes: BTreeMap<u64, u64> = BTreeMap::new();
    let mut seen: BTreeSet<&ElementSet> = BTreeSet::new();
    let mut b_h = 0;
    for g in &found {
        if seen.contains(g) {
            continue;
        }
        let mut class: BTreeSet<ElementSet> = BTreeSet::new();
        for c in &elems {
            class.insert(element_set(g.iter().map(|e| e.conjugate_by(c))));
        }
        for member in &class {
            let Some(m) = found.get(member) else {
                return Err(Error::Internal("conjugate of a regular subgroup not found".into()));
            };
            seen.insert(m);
        }
        b_h += 1;
        *sizes.entry(class.len() as u64).or_default() += 1;
    }
    Ok(OracleResult {
        gamma_order: elems.len(),
        subgroups: found,
        b_h,
        orbit_sizes: sizes,
    })
}

fn extend(
    elems: &[Perm],
    by_target: &[Vec<usize>],
    group: Vec<Perm>,
    gens: Vec<usize>,
    degree: usize,
    found: &mut BTreeSet<ElementSet>,
) {
    if group.len() == degree {
        found.insert(element_set(group));
        return;
    }
    let mut covered = vec![false; degree];
    for e in &group {
        covered[e.apply(0)] = true;
    }
    let target = covered.iter().position(|&c| !c).expect("group smaller than degree");
    'cand: for &cand in &by_target[target] {
        let t = &elems[cand];
        if !gens.iter().all(|&g| elems[g].commutes_with(t)) {
            continue;
        }
        // H·⟨t⟩ for abelian H and t of order p; it must still move 0 injectively
        let mut next = group.clone();
        let mut images = covered.clone();
        let mut power = t.clone();
        while !power.is_identity() {
            for h in &group {
                let e = h.then(&power);
                if std::mem::replace(&mut images[e.apply(0)], true) {
                    continue 'cand;
                }
                next.push(e);
            }
            power = power.then(t);
        }
        let mut gens = gens.clone();
        gens.push(cand);
        extend(elems, by_target, next, gens, degree, found);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{params_to_group, DEFAULT_ENUM_CAP};
    use crate::permrep::DEFAULT_CLOSURE_CAP;

    fn ctx(p: u32) -> Context {
        Context::new(p).unwrap()
    }

    fn closure_of(rp: &RegParams) -> BTreeSet<Perm> {
        group_closure(&params_to_group(rp), 10_000).unwrap()
    }

    #[test]
    fn translate_by_f0_is_trivial() {
        let c = ctx(3);
        let action = build_action(c, 3).unwrap();
        let ik = IdealBasis::ideal_ik(c, 3);
        let f0 = RingElem::f0(c);
        for rp in enumerate_reg(c, 3, DEFAULT_ENUM_CAP).unwrap() {
            let moved = canonicalize(&(rp.g() - &(&f0 * &diff_x(c))), &(rp.h() - &(&f0 * &diff_y(c))));
            assert_eq!(moved.unwrap(), rp);
        }
        assert!(ik.contains(&f0));
        assert_eq!(action.generators().len(), 2 + ik.dim());
    }

    #[test]
    fn singleton_is_fixed_at_p3_k4() {
        let c = ctx(3);
        let action = build_action(c, 4).unwrap();
        let params = enumerate_reg(c, 4, DEFAULT_ENUM_CAP).unwrap();
        for gen in action.generators() {
            assert_eq!(action.apply(gen, &params[0]), params[0]);
        }
    }

    #[test]
    fn key_action_matches_ring_action() {
        for (p, k) in [(3, 3), (5, 7), (5, 6)] {
            let c = ctx(p);
            let action = build_action(c, k).unwrap();
            let params = enumerate_reg(c, k, DEFAULT_ENUM_CAP).unwrap();
            for rp in params.iter().step_by(37) {
                let key = action.key(rp).unwrap();
                for gen in action.generators() {
                    let img = action.apply(gen, rp);
                    assert_eq!(action.apply_key(gen, key), action.key(&img).unwrap());
                }
            }
        }
    }

    /// Every parameter-level generator agrees with conjugation of the whole
    /// subgroup by the corresponding permutation.
    #[test]
    fn action_matches_permutation_conjugation() {
        let c = ctx(3);
        let action = build_action(c, 3).unwrap();
        for rp in enumerate_reg(c, 3, DEFAULT_ENUM_CAP).unwrap() {
            let elems = closure_of(&rp);
            for gen in action.generators() {
                let conj = action.conjugator(gen);
                let conjugated: BTreeSet<Perm> = elems.iter().map(|e| e.conjugate_by(&conj)).collect();
                assert_eq!(conjugated, closure_of(&action.apply(gen, &rp)), "{gen:?}");
            }
        }
    }

    #[test]
    fn orbit_examples() {
        let r = count_orbits(ctx(3), 4, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(r.b_h, 1);
        assert_eq!(r.orbit_sizes, BTreeMap::from([(1, 1)]));

        let r = count_orbits(ctx(3), 3, DEFAULT_ENUM_CAP).unwrap();
        assert!((3..=27).contains(&r.b_h));
        assert_eq!(r.total(), 27);

        let r = count_orbits(ctx(5), 7, DEFAULT_ENUM_CAP).unwrap();
        assert!((5..=125).contains(&r.b_h));
        assert_eq!(r.total(), 125);
        assert!(matches!(
            count_orbits(ctx(5), 5, DEFAULT_ENUM_CAP),
            Err(Error::EnumerationCapExceeded { .. })
        ));
    }

    #[test]
    fn bounds_examples() {
        for (p, k) in [(3, 3), (2, 2), (3, 4), (5, 7), (5, 8)] {
            let report = full_report(ctx(p), k, DEFAULT_ENUM_CAP).unwrap();
            assert!(report.all_ok(), "p={p} k={k}: {:?}", report.checks);
            assert_eq!(report.bounds.eq090616a_lower, Some(true));
            assert_eq!(report.bounds.eq090616a_upper, Some(true));
            assert_eq!(report.bounds.lemma070616a3, Some(true));
            assert_eq!(report.bounds.theorem251015b.is_some(), k == p);
        }
        let r = full_report(ctx(3), 3, DEFAULT_ENUM_CAP).unwrap();
        assert!(r.b_h.unwrap() >= 3);
        assert!(r.max_orbit.unwrap() <= 9 && r.m_k.unwrap() >= 1);
        let r = full_report(ctx(2), 2, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(r.b_h, Some(1));
    }

    #[test]
    fn check_bounds_rejects_mismatched_reports() {
        let orbit = count_orbits(ctx(3), 4, DEFAULT_ENUM_CAP).unwrap();
        let census = census::census_counts(ctx(3), 3, DEFAULT_ENUM_CAP).unwrap();
        assert!(check_bounds(&orbit, &census).is_err());
    }

    #[test]
    fn oracle_examples() {
        let r = oracle_reg_and_orbits(ctx(3), 4, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!((r.subgroups.len(), r.b_h), (1, 1));
        let r = oracle_reg_and_orbits(ctx(2), 2, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!((r.subgroups.len(), r.b_h), (1, 1));
        let r = oracle_reg_and_orbits(ctx(3), 3, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(r.gamma_order, 243);
        assert_eq!(r.subgroups.len(), 27);
        let param = count_orbits(ctx(3), 3, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(r.b_h, param.b_h);
        assert_eq!(r.orbit_sizes, param.orbit_sizes);
        assert!(matches!(
            oracle_reg_and_orbits(ctx(5), 7, DEFAULT_CLOSURE_CAP),
            Err(Error::OracleOutOfScale(_))
        ));
    }
}
