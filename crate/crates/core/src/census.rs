//! Enumeration of the regular elementary abelian subgroups of Γ(I_k) by their
//! parameter pairs (g, h), and the report that collects the counting formulas.
//!
//! The subgroup ⟨s, t_{g,x}, t_{h,y}⟩ is abelian exactly when the coefficient
//! differences agree: h_{i+1,j} - h_{i,j} = g_{i,j+1} - g_{i,j}. In ring terms
//! that is `diff_x · h = diff_y · g` with diff_x = x^{-1} - 1 and diff_y = y^{-1} - 1,
//! which are unit multiples of a = x - 1 and b = y - 1. So kernels and images
//! under diff_x, diff_y coincide with those under a, b and every count is the same.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fpring::{Context, IdealBasis, RingElem};
use crate::permrep::{s_perm, t_perm, Axis, GenSet};

/// Default cap on the number of enumerated parameter pairs.
pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;

/// x^{p-1} - 1. Multiplying f by it gives the grid f_{i+1,j} - f_{i,j}.
pub fn diff_x(ctx: Context) -> RingElem {
    &RingElem::monomial(ctx, ctx.n() - 1, 0, 1) - &RingElem::one(ctx)
}

/// y^{p-1} - 1. Multiplying f by it gives the grid f_{i,j+1} - f_{i,j}.
pub fn diff_y(ctx: Context) -> RingElem {
    &RingElem::monomial(ctx, 0, ctx.n() - 1, 1) - &RingElem::one(ctx)
}

/// diff_x·h = diff_y·g, i.e. t_{g,x} and t_{h,y} commute.
pub fn is_compatible(g: &RingElem, h: &RingElem) -> bool {
    let ctx = g.ctx();
    &diff_x(ctx) * h == &diff_y(ctx) * g
}

/// The common value diff_x·h = diff_y·g of a compatible pair.
pub fn compat_element(rp: &RegParams) -> RingElem {
    &diff_y(rp.ctx()) * &rp.g
}

pub fn check_k_range(ctx: Context, k: u32) -> Result<()> {
    let p = ctx.p();
    if k < p || k > 2 * (p - 1) {
        return Err(Error::KOutOfRange { p, k });
    }
    Ok(())
}

/// Parameters of G_{g,h} = ⟨s, t_{g,x}, t_{h,y}⟩.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegParams {
    g: RingElem,
    h: RingElem,
    canonical: bool,
}

impl RegParams {
    pub fn new(g: RingElem, h: RingElem) -> Result<RegParams> {
        g.ctx().check_same(h.ctx())?;
        if !is_compatible(&g, &h) {
            return Err(Error::Incompatible);
        }
        let canonical = g.coeff(0, 0).value() == 0 && h.coeff(0, 0).value() == 0;
        Ok(RegParams { g, h, canonical })
    }

    pub fn g(&self) -> &RingElem {
        &self.g
    }

    pub fn h(&self) -> &RingElem {
        &self.h
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn ctx(&self) -> Context {
        self.g.ctx()
    }

    /// `g` digits and `h` digits joined by ':'.
    pub fn serialize(&self) -> String {
        format!("{}:{}", self.g.to_digits(), self.h.to_digits())
    }

    pub fn parse(ctx: Context, s: &str) -> Result<RegParams> {
        let (g, h) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidDigits(format!("missing ':' in {s:?}")))?;
        RegParams::new(RingElem::from_digits(ctx, g)?, RingElem::from_digits(ctx, h)?)
    }
}

/// v - v_{0,0}·f_0: the representative of v + ⟨f_0⟩ with zero constant coefficient.
pub fn canonical_rep(v: &RingElem) -> RingElem {
    let c = v.coeff(0, 0).value();
    if c == 0 {
        return v.clone();
    }
    v - &RingElem::f0(v.ctx()).scale(c)
}

/// Normal form of the pair modulo adding multiples of f_0 to g and to h independently.
/// G_{g,h} depends only on this normal form.
pub fn canonicalize(g: &RingElem, h: &RingElem) -> Result<RegParams> {
    g.ctx().check_same(h.ctx())?;
    if !is_compatible(g, h) {
        return Err(Error::Incompatible);
    }
    Ok(RegParams {
        g: canonical_rep(g),
        h: canonical_rep(h),
        canonical: true,
    })
}

/// ⟨s, t_{g,x}, t_{h,y}⟩ as a generating set.
pub fn params_to_group(rp: &RegParams) -> GenSet {
    let ctx = rp.ctx();
    GenSet::new(
        vec![s_perm(ctx), t_perm(&rp.g, Axis::X), t_perm(&rp.h, Axis::Y)],
        format!("G[{}]", rp.serialize()),
    )
    .expect("three generators of equal degree")
}

/// Dimensions feeding the counting formulas for one (p, k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dims {
    pub ik: usize,
    pub ik1: usize,
    pub ak: usize,
    pub bk: usize,
}

impl Dims {
    pub fn compute(ctx: Context, k: u32) -> Dims {
        let ik = IdealBasis::ideal_ik(ctx, k);
        Dims {
            ik: ik.dim(),
            ik1: IdealBasis::ideal_ik(ctx, k + 1).dim(),
            ak: ik.mult_kernel(&RingElem::a(ctx)).dim(),
            bk: ik.mult_kernel(&RingElem::b(ctx)).dim(),
        }
    }

    /// Exponent e with |reg(Γ(I_k), E_{p³})| = p^e.
    pub fn reg_count_exp(&self) -> u32 {
        (self.ak + self.bk + self.ik1) as u32 - 2
    }
}

pub fn checked_pow(p: u32, e: u32) -> Option<u64> {
    (p as u64).checked_pow(e)
}

/// All vectors of F_p^dim in lexicographic order (first coordinate most significant).
pub(crate) fn lex_vectors(p: u32, dim: usize) -> impl Iterator<Item = Vec<u8>> {
    let total = (p as u64).pow(dim as u32);
    (0..total).map(move |mut idx| {
        let mut v = vec![0u8; dim];
        for slot in v.iter_mut().rev() {
            *slot = (idx % p as u64) as u8;
            idx /= p as u64;
        }
        v
    })
}

/// One canonical [`RegParams`] per regular elementary abelian subgroup of Γ(I_k).
///
/// Outer loop: c over I_{k+1} in coordinate order. For each c a particular pair
/// (g_0, h_0) with diff_y·g_0 = diff_x·h_0 = c is solved for, then g and h sweep
/// their kernel cosets taken modulo f_0, so no two sweeps meet after canonicalization.
pub fn enumerate_reg(ctx: Context, k: u32, cap: u64) -> Result<Vec<RegParams>> {
    check_k_range(ctx, k)?;
    let p = ctx.p();
    let dims = Dims::compute(ctx, k);
    let exp = dims.reg_count_exp();
    match checked_pow(p, exp) {
        Some(n) if n <= cap => {}
        _ => return Err(Error::EnumerationCapExceeded { exp, cap }),
    }

    let ik = IdealBasis::ideal_ik(ctx, k);
    let next = IdealBasis::ideal_ik(ctx, k + 1);
    let (dx, dy) = (diff_x(ctx), diff_y(ctx));
    let offsets = |kernel: IdealBasis| -> IdealBasis {
        let reps: Vec<RingElem> = kernel.rows().iter().map(canonical_rep).collect();
        IdealBasis::span(ctx, &reps)
    };
    let g_offsets = offsets(ik.mult_kernel(&dy));
    let h_offsets = offsets(ik.mult_kernel(&dx));
    let g_sweep: Vec<RingElem> = lex_vectors(p, g_offsets.dim())
        .map(|c| g_offsets.from_coordinates(&c))
        .collect();
    let h_sweep: Vec<RingElem> = lex_vectors(p, h_offsets.dim())
        .map(|c| h_offsets.from_coordinates(&c))
        .collect();

    let mut out = Vec::with_capacity(checked_pow(p, exp).unwrap_or(0) as usize);
    for coords in lex_vectors(p, next.dim()) {
        let c = next.from_coordinates(&coords);
        let g0 = ik
            .solve_mult(&dy, &c)
            .ok_or_else(|| Error::Internal(format!("no g with diff_y·g = {c}")))?;
        let h0 = ik
            .solve_mult(&dx, &c)
            .ok_or_else(|| Error::Internal(format!("no h with diff_x·h = {c}")))?;
        let (g0, h0) = (canonical_rep(&g0), canonical_rep(&h0));
        for kg in &g_sweep {
            let g = &g0 + kg;
            for kh in &h_sweep {
                out.push(RegParams {
                    g: g.clone(),
                    h: &h0 + kh,
                    canonical: true,
                });
            }
        }
    }

    let mut order: Vec<usize> = (0..out.len()).collect();
    order.sort_unstable_by(|&i, &j| out[i].cmp(&out[j]));
    if let Some(w) = order.windows(2).find(|w| out[w[0]] == out[w[1]]) {
        return Err(Error::Internal(format!(
            "duplicate canonical parameters {}",
            out[w[0]].serialize()
        )));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool) -> Check {
        Check {
            name: name.into(),
            status: Status::from_bool(ok),
        }
    }

    pub fn skipped(name: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            status: Status::Skipped,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimsJson {
    #[serde(rename = "I_k")]
    pub ik: usize,
    #[serde(rename = "I_k1")]
    pub ik1: usize,
    #[serde(rename = "A_k")]
    pub ak: usize,
    #[serde(rename = "B_k")]
    pub bk: usize,
}

/// Bound verdicts; `None` where the bound was not evaluated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub eq090616a_lower: Option<bool>,
    pub eq090616a_upper: Option<bool>,
    pub lemma070616a3: Option<bool>,
    pub theorem251015b: Option<bool>,
}

/// Everything computed for one (p, k). Serializes to the per-configuration report document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub p: u32,
    pub k: u32,
    pub dims: DimsJson,
    pub gamma_order_exp: u32,
    #[serde(rename = "reg_count_exp")]
    pub reg_count_expected_exp: u32,
    pub reg_count_enumerated: Option<u64>,
    pub d: u32,
    #[serde(rename = "b_H")]
    pub b_h: Option<u64>,
    pub orbit_sizes: Option<BTreeMap<u64, u64>>,
    pub m_k: Option<u64>,
    #[serde(rename = "M_k")]
    pub max_orbit: Option<u64>,
    pub bounds: Bounds,
    pub checks: Vec<Check>,
    pub skipped: Vec<String>,
}

impl CensusReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn push_check(&mut self, name: &str, ok: bool) {
        self.checks.push(Check::new(name, ok));
    }

    pub fn skip(&mut self, name: &str) {
        self.checks.push(Check::skipped(name));
        self.skipped.push(name.to_string());
    }
}

fn binom2(n: i64) -> usize {
    if n < 2 {
        0
    } else {
        (n * (n - 1) / 2) as usize
    }
}

/// Dimensions, formula checks and (under the cap) the enumeration count for one (p, k).
/// A cap overflow yields a report with the enumeration marked skipped, not an error.
pub fn census_counts(ctx: Context, k: u32, enum_cap: u64) -> Result<CensusReport> {
    census_with_params(ctx, k, enum_cap).map(|(report, _)| report)
}

/// [`census_counts`] that also hands back the enumerated parameters.
pub fn census_with_params(
    ctx: Context,
    k: u32,
    enum_cap: u64,
) -> Result<(CensusReport, Option<Vec<RegParams>>)> {
    check_k_range(ctx, k)?;
    let p = ctx.p();
    let ik = IdealBasis::ideal_ik(ctx, k);
    let next = IdealBasis::ideal_ik(ctx, k + 1);
    let (a, b) = (RingElem::a(ctx), RingElem::b(ctx));
    let dims = Dims::compute(ctx, k);
    let exp = dims.reg_count_exp();
    let d_from_dims = (dims.ak + dims.bk + dims.ik1) as i64 - dims.ik as i64;
    let d = 2 * p - k - 1;

    let mut report = CensusReport {
        p,
        k,
        dims: DimsJson {
            ik: dims.ik,
            ik1: dims.ik1,
            ak: dims.ak,
            bk: dims.bk,
        },
        gamma_order_exp: 2 + dims.ik as u32,
        reg_count_expected_exp: exp,
        reg_count_enumerated: None,
        d,
        b_h: None,
        orbit_sizes: None,
        m_k: None,
        max_orbit: None,
        bounds: Bounds::default(),
        checks: Vec::new(),
        skipped: Vec::new(),
    };

    report.push_check("dim_I_k_binomial", dims.ik == binom2((2 * p - k) as i64));
    report.push_check("image_a_is_I_k1", ik.mult_image(&a) == next);
    report.push_check("image_b_is_I_k1", ik.mult_image(&b) == next);
    report.push_check(
        "kernel_dims",
        dims.ak == d as usize && dims.bk == d as usize,
    );
    report.push_check("rank_nullity", dims.ik == dims.ak + dims.ik1);
    report.push_check("d_from_dims", d_from_dims == d as i64);
    report.push_check("I_k_is_ideal", ik.is_closed_under_xy());

    let params = match enumerate_reg(ctx, k, enum_cap) {
        Ok(params) => {
            let n = params.len() as u64;
            report.reg_count_enumerated = Some(n);
            report.push_check("reg_count_formula", Some(n) == checked_pow(p, exp));
            let in_ik = params
                .iter()
                .all(|rp| rp.canonical && ik.contains(&rp.g) && ik.contains(&rp.h));
            report.push_check("params_canonical_in_I_k", in_ik);
            let cs: HashSet<RingElem> = params.iter().map(compat_element).collect();
            let covers = cs.iter().all(|c| next.contains(c))
                && Some(cs.len() as u64) == checked_pow(p, next.dim() as u32);
            report.push_check("compat_element_covers_I_k1", covers);
            Some(params)
        }
        Err(e) if e.is_cap() => {
            report.skip("enumeration");
            None
        }
        Err(Error::Internal(_)) => {
            report.push_check("canonical_params_unique", false);
            None
        }
        Err(e) => return Err(e),
    };
    Ok((report, params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permrep::{group_closure, is_regular_elementary_abelian};

    fn ctx(p: u32) -> Context {
        Context::new(p).unwrap()
    }

    #[test]
    fn diff_elements_shift_coefficients() {
        let c = ctx(5);
        let f = RingElem::from_fn(c, |i, j| (i * i + 3 * j) as i64);
        let dxf = &diff_x(c) * &f;
        let dyf = &diff_y(c) * &f;
        for i in 0..5 {
            for j in 0..5 {
                let fx = c.sub(f.coeff(i + 1, j).value(), f.coeff(i, j).value());
                let fy = c.sub(f.coeff(i, j + 1).value(), f.coeff(i, j).value());
                assert_eq!(dxf.coeff(i, j).value(), fx);
                assert_eq!(dyf.coeff(i, j).value(), fy);
            }
        }
        // unit multiples of a and b
        assert_eq!(diff_x(c), -&(&RingElem::a(c) * &RingElem::monomial(c, 4, 0, 1)));
        assert_eq!(diff_y(c), -&(&RingElem::b(c) * &RingElem::monomial(c, 0, 4, 1)));
    }

    #[test]
    fn canonicalize_examples() {
        let c = ctx(3);
        let z = RingElem::zero(c);
        let rp = canonicalize(&z, &z).unwrap();
        assert!(rp.is_canonical());
        assert!(rp.g().is_zero() && rp.h().is_zero());
        let f0 = RingElem::f0(c);
        let rp = canonicalize(&f0, &f0).unwrap();
        assert!(rp.g().is_zero() && rp.h().is_zero());

        let params = enumerate_reg(c, 3, DEFAULT_ENUM_CAP).unwrap();
        let rp = &params[13];
        let moved = canonicalize(&(rp.g() + &f0.scale(2)), &(rp.h() + &f0)).unwrap();
        assert_eq!(&moved, rp);
        assert_eq!(canonicalize(&RingElem::a(c), &z), Err(Error::Incompatible));
    }

    #[test]
    fn serialization_roundtrip() {
        let c = ctx(3);
        for rp in enumerate_reg(c, 3, DEFAULT_ENUM_CAP).unwrap() {
            let s = rp.serialize();
            assert_eq!(s.len(), 19);
            assert_eq!(RegParams::parse(c, &s).unwrap(), rp);
        }
        assert!(RegParams::parse(c, "000000000").is_err());
    }

    #[test]
    fn enumerate_examples() {
        let c3 = ctx(3);
        let k4 = enumerate_reg(c3, 4, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(k4.len(), 1);
        assert!(k4[0].g().is_zero() && k4[0].h().is_zero());
        assert_eq!(enumerate_reg(c3, 3, DEFAULT_ENUM_CAP).unwrap().len(), 27);
        assert_eq!(enumerate_reg(ctx(5), 7, DEFAULT_ENUM_CAP).unwrap().len(), 125);
        assert_eq!(enumerate_reg(ctx(2), 2, DEFAULT_ENUM_CAP).unwrap().len(), 1);
        assert!(matches!(
            enumerate_reg(ctx(5), 5, DEFAULT_ENUM_CAP),
            Err(Error::EnumerationCapExceeded { exp: 12, .. })
        ));
        assert!(matches!(enumerate_reg(c3, 2, DEFAULT_ENUM_CAP), Err(Error::KOutOfRange { .. })));
        assert!(matches!(enumerate_reg(c3, 5, DEFAULT_ENUM_CAP), Err(Error::KOutOfRange { .. })));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let c = ctx(5);
        assert_eq!(
            enumerate_reg(c, 7, DEFAULT_ENUM_CAP).unwrap(),
            enumerate_reg(c, 7, DEFAULT_ENUM_CAP).unwrap()
        );
    }

    #[test]
    fn params_to_group_examples() {
        let c = ctx(3);
        let zero = RegParams::new(RingElem::zero(c), RingElem::zero(c)).unwrap();
        assert_eq!(params_to_group(&zero).gens(), crate::permrep::g0(c).gens());
        let params = enumerate_reg(c, 3, DEFAULT_ENUM_CAP).unwrap();
        let mut sets = HashSet::new();
        for rp in &params {
            let gs = params_to_group(rp);
            assert!(is_regular_elementary_abelian(&gs, 3), "{}", rp.serialize());
            sets.insert(group_closure(&gs, 100).unwrap());
        }
        assert_eq!(sets.len(), 27);
    }

    #[test]
    fn census_examples() {
        let r = census_counts(ctx(3), 3, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!((r.dims.ik, r.dims.ak, r.dims.bk, r.dims.ik1), (3, 2, 2, 1));
        assert_eq!(r.gamma_order_exp, 5);
        assert_eq!(r.reg_count_enumerated, Some(27));
        assert_eq!(r.d, 2);
        assert!(r.all_ok(), "{:?}", r.checks);

        let r = census_counts(ctx(5), 5, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(r.dims.ik, 10);
        assert_eq!(r.reg_count_expected_exp, 12);
        assert_eq!(r.reg_count_enumerated, None);
        assert_eq!(r.d, 4);
        assert_eq!(r.skipped, vec!["enumeration".to_string()]);
        assert!(r.all_ok());

        let r = census_counts(ctx(2), 2, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(r.dims.ik, 1);
        assert_eq!(r.reg_count_enumerated, Some(1));
        assert!(r.all_ok());
    }

    /// The literal relation a·h = b·g is not the commutation condition: at p = 5, k = 6
    /// some pairs satisfying it give non-commuting generators.
    #[test]
    fn literal_ah_eq_bg_is_not_sufficient_at_p5_k6() {
        let c = ctx(5);
        let (a, b) = (RingElem::a(c), RingElem::b(c));
        let ik = IdealBasis::ideal_ik(c, 6);
        let mut bad = 0;
        for coords in lex_vectors(5, ik.dim()).step_by(97) {
            let g = ik.from_coordinates(&coords);
            let target = &b * &g;
            let Some(h) = ik.solve_mult(&a, &target) else { continue };
            let tg = t_perm(&g, Axis::X);
            let th = t_perm(&h, Axis::Y);
            assert_eq!(tg.commutes_with(&th), is_compatible(&g, &h));
            if !tg.commutes_with(&th) {
                bad += 1;
            }
        }
        assert!(bad > 0);
    }
}
