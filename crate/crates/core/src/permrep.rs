//! Permutations of V = {α x^i y^j} and the groups Δ(I), Γ(I), G_{g,h} acting on it.
//!
//! Composition convention: `u.then(v)` (equivalently [`compose`]) applies `u` first,
//! then `v`, matching exponent-style right actions v^{uv} = (v^u)^v.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fpring::{Context, IdealBasis, RingElem};

/// Default element cap for [`group_closure`].
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// The point α x^i y^j of V.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub i: usize,
    pub j: usize,
    pub alpha: u8,
}

impl Point {
    /// Flat index α + p·j + p²·i; block V_{i,j} is the contiguous range starting at p·(p·i + j).
    #[inline]
    pub fn index(self, ctx: Context) -> usize {
        let n = ctx.n();
        self.alpha as usize + n * self.j + n * n * self.i
    }

    #[inline]
    pub fn from_index(ctx: Context, idx: usize) -> Point {
        let n = ctx.n();
        Point {
            i: idx / (n * n),
            j: (idx / n) % n,
            alpha: (idx % n) as u8,
        }
    }

    /// Index of the block V_{i,j} containing this point, i·p + j.
    #[inline]
    pub fn block(self, ctx: Context) -> usize {
        self.i * ctx.n() + self.j
    }
}

/// A permutation as an image table over flat point indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            let v = v as usize;
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPerm(format!("image {v} out of range or repeated")));
            }
        }
        Ok(Perm { images })
    }

    fn from_fn(ctx: Context, f: impl Fn(Point) -> Point) -> Perm {
        let images = (0..ctx.degree())
            .map(|idx| f(Point::from_index(ctx, idx)).index(ctx) as u32)
            .collect();
        Perm { images }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Perm {
            images: self.images.iter().map(|&v| other.images[v as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn pow(&self, e: u64) -> Perm {
        let mut out = Perm::identity(self.degree());
        for _ in 0..e {
            out = out.then(self);
        }
        out
    }

    /// `other⁻¹ · self · other`, i.e. self^other.
    pub fn conjugate_by(&self, other: &Perm) -> Perm {
        other.inverse().then(self).then(other)
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.images
            .iter()
            .zip(&other.images)
            .all(|(&u, &v)| other.images[u as usize] == self.images[v as usize])
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut lens = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.apply(cur);
                len += 1;
            }
            lens.push(len);
        }
        lens
    }

    /// lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycle_lengths().into_iter().fold(1u64, |acc, l| lcm(acc, l as u64))
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({self})")
    }
}

/// Degree followed by the image table, whitespace separated.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.degree())?;
        for v in &self.images {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

impl FromStr for Perm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Perm> {
        let mut it = s.split_whitespace().map(|t| {
            t.parse::<u32>()
                .map_err(|e| Error::InvalidPerm(format!("{t:?}: {e}")))
        });
        let degree = it
            .next()
            .ok_or_else(|| Error::InvalidPerm("empty input".into()))?? as usize;
        let images = it.collect::<Result<Vec<u32>>>()?;
        if images.len() != degree {
            return Err(Error::InvalidPerm(format!(
                "declared degree {degree}, got {} images",
                images.len()
            )));
        }
        Perm::from_images(images)
    }
}

pub fn compose(u: &Perm, v: &Perm) -> Result<Perm> {
    if u.degree() != v.degree() {
        return Err(Error::DegreeMismatch {
            left: u.degree(),
            right: v.degree(),
        });
    }
    Ok(u.then(v))
}

pub fn inverse(u: &Perm) -> Perm {
    u.inverse()
}

pub fn order(u: &Perm) -> u64 {
    u.order()
}

/// σ_f: α x^i y^j ↦ (α + f_{i,j}) x^i y^j.
pub fn sigma(f: &RingElem) -> Perm {
    let ctx = f.ctx();
    Perm::from_fn(ctx, |pt| Point {
        alpha: ctx.add(pt.alpha, f.coeff(pt.i, pt.j).value()),
        ..pt
    })
}

/// τ_x: α x^i y^j ↦ α x^{i+1} y^j, and τ_y likewise.
pub fn tau(ctx: Context, axis: Axis) -> Perm {
    let n = ctx.n();
    Perm::from_fn(ctx, |pt| match axis {
        Axis::X => Point {
            i: (pt.i + 1) % n,
            ..pt
        },
        Axis::Y => Point {
            j: (pt.j + 1) % n,
            ..pt
        },
    })
}

/// s = σ_{f_0}, the central element shifting every α by one.
pub fn s_perm(ctx: Context) -> Perm {
    sigma(&RingElem::f0(ctx))
}

/// t_{g,x} = σ_g τ_x (σ_g applied first), resp. t_{g,y}.
pub fn t_perm(g: &RingElem, axis: Axis) -> Perm {
    sigma(g).then(&tau(g.ctx(), axis))
}

/// Column sums Σ_i g_{i,j} (for the x axis) or row sums Σ_j g_{i,j} (for y).
/// t_{g,axis} has order p exactly when all of them vanish.
pub fn shift_sums(g: &RingElem, axis: Axis) -> Vec<u8> {
    let ctx = g.ctx();
    let n = ctx.n();
    (0..n)
        .map(|other| {
            (0..n).fold(0u8, |acc, t| {
                let c = match axis {
                    Axis::X => g.coeff(t, other),
                    Axis::Y => g.coeff(other, t),
                };
                ctx.add(acc, c.value())
            })
        })
        .collect()
}

/// A finite generating set; all generators share one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSet {
    gens: Vec<Perm>,
    label: String,
}

impl GenSet {
    pub fn new(gens: Vec<Perm>, label: impl Into<String>) -> Result<GenSet> {
        let first = gens.first().ok_or(Error::EmptyGenSet)?;
        let degree = first.degree();
        if let Some(bad) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: bad.degree(),
            });
        }
        Ok(GenSet {
            gens,
            label: label.into(),
        })
    }

    pub fn gens(&self) -> &[Perm] {
        &self.gens
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> usize {
        self.gens[0].degree()
    }
}

/// G_0 = ⟨s, τ_x, τ_y⟩.
pub fn g0(ctx: Context) -> GenSet {
    GenSet::new(
        vec![s_perm(ctx), tau(ctx, Axis::X), tau(ctx, Axis::Y)],
        format!("G0(p={})", ctx.p()),
    )
    .expect("nonempty")
}

/// Δ(I) = {σ_f : f ∈ I}, generated by σ of the basis rows (identity for I = 0).
pub fn delta(ideal: &IdealBasis) -> GenSet {
    let ctx = ideal.ctx();
    let mut gens: Vec<Perm> = ideal.rows().iter().map(sigma).collect();
    if gens.is_empty() {
        gens.push(Perm::identity(ctx.degree()));
    }
    GenSet::new(gens, format!("Delta(p={}, dim={})", ctx.p(), ideal.dim())).expect("nonempty")
}

/// Γ(I) = ⟨Δ(I), τ_x, τ_y⟩.
pub fn gamma(ideal: &IdealBasis) -> GenSet {
    let ctx = ideal.ctx();
    let mut gens: Vec<Perm> = ideal.rows().iter().map(sigma).collect();
    gens.push(tau(ctx, Axis::X));
    gens.push(tau(ctx, Axis::Y));
    GenSet::new(gens, format!("Gamma(p={}, dim={})", ctx.p(), ideal.dim())).expect("nonempty")
}

/// The blocks V_{i,j}, indexed i·p + j.
pub fn block_partition(ctx: Context) -> Vec<Vec<usize>> {
    let n = ctx.n();
    (0..n * n)
        .map(|b| (b * n..(b + 1) * n).collect())
        .collect()
}

/// Cells {α x^i y^j : i, j} for fixed α.
pub fn alpha_partition(ctx: Context) -> Vec<Vec<usize>> {
    let n = ctx.n();
    (0..n)
        .map(|alpha| (0..n * n).map(|b| b * n + alpha).collect())
        .collect()
}

/// Orbits of ⟨G⟩, each sorted, listed by least point.
pub fn orbits(g: &GenSet) -> Vec<Vec<usize>> {
    let n = g.degree();
    let mut label = vec![usize::MAX; n];
    let mut cells = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = cells.len();
        let mut cell = vec![start];
        label[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for gen in g.gens() {
                let w = gen.apply(v);
                if label[w] == usize::MAX {
                    label[w] = id;
                    cell.push(w);
                    queue.push_back(w);
                }
            }
        }
        cell.sort_unstable();
        cells.push(cell);
    }
    cells
}

pub fn is_transitive(g: &GenSet) -> bool {
    orbits(g).len() == 1
}

/// Cell index of every point; errors unless the cells are nonempty, of equal
/// size, and partition [0, degree).
fn cell_lookup(degree: usize, partition: &[Vec<usize>]) -> Result<Vec<usize>> {
    let size = partition
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::MalformedPartition("no cells".into()))?;
    let mut lookup = vec![usize::MAX; degree];
    for (c, cell) in partition.iter().enumerate() {
        if cell.len() != size || size == 0 {
            return Err(Error::MalformedPartition("cells of unequal size".into()));
        }
        for &v in cell {
            if v >= degree || lookup[v] != usize::MAX {
                return Err(Error::MalformedPartition(format!("point {v} out of range or repeated")));
            }
            lookup[v] = c;
        }
    }
    if lookup.contains(&usize::MAX) {
        return Err(Error::MalformedPartition("cells do not cover every point".into()));
    }
    Ok(lookup)
}

/// True iff every generator maps each cell wholly onto a cell.
pub fn is_block_system(g: &GenSet, partition: &[Vec<usize>]) -> Result<bool> {
    let lookup = cell_lookup(g.degree(), partition)?;
    Ok(g.gens().iter().all(|gen| {
        partition.iter().all(|cell| {
            let target = lookup[gen.apply(cell[0])];
            cell.iter().all(|&v| lookup[gen.apply(v)] == target)
        })
    }))
}

/// Permutations of cell indices induced by the generators.
pub fn induced_action(g: &GenSet, partition: &[Vec<usize>]) -> Result<GenSet> {
    if !is_block_system(g, partition)? {
        return Err(Error::MalformedPartition("not preserved by the group".into()));
    }
    let lookup = cell_lookup(g.degree(), partition)?;
    let gens = g
        .gens()
        .iter()
        .map(|gen| {
            let images = partition
                .iter()
                .map(|cell| lookup[gen.apply(cell[0])] as u32)
                .collect();
            Perm::from_images(images)
        })
        .collect::<Result<Vec<_>>>()?;
    GenSet::new(gens, format!("{} on {} cells", g.label(), partition.len()))
}

/// Every element of ⟨G⟩, by breadth-first multiplication by generators.
pub fn group_closure(g: &GenSet, cap: usize) -> Result<BTreeSet<Perm>> {
    let identity = Perm::identity(g.degree());
    let mut seen: HashSet<Perm> = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(e) = queue.pop_front() {
        for gen in g.gens() {
            let next = e.then(gen);
            if !seen.contains(&next) {
                if seen.len() >= cap {
                    return Err(Error::ClosureCapExceeded { cap });
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// True iff ⟨G⟩ is transitive of order equal to its degree (so regular), abelian,
/// and of exponent p.
pub fn is_regular_elementary_abelian(g: &GenSet, p: u32) -> bool {
    let gens = g.gens();
    let commute = gens
        .iter()
        .enumerate()
        .all(|(i, u)| gens[i + 1..].iter().all(|v| u.commutes_with(v)));
    if !commute || !is_transitive(g) {
        return false;
    }
    match group_closure(g, g.degree()) {
        Ok(elems) => elems.len() == g.degree() && elems.iter().all(|e| (p as u64).is_multiple_of(e.order())),
        Err(_) => false,
    }
}

/// True iff the permutation maps every block V_{i,j} to itself.
pub fn fixes_blocks(ctx: Context, perm: &Perm) -> bool {
    (0..perm.degree()).all(|v| v / ctx.n() == perm.apply(v) / ctx.n())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u32) -> Context {
        Context::new(p).unwrap()
    }

    fn random_elem(c: Context, rng: &mut impl Rng) -> RingElem {
        RingElem::from_fn(c, |_, _| rng.gen_range(0..c.p() as i64))
    }

    #[test]
    fn point_encoding_is_a_bijection() {
        let c = ctx(5);
        for idx in 0..c.degree() {
            let pt = Point::from_index(c, idx);
            assert_eq!(pt.index(c), idx);
            assert_eq!(idx / 5, pt.block(c));
        }
        let pt = Point { i: 1, j: 2, alpha: 3 };
        assert_eq!(pt.index(c), 3 + 5 * 2 + 25);
    }

    #[test]
    fn sigma_examples() {
        let c = ctx(3);
        assert!(sigma(&RingElem::zero(c)).is_identity());
        let s = sigma(&RingElem::f0(c));
        assert_eq!(s, s_perm(c));
        assert_eq!(s.order(), 3);
        let sg = GenSet::new(vec![s], "s").unwrap();
        assert_eq!(orbits(&sg), block_partition(c));

        let sx = sigma(&RingElem::x(c));
        for idx in 0..c.degree() {
            let pt = Point::from_index(c, idx);
            let img = Point::from_index(c, sx.apply(idx));
            if (pt.i, pt.j) == (1, 0) {
                assert_eq!(img, Point { alpha: (pt.alpha + 1) % 3, ..pt });
            } else {
                assert_eq!(img, pt);
            }
        }
    }

    #[test]
    fn tau_examples() {
        let c = ctx(3);
        let tx = tau(c, Axis::X);
        let ty = tau(c, Axis::Y);
        assert!(tx.pow(3).is_identity());
        assert_eq!(tx.order(), 3);
        assert!(tx.commutes_with(&ty));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let f = random_elem(c, &mut rng);
            assert_eq!(tx.inverse().then(&sigma(&f)).then(&tx), sigma(&f.shift(1, 0)));
            assert_eq!(sigma(&f).conjugate_by(&ty), sigma(&f.shift(0, 1)));
        }
    }

    #[test]
    fn t_perm_examples() {
        let c = ctx(3);
        assert_eq!(t_perm(&RingElem::zero(c), Axis::X), tau(c, Axis::X));
        let c2 = ctx(2);
        let t = t_perm(&RingElem::one(c2), Axis::X);
        assert_eq!(t.order(), 4);
        assert_eq!(order(&t), 4);
        assert_eq!(t_perm(&RingElem::a(c), Axis::X).order(), 3);
        // the defining formula (α + g_{i,j}) x^{i+1} y^j
        let g = RingElem::from_fn(c, |i, j| (i + 2 * j) as i64);
        let t = t_perm(&g, Axis::X);
        for idx in 0..c.degree() {
            let pt = Point::from_index(c, idx);
            let expect = Point {
                i: (pt.i + 1) % 3,
                j: pt.j,
                alpha: c.add(pt.alpha, g.coeff(pt.i, pt.j).value()),
            };
            assert_eq!(t.apply(idx), expect.index(c));
        }
    }

    #[test]
    fn group_operations() {
        let c = ctx(3);
        let u = t_perm(&RingElem::from_fn(c, |i, j| (i * j + 1) as i64), Axis::Y);
        assert!(compose(&u, &inverse(&u)).unwrap().is_identity());
        assert!(compose(&u, &Perm::identity(8)).is_err());
        assert_eq!(order(&s_perm(c)), 3);
    }

    #[test]
    fn perm_text_roundtrip() {
        let u = tau(ctx(2), Axis::X);
        let text = u.to_string();
        assert_eq!(text, "8 4 5 6 7 0 1 2 3");
        assert_eq!(text.parse::<Perm>().unwrap(), u);
        assert!("3 0 0 1".parse::<Perm>().is_err());
        assert!("3 0 1".parse::<Perm>().is_err());
        assert!("".parse::<Perm>().is_err());
    }

    #[test]
    fn orbit_examples() {
        let c = ctx(3);
        let taus = GenSet::new(vec![tau(c, Axis::X), tau(c, Axis::Y)], "taus").unwrap();
        let orbs = orbits(&taus);
        assert_eq!(orbs.len(), 3);
        assert!(orbs.iter().all(|o| o.len() == 9));
        assert_eq!(orbs, alpha_partition(c));
        assert_eq!(orbits(&g0(c)).len(), 1);
    }

    #[test]
    fn block_system_examples() {
        let c = ctx(3);
        let gamma3 = gamma(&IdealBasis::ideal_ik(c, 3));
        let blocks = block_partition(c);
        assert!(is_block_system(&gamma3, &blocks).unwrap());
        let induced = induced_action(&gamma3, &blocks).unwrap();
        assert!(is_transitive(&induced));
        let elems = group_closure(&induced, 100).unwrap();
        assert_eq!(elems.len(), 9);
        assert!(elems.iter().all(|e| e.is_identity() || e.order() == 3));

        let sg = GenSet::new(vec![s_perm(c)], "s").unwrap();
        assert!(is_block_system(&sg, &blocks).unwrap());
        assert!(induced_action(&sg, &blocks).unwrap().gens()[0].is_identity());

        let tx = GenSet::new(vec![tau(c, Axis::X)], "tx").unwrap();
        let alpha = alpha_partition(c);
        assert!(is_block_system(&tx, &alpha).unwrap());
        assert!(induced_action(&tx, &alpha).unwrap().gens()[0].is_identity());

        // s permutes the α-cells cyclically; σ_x moves a single block and breaks them
        assert!(is_block_system(&sg, &alpha).unwrap());
        assert_eq!(induced_action(&sg, &alpha).unwrap().gens()[0].order(), 3);
        let sx = GenSet::new(vec![sigma(&RingElem::x(c))], "sx").unwrap();
        assert!(!is_block_system(&sx, &alpha).unwrap());
        assert!(induced_action(&sx, &alpha).is_err());
        assert!(matches!(
            is_block_system(&sg, &[vec![0, 1], vec![2]]),
            Err(Error::MalformedPartition(_))
        ));
    }

    #[test]
    fn closure_examples() {
        let c = ctx(3);
        assert_eq!(group_closure(&g0(c), 1000).unwrap().len(), 27);
        assert_eq!(group_closure(&gamma(&IdealBasis::ideal_ik(c, 3)), 1000).unwrap().len(), 243);
        assert_eq!(group_closure(&gamma(&IdealBasis::ideal_ik(c, 4)), 1000).unwrap().len(), 27);
        assert_eq!(
            group_closure(&gamma(&IdealBasis::ideal_ik(c, 3)), 100),
            Err(Error::ClosureCapExceeded { cap: 100 })
        );
    }

    #[test]
    fn regularity_examples() {
        let c = ctx(3);
        assert!(is_regular_elementary_abelian(&g0(c), 3));
        let a = RingElem::a(c);
        let b = RingElem::b(c);
        let g = a.clone();
        let h = b.shift(0, 1);
        assert_ne!(&a * &h, &b * &g);
        let gs = GenSet::new(
            vec![s_perm(c), t_perm(&g, Axis::X), t_perm(&h, Axis::Y)],
            "bad",
        )
        .unwrap();
        assert!(!gs.gens()[1].commutes_with(&gs.gens()[2]));
        assert!(!is_regular_elementary_abelian(&gs, 3));
        let sg = GenSet::new(vec![s_perm(c)], "s").unwrap();
        assert!(!is_regular_elementary_abelian(&sg, 3));
    }

    #[test]
    fn s_is_central_in_the_maximal_group() {
        for p in [2, 3, 5] {
            let c = ctx(p);
            let s = s_perm(c);
            assert!(s.commutes_with(&tau(c, Axis::X)));
            assert!(s.commutes_with(&tau(c, Axis::Y)));
            let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
            let f = random_elem(c, &mut rng);
            assert!(s.commutes_with(&sigma(&f)));
        }
    }

    #[test]
    fn shift_sums_decide_the_order() {
        let c = ctx(2);
        for bits in 0..16u32 {
            let g = RingElem::from_fn(c, |i, j| ((bits >> (2 * i + j)) & 1) as i64);
            for axis in [Axis::X, Axis::Y] {
                let ord = t_perm(&g, axis).order();
                let zero_sums = shift_sums(&g, axis).iter().all(|&s| s == 0);
                assert_eq!(ord == 2, zero_sums);
                assert!(ord == 2 || ord == 4);
            }
        }
    }
}
