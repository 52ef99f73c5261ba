//! Finite abelian groups in invariant-factor form.
//!
//! A group is `Z_{n_1} ⊕ … ⊕ Z_{n_k}` with `n_1 | n_2 | … | n_k`, every
//! `n_i ≥ 2`. Elements are coordinate vectors; the element table is
//! enumerated lexicographically on coordinates, so element indices, subset
//! representations and search witnesses are reproducible.
//!
//! Subgroups, cosets and subsets are explicit sorted element lists. All
//! target groups are small (a few hundred elements at most), which keeps
//! coset, quotient and preimage code direct.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::factorize;
use crate::error::{Error, Result};

/// An element of a [`FabGroup`], one residue per invariant factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<u64>);

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl From<Vec<u64>> for GroupElement {
    fn from(v: Vec<u64>) -> Self {
        GroupElement(v)
    }
}

#[derive(Serialize, Deserialize)]
struct GroupSpec {
    invariant_factors: Vec<u64>,
}

/// A finite abelian group presented by its invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GroupSpec", into = "GroupSpec")]
pub struct FabGroup {
    factors: Vec<u64>,
    order: u64,
}

impl TryFrom<GroupSpec> for FabGroup {
    type Error = Error;
    fn try_from(spec: GroupSpec) -> Result<Self> {
        FabGroup::new(&spec.invariant_factors)
    }
}

impl From<FabGroup> for GroupSpec {
    fn from(g: FabGroup) -> Self {
        GroupSpec {
            invariant_factors: g.factors,
        }
    }
}

impl fmt::Display for FabGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Rewrites an arbitrary list of cyclic orders into invariant-factor form
/// through the elementary divisors.
fn normalize_factors(raw: &[u64]) -> Vec<u64> {
    let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &n in raw {
        for (p, e) in factorize(n) {
            by_prime.entry(p).or_default().push(p.pow(e));
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for powers in by_prime.values_mut() {
        powers.sort_unstable_by(|a, b| b.cmp(a));
        for (slot, q) in powers.iter().enumerate() {
            // largest invariant factor sits at the end
            out[len - 1 - slot] *= q;
        }
    }
    out
}

impl FabGroup {
    /// Builds the group `⊕ Z_{n_i}`. Lists that are not already in
    /// invariant-factor form are normalized through elementary divisors, so
    /// `[2, 3]` becomes `[6]`.
    pub fn new(factors: &[u64]) -> Result<Self> {
        if let Some(bad) = factors.iter().find(|&&n| n <= 1) {
            return Err(Error::InvalidGroup(format!(
                "cyclic factor {bad} is not at least 2 (input {factors:?})"
            )));
        }
        let factors = if factors.windows(2).all(|w| w[1] % w[0] == 0) {
            factors.to_vec()
        } else {
            normalize_factors(factors)
        };
        let mut order: u64 = 1;
        for &n in &factors {
            order = order
                .checked_mul(n)
                .ok_or_else(|| Error::InvalidGroup(format!("order of {factors:?} overflows")))?;
        }
        Ok(FabGroup { factors, order })
    }

    pub fn trivial() -> Self {
        FabGroup {
            factors: vec![],
            order: 1,
        }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 1 {
            Ok(Self::trivial())
        } else {
            Self::new(&[n])
        }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.factors.len()])
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        e.0.len() == self.factors.len() && e.0.iter().zip(&self.factors).all(|(c, n)| c < n)
    }

    pub fn check(&self, e: &GroupElement) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::NotInGroup {
                element: e.to_string(),
                factors: self.factors.clone(),
            })
        }
    }

    /// Builds an element from arbitrary integers, reducing each coordinate.
    pub fn element_from(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.factors.len() {
            return Err(Error::NotInGroup {
                element: format!("{coords:?}"),
                factors: self.factors.clone(),
            });
        }
        Ok(GroupElement(
            coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        ))
    }

    /// The `i`-th standard generator.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut v = vec![0; self.factors.len()];
        v[i] = 1;
        GroupElement(v)
    }

    /// Position of `e` in the lexicographic element table.
    pub fn index_of(&self, e: &GroupElement) -> usize {
        let mut idx: u64 = 0;
        for (c, n) in e.0.iter().zip(&self.factors) {
            idx = idx * n + c;
        }
        idx as usize
    }

    pub fn element(&self, mut idx: usize) -> GroupElement {
        let mut v = vec![0u64; self.factors.len()];
        for (slot, n) in v.iter_mut().zip(&self.factors).rev() {
            *slot = idx as u64 % n;
            idx /= *n as usize;
        }
        GroupElement(v)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order as usize).map(move |i| self.element(i))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((x, y), n)| (x + y) % n)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.factors)
                .map(|(x, n)| (n - x) % n)
                .collect(),
        )
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, k: i64, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, &n)| {
                    let k = k.rem_euclid(n as i64) as u128;
                    ((k * x as u128) % n as u128) as u64
                })
                .collect(),
        )
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a GroupElement>>(&self, items: I) -> GroupElement {
        items
            .into_iter()
            .fold(self.zero(), |acc, e| self.add(&acc, e))
    }

    pub fn element_order(&self, a: &GroupElement) -> u64 {
        a.0.iter()
            .zip(&self.factors)
            .fold(1u64, |acc, (&x, &n)| acc.lcm(&(n / x.gcd(&n))))
    }

    /// Index-level addition and negation tables.
    pub fn table(&self) -> GroupTable {
        let n = self.order as usize;
        let elems: Vec<GroupElement> = self.elements().collect();
        let mut add = vec![0u32; n * n];
        for i in 0..n {
            for j in i..n {
                let k = self.index_of(&self.add(&elems[i], &elems[j])) as u32;
                add[i * n + j] = k;
                add[j * n + i] = k;
            }
        }
        let neg = elems.iter().map(|e| self.index_of(&self.neg(e)) as u32).collect();
        GroupTable { n, add, neg }
    }
}

/// Cayley table of a [`FabGroup`] on element indices. Index 0 is the identity.
#[derive(Clone, Debug)]
pub struct GroupTable {
    pub n: usize,
    pub add: Vec<u32>,
    pub neg: Vec<u32>,
}

impl GroupTable {
    #[inline]
    pub fn add(&self, i: usize, j: usize) -> usize {
        self.add[i * self.n + j] as usize
    }
}

/// All abelian groups with order at most `max_order`, ordered by order and
/// then by invariant factors.
pub fn groups_up_to(max_order: u64) -> Vec<FabGroup> {
    (1..=max_order).flat_map(groups_of_order).collect()
}

/// All abelian groups of order `n`, cyclic group last.
pub fn groups_of_order(n: u64) -> Vec<FabGroup> {
    // choose the factor lists d_1 | d_2 | ... | d_k with product n
    fn rec(rest: u64, min_factor: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            out.push(acc.clone());
            return;
        }
        let mut d = min_factor.max(2);
        while d <= rest {
            if rest.is_multiple_of(d) && d.is_multiple_of(min_factor.max(1)) {
                let remaining = rest / d;
                // every later factor is a multiple of d
                if remaining == 1 || remaining.is_multiple_of(d) {
                    acc.push(d);
                    rec(remaining, d, acc, out);
                    acc.pop();
                }
            }
            d += 1;
        }
    }
    if n == 1 {
        return vec![FabGroup::trivial()];
    }
    let mut lists = Vec::new();
    rec(n, 1, &mut Vec::new(), &mut lists);
    let mut groups: Vec<FabGroup> = lists
        .into_iter()
        .map(|f| FabGroup::new(&f).expect("enumerated factors are valid"))
        .collect();
    groups.sort_by(|a, b| b.rank().cmp(&a.rank()).then(a.factors.cmp(&b.factors)));
    groups
}

/// A canonically sorted, duplicate-free set of group elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetS {
    members: Vec<GroupElement>,
}

impl SubsetS {
    pub fn new<I: IntoIterator<Item = GroupElement>>(items: I) -> Self {
        let mut members: Vec<GroupElement> = items.into_iter().collect();
        members.sort();
        members.dedup();
        SubsetS { members }
    }

    pub fn empty() -> Self {
        SubsetS { members: vec![] }
    }

    pub fn singleton(e: GroupElement) -> Self {
        SubsetS { members: vec![e] }
    }

    pub fn whole(g: &FabGroup) -> Self {
        SubsetS {
            members: g.elements().collect(),
        }
    }

    pub fn members(&self) -> &[GroupElement] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.members.binary_search(e).is_ok()
    }

    pub fn is_subset_of(&self, other: &SubsetS) -> bool {
        self.members.iter().all(|e| other.contains(e))
    }

    pub fn union(&self, other: &SubsetS) -> SubsetS {
        SubsetS::new(self.members.iter().chain(&other.members).cloned())
    }

    pub fn difference(&self, other: &SubsetS) -> SubsetS {
        SubsetS {
            members: self
                .members
                .iter()
                .filter(|e| !other.contains(e))
                .cloned()
                .collect(),
        }
    }

    pub fn check_in(&self, g: &FabGroup) -> Result<()> {
        self.members.iter().try_for_each(|e| g.check(e))
    }

    /// Element indices in `g`, ascending.
    pub fn indices(&self, g: &FabGroup) -> Vec<usize> {
        self.members.iter().map(|e| g.index_of(e)).collect()
    }

    pub fn from_indices(g: &FabGroup, idx: impl IntoIterator<Item = usize>) -> Self {
        SubsetS::new(idx.into_iter().map(|i| g.element(i)))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroupElement> {
        self.members.iter()
    }
}

impl fmt::Display for SubsetS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// A subgroup stored as its explicit element set. Equality ignores the
/// generator list, which is kept for provenance only.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Subgroup {
    elements: SubsetS,
    generators: Vec<GroupElement>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl Subgroup {
    /// Validates that `elements` contains the identity and is closed under
    /// addition.
    pub fn from_elements(g: &FabGroup, elements: SubsetS) -> Result<Self> {
        elements.check_in(g)?;
        if !elements.contains(&g.zero()) {
            return Err(Error::InvalidSubgroup(format!(
                "{elements} does not contain the identity"
            )));
        }
        for a in elements.iter() {
            for b in elements.iter() {
                if !elements.contains(&g.add(a, b)) {
                    return Err(Error::InvalidSubgroup(format!(
                        "{elements} is not closed: {a} + {b} is missing"
                    )));
                }
            }
        }
        let generators = elements.members().to_vec();
        Ok(Subgroup {
            elements,
            generators,
        })
    }

    pub fn trivial(g: &FabGroup) -> Self {
        Subgroup {
            elements: SubsetS::singleton(g.zero()),
            generators: vec![],
        }
    }

    pub fn whole(g: &FabGroup) -> Self {
        Subgroup {
            elements: SubsetS::whole(g),
            generators: (0..g.rank()).map(|i| g.generator(i)).collect(),
        }
    }

    pub fn elements(&self) -> &SubsetS {
        &self.elements
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.elements.contains(e)
    }

    /// Re-checks closure inside `g`.
    pub fn verify(&self, g: &FabGroup) -> Result<()> {
        Subgroup::from_elements(g, self.elements.clone()).map(|_| ())
    }
}

/// Smallest subgroup containing `gens`, by closure iteration.
pub fn subgroup_generated(g: &FabGroup, gens: &[GroupElement]) -> Result<Subgroup> {
    for e in gens {
        g.check(e)?;
    }
    let mut seen: HashSet<GroupElement> = HashSet::new();
    seen.insert(g.zero());
    let mut frontier = vec![g.zero()];
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y = g.add(&x, s);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    Ok(Subgroup {
        elements: SubsetS::new(seen),
        generators: gens.to_vec(),
    })
}

/// Partition of `g` into cosets of `h`, ordered by their least element.
pub fn cosets(g: &FabGroup, h: &Subgroup) -> Result<Vec<SubsetS>> {
    h.verify(g)?;
    let n = g.order() as usize;
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let rep = g.element(i);
        let coset = SubsetS::new(h.elements().iter().map(|x| g.add(&rep, x)));
        for e in coset.iter() {
            assigned[g.index_of(e)] = true;
        }
        out.push(coset);
    }
    Ok(out)
}

/// `x + H` as a subset.
pub fn coset_of(g: &FabGroup, h: &Subgroup, x: &GroupElement) -> SubsetS {
    SubsetS::new(h.elements().iter().map(|y| g.add(x, y)))
}

/// A homomorphism given by the images of the standard generators of the
/// source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    source: FabGroup,
    target: FabGroup,
    images: Vec<GroupElement>,
}

impl GroupHom {
    /// Fails unless image `i` has order dividing the `i`-th invariant factor,
    /// which is exactly the condition for a well-defined homomorphism.
    pub fn new(source: FabGroup, target: FabGroup, images: Vec<GroupElement>) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::InvalidHom(format!(
                "{} images for a source of rank {}",
                images.len(),
                source.rank()
            )));
        }
        for (img, &n) in images.iter().zip(source.invariant_factors()) {
            target.check(img)?;
            if n % target.element_order(img) != 0 {
                return Err(Error::InvalidHom(format!(
                    "image {img} has order {} not dividing {n}",
                    target.element_order(img)
                )));
            }
        }
        Ok(GroupHom {
            source,
            target,
            images,
        })
    }

    pub fn source(&self) -> &FabGroup {
        &self.source
    }

    pub fn target(&self) -> &FabGroup {
        &self.target
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn eval(&self, x: &GroupElement) -> GroupElement {
        let mut acc = self.target.zero();
        for (&c, img) in x.0.iter().zip(&self.images) {
            acc = self.target.add(&acc, &self.target.mul(c as i64, img));
        }
        acc
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if other.source != self.target {
            return Err(Error::InvalidHom("composition of mismatched maps".into()));
        }
        let images = self.images.iter().map(|y| other.eval(y)).collect();
        GroupHom::new(self.source.clone(), other.target.clone(), images)
    }

    pub fn kernel(&self) -> Subgroup {
        let zero = self.target.zero();
        let elements = SubsetS::new(self.source.elements().filter(|x| self.eval(x) == zero));
        Subgroup {
            elements,
            generators: vec![],
        }
    }

    pub fn image_set(&self) -> SubsetS {
        SubsetS::new(self.source.elements().map(|x| self.eval(&x)))
    }

    pub fn is_surjective(&self) -> bool {
        self.image_set().len() as u64 == self.target.order()
    }

    /// Checks `f(x + y) = f(x) + f(y)` on every pair.
    pub fn verify_all_pairs(&self) -> bool {
        let elems: Vec<GroupElement> = self.source.elements().collect();
        let vals: Vec<GroupElement> = elems.iter().map(|x| self.eval(x)).collect();
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                let lhs = self.eval(&self.source.add(x, y));
                if lhs != self.target.add(&vals[i], &vals[j]) {
                    return false;
                }
            }
        }
        true
    }
}

/// `{x ∈ source | f(x) ∈ s}`.
pub fn preimage(f: &GroupHom, s: &SubsetS) -> Result<SubsetS> {
    s.check_in(f.target())?;
    Ok(SubsetS::new(
        f.source().elements().filter(|x| s.contains(&f.eval(x))),
    ))
}

/// `-S`.
pub fn negate_set(g: &FabGroup, s: &SubsetS) -> Result<SubsetS> {
    s.check_in(g)?;
    Ok(SubsetS::new(s.iter().map(|e| g.neg(e))))
}

/// Recovers invariant factors and explicit coordinates for an abstract
/// finite abelian group given by an addition table on ids `0..n`.
///
/// Greedy basis: repeatedly take a coset of maximal order in `G/H` and lift
/// it to an element of the same order; `H + <lift>` stays a direct summand.
/// Returns the group and the coordinate vector of every id.
pub fn structure_from_table(
    n: usize,
    zero: usize,
    add: &dyn Fn(usize, usize) -> usize,
) -> Result<(FabGroup, Vec<GroupElement>)> {
    if n == 0 {
        return Err(Error::InvalidGroup("empty element table".into()));
    }
    let mut in_h = vec![false; n];
    in_h[zero] = true;
    let mut h_members = vec![zero];
    let mut basis: Vec<(usize, u64)> = Vec::new();

    let order_mod = |x: usize, in_h: &[bool]| -> u64 {
        let mut k = 1u64;
        let mut y = x;
        while !in_h[y] {
            y = add(y, x);
            k += 1;
            if k > n as u64 {
                return 0;
            }
        }
        k
    };

    while h_members.len() < n {
        let mut best = (0u64, usize::MAX);
        for x in 0..n {
            let k = order_mod(x, &in_h);
            if k == 0 {
                return Err(Error::InvalidGroup("table is not a group".into()));
            }
            if k > best.0 {
                best = (k, x);
            }
        }
        let (m, rep) = best;
        let mut lift = None;
        for &h in &h_members {
            let y = add(rep, h);
            let mut only_h = vec![false; n];
            only_h[zero] = true;
            if order_mod(y, &only_h) == m {
                lift = Some(y);
                break;
            }
        }
        let y = lift.ok_or_else(|| {
            Error::Invariant("no lift of maximal order; table is not abelian".into())
        })?;
        basis.push((y, m));
        let mut next = Vec::with_capacity(h_members.len() * m as usize);
        for &h in &h_members {
            let mut z = h;
            for _ in 0..m {
                next.push(z);
                z = add(z, y);
            }
        }
        let mut fresh = vec![false; n];
        let mut count = 0;
        for &z in &next {
            if !fresh[z] {
                fresh[z] = true;
                count += 1;
            }
        }
        if count != next.len() {
            return Err(Error::Invariant("basis elements are not independent".into()));
        }
        in_h = fresh;
        h_members = next;
    }

    basis.reverse();
    let factors: Vec<u64> = basis.iter().map(|&(_, m)| m).collect();
    let group = FabGroup::new(&factors)?;
    if group.invariant_factors() != factors.as_slice() {
        return Err(Error::Invariant(format!(
            "greedy basis orders {factors:?} are not an invariant-factor chain"
        )));
    }
    let mut coords: Vec<Option<GroupElement>> = vec![None; n];
    for idx in 0..group.order() as usize {
        let e = group.element(idx);
        let mut id = zero;
        for (&c, &(b, _)) in e.0.iter().zip(&basis) {
            for _ in 0..c {
                id = add(id, b);
            }
        }
        if coords[id].is_some() {
            return Err(Error::Invariant("coordinate map is not injective".into()));
        }
        coords[id] = Some(e);
    }
    let coords = coords
        .into_iter()
        .map(|c| c.ok_or_else(|| Error::Invariant("coordinate map is not onto".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok((group, coords))
}

/// The quotient `G/H` in invariant-factor form together with the projection.
pub fn quotient(g: &FabGroup, h: &Subgroup) -> Result<(FabGroup, GroupHom)> {
    let cs = cosets(g, h)?;
    let mut coset_id = vec![0usize; g.order() as usize];
    for (k, c) in cs.iter().enumerate() {
        for e in c.iter() {
            coset_id[g.index_of(e)] = k;
        }
    }
    let reps: Vec<GroupElement> = cs.iter().map(|c| c.members()[0].clone()).collect();
    let add = |a: usize, b: usize| coset_id[g.index_of(&g.add(&reps[a], &reps[b]))];
    let (q, coords) = structure_from_table(cs.len(), 0, &add)?;
    let images = (0..g.rank())
        .map(|i| coords[coset_id[g.index_of(&g.generator(i))]].clone())
        .collect();
    let proj = GroupHom::new(g.clone(), q.clone(), images)?;
    Ok((q, proj))
}

/// Every subgroup of `g`, ordered by size and then by element list.
///
/// Built by closing each known subgroup under one more element, which
/// reaches every subgroup.
pub fn all_subgroups(g: &FabGroup) -> Vec<Subgroup> {
    let n = g.order() as usize;
    let table = g.table();
    // H + <x> is the union of the translates kx + H
    let close = |seed: &[bool], x: usize| -> Vec<bool> {
        let members: Vec<usize> = (0..n).filter(|&i| seed[i]).collect();
        let mut set = seed.to_vec();
        let mut shift = x;
        while !seed[shift] {
            for &m in &members {
                set[table.add(m, shift)] = true;
            }
            shift = table.add(shift, x);
        }
        set
    };

    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut trivial = vec![false; n];
    trivial[0] = true;
    seen.insert(trivial.clone());
    let mut frontier = vec![trivial];
    while let Some(h) = frontier.pop() {
        for x in 0..n {
            if h[x] {
                continue;
            }
            let bigger = close(&h, x);
            if seen.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    let mut subs: Vec<Subgroup> = seen
        .into_iter()
        .map(|set| Subgroup {
            elements: SubsetS::from_indices(g, (0..n).filter(|&i| set[i])),
            generators: vec![],
        })
        .collect();
    subs.sort_by(|a, b| a.order().cmp(&b.order()).then(a.elements.cmp(&b.elements)));
    subs
}

/// A finite sequence of group elements with multiset semantics.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GSequence {
    elements: Vec<GroupElement>,
}

impl GSequence {
    pub fn new(elements: Vec<GroupElement>) -> Self {
        GSequence { elements }
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Sorted copy; every computed property is invariant under reordering.
    pub fn canonical(&self) -> GSequence {
        let mut e = self.elements.clone();
        e.sort();
        GSequence { elements: e }
    }

    pub fn sum(&self, g: &FabGroup) -> GroupElement {
        g.sum(&self.elements)
    }

    pub fn check_in(&self, g: &FabGroup) -> Result<()> {
        self.elements.iter().try_for_each(|e| g.check(e))
    }
}

impl fmt::Display for GSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}
