//! Elasticity of `R_{p^a}`: the general formula over a conductor ladder,
//! the closed form for cyclic `Cl(R_n)`, and the automatic pipeline.
//!
//! The general formula is
//! `ρ(R_n) = max{ D/2, a + D_P/2 (ramified only), j + d_j/2 : 1 ≤ j ≤ a }`
//! over `Cl(R_n)`, where `d_j` is `d` of `ker τ_{a−j}` when the unit groups
//! of `R_{p^{a−j}}` and `R_{p^{a−j+1}}` differ and of
//! `ker τ_{a−j} ∖ ker τ_{a−j+1}` otherwise.

use serde::{Deserialize, Serialize};

use super::forms::class_group_imaginary;
use super::htable::ClassNumberTable;
use super::indefinite::prime_over_is_principal_real;
use super::ladder::{tau_ladder_imaginary, TauLadder};
use super::units::{unit_data, UnitData};
use super::{l_function, AlphaKind, QuadraticOrderSpec, Splitting};
use crate::arith::is_squarefree;
use crate::elasticity::{format_rational, infinite_elasticity_guard, Elasticity, Rational};
use crate::error::{Error, Result};
use crate::group::{
    coset_of, groups_of_order, preimage, subgroup_generated, FabGroup, GroupElement, Subgroup,
    SubsetS,
};
use crate::zerosum::Engine;

/// Where the class group data of a ladder came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LadderSource {
    /// Form class groups and going-down maps (imaginary fields).
    Forms,
    /// Provided by the caller.
    Supplied,
    /// The unique cyclic ladder with the computed level orders.
    Cyclic,
}

/// Group data behind the general formula: `Cl(R_n)`, the kernels
/// `ker τ_i` for `i = 0..=a` and, for ramified `p`, the preimage of `[P]`.
#[derive(Clone, Debug)]
pub struct ConductorLadder {
    pub top: FabGroup,
    pub kernels: Vec<Subgroup>,
    pub p_coset: Option<SubsetS>,
    pub source: LadderSource,
}

impl ConductorLadder {
    pub fn a(&self) -> usize {
        self.kernels.len() - 1
    }

    /// `|Cl(R_{p^i})| = |Cl(R_n)| / |ker τ_i|`.
    pub fn level_orders(&self) -> Vec<u64> {
        self.kernels.iter().map(|k| self.top.order() / k.order()).collect()
    }

    fn check(&self) -> Result<()> {
        if self.kernels.is_empty() {
            return Err(Error::InvalidArgument("ladder needs at least one kernel".into()));
        }
        for k in &self.kernels {
            k.verify(&self.top)?;
        }
        if self.kernels.last().unwrap().order() != 1 {
            return Err(Error::InvalidArgument("the last kernel (tau_a = identity) must be trivial".into()));
        }
        for (i, w) in self.kernels.windows(2).enumerate() {
            if !w[1].elements().is_subset_of(w[0].elements()) {
                return Err(Error::InvalidArgument(format!("ker tau_{} is not inside ker tau_{i}", i + 1)));
            }
        }
        if let Some(c) = &self.p_coset {
            let k0 = &self.kernels[0];
            let rep = c
                .iter()
                .next()
                .ok_or_else(|| Error::InvalidArgument("empty preimage of [P]".into()))?;
            if *c != coset_of(&self.top, k0, rep) {
                return Err(Error::InvalidArgument("preimage of [P] is not a coset of ker tau_0".into()));
            }
            let double = self.top.add(rep, rep);
            if !k0.contains(&double) {
                return Err(Error::InvalidArgument("[P]^2 must be trivial for a ramified prime".into()));
            }
        }
        Ok(())
    }

    pub fn from_tau(ladder: &TauLadder) -> Result<Self> {
        let ramified = ladder.spec.splitting() == Splitting::Ramified;
        let p_coset = if ramified {
            Some(preimage(&ladder.maps[0], &SubsetS::singleton(ladder.p_class.clone()))?)
        } else {
            None
        };
        let l = ConductorLadder {
            top: ladder.top().clone(),
            kernels: ladder.kernels.clone(),
            p_coset,
            source: LadderSource::Forms,
        };
        l.check()?;
        Ok(l)
    }

    /// The ladder inside `Z_{h'}` determined by the level orders: `ker τ_i`
    /// is the unique subgroup of order `h'/|Cl(R_{p^i})|` and `[P]` lifts to
    /// `0` or `h/2`.
    pub fn cyclic(level_orders: &[u64], p_principal: Option<bool>) -> Result<Self> {
        let h_prime = *level_orders.last().ok_or_else(|| Error::InvalidArgument("no levels".into()))?;
        let top = FabGroup::cyclic(h_prime)?;
        // k·1 in Z_{h'}; the trivial group has no generator
        let el = |k: u64| if top.rank() == 0 { top.zero() } else { top.mul(k as i64, &top.generator(0)) };
        let mut kernels = Vec::with_capacity(level_orders.len());
        for &o in level_orders {
            if h_prime % o != 0 {
                return Err(Error::Invariant(format!("level order {o} does not divide {h_prime}")));
            }
            kernels.push(subgroup_generated(&top, &[el(o)])?);
        }
        let h = level_orders[0];
        let p_coset = match p_principal {
            None => None,
            Some(true) => Some(kernels[0].elements().clone()),
            Some(false) => {
                if !h.is_multiple_of(2) {
                    return Err(Error::Invariant(format!(
                        "a non-principal ramified prime needs a class of order 2, but h = {h} is odd"
                    )));
                }
                Some(coset_of(&top, &kernels[0], &el(h / 2)))
            }
        };
        let l = ConductorLadder { top, kernels, p_coset, source: LadderSource::Cyclic };
        l.check()?;
        Ok(l)
    }
}

/// A caller-provided ladder: `Cl(R_n)`, the kernel element lists for
/// `i = 0..=a`, and a lift of `[P]` (needed for ramified `p`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuppliedLadder {
    pub group: FabGroup,
    pub kernels: Vec<SubsetS>,
    #[serde(default)]
    pub p_class: Option<GroupElement>,
}

impl SuppliedLadder {
    pub fn to_ladder(&self, ramified: bool) -> Result<ConductorLadder> {
        let kernels = self
            .kernels
            .iter()
            .map(|k| Subgroup::from_elements(&self.group, k.clone()))
            .collect::<Result<Vec<_>>>()?;
        let p_coset = match (ramified, &self.p_class) {
            (false, _) => None,
            (true, None) => {
                return Err(Error::InvalidArgument("ramified p: the ladder needs p_class".into()));
            }
            (true, Some(x)) => {
                self.group.check(x)?;
                let k0 = kernels
                    .first()
                    .ok_or_else(|| Error::InvalidArgument("ladder needs at least one kernel".into()))?;
                Some(coset_of(&self.group, k0, x))
            }
        };
        let l = ConductorLadder { top: self.group.clone(), kernels, p_coset, source: LadderSource::Supplied };
        l.check()?;
        Ok(l)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DjBranch {
    /// Unit groups differ: `d` of `ker τ_{a−j}`.
    Kernel,
    /// Unit groups agree: `d` of `ker τ_{a−j} ∖ ker τ_{a−j+1}`.
    Difference,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DjValue {
    pub j: usize,
    pub branch: DjBranch,
    pub set_size: usize,
    pub value: u64,
}

/// `d_1, …, d_a` for a ladder and the unit indices of the same order.
///
/// In the equal-units branch the set difference must be nonempty (the class
/// number strictly grows there). For cyclic `Cl(R_n)` the difference branch
/// is also checked against `d` of the whole kernel, which must agree.
pub fn dj_values(engine: &Engine, ladder: &ConductorLadder, units: &UnitData) -> Result<Vec<DjValue>> {
    let a = ladder.a();
    if units.indices.len() != a + 1 {
        return Err(Error::InvalidArgument(format!(
            "unit data has {} levels, ladder has {}",
            units.indices.len(),
            a + 1
        )));
    }
    let mut out = Vec::with_capacity(a);
    for j in 1..=a {
        let i = a - j;
        let kernel = ladder.kernels[i].elements();
        let (branch, set) = if units.differs_at(i) {
            (DjBranch::Kernel, kernel.clone())
        } else {
            let diff = kernel.difference(ladder.kernels[i + 1].elements());
            if diff.is_empty() {
                return Err(Error::Invariant(format!(
                    "ker tau_{i} = ker tau_{} although the unit groups agree; \
                     the class number must grow at this step",
                    i + 1
                )));
            }
            (DjBranch::Difference, diff)
        };
        let value = engine.small_rel_davenport(&ladder.top, &set)?.value;
        if branch == DjBranch::Difference && ladder.top.is_cyclic() {
            let whole = engine.small_rel_davenport(&ladder.top, kernel)?.value;
            if whole != value {
                return Err(Error::Invariant(format!(
                    "cyclic Cl(R_n): d over ker tau_{i} is {whole} but over the difference it is {value}"
                )));
            }
        }
        out.push(DjValue { j, branch, set_size: set.len(), value });
    }
    Ok(out)
}

/// The terms of the general formula and their maximum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RnBreakdown {
    /// `D(Cl(R_n))`.
    pub davenport: u64,
    /// `D_P(Cl(R_n))`, ramified `p` only.
    pub davenport_p: Option<u64>,
    pub dj: Vec<DjValue>,
    pub elasticity: Elasticity,
}

/// `ρ(R_n)` from ladder data. Split `p` gives infinite elasticity; the
/// result is at least `a` otherwise.
pub fn elasticity_rn_breakdown(
    engine: &Engine,
    spec: &QuadraticOrderSpec,
    ladder: &ConductorLadder,
    units: &UnitData,
) -> Result<RnBreakdown> {
    let splitting = spec.splitting();
    if splitting == Splitting::Split {
        infinite_elasticity_guard(2)?;
        return Ok(RnBreakdown { davenport: 0, davenport_p: None, dj: vec![], elasticity: Elasticity::Infinite });
    }
    if ladder.a() != spec.a as usize {
        return Err(Error::InvalidArgument(format!("ladder has a = {}, order has a = {}", ladder.a(), spec.a)));
    }
    let a = spec.a as i64;
    let davenport = engine.davenport(&ladder.top)?;
    let mut best = Rational::new(davenport as i64, 2);
    let davenport_p = if splitting == Splitting::Ramified {
        let coset = ladder
            .p_coset
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("ramified p needs the preimage of [P]".into()))?;
        let dp = engine.rel_davenport(&ladder.top, coset)?;
        best = best.max(Rational::from(a) + Rational::new(dp as i64, 2));
        Some(dp)
    } else {
        None
    };
    let dj = dj_values(engine, ladder, units)?;
    for v in &dj {
        best = best.max(Rational::from(v.j as i64) + Rational::new(v.value as i64, 2));
    }
    if best < Rational::from(a) {
        return Err(Error::Invariant(format!("rho(R_n) = {best} is below a = {a}")));
    }
    Ok(RnBreakdown { davenport, davenport_p, dj, elasticity: Elasticity::finite(best)? })
}

pub fn elasticity_rn(
    engine: &Engine,
    spec: &QuadraticOrderSpec,
    ladder: &ConductorLadder,
    units: &UnitData,
) -> Result<Elasticity> {
    Ok(elasticity_rn_breakdown(engine, spec, ladder, units)?.elasticity)
}

/// Closed form for cyclic `Cl(R_n)` of order `h'` over `Cl(R̄)` of order `h`:
/// `h'/2 + max{0, a − (h−1)/2}` (ramified, `P` principal),
/// `h'/2 + max{0, a − (h−2)/4}` (ramified, `P` not principal),
/// `h'/2 + max{0, a − h/2}` (inert).
pub fn elasticity_rn_cyclic(
    h: u64,
    h_prime: u64,
    a: u32,
    splitting: Splitting,
    p_principal: bool,
) -> Result<Elasticity> {
    if h == 0 || h_prime == 0 || !h_prime.is_multiple_of(h) {
        return Err(Error::InvalidArgument(format!("h = {h} must divide h' = {h_prime}")));
    }
    if a == 0 {
        return Err(Error::InvalidArgument("a must be at least 1".into()));
    }
    let (h, a) = (h as i64, a as i64);
    let shift = match (splitting, p_principal) {
        (Splitting::Split, _) => {
            return Err(Error::Precondition("split primes give infinite elasticity".into()));
        }
        (Splitting::Ramified, true) => Rational::new(h - 1, 2),
        (Splitting::Ramified, false) => Rational::new(h - 2, 4),
        (Splitting::Inert, _) => Rational::new(h, 2),
    };
    let extra = (Rational::from(a) - shift).max(Rational::from(0));
    Elasticity::finite(Rational::new(h_prime as i64, 2) + extra)
}

/// `|Cl(R_{p^i})| = h·L(p^i, d)/k_i`, required to be a positive integer.
pub fn cl_level_order(h: u64, spec: &QuadraticOrderSpec, units: &UnitData, i: u32) -> Result<u64> {
    let m = spec.conductor_at(i)?;
    let l = l_function(m, spec.d)?.value;
    let k = *units
        .indices
        .get(i as usize)
        .ok_or_else(|| Error::InvalidArgument(format!("no unit index for level {i}")))?;
    let num = (h as u128) * (l as u128);
    if !num.is_multiple_of(k as u128) {
        return Err(Error::Invariant(format!("h·L/k = {h}·{l}/{k} is not an integer")));
    }
    u64::try_from(num / k as u128).map_err(|_| Error::Invariant("class number overflows".into()))
}

/// `|Cl(R_n)|` for `n = p^a`.
pub fn cl_rn_order(h: u64, spec: &QuadraticOrderSpec, units: &UnitData) -> Result<u64> {
    cl_level_order(h, spec, units, spec.a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Cyclicity {
    Cyclic,
    NonCyclic,
    Ambiguous,
}

/// Decides from orders alone whether `Cl(R_n)` (order `h'`) with a cyclic
/// quotient of order `h` must be cyclic. A group has a quotient `Z_h` iff
/// `h` divides its exponent.
pub fn infer_cyclic(h_prime: u64, h: u64) -> Result<Cyclicity> {
    if h == 0 || h_prime == 0 || !h_prime.is_multiple_of(h) {
        return Err(Error::InvalidArgument(format!("h = {h} must divide h' = {h_prime}")));
    }
    let candidates: Vec<FabGroup> = groups_of_order(h_prime)
        .into_iter()
        .filter(|g| g.exponent() % h == 0)
        .collect();
    Ok(match (candidates.iter().any(|g| g.is_cyclic()), candidates.len()) {
        (true, 1) => Cyclicity::Cyclic,
        (false, _) => Cyclicity::NonCyclic,
        _ => Cyclicity::Ambiguous,
    })
}

/// Input record for the automatic pipeline, e.g. `{"d":-7,"p":3,"a":1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticInput {
    pub d: i64,
    pub p: u64,
    pub a: u32,
    /// `|Cl(R̄)|`; defaults to the forms (imaginary) or the bundled table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<u64>,
    /// Whether the prime over a ramified `p` is principal; computed if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_principal: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder: Option<SuppliedLadder>,
}

impl QuadraticInput {
    pub fn new(d: i64, p: u64, a: u32) -> Self {
        QuadraticInput { d, p, a, h: None, p_principal: None, ladder: None }
    }

    pub fn with_h(mut self, h: u64) -> Self {
        self.h = Some(h);
        self
    }
}

/// Derivation trace of one pipeline run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticReport {
    pub spec: QuadraticOrderSpec,
    pub n: u64,
    pub discriminant_k: i64,
    pub alpha: AlphaKind,
    pub splitting: Splitting,
    /// `L(p^i, d)` for `i = 0..=a`.
    pub l_values: Vec<u64>,
    pub l_split_rule_used: bool,
    pub unit: Option<String>,
    /// `[U(R̄) : U(R_{p^i})]` for `i = 0..=a`.
    pub unit_indices: Vec<u64>,
    pub h: Option<u64>,
    pub h_source: Option<String>,
    /// `|Cl(R_{p^i})|` for `i = 0..=a`.
    pub class_numbers: Vec<u64>,
    pub h_prime: Option<u64>,
    pub cyclicity: Option<Cyclicity>,
    pub class_group: Option<FabGroup>,
    pub ladder_source: Option<LadderSource>,
    pub kernel_orders: Vec<u64>,
    pub p_principal: Option<bool>,
    pub davenport: Option<u64>,
    pub davenport_p: Option<u64>,
    pub dj: Vec<DjValue>,
    pub cyclic_formula: Option<Elasticity>,
    pub elasticity: Elasticity,
    pub notes: Vec<String>,
}

fn resolve_h(
    input: &QuadraticInput,
    spec: &QuadraticOrderSpec,
    table: &ClassNumberTable,
    max_order: u64,
    notes: &mut Vec<String>,
) -> Result<(u64, String)> {
    let dk = spec.discriminant_k();
    if spec.is_imaginary() {
        let h = class_group_imaginary(spec.d, 1, max_order)?.order();
        if let Some(given) = input.h {
            if given != h {
                return Err(Error::InvalidArgument(format!("h = {given} given, but the forms give h({dk}) = {h}")));
            }
        }
        if let Some(t) = table.get(dk) {
            if t != h {
                return Err(Error::Invariant(format!("table says h({dk}) = {t}, forms say {h}")));
            }
        }
        return Ok((h, "forms".into()));
    }
    match (input.h, table.get(dk)) {
        (Some(h), Some(t)) if h != t => {
            notes.push(format!("h = {h} from input overrides the table value {t}"));
            Ok((h, "input".into()))
        }
        (Some(h), _) => Ok((h, "input".into())),
        (None, Some(t)) => {
            notes.push(format!("h({dk}) = {t} supplied from the bundled class number table (external data)"));
            Ok((t, "table".into()))
        }
        (None, None) => Err(Error::Unsupported(format!(
            "no class number for d_K = {dk} in the table; pass \"h\""
        ))),
    }
}

fn resolve_p_principal(input: &QuadraticInput, spec: &QuadraticOrderSpec) -> Result<bool> {
    if spec.splitting() != Splitting::Ramified {
        return Ok(true);
    }
    if spec.is_imaginary() {
        // decided by the form ladder
        return Ok(input.p_principal.unwrap_or(true));
    }
    let computed = prime_over_is_principal_real(spec.d, spec.p)?;
    if let Some(given) = input.p_principal {
        if given != computed {
            return Err(Error::InvalidArgument(format!(
                "p_principal = {given} given, but the form cycle says {computed}"
            )));
        }
    }
    Ok(computed)
}

/// Runs the whole derivation for one order: splitting, `L`, units, class
/// numbers along the ladder, the ladder itself (forms, supplied, or cyclic
/// by inference), the `d_j`, and `ρ(R_n)`; cross-checks the closed form when
/// `Cl(R_n)` is cyclic.
pub fn run_pipeline(engine: &Engine, input: &QuadraticInput, table: &ClassNumberTable) -> Result<QuadraticReport> {
    let spec = QuadraticOrderSpec::new(input.d, input.p, input.a)?;
    let splitting = spec.splitting();
    let mut notes = Vec::new();
    let mut l_values = Vec::new();
    let mut l_split_rule_used = false;
    for i in 0..=spec.a {
        let l = l_function(spec.conductor_at(i)?, spec.d)?;
        l_split_rule_used |= l.used_split_rule;
        l_values.push(l.value);
    }
    let mut report = QuadraticReport {
        spec,
        n: spec.n(),
        discriminant_k: spec.discriminant_k(),
        alpha: spec.alpha_kind(),
        splitting,
        l_values,
        l_split_rule_used,
        unit: None,
        unit_indices: vec![],
        h: None,
        h_source: None,
        class_numbers: vec![],
        h_prime: None,
        cyclicity: None,
        class_group: None,
        ladder_source: None,
        kernel_orders: vec![],
        p_principal: None,
        davenport: None,
        davenport_p: None,
        dj: vec![],
        cyclic_formula: None,
        elasticity: Elasticity::Infinite,
        notes: vec![],
    };
    if splitting == Splitting::Split {
        infinite_elasticity_guard(2)?;
        notes.push(format!(
            "{} splits in Q(√{}): two primes lie over the conductor, so the elasticity is infinite",
            spec.p, spec.d
        ));
        notes.push("L uses p-1 for split primes, a value the inert/ramified rules do not cover".into());
        report.notes = notes;
        return Ok(report);
    }

    let units = unit_data(&spec)?;
    report.unit = units.generator.as_ref().map(|u| u.to_string());
    report.unit_indices = units.indices.clone();
    let (h, h_source) = resolve_h(input, &spec, table, engine.max_order(), &mut notes)?;
    report.h = Some(h);
    report.h_source = Some(h_source);
    let class_numbers = (0..=spec.a)
        .map(|i| cl_level_order(h, &spec, &units, i))
        .collect::<Result<Vec<_>>>()?;
    let h_prime = *class_numbers.last().unwrap();
    report.class_numbers = class_numbers.clone();
    report.h_prime = Some(h_prime);
    if h_prime > engine.max_order() {
        return Err(Error::SizeGuard { order: h_prime, limit: engine.max_order() });
    }
    for i in 0..spec.a as usize {
        if !units.differs_at(i) && class_numbers[i] >= class_numbers[i + 1] {
            return Err(Error::Invariant(format!(
                "unit groups agree at level {i} but the class number does not grow"
            )));
        }
    }

    let p_principal_input = resolve_p_principal(input, &spec)?;
    let ramified = splitting == Splitting::Ramified;
    let (ladder, p_principal) = if let Some(sup) = &input.ladder {
        let l = sup.to_ladder(ramified)?;
        if l.level_orders() != class_numbers {
            return Err(Error::InvalidArgument(format!(
                "supplied ladder has level orders {:?}, the class number formula gives {:?}",
                l.level_orders(),
                class_numbers
            )));
        }
        let principal = match &l.p_coset {
            Some(c) => c == l.kernels[0].elements(),
            None => true,
        };
        if ramified && !spec.is_imaginary() && principal != p_principal_input {
            return Err(Error::InvalidArgument(format!(
                "supplied ladder puts [P] {} the kernel, but P is {}principal",
                if principal { "in" } else { "outside" },
                if p_principal_input { "" } else { "not " }
            )));
        }
        (l, principal)
    } else if spec.is_imaginary() {
        let tau = tau_ladder_imaginary(&spec, engine.max_order())?;
        if tau.orders() != class_numbers {
            return Err(Error::Invariant(format!(
                "form class numbers {:?} disagree with h·L/k = {:?}",
                tau.orders(),
                class_numbers
            )));
        }
        let l = ConductorLadder::from_tau(&tau)?;
        let principal = tau.p_class == tau.levels[0].group().zero();
        if let Some(given) = input.p_principal {
            if ramified && given != principal {
                return Err(Error::InvalidArgument(format!(
                    "p_principal = {given} given, but the forms say {principal}"
                )));
            }
        }
        (l, principal)
    } else {
        let cyc = infer_cyclic(h_prime, h)?;
        report.cyclicity = Some(cyc);
        if cyc != Cyclicity::Cyclic {
            return Err(Error::Unsupported(format!(
                "Cl(R_n) of order {h_prime} over Cl(R̄) of order {h} is not forced to be cyclic; \
                 supply a ladder"
            )));
        }
        if !is_squarefree(h as i64) {
            notes.push(format!("Cl(R̄) taken to be cyclic of order {h} when inferring cyclicity"));
        }
        let l = ConductorLadder::cyclic(&class_numbers, ramified.then_some(p_principal_input))?;
        (l, p_principal_input)
    };
    report.p_principal = Some(p_principal);
    report.class_group = Some(ladder.top.clone());
    report.ladder_source = Some(ladder.source);
    report.kernel_orders = ladder.kernels.iter().map(|k| k.order()).collect();
    if report.cyclicity.is_none() {
        report.cyclicity = Some(if ladder.top.is_cyclic() { Cyclicity::Cyclic } else { Cyclicity::NonCyclic });
    }

    let breakdown = elasticity_rn_breakdown(engine, &spec, &ladder, &units)?;
    report.davenport = Some(breakdown.davenport);
    report.davenport_p = breakdown.davenport_p;
    report.dj = breakdown.dj;
    report.elasticity = breakdown.elasticity;
    if ladder.top.is_cyclic() {
        let closed = elasticity_rn_cyclic(h, h_prime, spec.a, splitting, p_principal)?;
        if closed != report.elasticity {
            return Err(Error::Invariant(format!(
                "general formula gives {} but the cyclic closed form gives {closed}",
                report.elasticity
            )));
        }
        report.cyclic_formula = Some(closed);
    }
    if l_split_rule_used {
        notes.push("L uses p-1 for split primes, a value the inert/ramified rules do not cover".into());
    }
    report.notes = notes;
    Ok(report)
}

/// Outcome of comparing `ρ(R_{p^a})` and `ρ(R_{p^b})` for `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonicityReport {
    pub d: i64,
    pub p: u64,
    pub a: u32,
    pub b: u32,
    pub rho_small: Elasticity,
    pub rho_large: Elasticity,
    /// `D(Cl(R_{p^a}))/2`.
    pub half_davenport_small: Option<String>,
    pub strict: bool,
    /// `ρ(R_{p^a}) ≤ ρ(R_{p^b})`, with equality iff both equal
    /// `D(Cl(R_{p^a}))/2`.
    pub holds: bool,
}

/// Checks that elasticity does not decrease down the chain of orders and
/// that equality happens exactly when both equal `D(Cl(R_{p^a}))/2`.
pub fn monotonicity_check(
    engine: &Engine,
    small: &QuadraticInput,
    b: u32,
    table: &ClassNumberTable,
) -> Result<MonotonicityReport> {
    if b <= small.a {
        return Err(Error::Precondition(format!("need b > a, got a = {}, b = {b}", small.a)));
    }
    if small.ladder.is_some() {
        return Err(Error::InvalidArgument("monotonicity_check computes both ladders itself".into()));
    }
    let large = QuadraticInput { a: b, ..small.clone() };
    let rs = run_pipeline(engine, small, table)?;
    let rl = run_pipeline(engine, &large, table)?;
    let half = rs.davenport.map(|d| Rational::new(d as i64, 2));
    let le = rs.elasticity <= rl.elasticity;
    let equal = rs.elasticity == rl.elasticity;
    let both_half = half.is_some_and(|h| {
        rs.elasticity == Elasticity::Finite(h) && rl.elasticity == Elasticity::Finite(h)
    });
    let holds = match (rs.elasticity, rl.elasticity) {
        (Elasticity::Infinite, _) | (_, Elasticity::Infinite) => le,
        _ => le && (equal == both_half),
    };
    Ok(MonotonicityReport {
        d: small.d,
        p: small.p,
        a: small.a,
        b,
        rho_small: rs.elasticity,
        rho_large: rl.elasticity,
        half_davenport_small: half.map(|h| format_rational(&h)),
        strict: le && !equal,
        holds,
    })
}
