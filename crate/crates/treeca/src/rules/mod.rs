//! Canonical labeled balls, local-rule tables over them, rule enumeration,
//! composition, and minimal-neighborhood reduction.
//!
//! A local rule that commutes with every automorphism of the tree cannot
//! see *which* neighbor carries which symbol, only the isomorphism class of
//! the labeled ball around a cell. [`CanonicalBall`] is that class and
//! [`Rule`] is a total table from classes to output symbols.

pub(crate) mod codes;
mod io;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::topology::{self, TreeParams, Vertex};

pub use io::{rule_from_json, rule_to_json};

/// Cell symbol. Symbol `0` is the distinguished quiescent target: every
/// nilpotency, mortality, and support notion in this crate is relative to
/// the all-zero configuration.
pub type Symbol = u8;

/// Enumeration caps. Every operation whose cost is a combinatorial count
/// checks against these before materializing anything.
#[derive(Copy, Clone, Debug)]
pub struct Limits {
    /// Max canonical forms per enumeration.
    pub canonical_balls: u64,
    /// Max rules per enumeration.
    pub rules: u128,
    /// Max words for exhaustive window checks.
    pub words: u64,
    /// Max cells in a single simulation arena.
    pub sim_cells: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            canonical_balls: 10_000_000,
            rules: 10_000_000,
            words: 10_000_000,
            sim_cells: 1 << 26,
        }
    }
}

impl Limits {
    /// The same cap applied to every knob.
    pub fn uniform(cap: u64) -> Self {
        Limits {
            canonical_balls: cap,
            rules: cap as u128,
            words: cap,
            sim_cells: cap,
        }
    }
}

/// Symbol set `{0, ..., size-1}`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    size: u8,
}

impl Alphabet {
    pub fn new(size: u8) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidAlphabet(0));
        }
        Ok(Alphabet { size })
    }

    pub fn size(self) -> u8 {
        self.size
    }

    pub fn contains(self, s: Symbol) -> bool {
        s < self.size
    }

    pub fn symbols(self) -> impl Iterator<Item = Symbol> {
        0..self.size
    }

    pub fn check(self, s: Symbol) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange {
                symbol: s,
                size: self.size,
            })
        }
    }
}

/// Isomorphism class of a symbol-labeled rooted ball of fixed radius.
///
/// Internally a preorder serialization with recursively sorted children;
/// equal values correspond exactly to labelings related by an automorphism
/// of the ball fixing the center. The derived order is the enumeration
/// order, and the all-zero ball is the minimum.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalBall {
    k: u32,
    radius: u32,
    code: Vec<u8>,
}

impl CanonicalBall {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn center_symbol(&self) -> Symbol {
        self.code[0]
    }

    pub(crate) fn code(&self) -> &[u8] {
        &self.code
    }

    pub(crate) fn from_code(params: TreeParams, radius: u32, code: Vec<u8>) -> Self {
        debug_assert_eq!(code.len(), codes::ball_code_len(params.k(), radius));
        CanonicalBall {
            k: params.k(),
            radius,
            code,
        }
    }

    /// The all-zero ball.
    pub fn all_zero(params: TreeParams, radius: u32) -> Self {
        CanonicalBall {
            k: params.k(),
            radius,
            code: vec![0; codes::ball_code_len(params.k(), radius)],
        }
    }

    pub fn is_all_zero(&self) -> bool {
        self.code.iter().all(|s| *s == 0)
    }

    /// Text form, e.g. `1(0,0,1)` for radius 1 or `1(0(0,1),0(1,1),1(0,0))`
    /// for radius 2; a bare symbol at radius 0.
    pub fn to_text(&self) -> String {
        io::ball_code_to_text(self.k, self.radius, &self.code)
    }

    /// Parses and canonicalizes a ball in text form.
    pub fn parse(text: &str, params: TreeParams, alphabet: Alphabet, radius: u32) -> Result<Self> {
        io::ball_from_text(text, params, alphabet, radius)
    }
}

impl fmt::Display for CanonicalBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for CanonicalBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalBall({})", self.to_text())
    }
}

/// Canonical form of an explicitly labeled ball. The labeling must be total
/// on `ball(center, radius)`; extra vertices are ignored.
pub fn canonicalize(
    params: TreeParams,
    alphabet: Alphabet,
    center: &Vertex,
    radius: u32,
    labels: &BTreeMap<Vertex, Symbol>,
) -> Result<CanonicalBall> {
    center.validate(params)?;
    for v in topology::ball(params, center, radius)? {
        match labels.get(&v) {
            None => return Err(Error::PartialLabeling(v.to_string())),
            Some(s) => alphabet.check(*s)?,
        }
    }
    let code = codes::code_from_reader(params, center, radius, &mut |v| labels[v]);
    Ok(CanonicalBall {
        k: params.k(),
        radius,
        code,
    })
}

/// Complete, duplicate-free, deterministically ordered list of canonical
/// balls for the given parameters.
pub fn enumerate_canonical_balls(
    params: TreeParams,
    alphabet: Alphabet,
    radius: u32,
    limits: &Limits,
) -> Result<Vec<CanonicalBall>> {
    let codes = codes::enumerate_codes(params.k(), alphabet.size() as u32, radius, limits)?;
    Ok(codes
        .into_iter()
        .map(|code| CanonicalBall {
            k: params.k(),
            radius,
            code,
        })
        .collect())
}

/// The table domain for one `(k, |A|, radius)` family: the canonical ball
/// enumeration and the rule indexing live here, shared by all rules of the
/// family.
#[derive(Debug)]
pub struct RuleSpace {
    params: TreeParams,
    alphabet: Alphabet,
    radius: u32,
    balls: Vec<CanonicalBall>,
}

impl RuleSpace {
    pub fn new(
        params: TreeParams,
        alphabet: Alphabet,
        radius: u32,
        limits: &Limits,
    ) -> Result<Arc<Self>> {
        let balls = enumerate_canonical_balls(params, alphabet, radius, limits)?;
        Ok(Arc::new(RuleSpace {
            params,
            alphabet,
            radius,
            balls,
        }))
    }

    pub fn params(&self) -> TreeParams {
        self.params
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn balls(&self) -> &[CanonicalBall] {
        &self.balls
    }

    pub fn ball_count(&self) -> usize {
        self.balls.len()
    }

    /// Table index of a canonical ball.
    pub fn ball_index(&self, ball: &CanonicalBall) -> Option<usize> {
        if ball.k != self.params.k() || ball.radius != self.radius {
            return None;
        }
        self.index_of_code(&ball.code)
    }

    pub(crate) fn index_of_code(&self, code: &[u8]) -> Option<usize> {
        self.balls
            .binary_search_by(|b| b.code.as_slice().cmp(code))
            .ok()
    }

    /// Total number of rules `|A|^(ball count)`, if it fits in `u128`.
    pub fn rule_count(&self) -> Option<u128> {
        let a = self.alphabet.size() as u128;
        let mut acc: u128 = 1;
        for _ in 0..self.balls.len() {
            acc = acc.checked_mul(a)?;
        }
        Some(acc)
    }

    /// The rule with the given index. The index is the base-`|A|` encoding
    /// of the table, the entry of the first canonical ball being the least
    /// significant digit.
    pub fn rule_at(self: &Arc<Self>, index: u128) -> Result<Rule> {
        match self.rule_count() {
            Some(count) if index >= count => Err(Error::Precondition(format!(
                "rule index {index} out of range (family has {count} rules)"
            ))),
            _ => {
                let a = self.alphabet.size() as u128;
                let mut rem = index;
                let outputs = (0..self.balls.len())
                    .map(|_| {
                        let s = (rem % a) as Symbol;
                        rem /= a;
                        s
                    })
                    .collect();
                Rule::from_outputs(Arc::clone(self), outputs)
            }
        }
    }

    /// Iterates the whole family in index order. Requires the family size
    /// to be under the rule cap; use [`RuleSpace::rules_in`] to shard larger
    /// spaces.
    pub fn rules(self: &Arc<Self>, limits: &Limits) -> Result<impl Iterator<Item = Rule>> {
        let count = self.rule_count().unwrap_or(u128::MAX);
        if count > limits.rules {
            return Err(Error::Capacity {
                what: "rule enumeration",
                required: count,
                cap: limits.rules,
            });
        }
        self.rules_in(0..count)
    }

    /// Iterates an explicit index range (a shard).
    pub fn rules_in(
        self: &Arc<Self>,
        range: std::ops::Range<u128>,
    ) -> Result<impl Iterator<Item = Rule>> {
        if let Some(count) = self.rule_count() {
            if range.end > count {
                return Err(Error::Precondition(format!(
                    "shard end {} out of range (family has {count} rules)",
                    range.end
                )));
            }
        }
        let space = Arc::clone(self);
        Ok(range.map(move |i| space.rule_at(i).expect("index in range")))
    }
}

/// A total local rule: one output symbol per canonical ball of the family.
#[derive(Clone)]
pub struct Rule {
    space: Arc<RuleSpace>,
    outputs: Vec<Symbol>,
}

impl PartialEq for Rule {
    fn eq(&self, other: &Self) -> bool {
        self.params() == other.params()
            && self.alphabet() == other.alphabet()
            && self.radius() == other.radius()
            && self.outputs == other.outputs
    }
}

impl Eq for Rule {}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Rule(k={}, |A|={}, r={}, index={:?})",
            self.params().k(),
            self.alphabet().size(),
            self.radius(),
            self.index()
        )
    }
}

impl Rule {
    pub fn from_outputs(space: Arc<RuleSpace>, outputs: Vec<Symbol>) -> Result<Rule> {
        if outputs.len() != space.ball_count() {
            return Err(Error::RuleFile(format!(
                "table has {} entries, family needs {}",
                outputs.len(),
                space.ball_count()
            )));
        }
        for s in &outputs {
            space.alphabet().check(*s)?;
        }
        Ok(Rule { space, outputs })
    }

    pub fn from_fn(
        space: Arc<RuleSpace>,
        mut f: impl FnMut(&CanonicalBall) -> Symbol,
    ) -> Result<Rule> {
        let outputs = space.balls().iter().map(&mut f).collect();
        Rule::from_outputs(space, outputs)
    }

    /// The rule mapping every ball to `s`.
    pub fn constant(space: Arc<RuleSpace>, s: Symbol) -> Result<Rule> {
        space.alphabet().check(s)?;
        let n = space.ball_count();
        Rule::from_outputs(space, vec![s; n])
    }

    /// The rule returning the center symbol.
    pub fn identity(space: Arc<RuleSpace>) -> Result<Rule> {
        Rule::from_fn(space, |b| b.center_symbol())
    }

    /// Binary OR: output 1 iff any label in the ball is 1. Needs |A| = 2.
    pub fn or_rule(space: Arc<RuleSpace>) -> Result<Rule> {
        if space.alphabet().size() != 2 {
            return Err(Error::Mismatch("or_rule needs a binary alphabet".into()));
        }
        Rule::from_fn(space, |b| u8::from(!b.is_all_zero()))
    }

    pub fn space(&self) -> &Arc<RuleSpace> {
        &self.space
    }

    pub fn params(&self) -> TreeParams {
        self.space.params()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.space.alphabet()
    }

    pub fn radius(&self) -> u32 {
        self.space.radius()
    }

    pub fn outputs(&self) -> &[Symbol] {
        &self.outputs
    }

    /// Table entries in enumeration order.
    pub fn table(&self) -> impl Iterator<Item = (&CanonicalBall, Symbol)> {
        self.space
            .balls()
            .iter()
            .zip(self.outputs.iter().copied())
    }

    /// Base-`|A|` table index identifying this rule within its family, when
    /// it fits in `u128`.
    pub fn index(&self) -> Option<u128> {
        let a = self.alphabet().size() as u128;
        let mut acc: u128 = 0;
        for s in self.outputs.iter().rev() {
            acc = acc.checked_mul(a)?.checked_add(*s as u128)?;
        }
        Some(acc)
    }

    /// A rule is quiescent iff the all-zero ball maps to 0.
    pub fn is_quiescent(&self) -> bool {
        debug_assert!(self.space.balls()[0].is_all_zero());
        self.outputs[0] == 0
    }

    pub fn evaluate_canonical(&self, ball: &CanonicalBall) -> Result<Symbol> {
        match self.space.ball_index(ball) {
            Some(i) => Ok(self.outputs[i]),
            None => Err(Error::Mismatch(format!(
                "ball {} does not belong to family k={} r={}",
                ball,
                self.params().k(),
                self.radius()
            ))),
        }
    }

    pub(crate) fn output_of_code(&self, code: &[u8]) -> Symbol {
        let i = self
            .space
            .index_of_code(code)
            .expect("canonical code within family");
        self.outputs[i]
    }

    /// Evaluates the rule at `center` on a total labeling of the
    /// surrounding ball.
    pub fn evaluate(&self, center: &Vertex, labels: &BTreeMap<Vertex, Symbol>) -> Result<Symbol> {
        let ball = canonicalize(
            self.params(),
            self.alphabet(),
            center,
            self.radius(),
            labels,
        )?;
        self.evaluate_canonical(&ball)
    }

    /// Evaluation with labels supplied by a total reader (missing cells are
    /// the reader's business; the simulator passes a default-0 view).
    pub(crate) fn evaluate_reader(
        &self,
        center: &Vertex,
        read: &mut impl FnMut(&Vertex) -> Symbol,
    ) -> Symbol {
        let code = codes::code_from_reader(self.params(), center, self.radius(), read);
        self.output_of_code(&code)
    }
}

/// Which depth shells of the declared ball the table actually reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodReport {
    /// Least radius at which the rule can be re-declared without changing
    /// the induced global map.
    pub effective_radius: u32,
    /// `dependent[d]` is true iff the output depends on the labels at depth
    /// `d` (index 0 is the center).
    pub dependent: Vec<bool>,
}

/// Computes the per-shell dependence flags and the effective radius.
///
/// The minimal neighborhood of an automorphism-invariant rule is a union of
/// spheres, so dependence can be decided one shell at a time: shell `d` is
/// irrelevant iff the table is constant on every class of balls that agree
/// (up to automorphism) everywhere except depth `d`.
pub fn minimal_neighborhood(rule: &Rule) -> NeighborhoodReport {
    let r = rule.radius();
    let grid = codes::TreeGrid::new(rule.params(), r);
    let depth_of: Vec<u32> = (0..grid.len()).map(|i| grid.depth(i)).collect();
    let mut dependent = vec![false; r as usize + 1];
    const ERASED: u16 = u16::MAX;
    for d in 0..=r {
        let mut groups: std::collections::HashMap<Vec<u16>, Symbol> =
            std::collections::HashMap::new();
        for (ball, out) in rule.table() {
            let labels = grid.realize(ball.code(), r);
            let masked: Vec<u16> = labels
                .iter()
                .zip(&depth_of)
                .map(|(s, dep)| if *dep == d { ERASED } else { *s as u16 })
                .collect();
            let key = grid.gather_code(&masked, 0, r);
            if *groups.entry(key).or_insert(out) != out {
                dependent[d as usize] = true;
                break;
            }
        }
    }
    let effective_radius = (1..=r).rev().find(|d| dependent[*d as usize]).unwrap_or(0);
    NeighborhoodReport {
        effective_radius,
        dependent,
    }
}

/// Re-declares a rule at its effective radius; evaluates identically on
/// every configuration.
pub fn reduce_to_effective(rule: &Rule, limits: &Limits) -> Result<Rule> {
    let report = minimal_neighborhood(rule);
    let re = report.effective_radius;
    if re == rule.radius() {
        return Ok(rule.clone());
    }
    let space = RuleSpace::new(rule.params(), rule.alphabet(), re, limits)?;
    let grid = codes::TreeGrid::new(rule.params(), rule.radius());
    let outputs = space
        .balls()
        .iter()
        .map(|ball| {
            // deeper shells are irrelevant; fill them with zeros
            let labels = grid.realize(ball.code(), re);
            rule.output_of_code(&grid.gather_code(&labels, 0, rule.radius()))
        })
        .collect();
    Rule::from_outputs(space, outputs)
}

/// Table of `f after g`: the rule of radius `f.radius + g.radius` obtained
/// by applying `g` at every vertex of the inner ball and then `f` at the
/// center.
pub fn compose(f: &Rule, g: &Rule, limits: &Limits) -> Result<Rule> {
    if f.params() != g.params() || f.alphabet() != g.alphabet() {
        return Err(Error::Mismatch(
            "compose needs rules over the same tree and alphabet".into(),
        ));
    }
    let rf = f.radius();
    let rg = g.radius();
    let r = rf + rg;
    let space = RuleSpace::new(f.params(), f.alphabet(), r, limits)?;
    let grid = codes::TreeGrid::new(f.params(), r);
    let inner = grid.len_to_depth(rf);
    let mut outputs = Vec::with_capacity(space.ball_count());
    let mut inter = vec![0u8; grid.len()];
    for ball in space.balls() {
        let labels = grid.realize(ball.code(), r);
        for (i, slot) in inter.iter_mut().enumerate().take(inner) {
            *slot = g.output_of_code(&grid.gather_code(&labels, i, rg));
        }
        outputs.push(f.output_of_code(&grid.gather_code(&inter, 0, rf)));
    }
    Rule::from_outputs(space, outputs)
}
