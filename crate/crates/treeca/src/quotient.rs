//! The level stratification and the induced one-dimensional CA.
//!
//! Configurations that are constant on each level of the canonical end form
//! a subspace invariant under every tree CA, and on it the tree dynamics
//! reduce to an ordinary CA on the integer line: the window entry at offset
//! `-1` feeds the one inward neighbor, the entry at `+1` the `k-1` outward
//! ones. This module builds that 1D rule by direct table construction (so
//! it is total and independent of quiescence), simulates it, and hosts the
//! horizon-bounded nilpotency semidecisions for both the line and the tree.
//!
//! Nilpotency checks only ever certify "the n-th iterate is the zero map";
//! they never claim non-nilpotency beyond the horizon.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rules::{codes, reduce_to_effective, Alphabet, Limits, Rule, Symbol};
use crate::simulation::engine::DenseRadiusOne;
use crate::topology::{busemann_level, Vertex};

/// Finite-support configuration on the integer line.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OneDimConfig {
    alphabet: Alphabet,
    cells: BTreeMap<i64, Symbol>,
}

impl OneDimConfig {
    pub fn empty(alphabet: Alphabet) -> Self {
        OneDimConfig {
            alphabet,
            cells: BTreeMap::new(),
        }
    }

    pub fn new(alphabet: Alphabet, cells: impl IntoIterator<Item = (i64, Symbol)>) -> Result<Self> {
        let mut out = OneDimConfig::empty(alphabet);
        for (i, s) in cells {
            out.set(i, s)?;
        }
        Ok(out)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn get(&self, i: i64) -> Symbol {
        self.cells.get(&i).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: i64, s: Symbol) -> Result<()> {
        self.alphabet.check(s)?;
        if s == 0 {
            self.cells.remove(&i);
        } else {
            self.cells.insert(i, s);
        }
        Ok(())
    }

    pub fn cells(&self) -> &BTreeMap<i64, Symbol> {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// The shifted configuration `y` with `y(i) = x(i + offset)`.
    pub fn shift(&self, offset: i64) -> OneDimConfig {
        OneDimConfig {
            alphabet: self.alphabet,
            cells: self.cells.iter().map(|(i, s)| (i - offset, *s)).collect(),
        }
    }

    /// Line format: one `level symbol` pair per line; `#` comments and
    /// blank lines ignored.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Self> {
        let mut out = OneDimConfig::empty(alphabet);
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(level), Some(sym), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected \"level symbol\", got {raw:?}"),
                });
            };
            let level: i64 = level.parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("bad level {level:?}"),
            })?;
            let s: Symbol = sym.parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("bad symbol {sym:?}"),
            })?;
            if out.cells.contains_key(&level) {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("duplicate level {level}"),
                });
            }
            out.set(level, s).map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, s) in &self.cells {
            out.push_str(&format!("{i} {s}\n"));
        }
        out
    }
}

/// Window-based local rule on the line: a total table over words of length
/// `2 * radius + 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OneDimRule {
    alphabet: Alphabet,
    radius: u32,
    table: Vec<Symbol>,
}

impl OneDimRule {
    pub fn new(alphabet: Alphabet, radius: u32, table: Vec<Symbol>) -> Result<Self> {
        let len = (alphabet.size() as u64)
            .checked_pow(2 * radius + 1)
            .ok_or(Error::Capacity {
                what: "1D rule table",
                required: u128::MAX,
                cap: u64::MAX as u128,
            })?;
        if table.len() as u64 != len {
            return Err(Error::RuleFile(format!(
                "1D table has {} entries, need {len}",
                table.len()
            )));
        }
        for s in &table {
            alphabet.check(*s)?;
        }
        Ok(OneDimRule {
            alphabet,
            radius,
            table,
        })
    }

    pub fn from_fn(
        alphabet: Alphabet,
        radius: u32,
        mut f: impl FnMut(&[Symbol]) -> Symbol,
        limits: &Limits,
    ) -> Result<Self> {
        let width = 2 * radius + 1;
        let count = (alphabet.size() as u128)
            .checked_pow(width)
            .unwrap_or(u128::MAX);
        if count > limits.words as u128 {
            return Err(Error::Capacity {
                what: "1D window enumeration",
                required: count,
                cap: limits.words as u128,
            });
        }
        let mut table = Vec::with_capacity(count as usize);
        let mut window = vec![0u8; width as usize];
        loop {
            table.push(f(&window));
            if !advance(&mut window, alphabet.size()) {
                break;
            }
        }
        OneDimRule::new(alphabet, radius, table)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn table(&self) -> &[Symbol] {
        &self.table
    }

    /// Output for a window `w[-r..=r]`, given as a slice of length `2r+1`.
    pub fn evaluate_window(&self, window: &[Symbol]) -> Result<Symbol> {
        if window.len() != (2 * self.radius + 1) as usize {
            return Err(Error::Precondition(format!(
                "window length {} does not match radius {}",
                window.len(),
                self.radius
            )));
        }
        let mut idx = 0usize;
        for s in window {
            self.alphabet.check(*s)?;
            idx = idx * self.alphabet.size() as usize + *s as usize;
        }
        Ok(self.table[idx])
    }

    pub fn is_quiescent(&self) -> bool {
        self.table[0] == 0
    }

    pub fn to_json(&self) -> String {
        let width = (2 * self.radius + 1) as usize;
        let mut window = vec![0u8; width];
        let mut entries = Vec::with_capacity(self.table.len());
        for out in &self.table {
            entries.push(OneDimEntryRepr {
                window: window.iter().map(|d| char::from(b'0' + d)).collect(),
                out: *out,
            });
            advance(&mut window, self.alphabet.size());
        }
        let repr = OneDimRuleRepr {
            alphabet_size: self.alphabet.size(),
            radius: self.radius,
            table: entries,
        };
        serde_json::to_string_pretty(&repr).expect("plain data serializes")
    }

    /// Window strings use one digit per cell, so this format carries
    /// alphabets of size at most 10.
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: OneDimRuleRepr = serde_json::from_str(text)?;
        let alphabet = Alphabet::new(repr.alphabet_size)?;
        if alphabet.size() > 10 {
            return Err(Error::RuleFile(
                "window text form carries alphabets of size at most 10".into(),
            ));
        }
        let width = (2 * repr.radius + 1) as usize;
        let len = (alphabet.size() as u64).pow(2 * repr.radius + 1);
        let mut table: Vec<Option<Symbol>> = vec![None; len as usize];
        for entry in &repr.table {
            if entry.window.len() != width || !entry.window.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::RuleFile(format!("bad window {:?}", entry.window)));
            }
            let mut idx = 0usize;
            for b in entry.window.bytes() {
                let d = b - b'0';
                alphabet.check(d)?;
                idx = idx * alphabet.size() as usize + d as usize;
            }
            if table[idx].is_some() {
                return Err(Error::RuleFile(format!(
                    "duplicate window {:?}",
                    entry.window
                )));
            }
            alphabet.check(entry.out)?;
            table[idx] = Some(entry.out);
        }
        let table: Vec<Symbol> = table
            .into_iter()
            .enumerate()
            .map(|(i, slot)| {
                slot.ok_or_else(|| Error::RuleFile(format!("missing window at index {i}")))
            })
            .collect::<Result<_>>()?;
        OneDimRule::new(alphabet, repr.radius, table)
    }
}

#[derive(Serialize, Deserialize)]
struct OneDimRuleRepr {
    alphabet_size: u8,
    radius: u32,
    table: Vec<OneDimEntryRepr>,
}

#[derive(Serialize, Deserialize)]
struct OneDimEntryRepr {
    window: String,
    out: Symbol,
}

/// Odometer over base-`base` words, most significant digit first.
fn advance(word: &mut [u8], base: u8) -> bool {
    for slot in word.iter_mut().rev() {
        if *slot + 1 < base {
            *slot += 1;
            return true;
        }
        *slot = 0;
    }
    false
}

/// Expands a line configuration onto tree vertices: the label of `t` is the
/// symbol at level `b(t)`.
pub fn phi_expand(x: &OneDimConfig, region: &[Vertex]) -> BTreeMap<Vertex, Symbol> {
    region
        .iter()
        .map(|t| (t.clone(), x.get(busemann_level(t))))
        .collect()
}

/// The 1D rule induced on level-constant configurations.
///
/// Entry for window `w[-r..=r]`: the tree rule evaluated on the radius-r
/// ball whose every vertex at level `i` carries `w[i]`. The radius never
/// increases, and quiescence is not required.
pub fn quotient_rule(rule: &Rule, limits: &Limits) -> Result<OneDimRule> {
    let r = rule.radius();
    let root = Vertex::root();
    OneDimRule::from_fn(
        rule.alphabet(),
        r,
        |window| {
            rule.evaluate_reader(&root, &mut |v| {
                window[(busemann_level(v) + r as i64) as usize]
            })
        },
        limits,
    )
}

/// Sliding-window application to a finite line configuration. Requires a
/// quiescent rule for finite-support closure.
pub fn oned_step(rule: &OneDimRule, x: &OneDimConfig) -> Result<OneDimConfig> {
    if rule.alphabet() != x.alphabet() {
        return Err(Error::Mismatch(
            "rule and configuration alphabets differ".into(),
        ));
    }
    if !rule.is_quiescent() {
        return Err(Error::NonQuiescent);
    }
    let mut out = OneDimConfig::empty(x.alphabet);
    let Some((&lo, _)) = x.cells.first_key_value() else {
        return Ok(out);
    };
    let (&hi, _) = x.cells.last_key_value().unwrap();
    let r = rule.radius() as i64;
    let mut window = vec![0u8; (2 * r + 1) as usize];
    for i in lo - r..=hi + r {
        for (j, slot) in window.iter_mut().enumerate() {
            *slot = x.get(i - r + j as i64);
        }
        let s = rule.evaluate_window(&window)?;
        if s != 0 {
            out.cells.insert(i, s);
        }
    }
    Ok(out)
}

/// Exhaustive horizon check on the line: true iff every word of length
/// `2nr + 1` maps to 0 under `n` window applications, i.e. the n-th iterate
/// is the zero map.
pub fn oned_nilpotent_at(rule: &OneDimRule, n: u32, limits: &Limits) -> Result<bool> {
    if n == 0 {
        return Err(Error::Precondition("nilpotency horizon must be >= 1".into()));
    }
    let r = rule.radius();
    let width = 2 * n as u64 * r as u64 + 1;
    let count = u32::try_from(width)
        .ok()
        .and_then(|w| (rule.alphabet().size() as u128).checked_pow(w))
        .unwrap_or(u128::MAX);
    if count > limits.words as u128 {
        return Err(Error::Capacity {
            what: "1D word enumeration",
            required: count,
            cap: limits.words as u128,
        });
    }
    let mut word = vec![0u8; width as usize];
    loop {
        let mut cur = word.clone();
        for _ in 0..n {
            cur = cur
                .windows((2 * r + 1) as usize)
                .map(|w| rule.evaluate_window(w).expect("valid window"))
                .collect();
        }
        debug_assert_eq!(cur.len(), 1);
        if cur[0] != 0 {
            return Ok(false);
        }
        if !advance(&mut word, rule.alphabet().size()) {
            return Ok(true);
        }
    }
}

/// Horizon check on the tree: true iff the n-th iterate of the global map
/// is the zero map, equivalently iff the n-fold self-composition has a
/// constant-0 table.
///
/// The rule is first reduced to its effective radius. Depends-only-on-center
/// rules are iterated as a map on symbols; for effective radius 1 the check
/// runs on the reachable image patterns (a bottom-up sweep whose state
/// space stays far below the canonical-ball count of the composed radius);
/// larger radii enumerate the composed canonical balls directly under the
/// cap.
pub fn tree_nilpotent_at(rule: &Rule, n: u32, limits: &Limits) -> Result<bool> {
    if n == 0 {
        return Err(Error::Precondition("nilpotency horizon must be >= 1".into()));
    }
    let reduced = reduce_to_effective(rule, limits)?;
    if reduced.radius() == 0 {
        // the global map acts cellwise
        return Ok(reduced.alphabet().symbols().all(|a| {
            let mut v = a;
            for _ in 0..n {
                v = reduced.outputs()[v as usize];
            }
            v == 0
        }));
    }
    if n == 1 {
        return Ok(reduced.outputs().iter().all(|s| *s == 0));
    }
    if !reduced.is_quiescent() {
        // a zero n-th iterate forces a zero (n+1)-th iterate, and applying
        // both to the zero configuration forces the all-zero ball to 0
        return Ok(false);
    }
    if reduced.radius() == 1 {
        // a surviving small configuration refutes without the full sweep
        if small_witness_survives(&reduced, n, limits)? {
            return Ok(false);
        }
        nilpotent_by_image_dp(&reduced, n, limits)
    } else {
        nilpotent_by_enumeration(&reduced, n, limits)
    }
}

/// True iff some configuration supported in the radius-1 ball is still
/// nonzero after `n` steps, which proves the n-th iterate is not the zero
/// map. Finding nothing decides nothing.
fn small_witness_survives(rule: &Rule, n: u32, limits: &Limits) -> Result<bool> {
    debug_assert!(rule.is_quiescent() && rule.radius() == 1);
    let ball = crate::topology::ball(rule.params(), &Vertex::root(), 1)?;
    if (rule.alphabet().size() as u128).pow(ball.len() as u32) > 4096 {
        return Ok(false);
    }
    let root = vec![Vertex::root()];
    let mut labels = vec![0u8; ball.len()];
    loop {
        let init: Vec<(Vertex, Symbol)> = ball
            .iter()
            .zip(&labels)
            .map(|(v, s)| (v.clone(), *s))
            .collect();
        let stats = crate::simulation::engine::run_radius_one(rule, &init, &root, 0, n, limits)?;
        if !stats.empty_by_step[n as usize] {
            return Ok(true);
        }
        if !advance(&mut labels, rule.alphabet().size()) {
            return Ok(false);
        }
    }
}

/// Direct route: every canonical ball of radius `n * r`, realized and
/// iterated `n` times; the center must come out 0.
pub(crate) fn nilpotent_by_enumeration(rule: &Rule, n: u32, limits: &Limits) -> Result<bool> {
    let params = rule.params();
    let a = rule.alphabet().size() as u32;
    let r = rule.radius();
    let total = n.checked_mul(r).ok_or(Error::Capacity {
        what: "composed canonical ball enumeration",
        required: u128::MAX,
        cap: limits.canonical_balls as u128,
    })?;
    let count = codes::count_codes(params.k(), a, total).unwrap_or(u128::MAX);
    if count > limits.canonical_balls as u128 {
        return Err(Error::Capacity {
            what: "composed canonical ball enumeration",
            required: count,
            cap: limits.canonical_balls as u128,
        });
    }
    let grid = codes::TreeGrid::new(params, total);
    let all = codes::enumerate_codes(params.k(), a, total, limits)?;
    let mut next = vec![0u8; grid.len()];
    for code in all {
        let mut cur = grid.realize(&code, total);
        let mut radius = total;
        for _ in 0..n {
            radius -= r;
            for i in 0..grid.len_to_depth(radius) {
                next[i] = rule.output_of_code(&grid.gather_code(&cur, i, r));
            }
            cur[..grid.len_to_depth(radius)].copy_from_slice(&next[..grid.len_to_depth(radius)]);
        }
        if cur[0] != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Image-pattern route for radius-1 rules.
///
/// The n-th iterate is zero iff every radius-1 pattern occurring in images
/// of the (n-1)-th iterate maps to 0. Those patterns are obtained from the
/// exact set of radius-(n-1) patterns of *first* images — computed by a
/// bottom-up subtree sweep — by applying the rule pointwise n-2 more times.
pub(crate) fn nilpotent_by_image_dp(rule: &Rule, n: u32, limits: &Limits) -> Result<bool> {
    debug_assert_eq!(rule.radius(), 1);
    debug_assert!(n >= 2);
    let dense = DenseRadiusOne::new(rule);
    let eval = |center: Symbol, nbrs: &mut Vec<Symbol>| dense.eval(center, nbrs);
    let mut patterns = image_patterns(rule, n - 1, limits)?;
    for rho in (2..n).rev() {
        patterns = patterns
            .iter()
            .map(|code| shrink_pattern(code, rule.params().k(), rho, &eval))
            .collect();
    }
    Ok(patterns.iter().all(|code| rule.output_of_code(code) == 0))
}

/// The exact set of canonical radius-`rho` patterns of first images,
/// `{ f(x) restricted to ball(root, rho) : x over ball(root, rho + 1) }`,
/// for a radius-1 rule.
///
/// Bottom-up over subtree depths: the state of a subtree is its root's
/// input symbol together with the map from the parent's input symbol to the
/// canonical image pattern of the subtree. Sibling subtrees are labeled
/// independently, so any multiset of realizable child states is realizable,
/// and states merge one level at a time.
pub(crate) fn image_patterns(rule: &Rule, rho: u32, limits: &Limits) -> Result<BTreeSet<Vec<u8>>> {
    debug_assert_eq!(rule.radius(), 1);
    debug_assert!(rho >= 1);
    let k = rule.params().k() as usize;
    let symbols: Vec<Symbol> = rule.alphabet().symbols().collect();
    let dense = DenseRadiusOne::new(rule);

    // state: (input symbol at the subtree root, image pattern per parent symbol)
    type State = (Symbol, Vec<Vec<u8>>);
    // below the pattern depth only the input symbol matters
    let mut states: BTreeSet<State> = symbols
        .iter()
        .map(|&x| (x, vec![Vec::new(); symbols.len()]))
        .collect();

    let cap_check = |count: Option<u128>| -> Result<()> {
        let required = count.unwrap_or(u128::MAX);
        if required > limits.canonical_balls as u128 {
            return Err(Error::Capacity {
                what: "image pattern sweep",
                required,
                cap: limits.canonical_balls as u128,
            });
        }
        Ok(())
    };

    let combine =
        |states: &BTreeSet<State>, arity: usize, at_root: bool| -> Result<BTreeSet<State>> {
            let mut merged = BTreeSet::new();
            for &x in &symbols {
                // what a child contributes once the parent symbol is fixed
                let proj: Vec<(Symbol, Vec<u8>)> = states
                    .iter()
                    .map(|(cx, g)| (*cx, g[x as usize].clone()))
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                cap_check(codes::multiset_count(proj.len() as u128, arity as u32))?;
                codes::for_each_multiset(proj.len(), arity, |ix| {
                    let xs: Vec<Symbol> = ix.iter().map(|&i| proj[i].0).collect();
                    let mut kid_codes: Vec<&[u8]> =
                        ix.iter().map(|&i| proj[i].1.as_slice()).collect();
                    kid_codes.sort_unstable();
                    let mut body = Vec::new();
                    for kc in &kid_codes {
                        body.extend_from_slice(kc);
                    }
                    if at_root {
                        let mut nbrs = xs.clone();
                        let val = dense.eval(x, &mut nbrs);
                        let mut code = vec![val];
                        code.extend_from_slice(&body);
                        merged.insert((x, vec![code]));
                    } else {
                        let g: Vec<Vec<u8>> = symbols
                            .iter()
                            .map(|&a| {
                                let mut nbrs = xs.clone();
                                nbrs.push(a);
                                let val = dense.eval(x, &mut nbrs);
                                let mut code = vec![val];
                                code.extend_from_slice(&body);
                                code
                            })
                            .collect();
                        merged.insert((x, g));
                    }
                });
            }
            Ok(merged)
        };

    // levels rho down to 1 join k-1 children each
    for _ in 1..=rho {
        states = combine(&states, k - 1, false)?;
    }
    // the root joins k subtrees and has no parent
    let root_states = combine(&states, k, true)?;
    Ok(root_states
        .into_iter()
        .map(|(_, mut g)| g.remove(0))
        .collect())
}

/// One pointwise application of a radius-1 rule to a canonical pattern,
/// shrinking its radius by one.
fn shrink_pattern(
    code: &[u8],
    k: u32,
    rho: u32,
    eval: &impl Fn(Symbol, &mut Vec<Symbol>) -> Symbol,
) -> Vec<u8> {
    struct Node {
        sym: u8,
        kids: Vec<Node>,
    }
    fn decode(code: &[u8], pos: &mut usize, k: u32, depth_left: u32, center: bool) -> Node {
        let sym = code[*pos];
        *pos += 1;
        let mut kids = Vec::new();
        if depth_left > 0 {
            let arity = if center { k } else { k - 1 };
            for _ in 0..arity {
                kids.push(decode(code, pos, k, depth_left - 1, false));
            }
        }
        Node { sym, kids }
    }
    fn shrink(
        node: &Node,
        parent: Option<u8>,
        depth: u32,
        rho: u32,
        eval: &impl Fn(Symbol, &mut Vec<Symbol>) -> Symbol,
    ) -> Vec<u8> {
        let mut nbrs: Vec<u8> = node.kids.iter().map(|c| c.sym).collect();
        if let Some(p) = parent {
            nbrs.push(p);
        }
        let val = eval(node.sym, &mut nbrs);
        let mut out = vec![val];
        if depth + 1 < rho {
            let mut kid_codes: Vec<Vec<u8>> = node
                .kids
                .iter()
                .map(|c| shrink(c, Some(node.sym), depth + 1, rho, eval))
                .collect();
            kid_codes.sort_unstable();
            for kc in kid_codes {
                out.extend_from_slice(&kc);
            }
        }
        out
    }
    let mut pos = 0;
    let root = decode(code, &mut pos, k, rho, true);
    debug_assert_eq!(pos, code.len());
    shrink(&root, None, 0, rho, eval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::RuleSpace;
    use crate::simulation::oracle_step;
    use crate::topology::{self, TreeParams};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::sync::Arc;

    fn p(k: u32) -> TreeParams {
        TreeParams::new(k).unwrap()
    }

    fn a2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn space(k: u32, n: u8, r: u32) -> Arc<RuleSpace> {
        RuleSpace::new(p(k), Alphabet::new(n).unwrap(), r, &Limits::default()).unwrap()
    }

    fn random_rule(space: &Arc<RuleSpace>, quiescent: bool, rng: &mut StdRng) -> Rule {
        let n = space.alphabet().size();
        let outputs = (0..space.ball_count())
            .map(|i| {
                if quiescent && i == 0 {
                    0
                } else {
                    rng.gen_range(0..n)
                }
            })
            .collect();
        Rule::from_outputs(Arc::clone(space), outputs).unwrap()
    }

    fn oned(cells: &[(i64, Symbol)]) -> OneDimConfig {
        OneDimConfig::new(a2(), cells.iter().copied()).unwrap()
    }

    #[test]
    fn phi_expand_examples() {
        let region = topology::ball(p(3), &Vertex::root(), 1).unwrap();
        let zero = OneDimConfig::empty(a2());
        assert!(phi_expand(&zero, &region).values().all(|s| *s == 0));

        let x = oned(&[(0, 1)]);
        let region = topology::ball(p(3), &Vertex::root(), 2).unwrap();
        let labels = phi_expand(&x, &region);
        assert_eq!(labels[&Vertex::parse("e").unwrap()], 1);
        assert_eq!(labels[&Vertex::parse("01").unwrap()], 1);
        assert_eq!(labels[&Vertex::parse("0").unwrap()], 0);
        assert_eq!(labels[&Vertex::parse("1").unwrap()], 0);
    }

    #[test]
    fn phi_expand_shift_consistency() {
        let region = topology::ball(p(3), &Vertex::root(), 3).unwrap();
        let x = oned(&[(-1, 1), (1, 1)]);
        let shifted = phi_expand(&x.shift(1), &region);
        let direct = phi_expand(&x, &region);
        for t in &region {
            // shifting the line by one lowers every read level by one
            assert_eq!(shifted[t], x.get(busemann_level(t) + 1));
            assert_eq!(direct[t], x.get(busemann_level(t)));
        }
    }

    #[test]
    fn quotient_rule_examples() {
        let d = Limits::default();
        let s1 = space(3, 2, 1);
        let zero = Rule::constant(Arc::clone(&s1), 0).unwrap();
        let id = Rule::identity(Arc::clone(&s1)).unwrap();
        let or = Rule::or_rule(Arc::clone(&s1)).unwrap();

        let q = quotient_rule(&zero, &d).unwrap();
        assert!(q.table().iter().all(|s| *s == 0));

        let q = quotient_rule(&id, &d).unwrap();
        for (abc, out) in all_windows().zip(q.table()) {
            assert_eq!(*out, abc[1], "identity keeps the center");
        }

        let q = quotient_rule(&or, &d).unwrap();
        for (abc, out) in all_windows().zip(q.table()) {
            assert_eq!(*out, u8::from(abc.iter().any(|s| *s == 1)));
        }
        assert_eq!(q.radius(), or.radius(), "the radius never increases");

        fn all_windows() -> impl Iterator<Item = [u8; 3]> {
            (0..8u8).map(|i| [(i >> 2) & 1, (i >> 1) & 1, i & 1])
        }
    }

    #[test]
    fn quotient_window_feeds_one_inward_and_k_minus_one_outward() {
        let d = Limits::default();
        let s1 = space(3, 2, 1);
        // output 1 iff exactly one neighbor carries 1
        let rule = Rule::from_fn(Arc::clone(&s1), |ball| {
            let ones: u8 = ball.code()[1..].iter().sum();
            u8::from(ones == 1)
        })
        .unwrap();
        let q = quotient_rule(&rule, &d).unwrap();
        // window (1,0,0): the single inward neighbor carries 1
        assert_eq!(q.evaluate_window(&[1, 0, 0]).unwrap(), 1);
        // window (0,0,1): both outward neighbors carry 1
        assert_eq!(q.evaluate_window(&[0, 0, 1]).unwrap(), 0);
    }

    #[test]
    fn oned_step_examples() {
        let d = Limits::default();
        let alpha = a2();
        let zero = OneDimRule::from_fn(alpha, 1, |_| 0, &d).unwrap();
        let id = OneDimRule::from_fn(alpha, 1, |w| w[1], &d).unwrap();
        let or = OneDimRule::from_fn(alpha, 1, |w| u8::from(w.iter().any(|s| *s == 1)), &d).unwrap();

        let x = oned(&[(0, 1)]);
        assert!(oned_step(&zero, &x).unwrap().is_empty());
        assert_eq!(oned_step(&id, &x).unwrap(), x);
        let y = oned_step(&or, &x).unwrap();
        assert_eq!(y, oned(&[(-1, 1), (0, 1), (1, 1)]));

        let non_quiescent = OneDimRule::from_fn(alpha, 1, |_| 1, &d).unwrap();
        assert!(matches!(
            oned_step(&non_quiescent, &x),
            Err(Error::NonQuiescent)
        ));
    }

    #[test]
    fn oned_step_commutes_with_shift() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..50 {
            let mut table: Vec<u8> = (0..8).map(|_| rng.gen_range(0..2)).collect();
            table[0] = 0;
            let rule = OneDimRule::new(a2(), 1, table).unwrap();
            let mut x = OneDimConfig::empty(a2());
            for _ in 0..rng.gen_range(1..5) {
                x.set(rng.gen_range(-5..5), 1).unwrap();
            }
            let lhs = oned_step(&rule, &x.shift(1)).unwrap();
            let rhs = oned_step(&rule, &x).unwrap().shift(1);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn oned_nilpotency_examples() {
        let d = Limits::default();
        let alpha = a2();
        let zero = OneDimRule::from_fn(alpha, 1, |_| 0, &d).unwrap();
        let id = OneDimRule::from_fn(alpha, 1, |w| w[1], &d).unwrap();
        assert!(oned_nilpotent_at(&zero, 1, &d).unwrap());
        assert!(!oned_nilpotent_at(&id, 1, &d).unwrap());
        assert!(!oned_nilpotent_at(&id, 3, &d).unwrap());

        // constant-0 in disguise: a pointwise contradiction
        let disguised = OneDimRule::from_fn(alpha, 1, |w| w[0] & !w[0], &d).unwrap();
        assert!(oned_nilpotent_at(&disguised, 1, &d).unwrap());

        let tight = Limits::uniform(4);
        assert!(matches!(
            oned_nilpotent_at(&id, 2, &tight),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn tree_nilpotency_examples() {
        let d = Limits::default();
        let s1 = space(3, 2, 1);
        let zero = Rule::constant(Arc::clone(&s1), 0).unwrap();
        let id = Rule::identity(Arc::clone(&s1)).unwrap();
        for n in 1..=4 {
            assert!(tree_nilpotent_at(&zero, n, &d).unwrap());
            assert!(!tree_nilpotent_at(&id, n, &d).unwrap());
        }
        let or = Rule::or_rule(Arc::clone(&s1)).unwrap();
        for n in 1..=4 {
            assert!(!tree_nilpotent_at(&or, n, &d).unwrap());
        }
    }

    #[test]
    fn image_patterns_match_brute_force() {
        let d = Limits::default();
        let mut rng = StdRng::seed_from_u64(29);
        for (k, rho) in [(2u32, 1u32), (2, 2), (3, 1)] {
            let s1 = space(k, 2, 1);
            let grid = codes::TreeGrid::new(p(k), rho + 1);
            for _ in 0..6 {
                let rule = random_rule(&s1, false, &mut rng);
                let dp = image_patterns(&rule, rho, &d).unwrap();
                // brute force over every input labeling of ball(root, rho+1)
                let mut brute: BTreeSet<Vec<u8>> = BTreeSet::new();
                let mut labels = vec![0u8; grid.len()];
                let mut image = vec![0u8; grid.len()];
                loop {
                    for i in 0..grid.len_to_depth(rho) {
                        image[i] = rule.output_of_code(&grid.gather_code(&labels, i, 1));
                    }
                    brute.insert(grid.gather_code(&image, 0, rho));
                    if !advance(&mut labels, 2) {
                        break;
                    }
                }
                assert_eq!(dp, brute, "k={k} rho={rho}");
            }
        }
    }

    #[test]
    fn dp_and_enumeration_routes_agree() {
        let d = Limits::default();
        let mut rng = StdRng::seed_from_u64(31);
        for k in [2u32, 3] {
            let s1 = space(k, 2, 1);
            for _ in 0..30 {
                let rule = random_rule(&s1, true, &mut rng);
                for n in 2..=3u32 {
                    let via_dp = nilpotent_by_image_dp(&rule, n, &d).unwrap();
                    let via_enum = nilpotent_by_enumeration(&rule, n, &d).unwrap();
                    assert_eq!(via_dp, via_enum, "k={k} n={n} rule {:?}", rule.index());
                }
            }
        }
    }

    #[test]
    fn non_quiescent_rules_are_never_nilpotent() {
        // the fast path agrees with the full routes
        let d = Limits::default();
        let mut rng = StdRng::seed_from_u64(43);
        let s1 = space(3, 2, 1);
        for _ in 0..15 {
            let mut outputs: Vec<u8> = (0..s1.ball_count()).map(|_| rng.gen_range(0..2)).collect();
            outputs[0] = 1;
            let rule = Rule::from_outputs(Arc::clone(&s1), outputs).unwrap();
            for n in 1..=3u32 {
                assert!(!tree_nilpotent_at(&rule, n, &d).unwrap());
                if n >= 2 {
                    assert!(!nilpotent_by_image_dp(&rule, n, &d).unwrap());
                    assert!(!nilpotent_by_enumeration(&rule, n, &d).unwrap());
                }
            }
        }
    }

    #[test]
    fn nilpotency_is_monotone_in_the_horizon() {
        let d = Limits::default();
        let s1 = space(3, 2, 1);
        for rule in s1.rules(&d).unwrap() {
            let mut seen = false;
            for n in 1..=4 {
                let now = tree_nilpotent_at(&rule, n, &d).unwrap();
                assert!(
                    !seen || now,
                    "rule {:?} lost nilpotency at n={n}",
                    rule.index()
                );
                seen = now;
            }
        }
    }

    #[test]
    fn nilpotency_transfers_to_the_quotient() {
        let d = Limits::default();
        let s1 = space(3, 2, 1);
        for rule in s1.rules(&d).unwrap() {
            if !rule.is_quiescent() {
                continue;
            }
            for n in 1..=3u32 {
                if tree_nilpotent_at(&rule, n, &d).unwrap() {
                    let q = quotient_rule(&rule, &d).unwrap();
                    assert!(
                        oned_nilpotent_at(&q, n, &d).unwrap(),
                        "rule {:?} nilpotent at {n} but quotient is not",
                        rule.index()
                    );
                    break;
                }
            }
        }
    }

    /// Tree simulation of an expanded line configuration, read back along
    /// the levels, equals the 1D simulation; and every intermediate image
    /// stays constant on levels.
    #[test]
    fn conjugacy_with_tree_simulation() {
        let d = Limits::default();
        let mut rng = StdRng::seed_from_u64(37);
        for k in [2u32, 3] {
            let s1 = space(k, 2, 1);
            for _ in 0..12 {
                let rule = random_rule(&s1, true, &mut rng);
                let q = quotient_rule(&rule, &d).unwrap();
                let mut x = OneDimConfig::empty(a2());
                for _ in 0..rng.gen_range(1..4) {
                    x.set(rng.gen_range(-2..=2), 1).unwrap();
                }
                let n = 3u32;
                let truncation = 2 + 2 * n;

                let region = topology::ball(p(k), &Vertex::root(), truncation).unwrap();
                let mut labels = phi_expand(&x, &region);
                let mut y1d = x.clone();
                for step_no in 1..=n {
                    labels = oracle_step(&rule, &labels, truncation - (step_no - 1)).unwrap();
                    y1d = oned_step(&q, &y1d).unwrap();
                    // image constant on levels within the valid interior
                    let mut per_level: BTreeMap<i64, Symbol> = BTreeMap::new();
                    for (t, s) in &labels {
                        let lvl = busemann_level(t);
                        match per_level.get(&lvl) {
                            None => {
                                per_level.insert(lvl, *s);
                            }
                            Some(prev) => assert_eq!(prev, s, "level {lvl} not constant"),
                        }
                    }
                }
                for (t, s) in &labels {
                    assert_eq!(*s, y1d.get(busemann_level(t)), "at {t}");
                }
            }
        }
    }

    #[test]
    fn oned_rule_json_roundtrip() {
        let d = Limits::default();
        let or = OneDimRule::from_fn(a2(), 1, |w| u8::from(w.iter().any(|s| *s == 1)), &d).unwrap();
        let text = or.to_json();
        assert_eq!(OneDimRule::from_json(&text).unwrap(), or);

        // missing and duplicate windows are rejected
        let mut repr: serde_json::Value = serde_json::from_str(&text).unwrap();
        let table = repr["table"].as_array().unwrap().clone();
        repr["table"] = serde_json::Value::Array(table[1..].to_vec());
        assert!(OneDimRule::from_json(&serde_json::to_string(&repr).unwrap()).is_err());
        let mut dup = table.clone();
        dup[0] = dup[1].clone();
        repr["table"] = serde_json::Value::Array(dup);
        assert!(OneDimRule::from_json(&serde_json::to_string(&repr).unwrap()).is_err());
    }

    #[test]
    fn oned_config_text_roundtrip() {
        let x = oned(&[(-3, 1), (0, 1), (7, 1)]);
        let text = x.to_text();
        assert_eq!(OneDimConfig::parse(&text, a2()).unwrap(), x);
        assert!(OneDimConfig::parse("0 1\n0 1\n", a2()).is_err());
        assert!(OneDimConfig::parse("x 1\n", a2()).is_err());
    }
}
