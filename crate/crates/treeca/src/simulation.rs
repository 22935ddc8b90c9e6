//! Finite-support configurations, the disjoint-support sum, finite
//! automorphism descriptions, light-cone simulation, and a truncated-tree
//! brute-force oracle.
//!
//! The simulator only accepts quiescent rules: a nonzero image of the
//! all-zero ball would light up the entire tree and finite supports would
//! not stay finite. The truncated oracle has no such restriction.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rand::Rng;

use crate::error::{Error, Result};
use crate::rules::{codes, Alphabet, Limits, Rule, Symbol};
use crate::topology::{self, neighbors_unchecked, TreeParams, Vertex};

/// A configuration with finite support: only nonzero symbols are stored,
/// every absent vertex is 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteConfig {
    params: TreeParams,
    alphabet: Alphabet,
    cells: BTreeMap<Vertex, Symbol>,
}

impl FiniteConfig {
    pub fn empty(params: TreeParams, alphabet: Alphabet) -> Self {
        FiniteConfig {
            params,
            alphabet,
            cells: BTreeMap::new(),
        }
    }

    /// Builds a configuration, validating addresses and symbols. Explicit
    /// zeros are dropped.
    pub fn new(
        params: TreeParams,
        alphabet: Alphabet,
        cells: impl IntoIterator<Item = (Vertex, Symbol)>,
    ) -> Result<Self> {
        let mut config = FiniteConfig::empty(params, alphabet);
        for (v, s) in cells {
            config.set(v, s)?;
        }
        Ok(config)
    }

    pub fn params(&self) -> TreeParams {
        self.params
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn get(&self, v: &Vertex) -> Symbol {
        self.cells.get(v).copied().unwrap_or(0)
    }

    pub fn set(&mut self, v: Vertex, s: Symbol) -> Result<()> {
        v.validate(self.params)?;
        self.alphabet.check(s)?;
        if s == 0 {
            self.cells.remove(&v);
        } else {
            self.cells.insert(v, s);
        }
        Ok(())
    }

    /// Support vertices in address order.
    pub fn support(&self) -> impl Iterator<Item = &Vertex> {
        self.cells.keys()
    }

    pub fn support_size(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &BTreeMap<Vertex, Symbol> {
        &self.cells
    }

    /// Line format: one `vertex symbol` pair per line (`e 1` for the root);
    /// blank lines and `#` comments are ignored.
    pub fn parse(text: &str, params: TreeParams, alphabet: Alphabet) -> Result<Self> {
        let mut config = FiniteConfig::empty(params, alphabet);
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(addr), Some(sym), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected \"vertex symbol\", got {raw:?}"),
                });
            };
            let v = Vertex::parse(addr).map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
            let s: Symbol = sym.parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("bad symbol {sym:?}"),
            })?;
            if config.cells.contains_key(&v) {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("duplicate vertex {v}"),
                });
            }
            config.set(v, s).map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(config)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (v, s) in &self.cells {
            out.push_str(&format!("{v} {s}\n"));
        }
        out
    }
}

/// One application of the global map to a finite configuration.
///
/// Every vertex within distance `radius` of the support is re-evaluated;
/// everything else keeps reading an all-zero ball and stays 0 by
/// quiescence, so `supp(step(x)) ⊆ ball(supp(x), radius)`.
pub fn step(rule: &Rule, x: &FiniteConfig) -> Result<FiniteConfig> {
    check_rule_config(rule, x)?;
    if !rule.is_quiescent() {
        return Err(Error::NonQuiescent);
    }
    let mut candidates: BTreeSet<Vertex> = BTreeSet::new();
    for s in x.support() {
        candidates.extend(topology::ball(x.params, s, rule.radius())?);
    }
    let mut out = FiniteConfig::empty(x.params, x.alphabet);
    for t in candidates {
        let s = rule.evaluate_reader(&t, &mut |v| x.get(v));
        if s != 0 {
            out.cells.insert(t, s);
        }
    }
    Ok(out)
}

fn check_rule_config(rule: &Rule, x: &FiniteConfig) -> Result<()> {
    if rule.params() != x.params || rule.alphabet() != x.alphabet {
        return Err(Error::Mismatch(
            "rule and configuration disagree on k or alphabet".into(),
        ));
    }
    Ok(())
}

/// A simulated orbit segment: `states[0]` is the initial configuration and
/// `states[n+1] = step(rule, states[n])`. `profile[n]` is the maximum
/// distance of the step-`n` support from the hull of the initial support
/// (from the single support vertex when there is only one), absent when the
/// support is empty.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub states: Vec<FiniteConfig>,
    pub profile: Vec<Option<u32>>,
}

/// Runs `n` steps. The result has `n + 1` states.
pub fn run(rule: &Rule, x: &FiniteConfig, n: u32) -> Result<Trajectory> {
    let reference = reference_set(x)?;
    let mut states = Vec::with_capacity(n as usize + 1);
    let mut profile = Vec::with_capacity(n as usize + 1);
    states.push(x.clone());
    profile.push(excess(&reference, x));
    for _ in 0..n {
        let next = step(rule, states.last().unwrap())?;
        profile.push(excess(&reference, &next));
        states.push(next);
    }
    Ok(Trajectory { states, profile })
}

pub(crate) fn reference_set(x: &FiniteConfig) -> Result<Vec<Vertex>> {
    let support: BTreeSet<Vertex> = x.support().cloned().collect();
    Ok(if support.len() >= 2 {
        topology::hull_decomposition(x.params, &support)?
            .hull()
            .iter()
            .cloned()
            .collect()
    } else {
        support.into_iter().collect()
    })
}

fn excess(reference: &[Vertex], x: &FiniteConfig) -> Option<u32> {
    if x.is_empty() || reference.is_empty() {
        return None;
    }
    x.support()
        .map(|t| {
            reference
                .iter()
                .map(|s| topology::distance(t, s))
                .min()
                .unwrap()
        })
        .max()
}

/// Max distance of each step's support from the hull of the initial
/// support; `n + 1` entries, `Some(0)` at step 0 for nonempty input.
pub fn support_radius_profile(rule: &Rule, x: &FiniteConfig, n: u32) -> Result<Vec<Option<u32>>> {
    Ok(run(rule, x, n)?.profile)
}

/// Least `n <= horizon` with `fⁿ(x) = 0`, if any.
pub fn mortality(rule: &Rule, x: &FiniteConfig, horizon: u32) -> Result<Option<u32>> {
    let mut current = x.clone();
    for n in 0..=horizon {
        if current.is_empty() {
            return Ok(Some(n));
        }
        if n < horizon {
            current = step(rule, &current)?;
        }
    }
    Ok(None)
}

/// Cellwise sum of configurations with disjoint supports.
pub fn disjoint_sum(x: &FiniteConfig, y: &FiniteConfig) -> Result<FiniteConfig> {
    if x.params != y.params || x.alphabet != y.alphabet {
        return Err(Error::Mismatch("summands disagree on k or alphabet".into()));
    }
    let mut out = x.clone();
    for (v, s) in &y.cells {
        if out.cells.insert(v.clone(), *s).is_some() {
            return Err(Error::SupportOverlap(v.to_string()));
        }
    }
    Ok(out)
}

/// A finitely described automorphism of the tree.
///
/// The description sends the root address to `anchor_image` and, walking
/// outward from the root, permutes the outward edges at each described
/// vertex; beyond `depth` the map continues order-preservingly. Any choice
/// of permutations yields a genuine automorphism; the `depth` bound is the
/// contract for which vertices the description is considered valid on.
#[derive(Clone, Debug)]
pub struct AutomorphismDescription {
    params: TreeParams,
    anchor_image: Vertex,
    depth: u32,
    perms: BTreeMap<Vertex, Vec<u8>>,
}

impl AutomorphismDescription {
    /// Validates the description: the permutation at the root has `k`
    /// entries, every other one `k - 1`, keys lie strictly inside `depth`.
    pub fn new(
        params: TreeParams,
        anchor_image: Vertex,
        depth: u32,
        perms: BTreeMap<Vertex, Vec<u8>>,
    ) -> Result<Self> {
        anchor_image.validate(params)?;
        for (v, perm) in &perms {
            v.validate(params)?;
            if v.len() >= depth {
                return Err(Error::Precondition(format!(
                    "permutation key {v} at or beyond description depth {depth}"
                )));
            }
            let want = if v.is_root() {
                params.k()
            } else {
                params.k() - 1
            } as usize;
            let mut seen = vec![false; want];
            if perm.len() != want
                || !perm.iter().all(|i| {
                    (*i as usize) < want && !std::mem::replace(&mut seen[*i as usize], true)
                })
            {
                return Err(Error::Precondition(format!(
                    "bad edge permutation at {v}: need a permutation of {want} outward edges"
                )));
            }
        }
        Ok(AutomorphismDescription {
            params,
            anchor_image,
            depth,
            perms,
        })
    }

    pub fn identity(params: TreeParams, depth: u32) -> Self {
        AutomorphismDescription {
            params,
            anchor_image: Vertex::root(),
            depth,
            perms: BTreeMap::new(),
        }
    }

    /// Uniformly random permutations at every vertex above `depth`, with a
    /// random anchor image of length at most `max_anchor_len`.
    pub fn random(params: TreeParams, depth: u32, max_anchor_len: u32, rng: &mut impl Rng) -> Self {
        let k = params.k();
        let len = rng.gen_range(0..=max_anchor_len);
        let mut word = Vec::with_capacity(len as usize);
        for i in 0..len {
            let hi = if i == 0 { k } else { k - 1 };
            word.push(rng.gen_range(0..hi) as u8);
        }
        let anchor_image = Vertex::from_digits(word);
        let mut perms = BTreeMap::new();
        if depth > 0 {
            for v in topology::ball(params, &Vertex::root(), depth - 1).expect("valid root") {
                let n = if v.is_root() { k } else { k - 1 } as usize;
                let mut perm: Vec<u8> = (0..n as u8).collect();
                for i in (1..n).rev() {
                    perm.swap(i, rng.gen_range(0..=i));
                }
                perms.insert(v, perm);
            }
        }
        AutomorphismDescription::new(params, anchor_image, depth, perms)
            .expect("valid by construction")
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Image of a vertex. Errors when `v` is deeper than the description.
    pub fn apply_vertex(&self, v: &Vertex) -> Result<Vertex> {
        if v.len() > self.depth {
            return Err(Error::OutsideDescription(v.to_string(), self.depth));
        }
        v.validate(self.params)?;
        let mut pre = Vertex::root();
        let mut img = self.anchor_image.clone();
        let mut back: Option<Vertex> = None;
        for &d in v.digits() {
            // outward neighbors of the image, in address order
            let outs: Vec<Vertex> = neighbors_unchecked(self.params, &img)
                .into_iter()
                .filter(|w| Some(w) != back.as_ref())
                .collect();
            let j = match self.perms.get(&pre) {
                Some(perm) => perm[d as usize] as usize,
                None => d as usize,
            };
            back = Some(img);
            img = outs[j].clone();
            pre = pre.child(d);
        }
        Ok(img)
    }
}

/// Transports a configuration along an automorphism: `(g·x)(g(v)) = x(v)`.
pub fn apply_automorphism(g: &AutomorphismDescription, x: &FiniteConfig) -> Result<FiniteConfig> {
    if g.params != x.params {
        return Err(Error::Mismatch(
            "automorphism and configuration disagree on k".into(),
        ));
    }
    let mut out = FiniteConfig::empty(x.params, x.alphabet);
    for (v, s) in &x.cells {
        let image = g.apply_vertex(v)?;
        let prev = out.cells.insert(image, *s);
        debug_assert!(prev.is_none(), "automorphisms are injective");
    }
    Ok(out)
}

/// Brute-force single step on an explicitly truncated ball around the root.
///
/// Adjacency is materialized as index lists and each neighborhood is
/// gathered by breadth-first search over them; the only shared machinery
/// with the fast simulator is the final canonical table lookup. Input
/// labels must be total on `ball(root, truncation)`; the output is total on
/// `ball(root, truncation - radius)` and is exact there for any extension
/// of the input beyond the truncation.
pub fn oracle_step(
    rule: &Rule,
    labels: &BTreeMap<Vertex, Symbol>,
    truncation: u32,
) -> Result<BTreeMap<Vertex, Symbol>> {
    let r = rule.radius();
    if truncation < r {
        return Err(Error::TruncationTooSmall(truncation, r));
    }
    let params = rule.params();
    let verts = topology::ball(params, &Vertex::root(), truncation)?;
    let index: HashMap<&Vertex, usize> = verts.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut values = Vec::with_capacity(verts.len());
    for v in &verts {
        match labels.get(v) {
            None => return Err(Error::PartialLabeling(v.to_string())),
            Some(s) => {
                rule.alphabet().check(*s)?;
                values.push(*s);
            }
        }
    }
    let adjacency: Vec<Vec<usize>> = verts
        .iter()
        .map(|v| {
            neighbors_unchecked(params, v)
                .iter()
                .filter_map(|w| index.get(w).copied())
                .collect()
        })
        .collect();

    let mut out = BTreeMap::new();
    for (i, v) in verts.iter().enumerate() {
        if v.len() + r > truncation {
            continue;
        }
        // gather ball(v, r) by BFS over the explicit adjacency lists
        let mut ball_labels: BTreeMap<Vertex, Symbol> = BTreeMap::new();
        let mut dist: HashMap<usize, u32> = HashMap::new();
        let mut queue = VecDeque::new();
        dist.insert(i, 0);
        queue.push_back(i);
        while let Some(j) = queue.pop_front() {
            let d = dist[&j];
            ball_labels.insert(verts[j].clone(), values[j]);
            if d == r {
                continue;
            }
            for &n in &adjacency[j] {
                dist.entry(n).or_insert_with(|| {
                    queue.push_back(n);
                    d + 1
                });
            }
        }
        out.insert(v.clone(), rule.evaluate(v, &ball_labels)?);
    }
    Ok(out)
}

/// Fast census engine: trajectories over the arithmetic ball grid.
///
/// Semantically identical to iterating [`step`]; spreading rules pay for
/// exactly the light cone they reach, up to the `sim_cells` cap.
pub(crate) mod engine {
    use super::*;

    /// Dense radius-1 lookup: output by center symbol and the rank of the
    /// sorted neighbor tuple among multisets of size k over the alphabet.
    pub(crate) struct DenseRadiusOne {
        a: usize,
        ranks: usize,
        table: Vec<Symbol>,
        pascal: Vec<Vec<u64>>,
    }

    impl DenseRadiusOne {
        pub(crate) fn new(rule: &Rule) -> Self {
            debug_assert_eq!(rule.radius(), 1);
            let k = rule.params().k() as usize;
            let a = rule.alphabet().size() as usize;
            let n = k + a + 2;
            let mut pascal = vec![vec![0u64; n]; n];
            for i in 0..n {
                pascal[i][0] = 1;
                for m in 1..=i {
                    pascal[i][m] = pascal[i - 1][m - 1]
                        + if m <= i - 1 { pascal[i - 1][m] } else { 0 };
                }
            }
            let ranks = pascal[a + k - 1][k] as usize;
            let mut dense = DenseRadiusOne {
                a,
                ranks,
                table: vec![0; a * ranks],
                pascal,
            };
            for (ball, out) in rule.table() {
                let code = ball.code();
                let mut nbrs = code[1..].to_vec();
                nbrs.sort_unstable();
                let idx = dense.slot(code[0], &nbrs);
                dense.table[idx] = out;
            }
            dense
        }

        /// Multisets of size `m` over symbols `lo..a`.
        fn count_from(&self, lo: usize, m: usize) -> u64 {
            let n = self.a - lo;
            if n == 0 {
                return u64::from(m == 0);
            }
            self.pascal[n + m - 1][m]
        }

        fn rank(&self, sorted: &[Symbol]) -> usize {
            let mut rank = 0u64;
            let mut lo = 0usize;
            for (pos, &t) in sorted.iter().enumerate() {
                let m = sorted.len() - pos - 1;
                for s in lo..t as usize {
                    rank += self.count_from(s, m);
                }
                lo = t as usize;
            }
            rank as usize
        }

        fn slot(&self, center: Symbol, sorted_nbrs: &[Symbol]) -> usize {
            center as usize * self.ranks + self.rank(sorted_nbrs)
        }

        #[inline]
        pub(crate) fn eval(&self, center: Symbol, nbrs: &mut [Symbol]) -> Symbol {
            nbrs.sort_unstable();
            self.table[self.slot(center, nbrs)]
        }
    }

    /// Stats returned by a grid trajectory; `horizon + 1` entries per
    /// per-step vector.
    pub(crate) struct TrajectoryStats {
        /// Least step with empty support, if reached within the horizon.
        pub first_death: Option<u32>,
        /// Max over steps of the support's distance from the reference set.
        pub max_excess: u32,
        /// Per-step support emptiness.
        pub empty_by_step: Vec<bool>,
        /// Per-step emptiness within the watch ball around the root.
        pub zero_on_watch: Vec<bool>,
    }

    /// Simulates `horizon` steps of a quiescent radius-1 rule from the
    /// given cells, measuring support distances from `reference` vertices
    /// and support presence inside `ball(root, watch_radius)`.
    pub(crate) fn run_radius_one(
        rule: &Rule,
        init: &[(Vertex, Symbol)],
        reference: &[Vertex],
        watch_radius: u32,
        horizon: u32,
        limits: &Limits,
    ) -> Result<TrajectoryStats> {
        debug_assert_eq!(rule.radius(), 1);
        debug_assert!(rule.is_quiescent());
        let params = rule.params();
        let dense = DenseRadiusOne::new(rule);
        let init_radius = init.iter().map(|(v, _)| v.len()).max().unwrap_or(0);
        let grid_radius = init_radius + horizon + 1;
        let cells = codes::ball_code_len(params.k(), grid_radius) as u64;
        if cells > limits.sim_cells {
            return Err(Error::Capacity {
                what: "simulation arena",
                required: cells as u128,
                cap: limits.sim_cells as u128,
            });
        }
        let grid = codes::TreeGrid::new(params, grid_radius);
        let dist = distances_to_reference(&grid, params, reference);
        let watch_limit = grid.len_to_depth(watch_radius.min(grid_radius));

        let mut labels = vec![0u8; grid.len()];
        let mut next = vec![0u8; grid.len()];
        let mut alive = false;
        let mut watched = false;
        let mut max_excess = 0u32;
        for (v, s) in init {
            let i = grid_index_of(&grid, params, v).expect("support inside arena");
            labels[i] = *s;
            if *s != 0 {
                alive = true;
                watched |= i < watch_limit;
                max_excess = max_excess.max(dist[i]);
            }
        }
        let mut empty_by_step = Vec::with_capacity(horizon as usize + 1);
        let mut zero_on_watch = Vec::with_capacity(horizon as usize + 1);
        empty_by_step.push(!alive);
        zero_on_watch.push(!watched);
        let mut first_death = if alive { None } else { Some(0) };
        let mut active = init_radius;
        let mut nbrs = vec![0u8; params.k() as usize];
        for n in 1..=horizon {
            if empty_by_step[n as usize - 1] {
                // zero is fixed under a quiescent rule
                empty_by_step.push(true);
                zero_on_watch.push(true);
                continue;
            }
            let region = (active + 1).min(grid_radius - 1);
            let mut any = false;
            let mut any_watched = false;
            for i in 0..grid.len_to_depth(region) {
                let mut w = 0usize;
                if let Some(p) = grid.parent(i) {
                    nbrs[w] = labels[p];
                    w += 1;
                }
                for c in grid.children(i) {
                    nbrs[w] = labels[c];
                    w += 1;
                }
                let s = dense.eval(labels[i], &mut nbrs[..w]);
                next[i] = s;
                if s != 0 {
                    any = true;
                    any_watched |= i < watch_limit;
                    max_excess = max_excess.max(dist[i]);
                }
            }
            for slot in next[grid.len_to_depth(region)..].iter_mut() {
                *slot = 0;
            }
            std::mem::swap(&mut labels, &mut next);
            active = region;
            empty_by_step.push(!any);
            zero_on_watch.push(!any_watched);
            if !any && first_death.is_none() {
                first_death = Some(n);
            }
        }
        Ok(TrajectoryStats {
            first_death,
            max_excess,
            empty_by_step,
            zero_on_watch,
        })
    }

    /// Multi-source BFS distance from the reference vertices, over the grid.
    fn distances_to_reference(
        grid: &codes::TreeGrid,
        params: TreeParams,
        reference: &[Vertex],
    ) -> Vec<u32> {
        let mut dist = vec![u32::MAX; grid.len()];
        let mut queue = VecDeque::new();
        for v in reference {
            let i = grid_index_of(grid, params, v).expect("reference inside grid");
            if dist[i] != 0 {
                dist[i] = 0;
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            let d = dist[i];
            let mut push = |j: usize, dist: &mut Vec<u32>, queue: &mut VecDeque<usize>| {
                if dist[j] == u32::MAX {
                    dist[j] = d + 1;
                    queue.push_back(j);
                }
            };
            if let Some(p) = grid.parent(i) {
                push(p, &mut dist, &mut queue);
            }
            for c in grid.children(i) {
                push(c, &mut dist, &mut queue);
            }
        }
        dist
    }

    /// Grid index of a vertex word, following child ranges digit by digit.
    pub(crate) fn grid_index_of(
        grid: &codes::TreeGrid,
        params: TreeParams,
        v: &Vertex,
    ) -> Option<usize> {
        debug_assert_eq!(grid.k(), params.k());
        let mut i = 0usize;
        for &d in v.digits() {
            let kids = grid.children(i);
            let j = kids.start + d as usize;
            if j >= kids.end {
                return None;
            }
            i = j;
        }
        Some(i)
    }
}
