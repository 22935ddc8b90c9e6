//! Word-address model of the k-regular tree: the path metric, balls, the
//! level function of the canonical end, and convex-hull decompositions of
//! finite vertex sets.
//!
//! Vertices are finite digit words. The empty word is a root for the
//! *address scheme only* — the tree itself is unrooted, and no operation in
//! the public model distinguishes a parent direction. The digit `k-1` may
//! appear only as the first symbol of a word; this makes the address map a
//! bijection onto the vertices of the k-regular tree.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Degree parameter: every vertex of the tree has exactly `k` neighbors.
///
/// `k = 2` is allowed and yields the bi-infinite path, the degenerate case
/// in which the tree coincides with its own level quotient up to reflection.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeParams {
    k: u32,
}

impl TreeParams {
    pub fn new(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidDegree(k));
        }
        Ok(TreeParams { k })
    }

    pub fn k(self) -> u32 {
        self.k
    }
}

/// A vertex address: a digit word, possibly empty.
///
/// Text form is the digit string, with `"e"` for the empty word.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    word: Vec<u8>,
}

impl Vertex {
    /// The empty word.
    pub fn root() -> Self {
        Vertex { word: Vec::new() }
    }

    /// Builds a vertex from raw digits. Validity depends on `k`; check with
    /// [`Vertex::validate`] where the degree is known.
    pub fn from_digits(digits: impl Into<Vec<u8>>) -> Self {
        Vertex {
            word: digits.into(),
        }
    }

    pub fn digits(&self) -> &[u8] {
        &self.word
    }

    pub fn len(&self) -> u32 {
        self.word.len() as u32
    }

    pub fn is_root(&self) -> bool {
        self.word.is_empty()
    }

    /// The address with the last digit removed, if any.
    pub fn parent(&self) -> Option<Vertex> {
        if self.word.is_empty() {
            None
        } else {
            Some(Vertex {
                word: self.word[..self.word.len() - 1].to_vec(),
            })
        }
    }

    /// The address extended by one digit.
    pub fn child(&self, digit: u8) -> Vertex {
        let mut word = self.word.clone();
        word.push(digit);
        Vertex { word }
    }

    /// Checks the digit ranges: first digit in `0..k`, later digits in
    /// `0..k-1`.
    pub fn validate(&self, params: TreeParams) -> Result<()> {
        let k = params.k();
        let ok = match self.word.split_first() {
            None => true,
            Some((first, rest)) => {
                (*first as u32) < k && rest.iter().all(|d| (*d as u32) < k - 1)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidAddress {
                addr: self.to_string(),
                k,
            })
        }
    }

    /// Parses the text form: `"e"` or a nonempty string of digits `0..=9`.
    pub fn parse(text: &str) -> Result<Vertex> {
        if text == "e" {
            return Ok(Vertex::root());
        }
        if text.is_empty() {
            return Err(Error::Parse {
                line: 0,
                msg: "empty vertex address (use \"e\" for the root)".into(),
            });
        }
        let mut word = Vec::with_capacity(text.len());
        for c in text.chars() {
            match c.to_digit(10) {
                Some(d) => word.push(d as u8),
                None => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("bad vertex address {text:?}"),
                    })
                }
            }
        }
        Ok(Vertex { word })
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        for d in &self.word {
            if *d < 10 {
                write!(f, "{d}")?;
            } else {
                // digits beyond 9 have no single-character text form
                write!(f, "[{d}]")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vertex({self})")
    }
}

/// The `k` neighbors of `v`: the parent address (if any) and every allowed
/// one-digit extension. Sorted by address.
pub fn neighbors(params: TreeParams, v: &Vertex) -> Result<Vec<Vertex>> {
    v.validate(params)?;
    Ok(neighbors_unchecked(params, v))
}

pub(crate) fn neighbors_unchecked(params: TreeParams, v: &Vertex) -> Vec<Vertex> {
    let k = params.k();
    let mut out = Vec::with_capacity(k as usize);
    if v.is_root() {
        for d in 0..k {
            out.push(v.child(d as u8));
        }
    } else {
        out.push(v.parent().unwrap());
        for d in 0..k - 1 {
            out.push(v.child(d as u8));
        }
    }
    out.sort();
    out
}

fn common_prefix_len(v: &Vertex, w: &Vertex) -> usize {
    v.digits()
        .iter()
        .zip(w.digits())
        .take_while(|(a, b)| a == b)
        .count()
}

/// Path metric: `|v| + |w| - 2 * |longest common prefix|`.
pub fn distance(v: &Vertex, w: &Vertex) -> u32 {
    let l = common_prefix_len(v, w);
    (v.digits().len() + w.digits().len() - 2 * l) as u32
}

/// The unique path from `v` to `w`, endpoints included.
pub fn geodesic(v: &Vertex, w: &Vertex) -> Vec<Vertex> {
    let l = common_prefix_len(v, w);
    let mut out = Vec::with_capacity(distance(v, w) as usize + 1);
    // climb from v to the common prefix, then descend to w
    for i in (l..=v.digits().len()).rev() {
        out.push(Vertex::from_digits(v.digits()[..i].to_vec()));
    }
    for i in l + 1..=w.digits().len() {
        out.push(Vertex::from_digits(w.digits()[..i].to_vec()));
    }
    out
}

/// All vertices within distance `r` of `center`, sorted by address.
pub fn ball(params: TreeParams, center: &Vertex, r: u32) -> Result<Vec<Vertex>> {
    center.validate(params)?;
    let mut seen: BTreeSet<Vertex> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(center.clone());
    queue.push_back((center.clone(), 0u32));
    while let Some((v, d)) = queue.pop_front() {
        if d == r {
            continue;
        }
        for w in neighbors_unchecked(params, &v) {
            if seen.insert(w.clone()) {
                queue.push_back((w, d + 1));
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// The `i`-th vertex of the canonical bi-infinite path: `p(-n)` is the
/// all-zeros word of length `n`, `p(0)` the root, and `p(n)` for `n > 0` is
/// `1` followed by `n-1` zeros.
pub fn canonical_path(i: i64) -> Vertex {
    if i <= 0 {
        Vertex::from_digits(vec![0u8; (-i) as usize])
    } else {
        let mut word = vec![0u8; i as usize];
        word[0] = 1;
        Vertex::from_digits(word)
    }
}

/// Level of `v` with respect to the end reached by the all-zeros ray:
/// `|v| - 2 * (number of leading zero digits)`.
///
/// This is the stabilized value of `d(p(-n), v) - n`, which is constant once
/// `n` exceeds the leading-zero count of `v`.
pub fn busemann_level(v: &Vertex) -> i64 {
    let leading = v.digits().iter().take_while(|d| **d == 0).count();
    v.digits().len() as i64 - 2 * leading as i64
}

/// Convex hull of a finite vertex set together with its leaves and the
/// branch components hanging off each leaf.
///
/// For a leaf `u` of the hull, the component of `u` consists of `u` and the
/// vertices outside the hull that are strictly closer to `u` than to every
/// other leaf; on such a component the coordinate `c(t) = d(t, u)` turns the
/// branch into a rooted subtree with root `u`.
#[derive(Debug, Clone)]
pub struct HullDecomposition {
    hull: BTreeSet<Vertex>,
    leaves: Vec<Vertex>,
    anchors: Vec<Vertex>,
}

impl HullDecomposition {
    pub fn hull(&self) -> &BTreeSet<Vertex> {
        &self.hull
    }

    /// Leaves of the hull viewed as an induced subgraph, sorted by address.
    pub fn leaves(&self) -> &[Vertex] {
        &self.leaves
    }

    /// The unique hull neighbor of leaf `i`.
    pub fn leaf_anchor(&self, i: usize) -> &Vertex {
        &self.anchors[i]
    }

    /// Membership in the component of leaf `i`: `t` is the leaf itself or a
    /// vertex outside the hull strictly closer to this leaf than to every
    /// other leaf.
    pub fn in_component(&self, i: usize, t: &Vertex) -> bool {
        let u = &self.leaves[i];
        if t != u && self.hull.contains(t) {
            return false;
        }
        let du = distance(t, u);
        self.leaves
            .iter()
            .enumerate()
            .all(|(j, other)| j == i || du < distance(t, other))
    }

    /// The component containing `t` together with its coordinate `c(t)`,
    /// if `t` lies in one. Components of distinct leaves are disjoint.
    pub fn component_of(&self, t: &Vertex) -> Option<(usize, u32)> {
        (0..self.leaves.len())
            .find(|i| self.in_component(*i, t))
            .map(|i| (i, distance(t, &self.leaves[i])))
    }

    /// Distance from `t` to the hull.
    pub fn distance_to_hull(&self, t: &Vertex) -> u32 {
        self.hull.iter().map(|s| distance(t, s)).min().unwrap()
    }
}

/// Computes the convex hull (union of pairwise geodesics) of a set of at
/// least two vertices, its leaves, and the per-leaf component descriptors.
pub fn hull_decomposition(params: TreeParams, set: &BTreeSet<Vertex>) -> Result<HullDecomposition> {
    for v in set {
        v.validate(params)?;
    }
    if set.len() < 2 {
        return Err(Error::Precondition(format!(
            "hull decomposition needs at least 2 vertices, got {}",
            set.len()
        )));
    }
    let verts: Vec<&Vertex> = set.iter().collect();
    let mut hull: BTreeSet<Vertex> = BTreeSet::new();
    for (i, v) in verts.iter().enumerate() {
        for w in &verts[i + 1..] {
            hull.extend(geodesic(v, w));
        }
    }
    let mut leaves = Vec::new();
    let mut anchors = Vec::new();
    for v in &hull {
        let inside: Vec<Vertex> = neighbors_unchecked(params, v)
            .into_iter()
            .filter(|w| hull.contains(w))
            .collect();
        if inside.len() <= 1 {
            // |hull| >= 2 and the hull is connected, so a leaf has exactly
            // one neighbor inside
            leaves.push(v.clone());
            anchors.push(inside.into_iter().next().expect("connected hull"));
        }
    }
    Ok(HullDecomposition {
        hull,
        leaves,
        anchors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::collections::HashMap;

    fn v(s: &str) -> Vertex {
        Vertex::parse(s).unwrap()
    }

    fn params(k: u32) -> TreeParams {
        TreeParams::new(k).unwrap()
    }

    fn random_vertex(rng: &mut StdRng, k: u32, max_len: usize) -> Vertex {
        let len = rng.gen_range(0..=max_len);
        let mut word = Vec::with_capacity(len);
        for i in 0..len {
            let hi = if i == 0 { k } else { k - 1 };
            word.push(rng.gen_range(0..hi) as u8);
        }
        Vertex::from_digits(word)
    }

    /// BFS distance over the explicit adjacency graph of a ball large
    /// enough to contain both endpoints' geodesic.
    fn bfs_distance(p: TreeParams, a: &Vertex, b: &Vertex) -> u32 {
        let r = a.len() + b.len() + 1;
        let verts = ball(p, &Vertex::root(), r).unwrap();
        let index: HashMap<&Vertex, usize> =
            verts.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut dist = vec![u32::MAX; verts.len()];
        let mut queue = VecDeque::new();
        dist[index[a]] = 0;
        queue.push_back(index[a]);
        while let Some(i) = queue.pop_front() {
            for w in neighbors_unchecked(p, &verts[i]) {
                if let Some(&j) = index.get(&w) {
                    if dist[j] == u32::MAX {
                        dist[j] = dist[i] + 1;
                        queue.push_back(j);
                    }
                }
            }
        }
        dist[index[b]]
    }

    #[test]
    fn neighbors_examples() {
        let p3 = params(3);
        let n: BTreeSet<_> = neighbors(p3, &Vertex::root()).unwrap().into_iter().collect();
        assert_eq!(n, [v("0"), v("1"), v("2")].into_iter().collect());

        let n: BTreeSet<_> = neighbors(p3, &v("1")).unwrap().into_iter().collect();
        assert_eq!(n, [v("e"), v("10"), v("11")].into_iter().collect());

        let p2 = params(2);
        let n: BTreeSet<_> = neighbors(p2, &v("0")).unwrap().into_iter().collect();
        assert_eq!(n, [v("e"), v("00")].into_iter().collect());
    }

    #[test]
    fn neighbors_rejects_bad_addresses() {
        let p3 = params(3);
        // 2 may only be the first digit when k = 3
        assert!(neighbors(p3, &Vertex::from_digits(vec![0, 2])).is_err());
        assert!(neighbors(p3, &Vertex::from_digits(vec![3])).is_err());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&v("e"), &v("e")), 0);
        // frozen from the BFS oracle
        assert_eq!(bfs_distance(params(3), &v("0"), &v("1")), 2);
        assert_eq!(distance(&v("0"), &v("1")), 2);
        assert_eq!(bfs_distance(params(3), &v("10"), &v("11")), 2);
        assert_eq!(distance(&v("10"), &v("11")), 2);
    }

    #[test]
    fn distance_agrees_with_bfs() {
        let mut rng = StdRng::seed_from_u64(11);
        for k in [2u32, 3, 4] {
            let p = params(k);
            for _ in 0..40 {
                let a = random_vertex(&mut rng, k, 4);
                let b = random_vertex(&mut rng, k, 4);
                assert_eq!(distance(&a, &b), bfs_distance(p, &a, &b), "{a} {b} k={k}");
            }
        }
    }

    #[test]
    fn ball_sizes() {
        let p3 = params(3);
        let b1: BTreeSet<_> = ball(p3, &Vertex::root(), 1).unwrap().into_iter().collect();
        assert_eq!(b1, [v("e"), v("0"), v("1"), v("2")].into_iter().collect());
        // frozen counts from the BFS oracle: 1+3, 1+3+6, 1+3+6+12
        assert_eq!(ball(p3, &Vertex::root(), 2).unwrap().len(), 10);
        assert_eq!(ball(p3, &Vertex::root(), 3).unwrap().len(), 22);

        for k in [2u32, 3, 4, 5] {
            let p = params(k);
            for r in 0..=4u32 {
                let size = ball(p, &Vertex::root(), r).unwrap().len() as u64;
                let expect = if k == 2 {
                    1 + 2 * r as u64
                } else {
                    1 + k as u64 * (((k - 1) as u64).pow(r) - 1) / (k as u64 - 2)
                };
                assert_eq!(size, expect, "k={k} r={r}");
            }
        }
    }

    #[test]
    fn ball_is_centered_anywhere() {
        let p3 = params(3);
        let b = ball(p3, &v("10"), 2).unwrap();
        assert_eq!(b.len(), 10);
        assert!(b.iter().all(|t| distance(t, &v("10")) <= 2));
    }

    /// Limit definition of the level function, evaluated at a finite n past
    /// the stabilization point.
    fn busemann_limit_oracle(t: &Vertex) -> i64 {
        let n = t.len() as i64 + 2;
        distance(&canonical_path(-n), t) as i64 - n
    }

    #[test]
    fn busemann_examples() {
        assert_eq!(busemann_level(&v("e")), 0); // p(0) is at level 0
        assert_eq!(busemann_limit_oracle(&v("00")), -2);
        assert_eq!(busemann_level(&v("00")), -2);
        assert_eq!(busemann_limit_oracle(&v("1")), 1);
        assert_eq!(busemann_level(&v("1")), 1);
        assert_eq!(busemann_limit_oracle(&v("01")), 0);
        assert_eq!(busemann_level(&v("01")), 0);
    }

    #[test]
    fn busemann_along_canonical_path() {
        for n in -20i64..=20 {
            assert_eq!(busemann_level(&canonical_path(n)), n);
        }
        // consecutive path vertices are adjacent
        for n in -20i64..20 {
            assert_eq!(distance(&canonical_path(n), &canonical_path(n + 1)), 1);
        }
    }

    #[test]
    fn busemann_changes_by_one_across_edges() {
        let mut rng = StdRng::seed_from_u64(5);
        for k in [2u32, 3, 4] {
            let p = params(k);
            for _ in 0..200 {
                let a = random_vertex(&mut rng, k, 6);
                for b in neighbors_unchecked(p, &a) {
                    let d = (busemann_level(&a) - busemann_level(&b)).abs();
                    assert_eq!(d, 1, "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn busemann_matches_limit_oracle() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..500 {
            let t = random_vertex(&mut rng, 3, 6);
            assert_eq!(busemann_level(&t), busemann_limit_oracle(&t), "{t}");
        }
    }

    #[test]
    fn degree_regularity() {
        let mut rng = StdRng::seed_from_u64(3);
        for k in [2u32, 3, 4, 5] {
            let p = params(k);
            for _ in 0..2500 {
                let a = random_vertex(&mut rng, k, 8);
                let ns = neighbors_unchecked(p, &a);
                assert_eq!(ns.len(), k as usize);
                for b in &ns {
                    assert!(b.validate(p).is_ok());
                    assert!(
                        neighbors_unchecked(p, b).contains(&a),
                        "adjacency must be symmetric: {a} {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn hull_examples() {
        let p3 = params(3);
        let s: BTreeSet<_> = [v("0"), v("1")].into_iter().collect();
        let h = hull_decomposition(p3, &s).unwrap();
        assert_eq!(
            h.hull().clone(),
            [v("0"), v("e"), v("1")].into_iter().collect()
        );
        assert_eq!(h.leaves(), &[v("0"), v("1")]);

        let s: BTreeSet<_> = [v("0"), v("00")].into_iter().collect();
        let h = hull_decomposition(p3, &s).unwrap();
        assert_eq!(h.hull().clone(), s);
        assert_eq!(h.leaves(), &[v("0"), v("00")]);

        let s: BTreeSet<_> = [v("00"), v("01"), v("1")].into_iter().collect();
        let h = hull_decomposition(p3, &s).unwrap();
        assert_eq!(
            h.hull().clone(),
            [v("00"), v("01"), v("0"), v("e"), v("1")].into_iter().collect()
        );
        assert_eq!(h.leaves(), &[v("00"), v("01"), v("1")]);
    }

    #[test]
    fn hull_requires_two_vertices() {
        let p3 = params(3);
        let s: BTreeSet<_> = [v("0")].into_iter().collect();
        assert!(matches!(
            hull_decomposition(p3, &s),
            Err(Error::Precondition(_))
        ));
    }

    fn is_connected(p: TreeParams, set: &BTreeSet<Vertex>) -> bool {
        let Some(start) = set.iter().next() else {
            return true;
        };
        let mut seen: BTreeSet<&Vertex> = BTreeSet::new();
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(x) = stack.pop() {
            for w in neighbors_unchecked(p, x) {
                if let Some(y) = set.get(&w) {
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
        }
        seen.len() == set.len()
    }

    /// Brute-force minimality: no connected superset of `s` in the spanning
    /// ball is smaller than the hull, and the hull itself qualifies.
    #[test]
    fn hull_is_minimal_connected_superset() {
        let p3 = params(3);
        let mut rng = StdRng::seed_from_u64(23);
        let universe = ball(p3, &Vertex::root(), 2).unwrap();
        for _ in 0..25 {
            let n = rng.gen_range(2..=4);
            let mut s: BTreeSet<Vertex> = BTreeSet::new();
            while s.len() < n {
                s.insert(universe[rng.gen_range(0..universe.len())].clone());
            }
            let h = hull_decomposition(p3, &s).unwrap();
            assert!(s.is_subset(h.hull()));
            assert!(is_connected(p3, h.hull()));
            assert!(h.hull().len() <= 8, "keep the oracle cheap");
            // every subset of the universe containing s and smaller than the
            // hull must be disconnected or miss s
            let rest: Vec<&Vertex> = universe.iter().filter(|t| !s.contains(t)).collect();
            let budget = h.hull().len() - s.len();
            for mask in 0u32..(1 << rest.len().min(20)) {
                if (mask.count_ones() as usize) >= budget.max(1) {
                    continue;
                }
                let mut cand = s.clone();
                for (i, t) in rest.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        cand.insert((*t).clone());
                    }
                }
                if cand.len() < h.hull().len() {
                    assert!(
                        !is_connected(p3, &cand),
                        "found smaller connected superset of {s:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn hull_leaf_components() {
        let p3 = params(3);
        let mut rng = StdRng::seed_from_u64(41);
        let universe = ball(p3, &Vertex::root(), 2).unwrap();
        let probe = ball(p3, &Vertex::root(), 4).unwrap();
        for _ in 0..20 {
            let n = rng.gen_range(2..=4);
            let mut s: BTreeSet<Vertex> = BTreeSet::new();
            while s.len() < n {
                s.insert(universe[rng.gen_range(0..universe.len())].clone());
            }
            let h = hull_decomposition(p3, &s).unwrap();
            // each leaf has exactly one hull neighbor
            for (i, u) in h.leaves().iter().enumerate() {
                let inside: Vec<_> = neighbors_unchecked(p3, u)
                    .into_iter()
                    .filter(|w| h.hull().contains(w))
                    .collect();
                assert_eq!(inside.len(), 1);
                assert_eq!(&inside[0], h.leaf_anchor(i));
                assert!(h.in_component(i, u));
                assert_eq!(h.component_of(u), Some((i, 0)));
            }
            for t in &probe {
                // components are pairwise disjoint and avoid hull interior
                let hits: Vec<usize> = (0..h.leaves().len())
                    .filter(|i| h.in_component(*i, t))
                    .collect();
                assert!(hits.len() <= 1, "components must be disjoint at {t}");
                if h.hull().contains(t) && !h.leaves().contains(t) {
                    assert!(hits.is_empty());
                }
                // inside a component, exactly one neighbor is strictly
                // closer to the leaf: the branch is a rooted subtree
                if let Some((i, c)) = h.component_of(t) {
                    assert_eq!(c, distance(t, &h.leaves()[i]));
                    if c > 0 {
                        let closer = neighbors_unchecked(p3, t)
                            .into_iter()
                            .filter(|w| distance(w, &h.leaves()[i]) < c)
                            .count();
                        assert_eq!(closer, 1, "at {t}");
                    }
                }
            }
        }
    }

    #[test]
    fn geodesic_endpoints_and_length() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..200 {
            let a = random_vertex(&mut rng, 3, 5);
            let b = random_vertex(&mut rng, 3, 5);
            let g = geodesic(&a, &b);
            assert_eq!(g.first(), Some(&a));
            assert_eq!(g.last(), Some(&b));
            assert_eq!(g.len() as u32, distance(&a, &b) + 1);
            for w in g.windows(2) {
                assert_eq!(distance(&w[0], &w[1]), 1);
            }
        }
    }

    #[test]
    fn vertex_text_roundtrip() {
        for s in ["e", "0", "102", "21", "1000"] {
            assert_eq!(Vertex::parse(s).unwrap().to_string(), s);
        }
        assert!(Vertex::parse("").is_err());
        assert!(Vertex::parse("1a").is_err());
    }

    proptest! {
        #[test]
        fn metric_axioms(
            a in proptest::collection::vec(0u8..2, 0..6),
            b in proptest::collection::vec(0u8..2, 0..6),
            c in proptest::collection::vec(0u8..2, 0..6),
        ) {
            let a = Vertex::from_digits(a);
            let b = Vertex::from_digits(b);
            let c = Vertex::from_digits(c);
            prop_assert_eq!(distance(&a, &b), distance(&b, &a));
            prop_assert_eq!(distance(&a, &b) == 0, a == b);
            prop_assert!(distance(&a, &c) <= distance(&a, &b) + distance(&b, &c));
        }
    }
}
