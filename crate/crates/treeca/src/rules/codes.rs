//! Canonical codes for labeled rooted balls, and the arithmetic ball grid.
//!
//! A radius-r ball around a vertex is a rooted tree: k subtrees at the
//! center, k-1 children per node below, uniform depth r. A labeling is
//! serialized in preorder, with the child subtrees of every node sorted by
//! their own serialized code (AHU-style, children normalized before
//! parents). Two labelings produce the same code exactly when they are
//! related by an automorphism of the ball fixing its center, and since all
//! subtree codes at the same depth have the same length, lexicographic
//! order on codes agrees with the recursive (symbol, children) order.

use crate::error::{Error, Result};
use crate::rules::Limits;
use crate::topology::{neighbors_unchecked, TreeParams, Vertex};

/// Number of vertices in a depth-`d` subtree with branching `k-1`.
pub(crate) fn subtree_size(k: u32, depth: u32) -> usize {
    // 1 + (k-1) + (k-1)^2 + ... + (k-1)^depth
    let b = (k - 1) as usize;
    let mut size = 1usize;
    let mut layer = 1usize;
    for _ in 0..depth {
        layer *= b;
        size += layer;
    }
    size
}

/// Number of vertices in a radius-`r` ball (= length of its code).
pub(crate) fn ball_code_len(k: u32, radius: u32) -> usize {
    if radius == 0 {
        1
    } else {
        1 + k as usize * subtree_size(k, radius - 1)
    }
}

/// Visits every nondecreasing index tuple of length `m` over `0..n`, in
/// lexicographic order. These are the multisets of size `m` over an ordered
/// set of `n` elements.
pub(crate) fn for_each_multiset(n: usize, m: usize, mut f: impl FnMut(&[usize])) {
    if m == 0 {
        f(&[]);
        return;
    }
    if n == 0 {
        return;
    }
    let mut idx = vec![0usize; m];
    loop {
        f(&idx);
        let mut i = m;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] + 1 < n {
                let v = idx[i] + 1;
                for slot in idx[i..].iter_mut() {
                    *slot = v;
                }
                break;
            }
        }
    }
}

/// `C(n+m-1, m)`: the number of multisets of size `m` over `n` elements,
/// or `None` on overflow.
pub(crate) fn multiset_count(n: u128, m: u32) -> Option<u128> {
    if n == 0 {
        return Some(if m == 0 { 1 } else { 0 });
    }
    // binomial(n+m-1, m) with incremental division to keep intermediates exact
    let mut acc: u128 = 1;
    for i in 0..m as u128 {
        acc = acc.checked_mul(n.checked_add(i)?)?;
        acc /= i + 1;
    }
    Some(acc)
}

/// Number of canonical codes for a radius-`r` ball over an `a`-symbol
/// alphabet, or `None` on overflow.
pub(crate) fn count_codes(k: u32, a: u32, radius: u32) -> Option<u128> {
    let mut level: u128 = a as u128; // depth-0 subtree descriptors
    if radius == 0 {
        return Some(level);
    }
    for _ in 1..radius {
        level = (a as u128).checked_mul(multiset_count(level, k - 1)?)?;
    }
    (a as u128).checked_mul(multiset_count(level, k)?)
}

fn check_cap(what: &'static str, required: u128, cap: u128) -> Result<()> {
    if required > cap {
        return Err(Error::Capacity {
            what,
            required,
            cap,
        });
    }
    Ok(())
}

/// Enumerates all canonical codes for radius `radius`, in ascending
/// lexicographic (= enumeration) order. The all-zero code comes first.
pub(crate) fn enumerate_codes(
    k: u32,
    alphabet: u32,
    radius: u32,
    limits: &Limits,
) -> Result<Vec<Vec<u8>>> {
    let cap = limits.canonical_balls as u128;
    let total = count_codes(k, alphabet, radius);
    check_cap(
        "canonical ball enumeration",
        total.unwrap_or(u128::MAX),
        cap,
    )?;

    let symbols: Vec<u8> = (0..alphabet as u8).collect();
    let mut level: Vec<Vec<u8>> = symbols.iter().map(|s| vec![*s]).collect();
    if radius == 0 {
        return Ok(level);
    }
    for depth in 1..radius {
        // intermediate levels must also stay under the cap
        let n = count_codes(k, alphabet, 0).unwrap(); // a
        let _ = n;
        let next_count = (alphabet as u128)
            .checked_mul(multiset_count(level.len() as u128, k - 1).unwrap_or(u128::MAX))
            .unwrap_or(u128::MAX);
        check_cap("canonical ball enumeration", next_count, cap)?;
        let mut next = Vec::with_capacity(next_count as usize);
        for s in &symbols {
            for_each_multiset(level.len(), (k - 1) as usize, |ix| {
                let mut code = vec![*s];
                for &i in ix {
                    code.extend_from_slice(&level[i]);
                }
                next.push(code);
            });
        }
        level = next;
        let _ = depth;
    }
    let mut out = Vec::with_capacity(total.unwrap() as usize);
    for s in &symbols {
        for_each_multiset(level.len(), k as usize, |ix| {
            let mut code = vec![*s];
            for &i in ix {
                code.extend_from_slice(&level[i]);
            }
            out.push(code);
        });
    }
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    Ok(out)
}

/// Canonical code of the radius-`radius` ball around `center`, with labels
/// supplied by `read`. The reader must be total on the ball.
pub(crate) fn code_from_reader(
    params: TreeParams,
    center: &Vertex,
    radius: u32,
    read: &mut impl FnMut(&Vertex) -> u8,
) -> Vec<u8> {
    fn sub(
        params: TreeParams,
        v: &Vertex,
        from: Option<&Vertex>,
        depth: u32,
        read: &mut impl FnMut(&Vertex) -> u8,
    ) -> Vec<u8> {
        let mut code = vec![read(v)];
        if depth > 0 {
            let mut kids: Vec<Vec<u8>> = neighbors_unchecked(params, v)
                .iter()
                .filter(|w| Some(*w) != from)
                .map(|w| sub(params, w, Some(v), depth - 1, read))
                .collect();
            kids.sort_unstable();
            for kid in kids {
                code.extend_from_slice(&kid);
            }
        }
        code
    }
    sub(params, center, None, radius, read)
}

/// BFS-ordered ball around the root, with purely arithmetic parent/child
/// structure. Index 0 is the root; the children of every vertex occupy a
/// contiguous index range, and the index order of a radius-R grid is a
/// prefix of every larger grid's.
#[derive(Debug, Clone)]
pub(crate) struct TreeGrid {
    k: u32,
    radius: u32,
    /// `level_off[d]` = index of the first vertex at depth `d`;
    /// `level_off[radius+1]` = total size.
    level_off: Vec<usize>,
}

impl TreeGrid {
    pub(crate) fn new(params: TreeParams, radius: u32) -> TreeGrid {
        let k = params.k();
        let mut level_off = Vec::with_capacity(radius as usize + 2);
        level_off.push(0);
        let mut total = 1usize;
        let mut layer = 1usize;
        for d in 0..radius {
            level_off.push(total);
            layer = if d == 0 {
                k as usize
            } else {
                layer * (k as usize - 1)
            };
            total += layer;
        }
        level_off.push(total);
        TreeGrid {
            k,
            radius,
            level_off,
        }
    }

    pub(crate) fn k(&self) -> u32 {
        self.k
    }

    pub(crate) fn radius(&self) -> u32 {
        self.radius
    }

    pub(crate) fn len(&self) -> usize {
        *self.level_off.last().unwrap()
    }

    /// Number of vertices with depth <= `d`.
    pub(crate) fn len_to_depth(&self, d: u32) -> usize {
        self.level_off[(d + 1).min(self.radius + 1) as usize]
    }

    pub(crate) fn depth(&self, i: usize) -> u32 {
        debug_assert!(i < self.len());
        (self.level_off.partition_point(|&off| off <= i) - 1) as u32
    }

    pub(crate) fn parent(&self, i: usize) -> Option<usize> {
        if i == 0 {
            return None;
        }
        let d = self.depth(i) as usize;
        let pos = i - self.level_off[d];
        Some(if d == 1 {
            0
        } else {
            self.level_off[d - 1] + pos / (self.k as usize - 1)
        })
    }

    /// Children index range; empty at the outermost level.
    pub(crate) fn children(&self, i: usize) -> std::ops::Range<usize> {
        let d = self.depth(i);
        if d == self.radius {
            return 0..0;
        }
        let pos = i - self.level_off[d as usize];
        let width = if d == 0 {
            self.k as usize
        } else {
            self.k as usize - 1
        };
        let start = self.level_off[d as usize + 1] + pos * width;
        start..start + width
    }

    /// The vertex words in grid index order.
    pub(crate) fn vertices(&self, params: TreeParams) -> Vec<Vertex> {
        debug_assert_eq!(params.k(), self.k);
        let mut verts = Vec::with_capacity(self.len());
        verts.push(Vertex::root());
        for i in 0..self.len() {
            let base = verts[i].clone();
            for (d, c) in self.children(i).enumerate() {
                debug_assert_eq!(c, verts.len());
                verts.push(base.child(d as u8));
            }
        }
        debug_assert_eq!(verts.len(), self.len());
        verts
    }

    /// Canonical code of the radius-`r` ball around grid index `center`,
    /// reading labels from `labels`. Requires depth(center) + r <= radius.
    pub(crate) fn gather_code<T: Ord + Copy>(
        &self,
        labels: &[T],
        center: usize,
        r: u32,
    ) -> Vec<T> {
        debug_assert!(self.depth(center) + r <= self.radius);
        self.gather_sub(labels, center, usize::MAX, r)
    }

    fn gather_sub<T: Ord + Copy>(&self, labels: &[T], i: usize, from: usize, d: u32) -> Vec<T> {
        let mut code = vec![labels[i]];
        if d > 0 {
            let mut kids: Vec<Vec<T>> = Vec::with_capacity(self.k as usize);
            if let Some(p) = self.parent(i) {
                if p != from {
                    kids.push(self.gather_sub(labels, p, i, d - 1));
                }
            }
            for c in self.children(i) {
                if c != from {
                    kids.push(self.gather_sub(labels, c, i, d - 1));
                }
            }
            kids.sort_unstable();
            for kid in kids {
                code.extend_from_slice(&kid);
            }
        }
        code
    }

    /// Writes a canonical ball code of radius `code_radius` into the top of
    /// a label vector for this grid, zero elsewhere. The canonical child
    /// descriptors are assigned to branches in digit order.
    pub(crate) fn realize(&self, code: &[u8], code_radius: u32) -> Vec<u8> {
        debug_assert!(code_radius <= self.radius);
        let mut labels = vec![0u8; self.len()];
        let mut pos = 0usize;
        self.place(code, &mut pos, 0, code_radius, &mut labels);
        debug_assert_eq!(pos, code.len());
        labels
    }

    fn place(&self, code: &[u8], pos: &mut usize, i: usize, depth_left: u32, labels: &mut [u8]) {
        labels[i] = code[*pos];
        *pos += 1;
        if depth_left > 0 {
            for c in self.children(i) {
                self.place(code, pos, c, depth_left - 1, labels);
            }
        }
    }
}
