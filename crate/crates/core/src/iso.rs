//! Isomorphism and canonical forms for oriented combinatorial maps.
//!
//! A connected oriented map is encoded by its darts: dart `2e` is edge `e`
//! traversed forward, dart `2e+1` backward. `alpha` (dart reversal) is the
//! xor-with-1 involution; `sigma` is the rotation successor around the
//! origin vertex. An isomorphism is determined by the image of a single
//! dart, so equivalence and canonical forms are computed by propagating a
//! seed dart through the `sigma`/`alpha` moves — no general graph
//! isomorphism search is involved.

/// Borrowed view of a connected oriented map plus a per-dart label that any
/// isomorphism must preserve (used for bipartition classes; all-zero labels
/// mean "unlabelled").
pub(crate) struct MapView<'a> {
    pub sigma: &'a [usize],
    pub sigma_inv: &'a [usize],
    pub labels: &'a [usize],
}

impl<'a> MapView<'a> {
    fn len(&self) -> usize {
        self.sigma.len()
    }

    fn step(&self, dart: usize, reversed: bool) -> usize {
        if reversed {
            self.sigma_inv[dart]
        } else {
            self.sigma[dart]
        }
    }
}

const UNSEEN: usize = usize::MAX;

/// Attempts to extend `a[dart 0] -> (seed, seed_reversed)` to a full
/// isomorphism; the map is connected, so the extension is unique if it
/// exists.
fn propagate(a: &MapView, b: &MapView, seed: usize, seed_reversed: bool) -> bool {
    let n = a.len();
    let mut image = vec![UNSEEN; n];
    let mut hit = vec![false; n];
    image[0] = seed;
    hit[seed] = true;
    let mut stack = vec![0usize];
    while let Some(d) = stack.pop() {
        let img = image[d];
        if a.labels[d] != b.labels[img] {
            return false;
        }
        for (nd, ni) in [
            (a.sigma[d], b.step(img, seed_reversed)),
            (d ^ 1, img ^ 1),
        ] {
            if image[nd] == UNSEEN {
                if hit[ni] {
                    return false;
                }
                image[nd] = ni;
                hit[ni] = true;
                stack.push(nd);
            } else if image[nd] != ni {
                return false;
            }
        }
    }
    // Connectivity of `a` means every dart was reached.
    image.iter().all(|&i| i != UNSEEN)
}

/// True iff the maps are isomorphic with all rotations preserved or all
/// rotations reversed, respecting labels.
pub(crate) fn maps_isomorphic(a: &MapView, b: &MapView) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.len() == 0 {
        return true;
    }
    for seed in 0..b.len() {
        if propagate(a, b, seed, false) || propagate(a, b, seed, true) {
            return true;
        }
    }
    false
}

/// Relabels darts in discovery order from `(start, reversed)` and emits the
/// renumbered `sigma` table (or `sigma_inv` when walking mirrored) together
/// with the per-dart labels.
fn walk_encoding(m: &MapView, start: usize, reversed: bool) -> Vec<u32> {
    let n = m.len();
    let mut number = vec![UNSEEN; n];
    let mut order = Vec::with_capacity(n);
    number[start] = 0;
    order.push(start);
    let mut next = 1usize;
    let mut i = 0usize;
    while i < order.len() {
        let d = order[i];
        for nd in [m.step(d, reversed), d ^ 1] {
            if number[nd] == UNSEEN {
                number[nd] = next;
                next += 1;
                order.push(nd);
            }
        }
        i += 1;
    }
    let mut enc = Vec::with_capacity(2 * n);
    for &d in &order {
        enc.push(number[m.step(d, reversed)] as u32);
        enc.push(m.labels[d] as u32);
    }
    enc
}

/// Lexicographically least walk encoding over all starting darts and both
/// orientations. Two maps have equal encodings exactly when
/// `maps_isomorphic` holds.
pub(crate) fn canonical_bytes(m: &MapView) -> Vec<u8> {
    let n = m.len();
    let mut best: Option<Vec<u32>> = None;
    for start in 0..n {
        for reversed in [false, true] {
            let enc = walk_encoding(m, start, reversed);
            if best.as_ref().map_or(true, |b| enc < *b) {
                best = Some(enc);
            }
        }
    }
    let mut bytes = Vec::with_capacity(4 + 4 * n);
    bytes.extend_from_slice(&(n as u32).to_be_bytes());
    for word in best.unwrap_or_default() {
        bytes.extend_from_slice(&word.to_be_bytes());
    }
    bytes
}
