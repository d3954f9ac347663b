use std::ops::Index;

use rustc_hash::FxHashMap;

use super::VertexId;

/// Dense slots are allocated up to this many entries regardless of fill.
const DENSE_FLOOR: usize = 1 << 20;

/// Map keyed by [`VertexId`] that stores `Index(n)` and triangular
/// `Cell(k, j)` (with `1 <= j <= k`) in flat arrays, and everything else in a
/// hash map. On large row-structured graphs this replaces random hash probes
/// with mostly sequential array access.
#[derive(Debug, Clone)]
pub struct VertexMap<T> {
    index: Vec<Option<T>>,
    cell: Vec<Option<T>>,
    other: FxHashMap<VertexId, T>,
    len: usize,
}

impl<T> Default for VertexMap<T> {
    fn default() -> Self {
        VertexMap { index: Vec::new(), cell: Vec::new(), other: FxHashMap::default(), len: 0 }
    }
}

enum Slot {
    Index(usize),
    Cell(usize),
    Other,
}

fn slot(x: &VertexId) -> Slot {
    match *x {
        VertexId::Index(n) => usize::try_from(n).map_or(Slot::Other, Slot::Index),
        VertexId::Cell(k, j) if j >= 1 && j <= k => {
            let (k, j) = (k as usize, j as usize);
            Slot::Cell(k * (k - 1) / 2 + j - 1)
        }
        _ => Slot::Other,
    }
}

impl<T> VertexMap<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn dense(&self, s: &Slot) -> Option<&Vec<Option<T>>> {
        match s {
            Slot::Index(_) => Some(&self.index),
            Slot::Cell(_) => Some(&self.cell),
            Slot::Other => None,
        }
    }

    pub fn get(&self, x: &VertexId) -> Option<&T> {
        let s = slot(x);
        let hit = match (&s, self.dense(&s)) {
            (Slot::Index(i) | Slot::Cell(i), Some(v)) => v.get(*i).and_then(Option::as_ref),
            _ => None,
        };
        match hit {
            Some(h) => Some(h),
            None if self.other.is_empty() => None,
            None => self.other.get(x),
        }
    }

    pub fn get_mut(&mut self, x: &VertexId) -> Option<&mut T> {
        let s = slot(x);
        let dense = match s {
            Slot::Index(i) => self.index.get_mut(i),
            Slot::Cell(i) => self.cell.get_mut(i),
            Slot::Other => None,
        };
        match dense {
            Some(Some(v)) => Some(v),
            _ => self.other.get_mut(x),
        }
    }

    pub fn contains_key(&self, x: &VertexId) -> bool {
        self.get(x).is_some()
    }

    /// Inserts, returning the previous value.
    pub fn insert(&mut self, x: VertexId, value: T) -> Option<T> {
        let limit = DENSE_FLOOR.max(8 * (self.len + 1));
        let (vec, i) = match slot(&x) {
            Slot::Index(i) if i < limit.max(self.index.len()) => (&mut self.index, i),
            Slot::Cell(i) if i < limit.max(self.cell.len()) => (&mut self.cell, i),
            _ => {
                let old = self.other.insert(x, value);
                if old.is_none() {
                    self.len += 1;
                }
                return old;
            }
        };
        if i >= vec.len() {
            let target = (i + 1).max(vec.len() * 2).min(limit.max(i + 1));
            vec.resize_with(target, || None);
        }
        let mut old = vec[i].replace(value);
        if old.is_none() && !self.other.is_empty() {
            old = self.other.remove(&x);
        }
        if old.is_none() {
            self.len += 1;
        }
        old
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &T)> {
        let index = self.index.iter().enumerate().filter_map(|(i, v)| v.as_ref().map(|v| (VertexId::Index(i as u64), v)));
        let cell = self.cell.iter().enumerate().filter_map(|(i, v)| v.as_ref().map(|v| (cell_of(i), v)));
        index.chain(cell).chain(self.other.iter().map(|(k, v)| (k.clone(), v)))
    }

    pub fn keys(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.iter().map(|(k, _)| k)
    }
}

/// Inverse of the triangular numbering `k(k-1)/2 + j - 1`.
fn cell_of(i: usize) -> VertexId {
    let mut k = (((8 * i + 1) as f64).sqrt() as usize).div_ceil(2);
    while k * (k - 1) / 2 > i {
        k -= 1;
    }
    while (k + 1) * k / 2 <= i {
        k += 1;
    }
    VertexId::Cell(k as u32, (i - k * (k - 1) / 2 + 1) as u32)
}

impl<T> Index<&VertexId> for VertexMap<T> {
    type Output = T;

    fn index(&self, x: &VertexId) -> &T {
        self.get(x).unwrap_or_else(|| panic!("vertex {x} not in map"))
    }
}

impl<T> FromIterator<(VertexId, T)> for VertexMap<T> {
    fn from_iter<I: IntoIterator<Item = (VertexId, T)>>(iter: I) -> Self {
        let mut map = VertexMap::new();
        for (k, v) in iter {
            map.insert(k, v);
        }
        map
    }
}

impl<T> Extend<(VertexId, T)> for VertexMap<T> {
    fn extend<I: IntoIterator<Item = (VertexId, T)>>(&mut self, iter: I) {
        for (k, v) in iter {
            self.insert(k, v);
        }
    }
}

/// Set of vertices with the same storage strategy.
#[derive(Debug, Clone, Default)]
pub struct VertexSet(VertexMap<()>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// True if `x` was not present.
    pub fn insert(&mut self, x: VertexId) -> bool {
        self.0.insert(x, ()).is_none()
    }

    pub fn contains(&self, x: &VertexId) -> bool {
        self.0.contains_key(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<'a> FromIterator<&'a VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = &'a VertexId>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for x in iter {
            s.insert(x.clone());
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cell_numbering_inverts() {
        for k in 1..200u32 {
            for j in 1..=k {
                let Slot::Cell(i) = slot(&VertexId::Cell(k, j)) else { panic!() };
                assert_eq!(cell_of(i), VertexId::Cell(k, j));
            }
        }
    }

    #[test]
    fn mixed_keys() {
        let mut m = VertexMap::new();
        m.insert(VertexId::Index(3), 1.0);
        m.insert(VertexId::Cell(2, 1), 2.0);
        m.insert(VertexId::Cell(1, 2), 3.0);
        m.insert(VertexId::label("a"), 4.0);
        m.insert(VertexId::Index(u64::MAX), 5.0);
        assert_eq!(m.len(), 5);
        assert_eq!(m[&VertexId::Cell(1, 2)], 3.0);
        assert_eq!(m.insert(VertexId::Index(3), 6.0), Some(1.0));
        assert_eq!(m.len(), 5);
        assert_eq!(m.get(&VertexId::Index(4)), None);
        assert_eq!(m.iter().count(), 5);
    }

    proptest! {
        #[test]
        fn agrees_with_hash_map(ops in proptest::collection::vec((0u8..3, 0u64..3_000_000, 1u32..60, 0u32..60, any::<i32>()), 0..300)) {
            let mut dense = VertexMap::new();
            let mut reference = FxHashMap::default();
            for (kind, n, k, j, v) in ops {
                let x = match kind {
                    0 => VertexId::Index(n),
                    1 => VertexId::Cell(k, j),
                    _ => VertexId::label(&format!("v{}", n % 50)),
                };
                prop_assert_eq!(dense.insert(x.clone(), v), reference.insert(x, v));
            }
            prop_assert_eq!(dense.len(), reference.len());
            for (k, v) in &reference {
                prop_assert_eq!(dense.get(k), Some(v));
            }
            prop_assert_eq!(dense.iter().count(), reference.len());
        }
    }
}
