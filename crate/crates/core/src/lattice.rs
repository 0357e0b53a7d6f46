//! Zig-zag coordinates on the triangular lattice.
//!
//! Rows `p = 0..=m+1` are horizontal lattice lines; columns `q = 0..=n+1`
//! are vertical zig-zag lines. Even rows carry the `F` field and odd rows
//! the `F̂` field. The six neighbours of a site depend on the parity of
//! its row:
//!
//! ```text
//! even p: (p-1,q-1) (p,q-1) (p+1,q-1) (p+1,q)   (p,q+1) (p-1,q)
//! odd  p: (p-1,q)   (p,q-1) (p+1,q)   (p+1,q+1) (p,q+1) (p-1,q+1)
//! ```
//!
//! Interior sites satisfy `1 <= p <= m`, `1 <= q <= n`. The absorbing
//! boundary is the rim of the `(m+2) x (n+2)` rectangle. Anything else is
//! [`SiteClass::Outside`]; such sites only show up as neighbours of
//! boundary sites and carry no field.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lattice dimensions: `m` interior rows and `n` interior zig-zag columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    m: usize,
    n: usize,
}

/// A lattice vertex in zig-zag coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub p: i64,
    pub q: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    /// Even row, carries `F`.
    Even,
    /// Odd row, carries `F̂`.
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteClass {
    Interior,
    Boundary,
    Outside,
}

/// Location of the unit source. Always an interior site of its lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SourceSpec {
    pub a: i64,
    pub b: i64,
}

impl Site {
    pub const fn new(p: i64, q: i64) -> Self {
        Site { p, q }
    }

    pub fn parity(self) -> Parity {
        if self.p.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// The six nearest neighbours, in the fixed order used by every engine.
    pub fn neighbors(self) -> [Site; 6] {
        let Site { p, q } = self;
        match self.parity() {
            Parity::Even => [
                Site::new(p - 1, q - 1),
                Site::new(p, q - 1),
                Site::new(p + 1, q - 1),
                Site::new(p + 1, q),
                Site::new(p, q + 1),
                Site::new(p - 1, q),
            ],
            Parity::Odd => [
                Site::new(p - 1, q),
                Site::new(p, q - 1),
                Site::new(p + 1, q),
                Site::new(p + 1, q + 1),
                Site::new(p, q + 1),
                Site::new(p - 1, q + 1),
            ],
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

impl From<(i64, i64)> for Site {
    fn from((p, q): (i64, i64)) -> Self {
        Site::new(p, q)
    }
}

/// Free-function form of [`Site::neighbors`].
pub fn neighbors(s: Site) -> [Site; 6] {
    s.neighbors()
}

impl SourceSpec {
    pub const fn new(a: i64, b: i64) -> Self {
        SourceSpec { a, b }
    }

    pub fn site(self) -> Site {
        Site::new(self.a, self.b)
    }
}

impl LatticeSpec {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidLattice { m, n });
        }
        Ok(LatticeSpec { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn mi(&self) -> i64 {
        self.m as i64
    }

    fn ni(&self) -> i64 {
        self.n as i64
    }

    pub fn interior_count(&self) -> usize {
        self.m * self.n
    }

    pub fn boundary_count(&self) -> usize {
        2 * (self.n + 2) + 2 * self.m
    }

    pub fn classify(&self, s: Site) -> SiteClass {
        let (m, n) = (self.mi(), self.ni());
        let Site { p, q } = s;
        if (1..=m).contains(&p) && (1..=n).contains(&q) {
            SiteClass::Interior
        } else if ((p == 0 || p == m + 1) && (0..=n + 1).contains(&q))
            || ((q == 0 || q == n + 1) && (1..=m).contains(&p))
        {
            SiteClass::Boundary
        } else {
            SiteClass::Outside
        }
    }

    pub fn is_interior(&self, s: Site) -> bool {
        self.classify(s) == SiteClass::Interior
    }

    /// Row index of an interior site, `(q-1)*m + (p-1)`.
    pub fn interior_index(&self, s: Site) -> Option<usize> {
        self.is_interior(s)
            .then(|| (s.q as usize - 1) * self.m + (s.p as usize - 1))
    }

    pub fn interior_site(&self, index: usize) -> Site {
        debug_assert!(index < self.interior_count());
        Site::new((index % self.m) as i64 + 1, (index / self.m) as i64 + 1)
    }

    /// Interior sites ordered by `(q, p)` ascending, i.e. by row index.
    pub fn interior_sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.interior_count()).map(|i| self.interior_site(i))
    }

    /// All boundary sites, each once: the `p = 0` column, the `p = m+1`
    /// column, then the `q = 0` and `q = n+1` rows, each ascending.
    pub fn boundary_sites(&self) -> Vec<Site> {
        let (m, n) = (self.mi(), self.ni());
        let mut out = Vec::with_capacity(self.boundary_count());
        out.extend((0..=n + 1).map(|q| Site::new(0, q)));
        out.extend((0..=n + 1).map(|q| Site::new(m + 1, q)));
        out.extend((1..=m).map(|p| Site::new(p, 0)));
        out.extend((1..=m).map(|p| Site::new(p, n + 1)));
        out
    }

    /// Position of a boundary site within [`boundary_sites`](Self::boundary_sites).
    pub fn boundary_index(&self, s: Site) -> Option<usize> {
        let (m, n) = (self.mi(), self.ni());
        let col = (n + 2) as usize;
        let Site { p, q } = s;
        if self.classify(s) != SiteClass::Boundary {
            None
        } else if p == 0 {
            Some(q as usize)
        } else if p == m + 1 {
            Some(col + q as usize)
        } else if q == 0 {
            Some(2 * col + p as usize - 1)
        } else {
            Some(2 * col + self.m + p as usize - 1)
        }
    }

    pub fn check_source(&self, src: SourceSpec) -> Result<()> {
        if self.is_interior(src.site()) {
            Ok(())
        } else {
            Err(Error::InvalidSource(src.site()))
        }
    }

    /// Reflection `p -> m+1-p`. Only parity preserving, and hence an
    /// adjacency automorphism, when `m` is odd.
    pub fn mirror_p(&self, s: Site) -> Result<Site> {
        if self.m.is_multiple_of(2) {
            return Err(Error::UnsupportedGeometry { m: self.m });
        }
        Ok(Site::new(self.mi() + 1 - s.p, s.q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec7() -> LatticeSpec {
        LatticeSpec::new(7, 7).unwrap()
    }

    #[test]
    fn rejects_empty_lattice() {
        assert!(LatticeSpec::new(0, 3).is_err());
        assert!(LatticeSpec::new(3, 0).is_err());
    }

    #[test]
    fn classify_examples() {
        let spec = spec7();
        assert_eq!(spec.classify(Site::new(4, 4)), SiteClass::Interior);
        assert_eq!(spec.classify(Site::new(0, 5)), SiteClass::Boundary);
        assert_eq!(spec.classify(Site::new(9, 4)), SiteClass::Outside);
        assert_eq!(spec.classify(Site::new(-1, 0)), SiteClass::Outside);
        assert_eq!(spec.classify(Site::new(8, 8)), SiteClass::Boundary);
    }

    #[test]
    fn neighbor_lists_follow_row_parity() {
        let even: Vec<_> = Site::new(4, 4)
            .neighbors()
            .into_iter()
            .map(|s| (s.p, s.q))
            .collect();
        assert_eq!(even, vec![(3, 3), (4, 3), (5, 3), (5, 4), (4, 5), (3, 4)]);
        let odd: Vec<_> = Site::new(3, 4)
            .neighbors()
            .into_iter()
            .map(|s| (s.p, s.q))
            .collect();
        assert_eq!(odd, vec![(2, 4), (3, 3), (4, 4), (4, 5), (3, 5), (2, 5)]);
        assert!(Site::new(3, 4).neighbors().contains(&Site::new(4, 4)));
        assert!(Site::new(4, 4).neighbors().contains(&Site::new(3, 4)));
    }

    #[test]
    fn boundary_enumeration() {
        let spec = spec7();
        let b = spec.boundary_sites();
        assert_eq!(b.len(), 32);
        assert!(b.contains(&Site::new(0, 0)));
        assert!(b.contains(&Site::new(8, 8)));
        assert!(!b.contains(&Site::new(1, 1)));
        for (i, s) in b.iter().enumerate() {
            assert_eq!(spec.boundary_index(*s), Some(i));
        }
        assert_eq!(spec.boundary_index(Site::new(1, 1)), None);
    }

    #[test]
    fn interior_index_round_trip() {
        let spec = LatticeSpec::new(5, 4).unwrap();
        for (i, s) in spec.interior_sites().enumerate() {
            assert_eq!(spec.interior_index(s), Some(i));
        }
        assert_eq!(spec.interior_index(Site::new(1, 1)), Some(0));
        assert_eq!(spec.interior_index(Site::new(2, 1)), Some(1));
        assert_eq!(spec.interior_index(Site::new(1, 2)), Some(5));
        assert_eq!(spec.interior_index(Site::new(0, 2)), None);
    }

    #[test]
    fn mirror_examples() {
        let spec = spec7();
        assert_eq!(spec.mirror_p(Site::new(1, 0)).unwrap(), Site::new(7, 0));
        assert_eq!(spec.mirror_p(Site::new(4, 4)).unwrap(), Site::new(4, 4));
        assert!(LatticeSpec::new(4, 3)
            .unwrap()
            .mirror_p(Site::new(1, 1))
            .is_err());
    }

    #[test]
    fn mirror_preserves_adjacency_on_7x7() {
        let spec = spec7();
        for s in spec.interior_sites() {
            let image = spec.mirror_p(s).unwrap();
            let image_nbrs = image.neighbors();
            for t in s.neighbors() {
                assert!(
                    image_nbrs.contains(&spec.mirror_p(t).unwrap()),
                    "{s} -> {t}"
                );
            }
        }
    }

    #[test]
    fn source_must_be_interior() {
        let spec = spec7();
        assert!(spec.check_source(SourceSpec::new(4, 4)).is_ok());
        assert_eq!(
            spec.check_source(SourceSpec::new(0, 4)),
            Err(Error::InvalidSource(Site::new(0, 4)))
        );
    }
}
