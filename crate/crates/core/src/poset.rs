//! Finite posets stored as dense boolean relation matrices.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense relation matrix, `rel[x * size + y]` meaning `x ≼ y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    size: usize,
    rel: Vec<bool>,
}

impl Relation {
    pub fn empty(size: usize) -> Self {
        Self {
            size,
            rel: vec![false; size * size],
        }
    }

    /// The identity relation, `x ≼ y ⇔ x = y`.
    pub fn diagonal(size: usize) -> Self {
        let mut r = Self::empty(size);
        for x in 0..size {
            r.set(x, x, true);
        }
        r
    }

    pub fn from_pairs(size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut r = Self::diagonal(size);
        for &(x, y) in pairs {
            if x >= size || y >= size {
                return Err(Error::InvalidPoset(format!(
                    "pair ({x}, {y}) out of range for size {size}"
                )));
            }
            r.set(x, y, true);
        }
        Ok(r)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.rel[x * self.size + y]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.rel[x * self.size + y] = value;
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size).all(|x| self.get(x, x))
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.size).all(|x| ((x + 1)..self.size).all(|y| !(self.get(x, y) && self.get(y, x))))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.size;
        (0..n).all(|x| {
            (0..n).all(|y| !self.get(x, y) || (0..n).all(|z| !self.get(y, z) || self.get(x, z)))
        })
    }
}

/// True iff the relation is reflexive, antisymmetric and transitive.
pub fn validate(r: &Relation) -> bool {
    r.is_reflexive() && r.is_antisymmetric() && r.is_transitive()
}

/// Smallest transitive superset of a reflexive relation (Warshall).
///
/// Fails with [`Error::Cycle`] when the closure identifies two distinct points.
pub fn transitive_closure(r: &Relation) -> Result<Relation> {
    if !r.is_reflexive() {
        return Err(Error::InvalidPoset("transitive closure expects a reflexive relation".into()));
    }
    let n = r.size;
    let mut out = r.clone();
    for k in 0..n {
        for x in 0..n {
            if !out.get(x, k) {
                continue;
            }
            for y in 0..n {
                if out.get(k, y) {
                    out.set(x, y, true);
                }
            }
        }
    }
    for x in 0..n {
        for y in (x + 1)..n {
            if out.get(x, y) && out.get(y, x) {
                return Err(Error::Cycle(x, y));
            }
        }
    }
    Ok(out)
}

/// A validated finite poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    relation: Relation,
}

impl FinitePoset {
    pub fn new(relation: Relation) -> Result<Self> {
        if relation.size == 0 {
            return Err(Error::InvalidPoset("a poset needs at least one point".into()));
        }
        if !validate(&relation) {
            return Err(Error::InvalidPoset(
                "relation is not reflexive, antisymmetric and transitive".into(),
            ));
        }
        Ok(Self { relation })
    }

    /// Builds the poset generated by `pairs` (reflexive-transitive closure).
    pub fn from_pairs(size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(transitive_closure(&Relation::from_pairs(size, pairs)?)?)
    }

    pub fn antichain(size: usize) -> Self {
        Self {
            relation: Relation::diagonal(size),
        }
    }

    /// `0 ≺ 1 ≺ … ≺ size-1`.
    pub fn chain(size: usize) -> Self {
        let mut r = Relation::diagonal(size);
        for x in 0..size {
            for y in x..size {
                r.set(x, y, true);
            }
        }
        Self { relation: r }
    }

    pub fn size(&self) -> usize {
        self.relation.size
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.relation.get(x, y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.relation.get(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Strict pairs `x ≺ y`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| self.lt(x, y))
            .collect()
    }

    /// Number of points strictly below `x` on a longest chain ending at `x`.
    pub fn height(&self, x: usize) -> usize {
        let mut memo = vec![None; self.size()];
        self.height_memo(x, &mut memo)
    }

    fn height_memo(&self, x: usize, memo: &mut Vec<Option<usize>>) -> usize {
        if let Some(h) = memo[x] {
            return h;
        }
        let h = (0..self.size())
            .filter(|&z| self.lt(z, x))
            .map(|z| self.height_memo(z, memo) + 1)
            .max()
            .unwrap_or(0);
        memo[x] = Some(h);
        h
    }

    /// Induced sub-poset on `points`, in the given order.
    pub fn restrict(&self, points: &[usize]) -> Result<FinitePoset> {
        let mut r = Relation::empty(points.len());
        for (i, &x) in points.iter().enumerate() {
            for (j, &y) in points.iter().enumerate() {
                if x >= self.size() || y >= self.size() {
                    return Err(Error::InvalidPoset(format!("point {} out of range", x.max(y))));
                }
                r.set(i, j, self.leq(x, y));
            }
        }
        FinitePoset::new(r)
    }
}

#[derive(Serialize, Deserialize)]
struct PosetJson {
    size: usize,
    pairs: Vec<[usize; 2]>,
}

impl Serialize for FinitePoset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PosetJson {
            size: self.size(),
            pairs: self.strict_pairs().into_iter().map(|(x, y)| [x, y]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinitePoset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PosetJson::deserialize(d)?;
        let pairs: Vec<(usize, usize)> = j.pairs.iter().map(|p| (p[0], p[1])).collect();
        FinitePoset::from_pairs(j.size, &pairs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn validate_examples() {
        let chain = Relation::from_pairs(2, &[(0, 1)]).unwrap();
        assert!(validate(&chain));

        let two_cycle = Relation::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(!validate(&two_cycle));

        let open = Relation::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!validate(&open));
    }

    #[test]
    fn closure_examples() {
        let open = Relation::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let closed = transitive_closure(&open).unwrap();
        assert!(closed.get(0, 2));
        assert_eq!(transitive_closure(&closed).unwrap(), closed);

        let two_cycle = Relation::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(transitive_closure(&two_cycle), Err(Error::Cycle(0, 1)));

        let long_cycle = Relation::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 1)]).unwrap();
        assert!(matches!(transitive_closure(&long_cycle), Err(Error::Cycle(_, _))));

        assert!(transitive_closure(&Relation::empty(2)).is_err());
    }

    #[test]
    fn height_and_restrict() {
        let p = FinitePoset::from_pairs(4, &[(0, 1), (1, 2), (0, 3)]).unwrap();
        assert_eq!(p.height(0), 0);
        assert_eq!(p.height(2), 2);
        assert_eq!(p.height(3), 1);
        let sub = p.restrict(&[0, 2]).unwrap();
        assert!(sub.lt(0, 1));
        assert_eq!(FinitePoset::chain(3).strict_pairs(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn json_form_applies_closure() {
        let p: FinitePoset =
            serde_json::from_str(r#"{"size": 3, "pairs": [[0, 1], [1, 2]]}"#).unwrap();
        assert!(p.leq(0, 2));
        let back: FinitePoset = serde_json::from_value(serde_json::to_value(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<FinitePoset>(r#"{"size": 2, "pairs": [[0, 1], [1, 0]]}"#).is_err());
    }

    fn acyclic_edges() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
        (1usize..12).prop_flat_map(|n| {
            let edges = proptest::collection::vec((0..n, 0..n), 0..(2 * n));
            (Just(n), edges).prop_map(|(n, e)| {
                // orient every edge upward so the closure stays acyclic
                let e = e.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
                (n, e)
            })
        })
    }

    proptest! {
        #[test]
        fn closure_is_a_valid_idempotent_poset((n, edges) in acyclic_edges()) {
            let r = Relation::from_pairs(n, &edges).unwrap();
            let c = transitive_closure(&r).unwrap();
            prop_assert!(validate(&c));
            prop_assert_eq!(transitive_closure(&c).unwrap(), c.clone());
            for &(a, b) in &edges {
                prop_assert!(c.get(a, b));
            }
        }

        #[test]
        fn closure_of_arbitrary_relation_is_valid_or_cycle(
            n in 1usize..8,
            edges in proptest::collection::vec((0usize..8, 0usize..8), 0..20),
        ) {
            let edges: Vec<_> = edges.into_iter().filter(|&(a, b)| a < n && b < n).collect();
            let r = Relation::from_pairs(n, &edges).unwrap();
            match transitive_closure(&r) {
                Ok(c) => prop_assert!(validate(&c)),
                Err(Error::Cycle(x, y)) => prop_assert!(x != y),
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }
    }
}
