use crate::error::{Result, TtpError};
use crate::instance::{CityId, Instance};

/// A cyclic tour `order[0] = order[n] = 0` visiting every other city once,
/// with the inverse map from city to position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tour {
    order: Vec<CityId>,
    position: Vec<usize>,
}

impl Tour {
    /// Builds a tour from the visiting order of cities `1..n`, excluding the
    /// depot at both ends.
    pub fn from_inner(inner: &[CityId]) -> Result<Self> {
        let n = inner.len() + 1;
        let mut order = Vec::with_capacity(n + 1);
        order.push(0);
        order.extend_from_slice(inner);
        order.push(0);
        let mut position = vec![usize::MAX; n];
        position[0] = 0;
        for (k, &c) in inner.iter().enumerate() {
            if c == 0 || c >= n {
                return Err(TtpError::InvalidSolution(format!("city id {c} out of range")));
            }
            if position[c] != usize::MAX {
                return Err(TtpError::InvalidSolution(format!("city {} visited twice", c + 1)));
            }
            position[c] = k + 1;
        }
        Ok(Tour { order, position })
    }

    /// Builds a tour from a full closed sequence starting and ending at city 0.
    pub fn from_closed(order: &[CityId]) -> Result<Self> {
        if order.len() < 3 || order[0] != 0 || order[order.len() - 1] != 0 {
            return Err(TtpError::InvalidSolution(
                "tour must start and end at the first city".into(),
            ));
        }
        Self::from_inner(&order[1..order.len() - 1])
    }

    pub fn identity(n: usize) -> Self {
        let inner: Vec<_> = (1..n).collect();
        Self::from_inner(&inner).expect("identity tour is valid")
    }

    /// Number of cities `n`; valid positions are `0..=n`.
    pub fn len(&self) -> usize {
        self.order.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn city_at(&self, k: usize) -> CityId {
        self.order[k]
    }

    #[inline]
    pub fn position_of(&self, c: CityId) -> usize {
        self.position[c]
    }

    pub fn order(&self) -> &[CityId] {
        &self.order
    }

    /// Reverses the segment between positions `b` and `e`, both inclusive.
    pub fn two_opt(&mut self, b: usize, e: usize) -> Result<()> {
        check_segment(self.len(), b, e)?;
        self.order[b..=e].reverse();
        for k in b..=e {
            self.position[self.order[k]] = k;
        }
        Ok(())
    }

    /// Total closed-tour distance.
    pub fn length(&self, inst: &Instance) -> f64 {
        self.order
            .windows(2)
            .map(|w| inst.distance(w[0], w[1]))
            .sum()
    }

    /// Tour length after reversing `[b, e]`, computed from the four affected
    /// edges.
    pub fn two_opt_length(&self, inst: &Instance, b: usize, e: usize, length: f64) -> Result<f64> {
        check_segment(self.len(), b, e)?;
        let o = &self.order;
        Ok(length + inst.distance(o[b - 1], o[e]) + inst.distance(o[b], o[e + 1])
            - inst.distance(o[b - 1], o[b])
            - inst.distance(o[e], o[e + 1]))
    }

    pub fn is_valid(&self) -> bool {
        let n = self.len();
        if self.order[0] != 0 || self.order[n] != 0 || self.position[0] != 0 {
            return false;
        }
        let mut seen = vec![false; n];
        for k in 1..n {
            let c = self.order[k];
            if c == 0 || c >= n || seen[c] || self.position[c] != k {
                return false;
            }
            seen[c] = true;
        }
        true
    }
}

pub(crate) fn check_segment(n: usize, b: usize, e: usize) -> Result<()> {
    if b == 0 || b >= e || e >= n {
        return Err(TtpError::InvalidMove(format!(
            "segment [{b}, {e}] must satisfy 0 < b < e < {n}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed(cities: &[usize]) -> Tour {
        // one-based to zero-based
        let z: Vec<_> = cities.iter().map(|c| c - 1).collect();
        Tour::from_closed(&z).unwrap()
    }

    #[test]
    fn reverses_segment() {
        let mut t = closed(&[1, 2, 3, 4, 5, 1]);
        t.two_opt(1, 3).unwrap();
        assert_eq!(t, closed(&[1, 4, 3, 2, 5, 1]));
        assert!(t.is_valid());
    }

    #[test]
    fn adjacent_pair_swap() {
        let mut t = closed(&[1, 2, 3, 1]);
        t.two_opt(1, 2).unwrap();
        assert_eq!(t, closed(&[1, 3, 2, 1]));
    }

    #[test]
    fn involution() {
        let orig = closed(&[1, 3, 5, 2, 6, 4, 1]);
        let mut t = orig.clone();
        t.two_opt(2, 5).unwrap();
        t.two_opt(2, 5).unwrap();
        assert_eq!(t, orig);
    }

    #[test]
    fn rejects_bad_segments() {
        let mut t = Tour::identity(5);
        assert!(t.two_opt(0, 2).is_err());
        assert!(t.two_opt(3, 3).is_err());
        assert!(t.two_opt(3, 2).is_err());
        assert!(t.two_opt(1, 5).is_err());
    }

    #[test]
    fn rejects_duplicate_cities() {
        assert!(Tour::from_inner(&[1, 1, 2]).is_err());
        assert!(Tour::from_closed(&[0, 1, 2]).is_err());
    }
}
