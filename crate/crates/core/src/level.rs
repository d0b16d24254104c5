//! Arithmetic-progression level data: summation indices run over positive
//! integers congruent to the residue a modulo the level N, with 1 <= a <= N.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LevelError {
    #[error("level must satisfy 1 <= residue <= modulus, got N={modulus}, a={residue}")]
    Invalid { modulus: u32, residue: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Level {
    modulus: u32,
    residue: u32,
}

impl Level {
    pub fn new(modulus: u32, residue: u32) -> Result<Self, LevelError> {
        if modulus == 0 || residue == 0 || residue > modulus {
            return Err(LevelError::Invalid { modulus, residue });
        }
        Ok(Level { modulus, residue })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn residue(&self) -> u32 {
        self.residue
    }

    /// The j-th progression point a + j*N.
    pub fn point(&self, j: u64) -> u64 {
        self.residue as u64 + j * self.modulus as u64
    }

    /// Progression points up to and including `cap`.
    pub fn points_through(&self, cap: u64) -> impl Iterator<Item = u64> + '_ {
        let lv = *self;
        (0..)
            .map(move |j| lv.point(j))
            .take_while(move |&m| m <= cap)
    }

    pub fn contains(&self, m: u64) -> bool {
        m >= 1 && m % self.modulus as u64 == (self.residue % self.modulus) as u64
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.modulus, self.residue)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Level::new(2, 1).is_ok());
        assert!(Level::new(1, 1).is_ok());
        assert!(Level::new(4, 4).is_ok());
        assert_eq!(
            Level::new(3, 4),
            Err(LevelError::Invalid { modulus: 3, residue: 4 })
        );
        assert_eq!(
            Level::new(3, 0),
            Err(LevelError::Invalid { modulus: 3, residue: 0 })
        );
        assert_eq!(
            Level::new(0, 0),
            Err(LevelError::Invalid { modulus: 0, residue: 0 })
        );
    }

    #[test]
    fn progression_membership() {
        let lv = Level::new(3, 2).unwrap();
        let pts: Vec<u64> = lv.points_through(12).collect();
        assert_eq!(pts, vec![2, 5, 8, 11]);
        assert!(lv.contains(2) && lv.contains(11));
        assert!(!lv.contains(3) && !lv.contains(0));

        // residue == modulus: the multiples of N
        let lv = Level::new(3, 3).unwrap();
        let pts: Vec<u64> = lv.points_through(10).collect();
        assert_eq!(pts, vec![3, 6, 9]);
        assert!(lv.contains(9) && !lv.contains(2));

        // classical full sum
        let lv = Level::new(1, 1).unwrap();
        assert_eq!(lv.points_through(4).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
    }
}
