//! Coalitions as bitmasks: player `i` (0-based) lives at bit `i`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest player count representable in a [`Coalition`].
pub const MAX_PLAYERS: usize = 31;

#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Coalition(pub u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn grand(n: usize) -> Coalition {
        assert!(n <= MAX_PLAYERS);
        Coalition(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(i: usize) -> Coalition {
        Coalition(1 << i)
    }

    pub fn from_players<I: IntoIterator<Item = usize>>(players: I) -> Coalition {
        Coalition(players.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Coalition {
        Coalition(self.0 | (1 << i))
    }

    pub fn without(self, i: usize) -> Coalition {
        Coalition(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Coalition) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: Coalition) -> Coalition {
        Coalition(self.0 | other.0)
    }

    pub fn intersection(self, other: Coalition) -> Coalition {
        Coalition(self.0 & other.0)
    }

    pub fn difference(self, other: Coalition) -> Coalition {
        Coalition(self.0 & !other.0)
    }

    /// Complement inside `{0, …, n-1}`.
    pub fn complement(self, n: usize) -> Coalition {
        Coalition::grand(n).difference(self)
    }

    pub fn players(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        })
    }

    /// All subsets of `self`, including `∅` and `self`, in increasing bit order.
    pub fn subsets(self) -> impl Iterator<Item = Coalition> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some((cur.wrapping_sub(full)) & full) };
            Some(Coalition(cur))
        })
    }

    /// All `2^n` coalitions of an `n`-player game in bitmask order.
    pub fn all(n: usize) -> impl Iterator<Item = Coalition> {
        (0..(1u64 << n)).map(|m| Coalition(m as u32))
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (t, i) in self.players().enumerate() {
            if t > 0 {
                write!(f, ",")?;
            }
            // 1-based in human-readable output
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}
