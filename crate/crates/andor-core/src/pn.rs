//! Extended-natural proof/disproof magnitudes and the pairs attached to nodes.

use core::fmt;

/// Largest representable finite magnitude (63 bits).
pub const FINITE_MAX: u64 = (1 << 63) - 1;

const INF_REPR: u64 = u64::MAX;

/// An extended natural number: a finite count in `[0, 2^63 - 1]` or infinity.
///
/// Addition is checked; a finite sum that would leave the range is an
/// [`Overflow`] error rather than a silent wrap. `x + INFINITY = INFINITY`
/// and `min(INFINITY, x) = x` hold through the derived ordering.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PnValue(u64);

/// Error returned when a finite sum exceeds [`FINITE_MAX`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

impl fmt::Display for Overflow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "finite proof-number sum exceeds {}", FINITE_MAX)
    }
}

impl core::error::Error for Overflow {}

impl PnValue {
    pub const ZERO: PnValue = PnValue(0);
    pub const ONE: PnValue = PnValue(1);
    pub const INFINITY: PnValue = PnValue(INF_REPR);

    /// A finite value, or `None` if `v` is outside `[0, FINITE_MAX]`.
    pub fn finite(v: u64) -> Option<PnValue> {
        (v <= FINITE_MAX).then_some(PnValue(v))
    }

    pub fn is_infinite(self) -> bool {
        self.0 == INF_REPR
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The finite magnitude, or `None` for infinity.
    pub fn as_finite(self) -> Option<u64> {
        (!self.is_infinite()).then_some(self.0)
    }

    /// Checked addition over extended naturals.
    pub fn checked_add(self, rhs: PnValue) -> Result<PnValue, Overflow> {
        if self.is_infinite() || rhs.is_infinite() {
            return Ok(PnValue::INFINITY);
        }
        match self.0.checked_add(rhs.0) {
            Some(sum) if sum <= FINITE_MAX => Ok(PnValue(sum)),
            _ => Err(Overflow),
        }
    }
}

impl fmt::Display for PnValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Debug for PnValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A (proof, disproof) pair.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PnPair {
    pub p: PnValue,
    pub d: PnValue,
}

impl PnPair {
    /// The `(1, 1)` initialization of a non-terminal leaf.
    pub const OPEN: PnPair = PnPair { p: PnValue::ONE, d: PnValue::ONE };
    /// `(0, inf)`: the node is solvable.
    pub const PROVEN: PnPair = PnPair { p: PnValue::ZERO, d: PnValue::INFINITY };
    /// `(inf, 0)`: the node is unsolvable.
    pub const DISPROVEN: PnPair = PnPair { p: PnValue::INFINITY, d: PnValue::ZERO };

    pub fn new(p: PnValue, d: PnValue) -> Self {
        PnPair { p, d }
    }

    pub fn is_proven(self) -> bool {
        self == Self::PROVEN
    }

    pub fn is_disproven(self) -> bool {
        self == Self::DISPROVEN
    }

    pub fn is_solved(self) -> bool {
        self.is_proven() || self.is_disproven()
    }

    /// Swap the proof and disproof components.
    pub fn swapped(self) -> PnPair {
        PnPair { p: self.d, d: self.p }
    }
}

/// A (phi, delta) pair: mover-relative proof numbers for alternating game DAGs.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PhiDeltaPair {
    pub phi: PnValue,
    pub delta: PnValue,
}

impl PhiDeltaPair {
    pub fn new(phi: PnValue, delta: PnValue) -> Self {
        PhiDeltaPair { phi, delta }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_places_infinity_last() {
        assert!(PnValue::ZERO < PnValue::ONE);
        assert!(PnValue::finite(FINITE_MAX).unwrap() < PnValue::INFINITY);
        assert_eq!(PnValue::INFINITY.min(PnValue::ONE), PnValue::ONE);
    }

    #[test]
    fn addition_absorbs_infinity() {
        let x = PnValue::finite(41).unwrap();
        assert_eq!(x.checked_add(PnValue::INFINITY).unwrap(), PnValue::INFINITY);
        assert_eq!(PnValue::INFINITY.checked_add(PnValue::INFINITY).unwrap(), PnValue::INFINITY);
    }

    #[test]
    fn addition_is_checked_at_the_range_boundary() {
        let top = PnValue::finite(FINITE_MAX).unwrap();
        assert_eq!(top.checked_add(PnValue::ZERO).unwrap(), top);
        assert_eq!(top.checked_add(PnValue::ONE), Err(Overflow));
    }

    #[test]
    fn finite_rejects_out_of_range() {
        assert!(PnValue::finite(FINITE_MAX).is_some());
        assert!(PnValue::finite(FINITE_MAX + 1).is_none());
    }

    #[test]
    fn display_uses_inf_token() {
        assert_eq!(alloc::format!("{}", PnValue::INFINITY), "inf");
        assert_eq!(alloc::format!("{}", PnValue::finite(20).unwrap()), "20");
    }

    #[test]
    fn solved_pairs() {
        assert!(PnPair::PROVEN.is_proven());
        assert!(PnPair::DISPROVEN.is_disproven());
        assert!(!PnPair::OPEN.is_solved());
        assert_eq!(PnPair::PROVEN.swapped(), PnPair::DISPROVEN);
    }
}
