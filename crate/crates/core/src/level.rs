//! Exact token levels and edge labels.
//!
//! A finite level is the rational `int + tie / n`, where `n` is the rim size
//! of the block whose transformation produced it and `0 <= tie < n`. Since
//! every level of one gadget graph shares the same `n`, comparing
//! `(int, tie)` lexicographically is exact rational comparison.

use std::fmt;

/// A token level. The derived order is the level order:
/// `Unreached < Finite(..) < Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    /// No token can be here.
    Unreached,
    Finite {
        int: i64,
        tie: u32,
    },
    Infinite,
}

impl Level {
    pub const ZERO: Level = Level::Finite { int: 0, tie: 0 };

    pub const fn finite(int: i64, tie: u32) -> Level {
        Level::Finite { int, tie }
    }

    pub const fn int(int: i64) -> Level {
        Level::Finite { int, tie: 0 }
    }

    pub fn is_reached(self) -> bool {
        self != Level::Unreached
    }

    /// Integer part of a finite level.
    pub fn int_part(self) -> Option<i64> {
        match self {
            Level::Finite { int, .. } => Some(int),
            _ => None,
        }
    }

    /// Shifts a finite level by an integer; the tie part is untouched.
    pub fn shifted(self, delta: i64) -> Level {
        match self {
            Level::Finite { int, tie } => Level::Finite {
                int: int + delta,
                tie,
            },
            other => other,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Unreached => f.write_str("unreached"),
            Level::Infinite => f.write_str("inf"),
            Level::Finite { int, tie: 0 } => write!(f, "{int}"),
            Level::Finite { int, tie } => write!(f, "{int}+{tie}/n"),
        }
    }
}

/// An `in -> out` label on a gadget edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub input: Level,
    pub output: Level,
}

impl Label {
    /// `0 -> inf`: the label of every untouched circle-graph edge.
    pub const OPEN: Label = Label {
        input: Level::ZERO,
        output: Level::Infinite,
    };
    /// `inf -> 0`: usable by no token.
    pub const PROHIBITED: Label = Label {
        input: Level::Infinite,
        output: Level::ZERO,
    };

    pub const fn new(input: Level, output: Level) -> Label {
        Label { input, output }
    }

    /// Level after using this label with a token at `level`, if allowed.
    pub fn apply(self, level: Level) -> Option<Level> {
        if self == Label::PROHIBITED || !level.is_reached() || level < self.input {
            None
        } else {
            Some(self.output)
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.input, self.output)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_lexicographic_with_sentinels() {
        let mut v = vec![
            Level::Infinite,
            Level::finite(3, 1),
            Level::Unreached,
            Level::finite(3, 0),
            Level::finite(-2, 5),
            Level::ZERO,
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                Level::Unreached,
                Level::finite(-2, 5),
                Level::ZERO,
                Level::finite(3, 0),
                Level::finite(3, 1),
                Level::Infinite
            ]
        );
    }

    #[test]
    fn shift_keeps_tie() {
        assert_eq!(Level::finite(2, 3).shifted(4), Level::finite(6, 3));
        assert_eq!(Level::Infinite.shifted(4), Level::Infinite);
    }

    #[test]
    fn prohibited_label_blocks_every_token() {
        for l in [Level::ZERO, Level::finite(9, 2), Level::Infinite] {
            assert_eq!(Label::PROHIBITED.apply(l), None);
        }
        assert_eq!(Label::OPEN.apply(Level::ZERO), Some(Level::Infinite));
        assert_eq!(Label::OPEN.apply(Level::Unreached), None);
        assert_eq!(
            Label::new(Level::int(2), Level::int(5)).apply(Level::int(1)),
            None
        );
    }
}
