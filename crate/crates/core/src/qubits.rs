//! Product-basis labels for the two qubits.

/// Two-qubit basis state, ordered `|e1 e2>, |e1 g2>, |g1 e2>, |g1 g2>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TwoQubitBasis {
    EE = 0,
    EG = 1,
    GE = 2,
    GG = 3,
}

impl TwoQubitBasis {
    pub const ALL: [TwoQubitBasis; 4] = [Self::EE, Self::EG, Self::GE, Self::GG];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Number of excited qubits.
    pub fn excitations(self) -> usize {
        match self {
            Self::EE => 2,
            Self::EG | Self::GE => 1,
            Self::GG => 0,
        }
    }

    /// Whether atom 1 (`which == 0`) or atom 2 (`which == 1`) is excited.
    pub fn is_excited(self, which: usize) -> bool {
        matches!((self, which), (Self::EE, _) | (Self::EG, 0) | (Self::GE, 1))
    }
}

/// Initial atomic configurations of the diagonal atomic mixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomLabel {
    /// `|e1 e2>`
    Ee,
    /// `|g1 g2>`
    Gg,
    /// `|e1 g2>`
    Eg,
}

impl AtomLabel {
    pub const ALL: [AtomLabel; 3] = [Self::Ee, Self::Gg, Self::Eg];

    pub fn basis(self) -> TwoQubitBasis {
        match self {
            Self::Ee => TwoQubitBasis::EE,
            Self::Gg => TwoQubitBasis::GG,
            Self::Eg => TwoQubitBasis::EG,
        }
    }
}

impl std::fmt::Display for AtomLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Ee => "ee",
            Self::Gg => "gg",
            Self::Eg => "eg",
        })
    }
}
