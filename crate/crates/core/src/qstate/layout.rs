use std::fmt;

use serde::{Deserialize, Serialize};

/// The two ways Alice and Bob may hold their correlated resource.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    /// N independent classical pairs, each `(A_i, B_i)` adjacent.
    Copies,
    /// One generalized correlated state over `A_1..A_N, B_1..B_N`.
    Generalized,
}

impl SchemeKind {
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Copies => "copies",
            SchemeKind::Generalized => "generalized",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A protocol role. Indices are zero-based; `X(0)` prints as `X1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// Input qubit to be teleported (Alice).
    X(usize),
    /// Alice's half of the correlated resource.
    A(usize),
    /// Bob's half of the correlated resource.
    B(usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::X(i) => write!(f, "X{}", i + 1),
            Role::A(i) => write!(f, "A{}", i + 1),
            Role::B(i) => write!(f, "B{}", i + 1),
        }
    }
}

/// Assignment of the `3N` protocol roles to wire indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    scheme: SchemeKind,
    n: usize,
    x: Vec<usize>,
    a: Vec<usize>,
    b: Vec<usize>,
}

impl RegisterLayout {
    /// `X_1..X_N, A_1, B_1, ..., A_N, B_N`.
    pub fn copies(n: usize) -> Self {
        RegisterLayout {
            scheme: SchemeKind::Copies,
            n,
            x: (0..n).collect(),
            a: (0..n).map(|i| n + 2 * i).collect(),
            b: (0..n).map(|i| n + 2 * i + 1).collect(),
        }
    }

    /// `X_1..X_N, A_1..A_N, B_1..B_N`.
    pub fn generalized(n: usize) -> Self {
        RegisterLayout {
            scheme: SchemeKind::Generalized,
            n,
            x: (0..n).collect(),
            a: (n..2 * n).collect(),
            b: (2 * n..3 * n).collect(),
        }
    }

    pub fn for_scheme(scheme: SchemeKind, n: usize) -> Self {
        match scheme {
            SchemeKind::Copies => Self::copies(n),
            SchemeKind::Generalized => Self::generalized(n),
        }
    }

    pub fn scheme(&self) -> SchemeKind {
        self.scheme
    }

    /// Number of teleported qubits.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_wires(&self) -> usize {
        3 * self.n
    }

    pub fn x_wires(&self) -> &[usize] {
        &self.x
    }

    pub fn a_wires(&self) -> &[usize] {
        &self.a
    }

    pub fn b_wires(&self) -> &[usize] {
        &self.b
    }

    pub fn wire(&self, role: Role) -> usize {
        match role {
            Role::X(i) => self.x[i],
            Role::A(i) => self.a[i],
            Role::B(i) => self.b[i],
        }
    }

    pub fn role_of(&self, wire: usize) -> Option<Role> {
        let find = |v: &[usize]| v.iter().position(|&w| w == wire);
        find(&self.x)
            .map(Role::X)
            .or_else(|| find(&self.a).map(Role::A))
            .or_else(|| find(&self.b).map(Role::B))
    }

    /// Alice's wires, ascending.
    pub fn alice_wires(&self) -> Vec<usize> {
        let mut w: Vec<usize> = self.x.iter().chain(&self.a).copied().collect();
        w.sort_unstable();
        w
    }

    /// Layout after a wire permutation that sends the qubit on wire `w` to
    /// wire `dest[w]`.
    pub fn relabel(&self, dest: &[usize]) -> Self {
        let map = |v: &[usize]| v.iter().map(|&w| dest[w]).collect();
        RegisterLayout {
            scheme: self.scheme,
            n: self.n,
            x: map(&self.x),
            a: map(&self.a),
            b: map(&self.b),
        }
    }

    /// Whether the roles cover `0..3N` exactly once.
    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.n_wires()];
        for &w in self.x.iter().chain(&self.a).chain(&self.b) {
            if w >= seen.len() || seen[w] {
                return false;
            }
            seen[w] = true;
        }
        seen.iter().all(|&s| s)
    }
}
