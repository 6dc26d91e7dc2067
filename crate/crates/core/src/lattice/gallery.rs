//! Small named lattices used as fixtures and as canonical comparison forms.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::FiniteLattice;

/// The chain `0 < 1 < ... < n-1`.
pub fn chain(n: usize) -> FiniteLattice {
    let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    let lattice = FiniteLattice::from_order(n, &pairs).expect("chains are lattices");
    match n {
        2 => lattice.with_labels(["0", "1"]),
        3 => lattice.with_labels(["0", "m", "1"]),
        _ => Ok(lattice),
    }
    .expect("label count matches")
}

/// The four-element Boolean algebra `{0, a, a', 1}`.
pub fn boolean_square() -> FiniteLattice {
    FiniteLattice::from_order(4, &[(0, 1), (0, 2), (1, 3), (2, 3)])
        .and_then(|l| l.with_labels(["0", "a", "a'", "1"]))
        .expect("Boolean square is a lattice")
}

/// The Boolean algebra of subsets of a `k`-element set, indexed by bitmask.
pub fn boolean(k: usize) -> FiniteLattice {
    if k == 2 {
        return boolean_square();
    }
    let n = 1usize << k;
    let mut pairs = Vec::new();
    for x in 0..n {
        for bit in 0..k {
            if x & (1 << bit) == 0 {
                pairs.push((x, x | (1 << bit)));
            }
        }
    }
    let labels: Vec<String> = (0..n)
        .map(|x| {
            if x == 0 {
                String::from("0")
            } else if x == n - 1 {
                String::from("1")
            } else {
                (0..k)
                    .filter(|b| x & (1 << b) != 0)
                    .map(|b| (b'a' + b as u8) as char)
                    .collect()
            }
        })
        .collect();
    FiniteLattice::from_order(n, &pairs)
        .and_then(|l| l.with_labels(labels))
        .expect("Boolean algebras are lattices")
}

/// `MO_n`: bottom, `n` complementary atom pairs, top. Atoms are laid out as
/// `a, a', b, b', ...` so the complement of atom `2i + 1` is `2i + 2`.
pub fn mo(n: usize) -> FiniteLattice {
    let size = 2 * n + 2;
    let top = size - 1;
    let mut pairs = Vec::new();
    let mut labels = Vec::with_capacity(size);
    labels.push(String::from("0"));
    for i in 0..n {
        let name = (b'a' + i as u8) as char;
        labels.push(format!("{name}"));
        labels.push(format!("{name}'"));
    }
    labels.push(String::from("1"));
    for atom in 1..top {
        pairs.push((0, atom));
        pairs.push((atom, top));
    }
    FiniteLattice::from_order(size, &pairs)
        .and_then(|l| l.with_labels(labels))
        .expect("MO_n is a lattice")
}

/// The orthocomplemented hexagon `0 < a < b < 1`, `0 < b' < a' < 1`.
pub fn o6() -> FiniteLattice {
    FiniteLattice::from_order(6, &[(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)])
        .and_then(|l| l.with_labels(["0", "a", "b", "b'", "a'", "1"]))
        .expect("O6 is a lattice")
}

/// The non-modular pentagon `N5`: `0 < x < y < 1`, `0 < z < 1`.
pub fn pentagon() -> FiniteLattice {
    FiniteLattice::from_order(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
        .and_then(|l| l.with_labels(["0", "x", "y", "z", "1"]))
        .expect("N5 is a lattice")
}

/// The lattices every axiom checker is exercised against.
pub fn canonical_corpus() -> Vec<(&'static str, FiniteLattice)> {
    Vec::from([
        ("2-chain", chain(2)),
        ("3-chain", chain(3)),
        ("boolean-square", boolean_square()),
        ("boolean-cube", boolean(3)),
        ("MO2", mo(2)),
        ("O6", o6()),
    ])
}
