//! Brute-force oracles and fixture helpers shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use subentity_core::lattice::FiniteLattice;
use subentity_core::sps::StatePropertySystem;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn corpus() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(fixture(""))
        .expect("fixture directory")
        .map(|e| e.expect("entry").path())
        .collect();
    files.sort();
    files
}

/// Every permutation of `0..n`, lexicographic.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// A finite poset known only through its order relation. Meets, joins and
/// everything derived from them are recomputed by quantifying over elements.
pub struct Order {
    pub n: usize,
    pub leq: Vec<Vec<bool>>,
}

impl Order {
    pub fn of(l: &FiniteLattice) -> Self {
        let n = l.size();
        Order {
            n,
            leq: (0..n)
                .map(|a| (0..n).map(|b| l.leq(a, b)).collect())
                .collect(),
        }
    }

    fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        let lower: Vec<usize> = (0..self.n)
            .filter(|&x| self.leq[x][a] && self.leq[x][b])
            .collect();
        *lower
            .iter()
            .find(|&&x| lower.iter().all(|&y| self.leq[y][x]))
            .expect("meet exists")
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        let upper: Vec<usize> = (0..self.n)
            .filter(|&x| self.leq[a][x] && self.leq[b][x])
            .collect();
        *upper
            .iter()
            .find(|&&x| upper.iter().all(|&y| self.leq[x][y]))
            .expect("join exists")
    }

    pub fn meet_all(&self, set: &[usize]) -> usize {
        set.iter().fold(self.top(), |acc, &x| self.meet(acc, x))
    }

    pub fn bottom(&self) -> usize {
        (0..self.n)
            .find(|&x| (0..self.n).all(|y| self.leq[x][y]))
            .expect("bottom")
    }

    pub fn top(&self) -> usize {
        (0..self.n)
            .find(|&x| (0..self.n).all(|y| self.leq[y][x]))
            .expect("top")
    }

    pub fn atoms(&self) -> Vec<usize> {
        let b = self.bottom();
        (0..self.n)
            .filter(|&x| x != b && !(0..self.n).any(|y| self.lt(b, y) && self.lt(y, x)))
            .collect()
    }

    pub fn is_orthocomplement(&self, c: &[usize]) -> bool {
        let (bot, top) = (self.bottom(), self.top());
        (0..self.n).all(|a| {
            c[c[a]] == a
                && self.meet(a, c[a]) == bot
                && self.join(a, c[a]) == top
                && (0..self.n).all(|b| !self.leq[a][b] || self.leq[c[b]][c[a]])
        })
    }

    pub fn orthocomplements(&self) -> Vec<Vec<usize>> {
        permutations(self.n)
            .into_iter()
            .filter(|c| self.is_orthocomplement(c))
            .collect()
    }

    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        permutations(self.n)
            .into_iter()
            .filter(|f| {
                (0..self.n).all(|a| (0..self.n).all(|b| self.leq[a][b] == self.leq[f[a]][f[b]]))
            })
            .collect()
    }

    pub fn covering_law(&self) -> bool {
        let atoms = self.atoms();
        (0..self.n).all(|a| {
            atoms.iter().all(|&b| {
                let ab = self.join(a, b);
                (0..self.n).all(|x| !(self.lt(a, x) && self.lt(x, ab)))
            })
        })
    }

    pub fn weakly_modular_under(&self, c: &[usize]) -> bool {
        (0..self.n)
            .all(|a| (0..self.n).all(|b| !self.leq[a][b] || self.join(a, self.meet(b, c[a])) == b))
    }

    pub fn modularity_violation(&self, c: &[usize], a: usize, b: usize) -> bool {
        self.leq[a][b] && self.join(a, self.meet(b, c[a])) != b
    }

    pub fn central_under(&self, c: &[usize], b: usize) -> bool {
        (0..self.n).all(|a| self.join(self.meet(b, a), self.meet(b, c[a])) == b)
    }

    pub fn irreducible_under(&self, c: &[usize]) -> bool {
        let (bot, top) = (self.bottom(), self.top());
        (0..self.n)
            .filter(|&b| b != bot && b != top)
            .all(|b| !self.central_under(c, b))
    }

    pub fn plane_transitive(&self) -> bool {
        let atoms = self.atoms();
        let autos = self.automorphisms();
        atoms.iter().all(|&s| {
            atoms.iter().all(|&t| {
                autos.iter().any(|f| {
                    f[s] == t
                        && atoms.iter().any(|&s1| {
                            atoms.iter().any(|&s2| {
                                s1 != s2 && {
                                    let top = self.join(s1, s2);
                                    (0..self.n).all(|x| !self.leq[x][top] || f[x] == x)
                                }
                            })
                        })
                })
            })
        })
    }

    pub fn orthogonal(&self, c: &[usize], family: &[usize]) -> bool {
        family
            .iter()
            .all(|&x| family.iter().all(|&y| x == y || self.leq[x][c[y]]))
    }

    /// Size of the largest orthogonal family of nonzero elements, by subset enumeration.
    pub fn max_orthogonal_size(&self, c: &[usize]) -> usize {
        let nonzero: Vec<usize> = (0..self.n).filter(|&x| x != self.bottom()).collect();
        (0u32..1 << nonzero.len())
            .map(|mask| {
                nonzero
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &x)| x)
                    .collect::<Vec<_>>()
            })
            .filter(|f| self.orthogonal(c, f))
            .map(|f| f.len())
            .max()
            .unwrap_or(0)
    }
}

/// Expected pass flags of the eight-check battery, in battery order, for
/// states given by their actual property sets.
pub fn battery_oracle(order: &Order, actual: &[Vec<usize>]) -> [bool; 8] {
    let strongest: Vec<usize> = actual.iter().map(|xi| order.meet_all(xi)).collect();
    let atoms = order.atoms();
    let state_determination = (0..strongest.len())
        .all(|p| (0..strongest.len()).all(|q| p == q || strongest[p] != strongest[q]));
    let atomicity = strongest.iter().all(|s| atoms.contains(s));
    let cs = order.orthocomplements();
    let all_under = |f: &dyn Fn(&[usize]) -> bool| !cs.is_empty() && cs.iter().all(|c| f(c));
    [
        state_determination,
        atomicity,
        !cs.is_empty(),
        order.covering_law(),
        all_under(&|c| order.weakly_modular_under(c)),
        order.plane_transitive(),
        all_under(&|c| order.irreducible_under(c)),
        false,
    ]
}

pub fn actual_sets(sps: &StatePropertySystem) -> Vec<Vec<usize>> {
    (0..sps.num_states()).map(|p| sps.xi(p)).collect()
}

/// Some `(m, n)` satisfying surjectivity, injectivity and covariance, found by
/// enumerating every injective `n` and, for each, every function `m`.
pub fn naive_subentity(
    part: &StatePropertySystem,
    whole: &StatePropertySystem,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let (pk, wk) = (part.num_properties(), whole.num_properties());
    let (ps, ws) = (part.num_states(), whole.num_states());
    if pk > wk || ps == 0 && ws > 0 {
        return None;
    }
    let mut injections = Vec::new();
    let mut current = Vec::new();
    fn inject(k: usize, n: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for v in 0..n {
            if !current.contains(&v) {
                current.push(v);
                inject(k, n, current, out);
                current.pop();
            }
        }
    }
    inject(pk, wk, &mut current, &mut injections);
    let total = ps.checked_pow(ws as u32).expect("small search space");
    for n in &injections {
        for code in 0..total {
            let m: Vec<usize> = (0..ws).map(|i| code / ps.pow(i as u32) % ps).collect();
            let surjective = (0..ps).all(|q| m.contains(&q));
            let covariant = (0..ws)
                .all(|w| (0..pk).all(|a| part.is_actual(m[w], a) == whole.is_actual(w, n[a])));
            if surjective && covariant {
                return Some((m, n.clone()));
            }
        }
    }
    None
}
