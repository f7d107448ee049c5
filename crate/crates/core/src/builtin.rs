//! Named example pairs: `sym:n`, `dih:n`, `cyc:n`, `full:n`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::io::GroupFile;

/// A built-in Gelfand pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinPair {
    /// `(S_n, S_{n−1})`, `K` the stabilizer of point `n−1`; `2 ≤ n ≤ 7`.
    Sym(usize),
    /// Dihedral `D_n` on `n` points with `K = {e, reflection}`; `3 ≤ n ≤ 24`.
    Dih(usize),
    /// `(Z_n, {e})`; `2 ≤ n ≤ 256`.
    Cyc(usize),
    /// `(S_n, S_n)`; `2 ≤ n ≤ 7`.
    Full(usize),
}

impl BuiltinPair {
    fn range(kind: &str) -> Option<(usize, usize)> {
        match kind {
            "sym" => Some((2, 7)),
            "dih" => Some((3, 24)),
            "cyc" => Some((2, 256)),
            "full" => Some((2, 7)),
            _ => None,
        }
    }

    /// Generators in the group-file layout.
    pub fn group_file(&self) -> GroupFile {
        let n = match *self {
            BuiltinPair::Sym(n) | BuiltinPair::Dih(n) | BuiltinPair::Cyc(n) | BuiltinPair::Full(n) => n,
        };
        let rotation: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        let mut swap: Vec<u32> = (0..n as u32).collect();
        swap.swap(0, 1);
        let (group, subgroup) = match *self {
            BuiltinPair::Sym(_) => {
                let mut k = Vec::new();
                if n >= 3 {
                    // (n−1)-cycle on 0..n−2, fixing n−1.
                    let mut cycle: Vec<u32> = (0..n as u32).map(|i| (i + 1) % (n as u32 - 1)).collect();
                    cycle[n - 1] = n as u32 - 1;
                    k = vec![cycle, swap.clone()];
                }
                (vec![rotation, swap], k)
            }
            BuiltinPair::Dih(_) => {
                let reflection: Vec<u32> = (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect();
                (vec![rotation, reflection.clone()], vec![reflection])
            }
            BuiltinPair::Cyc(_) => (vec![rotation], Vec::new()),
            BuiltinPair::Full(_) => {
                let gens = vec![rotation, swap];
                (gens.clone(), gens)
            }
        };
        GroupFile {
            degree: n,
            group_generators: group,
            subgroup_generators: subgroup,
        }
    }
}

impl FromStr for BuiltinPair {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let unknown = || Error::UnknownBuiltin(spec.to_string());
        let (kind, n) = spec.split_once(':').ok_or_else(unknown)?;
        let n: usize = n.parse().map_err(|_| unknown())?;
        let (lo, hi) = Self::range(kind).ok_or_else(unknown)?;
        if n < lo || n > hi {
            return Err(Error::UnknownBuiltin(format!("{spec} (n must be in {lo}..={hi})")));
        }
        Ok(match kind {
            "sym" => BuiltinPair::Sym(n),
            "dih" => BuiltinPair::Dih(n),
            "cyc" => BuiltinPair::Cyc(n),
            _ => BuiltinPair::Full(n),
        })
    }
}

impl fmt::Display for BuiltinPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinPair::Sym(n) => write!(f, "sym:{n}"),
            BuiltinPair::Dih(n) => write!(f, "dih:{n}"),
            BuiltinPair::Cyc(n) => write!(f, "cyc:{n}"),
            BuiltinPair::Full(n) => write!(f, "full:{n}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupOptions;

    #[test]
    fn parse_and_display() {
        for s in ["sym:3", "dih:24", "cyc:256", "full:2"] {
            assert_eq!(s.parse::<BuiltinPair>().unwrap().to_string(), s);
        }
        for bad in ["sym:1", "sym:8", "dih:2", "cyc:257", "trivialK:4", "sym", "sym:x", ""] {
            assert!(matches!(bad.parse::<BuiltinPair>(), Err(Error::UnknownBuiltin(_))), "{bad}");
        }
    }

    #[test]
    fn orders_and_coset_counts() {
        let opts = GroupOptions::default();
        let cases = [
            ("sym:2", 2, 1, 2),
            ("sym:3", 6, 2, 2),
            ("sym:4", 24, 6, 2),
            ("dih:3", 6, 2, 2),
            ("dih:4", 8, 2, 3),
            ("dih:5", 10, 2, 3),
            ("dih:12", 24, 2, 7),
            ("cyc:5", 5, 1, 5),
            ("full:4", 24, 24, 1),
        ];
        for (spec, order, korder, s) in cases {
            let pair = spec.parse::<BuiltinPair>().unwrap().group_file().build(&opts).unwrap();
            assert_eq!(pair.group().order(), order, "{spec}");
            assert_eq!(pair.subgroup().len(), korder, "{spec}");
            assert_eq!(pair.num_cosets(), s, "{spec}");
        }
    }
}
