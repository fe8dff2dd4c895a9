//! Dependence facts and the operations on them: type join, composition and
//! loop correction.
//!
//! A unary fact `i -δ-> j` says the final value of `Xj` can depend on the
//! initial value of `Xi` with growth type `δ`. A binary fact pairs two
//! near-identity unary facts that hold in the same execution; it is how the
//! analysis notices that a value can be added to itself.

use std::fmt;

use crate::ast::Var;

/// Growth type of a dependence, ordered `Identity < Additive <
/// Multiplicative < Exponential`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DepType {
    /// `1`: the value is copied.
    Identity,
    /// `1+`: something is added to the value.
    Additive,
    /// `2`: the value is multiplied by something.
    Multiplicative,
    /// `3`: the bad kind (exponential, or super-linear in linear mode).
    Exponential,
}

impl DepType {
    pub const ALL: [DepType; 4] = [
        DepType::Identity,
        DepType::Additive,
        DepType::Multiplicative,
        DepType::Exponential,
    ];

    pub fn join(self, other: DepType) -> DepType {
        self.max(other)
    }

    /// True for `1` and `1+`.
    pub fn is_near_identity(self) -> bool {
        self <= DepType::Additive
    }
}

impl fmt::Display for DepType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DepType::Identity => "1",
            DepType::Additive => "1+",
            DepType::Multiplicative => "2",
            DepType::Exponential => "3",
        })
    }
}

/// Which growth bound is being decided.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    Poly,
    Lin,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Poly => "poly",
            Mode::Lin => "lin",
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dep {
    Unary {
        src: Var,
        ty: DepType,
        dst: Var,
    },
    /// Two facts `src[0] -> dst[0]` and `src[1] -> dst[1]`, stored so that
    /// `(src[0], dst[0]) < (src[1], dst[1])`.
    Binary {
        src: [Var; 2],
        dst: [Var; 2],
    },
}

impl Dep {
    pub fn unary(src: Var, ty: DepType, dst: Var) -> Dep {
        Dep::Unary { src, ty, dst }
    }

    /// The conjunction of `i -> j` and `i2 -> j2`, canonically oriented.
    /// `None` when both halves are the same pair.
    pub fn binary(i: Var, i2: Var, j: Var, j2: Var) -> Option<Dep> {
        match (i, j).cmp(&(i2, j2)) {
            std::cmp::Ordering::Less => Some(Dep::Binary {
                src: [i, i2],
                dst: [j, j2],
            }),
            std::cmp::Ordering::Greater => Some(Dep::Binary {
                src: [i2, i],
                dst: [j2, j],
            }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn is_binary(&self) -> bool {
        matches!(self, Dep::Binary { .. })
    }

    /// True if the binary orientation invariant holds (always true for unary).
    pub fn is_canonical(&self) -> bool {
        match *self {
            Dep::Unary { .. } => true,
            Dep::Binary { src, dst } => (src[0], dst[0]) < (src[1], dst[1]),
        }
    }
}

impl fmt::Display for Dep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dep::Unary { src, ty, dst } => write!(f, "{src} -{ty}-> {dst}"),
            Dep::Binary { src, dst } => {
                write!(f, "<{} {} => {} {}>", src[0], src[1], dst[0], dst[1])
            }
        }
    }
}

/// Result of chaining two binary halves: collapses to a multiplicative
/// unary fact when both halves start and end at the same variables.
fn pair(i: Var, i2: Var, k: Var, k2: Var) -> Dep {
    if i == i2 && k == k2 {
        Dep::unary(i, DepType::Multiplicative, k)
    } else {
        Dep::binary(i, i2, k, k2).expect("distinct halves")
    }
}

/// Every result of composing `a` followed by `b`.
///
/// Only binary-with-binary composition can have two results: when both
/// halves of `a` end at the same variable, either half of `b` may continue
/// either half of `a`.
pub fn compose_all(a: Dep, b: Dep) -> impl Iterator<Item = Dep> {
    let mut out = [None, None];
    match (a, b) {
        (
            Dep::Unary {
                src: i,
                ty: alpha,
                dst: j,
            },
            Dep::Unary { src, ty: beta, dst: k },
        ) => {
            if j == src {
                out[0] = Some(Dep::unary(i, alpha.join(beta), k));
            }
        }
        (Dep::Unary { src: i, ty, dst: j }, Dep::Binary { src, dst }) => {
            if ty.is_near_identity() && src == [j, j] {
                out[0] = Dep::binary(i, i, dst[0], dst[1]);
            }
        }
        (Dep::Binary { src, dst }, Dep::Unary { src: j, ty, dst: k }) => {
            if ty.is_near_identity() && dst == [j, j] {
                out[0] = Dep::binary(src[0], src[1], k, k);
            }
        }
        (Dep::Binary { src: s1, dst: d1 }, Dep::Binary { src: s2, dst: d2 }) => {
            if d1 == s2 {
                out[0] = Some(pair(s1[0], s1[1], d2[0], d2[1]));
            }
            if d1 == [s2[1], s2[0]] {
                let swapped = pair(s1[0], s1[1], d2[1], d2[0]);
                if out[0] != Some(swapped) {
                    out[1] = Some(swapped);
                }
            }
        }
    }
    out.into_iter().flatten()
}

/// Composition `a · b`, or `None` when undefined. When two pairings of
/// binary halves both apply, the direct one is returned; see [`compose_all`].
pub fn compose(a: Dep, b: Dep) -> Option<Dep> {
    compose_all(a, b).next()
}

/// The loop correction for a loop bounded by `bound`, defined only on
/// iterable self-dependences of type `1+` or `2`.
pub fn loop_correct(mode: Mode, bound: Var, d: Dep) -> Option<Dep> {
    let Dep::Unary { src, ty, dst } = d else {
        return None;
    };
    if src != dst {
        return None;
    }
    let ty = match (ty, mode) {
        (DepType::Additive, Mode::Poly) => DepType::Multiplicative,
        (DepType::Additive, Mode::Lin) | (DepType::Multiplicative, _) => DepType::Exponential,
        _ => return None,
    };
    Some(Dep::unary(bound, ty, dst))
}

/// All dependences over `X1..Xn`: `4n²` unary facts followed by every
/// canonical binary fact.
pub fn enumerate_deps(n: u32) -> Vec<Dep> {
    let vars: Vec<Var> = (1..=n).map(Var::new).collect();
    let mut out = Vec::new();
    for &i in &vars {
        for ty in DepType::ALL {
            for &j in &vars {
                out.push(Dep::unary(i, ty, j));
            }
        }
    }
    let pairs: Vec<(Var, Var)> = vars.iter().flat_map(|&i| vars.iter().map(move |&j| (i, j))).collect();
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for &(i2, j2) in &pairs[a + 1..] {
            out.extend(Dep::binary(i, i2, j, j2));
        }
    }
    out
}
