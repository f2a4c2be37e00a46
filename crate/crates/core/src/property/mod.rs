//! Properties of permutations and finite query-complete families of them.
//!
//! A family is query-complete when, for every `σ`, membership of an inflation
//! `σ[α_1, ..., α_m]` in each member is decided by which members each child
//! `α_i` satisfies. [`PropertyUniverse`] holds such a family, [`Profile`] the
//! members a permutation satisfies, and [`PropertyUniverse::transfer`] the
//! rule computing an inflation's profile from its children's.

mod transfer;
mod universe;

pub use universe::{Origin, Profile, PropertyUniverse};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::perm::{PermError, Permutation, VincularPattern};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropertyError {
    #[error("unknown property `{0}`")]
    Unknown(String),
    #[error("invalid pattern in `{spec}`: {source}")]
    Pattern { spec: String, source: PermError },
    #[error("barred patterns are supported by the brute-force oracle only: `{0}`")]
    BarredUnsupported(String),
    #[error("`involution` selects the involution pipeline and is not a property")]
    InvolutionNotAProperty,
    #[error("universe has {0} properties; at most 128 are supported")]
    UniverseTooLarge(usize),
    #[error("property {0} is not in the universe")]
    NotInUniverse(String),
    #[error("universe is not closed under inverses")]
    NotInverseClosed,
    #[error("transfer through {sigma} expects {expected} child profiles, got {got}")]
    Arity { sigma: Permutation, expected: usize, got: usize },
    #[error("transfer needs a skeleton of length at least 2, got {0}")]
    TrivialSkeleton(Permutation),
    #[error("transfer of {property} consults {missing}, which is missing from the universe")]
    NotQueryComplete { property: String, missing: String },
}

/// A property is a set of permutations, given here by a membership test.
///
/// Variant order is the canonical universe order (family first); patterns sort
/// by length and then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    SumIndec,
    SkewIndec,
    IsSingleton,
    EvenLength,
    /// Even number of inversions.
    EvenPerm,
    Alternating,
    BeginsRise,
    EndsRise,
    Dumont1,
    /// Dumont condition on all but the last entry.
    DumontBody,
    /// As [`Property::DumontBody`] with the parities of values swapped.
    DumontBodyFlipped,
    LastValueEven,
    Avoid(Permutation),
    /// No copy of the pattern respecting its adjacencies and, when set, with
    /// its first (last) entry at the host's first (last) position.
    AvoidVincular {
        pattern: VincularPattern,
        left: bool,
        right: bool,
    },
    /// `{π⁻¹ : π ∈ P}`. Build through [`Property::inverse`] to keep it normalized.
    Inverse(Box<Property>),
}

impl Property {
    /// Vincular avoidance, collapsing to classical avoidance when there are no
    /// adjacencies or anchors.
    pub fn avoid_vincular(pattern: VincularPattern, left: bool, right: bool) -> Property {
        if pattern.is_classical() && !left && !right {
            Property::Avoid(pattern.pattern().clone())
        } else {
            Property::AvoidVincular { pattern, left, right }
        }
    }

    pub fn inverse(&self) -> Property {
        use Property::*;
        match self {
            SumIndec | SkewIndec | IsSingleton | EvenLength | EvenPerm => self.clone(),
            Avoid(d) => Avoid(d.inverse()),
            Inverse(p) => (**p).clone(),
            other => Inverse(Box::new(other.clone())),
        }
    }

    /// Direct membership test.
    pub fn holds(&self, pi: &Permutation) -> bool {
        use Property::*;
        match self {
            SumIndec => pi.is_sum_indecomposable(),
            SkewIndec => pi.is_skew_indecomposable(),
            IsSingleton => pi.len() == 1,
            EvenLength => pi.len() % 2 == 0,
            EvenPerm => pi.is_even(),
            Alternating => pi.is_alternating(),
            BeginsRise => pi.begins_with_rise(),
            EndsRise => pi.ends_with_rise(),
            Dumont1 => pi.is_dumont1(),
            DumontBody => pi.dumont_body(false),
            DumontBodyFlipped => pi.dumont_body(true),
            LastValueEven => pi.last_value_even(),
            Avoid(d) => pi.avoids(d),
            AvoidVincular { pattern, left, right } => !pi.contains_vincular_anchored(pattern, *left, *right),
            Inverse(p) => p.holds(&pi.inverse()),
        }
    }

    /// Properties whose presence makes this one's transfer rule computable.
    pub(crate) fn auxiliaries(&self) -> Vec<Property> {
        use Property::*;
        match self {
            SumIndec | SkewIndec | IsSingleton | EvenLength => vec![],
            EvenPerm => vec![EvenLength],
            Alternating => vec![BeginsRise, EndsRise, IsSingleton],
            BeginsRise | EndsRise => vec![IsSingleton],
            Dumont1 | DumontBody | DumontBodyFlipped | LastValueEven => {
                vec![DumontBody, DumontBodyFlipped, LastValueEven, EvenLength]
            }
            Avoid(d) => {
                let n = d.len();
                (0..n)
                    .filter(|_| n > 1)
                    .map(|skip| {
                        let keep: Vec<usize> = (0..n).filter(|&i| i != skip).collect();
                        Avoid(d.pattern_at(&keep))
                    })
                    .collect()
            }
            AvoidVincular { pattern, left, right } => {
                let k = pattern.pattern().len();
                let mut out = Vec::new();
                for a in 0..k {
                    for b in a + 1..=k {
                        if (a, b) != (0, k) {
                            out.push(segment_property(pattern, *left, *right, a, b));
                        }
                    }
                }
                out
            }
            Inverse(p) => p.auxiliaries().iter().map(Property::inverse).collect(),
        }
    }
}

/// The avoidance property for entries `a..b` of a vincular pattern, anchored
/// wherever the neighbouring entry outside the run had to be adjacent.
pub(crate) fn segment_property(pattern: &VincularPattern, left: bool, right: bool, a: usize, b: usize) -> Property {
    let k = pattern.pattern().len();
    let adj = pattern.adjacent();
    let l = if a == 0 { left } else { adj[a - 1] };
    let r = if b == k { right } else { adj[b - 1] };
    Property::avoid_vincular(pattern.segment(a, b), l, r)
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Property::*;
        match self {
            SumIndec => f.write_str("sum_indec"),
            SkewIndec => f.write_str("skew_indec"),
            IsSingleton => f.write_str("singleton"),
            EvenLength => f.write_str("even_length"),
            EvenPerm => f.write_str("even"),
            Alternating => f.write_str("alternating"),
            BeginsRise => f.write_str("begins_rise"),
            EndsRise => f.write_str("ends_rise"),
            Dumont1 => f.write_str("dumont1"),
            DumontBody => f.write_str("dumont_body"),
            DumontBodyFlipped => f.write_str("dumont_body_flipped"),
            LastValueEven => f.write_str("last_value_even"),
            Avoid(d) => write!(f, "avoid:{d}"),
            AvoidVincular { pattern, left, right } => {
                write!(f, "avoid_vincular:{}{}{}", if *left { "^" } else { "" }, pattern, if *right { "$" } else { "" })
            }
            Inverse(p) => write!(f, "inverse({p})"),
        }
    }
}

impl fmt::Debug for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Property {
    type Err = PropertyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use Property::*;
        let s = s.trim();
        let pattern_err = |source| PropertyError::Pattern { spec: s.to_string(), source };
        if let Some(inner) = s.strip_prefix("inverse(").and_then(|r| r.strip_suffix(')')) {
            return Ok(inner.parse::<Property>()?.inverse());
        }
        if let Some(rest) = s.strip_prefix("avoid_vincular:") {
            let (left, rest) = match rest.strip_prefix('^') {
                Some(r) => (true, r),
                None => (false, rest),
            };
            let (right, rest) = match rest.strip_suffix('$') {
                Some(r) => (true, r),
                None => (false, rest),
            };
            let pattern: VincularPattern = rest.parse().map_err(pattern_err)?;
            return Ok(Property::avoid_vincular(pattern, left, right));
        }
        if let Some(rest) = s.strip_prefix("avoid:") {
            return Ok(Avoid(rest.parse().map_err(pattern_err)?));
        }
        if s.starts_with("avoid_barred:") {
            return Err(PropertyError::BarredUnsupported(s.to_string()));
        }
        Ok(match s {
            "sum_indec" => SumIndec,
            "skew_indec" => SkewIndec,
            "singleton" => IsSingleton,
            "even_length" => EvenLength,
            "even" => EvenPerm,
            "alternating" => Alternating,
            "begins_rise" => BeginsRise,
            "ends_rise" => EndsRise,
            "dumont1" => Dumont1,
            "dumont_body" => DumontBody,
            "dumont_body_flipped" => DumontBodyFlipped,
            "last_value_even" => LastValueEven,
            "involution" => return Err(PropertyError::InvolutionNotAProperty),
            _ => return Err(PropertyError::Unknown(s.to_string())),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in [
            "avoid:132",
            "avoid_vincular:1-32",
            "avoid_vincular:^1-2",
            "avoid_vincular:3-12$",
            "alternating",
            "even",
            "dumont1",
            "inverse(alternating)",
            "inverse(avoid_vincular:1-32)",
        ] {
            let prop: Property = s.parse().unwrap();
            assert_eq!(prop.to_string(), s);
        }
        assert_eq!("avoid_vincular:1-3-2".parse::<Property>().unwrap(), Property::Avoid(p("132")));
        assert_eq!("inverse(avoid:132)".parse::<Property>().unwrap(), Property::Avoid(p("132")));
        assert_eq!("inverse(avoid:231)".parse::<Property>().unwrap(), Property::Avoid(p("312")));
        assert!(matches!("avoid_barred:[3]12".parse::<Property>(), Err(PropertyError::BarredUnsupported(_))));
        assert!(matches!("involution".parse::<Property>(), Err(PropertyError::InvolutionNotAProperty)));
        assert!("frobnicate".parse::<Property>().is_err());
    }

    #[test]
    fn inverse_normalizes() {
        let alt = Property::Alternating;
        assert_eq!(alt.inverse().inverse(), alt);
        assert_eq!(Property::EvenPerm.inverse(), Property::EvenPerm);
        // 132 is its own inverse
        assert_eq!(p("132").inverse(), p("132"));
        assert_eq!(Property::Avoid(p("2413")).inverse(), Property::Avoid(p("3142")));
    }

    #[test]
    fn inverse_membership_matches_inverse_permutation() {
        for n in 1..=6 {
            for pi in Permutation::all_of_length(n) {
                for prop in [Property::Alternating, Property::Dumont1, Property::BeginsRise] {
                    assert_eq!(prop.inverse().holds(&pi), prop.holds(&pi.inverse()));
                }
            }
        }
    }

    #[test]
    fn vincular_segments_carry_anchors() {
        let prop: Property = "avoid_vincular:1-32".parse().unwrap();
        let aux: Vec<String> = prop.auxiliaries().iter().map(|a| a.to_string()).collect();
        assert!(aux.contains(&"avoid_vincular:21".to_string()));
        assert!(aux.contains(&"avoid_vincular:1-2$".to_string()));
        assert!(aux.contains(&"avoid_vincular:1$".to_string()));
        assert!(aux.contains(&"avoid_vincular:^1".to_string()));
        assert!(aux.contains(&"avoid:1".to_string()));
    }
}
