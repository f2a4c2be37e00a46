use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use super::transfer::{self, evaluate, splittings};
use super::{Property, PropertyError};
use crate::perm::Permutation;

/// The set of universe members a permutation satisfies, one bit per member.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Profile(pub u128);

impl Profile {
    pub fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    pub fn with(self, index: usize, value: bool) -> Profile {
        if value {
            Profile(self.0 | 1 << index)
        } else {
            Profile(self.0 & !(1 << index))
        }
    }

    pub fn bits(self) -> u128 {
        self.0
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile({:#b})", self.0)
    }
}

/// Why a property is in a universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Requested,
    /// Sum and skew indecomposability, always present.
    Adjoined,
    /// Needed by the transfer rule of another member.
    InducedBy(Property),
    /// Inverse of another member, in an inverse-closed universe.
    InverseOf(Property),
}

type Splits = Arc<Vec<Vec<(usize, Property)>>>;

/// A finite query-complete family of properties in canonical order.
pub struct PropertyUniverse {
    properties: Vec<Property>,
    origins: Vec<Origin>,
    index: HashMap<Property, usize>,
    inverse_closed: bool,
    splits: RwLock<HashMap<(Property, Permutation), Splits>>,
}

impl Clone for PropertyUniverse {
    fn clone(&self) -> Self {
        PropertyUniverse {
            properties: self.properties.clone(),
            origins: self.origins.clone(),
            index: self.index.clone(),
            inverse_closed: self.inverse_closed,
            splits: RwLock::new(self.splits.read().unwrap().clone()),
        }
    }
}

impl fmt::Debug for PropertyUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PropertyUniverse")
            .field("properties", &self.properties)
            .field("inverse_closed", &self.inverse_closed)
            .finish()
    }
}

impl PropertyUniverse {
    /// The smallest query-complete family containing `requested` together
    /// with sum and skew indecomposability, and closed under inverses if asked.
    pub fn close(requested: &[Property], inverse_closed: bool) -> Result<Self, PropertyError> {
        let mut origin: HashMap<Property, Origin> = HashMap::new();
        let mut work: Vec<Property> = Vec::new();
        for p in requested {
            if !origin.contains_key(p) {
                origin.insert(p.clone(), Origin::Requested);
                work.push(p.clone());
            }
        }
        for p in [Property::SumIndec, Property::SkewIndec] {
            if !origin.contains_key(&p) {
                origin.insert(p.clone(), Origin::Adjoined);
                work.push(p);
            }
        }
        while let Some(p) = work.pop() {
            let mut next: Vec<(Property, Origin)> =
                p.auxiliaries().into_iter().map(|q| (q, Origin::InducedBy(p.clone()))).collect();
            if inverse_closed {
                next.push((p.inverse(), Origin::InverseOf(p.clone())));
            }
            for (q, why) in next {
                if !origin.contains_key(&q) {
                    origin.insert(q.clone(), why);
                    work.push(q);
                }
            }
            if origin.len() > 128 {
                return Err(PropertyError::UniverseTooLarge(origin.len()));
            }
        }
        Ok(Self::from_origins(origin, inverse_closed))
    }

    fn from_origins(origin: HashMap<Property, Origin>, inverse_closed: bool) -> Self {
        let mut properties: Vec<Property> = origin.keys().cloned().collect();
        properties.sort();
        let origins = properties.iter().map(|p| origin[p].clone()).collect();
        let index = properties.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        PropertyUniverse { properties, origins, index, inverse_closed, splits: RwLock::new(HashMap::new()) }
    }

    pub fn properties(&self) -> &[Property] {
        &self.properties
    }

    pub fn len(&self) -> usize {
        self.properties.len()
    }

    pub fn is_empty(&self) -> bool {
        self.properties.is_empty()
    }

    pub fn origin(&self, index: usize) -> &Origin {
        &self.origins[index]
    }

    pub fn index_of(&self, prop: &Property) -> Option<usize> {
        self.index.get(prop).copied()
    }

    pub fn is_inverse_closed(&self) -> bool {
        self.inverse_closed
    }

    /// Whether a permutation with profile `profile` satisfies `prop`.
    pub fn has(&self, profile: Profile, prop: &Property) -> Option<bool> {
        self.index_of(prop).map(|i| profile.contains(i))
    }

    /// Profile by direct membership tests.
    pub fn profile(&self, pi: &Permutation) -> Profile {
        self.properties.iter().enumerate().fold(Profile(0), |acc, (i, p)| acc.with(i, p.holds(pi)))
    }

    /// Profile of `sigma[α_1, ..., α_m]` from the profiles of the `α_i`.
    pub fn transfer(&self, sigma: &Permutation, children: &[Profile]) -> Result<Profile, PropertyError> {
        if sigma.len() < 2 {
            return Err(PropertyError::TrivialSkeleton(sigma.clone()));
        }
        if children.len() != sigma.len() {
            return Err(PropertyError::Arity { sigma: sigma.clone(), expected: sigma.len(), got: children.len() });
        }
        let missing: RefCell<Option<Property>> = RefCell::new(None);
        let child = |i: usize, q: &Property| match self.index_of(q) {
            Some(k) => Some(children[i].contains(k)),
            None => {
                *missing.borrow_mut() = Some(q.clone());
                None
            }
        };
        let split = |p: &Property, s: &Permutation| self.splits_for(p, s);
        let mut out = Profile(0);
        for (i, p) in self.properties.iter().enumerate() {
            match evaluate(p, sigma, &child, &split) {
                Some(v) => out = out.with(i, v),
                None => {
                    return Err(PropertyError::NotQueryComplete {
                        property: p.to_string(),
                        missing: missing.borrow().as_ref().map_or_else(String::new, |q| q.to_string()),
                    })
                }
            }
        }
        Ok(out)
    }

    fn splits_for(&self, prop: &Property, sigma: &Permutation) -> Splits {
        let key = (prop.clone(), sigma.clone());
        if let Some(s) = self.splits.read().unwrap().get(&key) {
            return s.clone();
        }
        let s = Arc::new(splittings(prop, sigma));
        self.splits.write().unwrap().insert(key, s.clone());
        s
    }

    /// Profile of `π⁻¹` given the profile of `π`.
    pub fn invert_profile(&self, profile: Profile) -> Result<Profile, PropertyError> {
        if !self.inverse_closed {
            return Err(PropertyError::NotInverseClosed);
        }
        let mut out = Profile(0);
        for (i, p) in self.properties.iter().enumerate() {
            let j = self.index_of(&p.inverse()).ok_or(PropertyError::NotInverseClosed)?;
            out = out.with(i, profile.contains(j));
        }
        Ok(out)
    }

    /// The sub-universe of members that the transfer rules through `sigmas`
    /// can reach from `roots` (sum and skew indecomposability always kept).
    pub fn restrict(&self, roots: &[Property], sigmas: &[Permutation]) -> Result<Self, PropertyError> {
        let mut keep: BTreeSet<Property> = BTreeSet::new();
        let mut work: Vec<Property> = roots.to_vec();
        work.extend([Property::SumIndec, Property::SkewIndec]);
        while let Some(p) = work.pop() {
            if self.index_of(&p).is_none() {
                return Err(PropertyError::NotInUniverse(p.to_string()));
            }
            if !keep.insert(p.clone()) {
                continue;
            }
            for s in sigmas {
                work.extend(transfer::dependencies(&p, s));
            }
            if self.inverse_closed {
                work.push(p.inverse());
            }
        }
        let origin = keep
            .into_iter()
            .map(|p| {
                let o = self.origins[self.index[&p]].clone();
                (p, o)
            })
            .collect();
        Ok(Self::from_origins(origin, self.inverse_closed))
    }

    /// `{a,b,...}` listing the satisfied members.
    pub fn describe(&self, profile: Profile) -> String {
        let mut names: Vec<String> = self
            .properties
            .iter()
            .enumerate()
            .filter(|&(i, _)| profile.contains(i))
            .map(|(_, p)| p.to_string())
            .collect();
        names.sort();
        format!("{{{}}}", names.join(","))
    }
}
