//! Transfer rules: the profile of `σ[α_1, ..., α_m]` from the children's.
//!
//! Each rule reads the children only through `child(i, q)`, "does `α_i`
//! satisfy `q`?", which answers `None` when `q` is outside the universe.

use std::collections::BTreeSet;

use super::{segment_property, Property};
use crate::perm::Permutation;

pub(crate) type ChildQuery<'a> = dyn Fn(usize, &Property) -> Option<bool> + 'a;

/// Every way of distributing the entries of `pattern` over the blocks of a
/// lenient inflation of `sigma`: `assignment[k]` is the block of entry `k`.
pub(crate) fn block_assignments(sigma: &Permutation, pattern: &Permutation) -> Vec<Vec<usize>> {
    fn rec(k: usize, sigma: &[u8], pattern: &[u8], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == pattern.len() {
            out.push(cur.clone());
            return;
        }
        let start = cur.last().copied().unwrap_or(0);
        for blk in start..sigma.len() {
            let ok = (0..k).all(|l| cur[l] == blk || (pattern[l] < pattern[k]) == (sigma[cur[l]] < sigma[blk]));
            if ok {
                cur.push(blk);
                rec(k + 1, sigma, pattern, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, sigma.entries(), pattern.entries(), &mut Vec::new(), &mut out);
    out
}

/// Maximal runs `(block, start, end)` of equal blocks in an assignment.
fn runs(assignment: &[usize]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=assignment.len() {
        if k == assignment.len() || assignment[k] != assignment[start] {
            out.push((assignment[start], start, k));
            start = k;
        }
    }
    out
}

/// The child conditions a splitting imposes: each nonempty piece, paired with
/// its block. `None` when the splitting cannot come from a vincular copy.
fn pieces(prop: &Property, sigma: &Permutation, assignment: &[usize]) -> Option<Vec<(usize, Property)>> {
    match prop {
        Property::Avoid(d) => Some(
            runs(assignment).into_iter().map(|(blk, a, b)| (blk, Property::Avoid(d.slice_pattern(a, b)))).collect(),
        ),
        Property::AvoidVincular { pattern, left, right } => {
            let k = assignment.len();
            let m = sigma.len();
            if *left && assignment[0] != 0 {
                return None;
            }
            if *right && assignment[k - 1] != m - 1 {
                return None;
            }
            let adj = pattern.adjacent();
            for i in 0..k - 1 {
                if adj[i] && assignment[i] != assignment[i + 1] && assignment[i + 1] != assignment[i] + 1 {
                    return None;
                }
            }
            Some(
                runs(assignment)
                    .into_iter()
                    .map(|(blk, a, b)| (blk, segment_property(pattern, *left, *right, a, b)))
                    .collect(),
            )
        }
        _ => None,
    }
}

fn pattern_of(prop: &Property) -> Option<&Permutation> {
    match prop {
        Property::Avoid(d) => Some(d),
        Property::AvoidVincular { pattern, .. } => Some(pattern.pattern()),
        _ => None,
    }
}

/// Splittings of an avoidance property through `sigma`, already reduced to
/// their piece conditions.
pub(crate) fn splittings(prop: &Property, sigma: &Permutation) -> Vec<Vec<(usize, Property)>> {
    let Some(pattern) = pattern_of(prop) else {
        return Vec::new();
    };
    block_assignments(sigma, pattern).iter().filter_map(|asg| pieces(prop, sigma, asg)).collect()
}

/// Whether `σ[α_1, ..., α_m]` satisfies `prop`. `split` supplies the
/// splittings for avoidance properties (cached by the caller).
pub(crate) fn evaluate(
    prop: &Property,
    sigma: &Permutation,
    child: &ChildQuery<'_>,
    split: &dyn Fn(&Property, &Permutation) -> std::sync::Arc<Vec<Vec<(usize, Property)>>>,
) -> Option<bool> {
    use Property::*;
    let m = sigma.len();
    let s = |i: usize| sigma.get(i);
    Some(match prop {
        SumIndec => sigma.is_sum_indecomposable(),
        SkewIndec => sigma.is_skew_indecomposable(),
        IsSingleton => false,
        EvenLength => {
            let mut even = true;
            for i in 0..m {
                if !child(i, &EvenLength)? {
                    even = !even;
                }
            }
            even
        }
        EvenPerm => {
            // within-block parities plus one inversion per pair of entries
            // from blocks i < j with σ(i) > σ(j)
            let mut odd = false;
            let mut odd_len = Vec::with_capacity(m);
            for i in 0..m {
                odd ^= !child(i, &EvenPerm)?;
                odd_len.push(!child(i, &EvenLength)?);
            }
            for i in 0..m {
                for j in i + 1..m {
                    if s(i) > s(j) && odd_len[i] && odd_len[j] {
                        odd = !odd;
                    }
                }
            }
            !odd
        }
        BeginsRise => {
            if child(0, &IsSingleton)? {
                s(0) < s(1)
            } else {
                child(0, &BeginsRise)?
            }
        }
        EndsRise => {
            if child(m - 1, &IsSingleton)? {
                s(m - 2) < s(m - 1)
            } else {
                child(m - 1, &EndsRise)?
            }
        }
        Alternating => {
            let mut single = Vec::with_capacity(m);
            for i in 0..m {
                if !child(i, &Alternating)? {
                    return Some(false);
                }
                single.push(child(i, &IsSingleton)?);
            }
            for i in 0..m - 1 {
                let rise = s(i) < s(i + 1);
                // the step into a block junction must reverse direction
                if !single[i] && child(i, &EndsRise)? == rise {
                    return Some(false);
                }
                if !single[i + 1] && child(i + 1, &BeginsRise)? == rise {
                    return Some(false);
                }
            }
            // a singleton block sits between two junctions
            for i in 1..m - 1 {
                if single[i] && (s(i - 1) < s(i)) == (s(i) < s(i + 1)) {
                    return Some(false);
                }
            }
            true
        }
        Dumont1 | DumontBody | DumontBodyFlipped | LastValueEven => {
            let mut odd_len = Vec::with_capacity(m);
            for i in 0..m {
                odd_len.push(!child(i, &EvenLength)?);
            }
            // parity of the value offset of each block
            let offset_odd: Vec<bool> =
                (0..m).map(|i| (0..m).filter(|&j| s(j) < s(i) && odd_len[j]).count() % 2 == 1).collect();
            let last_even = child(m - 1, &LastValueEven)? ^ offset_odd[m - 1];
            match prop {
                LastValueEven => last_even,
                Dumont1 => !last_even && dumont_body(sigma, &offset_odd, false, child)?,
                DumontBody => dumont_body(sigma, &offset_odd, false, child)?,
                _ => dumont_body(sigma, &offset_odd, true, child)?,
            }
        }
        Avoid(_) | AvoidVincular { .. } => {
            for pieces in split(prop, sigma).iter() {
                let mut embeds = true;
                for (blk, piece) in pieces {
                    if child(*blk, piece)? {
                        embeds = false;
                        break;
                    }
                }
                if embeds {
                    return Some(false);
                }
            }
            true
        }
        Inverse(inner) => {
            // (σ[α_1..α_m])⁻¹ = σ⁻¹[β_1..β_m] with β_j = α_{σ⁻¹(j)}⁻¹
            let inv = sigma.inverse();
            let relabel = |j: usize, q: &Property| child(inv.get(j) - 1, &q.inverse());
            evaluate(inner, &inv, &relabel, split)?
        }
    })
}

fn dumont_body(sigma: &Permutation, offset_odd: &[bool], flipped: bool, child: &ChildQuery<'_>) -> Option<bool> {
    let m = sigma.len();
    for i in 0..m {
        let shift = offset_odd[i] ^ flipped;
        let body = if shift { Property::DumontBodyFlipped } else { Property::DumontBody };
        if !child(i, &body)? {
            return Some(false);
        }
        if i + 1 < m {
            let even = child(i, &Property::LastValueEven)? ^ shift;
            let descent = sigma.get(i) > sigma.get(i + 1);
            if descent != even {
                return Some(false);
            }
        }
    }
    Some(true)
}

/// Properties the rule for `prop` may consult when the skeleton is `sigma`.
pub(crate) fn dependencies(prop: &Property, sigma: &Permutation) -> BTreeSet<Property> {
    use Property::*;
    let mut out = BTreeSet::new();
    match prop {
        SumIndec | SkewIndec | IsSingleton => {}
        EvenLength => {
            out.insert(EvenLength);
        }
        EvenPerm => {
            out.extend([EvenPerm, EvenLength]);
        }
        BeginsRise => {
            out.extend([BeginsRise, IsSingleton]);
        }
        EndsRise => {
            out.extend([EndsRise, IsSingleton]);
        }
        Alternating => {
            out.extend([Alternating, BeginsRise, EndsRise, IsSingleton]);
        }
        LastValueEven => {
            out.extend([LastValueEven, EvenLength]);
        }
        Dumont1 | DumontBody | DumontBodyFlipped => {
            out.extend([DumontBody, DumontBodyFlipped, LastValueEven, EvenLength]);
        }
        Avoid(_) | AvoidVincular { .. } => {
            for pieces in splittings(prop, sigma) {
                out.extend(pieces.into_iter().map(|(_, q)| q));
            }
        }
        Inverse(inner) => {
            out.extend(dependencies(inner, &sigma.inverse()).iter().map(Property::inverse));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn lenient_inflations_of_132_through_12() {
        let asg = block_assignments(&p("12"), &p("132"));
        // 132 entirely in either block, or 1 | 32
        assert_eq!(asg, vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 1, 1]]);
        let asg = block_assignments(&p("21"), &p("132"));
        assert_eq!(asg, vec![vec![0, 0, 0], vec![1, 1, 1]]);
    }

    #[test]
    fn lenient_splittings_match_containment() {
        // an embedding of β in σ[α] exists iff some splitting has every
        // nonempty piece contained in its child
        let kids: Vec<Permutation> = (1..=3).flat_map(Permutation::all_of_length).collect();
        let betas: Vec<Permutation> = (1..=4).flat_map(Permutation::all_of_length).collect();
        for sigma in [p("12"), p("21"), p("231"), p("2413")] {
            for beta in &betas {
                let prop = Property::Avoid(beta.clone());
                let splits = splittings(&prop, &sigma);
                let mut tuple = vec![0usize; sigma.len()];
                loop {
                    let children: Vec<Permutation> = tuple.iter().map(|&i| kids[i].clone()).collect();
                    let host = sigma.inflate(&children).unwrap();
                    let via_split = splits.iter().any(|pieces| pieces.iter().all(|(blk, q)| !q.holds(&children[*blk])));
                    assert_eq!(via_split, host.contains(beta), "{sigma} {beta} {host}");
                    if !advance(&mut tuple, kids.len()) {
                        break;
                    }
                }
            }
        }
    }

    fn advance(tuple: &mut [usize], base: usize) -> bool {
        for slot in tuple.iter_mut() {
            *slot += 1;
            if *slot < base {
                return true;
            }
            *slot = 0;
        }
        false
    }
}
