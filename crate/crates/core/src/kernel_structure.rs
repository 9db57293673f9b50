//! Shift operators on kernel vectors, the nullity-string grammar, and
//! checkable predicates describing how kernels evolve along an embedded
//! sequence `A_0 ⇀ A_1 ⇀ ...`.
//!
//! Every predicate guards its hypotheses and returns
//! [`Error::Precondition`] when they do not hold, so `Ok(false)` always
//! means a genuine counterexample.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::toeplitz::{KernelBasis, ToeplitzSpec};

/// Column vector over a prime field, stored as raw residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vector(Vec<u32>);

impl Vector {
    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// Appends a trailing zero.
    pub fn shift_omega(&self) -> Vector {
        let mut v = self.0.clone();
        v.push(0);
        Vector(v)
    }

    /// Prepends a leading zero.
    pub fn shift_sigma(&self) -> Vector {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(0);
        v.extend_from_slice(&self.0);
        Vector(v)
    }

    pub fn drop_first(&self) -> Result<Vector> {
        match self.0.split_first() {
            Some((_, rest)) => Ok(Vector(rest.to_vec())),
            None => Err(Error::Domain("drop_first of an empty vector".into())),
        }
    }

    pub fn drop_last(&self) -> Result<Vector> {
        match self.0.split_last() {
            Some((_, rest)) => Ok(Vector(rest.to_vec())),
            None => Err(Error::Domain("drop_last of an empty vector".into())),
        }
    }
}

impl From<Vec<u32>> for Vector {
    fn from(v: Vec<u32>) -> Self {
        Vector(v)
    }
}

/// A finite nullity sequence `nu_0..nu_n`. Any values may be stored; use
/// [`validate_nullity_string`] to decide whether they can occur.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NullityString(Vec<usize>);

impl NullityString {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Consecutive values differ by at most one.
    pub fn is_step_bounded(&self) -> bool {
        self.0.windows(2).all(|w| w[0].abs_diff(w[1]) <= 1)
    }

    /// First position breaking the local grammar, with a reason.
    pub fn first_violation(&self) -> Option<(usize, String)> {
        let s = &self.0;
        match s.first() {
            None => return None,
            Some(&v) if v > 1 => {
                return Some((0, format!("nu_0 = {v}, but a 1x1 matrix has nullity 0 or 1")))
            }
            _ => {}
        }
        for i in 0..s.len() - 1 {
            let prev = if i == 0 { 0 } else { s[i - 1] };
            let (cur, next) = (s[i], s[i + 1]);
            let (lo, hi, what) = if cur == 0 {
                (0, 1, "after nullity 0 the next nullity is 0 or 1")
            } else if prev < cur {
                (cur - 1, cur + 1, "nullity changes by at most one per step")
            } else if prev == cur {
                (cur - 1, cur, "a repeated nullity cannot rise")
            } else {
                (
                    cur - 1,
                    cur - 1,
                    "once falling from a positive nullity it falls to zero",
                )
            };
            if next < lo || next > hi {
                return Some((i + 1, format!("{cur} -> {next}: {what}")));
            }
        }
        None
    }
}

impl From<Vec<usize>> for NullityString {
    fn from(v: Vec<usize>) -> Self {
        NullityString(v)
    }
}

impl fmt::Display for NullityString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for NullityString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad nullity value {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NullityString(values))
    }
}

/// Local-rule validator: true iff `s` is a prefix of some realizable
/// infinite nullity sequence.
pub fn validate_nullity_string(s: &NullityString) -> bool {
    s.first_violation().is_none()
}

/// Independent validator: true iff `s` is a prefix of a concatenation of the
/// blocks `0` and `1,2,..,d,d,..,d,d-1,..,1,0` (peak `d >= 1` held `u >= 1` times).
pub fn is_block_concatenation_prefix(s: &NullityString) -> bool {
    matches_from(s.values(), 0)
}

fn matches_from(s: &[usize], start: usize) -> bool {
    if start == s.len() {
        return true;
    }
    match s[start] {
        0 => matches_from(s, start + 1),
        1 => {
            let remaining = s.len() - start;
            for peak in 1..=remaining {
                for hold in 1..=remaining {
                    match match_block(&s[start..], peak, hold) {
                        BlockMatch::Truncated => return true,
                        BlockMatch::Complete(len) => {
                            if matches_from(s, start + len) {
                                return true;
                            }
                        }
                        // every larger peak shares the failing climb
                        BlockMatch::MismatchInClimb => return false,
                        // every longer hold shares the failing plateau
                        BlockMatch::MismatchInPlateau => break,
                        BlockMatch::Mismatch => {}
                    }
                }
            }
            false
        }
        _ => false,
    }
}

enum BlockMatch {
    /// `s` ended inside the block with everything matching.
    Truncated,
    /// The whole block matched; its length.
    Complete(usize),
    MismatchInClimb,
    MismatchInPlateau,
    Mismatch,
}

fn match_block(s: &[usize], peak: usize, hold: usize) -> BlockMatch {
    let plateau_end = peak + hold - 1;
    let len = plateau_end + peak;
    for i in 0..len {
        if i == s.len() {
            return BlockMatch::Truncated;
        }
        let want = if i < peak {
            i + 1
        } else if i < plateau_end {
            peak
        } else {
            peak - 1 - (i - plateau_end)
        };
        if s[i] != want {
            return if i < peak {
                BlockMatch::MismatchInClimb
            } else if i < plateau_end {
                BlockMatch::MismatchInPlateau
            } else {
                BlockMatch::Mismatch
            };
        }
    }
    BlockMatch::Complete(len)
}

fn require_extends(prev: &ToeplitzSpec, next: &ToeplitzSpec) -> Result<()> {
    let embedded = prev.field() == next.field()
        && next.order() == prev.order() + 1
        && next.a().starts_with(prev.a())
        && next.b().starts_with(prev.b());
    if embedded {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{next} does not extend {prev}")))
    }
}

/// True iff the single kernel generator has nonzero first and last entries.
/// Meaningful for one-dimensional kernels only.
pub fn generator_has_nonzero_ends(kernel: &KernelBasis) -> bool {
    match kernel.vectors() {
        [k] => k.first() != Some(0) && k.last() != Some(0),
        _ => false,
    }
}

/// For `prev ⇀ next` with nullities `0, 1`, the generator of `ker(next)` has
/// nonzero first and last entries.
pub fn check_single_generator_ends(prev: &ToeplitzSpec, next: &ToeplitzSpec) -> Result<bool> {
    require_extends(prev, next)?;
    let (np, nn) = (prev.nullity(), next.nullity());
    if (np, nn) != (0, 1) {
        return Err(Error::Precondition(format!(
            "expected nullities (0, 1), found ({np}, {nn})"
        )));
    }
    Ok(generator_has_nonzero_ends(&next.kernel_basis()))
}

/// Inside a climb `0, 1, .., d` (or `1, .., d` from the start), each kernel
/// is spanned by the two shifts of the previous one.
pub fn check_ascent_span(prev: &ToeplitzSpec, next: &ToeplitzSpec) -> Result<bool> {
    require_extends(prev, next)?;
    let s = next.nullity_string();
    let v = s.values();
    let n = next.order();
    if v[n - 1] == 0 || v[n] != v[n - 1] + 1 {
        return Err(Error::Precondition(format!(
            "expected an ascent from positive nullity, found {} -> {}",
            v[n - 1],
            v[n]
        )));
    }
    let mut j = n;
    while j > 0 && v[j] == v[j - 1] + 1 {
        j -= 1;
    }
    if !(v[j] == 0 || (j == 0 && v[0] == 1)) {
        return Err(Error::Precondition(format!("climb in {s} does not start from 0")));
    }
    let k = prev.kernel_basis();
    let spanned = k.omega().join(&k.sigma())?;
    Ok(next.kernel_basis() == spanned)
}

/// Along a run of equal positive nullities the kernels are all `omega`-shifts
/// of the first kernel, or all `sigma`-shifts of it.
pub fn check_plateau_shift(run: &[ToeplitzSpec]) -> Result<bool> {
    if run.len() < 2 {
        return Err(Error::Precondition(
            "a plateau run needs at least two matrices".into(),
        ));
    }
    for w in run.windows(2) {
        require_extends(&w[0], &w[1])?;
    }
    let kernels: Vec<KernelBasis> = run.iter().map(|s| s.kernel_basis()).collect();
    let d = kernels[0].dim();
    if d == 0 || kernels.iter().any(|k| k.dim() != d) {
        let dims: Vec<usize> = kernels.iter().map(|k| k.dim()).collect();
        return Err(Error::Precondition(format!(
            "nullities {dims:?} are not a constant positive run"
        )));
    }
    let shifted_matches = |shift: fn(&KernelBasis) -> KernelBasis| {
        let mut cur = kernels[0].clone();
        kernels[1..].iter().all(|k| {
            cur = shift(&cur);
            *k == cur
        })
    };
    Ok(shifted_matches(KernelBasis::omega) || shifted_matches(KernelBasis::sigma))
}

/// Strictly inside a descent (`nu_{n-1} > nu_n > 0`) every kernel vector
/// begins and ends with zero.
pub fn check_descent_interior_zeros(spec: &ToeplitzSpec) -> Result<bool> {
    if spec.order() == 0 {
        return Err(Error::Precondition("a 1x1 matrix has no predecessor".into()));
    }
    let prev = spec.truncate()?.nullity();
    let cur = spec.nullity();
    if !(prev > cur && cur > 0) {
        return Err(Error::Precondition(format!(
            "expected a strict descent to positive nullity, found {prev} -> {cur}"
        )));
    }
    Ok(spec
        .kernel_basis()
        .vectors()
        .iter()
        .all(|v| v.first() == Some(0) && v.last() == Some(0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn ns(v: &[usize]) -> NullityString {
        NullityString::from(v.to_vec())
    }

    fn spec(q: u32, a: &[u32], b: &[u32]) -> ToeplitzSpec {
        ToeplitzSpec::new(PrimeField::new(q).unwrap(), a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn omega_examples() {
        let v = Vector::from(vec![1, 0, 1]);
        assert_eq!(v.shift_omega().entries(), &[1, 0, 1, 0]);
        assert_eq!(Vector::default().shift_omega().entries(), &[0]);
        assert_eq!(v.shift_omega().drop_last().unwrap(), v);
    }

    #[test]
    fn sigma_examples() {
        let v = Vector::from(vec![1, 0, 1]);
        assert_eq!(v.shift_sigma().entries(), &[0, 1, 0, 1]);
        assert_eq!(v.shift_sigma().drop_first().unwrap(), v);
        assert_eq!(v.shift_omega().shift_sigma(), v.shift_sigma().shift_omega());
    }

    #[test]
    fn drop_examples() {
        let v = Vector::from(vec![0, 1, 1]);
        assert_eq!(v.drop_first().unwrap().entries(), &[1, 1]);
        assert_eq!(v.drop_last().unwrap().entries(), &[0, 1]);
        assert!(Vector::from(vec![5]).drop_first().unwrap().is_empty());
        assert!(matches!(Vector::default().drop_first(), Err(Error::Domain(_))));
        assert!(matches!(Vector::default().drop_last(), Err(Error::Domain(_))));
    }

    #[test]
    fn grammar_examples() {
        assert!(validate_nullity_string(&ns(&[0, 1, 2, 2, 1, 0])));
        assert!(!validate_nullity_string(&ns(&[1, 1, 2])));
        assert!(!validate_nullity_string(&ns(&[1, 2, 1, 1])));
        assert!(!validate_nullity_string(&ns(&[2])));
        assert!(!validate_nullity_string(&ns(&[0, 2])));
        assert!(validate_nullity_string(&ns(&[])));
        assert_eq!(ns(&[1, 2, 4]).first_violation().unwrap().0, 2);
        for s in [
            &[0, 1, 2, 2, 1, 0][..],
            &[1, 1, 2],
            &[1, 2, 1, 1],
            &[0, 0, 1, 0, 0, 1, 1, 1],
        ] {
            assert_eq!(
                validate_nullity_string(&ns(s)),
                is_block_concatenation_prefix(&ns(s)),
                "{s:?}"
            );
        }
    }

    #[test]
    fn parse_and_display() {
        let s: NullityString = "1, 2,1,0".parse().unwrap();
        assert_eq!(s.values(), &[1, 2, 1, 0]);
        assert_eq!(s.to_string(), "1,2,1,0");
        assert!("1,x".parse::<NullityString>().is_err());
    }

    #[test]
    fn single_generator_ends_examples() {
        let a0 = spec(2, &[1], &[]);
        let a1 = spec(2, &[1, 1], &[1]);
        assert!(check_single_generator_ends(&a0, &a1).unwrap());

        // [[0,1],[0,0]] has kernel generator [1,0]: the ends test itself is not vacuous,
        // but the pair (nullities 1,1) is outside the hypotheses.
        let nilpotent = spec(2, &[0, 1], &[0]);
        assert!(!generator_has_nonzero_ends(&nilpotent.kernel_basis()));
        let err = check_single_generator_ends(&spec(2, &[0], &[]), &nilpotent).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn ascent_span_on_zero_matrices() {
        let f = PrimeField::new(2).unwrap();
        for n in 1..6 {
            let prev = ToeplitzSpec::zero(f, n - 1);
            let next = ToeplitzSpec::zero(f, n);
            assert!(check_ascent_span(&prev, &next).unwrap());
        }
    }

    #[test]
    fn predicates_reject_non_embedded_pairs() {
        let err = check_single_generator_ends(&spec(2, &[0], &[]), &spec(2, &[1, 1], &[1]));
        assert!(matches!(err, Err(Error::Precondition(_))));
        let err = check_plateau_shift(&[spec(2, &[0], &[])]);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn descent_guard_rejects_plateau() {
        // nullity string 1,1 is a plateau, not a descent
        let plateau = spec(2, &[0, 1], &[0]);
        assert_eq!(plateau.nullity_string().values(), &[1, 1]);
        assert!(matches!(
            check_descent_interior_zeros(&plateau),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn plateau_shift_small() {
        let run = [spec(2, &[0], &[]), spec(2, &[0, 1], &[0])];
        assert!(check_plateau_shift(&run).unwrap());
    }
}
