//! Height profiles of stack transitions: peaks and bases, level widths, and
//! the search for an ideal subinterval of bounded width.

use std::fmt;

use crate::error::{Error, Result};
use crate::word::Interval;

/// Stack heights indexed by intercell boundary, starting at `first`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightProfile {
    first: isize,
    heights: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FeatureKind {
    Peak,
    FlatPeak,
    Base,
    FlatBase,
}

impl FeatureKind {
    pub fn is_peak(self) -> bool {
        matches!(self, FeatureKind::Peak | FeatureKind::FlatPeak)
    }

    pub fn is_base(self) -> bool {
        matches!(self, FeatureKind::Base | FeatureKind::FlatBase)
    }
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureKind::Peak => "peak",
            FeatureKind::FlatPeak => "flat_peak",
            FeatureKind::Base => "base",
            FeatureKind::FlatBase => "flat_base",
        })
    }
}

/// A local extremum. `lo == hi` for a (sharp) peak or base; a flat feature
/// spans the constant run `lo..=hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Feature {
    pub kind: FeatureKind,
    pub lo: isize,
    pub hi: isize,
    pub height: usize,
}

/// Which branch of the search produced an [`IdealInterval`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// A flat top at least `j0` wide: its first `j0` cells.
    FlatTop,
    /// The narrowest level interval just reaching width `j0`.
    LevelMinimal,
    /// A width-`j0` interval between the narrowest and widest ones of a level.
    LevelBetween,
    /// The narrowest interval one level further down.
    LevelBelow,
    /// The widest interval at the height of the lowest base.
    LowestBase,
    /// A level interval enclosing a base region that is narrower than `j0`.
    Enclosing,
    /// One side of the lowest base, already short enough.
    BaseSide,
    /// Splitting at level points; used when no other branch applies.
    Fallback,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::FlatTop => "flat_top",
            Route::LevelMinimal => "level_minimal",
            Route::LevelBetween => "level_between",
            Route::LevelBelow => "level_below",
            Route::LowestBase => "lowest_base",
            Route::Enclosing => "enclosing",
            Route::BaseSide => "base_side",
            Route::Fallback => "fallback",
        })
    }
}

/// A subinterval with equal endpoint heights and nothing lower inside.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdealInterval {
    pub interval: Interval,
    pub height: usize,
    pub route: Route,
    /// Number of descents into a side of a base before the result was found.
    pub depth: usize,
}

fn interval(lo: isize, hi: isize) -> Interval {
    Interval::new(lo, hi).expect("lo <= hi by construction")
}

fn width(lo: isize, hi: isize) -> usize {
    (hi - lo) as usize
}

impl HeightProfile {
    pub fn new(first: isize, heights: Vec<usize>) -> Result<HeightProfile> {
        if heights.is_empty() {
            return Err(Error::InvalidInterval("empty height profile".into()));
        }
        Ok(HeightProfile { first, heights })
    }

    /// A profile over boundaries `-1, 0, 1, ...`.
    pub fn from_heights(heights: Vec<usize>) -> Result<HeightProfile> {
        HeightProfile::new(-1, heights)
    }

    pub fn first(&self) -> isize {
        self.first
    }

    pub fn last(&self) -> isize {
        self.first + self.heights.len() as isize - 1
    }

    pub fn full(&self) -> Interval {
        interval(self.first, self.last())
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    /// Height at boundary `b`. Panics outside the profile.
    pub fn height(&self, b: isize) -> usize {
        self.heights[(b - self.first) as usize]
    }

    fn check(&self, i: &Interval) -> Result<()> {
        if i.lo() < self.first || i.hi() > self.last() {
            return Err(Error::InvalidInterval(format!(
                "{i} is not inside [{}, {}]",
                self.first,
                self.last()
            )));
        }
        Ok(())
    }

    /// Equal heights at both ends and no lower height in between.
    pub fn is_ideal(&self, i: &Interval) -> bool {
        if self.check(i).is_err() {
            return false;
        }
        let level = self.height(i.lo());
        self.height(i.hi()) == level && (i.lo()..=i.hi()).all(|b| self.height(b) >= level)
    }

    /// Peaks, flat peaks, bases and flat bases inside `i`, left to right. A
    /// feature needs both neighbours inside `i`.
    pub fn features(&self, i: &Interval) -> Result<Vec<Feature>> {
        self.check(i)?;
        let mut out = Vec::new();
        let mut a = i.lo();
        while a <= i.hi() {
            let h = self.height(a);
            let mut b = a;
            while b < i.hi() && self.height(b + 1) == h {
                b += 1;
            }
            if a > i.lo() && b < i.hi() {
                let (left, right) = (self.height(a - 1), self.height(b + 1));
                let kind = match (left < h && right < h, left > h && right > h, a == b) {
                    (true, _, true) => Some(FeatureKind::Peak),
                    (true, _, false) => Some(FeatureKind::FlatPeak),
                    (_, true, true) => Some(FeatureKind::Base),
                    (_, true, false) => Some(FeatureKind::FlatBase),
                    _ => None,
                };
                if let Some(kind) = kind {
                    out.push(Feature {
                        kind,
                        lo: a,
                        hi: b,
                        height: h,
                    });
                }
            }
            a = b + 1;
        }
        Ok(out)
    }

    /// Every `[a, b] ⊆ i`, `a ≤ b`, with height `level` at both ends and no
    /// lower height inside, ordered by `a` then `b`.
    pub fn level_intervals(&self, i: &Interval, level: usize) -> Result<Vec<(isize, isize)>> {
        self.check(i)?;
        let mut out = Vec::new();
        for a in i.lo()..=i.hi() {
            if self.height(a) != level {
                continue;
            }
            for b in a..=i.hi() {
                let h = self.height(b);
                if h < level {
                    break;
                }
                if h == level {
                    out.push((a, b));
                }
            }
        }
        Ok(out)
    }

    /// Least width of a level-`level` interval with distinct endpoints.
    pub fn minwid(&self, i: &Interval, level: usize) -> Result<Option<usize>> {
        Ok(self
            .level_intervals(i, level)?
            .into_iter()
            .filter(|(a, b)| a < b)
            .map(|(a, b)| width(a, b))
            .min())
    }

    /// Greatest width of a level-`level` interval (a single boundary counts,
    /// with width 0).
    pub fn maxwid(&self, i: &Interval, level: usize) -> Result<Option<usize>> {
        Ok(self
            .level_intervals(i, level)?
            .into_iter()
            .map(|(a, b)| width(a, b))
            .max())
    }

    fn narrowest(&self, i: &Interval, level: usize) -> Option<(isize, isize)> {
        self.level_intervals(i, level)
            .ok()?
            .into_iter()
            .filter(|(a, b)| a < b)
            .min_by_key(|&(a, b)| (width(a, b), a))
    }

    fn widest(&self, i: &Interval, level: usize) -> Option<(isize, isize)> {
        self.level_intervals(i, level)
            .ok()?
            .into_iter()
            .max_by_key(|&(a, b)| (width(a, b), -a))
    }

    /// Finds `I' ⊆ i` and a height `ℓ` such that both ends of `I'` have
    /// height `ℓ`, nothing inside is lower, and `j0 ≤ |I'| ≤ k`.
    ///
    /// Requires `i` ideal, `|i| > k`, `j0 ≥ 2`, `2 j0 ≤ k ≤ n` (with `n` the
    /// input length, i.e. the profile spans `-1..=n+1`) and steps of at most
    /// one between neighbouring boundaries.
    ///
    /// The search follows the induction on the number of peaks: with one
    /// peak it walks down the levels around it until the width reaches `j0`;
    /// with several it takes the lowest (leftmost) base, uses its widest
    /// level interval if that fits, or otherwise descends into the wider
    /// side. Every candidate is checked, and if a branch produces nothing
    /// valid (possible when slopes have flat shoulders) the interval is split
    /// at its level points instead.
    pub fn find_ideal_subinterval(
        &self,
        i: &Interval,
        j0: usize,
        k: usize,
    ) -> Result<IdealInterval> {
        self.check(i)?;
        let n = (self.last() - 1).max(0) as usize;
        let fail = |msg: String| Err(Error::PreconditionViolated(msg));
        if j0 < 2 {
            return fail(format!("j0 = {j0} is below 2"));
        }
        if 2 * j0 > k || k > n {
            return fail(format!(
                "need 2*j0 <= k <= n, got j0 = {j0}, k = {k}, n = {n}"
            ));
        }
        if i.width() <= k {
            return fail(format!("interval {i} is not wider than k = {k}"));
        }
        if !self.is_ideal(i) {
            return fail(format!("interval {i} is not ideal"));
        }
        if (i.lo()..i.hi()).any(|b| self.height(b).abs_diff(self.height(b + 1)) > 1) {
            return fail(format!(
                "heights inside {i} change by more than one per step"
            ));
        }
        let found = self.search(i, j0, k, 0);
        debug_assert!(self.satisfies(i, &found, j0, k));
        Ok(found)
    }

    /// True when `r` meets every postcondition relative to the ambient `i`.
    pub fn satisfies(&self, i: &Interval, r: &IdealInterval, j0: usize, k: usize) -> bool {
        let sub = r.interval;
        let w = sub.width();
        i.contains_interval(&sub)
            && self.is_ideal(&sub)
            && self.height(sub.lo()) == r.height
            && (j0..=k).contains(&w)
            && self
                .minwid(i, r.height)
                .ok()
                .flatten()
                .is_some_and(|m| m <= w)
            && self
                .maxwid(i, r.height)
                .ok()
                .flatten()
                .is_some_and(|m| w <= m)
    }

    fn valid(&self, within: &Interval, lo: isize, hi: isize, j0: usize, k: usize) -> bool {
        lo >= within.lo()
            && hi <= within.hi()
            && (j0..=k).contains(&width(lo, hi))
            && self.is_ideal(&interval(lo, hi))
    }

    fn search(&self, i: &Interval, j0: usize, k: usize, depth: usize) -> IdealInterval {
        let features = self.features(i).expect("checked interval");
        let peaks: Vec<&Feature> = features.iter().filter(|f| f.kind.is_peak()).collect();
        let attempt = if peaks.len() <= 1 {
            self.single_peak(i, peaks.first().copied(), j0, k)
                .map(|(lo, hi, level, route)| IdealInterval {
                    interval: interval(lo, hi),
                    height: level,
                    route,
                    depth,
                })
        } else {
            self.several_peaks(i, &features, j0, k, depth)
        };
        match attempt {
            Some(r) if self.valid(i, r.interval.lo(), r.interval.hi(), j0, k) => r,
            _ => self.shrink(i, j0, k, depth),
        }
    }

    fn single_peak(
        &self,
        i: &Interval,
        peak: Option<&Feature>,
        j0: usize,
        k: usize,
    ) -> Option<(isize, isize, usize, Route)> {
        let base_level = self.height(i.lo());
        let Some(peak) = peak else {
            // No peak inside an ideal interval: the whole interval is level.
            return Some((i.lo(), i.lo() + j0 as isize, base_level, Route::FlatTop));
        };
        if peak.kind == FeatureKind::FlatPeak && width(peak.lo, peak.hi) >= j0 {
            return Some((peak.lo, peak.lo + j0 as isize, peak.height, Route::FlatTop));
        }
        let minwid = |level: usize| self.minwid(i, level).ok().flatten().unwrap_or(0);
        let below = (base_level..peak.height)
            .rev()
            .find(|&l| minwid(l + 1) <= j0 && j0 < minwid(l))?;
        let level = below + 1;
        if minwid(level) == j0 {
            let (lo, hi) = self.narrowest(i, level)?;
            return Some((lo, hi, level, Route::LevelMinimal));
        }
        let widest = self.maxwid(i, level).ok().flatten().unwrap_or(0);
        if j0 <= widest {
            let inner = self.narrowest(i, level);
            let outer = self.widest(i, level)?;
            let fits = |&(a, b): &(isize, isize)| {
                width(a, b) == j0
                    && a >= outer.0
                    && b <= outer.1
                    && inner.is_none_or(|(ia, ib)| a <= ia && ib <= b)
            };
            let (lo, hi) = self
                .level_intervals(i, level)
                .ok()?
                .into_iter()
                .find(fits)?;
            return Some((lo, hi, level, Route::LevelBetween));
        }
        let (lo, hi) = self.narrowest(i, below)?;
        (width(lo, hi) <= k).then_some((lo, hi, below, Route::LevelBelow))
    }

    fn several_peaks(
        &self,
        i: &Interval,
        features: &[Feature],
        j0: usize,
        k: usize,
        depth: usize,
    ) -> Option<IdealInterval> {
        let base = features
            .iter()
            .filter(|f| f.kind.is_base())
            .min_by_key(|f| (f.height, f.lo))?;
        let level = base.height;
        let (left, right) = self.level_stretch(i, base.lo, base.hi, level);
        let span = width(left, right);
        let found = |lo: isize, hi: isize, level: usize, route: Route| IdealInterval {
            interval: interval(lo, hi),
            height: level,
            route,
            depth,
        };
        if (j0..=k).contains(&span) {
            return Some(found(left, right, level, Route::LowestBase));
        }
        if span < j0 {
            let base_level = self.height(i.lo());
            for l in (base_level..level).rev() {
                let (near, far) = self.enclosing(i, left, right, l)?;
                if width(near.0, near.1) >= j0 {
                    return (width(near.0, near.1) <= k)
                        .then(|| found(near.0, near.1, l, Route::Enclosing));
                }
                if width(far.0, far.1) >= j0 {
                    let pick = self
                        .level_intervals(i, l)
                        .ok()?
                        .into_iter()
                        .find(|&(a, b)| {
                            width(a, b) == j0
                                && a >= far.0
                                && b <= far.1
                                && a <= near.0
                                && b >= near.1
                        })?;
                    return Some(found(pick.0, pick.1, l, Route::Enclosing));
                }
            }
            return None;
        }
        let split = if base.kind == FeatureKind::Base {
            base.lo
        } else {
            base.hi
        };
        let (a, b) = ((left, split), (split, right));
        let side = if width(b.0, b.1) > width(a.0, a.1) {
            b
        } else {
            a
        };
        if width(side.0, side.1) <= k {
            return Some(found(side.0, side.1, level, Route::BaseSide));
        }
        Some(self.search(&interval(side.0, side.1), j0, k, depth + 1))
    }

    /// The widest stretch around `lo..=hi` with heights `≥ level`, trimmed to
    /// its outermost boundaries of height exactly `level`.
    fn level_stretch(&self, i: &Interval, lo: isize, hi: isize, level: usize) -> (isize, isize) {
        let mut left = lo;
        let mut b = lo;
        while b > i.lo() && self.height(b - 1) >= level {
            b -= 1;
            if self.height(b) == level {
                left = b;
            }
        }
        let mut right = hi;
        let mut b = hi;
        while b < i.hi() && self.height(b + 1) >= level {
            b += 1;
            if self.height(b) == level {
                right = b;
            }
        }
        (left, right)
    }

    /// Nearest and farthest level-`level` boundaries around `lo..=hi` with no
    /// lower height in between, as (narrowest, widest) enclosing intervals.
    fn enclosing(
        &self,
        i: &Interval,
        lo: isize,
        hi: isize,
        level: usize,
    ) -> Option<((isize, isize), (isize, isize))> {
        let scan = |start: isize, step: isize, stop: isize| -> Option<(isize, isize)> {
            let (mut near, mut far) = (None, None);
            let mut b = start;
            while b != stop {
                b += step;
                let h = self.height(b);
                if h < level {
                    break;
                }
                if h == level {
                    near.get_or_insert(b);
                    far = Some(b);
                }
            }
            Some((near?, far?))
        };
        let (left_near, left_far) = scan(lo, -1, i.lo())?;
        let (right_near, right_far) = scan(hi, 1, i.hi())?;
        Some(((left_near, right_near), (left_far, right_far)))
    }

    /// Splits an ideal interval wider than `k` at its level points. A piece
    /// wider than `k` is searched again; a piece of width in `[j0, k]` is
    /// returned; if every piece is narrower than `j0`, consecutive pieces from
    /// the left are merged until the width reaches `j0`, which stays below
    /// `2 j0 ≤ k`. Without inner level points the interval shrinks by one
    /// boundary on each side, one level up.
    fn shrink(&self, i: &Interval, j0: usize, k: usize, depth: usize) -> IdealInterval {
        let level = self.height(i.lo());
        let points: Vec<isize> = (i.lo()..=i.hi())
            .filter(|&b| self.height(b) == level)
            .collect();
        let done = |lo: isize, hi: isize, level: usize| IdealInterval {
            interval: interval(lo, hi),
            height: level,
            route: Route::Fallback,
            depth,
        };
        if points.len() == 2 {
            let inner = interval(i.lo() + 1, i.hi() - 1);
            if inner.width() > k {
                return self.shrink(&inner, j0, k, depth + 1);
            }
            return done(inner.lo(), inner.hi(), level + 1);
        }
        let pieces: Vec<(isize, isize)> = points.windows(2).map(|p| (p[0], p[1])).collect();
        if let Some(&(lo, hi)) = pieces.iter().find(|&&(lo, hi)| width(lo, hi) > k) {
            return self.search(&interval(lo, hi), j0, k, depth + 1);
        }
        if let Some(&(lo, hi)) = pieces
            .iter()
            .find(|&&(lo, hi)| (j0..=k).contains(&width(lo, hi)))
        {
            return done(lo, hi, level);
        }
        let end = points
            .iter()
            .copied()
            .find(|&p| width(i.lo(), p) >= j0)
            .expect("the whole interval is wider than j0");
        done(i.lo(), end, level)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(h: &[usize]) -> HeightProfile {
        HeightProfile::from_heights(h.to_vec()).unwrap()
    }

    #[test]
    fn flat_peak_of_the_anbn_run() {
        let p = profile(&[1, 2, 3, 3, 2, 1, 1]);
        let f = p.features(&p.full()).unwrap();
        assert_eq!(
            f,
            [Feature {
                kind: FeatureKind::FlatPeak,
                lo: 1,
                hi: 2,
                height: 3
            }]
        );
        assert_eq!(p.minwid(&p.full(), 3).unwrap(), Some(1));
        assert_eq!(p.maxwid(&p.full(), 3).unwrap(), Some(1));
        assert_eq!(p.minwid(&p.full(), 2).unwrap(), Some(3));
        assert_eq!(p.maxwid(&p.full(), 2).unwrap(), Some(3));
    }

    #[test]
    fn alternating_heights() {
        let p = profile(&[1, 2, 1, 2, 1]);
        let kinds: Vec<(FeatureKind, isize)> = p
            .features(&p.full())
            .unwrap()
            .iter()
            .map(|f| (f.kind, f.lo))
            .collect();
        assert_eq!(
            kinds,
            [
                (FeatureKind::Peak, 0),
                (FeatureKind::Base, 1),
                (FeatureKind::Peak, 2)
            ]
        );
        assert!(profile(&[1, 2, 3, 4])
            .features(&profile(&[1, 2, 3, 4]).full())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn out_of_range_intervals_are_rejected() {
        let p = profile(&[1, 2, 1]);
        assert!(matches!(
            p.features(&Interval::new(-2, 1).unwrap()),
            Err(Error::InvalidInterval(_))
        ));
        assert!(matches!(
            p.minwid(&Interval::new(0, 3).unwrap(), 1),
            Err(Error::InvalidInterval(_))
        ));
    }

    #[test]
    fn tall_single_peak() {
        // boundaries -1..=11, peak of height 7 at boundary 5
        let p = profile(&[1, 2, 3, 4, 5, 6, 7, 6, 5, 4, 3, 2, 1]);
        let r = p.find_ideal_subinterval(&p.full(), 2, 4).unwrap();
        assert!(p.satisfies(&p.full(), &r, 2, 4), "{r:?}");
        assert!(r.interval.contains(5));
        assert_eq!(r.route, Route::LevelMinimal);
        assert_eq!((r.interval.lo(), r.interval.hi(), r.height), (4, 6, 6));
    }

    #[test]
    fn wide_flat_peak_takes_its_left_part() {
        let p = profile(&[1, 2, 3, 3, 3, 3, 3, 2, 1, 1]);
        let r = p.find_ideal_subinterval(&p.full(), 2, 4).unwrap();
        assert_eq!(
            (r.interval.lo(), r.interval.hi(), r.height, r.route),
            (1, 3, 3, Route::FlatTop)
        );
    }

    #[test]
    fn two_peaks_descend_into_a_side() {
        let p = profile(&[1, 2, 3, 4, 5, 4, 3, 2, 3, 4, 5, 6, 5, 4, 3, 2, 1, 1]);
        let r = p.find_ideal_subinterval(&p.full(), 2, 4).unwrap();
        assert!(p.satisfies(&p.full(), &r, 2, 4), "{r:?}");
    }

    #[test]
    fn preconditions_are_checked() {
        let p = profile(&[1, 2, 3, 4, 3, 2, 1, 1]);
        let full = p.full();
        assert!(matches!(
            p.find_ideal_subinterval(&full, 1, 4),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            p.find_ideal_subinterval(&full, 2, 3),
            Err(Error::PreconditionViolated(_))
        ));
        let jump = profile(&[1, 3, 3, 3, 3, 3, 1, 1]);
        assert!(matches!(
            jump.find_ideal_subinterval(&jump.full(), 2, 4),
            Err(Error::PreconditionViolated(_))
        ));
        let not_ideal = profile(&[2, 1, 2, 3, 2, 1, 2, 2]);
        assert!(matches!(
            not_ideal.find_ideal_subinterval(&not_ideal.full(), 2, 4),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn single_peak_width_law_and_its_limit() {
        let p = profile(&[1, 2, 3, 4, 5, 4, 3, 2, 1]);
        for l in 1..5 {
            let lower = p.minwid(&p.full(), l).unwrap().unwrap();
            let upper = p.maxwid(&p.full(), l + 1).unwrap().unwrap();
            assert_eq!(lower, upper + 2);
        }
        // A flat shoulder on the slope breaks the relation.
        let p = profile(&[1, 2, 2, 3, 2, 1]);
        assert_eq!(p.minwid(&p.full(), 2).unwrap(), Some(1));
        assert_eq!(p.maxwid(&p.full(), 3).unwrap(), Some(0));
    }
}
