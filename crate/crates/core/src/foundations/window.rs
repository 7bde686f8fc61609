//! Finite windows of degrees or indices.

use std::fmt;

use super::group::{Elem, GradingGroup};
use crate::error::Error;

/// A closed integer interval, or the whole of a finite group.
///
/// Used both for degree windows of graded algebras (which must contain the
/// identity) and for index windows of G-algebras (which need not).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Window {
    Interval { lo: i64, hi: i64 },
    Whole,
}

impl Window {
    pub fn interval(lo: i64, hi: i64) -> Result<Self, Error> {
        if lo > hi {
            return Err(Error::InvalidWindow(format!("{lo}..{hi} is empty")));
        }
        Ok(Window::Interval { lo, hi })
    }

    /// A window of degrees; must contain the identity degree `0`.
    pub fn degrees(lo: i64, hi: i64) -> Result<Self, Error> {
        if !(lo <= 0 && 0 <= hi) {
            return Err(Error::InvalidWindow(format!("degree window {lo}..{hi} must contain 0")));
        }
        Window::interval(lo, hi)
    }

    /// The symmetric interval `-w..w`.
    pub fn symmetric(w: i64) -> Self {
        Window::Interval { lo: -w.abs(), hi: w.abs() }
    }

    pub fn contains(&self, g: Elem) -> bool {
        match self {
            Window::Interval { lo, hi } => *lo <= g.0 && g.0 <= *hi,
            Window::Whole => true,
        }
    }

    /// Width `hi - lo` of an interval; `None` for a whole finite group.
    pub fn span(&self) -> Option<i64> {
        match self {
            Window::Interval { lo, hi } => Some(hi - lo),
            Window::Whole => None,
        }
    }

    /// Elements in increasing order.
    pub fn elements(&self, group: &GradingGroup) -> Vec<Elem> {
        match self {
            Window::Interval { lo, hi } => (*lo..=*hi).map(Elem).collect(),
            Window::Whole => group.elements().unwrap_or_default(),
        }
    }

    /// Interval windows go with the integers, whole windows with finite groups.
    pub fn fits(&self, group: &GradingGroup) -> bool {
        matches!(
            (self, group),
            (Window::Interval { .. }, GradingGroup::Integers) | (Window::Whole, GradingGroup::Finite(_))
        )
    }

    pub fn intersect(&self, other: &Window) -> Option<Window> {
        match (self, other) {
            (Window::Whole, w) | (w, Window::Whole) => Some(*w),
            (Window::Interval { lo: a, hi: b }, Window::Interval { lo: c, hi: d }) => {
                let (lo, hi) = ((*a).max(*c), (*b).min(*d));
                (lo <= hi).then_some(Window::Interval { lo, hi })
            }
        }
    }

    /// The window of group elements relating two indices of `self`:
    /// `-span..span` for an interval, the whole group otherwise.
    pub fn difference_window(&self) -> Window {
        match self {
            Window::Interval { lo, hi } => Window::symmetric(hi - lo),
            Window::Whole => Window::Whole,
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::Interval { lo, hi } => write!(f, "{lo}..{hi}"),
            Window::Whole => write!(f, "all"),
        }
    }
}

impl std::str::FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            return Ok(Window::Whole);
        }
        let bad = || Error::InvalidWindow(format!("`{s}` is not of the form lo..hi"));
        let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
        let lo = lo.parse::<i64>().map_err(|_| bad())?;
        let hi = hi.parse::<i64>().map_err(|_| bad())?;
        Window::interval(lo, hi)
    }
}
