//! Outcomes of the on-window verifiers.

use std::fmt;

/// The result of checking an identity on every on-window instance.
///
/// `checked` counts instances that were fully inside the available data,
/// `skipped` those where some partial result or required block left the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds { checked: usize, skipped: usize },
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Fails(w) => Some(w),
            Verdict::Holds { .. } => None,
        }
    }

    pub fn into_witness(self) -> Option<W> {
        match self {
            Verdict::Fails(w) => Some(w),
            Verdict::Holds { .. } => None,
        }
    }
}

impl<W: fmt::Display> fmt::Display for Verdict<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds { checked, skipped } => {
                write!(f, "holds ({checked} checked, {skipped} skipped)")
            }
            Verdict::Fails(w) => write!(f, "fails at {w}"),
        }
    }
}

/// Running counters used while sweeping instances.
#[derive(Default, Clone, Copy, Debug)]
pub(crate) struct Tally {
    pub checked: usize,
    pub skipped: usize,
}

impl Tally {
    pub fn finish<W>(self) -> Verdict<W> {
        Verdict::Holds { checked: self.checked, skipped: self.skipped }
    }
}
