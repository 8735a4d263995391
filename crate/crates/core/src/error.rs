use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong in the numerical core.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain where the quantity is defined.
    Domain { what: &'static str, value: f64 },
    /// A postselection angle of zero makes the weak value diverge.
    SingularPostselection,
    /// Monochromatic sources have no grid representation.
    MonochromaticGrid,
    /// The P pointer does not move for a source with zero spectral width.
    NoPointerShift,
    /// Precision is undefined for a zero shift rate.
    ZeroRate,
    /// Inverting a pointer shift needs a nonzero interaction strength.
    ZeroInteraction,
    /// A signal evaluation returned NaN or an infinity.
    NonFinite { what: &'static str },
    /// Grid refinement stopped at the size cap without meeting the tolerance.
    NotConverged { intervals: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::SingularPostselection => {
                write!(f, "postselection angle 0 makes the weak value singular")
            }
            Error::MonochromaticGrid => {
                write!(f, "monochromatic profiles use closed forms, not grids")
            }
            Error::NoPointerShift => write!(f, "no P-pointer shift for zero spectral width"),
            Error::ZeroRate => write!(f, "shift rate is zero; precision undefined"),
            Error::ZeroInteraction => write!(f, "interaction strength k must be nonzero"),
            Error::NonFinite { what } => write!(f, "non-finite value in {what}"),
            Error::NotConverged { intervals } => {
                write!(f, "quadrature did not converge at {intervals} intervals")
            }
        }
    }
}

impl core::error::Error for Error {}
