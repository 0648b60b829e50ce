use thiserror::Error;

use crate::zposet::Element;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid perversity: {0}")]
    InvalidPerversity(String),

    #[error("invalid upper set: {0}")]
    InvalidUpperSet(String),

    #[error("map is not monotone: {0} <= {1} but images are not ordered accordingly")]
    NotMonotone(Element, Element),

    #[error("slicing is not compatible: {phi} <= {psi}, f({phi}) > f({psi}) and Hom(D_{phi}, D_{psi}[{shift}]) does not vanish")]
    Incompatible { phi: Element, psi: Element, shift: i64 },

    #[error("swap blocked at position {position}: Hom(D_{upper}, D_{lower}[1]) does not vanish")]
    SwapBlocked { position: usize, upper: Element, lower: Element },

    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
