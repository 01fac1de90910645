pub mod arith;
pub mod component;
pub mod cone;
pub mod error;
pub mod grassmann;
pub mod hm;
pub mod lp;
pub mod matrix;
pub mod quiver;
pub mod rep;
pub mod toric;

pub use error::{Error, Result};

// The guide's code blocks run as doctests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/stability.md")]
    mod stability {}
    #[doc = include_str!("../../../book/src/toric.md")]
    mod toric {}
    #[doc = include_str!("../../../book/src/quivers.md")]
    mod quivers {}
    #[doc = include_str!("../../../book/src/grassmann.md")]
    mod grassmann {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
