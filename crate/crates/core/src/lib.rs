//! Symbolic differential geometry for soliton and hypersurface computations.

pub mod symbolic;

pub use symbolic::{parse_expression, DomainConstraint, Domain, Expr, Symbol, Verdict, ZeroCertificate, ZeroConfig};
pub mod riemann;
pub mod certify;
pub mod soliton;
pub mod hypersurface;
#[cfg(feature = "oracle")]
pub mod oracle;
