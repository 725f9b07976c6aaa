pub mod exactmat;
pub mod graph;
pub mod homology;
pub mod prym;
mod report;
pub mod segre;
pub mod unimod;

pub use exactmat::{IntMatrix, MatrixError, RationalMatrix};
pub use graph::{CochainVector, GraphError, GraphInvolution, MultiGraph};
pub use homology::{cycle_basis, CycleBasis, HomologyError};
pub use unimod::{e5, SystemError, UnimodularSystem};
pub use prym::{HalfLattice, MultiplierVector, PrymError, VologodskyWitness};
pub use segre::{SegreFixture, TheoremReport};
