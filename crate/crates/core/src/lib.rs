//! Exact computational toolkit for uniform spectral gaps of congruence
//! covers: finite groups of Lie type over residue rings, Lie-algebra
//! centralizers and the Killing form, coadjoint-orbit dimension bounds,
//! hyperbolic lattice-point counting, and spherical-function decay.

pub mod acceptance;
pub mod groupscheme;
pub mod hypcount;
pub mod liealg;
pub mod rational;
pub mod repbound;
pub mod ringalg;
pub mod spectral;

pub use groupscheme::{
    CongruenceLevel, FamilyKind, GroupContext, GroupElement, GroupError, GroupFamily,
};
pub use liealg::{AlgebraBasis, AlgebraElement, CentralizerReport, JordanData, LieError, ScanReport};
pub use rational::Rat;
pub use repbound::{CharacterLabel, GapConstants, OrbitResult, RepError};
pub use ringalg::{Elt, Mat, Ring, RingError, RingKind};
pub use spectral::{GapReport, SParam, SpectralError, SpectralPoint};

#[cfg(test)]
mod concurrency_contract {
    use super::*;

    // everything is immutable after construction; parallel callers need no
    // synchronization
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_and_sync() {
        assert_send_sync::<Ring>();
        assert_send_sync::<Elt>();
        assert_send_sync::<Mat>();
        assert_send_sync::<GroupFamily>();
        assert_send_sync::<GroupContext>();
        assert_send_sync::<GroupElement>();
        assert_send_sync::<CongruenceLevel>();
        assert_send_sync::<AlgebraBasis>();
        assert_send_sync::<JordanData>();
        assert_send_sync::<GapConstants>();
        assert_send_sync::<SpectralPoint>();
        assert_send_sync::<Rat>();
    }
}
