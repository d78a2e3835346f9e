//! Positivity, lazily chosen spectrum points, ε-nets and the norm equality.

mod net;
mod point;
mod pos;

pub use net::{epsilon_net, pseudo_dist, stone_yosida_check, SpectrumNet, StoneYosida};
pub use point::{point_new, Representation};
pub use pos::{pos_or_below, sup_approx_generic, PosOutcome};
