pub mod anomalous;
pub mod bipoly;
pub mod buium;
pub mod certify;
pub mod coleman;
pub mod curve;
pub mod error;
pub mod fmt;
pub mod fp;
pub mod fq;
pub mod galois_ring;
pub mod hunt;
pub mod implicit;
pub mod linalg;
pub mod modpoly;
pub mod newton;
pub mod numfield;
pub mod num_util;
pub mod padic;
pub mod pipeline;
pub mod scalar;
pub mod spec;
pub mod upoly;
pub mod zpoly;
