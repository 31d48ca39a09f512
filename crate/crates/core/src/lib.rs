pub mod dsu;
pub mod perm;
pub mod triangulation;
pub mod normal;
pub mod enumeration;
pub mod par;
pub mod topology;
pub mod families;
pub mod census;
pub mod verify;
pub mod cli;
