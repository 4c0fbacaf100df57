pub mod arith;
pub mod cli;
pub mod invariants;
pub mod kodaira_group;
pub mod orbifold;
pub mod qed_engine;
pub mod quaternion;
