pub mod arith;
pub mod field;
pub mod fm;
pub mod matrix;
pub mod par;
pub mod poly;
pub mod spectral;
pub mod fan;
pub mod conic;
pub mod euler;
pub mod charcycle;
pub mod lefschetz;
pub mod fixtures;
pub mod suite;
