pub mod fd;
pub mod fit;
pub mod interp;
pub mod quad;
