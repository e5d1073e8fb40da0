pub mod classical;
pub mod cli;
pub mod error;
pub mod evenaction;
pub mod gzbasis;
pub mod induced;
pub mod lincomb;
pub mod matrix;
pub mod qarith;
pub mod relations;
pub mod typicality;
