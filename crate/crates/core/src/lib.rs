pub mod cli;
pub mod cyclo;
pub mod hopf;
pub mod linalg;
pub mod greenring;
pub mod modcat;
pub mod verify;
