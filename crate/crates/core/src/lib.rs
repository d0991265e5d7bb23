pub mod bigcell;
pub mod chevalley;
pub mod lattice;
pub mod polyhedral;
pub mod root_datum;
pub mod report;
pub mod toric;
pub mod verify;
