pub mod khovanov;
