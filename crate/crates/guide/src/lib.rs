//! Compiles the book's code listings as doctests, one module per chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/fusion-data.md")]
pub mod fusion_data {}
#[doc = include_str!("../../../book/src/s-matrix.md")]
pub mod s_matrix {}
#[doc = include_str!("../../../book/src/f-and-r.md")]
pub mod f_and_r {}
#[doc = include_str!("../../../book/src/moore-seiberg.md")]
pub mod moore_seiberg {}
#[doc = include_str!("../../../book/src/characters.md")]
pub mod characters {}
#[doc = include_str!("../../../book/src/file-format.md")]
pub mod file_format {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
