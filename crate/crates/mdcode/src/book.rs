// The guide chapters double as doc-tests so their code blocks stay honest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/bit-strings.md")]
pub mod bit_strings {}

#[doc = include_str!("../../../book/src/multi-delimiter-codes.md")]
pub mod multi_delimiter_codes {}

#[doc = include_str!("../../../book/src/encoding-integers.md")]
pub mod encoding_integers {}

#[doc = include_str!("../../../book/src/fibonacci-codes.md")]
pub mod fibonacci_codes {}

#[doc = include_str!("../../../book/src/lower23.md")]
pub mod lower23 {}

#[doc = include_str!("../../../book/src/density.md")]
pub mod density {}

#[doc = include_str!("../../../book/src/byte-decoding.md")]
pub mod byte_decoding {}

#[doc = include_str!("../../../book/src/text-compression.md")]
pub mod text_compression {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
