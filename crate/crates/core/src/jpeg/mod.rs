//! Grayscale JPEG-style pipeline emitting nucleotide streams.

pub mod categorize;
pub mod codec;
mod image;
pub mod pairs;
pub mod transform;

pub use codec::{
    ac_statistics, decode_coefficients, decode_image, encode_image, CodecConfig, EncodedImage, ImageHeader, Manifest,
    VlcKind,
};
pub use image::GrayImage;
pub use transform::{forward_transform, inverse_transform, BlockSpectrum};
