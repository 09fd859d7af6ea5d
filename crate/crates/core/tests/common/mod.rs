#![allow(dead_code)]

use std::path::Path;

use seamcarve_core::raster::save_mask;
use seamcarve_core::{save_image, BinaryMask, RasterImage};

/// Textured background with a flat-colored object where `object` is true.
pub fn scene(w: usize, h: usize, object: impl Fn(usize, usize) -> bool) -> (RasterImage, BinaryMask) {
    let img = RasterImage::from_fn(w, h, |r, c| {
        if object(r, c) {
            [220, 40, 40]
        } else {
            let v = ((r * 31 + c * 17) % 97) as u8;
            [v, v.wrapping_mul(3), 255 - v]
        }
    })
    .unwrap();
    let mask = BinaryMask::from_fn(w, h, object).unwrap();
    (img, mask)
}

pub fn write_pair(dir: &Path, id: &str, img: &RasterImage, mask: &BinaryMask) {
    save_image(img, dir.join(format!("{id}.jpg"))).unwrap();
    save_mask(mask, dir.join(format!("{id}.png"))).unwrap();
}

/// A small mixed dataset: landscape, portrait and square entries.
pub fn write_fixture(dir: &Path) {
    let (img, mask) = scene(10, 6, |r, c| (3..7).contains(&c) && (1..5).contains(&r));
    write_pair(dir, "a_landscape", &img, &mask);
    let (img, mask) = scene(7, 12, |r, c| (4..9).contains(&r) && (1..6).contains(&c));
    write_pair(dir, "b_portrait", &img, &mask);
    let (img, mask) = scene(8, 8, |r, c| (2..6).contains(&r) && (2..6).contains(&c));
    write_pair(dir, "c_square", &img, &mask);
    let (img, mask) = scene(16, 9, |r, c| {
        let (dr, dc) = (r as f64 - 4.0, c as f64 - 8.0);
        dr * dr / 9.0 + dc * dc / 25.0 <= 1.0
    });
    write_pair(dir, "d_ellipse", &img, &mask);
}
