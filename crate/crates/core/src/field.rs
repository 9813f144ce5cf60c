//! Square scalar grids over `[-1, 1]^2`.

use thiserror::Error;

use crate::vec2::Vec2;

/// Default grid side.
pub const DEFAULT_RESOLUTION: usize = 256;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("field shapes differ: {0} vs {1}")]
    ShapeMismatch(usize, usize),
    #[error("mask has no pixels inside the domain")]
    EmptyMask,
}

/// Row-major `res x res` grid of `f32`. Row `i` sits at height
/// `y = -1 + (i + 0.5) * 2 / res`, column `j` at `x = -1 + (j + 0.5) * 2 / res`.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    res: usize,
    data: Vec<f32>,
}

impl Field {
    pub fn zeros(res: usize) -> Self {
        Field { res, data: vec![0.0; res * res] }
    }

    pub fn from_vec(res: usize, data: Vec<f32>) -> Self {
        assert_eq!(data.len(), res * res, "field data length");
        Field { res, data }
    }

    pub fn from_fn(res: usize, mut f: impl FnMut(usize, usize) -> f32) -> Self {
        let mut data = Vec::with_capacity(res * res);
        for i in 0..res {
            for j in 0..res {
                data.push(f(i, j));
            }
        }
        Field { res, data }
    }

    pub fn res(&self) -> usize {
        self.res
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f32> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f32 {
        self.data[i * self.res + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f32) {
        self.data[i * self.res + j] = v;
    }

    /// Whether a mask field marks pixel `k` as inside.
    #[inline]
    pub fn inside(&self, k: usize) -> bool {
        self.data[k] != 0.0
    }

    pub fn count_inside(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0.0).count()
    }

    pub fn check_shape(&self, other: &Field) -> Result<(), FieldError> {
        if self.res == other.res {
            Ok(())
        } else {
            Err(FieldError::ShapeMismatch(self.res, other.res))
        }
    }

    /// Zeroes every pixel outside `mask`.
    pub fn masked(mut self, mask: &Field) -> Field {
        for (v, m) in self.data.iter_mut().zip(&mask.data) {
            if *m == 0.0 {
                *v = 0.0;
            }
        }
        self
    }
}

/// Physical coordinates of pixel `(i, j)`.
#[inline]
pub fn pixel_center(res: usize, i: usize, j: usize) -> Vec2 {
    let h = 2.0 / res as f64;
    Vec2::new(-1.0 + (j as f64 + 0.5) * h, -1.0 + (i as f64 + 0.5) * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pixel_centers_at_256() {
        let p = pixel_center(256, 0, 0);
        assert_eq!(p, Vec2::new(-1.0 + 0.5 / 128.0, -1.0 + 0.5 / 128.0));
        let q = pixel_center(256, 10, 255);
        assert_eq!(q.x, -1.0 + 255.5 / 128.0);
        assert_eq!(q.y, -1.0 + 10.5 / 128.0);
    }

    #[test]
    fn masking_zeroes_outside() {
        let f = Field::from_fn(4, |i, j| (i * 4 + j) as f32 + 1.0);
        let m = Field::from_fn(4, |i, _| if i < 2 { 1.0 } else { 0.0 });
        let g = f.masked(&m);
        assert_eq!(g.get(1, 3), 8.0);
        assert_eq!(g.get(2, 0), 0.0);
        assert_eq!(m.count_inside(), 8);
    }
}
