use alloc::vec;
use alloc::vec::Vec;

/// Row-major image grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

/// Per-pixel planar depth in meters.
pub type DepthMap = Grid<f64>;
/// Per-pixel class id.
pub type SemanticImage = Grid<u8>;

impl<T: Copy> Grid<T> {
    pub fn new(width: usize, height: usize, fill: T) -> Self {
        Grid {
            width,
            height,
            data: vec![fill; width * height],
        }
    }

    /// Panics if `data.len() != width * height`.
    pub fn from_vec(width: usize, height: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), width * height, "grid data length");
        Grid { width, height, data }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: T) {
        self.data[row * self.width + col] = v;
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.width..(row + 1) * self.width]
    }

    /// Central `width × height` window.
    pub fn crop_center(&self, width: usize, height: usize) -> Grid<T> {
        let x0 = (self.width - width) / 2;
        let y0 = (self.height - height) / 2;
        let mut data = Vec::with_capacity(width * height);
        for r in y0..y0 + height {
            data.extend_from_slice(&self.row(r)[x0..x0 + width]);
        }
        Grid { width, height, data }
    }
}
