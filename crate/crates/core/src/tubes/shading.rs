use crate::error::{Error, Result};

/// Per-tube sets `Y(T)`: sorted disjoint axis intervals `[a, b] ⊂ [0, length]`
/// measured from one end of the tube, full cross-section.
#[derive(Debug, Clone, PartialEq)]
pub struct Shading {
    intervals: Vec<Vec<(f64, f64)>>,
    lengths: Vec<f64>,
}

impl Shading {
    pub fn new(intervals: Vec<Vec<(f64, f64)>>, lengths: Vec<f64>) -> Result<Shading> {
        if intervals.len() != lengths.len() {
            return Err(Error::DimensionMismatch {
                expected: lengths.len(),
                got: intervals.len(),
            });
        }
        for (iv, &len) in intervals.iter().zip(&lengths) {
            let mut last = 0.0f64;
            for (k, &(a, b)) in iv.iter().enumerate() {
                if !(a >= 0.0 && a <= b && b <= len * (1.0 + 1e-12)) || (k > 0 && a < last) {
                    return Err(Error::InvalidParameter(format!(
                        "shading interval [{a}, {b}] out of order or outside [0, {len}]"
                    )));
                }
                last = b;
            }
        }
        Ok(Shading { intervals, lengths })
    }

    /// Every tube fully shaded.
    pub fn full(lengths: &[f64]) -> Shading {
        Shading {
            intervals: lengths.iter().map(|&l| vec![(0.0, l)]).collect(),
            lengths: lengths.to_vec(),
        }
    }

    /// `pieces` equal intervals spread evenly along each tube, covering
    /// fraction `lambda`; `offset ∈ [0,1)` shifts them along the free gap.
    pub fn regular(lengths: &[f64], lambda: f64, pieces: usize, offset: f64) -> Result<Shading> {
        if !(lambda > 0.0 && lambda <= 1.0) || pieces == 0 {
            return Err(Error::InvalidParameter(format!("shading density {lambda} with {pieces} pieces")));
        }
        let intervals = lengths
            .iter()
            .map(|&l| {
                let cell = l / pieces as f64;
                let on = cell * lambda;
                let shift = (cell - on) * offset.clamp(0.0, 1.0);
                (0..pieces)
                    .map(|k| {
                        let a = k as f64 * cell + shift;
                        (a, (a + on).min(l))
                    })
                    .collect()
            })
            .collect();
        Shading::new(intervals, lengths.to_vec())
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self, i: usize) -> &[(f64, f64)] {
        &self.intervals[i]
    }

    /// `|Y(T)| / |T|` for tube `i`.
    pub fn density(&self, i: usize) -> f64 {
        self.intervals[i].iter().map(|(a, b)| b - a).sum::<f64>() / self.lengths[i]
    }

    /// Smallest density over all tubes.
    pub fn min_density(&self) -> f64 {
        (0..self.len()).map(|i| self.density(i)).fold(1.0, f64::min)
    }
}
